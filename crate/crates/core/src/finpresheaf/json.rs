//! JSON documents for finite categories, monoidal structures, presheaves and functors.

use super::{
    fail, thin_table, Arrow, FiniteCategory, FiniteFunctor, FiniteMonoidalCategory, Presheaf,
    PresheafError, Res,
};
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    name: String,
    dom: String,
    cod: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidalDoc {
    unit: String,
    tensor: Vec<[String; 3]>,
    #[serde(default)]
    tensor_arrows: Vec<[String; 3]>,
    alpha: Option<Vec<[String; 4]>>,
    lambda: Option<Vec<[String; 2]>>,
    rho: Option<Vec<[String; 2]>>,
    sigma: Option<Vec<[String; 3]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresheafDoc {
    name: String,
    #[serde(default)]
    sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    name: String,
    objects: Vec<String>,
    #[serde(default)]
    arrows: Vec<ArrowDoc>,
    #[serde(default)]
    compose: Vec<[String; 3]>,
    #[serde(default)]
    thin: bool,
    monoidal: Option<MonoidalDoc>,
    #[serde(default)]
    presheaves: Vec<PresheafDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDoc {
    name: String,
    source: String,
    target: String,
    objects: BTreeMap<String, String>,
    #[serde(default)]
    arrows: BTreeMap<String, String>,
}

/// A presheaf with element labels as loaded from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPresheaf {
    pub name: String,
    pub labels: Vec<Vec<String>>,
    pub presheaf: Presheaf,
}

/// A loaded category with its optional monoidal structure and presheaves.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub category: FiniteCategory,
    pub monoidal: Option<FiniteMonoidalCategory>,
    pub presheaves: Vec<NamedPresheaf>,
}

impl Example {
    pub fn presheaf(&self, name: &str) -> Option<&Presheaf> {
        self.presheaves
            .iter()
            .find(|p| p.name == name)
            .map(|p| &p.presheaf)
    }
}

fn load_err<T>(msg: String) -> Res<T> {
    fail(PresheafError::Load, msg)
}

fn lookup(names: &[String], key: &str, what: &str) -> Res<usize> {
    match names.iter().position(|n| n == key) {
        Some(i) => Ok(i),
        None => load_err(format!("unknown {what} '{key}'")),
    }
}

fn unique<T: Copy + PartialEq>(slot: &mut Option<T>, v: T, what: &str) -> Res<()> {
    match slot {
        Some(w) if *w != v => load_err(format!("conflicting entries for {what}")),
        _ => {
            *slot = Some(v);
            Ok(())
        }
    }
}

fn build_category(doc: &CategoryDoc) -> Res<FiniteCategory> {
    let n = doc.objects.len();
    for (i, o) in doc.objects.iter().enumerate() {
        if doc.objects[..i].contains(o) {
            return load_err(format!("duplicate object '{o}'"));
        }
    }
    let mut arrows: Vec<Arrow> = doc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Arrow {
            name: format!("1_{o}"),
            dom: i,
            cod: i,
        })
        .collect();
    for a in &doc.arrows {
        if arrows.iter().any(|b| b.name == a.name) {
            return load_err(format!("duplicate arrow '{}'", a.name));
        }
        arrows.push(Arrow {
            name: a.name.clone(),
            dom: lookup(&doc.objects, &a.dom, "object")?,
            cod: lookup(&doc.objects, &a.cod, "object")?,
        });
    }
    let table = if doc.thin {
        if !doc.compose.is_empty() {
            return load_err("a thin category takes no composition table".into());
        }
        thin_table(&arrows)?
    } else {
        let names: Vec<String> = arrows.iter().map(|a| a.name.clone()).collect();
        let m = arrows.len();
        let mut t: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
        for [g, f, h] in &doc.compose {
            let (g, f, h) = (
                lookup(&names, g, "arrow")?,
                lookup(&names, f, "arrow")?,
                lookup(&names, h, "arrow")?,
            );
            unique(&mut t[g][f], h, "a composite")?;
        }
        for f in 0..m {
            for g in 0..m {
                if arrows[f].cod != arrows[g].dom || t[g][f].is_some() {
                    continue;
                }
                if g < n {
                    t[g][f] = Some(f);
                } else if f < n {
                    t[g][f] = Some(g);
                } else {
                    return load_err(format!(
                        "missing composite {} ∘ {}",
                        arrows[g].name, arrows[f].name
                    ));
                }
            }
        }
        t
    };
    FiniteCategory::new(
        doc.name.clone(),
        doc.objects.clone(),
        arrows,
        (0..n).collect(),
        table,
    )
}

fn build_monoidal(c: FiniteCategory, doc: &MonoidalDoc, thin: bool) -> Res<FiniteMonoidalCategory> {
    let (n, m) = (c.n_obj(), c.n_arr());
    let obj = |s: &str| lookup(&c.objects, s, "object");
    let names: Vec<String> = c.arrows.iter().map(|a| a.name.clone()).collect();
    let arr = |s: &str| lookup(&names, s, "arrow");
    let mut t = vec![vec![None; n]; n];
    for [a, b, d] in &doc.tensor {
        unique(&mut t[obj(a)?][obj(b)?], obj(d)?, "an object tensor")?;
    }
    let tensor_obj: Vec<Vec<usize>> = t
        .into_iter()
        .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or_else(|| PresheafError::Load("object tensor table is incomplete".into()))?;
    let mut ta = vec![vec![None; m]; m];
    for [f, g, h] in &doc.tensor_arrows {
        unique(&mut ta[arr(f)?][arr(g)?], arr(h)?, "an arrow tensor")?;
    }
    for f in 0..m {
        for g in 0..m {
            if ta[f][g].is_some() {
                continue;
            }
            let d = tensor_obj[c.dom(f)][c.dom(g)];
            let e = tensor_obj[c.cod(f)][c.cod(g)];
            ta[f][g] = if c.is_identity(f) && c.is_identity(g) {
                Some(c.id(d))
            } else if thin && c.hom(d, e).len() == 1 {
                Some(c.hom(d, e)[0])
            } else {
                return load_err(format!(
                    "missing tensor {} ⊗ {}",
                    c.arrows[f].name, c.arrows[g].name
                ));
            };
        }
    }
    let tensor_arr: Vec<Vec<usize>> = ta
        .into_iter()
        .map(|r| r.into_iter().map(Option::unwrap).collect())
        .collect();
    let unit = obj(&doc.unit)?;
    if doc.alpha.is_none() && doc.lambda.is_none() && doc.rho.is_none() && doc.sigma.is_none() {
        return FiniteMonoidalCategory::strict(c, tensor_obj, tensor_arr, unit);
    }
    let (Some(al), Some(la), Some(rh), Some(si)) = (&doc.alpha, &doc.lambda, &doc.rho, &doc.sigma)
    else {
        return load_err("give all of alpha, lambda, rho, sigma or none of them".into());
    };
    let mut alpha = vec![vec![vec![None; n]; n]; n];
    for [a, b, d, f] in al {
        unique(
            &mut alpha[obj(a)?][obj(b)?][obj(d)?],
            arr(f)?,
            "an associator",
        )?;
    }
    let mut lambda = vec![None; n];
    for [a, f] in la {
        unique(&mut lambda[obj(a)?], arr(f)?, "a left unitor")?;
    }
    let mut rho = vec![None; n];
    for [a, f] in rh {
        unique(&mut rho[obj(a)?], arr(f)?, "a right unitor")?;
    }
    let mut sigma = vec![vec![None; n]; n];
    for [a, b, f] in si {
        unique(&mut sigma[obj(a)?][obj(b)?], arr(f)?, "a symmetry")?;
    }
    let missing = || PresheafError::Load("structural iso table is incomplete".into());
    let flat = |v: Vec<Option<usize>>| v.into_iter().collect::<Option<Vec<_>>>();
    let alpha = alpha
        .into_iter()
        .map(|r| r.into_iter().map(flat).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(missing)?;
    let sigma = sigma
        .into_iter()
        .map(flat)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(missing)?;
    FiniteMonoidalCategory::new(
        c,
        tensor_obj,
        tensor_arr,
        unit,
        alpha,
        flat(lambda).ok_or_else(missing)?,
        flat(rho).ok_or_else(missing)?,
        sigma,
    )
}

fn build_presheaf(c: &FiniteCategory, doc: &PresheafDoc) -> Res<NamedPresheaf> {
    let mut labels = vec![Vec::new(); c.n_obj()];
    for (o, els) in &doc.sets {
        labels[lookup(&c.objects, o, "object")?] = els.clone();
    }
    let names: Vec<String> = c.arrows.iter().map(|a| a.name.clone()).collect();
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; c.n_arr()];
    for (f, table) in &doc.maps {
        maps[lookup(&names, f, "arrow")?] = Some(table.clone());
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(f, t)| match t {
            Some(t) => Ok(t),
            None if c.is_identity(f) => Ok((0..labels[c.dom(f)].len()).collect()),
            None => load_err(format!(
                "presheaf {} lacks a map for {}",
                doc.name, c.arrows[f].name
            )),
        })
        .collect::<Res<Vec<_>>>()?;
    let sizes = labels.iter().map(Vec::len).collect();
    Ok(NamedPresheaf {
        name: doc.name.clone(),
        labels,
        presheaf: Presheaf::new(sizes, maps, c)?,
    })
}

impl Example {
    /// Parses and validates a category document; every law is checked before returning.
    pub fn from_json(src: &str) -> Res<Example> {
        let doc: CategoryDoc = serde_json::from_str(src)?;
        let category = build_category(&doc)?;
        let presheaves = doc
            .presheaves
            .iter()
            .map(|p| build_presheaf(&category, p))
            .collect::<Res<Vec<_>>>()?;
        let monoidal = doc
            .monoidal
            .as_ref()
            .map(|m| build_monoidal(category.clone(), m, doc.thin))
            .transpose()?;
        Ok(Example {
            name: doc.name,
            category,
            monoidal,
            presheaves,
        })
    }
}

impl FiniteFunctor {
    /// Parses a functor document against its source and target; identities map implicitly.
    pub fn from_json(
        src: &str,
        source: &FiniteCategory,
        target: &FiniteCategory,
    ) -> Res<FiniteFunctor> {
        let doc: FunctorDoc = serde_json::from_str(src)?;
        if doc.source != source.name || doc.target != target.name {
            return load_err(format!(
                "functor {} maps {} -> {}, not {} -> {}",
                doc.name, doc.source, doc.target, source.name, target.name
            ));
        }
        let mut obj = vec![None; source.n_obj()];
        for (a, b) in &doc.objects {
            obj[lookup(&source.objects, a, "object")?] =
                Some(lookup(&target.objects, b, "object")?);
        }
        let obj = obj
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| PresheafError::Load(format!("functor {} misses an object", doc.name)))?;
        let sn: Vec<String> = source.arrows.iter().map(|a| a.name.clone()).collect();
        let tn: Vec<String> = target.arrows.iter().map(|a| a.name.clone()).collect();
        let mut arr = vec![None; source.n_arr()];
        for (f, g) in &doc.arrows {
            arr[lookup(&sn, f, "arrow")?] = Some(lookup(&tn, g, "arrow")?);
        }
        let arr = arr
            .into_iter()
            .enumerate()
            .map(|(f, g)| match g {
                Some(g) => Ok(g),
                None if source.is_identity(f) => Ok(target.id(obj[source.dom(f)])),
                None => load_err(format!(
                    "functor {} misses arrow {}",
                    doc.name, source.arrows[f].name
                )),
            })
            .collect::<Res<Vec<_>>>()?;
        FiniteFunctor::new(obj, arr, source, target)
    }
}

/// The shipped example documents, by name.
pub const BUILTIN_EXAMPLES: &[(&str, &str)] = &[
    ("terminal", include_str!("../../data/terminal.json")),
    ("z2", include_str!("../../data/z2.json")),
    ("z3", include_str!("../../data/z3.json")),
    ("poset2", include_str!("../../data/poset2.json")),
];

/// The shipped functor documents: name, source, target, document.
pub const BUILTIN_FUNCTORS: &[(&str, &str, &str, &str)] = &[
    (
        "terminal_to_z2",
        "terminal",
        "z2",
        include_str!("../../data/terminal_to_z2.json"),
    ),
    (
        "z2_to_terminal",
        "z2",
        "terminal",
        include_str!("../../data/z2_to_terminal.json"),
    ),
    (
        "terminal_to_poset2",
        "terminal",
        "poset2",
        include_str!("../../data/terminal_to_poset2.json"),
    ),
];

pub fn builtin_example(name: &str) -> Res<Example> {
    match BUILTIN_EXAMPLES.iter().find(|(n, _)| *n == name) {
        Some((_, src)) => Example::from_json(src),
        None => load_err(format!("no built-in example '{name}'")),
    }
}

/// Loads a shipped functor together with its source and target examples.
pub fn builtin_functor(name: &str) -> Res<(FiniteFunctor, Example, Example)> {
    let Some(&(_, s, t, src)) = BUILTIN_FUNCTORS.iter().find(|(n, ..)| *n == name) else {
        return load_err(format!("no built-in functor '{name}'"));
    };
    let (s, t) = (builtin_example(s)?, builtin_example(t)?);
    let f = FiniteFunctor::from_json(src, &s.category, &t.category)?;
    Ok((f, s, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        for (name, _) in BUILTIN_EXAMPLES {
            let e = builtin_example(name).unwrap();
            assert!(e.monoidal.is_some(), "{name}");
            assert!(!e.presheaves.is_empty(), "{name}");
        }
        for (name, ..) in BUILTIN_FUNCTORS {
            builtin_functor(name).unwrap();
        }
    }

    #[test]
    fn poset_is_affine_and_groups_are_not() {
        assert!(builtin_example("poset2")
            .unwrap()
            .monoidal
            .unwrap()
            .is_affine());
        assert!(builtin_example("terminal")
            .unwrap()
            .monoidal
            .unwrap()
            .is_affine());
        assert!(!builtin_example("z3").unwrap().monoidal.unwrap().is_affine());
    }

    #[test]
    fn bad_documents_are_rejected() {
        let bad = [
            r#"{"name":"x","objects":["a","a"]}"#,
            r#"{"name":"x","objects":["a"],"arrows":[{"name":"f","dom":"a","cod":"b"}]}"#,
            r#"{"name":"x","objects":["a"],"arrows":[{"name":"e","dom":"a","cod":"a"}]}"#,
            r#"{"name":"x","objects":["a"],"arrows":[{"name":"e","dom":"a","cod":"a"}],"compose":[["e","e","1_a"],["e","e","e"]]}"#,
            r#"{"name":"x","objects":["a","b"],"monoidal":{"unit":"b","tensor":[["a","a","a"],["a","b","b"],["b","a","b"],["b","b","b"]]}}"#,
            r#"{"name":"x","objects":["a"],"presheaves":[{"name":"F","sets":{"a":["p"]},"maps":{"1_a":[3]}}]}"#,
            r#"{"name":"x","objects":["a"],"extra":1}"#,
            r#"not json"#,
        ];
        for src in bad {
            assert!(Example::from_json(src).is_err(), "{src}");
        }
    }

    #[test]
    fn monoid_document_with_explicit_composites() {
        let src = r#"{"name":"E","objects":["*"],"arrows":[{"name":"e","dom":"*","cod":"*"}],"compose":[["e","e","e"]],
            "presheaves":[{"name":"F","sets":{"*":["p","q"]},"maps":{"e":[0,0]}}]}"#;
        let e = Example::from_json(src).unwrap();
        assert_eq!(e.category.n_arr(), 2);
        assert_eq!(e.presheaf("F").unwrap().maps[1], vec![0, 0]);
    }
}
