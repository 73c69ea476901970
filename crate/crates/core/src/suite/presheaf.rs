//! Exact checks of the presheaf engine on the shipped finite examples.

use super::{checks_section, CheckRecord, SuiteConfig};
use crate::finpresheaf::{
    adjunction_bijection, bang, builtin_example, builtin_functor, check_day_structure,
    check_lan_strong_monoidal, check_triangles, lan_counit, FiniteFunctor, NatTrans, Presheaf,
    BUILTIN_EXAMPLES, BUILTIN_FUNCTORS,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::time::Instant;

/// Pentagon instances use this many leading presheaves.
const PENTAGON_WIDTH: usize = 3;
/// Largest hom-set of natural transformations enumerated in the adjunction check.
const ADJUNCTION_LIMIT: usize = 100_000;
/// Largest component size in the Lan monoidality sweep.
const LAN_MAX_SIZE: usize = 3;

fn day_structure(_cfg: &SuiteConfig) -> CheckRecord {
    let rows: Vec<(String, Value, bool)> = BUILTIN_EXAMPLES
        .par_iter()
        .filter_map(|(name, _)| {
            let ex = builtin_example(name).expect("shipped example loads");
            let m = ex.monoidal?;
            let mut ps: Vec<Presheaf> = ex.presheaves.iter().map(|p| p.presheaf.clone()).collect();
            ps.push(Presheaf::representable(&m.base, m.unit));
            let r = check_day_structure(&m, &ps, PENTAGON_WIDTH);
            let v = json!({
                "presheaves": ps.len(),
                "unit_isos": r.unit_isos,
                "assoc_isos": r.assoc_isos,
                "symmetry_isos": r.symmetry_isos,
                "coherence_checks": r.coherence_checks,
                "failures": r.failures,
            });
            Some((name.to_string(), v, r.pass()))
        })
        .collect();
    let pass = !rows.is_empty() && rows.iter().all(|r| r.2);
    let detail: serde_json::Map<String, Value> = rows
        .iter()
        .map(|(n, v, _)| (n.clone(), v.clone()))
        .collect();
    CheckRecord::new(
        "day_structure_isos",
        pass,
        rows.len(),
        None,
        Value::Object(detail),
    )
}

fn lan_adjunction(_cfg: &SuiteConfig) -> CheckRecord {
    let rows: Vec<Value> = BUILTIN_FUNCTORS
        .par_iter()
        .map(|(name, ..)| {
            let (phi, s, t) = builtin_functor(name).expect("shipped functor loads");
            let (mut triangles, mut bijections, mut skipped, mut bad) = (0, 0, 0, Vec::new());
            for f in &s.presheaves {
                for g in &t.presheaves {
                    triangles += 1;
                    if check_triangles(&phi, &s.category, &t.category, &f.presheaf, &g.presheaf) != (true, true) {
                        bad.push(format!("triangles({}, {})", f.name, g.name));
                    }
                    match adjunction_bijection(&phi, &s.category, &t.category, &f.presheaf, &g.presheaf, ADJUNCTION_LIMIT) {
                        Some(a) if a.bijective => bijections += 1,
                        Some(_) => bad.push(format!("adjunction({}, {})", f.name, g.name)),
                        None => skipped += 1,
                    }
                }
            }
            json!({"functor": name, "triangles": triangles, "bijections": bijections, "skipped": skipped, "failures": bad})
        })
        .collect();
    let pass = rows
        .iter()
        .all(|r| r["failures"].as_array().is_some_and(|a| a.is_empty()));
    let cases = rows
        .iter()
        .map(|r| r["triangles"].as_u64().unwrap_or(0) as usize)
        .sum();
    CheckRecord::new(
        "lan_precompose_adjunction",
        pass,
        cases,
        None,
        json!({ "functors": rows }),
    )
}

/// `!` is idempotent along the fully faithful inclusion and fails, with a witness, along the collapse.
fn bang_idempotence(_cfg: &SuiteConfig) -> CheckRecord {
    let mut rows = Vec::new();
    let mut pass = true;
    let mut cases = 0;
    for (name, expect_idempotent) in [("terminal_to_z2", true), ("z2_to_terminal", false)] {
        let (phi, s, t) = builtin_functor(name).expect("shipped functor loads");
        let ff = phi.is_fully_faithful(&s.category, &t.category);
        let mut witnessed = Vec::new();
        let mut all_idempotent = true;
        let mut counit_law = true;
        for g in &t.presheaves {
            cases += 1;
            let b = bang(&phi, &s.category, &t.category, &g.presheaf);
            let e2 = lan_counit(&b.bang.presheaf, &b.bang2);
            counit_law &= e2.after(&b.delta) == NatTrans::identity(&b.bang.presheaf);
            if !b.is_idempotent() {
                all_idempotent = false;
                witnessed.push(json!({"presheaf": g.name, "witnesses": b.witnesses()}));
            }
        }
        let ok = if expect_idempotent {
            ff && all_idempotent
        } else {
            !ff && !witnessed.is_empty()
        };
        pass &= ok && counit_law;
        rows.push(json!({
            "functor": name,
            "fully_faithful": ff,
            "idempotent": all_idempotent,
            "counit_law": counit_law,
            "witnesses": witnessed,
        }));
    }
    CheckRecord::new(
        "bang_idempotence",
        pass,
        cases,
        None,
        json!({ "functors": rows }),
    )
}

fn all_sizes(n_obj: usize) -> Vec<Vec<usize>> {
    (0..n_obj).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|s| {
                (0..=LAN_MAX_SIZE).map(move |k| {
                    let mut t = s.clone();
                    t.push(k);
                    t
                })
            })
            .collect()
    })
}

/// Lan along the identity of Z₂ and along `terminal -> Z₂`, for every pair of presheaves with sizes ≤ 3.
fn lan_monoidal(_cfg: &SuiteConfig) -> CheckRecord {
    let z2 = builtin_example("z2").expect("shipped example loads");
    let zm = z2.monoidal.clone().expect("z2 is monoidal");
    let (incl, term, _) = builtin_functor("terminal_to_z2").expect("shipped functor loads");
    let tm = term.monoidal.clone().expect("terminal is monoidal");
    let id = FiniteFunctor::identity(&zm.base);
    let mut jobs = Vec::new();
    for (label, phi, src) in [("identity_z2", &id, &zm), ("terminal_to_z2", &incl, &tm)] {
        let sizes = all_sizes(src.base.n_obj());
        for a in &sizes {
            for b in &sizes {
                jobs.push((label, phi, src, a.clone(), b.clone()));
            }
        }
    }
    let bad: Vec<Value> = jobs
        .par_iter()
        .filter_map(|(label, phi, src, a, b)| {
            let f = Presheaf::discrete(&src.base, a.clone()).expect("discrete");
            let g = Presheaf::discrete(&src.base, b.clone()).expect("discrete");
            let r = check_lan_strong_monoidal(phi, src, &zm, &f, &g);
            (!r.pass()).then(|| json!({"functor": label, "f": a, "g": b}))
        })
        .collect();
    CheckRecord::new(
        "lan_strong_monoidal",
        bad.is_empty(),
        jobs.len(),
        None,
        json!({ "max_size": LAN_MAX_SIZE, "failures": bad }),
    )
}

/// The unit representable is terminal exactly on the affine examples.
fn affine_units(_cfg: &SuiteConfig) -> CheckRecord {
    let mut rows = serde_json::Map::new();
    let mut pass = true;
    for (name, _) in BUILTIN_EXAMPLES {
        let ex = builtin_example(name).expect("shipped example loads");
        let Some(m) = ex.monoidal else { continue };
        let affine = m.is_affine();
        let terminal_unit = Presheaf::representable(&m.base, m.unit)
            .sizes
            .iter()
            .all(|&s| s == 1);
        pass &= affine == terminal_unit;
        rows.insert(name.to_string(), json!({"affine": affine}));
    }
    CheckRecord::new(
        "affine_unit_terminal",
        pass,
        rows.len(),
        None,
        Value::Object(rows),
    )
}

pub fn presheaf_suite(cfg: &SuiteConfig) -> Value {
    let started = Instant::now();
    type Check = fn(&SuiteConfig) -> CheckRecord;
    let checks: [Check; 5] = [
        day_structure,
        lan_adjunction,
        bang_idempotence,
        lan_monoidal,
        affine_units,
    ];
    let records: Vec<CheckRecord> = checks.par_iter().map(|f| f(cfg)).collect();
    checks_section(&records, started)
}
