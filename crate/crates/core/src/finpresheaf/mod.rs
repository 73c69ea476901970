//! Presheaves over finite (monoidal) categories: coends, Day convolution,
//! left Kan extension, precomposition and the `!` comonad.

mod coend;
mod day;
mod json;
mod kan;

pub use coend::{coend, Bifunctor, Quotient, QuotientBuilder};
pub use day::{
    check_day_structure, day_alpha, day_lambda, day_map, day_rho, day_sigma, day_tensor, DayElem,
    DayReport, DayTensor,
};
pub use json::{
    builtin_example, builtin_functor, Example, NamedPresheaf, BUILTIN_EXAMPLES, BUILTIN_FUNCTORS,
};
pub use kan::{
    adjunction_bijection, bang, check_lan_strong_monoidal, check_triangles, lan_along, lan_counit,
    lan_map, lan_unit, precompose, AdjunctionCheck, BangData, LanElem, LanExt, LanMonoidalCheck,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PresheafError {
    #[error("invalid document: {0}")]
    Load(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("category laws fail: {0}")]
    Category(String),
    #[error("monoidal structure invalid: {0}")]
    Monoidal(String),
    #[error("functoriality violation: {0}")]
    FunctorialityViolation(String),
    #[error("naturality violation: {0}")]
    Naturality(String),
    #[error("invalid functor: {0}")]
    Functor(String),
}

type Res<T> = Result<T, PresheafError>;

fn fail<T>(e: fn(String) -> PresheafError, msg: String) -> Res<T> {
    Err(e(msg))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// A finite category with a total composition table, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub identities: Vec<usize>,
    /// `table[g][f] = g ∘ f` when `cod f = dom g`.
    table: Vec<Vec<Option<usize>>>,
    homs: Vec<Vec<Vec<usize>>>,
}

impl FiniteCategory {
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        table: Vec<Vec<Option<usize>>>,
    ) -> Res<FiniteCategory> {
        let n = objects.len();
        let m = arrows.len();
        let mut homs = vec![vec![Vec::new(); n]; n];
        for (i, a) in arrows.iter().enumerate() {
            if a.dom >= n || a.cod >= n {
                return fail(
                    PresheafError::Category,
                    format!("arrow {} has an unknown endpoint", a.name),
                );
            }
            homs[a.dom][a.cod].push(i);
        }
        let c = FiniteCategory {
            name: name.into(),
            objects,
            arrows,
            identities,
            table,
            homs,
        };
        if c.identities.len() != n || c.table.len() != m || c.table.iter().any(|r| r.len() != m) {
            return fail(PresheafError::Category, "table sizes do not match".into());
        }
        for (o, &i) in c.identities.iter().enumerate() {
            if i >= m || c.arrows[i].dom != o || c.arrows[i].cod != o {
                return fail(
                    PresheafError::Category,
                    format!("identity of {} is mistyped", c.objects[o]),
                );
            }
        }
        for g in 0..m {
            for f in 0..m {
                let ok = match c.table[g][f] {
                    None => c.arrows[f].cod != c.arrows[g].dom,
                    Some(h) => {
                        c.arrows[f].cod == c.arrows[g].dom
                            && h < m
                            && c.arrows[h].dom == c.arrows[f].dom
                            && c.arrows[h].cod == c.arrows[g].cod
                    }
                };
                if !ok {
                    return fail(
                        PresheafError::Category,
                        format!(
                            "composite {} ∘ {} is missing or mistyped",
                            c.arrows[g].name, c.arrows[f].name
                        ),
                    );
                }
            }
        }
        for f in 0..m {
            let (d, e) = (c.arrows[f].dom, c.arrows[f].cod);
            if c.compose(f, c.identities[d]) != f || c.compose(c.identities[e], f) != f {
                return fail(
                    PresheafError::Category,
                    format!("identity law fails at {}", c.arrows[f].name),
                );
            }
        }
        for f in 0..m {
            for g in c.out_arrows(c.arrows[f].cod) {
                for h in c.out_arrows(c.arrows[g].cod) {
                    if c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f) {
                        return fail(
                            PresheafError::Category,
                            "composition is not associative".into(),
                        );
                    }
                }
            }
        }
        Ok(c)
    }

    /// The discrete category on `n` objects named `0..n`.
    pub fn discrete(name: impl Into<String>, n: usize) -> FiniteCategory {
        let objects = (0..n).map(|i| i.to_string()).collect();
        Self::thin(name, objects, &[]).expect("discrete categories are valid")
    }

    /// The preorder generated by identities plus `leq`, which must be transitively closed.
    pub fn thin(
        name: impl Into<String>,
        objects: Vec<String>,
        leq: &[(usize, usize)],
    ) -> Res<FiniteCategory> {
        let n = objects.len();
        let mut arrows: Vec<Arrow> = (0..n)
            .map(|o| Arrow {
                name: format!("1_{}", objects[o]),
                dom: o,
                cod: o,
            })
            .collect();
        for &(a, b) in leq {
            if a != b && !arrows.iter().any(|x| x.dom == a && x.cod == b) {
                arrows.push(Arrow {
                    name: format!(
                        "{}<={}",
                        objects.get(a).map_or("?", |s| s),
                        objects.get(b).map_or("?", |s| s)
                    ),
                    dom: a,
                    cod: b,
                });
            }
        }
        let table = thin_table(&arrows)?;
        Self::new(name, objects, arrows, (0..n).collect(), table)
    }

    /// The one-object category of a finite monoid given by its multiplication table; element 0 is the unit.
    pub fn monoid(name: impl Into<String>, mult: &[Vec<usize>]) -> Res<FiniteCategory> {
        let m = mult.len();
        let arrows = (0..m)
            .map(|i| Arrow {
                name: if i == 0 {
                    "1_*".into()
                } else {
                    format!("m{i}")
                },
                dom: 0,
                cod: 0,
            })
            .collect();
        let table = mult
            .iter()
            .map(|r| r.iter().map(|&h| Some(h)).collect())
            .collect();
        Self::new(name, vec!["*".into()], arrows, vec![0], table)
    }

    pub fn n_obj(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arr(&self) -> usize {
        self.arrows.len()
    }

    pub fn dom(&self, f: usize) -> usize {
        self.arrows[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.arrows[f].cod
    }

    pub fn id(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// `g ∘ f`; panics when the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.table[g][f].unwrap_or_else(|| {
            panic!(
                "{} ∘ {} is not composable",
                self.arrows[g].name, self.arrows[f].name
            )
        })
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g][f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a][b]
    }

    /// Position of `f` inside `hom(dom f, cod f)`.
    pub fn hom_index(&self, f: usize) -> usize {
        self.hom(self.dom(f), self.cod(f))
            .iter()
            .position(|&g| g == f)
            .expect("arrow lies in its hom-set")
    }

    pub fn out_arrows(&self, a: usize) -> Vec<usize> {
        (0..self.n_arr()).filter(|&f| self.dom(f) == a).collect()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// A two-sided inverse of `f`, if one exists.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == self.id(a) && self.compose(f, g) == self.id(b))
    }
}

fn thin_table(arrows: &[Arrow]) -> Res<Vec<Vec<Option<usize>>>> {
    let find = |d: usize, c: usize| arrows.iter().position(|x| x.dom == d && x.cod == c);
    arrows
        .iter()
        .map(|g| {
            arrows
                .iter()
                .map(|f| {
                    if f.cod != g.dom {
                        return Ok(None);
                    }
                    find(f.dom, g.cod).map(Some).ok_or_else(|| {
                        PresheafError::Category(format!(
                            "order is not transitive at {} ∘ {}",
                            g.name, f.name
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

/// A symmetric monoidal structure on a finite category given by tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoidalCategory {
    pub base: FiniteCategory,
    pub tensor_obj: Vec<Vec<usize>>,
    pub tensor_arr: Vec<Vec<usize>>,
    pub unit: usize,
    /// `α_{a,b,c}: (a⊗b)⊗c -> a⊗(b⊗c)`.
    pub alpha: Vec<Vec<Vec<usize>>>,
    /// `λ_a: I⊗a -> a`.
    pub lambda: Vec<usize>,
    /// `ρ_a: a⊗I -> a`.
    pub rho: Vec<usize>,
    /// `σ_{a,b}: a⊗b -> b⊗a`.
    pub sigma: Vec<Vec<usize>>,
}

impl FiniteMonoidalCategory {
    /// Validates every coherence law exhaustively.
    pub fn new(
        base: FiniteCategory,
        tensor_obj: Vec<Vec<usize>>,
        tensor_arr: Vec<Vec<usize>>,
        unit: usize,
        alpha: Vec<Vec<Vec<usize>>>,
        lambda: Vec<usize>,
        rho: Vec<usize>,
        sigma: Vec<Vec<usize>>,
    ) -> Res<FiniteMonoidalCategory> {
        let m = FiniteMonoidalCategory {
            base,
            tensor_obj,
            tensor_arr,
            unit,
            alpha,
            lambda,
            rho,
            sigma,
        };
        m.validate()?;
        Ok(m)
    }

    /// Strict structure: every structural iso is an identity, which requires the object tables to agree.
    pub fn strict(
        base: FiniteCategory,
        tensor_obj: Vec<Vec<usize>>,
        tensor_arr: Vec<Vec<usize>>,
        unit: usize,
    ) -> Res<Self> {
        let n = base.n_obj();
        let id = |a: usize| base.id(a);
        let t = |a: usize, b: usize| tensor_obj[a][b];
        let mut alpha = vec![vec![vec![0; n]; n]; n];
        let mut sigma = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                if t(a, b) != t(b, a) {
                    return fail(
                        PresheafError::Monoidal,
                        "a strict symmetry needs a commutative object table".into(),
                    );
                }
                sigma[a][b] = id(t(a, b));
                for c in 0..n {
                    if t(t(a, b), c) != t(a, t(b, c)) {
                        return fail(
                            PresheafError::Monoidal,
                            "a strict associator needs an associative object table".into(),
                        );
                    }
                    alpha[a][b][c] = id(t(t(a, b), c));
                }
            }
        }
        if (0..n).any(|a| t(unit, a) != a || t(a, unit) != a) {
            return fail(PresheafError::Monoidal, "unit is not strict".into());
        }
        let lambda = (0..n).map(id).collect::<Vec<_>>();
        let rho = lambda.clone();
        Self::new(
            base, tensor_obj, tensor_arr, unit, alpha, lambda, rho, sigma,
        )
    }

    pub fn t(&self, a: usize, b: usize) -> usize {
        self.tensor_obj[a][b]
    }

    pub fn tf(&self, f: usize, g: usize) -> usize {
        self.tensor_arr[f][g]
    }

    fn validate(&self) -> Res<()> {
        let c = &self.base;
        let (n, m) = (c.n_obj(), c.n_arr());
        let err = |s: &str| fail(PresheafError::Monoidal, s.to_string());
        if self.unit >= n
            || self.tensor_obj.len() != n
            || self
                .tensor_obj
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
            || self.tensor_arr.len() != m
            || self
                .tensor_arr
                .iter()
                .any(|r| r.len() != m || r.iter().any(|&x| x >= m))
            || self.alpha.len() != n
            || self
                .alpha
                .iter()
                .any(|r| r.len() != n || r.iter().any(|s| s.len() != n))
            || self.lambda.len() != n
            || self.rho.len() != n
            || self.sigma.len() != n
            || self.sigma.iter().any(|r| r.len() != n)
        {
            return err("table sizes do not match the category");
        }
        for f in 0..m {
            for g in 0..m {
                let h = self.tf(f, g);
                if c.dom(h) != self.t(c.dom(f), c.dom(g)) || c.cod(h) != self.t(c.cod(f), c.cod(g))
                {
                    return err("tensor of arrows is mistyped");
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.tf(c.id(a), c.id(b)) != c.id(self.t(a, b)) {
                    return err("tensor does not preserve identities");
                }
            }
        }
        for f in 0..m {
            for f2 in c.out_arrows(c.cod(f)) {
                for g in 0..m {
                    for g2 in c.out_arrows(c.cod(g)) {
                        let lhs = c.compose(self.tf(f2, g2), self.tf(f, g));
                        if lhs != self.tf(c.compose(f2, f), c.compose(g2, g)) {
                            return err("tensor does not preserve composition");
                        }
                    }
                }
            }
        }
        let typed = |f: usize, d: usize, e: usize| {
            f < m && c.dom(f) == d && c.cod(f) == e && c.inverse(f).is_some()
        };
        for a in 0..n {
            if !typed(self.lambda[a], self.t(self.unit, a), a)
                || !typed(self.rho[a], self.t(a, self.unit), a)
            {
                return err("unitor is not an isomorphism of the right type");
            }
            for b in 0..n {
                if !typed(self.sigma[a][b], self.t(a, b), self.t(b, a)) {
                    return err("symmetry is not an isomorphism of the right type");
                }
                if c.compose(self.sigma[b][a], self.sigma[a][b]) != c.id(self.t(a, b)) {
                    return err("symmetry is not involutive");
                }
                for d in 0..n {
                    if !typed(
                        self.alpha[a][b][d],
                        self.t(self.t(a, b), d),
                        self.t(a, self.t(b, d)),
                    ) {
                        return err("associator is not an isomorphism of the right type");
                    }
                }
            }
        }
        let i = c.id(self.unit);
        for f in 0..m {
            let (a, a2) = (c.dom(f), c.cod(f));
            if c.compose(self.lambda[a2], self.tf(i, f)) != c.compose(f, self.lambda[a])
                || c.compose(self.rho[a2], self.tf(f, i)) != c.compose(f, self.rho[a])
            {
                return err("unitors are not natural");
            }
            for g in 0..m {
                let (b, b2) = (c.dom(g), c.cod(g));
                if c.compose(self.sigma[a2][b2], self.tf(f, g))
                    != c.compose(self.tf(g, f), self.sigma[a][b])
                {
                    return err("symmetry is not natural");
                }
                for h in 0..m {
                    let (d, d2) = (c.dom(h), c.cod(h));
                    let lhs = c.compose(self.alpha[a2][b2][d2], self.tf(self.tf(f, g), h));
                    let rhs = c.compose(self.tf(f, self.tf(g, h)), self.alpha[a][b][d]);
                    if lhs != rhs {
                        return err("associator is not natural");
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                // triangle: (1⊗λ) ∘ α_{a,I,b} = ρ⊗1
                let lhs = c.compose(
                    self.tf(c.id(a), self.lambda[b]),
                    self.alpha[a][self.unit][b],
                );
                if lhs != self.tf(self.rho[a], c.id(b)) {
                    return err("triangle identity fails");
                }
                for d in 0..n {
                    // hexagon: α_{b,d,a} ∘ σ_{a,b⊗d} ∘ α_{a,b,d} = (1⊗σ_{a,d}) ∘ α_{b,a,d} ∘ (σ_{a,b}⊗1)
                    let t = |x, y| self.t(x, y);
                    let lhs = c.compose(
                        self.alpha[b][d][a],
                        c.compose(self.sigma[a][t(b, d)], self.alpha[a][b][d]),
                    );
                    let rhs = c.compose(
                        self.tf(c.id(b), self.sigma[a][d]),
                        c.compose(self.alpha[b][a][d], self.tf(self.sigma[a][b], c.id(d))),
                    );
                    if lhs != rhs {
                        return err("hexagon identity fails");
                    }
                    for e in 0..n {
                        // pentagon
                        let lhs = c.compose(self.alpha[a][b][t(d, e)], self.alpha[t(a, b)][d][e]);
                        let rhs = c.compose(
                            self.tf(c.id(a), self.alpha[b][d][e]),
                            c.compose(
                                self.alpha[a][t(b, d)][e],
                                self.tf(self.alpha[a][b][d], c.id(e)),
                            ),
                        );
                        if lhs != rhs {
                            return err("pentagon identity fails");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The unit is terminal: exactly one arrow into it from every object.
    pub fn is_affine(&self) -> bool {
        (0..self.base.n_obj()).all(|a| self.base.hom(a, self.unit).len() == 1)
    }
}

/// A functor between finite categories given by object and arrow tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFunctor {
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
}

impl FiniteFunctor {
    pub fn new(
        obj: Vec<usize>,
        arr: Vec<usize>,
        src: &FiniteCategory,
        tgt: &FiniteCategory,
    ) -> Res<FiniteFunctor> {
        let f = FiniteFunctor { obj, arr };
        if f.obj.len() != src.n_obj() || f.arr.len() != src.n_arr() {
            return fail(
                PresheafError::Functor,
                "table sizes do not match the source".into(),
            );
        }
        if f.obj.iter().any(|&o| o >= tgt.n_obj()) || f.arr.iter().any(|&a| a >= tgt.n_arr()) {
            return fail(
                PresheafError::Functor,
                "table points outside the target".into(),
            );
        }
        for u in 0..src.n_arr() {
            if tgt.dom(f.arr[u]) != f.obj[src.dom(u)] || tgt.cod(f.arr[u]) != f.obj[src.cod(u)] {
                return fail(
                    PresheafError::Functor,
                    format!("image of {} is mistyped", src.arrows[u].name),
                );
            }
        }
        for a in 0..src.n_obj() {
            if f.arr[src.id(a)] != tgt.id(f.obj[a]) {
                return fail(
                    PresheafError::Functor,
                    "identities are not preserved".into(),
                );
            }
        }
        for u in 0..src.n_arr() {
            for v in src.out_arrows(src.cod(u)) {
                if f.arr[src.compose(v, u)] != tgt.compose(f.arr[v], f.arr[u]) {
                    return fail(
                        PresheafError::Functor,
                        "composition is not preserved".into(),
                    );
                }
            }
        }
        Ok(f)
    }

    pub fn identity(c: &FiniteCategory) -> FiniteFunctor {
        FiniteFunctor {
            obj: (0..c.n_obj()).collect(),
            arr: (0..c.n_arr()).collect(),
        }
    }

    /// Bijective on every hom-set.
    pub fn is_fully_faithful(&self, src: &FiniteCategory, tgt: &FiniteCategory) -> bool {
        (0..src.n_obj()).all(|a| {
            (0..src.n_obj()).all(|b| {
                let mut img: Vec<usize> = src.hom(a, b).iter().map(|&u| self.arr[u]).collect();
                img.sort_unstable();
                img.dedup();
                let mut full = tgt.hom(self.obj[a], self.obj[b]).to_vec();
                full.sort_unstable();
                img.len() == src.hom(a, b).len() && img == full
            })
        })
    }

    /// Preserves tensor, unit and every structural iso on the nose.
    pub fn is_strict_monoidal(
        &self,
        src: &FiniteMonoidalCategory,
        tgt: &FiniteMonoidalCategory,
    ) -> bool {
        let (n, m) = (src.base.n_obj(), src.base.n_arr());
        let o = &self.obj;
        let objs = self.obj[src.unit] == tgt.unit
            && (0..n).all(|a| (0..n).all(|b| o[src.t(a, b)] == tgt.t(o[a], o[b])));
        let arrs = (0..m)
            .all(|f| (0..m).all(|g| self.arr[src.tf(f, g)] == tgt.tf(self.arr[f], self.arr[g])));
        let isos = (0..n).all(|a| {
            self.arr[src.lambda[a]] == tgt.lambda[o[a]]
                && self.arr[src.rho[a]] == tgt.rho[o[a]]
                && (0..n).all(|b| {
                    self.arr[src.sigma[a][b]] == tgt.sigma[o[a]][o[b]]
                        && (0..n)
                            .all(|c| self.arr[src.alpha[a][b][c]] == tgt.alpha[o[a]][o[b]][o[c]])
                })
        });
        objs && arrs && isos
    }
}

/// A contravariant functor into finite sets: `maps[f]` sends `F(cod f)` to `F(dom f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn new(sizes: Vec<usize>, maps: Vec<Vec<usize>>, c: &FiniteCategory) -> Res<Presheaf> {
        let p = Presheaf { sizes, maps };
        p.validate(c)?;
        Ok(p)
    }

    /// Builds the tables from an action `(f, x) ↦ F(f)(x)`.
    pub fn from_fn(
        c: &FiniteCategory,
        sizes: Vec<usize>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Res<Presheaf> {
        let maps = (0..c.n_arr())
            .map(|f| (0..sizes[c.cod(f)]).map(|x| act(f, x)).collect())
            .collect();
        Self::new(sizes, maps, c)
    }

    /// `hom(−, c)`; the element `h` at `a` is its position in `hom(a, c)`.
    pub fn representable(cat: &FiniteCategory, c: usize) -> Presheaf {
        let sizes = (0..cat.n_obj()).map(|a| cat.hom(a, c).len()).collect();
        Self::from_fn(cat, sizes, |f, x| {
            let h = cat.hom(cat.cod(f), c)[x];
            cat.hom_index(cat.compose(h, f))
        })
        .expect("representables are functorial")
    }

    /// A presheaf on a discrete category (only identity arrows).
    pub fn discrete(cat: &FiniteCategory, sizes: Vec<usize>) -> Res<Presheaf> {
        Self::from_fn(cat, sizes, |_, x| x)
    }

    pub fn act(&self, f: usize, x: usize) -> usize {
        self.maps[f][x]
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self, c: &FiniteCategory) -> Res<()> {
        let err = |s: String| fail(PresheafError::FunctorialityViolation, s);
        if self.sizes.len() != c.n_obj() || self.maps.len() != c.n_arr() {
            return err("table sizes do not match the category".into());
        }
        for f in 0..c.n_arr() {
            let (d, e) = (c.dom(f), c.cod(f));
            if self.maps[f].len() != self.sizes[e]
                || self.maps[f].iter().any(|&y| y >= self.sizes[d])
            {
                return err(format!("map of {} is mistyped", c.arrows[f].name));
            }
        }
        for a in 0..c.n_obj() {
            if self.maps[c.id(a)].iter().enumerate().any(|(x, &y)| x != y) {
                return err(format!(
                    "identity of {} is not sent to an identity",
                    c.objects[a]
                ));
            }
        }
        for f in 0..c.n_arr() {
            for g in c.out_arrows(c.cod(f)) {
                let gf = c.compose(g, f);
                for x in 0..self.sizes[c.cod(g)] {
                    if self.act(gf, x) != self.act(f, self.act(g, x)) {
                        return err(format!(
                            "F({} ∘ {}) differs from F({}) ∘ F({})",
                            c.arrows[g].name, c.arrows[f].name, c.arrows[f].name, c.arrows[g].name
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A natural transformation between presheaves, one function per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn new(
        components: Vec<Vec<usize>>,
        c: &FiniteCategory,
        f: &Presheaf,
        g: &Presheaf,
    ) -> Res<NatTrans> {
        let t = NatTrans { components };
        t.validate(c, f, g)?;
        Ok(t)
    }

    pub fn identity(f: &Presheaf) -> NatTrans {
        NatTrans {
            components: f.sizes.iter().map(|&s| (0..s).collect()).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &NatTrans) -> NatTrans {
        NatTrans {
            components: other
                .components
                .iter()
                .zip(&self.components)
                .map(|(o, s)| o.iter().map(|&x| s[x]).collect())
                .collect(),
        }
    }

    pub fn validate(&self, c: &FiniteCategory, f: &Presheaf, g: &Presheaf) -> Res<()> {
        let err = |s: String| fail(PresheafError::Naturality, s);
        if self.components.len() != c.n_obj() {
            return err("wrong number of components".into());
        }
        for a in 0..c.n_obj() {
            if self.components[a].len() != f.sizes[a]
                || self.components[a].iter().any(|&y| y >= g.sizes[a])
            {
                return err(format!("component at {} is mistyped", c.objects[a]));
            }
        }
        for u in 0..c.n_arr() {
            let (a, b) = (c.dom(u), c.cod(u));
            for x in 0..f.sizes[b] {
                if self.components[a][f.act(u, x)] != g.act(u, self.components[b][x]) {
                    return err(format!("square at {} does not commute", c.arrows[u].name));
                }
            }
        }
        Ok(())
    }

    /// Every component is a bijection.
    pub fn is_iso(&self, f: &Presheaf, g: &Presheaf) -> bool {
        self.components.iter().enumerate().all(|(a, comp)| {
            let mut seen = vec![false; g.sizes[a]];
            comp.len() == f.sizes[a]
                && f.sizes[a] == g.sizes[a]
                && comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// Every natural transformation `f ⇒ g`, in lexicographic order of component tables.
    pub fn enumerate(
        c: &FiniteCategory,
        f: &Presheaf,
        g: &Presheaf,
        limit: usize,
    ) -> Option<Vec<NatTrans>> {
        let mut out = Vec::new();
        let mut comps: Vec<Vec<usize>> = f.sizes.iter().map(|&s| vec![0; s]).collect();
        let slots: Vec<(usize, usize)> = (0..c.n_obj())
            .flat_map(|a| (0..f.sizes[a]).map(move |x| (a, x)))
            .collect();
        if slots.iter().any(|&(a, _)| g.sizes[a] == 0) {
            return Some(out);
        }
        loop {
            let t = NatTrans {
                components: comps.clone(),
            };
            if t.validate(c, f, g).is_ok() {
                if out.len() == limit {
                    return None;
                }
                out.push(t);
            }
            // odometer over all component tables
            let mut i = slots.len();
            loop {
                if i == 0 {
                    return Some(out);
                }
                i -= 1;
                let (a, x) = slots[i];
                comps[a][x] += 1;
                if comps[a][x] < g.sizes[a] {
                    break;
                }
                comps[a][x] = 0;
            }
        }
    }
}
