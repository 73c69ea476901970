//! The partial Int construction over a (partially) traced category.
//!
//! An object is a pair `(A⁺, A⁻)`; an arrow `(A⁺, A⁻) -> (B⁺, B⁻)` is a base
//! morphism `A⁺ ⊗ B⁻ -> B⁺ ⊗ A⁻`. Paths compose in one shot by wiring every
//! arrow into a single base morphism and tracing out the inner negative wires.

use crate::cats::{concat, CatError, Obj, TraceOutcome, TracedCategory};
use crate::mat::Tol;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntObject {
    pub plus: Obj,
    pub minus: Obj,
}

impl IntObject {
    pub fn new(plus: Obj, minus: Obj) -> IntObject {
        IntObject { plus, minus }
    }

    pub fn unit() -> IntObject {
        IntObject::new(vec![], vec![])
    }

    /// `a* = (A⁻, A⁺)`.
    pub fn dual(&self) -> IntObject {
        IntObject::new(self.minus.clone(), self.plus.clone())
    }

    /// `(A⁺ ⊗ B⁺, B⁻ ⊗ A⁻)`.
    pub fn tensor(&self, b: &IntObject) -> IntObject {
        IntObject::new(concat(&self.plus, &b.plus), concat(&b.minus, &self.minus))
    }
}

#[derive(Clone, Debug)]
pub struct IntArrow<M> {
    pub dom: IntObject,
    pub cod: IntObject,
    /// `dom.plus ⊗ cod.minus -> cod.plus ⊗ dom.minus`.
    pub base: M,
}

impl<M> IntArrow<M> {
    /// Checks the base endpoints against the stated shapes.
    pub fn new<C: TracedCategory<Mor = M>>(
        cat: &C,
        dom: IntObject,
        cod: IntObject,
        base: M,
    ) -> Result<IntArrow<M>, CatError> {
        let (bd, bc) = (cat.dom(&base), cat.cod(&base));
        let (ed, ec) = (concat(&dom.plus, &cod.minus), concat(&cod.plus, &dom.minus));
        if bd != ed {
            return Err(crate::cats::mismatch("Int arrow domain", &ed, &bd));
        }
        if bc != ec {
            return Err(crate::cats::mismatch("Int arrow codomain", &ec, &bc));
        }
        Ok(IntArrow { dom, cod, base })
    }
}

/// A path of arrows; `anchor` types the empty path.
#[derive(Clone, Debug)]
pub struct PathExpr<M> {
    pub anchor: IntObject,
    pub arrows: Vec<IntArrow<M>>,
}

impl<M: Clone> PathExpr<M> {
    pub fn new(arrows: Vec<IntArrow<M>>) -> PathExpr<M> {
        let anchor = arrows
            .first()
            .map_or_else(IntObject::unit, |a| a.dom.clone());
        PathExpr { anchor, arrows }
    }

    pub fn empty(anchor: IntObject) -> PathExpr<M> {
        PathExpr {
            anchor,
            arrows: vec![],
        }
    }
}

/// Wire labels: `P(i)` is `X_i⁺`, `M(i)` is `X_i⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Wire {
    P(usize),
    M(usize),
    /// Free label for the tensor and symmetry wirings.
    L(usize),
}

/// Evaluates a wiring diagram: boxes are applied in order, each consuming two
/// labelled wires from the front after a routing permutation.
struct Wiring<'a, C: TracedCategory> {
    cat: &'a C,
    wires: Vec<(Wire, Obj)>,
    acc: C::Mor,
}

impl<'a, C: TracedCategory> Wiring<'a, C> {
    fn start(cat: &'a C, wires: Vec<(Wire, Obj)>) -> Self {
        let all: Obj = wires.iter().flat_map(|(_, o)| o.iter().copied()).collect();
        Wiring {
            cat,
            acc: cat.identity(&all),
            wires,
        }
    }

    fn flat(&self) -> Obj {
        self.wires
            .iter()
            .flat_map(|(_, o)| o.iter().copied())
            .collect()
    }

    /// Routes the wires into the order `order` by an atom permutation.
    fn route(&mut self, order: &[Wire]) -> Result<(), CatError> {
        let mut offs = Vec::with_capacity(self.wires.len());
        let mut o = 0;
        for (_, obj) in &self.wires {
            offs.push(o);
            o += obj.len();
        }
        let mut perm = Vec::with_capacity(o);
        let mut next = Vec::with_capacity(order.len());
        for w in order {
            let i = self
                .wires
                .iter()
                .position(|(l, _)| l == w)
                .ok_or_else(|| CatError::ObjectMismatch(format!("missing wire {w:?}")))?;
            perm.extend(offs[i]..offs[i] + self.wires[i].1.len());
            next.push(self.wires[i].clone());
        }
        if next.len() != self.wires.len() {
            return Err(CatError::ObjectMismatch(
                "routing must use every wire".into(),
            ));
        }
        let p = self.cat.permutation(&self.flat(), &perm);
        self.acc = self.cat.compose(&p, &self.acc)?;
        self.wires = next;
        Ok(())
    }

    /// Applies `f: a ⊗ b -> c ⊗ d` to wires `(ia, ib)`, producing `(oc, od)` in front.
    fn apply(
        &mut self,
        f: &C::Mor,
        ia: Wire,
        ib: Wire,
        oc: (Wire, Obj),
        od: (Wire, Obj),
    ) -> Result<(), CatError> {
        let mut order = vec![ia, ib];
        order.extend(
            self.wires
                .iter()
                .map(|(l, _)| *l)
                .filter(|l| *l != ia && *l != ib),
        );
        self.route(&order)?;
        let rest: Vec<(Wire, Obj)> = self.wires[2..].to_vec();
        let rest_obj: Obj = rest.iter().flat_map(|(_, o)| o.iter().copied()).collect();
        let step = self.cat.tensor(f, &self.cat.identity(&rest_obj));
        self.acc = self.cat.compose(&step, &self.acc)?;
        self.wires = vec![oc, od];
        self.wires.extend(rest);
        Ok(())
    }

    fn finish(mut self, order: &[Wire]) -> Result<C::Mor, CatError> {
        self.route(order)?;
        Ok(self.acc)
    }
}

pub fn identity<C: TracedCategory>(cat: &C, a: &IntObject) -> IntArrow<C::Mor> {
    IntArrow {
        dom: a.clone(),
        cod: a.clone(),
        base: cat.identity(&concat(&a.plus, &a.minus)),
    }
}

fn check_path<M>(arrows: &[IntArrow<M>]) -> Result<(), CatError> {
    for w in arrows.windows(2) {
        if w[0].cod != w[1].dom {
            return Err(CatError::ObjectMismatch(format!(
                "path not composable: {:?} then {:?}",
                w[0].cod, w[1].dom
            )));
        }
    }
    Ok(())
}

/// The wiring `ε(f_1, .., f_m)` with domain `X_1⁺ ⊗ X_{m+1}⁻ ⊗ X_2⁻ ⊗ .. ⊗ X_m⁻`
/// and codomain `X_{m+1}⁺ ⊗ X_1⁻ ⊗ X_m⁻ ⊗ .. ⊗ X_2⁻`. Box `i` consumes
/// `(X_i⁺, X_{i+1}⁻)` and produces `(X_{i+1}⁺, X_i⁻)`.
pub fn epsilon_wiring<C: TracedCategory>(
    cat: &C,
    arrows: &[IntArrow<C::Mor>],
) -> Result<C::Mor, CatError> {
    let m = arrows.len();
    if m == 0 {
        return Err(CatError::ObjectMismatch("empty path has no wiring".into()));
    }
    check_path(arrows)?;
    // objects X_1 .. X_{m+1}, 1-based
    let obj = |i: usize| {
        if i <= m {
            &arrows[i - 1].dom
        } else {
            &arrows[m - 1].cod
        }
    };
    let mut wires = vec![
        (Wire::P(1), obj(1).plus.clone()),
        (Wire::M(m + 1), obj(m + 1).minus.clone()),
    ];
    wires.extend((2..=m).map(|i| (Wire::M(i), obj(i).minus.clone())));
    let mut w = Wiring::start(cat, wires);
    for (k, f) in arrows.iter().enumerate() {
        let i = k + 1;
        w.apply(
            &f.base,
            Wire::P(i),
            Wire::M(i + 1),
            (Wire::P(i + 1), obj(i + 1).plus.clone()),
            (Wire::M(i), obj(i).minus.clone()),
        )?;
    }
    let mut order = vec![Wire::P(m + 1), Wire::M(1)];
    order.extend((2..=m).rev().map(Wire::M));
    w.finish(&order)
}

/// The traced input of a path of length ≥ 2: `ε (1 ⊗ 1 ⊗ γ)` with its trace shape `(x, y, u)`.
pub fn wired<C: TracedCategory>(
    cat: &C,
    arrows: &[IntArrow<C::Mor>],
) -> Result<(C::Mor, Obj, Obj, Obj), CatError> {
    let m = arrows.len();
    let eps = epsilon_wiring(cat, arrows)?;
    let first = &arrows[0].dom;
    let last = &arrows[m - 1].cod;
    let inner: Vec<&Obj> = (2..=m).map(|i| &arrows[i - 1].dom.minus).collect();
    // γ: X_m⁻ ⊗ .. ⊗ X_2⁻ -> X_2⁻ ⊗ .. ⊗ X_m⁻
    let rev: Obj = inner.iter().rev().flat_map(|o| o.iter().copied()).collect();
    let mut offs = Vec::new();
    let mut o = 0;
    for obj in inner.iter().rev() {
        offs.push(o);
        o += obj.len();
    }
    let mut perm = Vec::with_capacity(o);
    for (k, obj) in inner.iter().enumerate() {
        let src = offs[inner.len() - 1 - k];
        perm.extend(src..src + obj.len());
    }
    let gamma = cat.permutation(&rev, &perm);
    let x = concat(&first.plus, &last.minus);
    let y = concat(&last.plus, &first.minus);
    let pre = cat.tensor(&cat.identity(&x), &gamma);
    Ok((cat.compose(&eps, &pre)?, x, y, rev))
}

/// One-shot composition `[f_1, .., f_n]`.
pub fn path_compose<C: TracedCategory>(
    cat: &C,
    p: &PathExpr<C::Mor>,
    tol: &Tol,
) -> Result<TraceOutcome<IntArrow<C::Mor>>, CatError> {
    match p.arrows.len() {
        0 => Ok(TraceOutcome::Defined(identity(cat, &p.anchor))),
        1 => Ok(TraceOutcome::Defined(p.arrows[0].clone())),
        m => {
            let (f, x, y, u) = wired(cat, &p.arrows)?;
            let (dom, cod) = (p.arrows[0].dom.clone(), p.arrows[m - 1].cod.clone());
            Ok(cat
                .trace(&f, &x, &y, &u, tol)?
                .map(|base| IntArrow { dom, cod, base }))
        }
    }
}

/// `[f, g]`.
pub fn compose2<C: TracedCategory>(
    cat: &C,
    f: &IntArrow<C::Mor>,
    g: &IntArrow<C::Mor>,
    tol: &Tol,
) -> Result<TraceOutcome<IntArrow<C::Mor>>, CatError> {
    path_compose(cat, &PathExpr::new(vec![f.clone(), g.clone()]), tol)
}

/// Left-nested binary composition; `None` if an intermediate trace is undefined.
pub fn iterated_binary<C: TracedCategory>(
    cat: &C,
    arrows: &[IntArrow<C::Mor>],
    tol: &Tol,
) -> Result<Option<IntArrow<C::Mor>>, CatError> {
    let mut it = arrows.iter();
    let mut acc = match it.next() {
        Some(a) => a.clone(),
        None => return Ok(None),
    };
    for g in it {
        match compose2(cat, &acc, g, tol)?.defined() {
            Some(h) => acc = h,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

/// `f ⊗ g: (A⁺B⁺, B⁻A⁻) -> (C⁺D⁺, D⁻C⁻)`; no trace involved.
pub fn int_tensor<C: TracedCategory>(
    cat: &C,
    f: &IntArrow<C::Mor>,
    g: &IntArrow<C::Mor>,
) -> Result<IntArrow<C::Mor>, CatError> {
    let (a, c) = (&f.dom, &f.cod);
    let (b, d) = (&g.dom, &g.cod);
    let l = Wire::L;
    let mut w = Wiring::start(
        cat,
        vec![
            (l(0), a.plus.clone()),
            (l(1), b.plus.clone()),
            (l(2), d.minus.clone()),
            (l(3), c.minus.clone()),
        ],
    );
    w.apply(
        &f.base,
        l(0),
        l(3),
        (l(4), c.plus.clone()),
        (l(5), a.minus.clone()),
    )?;
    w.apply(
        &g.base,
        l(1),
        l(2),
        (l(6), d.plus.clone()),
        (l(7), b.minus.clone()),
    )?;
    let base = w.finish(&[l(4), l(6), l(7), l(5)])?;
    Ok(IntArrow {
        dom: a.tensor(b),
        cod: c.tensor(d),
        base,
    })
}

/// `σ_{a,b}: a ⊗ b -> b ⊗ a`, the base symmetries on both polarities.
pub fn int_symmetry<C: TracedCategory>(cat: &C, a: &IntObject, b: &IntObject) -> IntArrow<C::Mor> {
    let (dom, cod) = (a.tensor(b), b.tensor(a));
    // base domain A⁺ B⁺ A⁻ B⁻, codomain B⁺ A⁺ B⁻ A⁻
    let parts = [&a.plus, &b.plus, &a.minus, &b.minus];
    let mut offs = [0usize; 4];
    for i in 1..4 {
        offs[i] = offs[i - 1] + parts[i - 1].len();
    }
    let flat: Obj = parts.iter().flat_map(|o| o.iter().copied()).collect();
    let perm: Vec<usize> = [1usize, 0, 3, 2]
        .iter()
        .flat_map(|&k| offs[k]..offs[k] + parts[k].len())
        .collect();
    IntArrow {
        dom,
        cod,
        base: cat.permutation(&flat, &perm),
    }
}

/// `η: I -> a ⊗ a*` and `ε: a* ⊗ a -> I`; both are base identities.
pub fn int_unit_counit<C: TracedCategory>(
    cat: &C,
    a: &IntObject,
) -> (IntArrow<C::Mor>, IntArrow<C::Mor>) {
    let d = a.dual();
    let eta = IntArrow {
        dom: IntObject::unit(),
        cod: a.tensor(&d),
        base: cat.identity(&concat(&a.plus, &a.minus)),
    };
    let eps = IntArrow {
        dom: d.tensor(a),
        cod: IntObject::unit(),
        base: cat.identity(&concat(&a.minus, &a.plus)),
    };
    (eta, eps)
}

/// `N(f): (x, I) -> (y, I)`.
pub fn embed_n<C: TracedCategory>(cat: &C, f: &C::Mor) -> IntArrow<C::Mor> {
    IntArrow {
        dom: IntObject::new(cat.dom(f), vec![]),
        cod: IntObject::new(cat.cod(f), vec![]),
        base: f.clone(),
    }
}

/// The path `[1 ⊗ η_{NU}, N(f) ⊗ 1, 1 ⊗ σ_{NU,NU*}, 1 ⊗ ε_{NU}]` for `f: x ⊗ u -> y ⊗ u`.
pub fn n_trace_path<C: TracedCategory>(
    cat: &C,
    f: &C::Mor,
    x: &[usize],
    y: &[usize],
    u: &[usize],
) -> Result<PathExpr<C::Mor>, CatError> {
    let (na, nb, nu) = (
        IntObject::new(x.to_vec(), vec![]),
        IntObject::new(y.to_vec(), vec![]),
        IntObject::new(u.to_vec(), vec![]),
    );
    let nus = nu.dual();
    let (eta, eps) = int_unit_counit(cat, &nu);
    let p = vec![
        int_tensor(cat, &identity(cat, &na), &eta)?,
        int_tensor(cat, &embed_n(cat, f), &identity(cat, &nus))?,
        int_tensor(cat, &identity(cat, &nb), &int_symmetry(cat, &nu, &nus))?,
        int_tensor(cat, &identity(cat, &nb), &eps)?,
    ];
    check_path(&p)?;
    Ok(PathExpr::new(p))
}

/// Both sides of `N(Tr^u f) = [1 ⊗ η; f ⊗ 1; 1 ⊗ σ; 1 ⊗ ε]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NTraceCheck {
    pub base_defined: bool,
    pub path_defined: bool,
    pub deviation: Option<f64>,
}

impl NTraceCheck {
    pub fn pass(&self, tol: &Tol) -> bool {
        self.base_defined == self.path_defined && self.deviation.is_none_or(|d| d <= tol.eq_tol)
    }
}

pub fn check_n_trace_preservation<C: TracedCategory>(
    cat: &C,
    f: &C::Mor,
    x: &[usize],
    y: &[usize],
    u: &[usize],
    tol: &Tol,
) -> Result<NTraceCheck, CatError> {
    let base = cat.trace(f, x, y, u, tol)?.defined();
    let path = path_compose(cat, &n_trace_path(cat, f, x, y, u)?, tol)?.defined();
    let deviation = match (&base, &path) {
        (Some(b), Some(p)) => Some(cat.distance(b, &p.base)),
        _ => None,
    };
    Ok(NTraceCheck {
        base_defined: base.is_some(),
        path_defined: path.is_some(),
        deviation,
    })
}

/// Distance between arrows; infinite when the Int types differ.
pub fn arrow_distance<C: TracedCategory>(
    cat: &C,
    f: &IntArrow<C::Mor>,
    g: &IntArrow<C::Mor>,
) -> f64 {
    if f.dom != g.dom || f.cod != g.cod {
        return f64::INFINITY;
    }
    cat.distance(&f.base, &g.base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cats::gen::{SampleRng, Sampler};
    use crate::cats::{CpmsTensor, FhilbTensor, VectOplus};
    use crate::mat::from_real;
    use rand::SeedableRng;

    fn tol() -> Tol {
        Tol::default()
    }

    fn arrow<C: Sampler>(
        cat: &C,
        rng: &mut SampleRng,
        a: &IntObject,
        b: &IntObject,
    ) -> IntArrow<C::Mor> {
        let base = cat.random_mor(rng, &concat(&a.plus, &b.minus), &concat(&b.plus, &a.minus));
        IntArrow::new(cat, a.clone(), b.clone(), base).unwrap()
    }

    #[test]
    fn singleton_and_empty_paths() {
        let mut rng = SampleRng::seed_from_u64(1);
        let (a, b) = (
            IntObject::new(vec![2], vec![1]),
            IntObject::new(vec![1], vec![2]),
        );
        let f = arrow(&VectOplus::INV, &mut rng, &a, &b);
        let p = path_compose(&VectOplus::INV, &PathExpr::new(vec![f.clone()]), &tol()).unwrap();
        assert_eq!(p.defined().unwrap().base, f.base);
        let e = path_compose(&VectOplus::INV, &PathExpr::empty(a.clone()), &tol()).unwrap();
        assert_eq!(e.defined().unwrap().base, VectOplus::INV.identity(&[2, 1]));
    }

    #[test]
    fn zero_minus_parts_compose_in_base() {
        let mut rng = SampleRng::seed_from_u64(2);
        let (a, b, c) = (
            IntObject::new(vec![2], vec![]),
            IntObject::new(vec![3], vec![]),
            IntObject::new(vec![1], vec![]),
        );
        let f = arrow(&VectOplus::INV, &mut rng, &a, &b);
        let g = arrow(&VectOplus::INV, &mut rng, &b, &c);
        let h = compose2(&VectOplus::INV, &f, &g, &tol())
            .unwrap()
            .defined()
            .unwrap();
        let expect = VectOplus::INV.compose(&g.base, &f.base).unwrap();
        assert!(VectOplus::INV.distance(&h.base, &expect) < 1e-12);
    }

    #[test]
    fn m2_matches_anchor_formula() {
        let cat = FhilbTensor;
        let mut rng = SampleRng::seed_from_u64(3);
        let x: Vec<IntObject> = vec![
            IntObject::new(vec![2], vec![1]),
            IntObject::new(vec![1], vec![2]),
            IntObject::new(vec![2], vec![3]),
        ];
        let f = arrow(&cat, &mut rng, &x[0], &x[1]);
        let g = arrow(&cat, &mut rng, &x[1], &x[2]);
        let lhs = compose2(&cat, &f, &g, &tol()).unwrap().defined().unwrap();
        // Tr^{X2⁻}((1⊗σ)(g⊗1)(1⊗σ)(f⊗1)(1⊗σ)) on X1⁺ X3⁻ X2⁻
        let (p1, m1, m2, m3, p2, p3) = (
            &x[0].plus,
            &x[0].minus,
            &x[1].minus,
            &x[2].minus,
            &x[1].plus,
            &x[2].plus,
        );
        let s1 = cat.tensor(&cat.identity(p1), &cat.symmetry(m3, m2));
        let f1 = cat.tensor(&f.base, &cat.identity(m3));
        let s2 = cat.tensor(&cat.identity(p2), &cat.symmetry(m1, m3));
        let g1 = cat.tensor(&g.base, &cat.identity(m1));
        let s3 = cat.tensor(&cat.identity(p3), &cat.symmetry(m2, m1));
        let all = cat.compose_all(&[&s1, &f1, &s2, &g1, &s3]).unwrap();
        let rhs = cat
            .trace(&all, &concat(p1, m3), &concat(p3, m1), m2, &tol())
            .unwrap()
            .defined()
            .unwrap();
        assert!(cat.distance(&lhs.base, &rhs) < 1e-12);
    }

    #[test]
    fn three_paths_match_binary_on_total_base() {
        let cat = CpmsTensor;
        let mut rng = SampleRng::seed_from_u64(4);
        let objs = [
            IntObject::new(vec![2], vec![1]),
            IntObject::new(vec![1], vec![2]),
            IntObject::new(vec![2], vec![1]),
            IntObject::new(vec![1], vec![1]),
        ];
        let p: Vec<_> = (0..3)
            .map(|i| arrow(&cat, &mut rng, &objs[i], &objs[i + 1]))
            .collect();
        let one = path_compose(&cat, &PathExpr::new(p.clone()), &tol())
            .unwrap()
            .defined()
            .unwrap();
        let bin = iterated_binary(&cat, &p, &tol()).unwrap().unwrap();
        assert!(arrow_distance(&cat, &one, &bin) < 1e-10);
    }

    #[test]
    fn singular_feedback_is_undefined() {
        // f and g pass the fed-back wire straight through: I - f22 = 0
        let a = IntObject::new(vec![], vec![]);
        let b = IntObject::new(vec![1], vec![1]);
        let c = IntObject::new(vec![], vec![]);
        let one = VectOplus::INV.morphism(&[1], &[1], from_real(1, 1, &[1.0]));
        let f = IntArrow::new(&VectOplus::INV, a, b.clone(), one.clone()).unwrap();
        let g = IntArrow::new(&VectOplus::INV, b, c, one).unwrap();
        let r = compose2(&VectOplus::INV, &f, &g, &tol()).unwrap();
        assert!(!r.is_defined());
    }

    #[test]
    fn snake_and_symmetry_laws() {
        let cat = VectOplus::INV;
        let a = IntObject::new(vec![2, 1], vec![3]);
        let (eta, eps) = int_unit_counit(&cat, &a);
        let ida = identity(&cat, &a);
        let l = int_tensor(&cat, &eta, &ida).unwrap();
        let r = int_tensor(&cat, &ida, &eps).unwrap();
        let s = compose2(&cat, &l, &r, &tol()).unwrap().defined().unwrap();
        assert!(arrow_distance(&cat, &s, &ida) < 1e-12);
        let ad = identity(&cat, &a.dual());
        let l = int_tensor(&cat, &ad, &eta).unwrap();
        let r = int_tensor(&cat, &eps, &ad).unwrap();
        let s = compose2(&cat, &l, &r, &tol()).unwrap().defined().unwrap();
        assert!(arrow_distance(&cat, &s, &ad) < 1e-12);
        let b = IntObject::new(vec![1], vec![2]);
        let ss = compose2(
            &cat,
            &int_symmetry(&cat, &a, &b),
            &int_symmetry(&cat, &b, &a),
            &tol(),
        )
        .unwrap();
        assert!(
            arrow_distance(&cat, &ss.defined().unwrap(), &identity(&cat, &a.tensor(&b))) < 1e-12
        );
    }

    #[test]
    fn n_preserves_yanking() {
        let cat = VectOplus::INV;
        let u = vec![2];
        let s = cat.symmetry(&u, &u);
        let r = check_n_trace_preservation(&cat, &s, &u, &u, &u, &tol()).unwrap();
        assert!(r.pass(&tol()) && r.base_defined, "{r:?}");
        let id = cat.identity(&[1, 1]);
        let r = check_n_trace_preservation(&cat, &id, &[1], &[1], &[1], &tol()).unwrap();
        assert!(!r.base_defined && !r.path_defined);
    }
}
