//! Finite combinatorial completions: the coproduct completion `C⁺`, the free
//! affine symmetric monoidal category `Fwm(K)` over a discrete category of
//! Hilbert dimensions, the embedding `Φ: FinSet -> Q″ = Fwm(K)⁺` and the
//! functor `Ψ: Q″ -> Q` into superoperators.

use crate::cats::cpm::{from_kraus_grid, sq_total};
use crate::cats::cpms::KrausMorphism;
use crate::cats::{BlockMorphism, CatError};
use crate::mat::{self, Mat};
use std::fmt::Debug;

/// The component category of a coproduct completion.
pub trait Component {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + PartialEq + Debug;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError>;
    fn unit(&self) -> Self::Obj;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    /// Every morphism `a -> b`.
    fn homs(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
}

/// A finite sequence of Hilbert dimensions; `[]` is the unit.
pub type Seq = Vec<usize>;

/// A morphism `V -> W` of `Fwm(K)`: an injection `φ: [|W|] -> [|V|]` with `V[φ(i)] = W[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InjMorphism {
    pub dom: Seq,
    pub cod: Seq,
    pub phi: Vec<usize>,
}

impl InjMorphism {
    pub fn new(dom: Seq, cod: Seq, phi: Vec<usize>) -> Result<InjMorphism, CatError> {
        if phi.len() != cod.len() {
            return Err(CatError::ObjectMismatch(format!(
                "injection table {phi:?} for codomain {cod:?}"
            )));
        }
        let mut seen = vec![false; dom.len()];
        for (i, &p) in phi.iter().enumerate() {
            if p >= dom.len() || seen[p] || dom[p] != cod[i] {
                return Err(CatError::ObjectMismatch(format!(
                    "{phi:?} is not a labelled injection {cod:?} -> {dom:?}"
                )));
            }
            seen[p] = true;
        }
        Ok(InjMorphism { dom, cod, phi })
    }

    /// The unique map `V -> []`.
    pub fn terminal(dom: Seq) -> InjMorphism {
        InjMorphism {
            dom,
            cod: vec![],
            phi: vec![],
        }
    }
}

/// `Fwm(K)` with `K` the discrete category on positive dimensions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Fwm;

impl Fwm {
    /// `σ: v ⊗ w -> w ⊗ v`.
    pub fn symmetry(&self, v: &Seq, w: &Seq) -> InjMorphism {
        let (m, n) = (v.len(), w.len());
        let phi = (0..m + n)
            .map(|i| if i < n { m + i } else { i - n })
            .collect();
        InjMorphism {
            dom: [v.as_slice(), w.as_slice()].concat(),
            cod: [w.as_slice(), v.as_slice()].concat(),
            phi,
        }
    }
}

fn injections(
    dom: &Seq,
    cod: &Seq,
    i: usize,
    used: &mut Vec<bool>,
    cur: &mut Vec<usize>,
    out: &mut Vec<InjMorphism>,
) {
    if i == cod.len() {
        out.push(InjMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            phi: cur.clone(),
        });
        return;
    }
    for p in 0..dom.len() {
        if !used[p] && dom[p] == cod[i] {
            used[p] = true;
            cur.push(p);
            injections(dom, cod, i + 1, used, cur, out);
            cur.pop();
            used[p] = false;
        }
    }
}

impl Component for Fwm {
    type Obj = Seq;
    type Mor = InjMorphism;

    fn dom(&self, f: &InjMorphism) -> Seq {
        f.dom.clone()
    }

    fn cod(&self, f: &InjMorphism) -> Seq {
        f.cod.clone()
    }

    fn identity(&self, x: &Seq) -> InjMorphism {
        InjMorphism {
            dom: x.clone(),
            cod: x.clone(),
            phi: (0..x.len()).collect(),
        }
    }

    /// For `f = φ: V -> W` and `g = ξ: W -> Z` the index function is `φ ∘ ξ`.
    fn compose(&self, g: &InjMorphism, f: &InjMorphism) -> Result<InjMorphism, CatError> {
        if f.cod != g.dom {
            return Err(crate::cats::mismatch("Fwm compose", &f.cod, &g.dom));
        }
        Ok(InjMorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            phi: g.phi.iter().map(|&i| f.phi[i]).collect(),
        })
    }

    fn unit(&self) -> Seq {
        vec![]
    }

    fn tensor_obj(&self, a: &Seq, b: &Seq) -> Seq {
        [a.as_slice(), b.as_slice()].concat()
    }

    fn tensor(&self, f: &InjMorphism, g: &InjMorphism) -> InjMorphism {
        let n = f.dom.len();
        InjMorphism {
            dom: self.tensor_obj(&f.dom, &g.dom),
            cod: self.tensor_obj(&f.cod, &g.cod),
            phi: f
                .phi
                .iter()
                .copied()
                .chain(g.phi.iter().map(|&p| p + n))
                .collect(),
        }
    }

    fn homs(&self, a: &Seq, b: &Seq) -> Vec<InjMorphism> {
        let mut out = Vec::new();
        injections(
            a,
            b,
            0,
            &mut vec![false; a.len()],
            &mut Vec::new(),
            &mut out,
        );
        out
    }
}

/// A finite family `{V_a}_{a ∈ A}` with `A = {0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyObject<O> {
    pub members: Vec<O>,
}

impl<O> FamilyObject<O> {
    pub fn new(members: Vec<O>) -> FamilyObject<O> {
        FamilyObject { members }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// `(φ, {f_a})` with `f_a: V_a -> W_{φ(a)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyMorphism<O, M> {
    pub dom: FamilyObject<O>,
    pub cod: FamilyObject<O>,
    pub phi: Vec<usize>,
    pub components: Vec<M>,
}

/// The coproduct completion of a monoidal component category.
#[derive(Clone, Copy, Debug, Default)]
pub struct CPlus<K> {
    pub comp: K,
}

pub type FamMor<K> = FamilyMorphism<<K as Component>::Obj, <K as Component>::Mor>;
pub type FamObj<K> = FamilyObject<<K as Component>::Obj>;

impl<K: Component> CPlus<K> {
    pub fn new(comp: K) -> Self {
        CPlus { comp }
    }

    /// Checks the typing of a family morphism.
    pub fn validate(&self, f: &FamMor<K>) -> Result<(), CatError> {
        if f.phi.len() != f.dom.size() || f.components.len() != f.dom.size() {
            return Err(CatError::ObjectMismatch("family morphism arity".into()));
        }
        for (a, (&b, c)) in f.phi.iter().zip(&f.components).enumerate() {
            if b >= f.cod.size()
                || self.comp.dom(c) != f.dom.members[a]
                || self.comp.cod(c) != f.cod.members[b]
            {
                return Err(CatError::ObjectMismatch(format!(
                    "component {a} is not typed by the index map"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(&self, x: &FamObj<K>) -> FamMor<K> {
        FamilyMorphism {
            dom: x.clone(),
            cod: x.clone(),
            phi: (0..x.size()).collect(),
            components: x.members.iter().map(|m| self.comp.identity(m)).collect(),
        }
    }

    /// `(ψ ∘ φ, {g_{φ(a)} ∘ f_a})`.
    pub fn compose(&self, g: &FamMor<K>, f: &FamMor<K>) -> Result<FamMor<K>, CatError> {
        if f.cod != g.dom {
            return Err(CatError::ObjectMismatch(
                "C+ compose: codomain and domain differ".into(),
            ));
        }
        let components = f
            .components
            .iter()
            .zip(&f.phi)
            .map(|(fa, &b)| self.comp.compose(&g.components[b], fa))
            .collect::<Result<_, _>>()?;
        Ok(FamilyMorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            phi: f.phi.iter().map(|&b| g.phi[b]).collect(),
            components,
        })
    }

    /// `V ⊕ W` with its two injections.
    pub fn coproduct(&self, v: &FamObj<K>, w: &FamObj<K>) -> (FamObj<K>, FamMor<K>, FamMor<K>) {
        let s = FamilyObject::new([v.members.as_slice(), w.members.as_slice()].concat());
        let i1 = FamilyMorphism {
            dom: v.clone(),
            cod: s.clone(),
            phi: (0..v.size()).collect(),
            components: v.members.iter().map(|m| self.comp.identity(m)).collect(),
        };
        let i2 = FamilyMorphism {
            dom: w.clone(),
            cod: s.clone(),
            phi: (v.size()..v.size() + w.size()).collect(),
            components: w.members.iter().map(|m| self.comp.identity(m)).collect(),
        };
        (s, i1, i2)
    }

    /// `[f, g]: V ⊕ W -> Z`.
    pub fn copair(&self, f: &FamMor<K>, g: &FamMor<K>) -> Result<FamMor<K>, CatError> {
        if f.cod != g.cod {
            return Err(CatError::ObjectMismatch("copair: codomains differ".into()));
        }
        Ok(FamilyMorphism {
            dom: FamilyObject::new([f.dom.members.as_slice(), g.dom.members.as_slice()].concat()),
            cod: f.cod.clone(),
            phi: [f.phi.as_slice(), g.phi.as_slice()].concat(),
            components: [f.components.as_slice(), g.components.as_slice()].concat(),
        })
    }

    pub fn unit(&self) -> FamObj<K> {
        FamilyObject::new(vec![self.comp.unit()])
    }

    /// `{V_a ⊗ W_b}` indexed lexicographically by `(a, b)`.
    pub fn tensor_obj(&self, v: &FamObj<K>, w: &FamObj<K>) -> FamObj<K> {
        let mut m = Vec::with_capacity(v.size() * w.size());
        for a in &v.members {
            for b in &w.members {
                m.push(self.comp.tensor_obj(a, b));
            }
        }
        FamilyObject::new(m)
    }

    pub fn tensor(&self, f: &FamMor<K>, g: &FamMor<K>) -> FamMor<K> {
        let n = g.cod.size();
        let mut phi = Vec::with_capacity(f.phi.len() * g.phi.len());
        let mut components = Vec::with_capacity(phi.capacity());
        for (fa, &pa) in f.components.iter().zip(&f.phi) {
            for (gb, &pb) in g.components.iter().zip(&g.phi) {
                phi.push(pa * n + pb);
                components.push(self.comp.tensor(fa, gb));
            }
        }
        FamilyMorphism {
            dom: self.tensor_obj(&f.dom, &g.dom),
            cod: self.tensor_obj(&f.cod, &g.cod),
            phi,
            components,
        }
    }

    /// The distributor `D = (δ, 1): A⊗C ⊕ B⊗C -> (A ⊕ B)⊗C`.
    pub fn distributor(&self, a: &FamObj<K>, b: &FamObj<K>, c: &FamObj<K>) -> FamMor<K> {
        let dom = FamilyObject::new(
            [self.tensor_obj(a, c).members, self.tensor_obj(b, c).members].concat(),
        );
        let (ab, _, _) = self.coproduct(a, b);
        let cod = self.tensor_obj(&ab, c);
        // both sides enumerate the pairs (x, z) with x running over A then B, so δ is the identity table
        let phi = (0..dom.size()).collect();
        let components = dom.members.iter().map(|m| self.comp.identity(m)).collect();
        FamilyMorphism {
            dom,
            cod,
            phi,
            components,
        }
    }

    /// Inverse of a morphism whose index map is a bijection with invertible components.
    pub fn invert_bijection(&self, f: &FamMor<K>) -> Option<FamMor<K>> {
        if f.dom.size() != f.cod.size() || !mat::is_permutation(&f.phi) {
            return None;
        }
        let inv = mat::invert_perm(&f.phi);
        let mut components = Vec::with_capacity(inv.len());
        for &a in &inv {
            let c = &f.components[a];
            if self.comp.dom(c) != self.comp.cod(c) || *c != self.comp.identity(&self.comp.dom(c)) {
                return None;
            }
            components.push(c.clone());
        }
        Some(FamilyMorphism {
            dom: f.cod.clone(),
            cod: f.dom.clone(),
            phi: inv,
            components,
        })
    }

    /// Every morphism `v -> w`, indexed by functions in lexicographic order.
    pub fn homs(&self, v: &FamObj<K>, w: &FamObj<K>) -> Vec<FamMor<K>> {
        let table: Vec<Vec<Vec<K::Mor>>> = v
            .members
            .iter()
            .map(|a| w.members.iter().map(|b| self.comp.homs(a, b)).collect())
            .collect();
        let mut out = Vec::new();
        let mut phi = Vec::with_capacity(v.size());
        let mut comps = Vec::with_capacity(v.size());
        fn rec<O: Clone, M: Clone>(
            v: &FamilyObject<O>,
            w: &FamilyObject<O>,
            table: &[Vec<Vec<M>>],
            phi: &mut Vec<usize>,
            comps: &mut Vec<M>,
            out: &mut Vec<FamilyMorphism<O, M>>,
        ) {
            let a = phi.len();
            if a == v.size() {
                out.push(FamilyMorphism {
                    dom: v.clone(),
                    cod: w.clone(),
                    phi: phi.clone(),
                    components: comps.clone(),
                });
                return;
            }
            for b in 0..w.size() {
                for m in &table[a][b] {
                    phi.push(b);
                    comps.push(m.clone());
                    rec(v, w, table, phi, comps, out);
                    comps.pop();
                    phi.pop();
                }
            }
        }
        rec(v, w, &table, &mut phi, &mut comps, &mut out);
        out
    }
}

/// `Q″ = Fwm(K)⁺`.
pub type Qpp = CPlus<Fwm>;
pub type QppObject = FamilyObject<Seq>;
pub type QppMorphism = FamilyMorphism<Seq, InjMorphism>;

pub const QPP: Qpp = CPlus { comp: Fwm };

/// `Φ(A) = {I}_{a ∈ A}`.
pub fn phi_obj(a: usize) -> QppObject {
    FamilyObject::new(vec![vec![]; a])
}

/// `Φ(h) = (h, {1_I})` for `h: A -> B`.
pub fn phi_map(h: &[usize], b: usize) -> QppMorphism {
    FamilyMorphism {
        dom: phi_obj(h.len()),
        cod: phi_obj(b),
        phi: h.to_vec(),
        components: vec![InjMorphism::terminal(vec![]); h.len()],
    }
}

/// All functions `[a] -> [b]` in lexicographic order.
pub fn all_functions(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(a)];
    for _ in 0..a {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..b).map(move |x| {
                    let mut g = f.clone();
                    g.push(x);
                    g
                })
            })
            .collect();
    }
    out
}

/// `F̂(f)`: bring the selected factors `φ(0), .., φ(m-1)` to the front and trace out the rest.
pub fn hat_f(f: &InjMorphism) -> KrausMorphism {
    let n = f.dom.len();
    let rest: Vec<usize> = (0..n).filter(|i| !f.phi.contains(i)).collect();
    let perm: Vec<usize> = f.phi.iter().copied().chain(rest.iter().copied()).collect();
    let p = mat::factor_permutation(&f.dom, &perm);
    let d_sel: usize = f.cod.iter().product();
    let d_rest: usize = rest.iter().map(|&i| f.dom[i]).product();
    let kraus = (0..d_rest)
        .map(|j| {
            // (I_sel ⊗ <j|) as a d_sel × (d_sel·d_rest) matrix
            let sel = Mat::from_fn(d_sel, d_sel * d_rest, |r, c| {
                if c == r * d_rest + j {
                    mat::ONE
                } else {
                    mat::ZERO
                }
            });
            sel * &p
        })
        .collect();
    KrausMorphism::new(f.dom.clone(), f.cod.clone(), kraus)
}

/// Product dimension of each member.
pub fn psi_obj(x: &QppObject) -> Vec<usize> {
    x.members.iter().map(|s| s.iter().product()).collect()
}

/// `Ψ(φ, f)`: block `(φ(a), a)` is `F̂(f_a)`, all other blocks vanish.
pub fn psi_map(f: &QppMorphism) -> BlockMorphism {
    let (dom, cod) = (psi_obj(&f.dom), psi_obj(&f.cod));
    let mut grid: Vec<Vec<Vec<Mat>>> = vec![vec![Vec::new(); dom.len()]; cod.len()];
    for (a, (c, &b)) in f.components.iter().zip(&f.phi).enumerate() {
        grid[b][a] = hat_f(c).kraus;
    }
    from_kraus_grid(&dom, &cod, &grid)
}

/// Tensor of direct-sum CP matrices: block `((i,k),(j,l))` is `F_ij ⊗ G_kl`.
pub fn cpm_family_tensor(f: &BlockMorphism, g: &BlockMorphism) -> BlockMorphism {
    let pair = |x: &[usize], y: &[usize]| -> Vec<usize> {
        x.iter()
            .flat_map(|a| y.iter().map(move |b| a * b))
            .collect()
    };
    let (dom, cod) = (pair(&f.dom, &g.dom), pair(&f.cod, &g.cod));
    let mut data = mat::zeros(sq_total(&cod), sq_total(&dom));
    let offs = |x: &[usize]| -> Vec<usize> {
        x.iter()
            .scan(0, |acc, d| {
                let o = *acc;
                *acc += d * d;
                Some(o)
            })
            .collect()
    };
    let (ro, co) = (offs(&cod), offs(&dom));
    let (fro, fco, gro, gco) = (offs(&f.cod), offs(&f.dom), offs(&g.cod), offs(&g.dom));
    for i in 0..f.cod.len() {
        for j in 0..f.dom.len() {
            let (fi, fj) = (f.cod[i], f.dom[j]);
            let fb = mat::block(&f.data, fro[i], fco[j], fi * fi, fj * fj);
            if mat::max_abs(&fb) == 0.0 {
                continue;
            }
            for k in 0..g.cod.len() {
                for l in 0..g.dom.len() {
                    let (gk, gl) = (g.cod[k], g.dom[l]);
                    let gb = mat::block(&g.data, gro[k], gco[l], gk * gk, gl * gl);
                    if mat::max_abs(&gb) == 0.0 {
                        continue;
                    }
                    let t = mat::superop_tensor(&fb, fj, fi, &gb, gl, gk);
                    let (r, c) = (ro[i * g.cod.len() + k], co[j * g.dom.len() + l]);
                    data.view_mut((r, c), t.shape()).copy_from(&t);
                }
            }
        }
    }
    BlockMorphism::new(dom, cod, data)
}

/// Largest blockwise distance between `Ψ(f ⊗ g)` and `Ψf ⊗ Ψg`, computed block by block.
pub fn psi_monoidal_defect(f: &QppMorphism, g: &QppMorphism) -> f64 {
    let fg = QPP.tensor(f, g);
    if psi_obj(&fg.dom) != psi_obj(&QPP.tensor_obj(&f.dom, &g.dom))
        || psi_obj(&fg.cod) != psi_obj(&QPP.tensor_obj(&f.cod, &g.cod))
    {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    let n = g.dom.size();
    for (a, fa) in f.components.iter().enumerate() {
        let tf = hat_f(fa);
        for (b, gb) in g.components.iter().enumerate() {
            let tg = hat_f(gb);
            let lhs = hat_f(&fg.components[a * n + b]).transfer();
            let rhs = mat::superop_tensor(
                &tf.transfer(),
                tf.d_in(),
                tf.d_out(),
                &tg.transfer(),
                tg.d_in(),
                tg.d_out(),
            );
            let idx_ok = fg.phi[a * n + b] == f.phi[a] * g.cod.size() + g.phi[b];
            worst = worst.max(if idx_ok {
                mat::max_abs_diff(&lhs, &rhs)
            } else {
                f64::INFINITY
            });
        }
    }
    worst
}

/// Counts for the multiplicative kernel condition at `(b, c, c′)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelCheck {
    pub left: usize,
    pub right: usize,
    pub product: usize,
    /// The pairing is injective and hits every morphism `Φ(b) -> c ⊗ c′`.
    pub bijective: bool,
}

/// `⟨ψ, ψ′⟩: Φ(b) -> c ⊗ c′`, sending `x` to the lexicographic pair `(ψ(x), ψ′(x))`.
pub fn pair_maps(p: &QppMorphism, q: &QppMorphism) -> Result<QppMorphism, CatError> {
    if p.dom != q.dom {
        return Err(CatError::ObjectMismatch(
            "pairing needs a common domain".into(),
        ));
    }
    let n = q.cod.size();
    let cod = QPP.tensor_obj(&p.cod, &q.cod);
    let phi: Vec<usize> = p.phi.iter().zip(&q.phi).map(|(a, b)| a * n + b).collect();
    let components = phi
        .iter()
        .zip(&p.dom.members)
        .map(|(&t, d)| {
            let target = cod.members[t].clone();
            if target.is_empty() && d.is_empty() {
                Ok(InjMorphism::terminal(vec![]))
            } else {
                Err(CatError::ObjectMismatch(
                    "pairing leaves the empty members".into(),
                ))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(FamilyMorphism {
        dom: p.dom.clone(),
        cod,
        phi,
        components,
    })
}

pub fn kernel_bijection_check(
    b: usize,
    c: &QppObject,
    c2: &QppObject,
) -> Result<KernelCheck, CatError> {
    let pb = phi_obj(b);
    let left = QPP.homs(&pb, c);
    let right = QPP.homs(&pb, c2);
    let prod = QPP.homs(&pb, &QPP.tensor_obj(c, c2));
    let mut images = Vec::with_capacity(left.len() * right.len());
    for p in &left {
        for q in &right {
            images.push(pair_maps(p, q)?.phi);
        }
    }
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let mut targets: Vec<Vec<usize>> = prod.iter().map(|m| m.phi.clone()).collect();
    targets.sort();
    Ok(KernelCheck {
        left: left.len(),
        right: right.len(),
        product: prod.len(),
        bijective: sorted.len() == images.len() && sorted == targets,
    })
}

/// Every sequence over `dims` of length at most `max_len`.
pub fn all_seqs(dims: &[usize], max_len: usize) -> Vec<Seq> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s: &Seq| {
                dims.iter().map(move |&d| {
                    let mut t = s.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every family of at most `max_members` members drawn from `seqs`.
pub fn all_families(seqs: &[Seq], max_members: usize) -> Vec<QppObject> {
    let mut out = vec![FamilyObject::new(vec![])];
    let mut layer: Vec<Vec<Seq>> = vec![vec![]];
    for _ in 0..max_members {
        layer = layer
            .iter()
            .flat_map(|m| {
                seqs.iter().map(move |s| {
                    let mut t = m.clone();
                    t.push(s.clone());
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned().map(FamilyObject::new));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cats::cpm::trace_preservation_defect;
    use crate::cats::{CpmOplus, CpmsTensor, TracedCategory};

    #[test]
    fn fwm_composition_test_vector() {
        let f = InjMorphism::new(vec![2, 3, 2], vec![2, 2], vec![0, 2]).unwrap();
        let g = InjMorphism::new(vec![2, 2], vec![2, 2], vec![1, 0]).unwrap();
        let h = Fwm.compose(&g, &f).unwrap();
        // 1-based {1 ↦ 3, 2 ↦ 1}
        assert_eq!(h.phi, vec![2, 0]);
        let t = InjMorphism::terminal(vec![2, 2]);
        assert_eq!(
            Fwm.compose(&t, &f).unwrap(),
            InjMorphism::terminal(vec![2, 3, 2])
        );
    }

    #[test]
    fn fwm_symmetry_table() {
        let s = Fwm.symmetry(&vec![1, 2], &vec![3]);
        // 1-based (3, 1, 2)
        assert_eq!(s.phi, vec![2, 0, 1]);
        assert!(InjMorphism::new(s.dom.clone(), s.cod.clone(), s.phi.clone()).is_ok());
    }

    #[test]
    fn fwm_unit_is_terminal() {
        for x in all_seqs(&[1, 2], 3) {
            assert_eq!(Fwm.homs(&x, &vec![]).len(), 1);
            if !x.is_empty() {
                assert!(Fwm.homs(&vec![], &x).is_empty());
            }
        }
    }

    #[test]
    fn cplus_compose_tables() {
        let a = FamilyObject::new(vec![vec![1], vec![2]]);
        let b = FamilyObject::new(vec![vec![]]);
        let c = FamilyObject::new(vec![vec![]]);
        let f = FamilyMorphism {
            dom: a.clone(),
            cod: b.clone(),
            phi: vec![0, 0],
            components: vec![
                InjMorphism::terminal(vec![1]),
                InjMorphism::terminal(vec![2]),
            ],
        };
        let g = QPP.identity(&b);
        let g = FamilyMorphism { cod: c, ..g };
        let h = QPP.compose(&g, &f).unwrap();
        assert_eq!(h.phi, vec![0, 0]);
        QPP.validate(&h).unwrap();
        assert_eq!(QPP.compose(&QPP.identity(&b), &f).unwrap(), f);
    }

    #[test]
    fn coproduct_injections_and_copair() {
        let v = FamilyObject::new(vec![vec![1], vec![2]]);
        let w = FamilyObject::new(vec![vec![], vec![1], vec![2]]);
        let (s, i1, i2) = QPP.coproduct(&v, &w);
        assert_eq!(s.size(), 5);
        assert_eq!(i1.phi, vec![0, 1]);
        assert_eq!(i2.phi, vec![2, 3, 4]);
        let z = FamilyObject::new(vec![vec![]]);
        let f = QPP.homs(&v, &z).remove(0);
        let g = QPP.homs(&w, &z).remove(0);
        let fg = QPP.copair(&f, &g).unwrap();
        assert_eq!(QPP.compose(&fg, &i1).unwrap(), f);
        assert_eq!(QPP.compose(&fg, &i2).unwrap(), g);
    }

    #[test]
    fn distributor_is_invertible() {
        let fams = all_families(&all_seqs(&[1, 2], 1), 2);
        for a in &fams {
            for b in &fams {
                for c in fams.iter().take(5) {
                    let d = QPP.distributor(a, b, c);
                    QPP.validate(&d).unwrap();
                    let di = QPP.invert_bijection(&d).unwrap();
                    assert_eq!(QPP.compose(&d, &di).unwrap(), QPP.identity(&d.cod));
                }
            }
        }
    }

    #[test]
    fn phi_hom_counts() {
        for a in 0..=3 {
            for b in 0..=3 {
                let homs = QPP.homs(&phi_obj(a), &phi_obj(b));
                assert_eq!(homs.len(), b.pow(a as u32));
                let images: Vec<_> = all_functions(a, b).iter().map(|h| phi_map(h, b)).collect();
                assert_eq!(images, homs);
            }
        }
    }

    #[test]
    fn hat_f_examples() {
        let id = Fwm.identity(&vec![2, 3]);
        assert!(mat::approx_eq(&hat_f(&id).transfer(), &mat::eye(36), 1e-15));
        // dropping everything is the trace functional
        let t = hat_f(&InjMorphism::terminal(vec![2]));
        let rho = mat::from_real(2, 2, &[0.3, 0.1, 0.1, 0.7]);
        let out = mat::apply_transfer(&t.transfer(), &rho, 1);
        assert!((out[(0, 0)].re - 1.0).abs() < 1e-15);
        let s = hat_f(&Fwm.symmetry(&vec![2], &vec![2]));
        assert!(mat::approx_eq(
            &s.transfer(),
            &CpmsTensor.symmetry(&[2], &[2]).transfer(),
            1e-15
        ));
    }

    #[test]
    fn hat_f_is_functorial() {
        let f = InjMorphism::new(vec![2, 1, 2], vec![2, 1], vec![2, 1]).unwrap();
        let g = InjMorphism::new(vec![2, 1], vec![1], vec![1]).unwrap();
        let lhs = hat_f(&Fwm.compose(&g, &f).unwrap()).transfer();
        let rhs = CpmsTensor
            .compose(&hat_f(&g), &hat_f(&f))
            .unwrap()
            .transfer();
        assert!(mat::approx_eq(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn psi_of_phi_is_classical_relabeling() {
        let f = phi_map(&[1, 0, 1], 2);
        let p = psi_map(&f);
        assert_eq!(
            p.data,
            mat::from_real(2, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0])
        );
        assert!(trace_preservation_defect(&p) < 1e-15);
    }

    #[test]
    fn psi_is_monoidal_on_an_example() {
        let x = FamilyObject::new(vec![vec![2, 1], vec![]]);
        let y = FamilyObject::new(vec![vec![2]]);
        let f = QPP.homs(&x, &FamilyObject::new(vec![vec![2], vec![]]))[1].clone();
        let g = QPP.identity(&y);
        assert!(psi_monoidal_defect(&f, &g) < 1e-12);
        let full = cpm_family_tensor(&psi_map(&f), &psi_map(&g));
        let direct = psi_map(&QPP.tensor(&f, &g));
        assert!(CpmOplus.distance(&full, &direct) < 1e-12);
    }

    #[test]
    fn kernel_condition_small() {
        let c = FamilyObject::new(vec![vec![], vec![1], vec![]]);
        let c2 = FamilyObject::new(vec![vec![], vec![2]]);
        let k = kernel_bijection_check(2, &c, &c2).unwrap();
        assert_eq!((k.left, k.right, k.product), (4, 1, 4));
        assert!(k.bijective);
        let none = FamilyObject::new(vec![vec![1]]);
        let k = kernel_bijection_check(1, &none, &c2).unwrap();
        assert_eq!((k.left, k.product), (0, 0));
    }
}
