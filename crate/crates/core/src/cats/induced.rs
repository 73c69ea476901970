//! Traces induced on a monoidal subcategory by a faithful strict monoidal
//! embedding into a traced host: `Tr(f)` is defined when the host trace of
//! the image exists and lies in the image of the subcategory.

use super::cpm::{cpm_ops_impl, is_cp_blockwise, is_trace_nonincreasing, sq_sizes, CpmOps};
use super::cpms::{CpmsTensor, KrausMorphism};
use super::{
    BlockMorphism, CatError, Obj, Reason, TraceOutcome, TracedCategory, VectMode, VectOplus,
};
use crate::mat::{Mat, Tol};
use std::fmt;

/// A faithful strict monoidal functor into a traced host category.
pub trait Embedding: Send + Sync {
    type Host: TracedCategory;
    type Mor: Clone + Send + Sync + fmt::Debug;

    fn host(&self) -> &Self::Host;
    fn embed_obj(&self, x: &[usize]) -> Obj;
    fn embed_mor(&self, f: &Self::Mor) -> <Self::Host as TracedCategory>::Mor;
    /// The unique preimage of `g: F(x) -> F(y)`, if `g` lies in the subcategory.
    fn preimage(
        &self,
        g: &<Self::Host as TracedCategory>::Mor,
        x: &[usize],
        y: &[usize],
        tol: &Tol,
    ) -> Option<Self::Mor>;
}

/// `Tr^u(f)` computed as the preimage of `Tr^{F u}(F f)`.
pub fn induced_trace<E: Embedding>(
    e: &E,
    f: &E::Mor,
    x: &[usize],
    y: &[usize],
    u: &[usize],
    tol: &Tol,
) -> Result<TraceOutcome<E::Mor>, CatError> {
    let (fx, fy, fu) = (e.embed_obj(x), e.embed_obj(y), e.embed_obj(u));
    match e.host().trace(&e.embed_mor(f), &fx, &fy, &fu, tol)? {
        TraceOutcome::NotInTraceClass(r) => Ok(TraceOutcome::NotInTraceClass(r)),
        TraceOutcome::Defined(g) => Ok(match e.preimage(&g, x, y, tol) {
            Some(m) => TraceOutcome::Defined(m),
            None => TraceOutcome::NotInTraceClass(Reason::NotInSubcategory),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Blockwise completely positive.
    Cp,
    /// Blockwise completely positive and trace non-increasing.
    CpNonincreasing,
}

/// Matrices of CP maps inside `Vect(⊕)`: a Hilbert dimension `d` becomes a
/// component of size `d*d` and the transfer matrix is kept as is.
#[derive(Clone, Copy, Debug)]
pub struct OplusInVect {
    pub host: VectOplus,
    pub membership: Membership,
}

impl Embedding for OplusInVect {
    type Host = VectOplus;
    type Mor = BlockMorphism;

    fn host(&self) -> &VectOplus {
        &self.host
    }

    fn embed_obj(&self, x: &[usize]) -> Obj {
        sq_sizes(x)
    }

    fn embed_mor(&self, f: &BlockMorphism) -> BlockMorphism {
        BlockMorphism::new(sq_sizes(&f.dom), sq_sizes(&f.cod), f.data.clone())
    }

    fn preimage(
        &self,
        g: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        tol: &Tol,
    ) -> Option<BlockMorphism> {
        let m = BlockMorphism::new(x.to_vec(), y.to_vec(), g.data.clone());
        let ok = is_cp_blockwise(&m, tol)
            && (self.membership == Membership::Cp || is_trace_nonincreasing(&m, tol));
        ok.then_some(m)
    }
}

/// A direct-sum category of CP maps carrying the trace induced from `Vect(⊕)`.
#[derive(Clone, Copy, Debug)]
pub struct InducedOplus {
    pub emb: OplusInVect,
}

impl InducedOplus {
    /// Superoperators with the invertibility trace of `Vect(⊕)`.
    pub const Q_INV: InducedOplus = InducedOplus::new(VectMode::Inv, Membership::CpNonincreasing);
    /// Superoperators with the kernel-image trace of `Vect(⊕)`.
    pub const Q_KERIM: InducedOplus =
        InducedOplus::new(VectMode::Kerim, Membership::CpNonincreasing);
    /// All CP matrices with the kernel-image trace of `Vect(⊕)`.
    pub const CPM_KERIM: InducedOplus = InducedOplus::new(VectMode::Kerim, Membership::Cp);

    pub const fn new(mode: VectMode, membership: Membership) -> InducedOplus {
        InducedOplus {
            emb: OplusInVect {
                host: VectOplus { mode },
                membership,
            },
        }
    }
}

impl TracedCategory for InducedOplus {
    type Mor = BlockMorphism;

    fn name(&self) -> &'static str {
        match (self.emb.host.mode, self.emb.membership) {
            (VectMode::Inv, Membership::CpNonincreasing) => "Q_OPLUS_INV",
            (VectMode::Kerim, Membership::CpNonincreasing) => "Q_OPLUS_KERIM",
            (VectMode::Inv, Membership::Cp) => "CPM_OPLUS_INV_INDUCED",
            (VectMode::Kerim, Membership::Cp) => "CPM_OPLUS_KERIM_INDUCED",
        }
    }

    cpm_ops_impl!();

    fn trace(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<TraceOutcome<BlockMorphism>, CatError> {
        super::check_trace_shape(&f.dom, &f.cod, x, y, u)?;
        induced_trace(&self.emb, f, x, y, u, tol)
    }

    fn decision_margin(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        _u: &[usize],
        tol: &Tol,
    ) -> Option<f64> {
        let (_, _, _, f22) = CpmOps::blocks(f, x, y);
        super::svd_margin(&(crate::mat::eye(f22.nrows()) - f22), tol)
    }
}

/// Trace non-increasing CP maps inside `CPM_s(⊗)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct QsInCpms;

impl Embedding for QsInCpms {
    type Host = CpmsTensor;
    type Mor = KrausMorphism;

    fn host(&self) -> &CpmsTensor {
        &CpmsTensor
    }

    fn embed_obj(&self, x: &[usize]) -> Obj {
        x.to_vec()
    }

    fn embed_mor(&self, f: &KrausMorphism) -> KrausMorphism {
        f.clone()
    }

    fn preimage(
        &self,
        g: &KrausMorphism,
        _x: &[usize],
        _y: &[usize],
        tol: &Tol,
    ) -> Option<KrausMorphism> {
        g.is_trace_nonincreasing(tol).then(|| g.clone())
    }
}

/// `Q_s(⊗)` with the trace induced from `CPM_s(⊗)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct QsTensorSub;

impl TracedCategory for QsTensorSub {
    type Mor = KrausMorphism;

    fn name(&self) -> &'static str {
        "QS_TENSOR_SUB"
    }

    fn dom(&self, f: &KrausMorphism) -> Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &KrausMorphism) -> Obj {
        f.cod.clone()
    }

    fn identity(&self, x: &[usize]) -> KrausMorphism {
        CpmsTensor.identity(x)
    }

    fn compose(&self, g: &KrausMorphism, f: &KrausMorphism) -> Result<KrausMorphism, CatError> {
        CpmsTensor.compose(g, f)
    }

    fn tensor(&self, f: &KrausMorphism, g: &KrausMorphism) -> KrausMorphism {
        CpmsTensor.tensor(f, g)
    }

    fn permutation(&self, x: &[usize], perm: &[usize]) -> KrausMorphism {
        CpmsTensor.permutation(x, perm)
    }

    fn trace(
        &self,
        f: &KrausMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<TraceOutcome<KrausMorphism>, CatError> {
        induced_trace(&QsInCpms, f, x, y, u, tol)
    }

    fn to_matrix(&self, f: &KrausMorphism) -> Mat {
        f.transfer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cats::cpm::{from_kraus_grid, CpmOplus};
    use crate::mat::{self, c};

    fn tol() -> Tol {
        Tol::default()
    }

    fn diag_i_2i() -> BlockMorphism {
        let z = vec![];
        let two = mat::eye(2) * c(2f64.sqrt(), 0.0);
        from_kraus_grid(
            &[2, 2],
            &[2, 2],
            &[vec![vec![mat::eye(2)], z.clone()], vec![z, vec![two]]],
        )
    }

    #[test]
    fn kerim_induced_accepts_counterexample() {
        let f = diag_i_2i();
        let native = CpmOplus.trace(&f, &[2], &[2], &[2], &tol()).unwrap();
        assert_eq!(native.reason(), Some(Reason::InverseNotCP));
        let t = InducedOplus::CPM_KERIM
            .trace(&f, &[2], &[2], &[2], &tol())
            .unwrap()
            .defined()
            .unwrap();
        assert!(mat::approx_eq(&t.data, &mat::eye(4), 1e-12));
    }

    #[test]
    fn qs_yanking_is_defined() {
        let s = QsTensorSub.symmetry(&[2], &[2]);
        let t = QsTensorSub
            .trace(&s, &[2], &[2], &[2], &tol())
            .unwrap()
            .defined()
            .unwrap();
        assert!(mat::approx_eq(&t.transfer(), &mat::eye(4), 0.0));
    }

    #[test]
    fn qs_trace_of_identity_leaves_subcategory() {
        // Tr^U(1) = dim(U) * 1 is trace increasing
        let id = QsTensorSub.identity(&[2, 2]);
        let r = QsTensorSub
            .in_trace_class(&id, &[2], &[2], &[2], &tol())
            .unwrap();
        assert_eq!(r, Some(Reason::NotInSubcategory));
        let scaled = KrausMorphism::new(vec![2, 2], vec![2, 2], vec![mat::eye(4) * c(0.4, 0.0)]);
        assert!(QsTensorSub
            .trace(&scaled, &[2], &[2], &[2], &tol())
            .unwrap()
            .is_defined());
    }

    #[test]
    fn q_inv_rejects_identity_and_kerim_accepts() {
        let id = InducedOplus::Q_INV.identity(&[1, 2]);
        let r = InducedOplus::Q_INV
            .in_trace_class(&id, &[1], &[1], &[2], &tol())
            .unwrap();
        assert_eq!(r, Some(Reason::Singular));
        let t = InducedOplus::Q_KERIM
            .trace(&id, &[1], &[1], &[2], &tol())
            .unwrap()
            .defined()
            .unwrap();
        assert!(mat::approx_eq(&t.data, &mat::eye(1), 1e-12));
    }
}
