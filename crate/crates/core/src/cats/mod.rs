//! Partially traced symmetric monoidal categories.
//!
//! Objects are flat lists of atoms (strictified tensor). For the direct-sum
//! categories an atom is a component dimension and the tensor is concatenation
//! of components; for the tensor categories an atom is a factor dimension.
//! In both cases `x ⊗ u` is the concatenation `x ++ u`, so a morphism
//! `f: x ⊗ u -> y ⊗ u` is traced over the trailing atoms.

pub mod axioms;
pub mod cpm;
pub mod cpms;
pub mod fhilb;
pub mod gen;
pub mod induced;
pub mod srel;
pub mod vect;

use crate::mat::{MatError, Tol};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub use cpm::{CpmOplus, QOplusTotal};
pub use cpms::CpmsTensor;
pub use fhilb::FhilbTensor;
pub use induced::{
    induced_trace, Embedding, InducedOplus, Membership, OplusInVect, QsInCpms, QsTensorSub,
};
pub use srel::SrelTensor;
pub use vect::{BlockMorphism, VectMode, VectOplus};

/// Object: list of atom dimensions.
pub type Obj = Vec<usize>;

pub fn concat(a: &[usize], b: &[usize]) -> Obj {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CategoryId {
    VECT_OPLUS_INV,
    VECT_OPLUS_KERIM,
    SREL_TENSOR,
    CPMS_TENSOR,
    CPM_OPLUS,
    Q_OPLUS_TOTAL,
    Q_OPLUS_INV,
    Q_OPLUS_KERIM,
    QS_TENSOR_SUB,
    FHILB_TENSOR,
}

impl CategoryId {
    pub const ALL: [CategoryId; 10] = [
        CategoryId::VECT_OPLUS_INV,
        CategoryId::VECT_OPLUS_KERIM,
        CategoryId::SREL_TENSOR,
        CategoryId::CPMS_TENSOR,
        CategoryId::CPM_OPLUS,
        CategoryId::Q_OPLUS_TOTAL,
        CategoryId::Q_OPLUS_INV,
        CategoryId::Q_OPLUS_KERIM,
        CategoryId::QS_TENSOR_SUB,
        CategoryId::FHILB_TENSOR,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CategoryId::VECT_OPLUS_INV => "VECT_OPLUS_INV",
            CategoryId::VECT_OPLUS_KERIM => "VECT_OPLUS_KERIM",
            CategoryId::SREL_TENSOR => "SREL_TENSOR",
            CategoryId::CPMS_TENSOR => "CPMS_TENSOR",
            CategoryId::CPM_OPLUS => "CPM_OPLUS",
            CategoryId::Q_OPLUS_TOTAL => "Q_OPLUS_TOTAL",
            CategoryId::Q_OPLUS_INV => "Q_OPLUS_INV",
            CategoryId::Q_OPLUS_KERIM => "Q_OPLUS_KERIM",
            CategoryId::QS_TENSOR_SUB => "QS_TENSOR_SUB",
            CategoryId::FHILB_TENSOR => "FHILB_TENSOR",
        }
    }

    pub fn parse(s: &str) -> Option<CategoryId> {
        CategoryId::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
    }

    /// Largest atom dimension used by the random generators.
    pub fn default_dim_cap(&self) -> usize {
        match self {
            CategoryId::VECT_OPLUS_INV | CategoryId::VECT_OPLUS_KERIM => 6,
            CategoryId::SREL_TENSOR => 5,
            CategoryId::CPMS_TENSOR | CategoryId::QS_TENSOR_SUB | CategoryId::FHILB_TENSOR => 3,
            CategoryId::CPM_OPLUS
            | CategoryId::Q_OPLUS_TOTAL
            | CategoryId::Q_OPLUS_INV
            | CategoryId::Q_OPLUS_KERIM => 2,
        }
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a morphism is outside the trace class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    Singular,
    InverseNotCP,
    MassExceedsOne,
    ImageCondition,
    KernelCondition,
    NotInSubcategory,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceOutcome<M> {
    Defined(M),
    NotInTraceClass(Reason),
}

impl<M> TraceOutcome<M> {
    pub fn is_defined(&self) -> bool {
        matches!(self, TraceOutcome::Defined(_))
    }

    pub fn defined(self) -> Option<M> {
        match self {
            TraceOutcome::Defined(m) => Some(m),
            TraceOutcome::NotInTraceClass(_) => None,
        }
    }

    pub fn reason(&self) -> Option<Reason> {
        match self {
            TraceOutcome::Defined(_) => None,
            TraceOutcome::NotInTraceClass(r) => Some(*r),
        }
    }

    pub fn map<N>(self, f: impl FnOnce(M) -> N) -> TraceOutcome<N> {
        match self {
            TraceOutcome::Defined(m) => TraceOutcome::Defined(f(m)),
            TraceOutcome::NotInTraceClass(r) => TraceOutcome::NotInTraceClass(r),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CatError {
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("series did not converge after {iterations} iterations (last term norm {bound:e})")]
    NoConvergence { iterations: usize, bound: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

pub fn mismatch(what: &str, expected: &[usize], got: &[usize]) -> CatError {
    CatError::ObjectMismatch(format!("{what}: expected {expected:?}, got {got:?}"))
}

/// A (partially) traced symmetric strict monoidal category.
pub trait TracedCategory: Send + Sync {
    type Mor: Clone + Send + Sync + fmt::Debug;

    fn name(&self) -> &'static str;
    fn dom(&self, f: &Self::Mor) -> Obj;
    fn cod(&self, f: &Self::Mor) -> Obj;
    fn identity(&self, x: &[usize]) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError>;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    /// Morphism `x -> y` with `y[k] = x[perm[k]]`.
    fn permutation(&self, x: &[usize], perm: &[usize]) -> Self::Mor;
    /// `Tr^u_{x,y}(f)` for `f: x ⊗ u -> y ⊗ u`.
    fn trace(
        &self,
        f: &Self::Mor,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<TraceOutcome<Self::Mor>, CatError>;
    /// Canonical matrix used for equality: the data matrix, or the transfer matrix for Kraus lists.
    fn to_matrix(&self, f: &Self::Mor) -> crate::mat::Mat;

    fn distance(&self, f: &Self::Mor, g: &Self::Mor) -> f64 {
        if self.dom(f) != self.dom(g) || self.cod(f) != self.cod(g) {
            return f64::INFINITY;
        }
        crate::mat::max_abs_diff(&self.to_matrix(f), &self.to_matrix(g))
    }

    fn symmetry(&self, x: &[usize], y: &[usize]) -> Self::Mor {
        let (nx, ny) = (x.len(), y.len());
        let perm: Vec<usize> = (nx..nx + ny).chain(0..nx).collect();
        self.permutation(&concat(x, y), &perm)
    }

    fn in_trace_class(
        &self,
        f: &Self::Mor,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<Option<Reason>, CatError> {
        Ok(self.trace(f, x, y, u, tol)?.reason())
    }

    /// Distance in decades between the singular values steering the trace-class decision
    /// and the rank cutoff; `None` when the decision is not rank based.
    fn decision_margin(
        &self,
        _f: &Self::Mor,
        _x: &[usize],
        _y: &[usize],
        _u: &[usize],
        _tol: &Tol,
    ) -> Option<f64> {
        None
    }

    fn compose_all(&self, fs: &[&Self::Mor]) -> Result<Self::Mor, CatError> {
        let mut it = fs.iter();
        let first = it.next().expect("compose_all needs at least one morphism");
        let mut acc = (*first).clone();
        for f in it {
            acc = self.compose(f, &acc)?;
        }
        Ok(acc)
    }
}

pub(crate) fn check_trace_shape(
    dom: &[usize],
    cod: &[usize],
    x: &[usize],
    y: &[usize],
    u: &[usize],
) -> Result<(), CatError> {
    let ex = concat(x, u);
    if dom != ex.as_slice() {
        return Err(mismatch("trace domain", &ex, dom));
    }
    let ey = concat(y, u);
    if cod != ey.as_slice() {
        return Err(mismatch("trace codomain", &ey, cod));
    }
    Ok(())
}

/// Block permutation matrix for direct-sum objects whose atoms occupy `sizes[i]` coordinates.
pub(crate) fn block_permutation(sizes: &[usize], perm: &[usize]) -> crate::mat::Mat {
    let n: usize = sizes.iter().sum();
    let mut offs = vec![0; sizes.len()];
    for i in 1..sizes.len() {
        offs[i] = offs[i - 1] + sizes[i - 1];
    }
    let mut p = crate::mat::zeros(n, n);
    let mut out = 0;
    for &src in perm {
        for k in 0..sizes[src] {
            p[(out + k, offs[src] + k)] = crate::mat::ONE;
        }
        out += sizes[src];
    }
    p
}

/// Log-distance of singular values from the cutoff [`Tol::rank_cut`].
pub(crate) fn svd_margin(a: &crate::mat::Mat, tol: &Tol) -> Option<f64> {
    let s = crate::mat::singular_values(a);
    let smax = *s.first()?;
    if smax == 0.0 {
        return None;
    }
    let cut = tol.rank_cut(smax);
    s.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| (v / cut).log10().abs())
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
}
