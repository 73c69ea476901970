//! Matrices of completely positive maps between sequences of Hilbert spaces,
//! with direct sum as tensor. Morphisms are stored as block transfer matrices:
//! an object `(H_1, .., H_n)` occupies `Σ dim(H_i)^2` coordinates.
//!
//! `CpmOplus` carries the trace defined when `I - f22` is invertible with a
//! completely positive inverse. `QOplusTotal` is the category of trace
//! non-increasing superoperators with the total trace
//! `f11 + Σ_i f12 f22^i f21`.

use super::{
    block_permutation, check_trace_shape, mismatch, BlockMorphism, CatError, Obj, Reason,
    TraceOutcome, TracedCategory,
};
use crate::mat::{self, Mat, MatError, Tol};

pub fn sq_sizes(x: &[usize]) -> Vec<usize> {
    x.iter().map(|d| d * d).collect()
}

pub fn sq_total(x: &[usize]) -> usize {
    x.iter().map(|d| d * d).sum()
}

fn offsets(x: &[usize]) -> Vec<usize> {
    let mut o = Vec::with_capacity(x.len());
    let mut acc = 0;
    for d in x {
        o.push(acc);
        acc += d * d;
    }
    o
}

/// Transfer block from domain atom `j` to codomain atom `i`.
pub fn block_of(f: &BlockMorphism, i: usize, j: usize) -> Mat {
    let (ro, co) = (offsets(&f.cod), offsets(&f.dom));
    let (di, dj) = (f.cod[i], f.dom[j]);
    mat::block(&f.data, ro[i], co[j], di * di, dj * dj)
}

/// Builds a morphism from Kraus lists: `grid[i][j]` presents the block `dom[j] -> cod[i]`.
pub fn from_kraus_grid(dom: &[usize], cod: &[usize], grid: &[Vec<Vec<Mat>>]) -> BlockMorphism {
    let mut data = mat::zeros(sq_total(cod), sq_total(dom));
    let (ro, co) = (offsets(cod), offsets(dom));
    for (i, row) in grid.iter().enumerate() {
        for (j, ks) in row.iter().enumerate() {
            let t = mat::transfer_from_kraus(ks, dom[j], cod[i]);
            data.view_mut((ro[i], co[j]), t.shape()).copy_from(&t);
        }
    }
    BlockMorphism::new(dom.to_vec(), cod.to_vec(), data)
}

pub fn is_cp_blockwise(f: &BlockMorphism, tol: &Tol) -> bool {
    (0..f.cod.len()).all(|i| {
        (0..f.dom.len())
            .all(|j| mat::is_completely_positive(&block_of(f, i, j), f.dom[j], f.cod[i], tol))
    })
}

/// Per domain component `j`, the operator `W_j` with `Σ_i tr F_ij(rho) = tr(W_j rho)`.
pub fn column_effects(f: &BlockMorphism) -> Vec<Mat> {
    (0..f.dom.len())
        .map(|j| {
            let d = f.dom[j];
            (0..f.cod.len()).fold(mat::zeros(d, d), |acc, i| {
                acc + mat::trace_functional(&block_of(f, i, j), d, f.cod[i])
            })
        })
        .collect()
}

pub fn is_trace_nonincreasing(f: &BlockMorphism, tol: &Tol) -> bool {
    column_effects(f)
        .iter()
        .all(|w| mat::max_eig_hermitian(w) <= 1.0 + tol.psd_tol)
}

/// Largest entrywise deviation of the column effects from the identity.
pub fn trace_preservation_defect(f: &BlockMorphism) -> f64 {
    column_effects(f)
        .iter()
        .map(|w| mat::max_abs_diff(w, &mat::eye(w.nrows())))
        .fold(0.0, f64::max)
}

/// Ops shared by all direct-sum categories of completely positive maps.
#[derive(Clone, Copy, Debug, Default)]
pub struct CpmOps;

impl CpmOps {
    pub fn dom(f: &BlockMorphism) -> Obj {
        f.dom.clone()
    }

    pub fn identity(x: &[usize]) -> BlockMorphism {
        BlockMorphism::new(x.to_vec(), x.to_vec(), mat::eye(sq_total(x)))
    }

    pub fn compose(g: &BlockMorphism, f: &BlockMorphism) -> Result<BlockMorphism, CatError> {
        if f.cod != g.dom {
            return Err(mismatch("compose", &f.cod, &g.dom));
        }
        Ok(BlockMorphism::new(
            f.dom.clone(),
            g.cod.clone(),
            &g.data * &f.data,
        ))
    }

    pub fn tensor(f: &BlockMorphism, g: &BlockMorphism) -> BlockMorphism {
        BlockMorphism::new(
            super::concat(&f.dom, &g.dom),
            super::concat(&f.cod, &g.cod),
            mat::direct_sum(&f.data, &g.data),
        )
    }

    pub fn permutation(x: &[usize], perm: &[usize]) -> BlockMorphism {
        let y: Obj = perm.iter().map(|&p| x[p]).collect();
        BlockMorphism::new(x.to_vec(), y, block_permutation(&sq_sizes(x), perm))
    }

    pub fn blocks(f: &BlockMorphism, x: &[usize], y: &[usize]) -> (Mat, Mat, Mat, Mat) {
        mat::block_decompose(&f.data, sq_total(y), sq_total(x))
    }
}

macro_rules! cpm_ops_impl {
    () => {
        fn dom(&self, f: &BlockMorphism) -> Obj {
            f.dom.clone()
        }

        fn cod(&self, f: &BlockMorphism) -> Obj {
            f.cod.clone()
        }

        fn identity(&self, x: &[usize]) -> BlockMorphism {
            $crate::cats::cpm::CpmOps::identity(x)
        }

        fn compose(&self, g: &BlockMorphism, f: &BlockMorphism) -> Result<BlockMorphism, CatError> {
            $crate::cats::cpm::CpmOps::compose(g, f)
        }

        fn tensor(&self, f: &BlockMorphism, g: &BlockMorphism) -> BlockMorphism {
            $crate::cats::cpm::CpmOps::tensor(f, g)
        }

        fn permutation(&self, x: &[usize], perm: &[usize]) -> BlockMorphism {
            $crate::cats::cpm::CpmOps::permutation(x, perm)
        }

        fn to_matrix(&self, f: &BlockMorphism) -> $crate::mat::Mat {
            f.data.clone()
        }
    };
}
pub(crate) use cpm_ops_impl;

#[derive(Clone, Copy, Debug, Default)]
pub struct CpmOplus;

impl CpmOplus {
    /// `(I - f22)^{-1}` for `f: x ⊕ u -> y ⊕ u`, with the smallest Choi eigenvalue over its blocks.
    pub fn feedback_inverse(
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<Option<(Mat, f64)>, CatError> {
        let (_, _, _, f22) = CpmOps::blocks(f, x, y);
        let n = f22.nrows();
        let inv = match mat::inverse(&(mat::eye(n) - f22), tol) {
            Ok(inv) => inv,
            Err(MatError::Singular { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let o = offsets(u);
        let mut min_eig = f64::INFINITY;
        for i in 0..u.len() {
            for j in 0..u.len() {
                let b = mat::block(&inv, o[i], o[j], u[i] * u[i], u[j] * u[j]);
                let e = match mat::choi_min_eig(&b, u[j], u[i], tol) {
                    Ok(e) => e,
                    Err(MatError::NotHermitian(_)) => f64::NEG_INFINITY,
                    Err(e) => return Err(e.into()),
                };
                min_eig = min_eig.min(e);
            }
        }
        Ok(Some((inv, min_eig)))
    }
}

impl TracedCategory for CpmOplus {
    type Mor = BlockMorphism;

    fn name(&self) -> &'static str {
        "CPM_OPLUS"
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
        check_trace_shape(&f.dom, &f.cod, x, y, u)?;
        let (f11, f12, f21, _) = CpmOps::blocks(f, x, y);
        match Self::feedback_inverse(f, x, y, u, tol)? {
            None => Ok(TraceOutcome::NotInTraceClass(Reason::Singular)),
            Some((_, e)) if e < -tol.psd_tol => {
                Ok(TraceOutcome::NotInTraceClass(Reason::InverseNotCP))
            }
            Some((inv, _)) => Ok(TraceOutcome::Defined(BlockMorphism::new(
                x.to_vec(),
                y.to_vec(),
                f11 + f12 * inv * f21,
            ))),
        }
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
        super::svd_margin(&(mat::eye(f22.nrows()) - f22), tol)
    }
}

pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct QOplusTotal {
    pub max_iter: usize,
}

impl Default for QOplusTotal {
    fn default() -> Self {
        QOplusTotal {
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// `f11 + Σ_{i≥0} f12 f22^i f21`.
///
/// Terms are summed until the geometric tail bound `|t| / (1 - r)` falls below
/// `1e-3 * eq_tol`, where `r` is the largest of the recent term ratios.
pub fn q_total_trace(
    f: &BlockMorphism,
    x: &[usize],
    y: &[usize],
    u: &[usize],
    tol: &Tol,
    max_iter: usize,
) -> Result<BlockMorphism, CatError> {
    check_trace_shape(&f.dom, &f.cod, x, y, u)?;
    let (f11, f12, f21, f22) = CpmOps::blocks(f, x, y);
    let target = 1e-3 * tol.eq_tol;
    let mut term = f21.clone();
    let mut acc = f21;
    let mut prev = mat::max_abs(&term);
    let mut ratios = [1.0f64; 8];
    let mut iterations = 0;
    let mut norm = prev;
    while norm > 0.0 {
        if iterations >= max_iter {
            if norm > tol.eq_tol {
                return Err(CatError::NoConvergence {
                    iterations,
                    bound: norm,
                });
            }
            break;
        }
        term = &f22 * &term;
        acc += &term;
        iterations += 1;
        norm = mat::max_abs(&term);
        ratios[iterations % ratios.len()] = if prev > 0.0 { norm / prev } else { 0.0 };
        prev = norm;
        let r = ratios.iter().copied().fold(0.0, f64::max);
        if iterations >= ratios.len() && r < 1.0 && norm / (1.0 - r) <= target {
            break;
        }
    }
    Ok(BlockMorphism::new(x.to_vec(), y.to_vec(), f11 + f12 * acc))
}

impl TracedCategory for QOplusTotal {
    type Mor = BlockMorphism;

    fn name(&self) -> &'static str {
        "Q_OPLUS_TOTAL"
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
        q_total_trace(f, x, y, u, tol, self.max_iter).map(TraceOutcome::Defined)
    }
}
