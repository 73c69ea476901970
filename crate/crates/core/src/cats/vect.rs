//! Finite-dimensional vector spaces with direct sum as tensor.
//!
//! Two partial traces are provided. `Inv` is defined when `I - f22` is
//! invertible and gives `f11 + f12 (I - f22)^{-1} f21`. `Kerim` only asks
//! `im f21 ⊆ im(I - f22)` and `ker(I - f22) ⊆ ker f12`, and evaluates
//! `f11 v + f12 u` for any `u` with `(I - f22) u = f21 v`.

use super::{
    block_permutation, check_trace_shape, mismatch, svd_margin, CatError, Obj, Reason,
    TraceOutcome, TracedCategory,
};
use crate::mat::{self, Mat, MatError, Tol};
use rand::Rng;

/// A matrix between structured objects. For direct-sum categories the atoms
/// are component sizes (or Hilbert dimensions whose blocks have size `d*d`);
/// for tensor categories they are factor dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMorphism {
    pub dom: Obj,
    pub cod: Obj,
    pub data: Mat,
}

impl BlockMorphism {
    pub fn new(dom: Obj, cod: Obj, data: Mat) -> BlockMorphism {
        BlockMorphism { dom, cod, data }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectMode {
    Inv,
    Kerim,
}

#[derive(Clone, Copy, Debug)]
pub struct VectOplus {
    pub mode: VectMode,
}

impl VectOplus {
    pub const INV: VectOplus = VectOplus {
        mode: VectMode::Inv,
    };
    pub const KERIM: VectOplus = VectOplus {
        mode: VectMode::Kerim,
    };

    pub fn total(x: &[usize]) -> usize {
        x.iter().sum()
    }

    pub fn morphism(&self, dom: &[usize], cod: &[usize], data: Mat) -> BlockMorphism {
        assert_eq!(
            data.shape(),
            (Self::total(cod), Self::total(dom)),
            "matrix shape"
        );
        BlockMorphism::new(dom.to_vec(), cod.to_vec(), data)
    }

    /// Splits `f: x ⊕ u -> y ⊕ u` into its four blocks.
    pub fn blocks(f: &BlockMorphism, x: &[usize], y: &[usize]) -> (Mat, Mat, Mat, Mat) {
        mat::block_decompose(&f.data, Self::total(y), Self::total(x))
    }

    /// Trace of a block matrix under the given mode.
    pub fn trace_blocks(
        mode: VectMode,
        f11: &Mat,
        f12: &Mat,
        f21: &Mat,
        f22: &Mat,
        tol: &Tol,
    ) -> Result<TraceOutcome<Mat>, CatError> {
        let n = f22.nrows();
        if n == 0 {
            return Ok(TraceOutcome::Defined(f11.clone()));
        }
        let a = mat::eye(n) - f22;
        match mode {
            VectMode::Inv => match mat::inverse(&a, tol) {
                Ok(inv) => Ok(TraceOutcome::Defined(f11 + f12 * inv * f21)),
                Err(MatError::Singular { .. }) => {
                    Ok(TraceOutcome::NotInTraceClass(Reason::Singular))
                }
                Err(e) => Err(e.into()),
            },
            VectMode::Kerim => {
                if !mat::image_contains(&a, f21, tol) {
                    return Ok(TraceOutcome::NotInTraceClass(Reason::ImageCondition));
                }
                if !mat::kernel_within(&a, f12, tol) {
                    return Ok(TraceOutcome::NotInTraceClass(Reason::KernelCondition));
                }
                match mat::solve_consistent(&a, f21, tol) {
                    Ok(u) => Ok(TraceOutcome::Defined(f11 + f12 * u)),
                    Err(MatError::NoSolution(_)) => {
                        Ok(TraceOutcome::NotInTraceClass(Reason::ImageCondition))
                    }
                    Err(e) => Err(e.into()),
                }
            }
        }
    }

    /// Largest change of the kernel-image trace when a random kernel element of
    /// `I - f22` is added to the solution `u`.
    pub fn kerim_solution_shift<R: Rng>(
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        tol: &Tol,
        rng: &mut R,
    ) -> Option<f64> {
        let (f11, f12, f21, f22) = Self::blocks(f, x, y);
        let n = f22.nrows();
        let a = mat::eye(n) - &f22;
        let u = mat::solve_consistent(&a, &f21, tol).ok()?;
        let base = &f11 + &f12 * &u;
        let ker = mat::null_space(&a, tol);
        let mut shift = mat::zeros(n, f21.ncols());
        for k in &ker {
            let coeffs = super::gen::gaussian_mat(rng, 1, f21.ncols());
            shift += k * coeffs;
        }
        let moved = &f11 + &f12 * (u + shift);
        Some(mat::max_abs_diff(&base, &moved))
    }
}

impl TracedCategory for VectOplus {
    type Mor = BlockMorphism;

    fn name(&self) -> &'static str {
        match self.mode {
            VectMode::Inv => "VECT_OPLUS_INV",
            VectMode::Kerim => "VECT_OPLUS_KERIM",
        }
    }

    fn dom(&self, f: &BlockMorphism) -> Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &BlockMorphism) -> Obj {
        f.cod.clone()
    }

    fn identity(&self, x: &[usize]) -> BlockMorphism {
        BlockMorphism::new(x.to_vec(), x.to_vec(), mat::eye(Self::total(x)))
    }

    fn compose(&self, g: &BlockMorphism, f: &BlockMorphism) -> Result<BlockMorphism, CatError> {
        if f.cod != g.dom {
            return Err(mismatch("compose", &f.cod, &g.dom));
        }
        Ok(BlockMorphism::new(
            f.dom.clone(),
            g.cod.clone(),
            &g.data * &f.data,
        ))
    }

    fn tensor(&self, f: &BlockMorphism, g: &BlockMorphism) -> BlockMorphism {
        BlockMorphism::new(
            super::concat(&f.dom, &g.dom),
            super::concat(&f.cod, &g.cod),
            mat::direct_sum(&f.data, &g.data),
        )
    }

    fn permutation(&self, x: &[usize], perm: &[usize]) -> BlockMorphism {
        let y: Obj = perm.iter().map(|&p| x[p]).collect();
        BlockMorphism::new(x.to_vec(), y, block_permutation(x, perm))
    }

    fn trace(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<TraceOutcome<BlockMorphism>, CatError> {
        check_trace_shape(&f.dom, &f.cod, x, y, u)?;
        let (f11, f12, f21, f22) = Self::blocks(f, x, y);
        Ok(Self::trace_blocks(self.mode, &f11, &f12, &f21, &f22, tol)?
            .map(|m| BlockMorphism::new(x.to_vec(), y.to_vec(), m)))
    }

    fn to_matrix(&self, f: &BlockMorphism) -> Mat {
        f.data.clone()
    }

    fn decision_margin(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        _u: &[usize],
        tol: &Tol,
    ) -> Option<f64> {
        let (_, _, _, f22) = Self::blocks(f, x, y);
        svd_margin(&(mat::eye(f22.nrows()) - f22), tol)
    }
}
