//! Finite-dimensional Hilbert spaces with the Kronecker tensor and the
//! total operator partial trace.

use super::{
    check_trace_shape, mismatch, BlockMorphism, CatError, Obj, TraceOutcome, TracedCategory,
};
use crate::mat::{self, Mat, Tol};

#[derive(Clone, Copy, Debug, Default)]
pub struct FhilbTensor;

pub(crate) fn total(x: &[usize]) -> usize {
    x.iter().product()
}

impl TracedCategory for FhilbTensor {
    type Mor = BlockMorphism;

    fn name(&self) -> &'static str {
        "FHILB_TENSOR"
    }

    fn dom(&self, f: &BlockMorphism) -> Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &BlockMorphism) -> Obj {
        f.cod.clone()
    }

    fn identity(&self, x: &[usize]) -> BlockMorphism {
        BlockMorphism::new(x.to_vec(), x.to_vec(), mat::eye(total(x)))
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
            mat::kron(&f.data, &g.data),
        )
    }

    fn permutation(&self, x: &[usize], perm: &[usize]) -> BlockMorphism {
        let y: Obj = perm.iter().map(|&p| x[p]).collect();
        BlockMorphism::new(x.to_vec(), y, mat::factor_permutation(x, perm))
    }

    fn trace(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        _tol: &Tol,
    ) -> Result<TraceOutcome<BlockMorphism>, CatError> {
        check_trace_shape(&f.dom, &f.cod, x, y, u)?;
        let t = mat::partial_trace_tail(&f.data, total(u));
        Ok(TraceOutcome::Defined(BlockMorphism::new(
            x.to_vec(),
            y.to_vec(),
            t,
        )))
    }

    fn to_matrix(&self, f: &BlockMorphism) -> Mat {
        f.data.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yanking_is_exact() {
        let u = vec![2, 3];
        let s = FhilbTensor.symmetry(&u, &u);
        let t = FhilbTensor
            .trace(&s, &u, &u, &u, &Tol::default())
            .unwrap()
            .defined()
            .unwrap();
        assert_eq!(t.data, mat::eye(6));
    }

    #[test]
    fn trace_of_identity_scales_by_dimension() {
        let id = FhilbTensor.identity(&[2, 3]);
        let t = FhilbTensor
            .trace(&id, &[2], &[2], &[3], &Tol::default())
            .unwrap()
            .defined()
            .unwrap();
        assert_eq!(t.data, mat::eye(2) * mat::c(3.0, 0.0));
    }
}
