//! Stochastic relations on finite sets: sub-stochastic matrices with the
//! product tensor. The trace sums the diagonal slice over `U` and is defined
//! when the resulting columns have mass at most one.

use super::{check_trace_shape, mismatch, CatError, Obj, Reason, TraceOutcome, TracedCategory};
use crate::mat::{self, Mat, Tol};
use nalgebra::DMatrix;

pub type RMat = DMatrix<f64>;

/// A sub-stochastic matrix indexed `(cod, dom)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochMorphism {
    pub dom: Obj,
    pub cod: Obj,
    pub data: RMat,
}

impl StochMorphism {
    pub fn new(dom: Obj, cod: Obj, data: RMat) -> StochMorphism {
        assert_eq!(data.shape(), (size(&cod), size(&dom)), "matrix shape");
        StochMorphism { dom, cod, data }
    }

    /// Largest column sum.
    pub fn max_mass(&self) -> f64 {
        self.data.column_iter().map(|c| c.sum()).fold(0.0, f64::max)
    }

    pub fn is_substochastic(&self, tol: &Tol) -> bool {
        self.data
            .iter()
            .all(|&v| v >= -tol.eq_tol && v <= 1.0 + tol.eq_tol)
            && self.max_mass() <= 1.0 + tol.eq_tol
    }
}

pub fn size(x: &[usize]) -> usize {
    x.iter().product()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SrelTensor;

impl TracedCategory for SrelTensor {
    type Mor = StochMorphism;

    fn name(&self) -> &'static str {
        "SREL_TENSOR"
    }

    fn dom(&self, f: &StochMorphism) -> Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &StochMorphism) -> Obj {
        f.cod.clone()
    }

    fn identity(&self, x: &[usize]) -> StochMorphism {
        let n = size(x);
        StochMorphism::new(x.to_vec(), x.to_vec(), RMat::identity(n, n))
    }

    fn compose(&self, g: &StochMorphism, f: &StochMorphism) -> Result<StochMorphism, CatError> {
        if f.cod != g.dom {
            return Err(mismatch("compose", &f.cod, &g.dom));
        }
        Ok(StochMorphism::new(
            f.dom.clone(),
            g.cod.clone(),
            &g.data * &f.data,
        ))
    }

    fn tensor(&self, f: &StochMorphism, g: &StochMorphism) -> StochMorphism {
        StochMorphism::new(
            super::concat(&f.dom, &g.dom),
            super::concat(&f.cod, &g.cod),
            f.data.kronecker(&g.data),
        )
    }

    fn permutation(&self, x: &[usize], perm: &[usize]) -> StochMorphism {
        let y: Obj = perm.iter().map(|&p| x[p]).collect();
        let p = mat::factor_permutation(x, perm).map(|z| z.re);
        StochMorphism::new(x.to_vec(), y, p)
    }

    fn trace(
        &self,
        f: &StochMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> Result<TraceOutcome<StochMorphism>, CatError> {
        check_trace_shape(&f.dom, &f.cod, x, y, u)?;
        let du = size(u);
        let (nx, ny) = (size(x), size(y));
        let t = RMat::from_fn(ny, nx, |yy, xx| {
            (0..du).map(|uu| f.data[(yy * du + uu, xx * du + uu)]).sum()
        });
        let g = StochMorphism::new(x.to_vec(), y.to_vec(), t);
        if g.max_mass() > 1.0 + tol.eq_tol {
            return Ok(TraceOutcome::NotInTraceClass(Reason::MassExceedsOne));
        }
        Ok(TraceOutcome::Defined(g))
    }

    fn to_matrix(&self, f: &StochMorphism) -> Mat {
        f.data.map(|v| mat::c(v, 0.0))
    }
}

/// Coproduct injections `A -> A + B` and `B -> A + B`.
pub fn injections(a: usize, b: usize) -> (StochMorphism, StochMorphism) {
    let i1 = RMat::from_fn(a + b, a, |r, c| if r == c { 1.0 } else { 0.0 });
    let i2 = RMat::from_fn(a + b, b, |r, c| if r == a + c { 1.0 } else { 0.0 });
    (
        StochMorphism::new(vec![a], vec![a + b], i1),
        StochMorphism::new(vec![b], vec![a + b], i2),
    )
}

/// Copairing `[f, g]: A + B -> C`; the domain is flattened to one atom.
pub fn copair(f: &StochMorphism, g: &StochMorphism) -> Result<StochMorphism, CatError> {
    if f.cod != g.cod {
        return Err(mismatch("copair", &f.cod, &g.cod));
    }
    let (m, na, nb) = (f.data.nrows(), f.data.ncols(), g.data.ncols());
    let data = RMat::from_fn(m, na + nb, |r, c| {
        if c < na {
            f.data[(r, c)]
        } else {
            g.data[(r, c - na)]
        }
    });
    Ok(StochMorphism::new(vec![na + nb], f.cod.clone(), data))
}

/// The distributor `[i1 ⊗ C, i2 ⊗ C]: A⊗C + B⊗C -> (A + B) ⊗ C`.
pub fn distributor(a: usize, b: usize, c: usize) -> StochMorphism {
    let (i1, i2) = injections(a, b);
    let idc = SrelTensor.identity(&[c]);
    copair(&SrelTensor.tensor(&i1, &idc), &SrelTensor.tensor(&i2, &idc)).expect("same codomain")
}

/// Inverse of [`distributor`]: its transpose, a permutation matrix.
pub fn distributor_inverse(a: usize, b: usize, c: usize) -> StochMorphism {
    let d = distributor(a, b, c);
    StochMorphism::new(d.cod.clone(), d.dom.clone(), d.data.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn compose_column() {
        let g = StochMorphism::new(vec![1], vec![2], RMat::from_row_slice(2, 1, &[0.5, 0.5]));
        let f = StochMorphism::new(vec![1], vec![1], RMat::from_row_slice(1, 1, &[1.0]));
        let h = SrelTensor.compose(&g, &f).unwrap();
        assert_eq!(h.data, RMat::from_row_slice(2, 1, &[0.5, 0.5]));
    }

    #[test]
    fn tensor_scalars() {
        let f = StochMorphism::new(vec![1], vec![1], RMat::from_row_slice(1, 1, &[0.5]));
        let g = StochMorphism::new(vec![1], vec![1], RMat::from_row_slice(1, 1, &[0.25]));
        assert_eq!(SrelTensor.tensor(&f, &g).data[(0, 0)], 0.125);
    }

    #[test]
    fn trace_of_slice() {
        let f = StochMorphism::new(
            vec![1, 2],
            vec![1, 2],
            RMat::from_row_slice(2, 2, &[0.3, 0.1, 0.2, 0.4]),
        );
        let t = SrelTensor
            .trace(&f, &[1], &[1], &[2], &tol())
            .unwrap()
            .defined()
            .unwrap();
        assert!((t.data[(0, 0)] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn trace_mass_exceeds_one() {
        let f = SrelTensor.identity(&[1, 2]);
        let r = SrelTensor
            .in_trace_class(&f, &[1], &[1], &[2], &tol())
            .unwrap();
        assert_eq!(r, Some(Reason::MassExceedsOne));
    }

    #[test]
    fn symmetry_entries() {
        let (a, b) = (2, 3);
        let s = SrelTensor.symmetry(&[a], &[b]);
        // s maps (a_, b_) at index a_*b + b_ to (b_, a_) at index b_*a + a_
        for x in 0..a {
            for y in 0..b {
                for yy in 0..b {
                    for xx in 0..a {
                        let v = s.data[(yy * a + xx, x * b + y)];
                        assert_eq!(v, if yy == y && xx == x { 1.0 } else { 0.0 });
                    }
                }
            }
        }
        let ss = SrelTensor
            .compose(&SrelTensor.symmetry(&[b], &[a]), &s)
            .unwrap();
        assert_eq!(ss, SrelTensor.identity(&[a, b]));
    }

    #[test]
    fn distributor_is_invertible() {
        for a in 0..=4 {
            for b in 0..=4 {
                for c in 1..=4 {
                    let d = distributor(a, b, c);
                    let di = distributor_inverse(a, b, c);
                    let n = (a + b) * c;
                    assert_eq!(&d.data * &di.data, RMat::identity(n, n));
                    assert_eq!(&di.data * &d.data, RMat::identity(n, n));
                }
            }
        }
    }
}
