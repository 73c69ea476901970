//! Completely positive maps between Hilbert spaces with the tensor product,
//! presented by Kraus lists. The trace is total: each Kraus operator is
//! partially traced over `U`, giving `rho ↦ Σ_j tr_U(F_j) rho tr_U(F_j)†`.

use super::{
    check_trace_shape, fhilb::total, mismatch, CatError, Obj, TraceOutcome, TracedCategory,
};
use crate::mat::{self, Mat, Tol};

#[derive(Clone, Debug, PartialEq)]
pub struct KrausMorphism {
    pub dom: Obj,
    pub cod: Obj,
    pub kraus: Vec<Mat>,
}

impl KrausMorphism {
    pub fn new(dom: Obj, cod: Obj, kraus: Vec<Mat>) -> KrausMorphism {
        let (di, d_o) = (total(&dom), total(&cod));
        for k in &kraus {
            assert_eq!(k.shape(), (d_o, di), "Kraus operator shape");
        }
        KrausMorphism { dom, cod, kraus }
    }

    pub fn d_in(&self) -> usize {
        total(&self.dom)
    }

    pub fn d_out(&self) -> usize {
        total(&self.cod)
    }

    pub fn transfer(&self) -> Mat {
        mat::transfer_from_kraus(&self.kraus, self.d_in(), self.d_out())
    }

    /// `Σ K†K`, the operator whose bound by `I` is trace non-increase.
    pub fn effect(&self) -> Mat {
        let n = self.d_in();
        self.kraus
            .iter()
            .fold(mat::zeros(n, n), |acc, k| acc + k.adjoint() * k)
    }

    pub fn is_trace_nonincreasing(&self, tol: &Tol) -> bool {
        mat::max_eig_hermitian(&self.effect()) <= 1.0 + tol.psd_tol
    }

    /// Replaces the Kraus list by a minimal one when it has grown past `limit`.
    pub fn compressed(self, limit: usize) -> KrausMorphism {
        let (di, d_o) = (self.d_in(), self.d_out());
        if self.kraus.len() <= limit.max(di * d_o) {
            return self;
        }
        let t = self.transfer();
        let fine = Tol {
            eq_tol: 1e-8,
            rank_tol: 1e-15,
            psd_tol: 1e-9,
        };
        match mat::choi(&t, di, d_o).and_then(|c| mat::kraus_from_choi(&c, di, d_o, &fine)) {
            Ok(ks) => KrausMorphism::new(self.dom, self.cod, ks),
            Err(_) => self,
        }
    }

    /// Kraus list `{Σ_j U_ij F_j}` after padding with zero operators to the size of `u`.
    pub fn remixed(&self, u: &Mat) -> KrausMorphism {
        let n = u.nrows();
        assert!(n >= self.kraus.len() && u.ncols() == n, "unitary too small");
        let zero = mat::zeros(self.d_out(), self.d_in());
        let ks = (0..n)
            .map(|i| {
                self.kraus
                    .iter()
                    .enumerate()
                    .fold(zero.clone(), |acc, (j, f)| acc + f * u[(i, j)])
            })
            .collect();
        KrausMorphism::new(self.dom.clone(), self.cod.clone(), ks)
    }
}

const KRAUS_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, Default)]
pub struct CpmsTensor;

impl CpmsTensor {
    pub fn from_kraus(&self, dom: &[usize], cod: &[usize], kraus: Vec<Mat>) -> KrausMorphism {
        KrausMorphism::new(dom.to_vec(), cod.to_vec(), kraus)
    }
}

impl TracedCategory for CpmsTensor {
    type Mor = KrausMorphism;

    fn name(&self) -> &'static str {
        "CPMS_TENSOR"
    }

    fn dom(&self, f: &KrausMorphism) -> Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &KrausMorphism) -> Obj {
        f.cod.clone()
    }

    fn identity(&self, x: &[usize]) -> KrausMorphism {
        KrausMorphism::new(x.to_vec(), x.to_vec(), vec![mat::eye(total(x))])
    }

    fn compose(&self, g: &KrausMorphism, f: &KrausMorphism) -> Result<KrausMorphism, CatError> {
        if f.cod != g.dom {
            return Err(mismatch("compose", &f.cod, &g.dom));
        }
        let mut ks = Vec::with_capacity(f.kraus.len() * g.kraus.len());
        for gk in &g.kraus {
            for fk in &f.kraus {
                ks.push(gk * fk);
            }
        }
        Ok(KrausMorphism::new(f.dom.clone(), g.cod.clone(), ks).compressed(KRAUS_LIMIT))
    }

    fn tensor(&self, f: &KrausMorphism, g: &KrausMorphism) -> KrausMorphism {
        let mut ks = Vec::with_capacity(f.kraus.len() * g.kraus.len());
        for fk in &f.kraus {
            for gk in &g.kraus {
                ks.push(mat::kron(fk, gk));
            }
        }
        KrausMorphism::new(
            super::concat(&f.dom, &g.dom),
            super::concat(&f.cod, &g.cod),
            ks,
        )
        .compressed(KRAUS_LIMIT)
    }

    fn permutation(&self, x: &[usize], perm: &[usize]) -> KrausMorphism {
        let y: Obj = perm.iter().map(|&p| x[p]).collect();
        KrausMorphism::new(x.to_vec(), y, vec![mat::factor_permutation(x, perm)])
    }

    fn trace(
        &self,
        f: &KrausMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        _tol: &Tol,
    ) -> Result<TraceOutcome<KrausMorphism>, CatError> {
        check_trace_shape(&f.dom, &f.cod, x, y, u)?;
        let du = total(u);
        let ks = f
            .kraus
            .iter()
            .map(|k| mat::partial_trace_tail(k, du))
            .collect();
        Ok(TraceOutcome::Defined(KrausMorphism::new(
            x.to_vec(),
            y.to_vec(),
            ks,
        )))
    }

    fn to_matrix(&self, f: &KrausMorphism) -> Mat {
        f.transfer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, from_real};

    #[test]
    fn symmetry_is_conjugation_by_swap() {
        let s = CpmsTensor.symmetry(&[2], &[2]);
        let u = mat::factor_permutation(&[2, 2], &[1, 0]);
        let a = Mat::from_fn(4, 4, |i, j| {
            c(i as f64 + 0.5 * j as f64, j as f64 - i as f64)
        });
        let lhs = mat::apply_transfer(&s.transfer(), &a, 4);
        assert!(mat::approx_eq(&lhs, &(&u * &a * u.adjoint()), 1e-14));
    }

    #[test]
    fn tensor_of_single_kraus_maps() {
        let f = from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let g = from_real(2, 1, &[0.5, -1.0]);
        let t = CpmsTensor.tensor(
            &CpmsTensor.from_kraus(&[2], &[2], vec![f.clone()]),
            &CpmsTensor.from_kraus(&[1], &[2], vec![g.clone()]),
        );
        assert_eq!(t.kraus.len(), 1);
        assert!(mat::approx_eq(&t.kraus[0], &mat::kron(&f, &g), 0.0));
    }

    #[test]
    fn trace_is_partial_trace_of_each_kraus() {
        let u = Mat::from_fn(4, 4, |i, j| c((i * 4 + j) as f64 * 0.1, (i as f64) * 0.2));
        let f = CpmsTensor.from_kraus(&[2, 2], &[2, 2], vec![u.clone()]);
        let t = CpmsTensor
            .trace(&f, &[2], &[2], &[2], &Tol::default())
            .unwrap()
            .defined()
            .unwrap();
        let expect = mat::op_partial_trace(&u, &[2, 2], &[2, 2], 1).unwrap();
        assert!(mat::approx_eq(&t.kraus[0], &expect, 1e-14));
    }

    #[test]
    fn trace_nonincreasing_examples() {
        let id = CpmsTensor.identity(&[2]);
        assert!(id.is_trace_nonincreasing(&Tol::default()));
        let twice = CpmsTensor.from_kraus(&[2], &[2], vec![mat::eye(2) * c(2f64.sqrt(), 0.0)]);
        assert!(!twice.is_trace_nonincreasing(&Tol::default()));
    }

    #[test]
    fn compression_keeps_the_map() {
        let ks: Vec<Mat> = (0..70)
            .map(|k| Mat::from_fn(2, 2, |i, j| c(((k + i + 2 * j) % 5) as f64 * 0.01, 0.0)))
            .collect();
        let f = KrausMorphism::new(vec![2], vec![2], ks);
        let t = f.transfer();
        let g = f.compressed(8);
        assert!(g.kraus.len() <= 4);
        assert!(mat::approx_eq(&g.transfer(), &t, 1e-12));
    }
}
