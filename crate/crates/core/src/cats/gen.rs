//! Seeded random generators for objects and morphisms of every category.

use super::cpm::{self, CpmOps};
use super::cpms::KrausMorphism;
use super::srel::{size, RMat, StochMorphism};
use super::{
    BlockMorphism, CategoryId, CpmOplus, CpmsTensor, FhilbTensor, InducedOplus, Obj, QOplusTotal,
    QsTensorSub, SrelTensor, TracedCategory, VectMode, VectOplus,
};
use crate::mat::{self, c, Mat, Tol};
use nalgebra::linalg::QR;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

pub type SampleRng = ChaCha8Rng;

/// Matrix of i.i.d. standard complex Gaussians.
pub fn gaussian_mat<R: Rng + ?Sized>(rng: &mut R, r: usize, cols: usize) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(r, cols, |_, _| {
        let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        c(a * s, b * s)
    })
}

/// Haar-random unitary via QR of a Gaussian matrix with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let qr = QR::new(gaussian_mat(rng, n, n));
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            mat::ONE
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Gaussian matrix rescaled to spectral norm `norm`.
pub fn gaussian_with_norm<R: Rng + ?Sized>(rng: &mut R, r: usize, cols: usize, norm: f64) -> Mat {
    let g = gaussian_mat(rng, r, cols);
    let s = mat::spectral_norm(&g);
    if s == 0.0 {
        return g;
    }
    g * c(norm / s, 0.0)
}

/// Random Kraus list of `n` operators scaled so that `λmax(Σ K†K) = s`.
pub fn kraus_list<R: Rng + ?Sized>(
    rng: &mut R,
    d_in: usize,
    d_out: usize,
    n: usize,
    s: f64,
) -> Vec<Mat> {
    let ks: Vec<Mat> = (0..n).map(|_| gaussian_mat(rng, d_out, d_in)).collect();
    let eff = ks
        .iter()
        .fold(mat::zeros(d_in, d_in), |acc, k| acc + k.adjoint() * k);
    let l = mat::max_eig_hermitian(&eff);
    let f = if l > 0.0 { (s / l).sqrt() } else { 1.0 };
    ks.into_iter().map(|k| k * c(f, 0.0)).collect()
}

/// Shape limits for generated objects.
#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    /// Largest atom; for tensor categories the largest object dimension.
    pub dim_cap: usize,
    pub max_atoms: usize,
}

impl GenConfig {
    pub fn for_category(id: CategoryId, dim_max: Option<usize>) -> GenConfig {
        let cap = id.default_dim_cap();
        GenConfig {
            dim_cap: dim_max.map_or(cap, |d| d.min(cap)).max(1),
            max_atoms: 2,
        }
    }
}

fn oplus_obj(rng: &mut SampleRng, g: &GenConfig) -> Obj {
    let n = rng.gen_range(1..=g.max_atoms.max(1));
    (0..n).map(|_| rng.gen_range(1..=g.dim_cap)).collect()
}

fn tensor_obj(rng: &mut SampleRng, g: &GenConfig) -> Obj {
    let n = rng.gen_range(1..=g.max_atoms.max(1));
    let mut x = Vec::with_capacity(n);
    let mut room = g.dim_cap;
    for _ in 0..n {
        let d = rng.gen_range(1..=room.max(1));
        x.push(d);
        room /= d;
    }
    x
}

/// Random generation hooks used by the axiom engine.
pub trait Sampler: TracedCategory {
    fn id(&self) -> CategoryId;
    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj;
    /// A morphism of the category, away from any class boundary.
    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> Self::Mor;
    /// A candidate `x ⊗ u -> y ⊗ u`; unless `raw`, it is biased into the trace class.
    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        raw: bool,
    ) -> Self::Mor;
    /// False when the trace-class decision or value would be numerically fragile.
    fn well_conditioned(
        &self,
        _f: &Self::Mor,
        _x: &[usize],
        _y: &[usize],
        _u: &[usize],
        _tol: &Tol,
    ) -> bool {
        true
    }
    /// `s · f` for `s > 0`; stays inside the category.
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor;
}

fn scaled_block(f: &BlockMorphism, s: f64) -> BlockMorphism {
    BlockMorphism::new(f.dom.clone(), f.cod.clone(), &f.data * c(s, 0.0))
}

fn scaled_kraus(f: &KrausMorphism, s: f64) -> KrausMorphism {
    let k = c(s.sqrt(), 0.0);
    KrausMorphism::new(
        f.dom.clone(),
        f.cod.clone(),
        f.kraus.iter().map(|m| m * k).collect(),
    )
}

/// Smallest accepted nonzero singular value of `I - f22`.
pub const SIGMA_FLOOR: f64 = 0.05;

fn feedback_conditioned(f22: Mat) -> bool {
    let n = f22.nrows();
    if n == 0 {
        return true;
    }
    let s = mat::singular_values(&(mat::eye(n) - f22));
    let zero = 1e-10 * s[0].max(1.0);
    s.iter().all(|&v| v <= zero || v >= SIGMA_FLOOR)
}

impl VectOplus {
    /// `f22 = I - AB` with `rank(AB) = r < |u|`, `f21 = AC`, `f12 = DB`.
    /// The kernel-image trace is `f11 + DC`; also returns that oracle.
    pub fn singular_candidate(
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
    ) -> (BlockMorphism, Mat) {
        let (nx, ny, nu) = (Self::total(x), Self::total(y), Self::total(u));
        let r = if nu == 0 { 0 } else { rng.gen_range(0..nu) };
        let sc = |m: Mat| {
            let k = (m.nrows().max(m.ncols()).max(1) as f64).sqrt();
            m * c(1.0 / k, 0.0)
        };
        let a = sc(gaussian_mat(rng, nu, r));
        let b = sc(gaussian_mat(rng, r, nu));
        let cm = sc(gaussian_mat(rng, r, nx));
        let d = sc(gaussian_mat(rng, ny, r));
        let norm = rng.gen_range(0.2..2.0);
        let f11 = gaussian_with_norm(rng, ny, nx, norm);
        let f22 = mat::eye(nu) - &a * &b;
        let data = mat::block_compose(&f11, &(&d * &b), &(&a * &cm), &f22);
        let oracle = f11 + d * cm;
        (
            BlockMorphism::new(super::concat(x, u), super::concat(y, u), data),
            oracle,
        )
    }
}

impl Sampler for VectOplus {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_block(f, s)
    }

    fn id(&self) -> CategoryId {
        match self.mode {
            VectMode::Inv => CategoryId::VECT_OPLUS_INV,
            VectMode::Kerim => CategoryId::VECT_OPLUS_KERIM,
        }
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        oplus_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> BlockMorphism {
        let t = rng.gen_range(0.1..=1.0);
        self.morphism(
            x,
            y,
            gaussian_with_norm(rng, Self::total(y), Self::total(x), 2.0 * t),
        )
    }

    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        raw: bool,
    ) -> BlockMorphism {
        if !raw && self.mode == VectMode::Kerim && rng.gen_bool(0.5) {
            return Self::singular_candidate(rng, x, y, u).0;
        }
        self.random_mor(rng, &super::concat(x, u), &super::concat(y, u))
    }

    fn well_conditioned(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        _u: &[usize],
        _tol: &Tol,
    ) -> bool {
        feedback_conditioned(Self::blocks(f, x, y).3)
    }
}

impl Sampler for FhilbTensor {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_block(f, s)
    }

    fn id(&self) -> CategoryId {
        CategoryId::FHILB_TENSOR
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        tensor_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> BlockMorphism {
        let t = rng.gen_range(0.1..=1.0);
        let (m, n) = (super::fhilb::total(y), super::fhilb::total(x));
        BlockMorphism::new(
            x.to_vec(),
            y.to_vec(),
            gaussian_with_norm(rng, m, n, 2.0 * t),
        )
    }

    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        _raw: bool,
    ) -> BlockMorphism {
        self.random_mor(rng, &super::concat(x, u), &super::concat(y, u))
    }
}

/// Sub-stochastic matrix with Dirichlet(1, .., 1) columns of uniform mass.
pub fn random_substochastic(rng: &mut SampleRng, rows: usize, cols: usize) -> RMat {
    let mut m = RMat::zeros(rows, cols);
    for j in 0..cols {
        let w: Vec<f64> = (0..rows).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let tot: f64 = w.iter().sum();
        let mass: f64 = rng.gen_range(0.0..1.0);
        for (i, v) in w.iter().enumerate() {
            m[(i, j)] = if tot > 0.0 { v / tot * mass } else { 0.0 };
        }
    }
    m
}

impl Sampler for SrelTensor {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        StochMorphism::new(f.dom.clone(), f.cod.clone(), &f.data * s)
    }

    fn id(&self) -> CategoryId {
        CategoryId::SREL_TENSOR
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        tensor_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> StochMorphism {
        StochMorphism::new(
            x.to_vec(),
            y.to_vec(),
            random_substochastic(rng, size(y), size(x)),
        )
    }

    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        raw: bool,
    ) -> StochMorphism {
        let mut f = self.random_mor(rng, &super::concat(x, u), &super::concat(y, u));
        if !raw {
            let du = size(u);
            let mass = (0..size(x))
                .map(|xx| {
                    (0..size(y))
                        .map(|yy| {
                            (0..du)
                                .map(|uu| f.data[(yy * du + uu, xx * du + uu)])
                                .sum::<f64>()
                        })
                        .sum::<f64>()
                })
                .fold(0.0, f64::max);
            if mass > 0.9 {
                let margin = rng.gen_range(1.01..1.5);
                f.data /= mass * margin;
            }
        }
        f
    }
}

fn random_kraus_mor(rng: &mut SampleRng, x: &[usize], y: &[usize]) -> KrausMorphism {
    let s = rng.gen_range(0.3..=1.0);
    let (di, d_o) = (super::fhilb::total(x), super::fhilb::total(y));
    KrausMorphism::new(x.to_vec(), y.to_vec(), kraus_list(rng, di, d_o, 2, s))
}

impl Sampler for CpmsTensor {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_kraus(f, s)
    }

    fn id(&self) -> CategoryId {
        CategoryId::CPMS_TENSOR
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        tensor_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> KrausMorphism {
        random_kraus_mor(rng, x, y)
    }

    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        _raw: bool,
    ) -> KrausMorphism {
        random_kraus_mor(rng, &super::concat(x, u), &super::concat(y, u))
    }
}

impl Sampler for QsTensorSub {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_kraus(f, s)
    }

    fn id(&self) -> CategoryId {
        CategoryId::QS_TENSOR_SUB
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        tensor_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> KrausMorphism {
        random_kraus_mor(rng, x, y)
    }

    /// Unless `raw`, a trace-increasing canonical trace is scaled back into `Q_s`.
    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        raw: bool,
    ) -> KrausMorphism {
        let f = random_kraus_mor(rng, &super::concat(x, u), &super::concat(y, u));
        if raw {
            return f;
        }
        let tol = Tol::default();
        let t = match CpmsTensor
            .trace(&f, x, y, u, &tol)
            .ok()
            .and_then(|t| t.defined())
        {
            Some(t) => t,
            None => return f,
        };
        let l = mat::max_eig_hermitian(&t.effect());
        if l <= 0.95 {
            return f;
        }
        let k = (1.0 / (l * rng.gen_range(1.01..1.5))).sqrt();
        KrausMorphism::new(
            f.dom,
            f.cod,
            f.kraus.into_iter().map(|m| m * c(k, 0.0)).collect(),
        )
    }
}

/// Blockwise random CP matrix: 2 Kraus operators per block, each domain
/// column scaled so that its effect has largest eigenvalue in `scale`.
pub fn random_cpm_grid(
    rng: &mut SampleRng,
    x: &[usize],
    y: &[usize],
    scale: std::ops::RangeInclusive<f64>,
) -> BlockMorphism {
    let mut grid: Vec<Vec<Vec<Mat>>> = y.iter().map(|_| Vec::with_capacity(x.len())).collect();
    for &dj in x {
        let ks: Vec<Vec<Mat>> = y
            .iter()
            .map(|&di| kraus_list(rng, dj, di, 2, 1.0))
            .collect();
        let eff = ks
            .iter()
            .flatten()
            .fold(mat::zeros(dj, dj), |acc, k| acc + k.adjoint() * k);
        let l = mat::max_eig_hermitian(&eff);
        let s = rng.gen_range(scale.clone());
        let f = if l > 0.0 { (s / l).sqrt() } else { 1.0 };
        for (i, col) in ks.into_iter().enumerate() {
            grid[i].push(col.into_iter().map(|k| k * c(f, 0.0)).collect());
        }
    }
    cpm::from_kraus_grid(x, y, &grid)
}

const Q_SCALE: std::ops::RangeInclusive<f64> = 0.3..=0.95;

fn cpm_trace_conditioned(f: &BlockMorphism, x: &[usize], y: &[usize]) -> bool {
    feedback_conditioned(CpmOps::blocks(f, x, y).3)
}

impl Sampler for CpmOplus {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_block(f, s)
    }

    fn id(&self) -> CategoryId {
        CategoryId::CPM_OPLUS
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        oplus_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> BlockMorphism {
        random_cpm_grid(rng, x, y, Q_SCALE)
    }

    /// Unless `raw`, columns are contracting so `(I - f22)^{-1}` is a convergent sum of CP maps.
    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        raw: bool,
    ) -> BlockMorphism {
        let scale = if raw { 0.3..=2.5 } else { Q_SCALE };
        random_cpm_grid(rng, &super::concat(x, u), &super::concat(y, u), scale)
    }

    fn well_conditioned(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        tol: &Tol,
    ) -> bool {
        if !cpm_trace_conditioned(f, x, y) {
            return false;
        }
        match CpmOplus::feedback_inverse(f, x, y, u, tol) {
            // keep the Choi test clear of its cutoff
            Ok(Some((_, e))) => !(-1e-6..-1e-12).contains(&e),
            _ => true,
        }
    }
}

impl Sampler for QOplusTotal {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_block(f, s)
    }

    fn id(&self) -> CategoryId {
        CategoryId::Q_OPLUS_TOTAL
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        oplus_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> BlockMorphism {
        random_cpm_grid(rng, x, y, Q_SCALE)
    }

    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        _raw: bool,
    ) -> BlockMorphism {
        random_cpm_grid(rng, &super::concat(x, u), &super::concat(y, u), Q_SCALE)
    }
}

/// Makes the `k`-th component of `u` a dead loop: identity on itself, no
/// flow in from `x ⊕ u` and none out to `y ⊕ u`.
pub fn isolate_component(f: &BlockMorphism, x: &[usize], y: &[usize], k: usize) -> BlockMorphism {
    let (nx, ny) = (x.len(), y.len());
    let (ci, ri) = (nx + k, ny + k);
    let mut out = f.clone();
    let ro: Vec<usize> = f
        .cod
        .iter()
        .scan(0, |a, d| {
            let o = *a;
            *a += d * d;
            Some(o)
        })
        .collect();
    let co: Vec<usize> = f
        .dom
        .iter()
        .scan(0, |a, d| {
            let o = *a;
            *a += d * d;
            Some(o)
        })
        .collect();
    let d = f.dom[ci];
    let (n_rows, n_cols) = (out.data.nrows(), out.data.ncols());
    for r in ro[ri]..ro[ri] + d * d {
        for cc in 0..n_cols {
            out.data[(r, cc)] = mat::ZERO;
        }
    }
    for r in 0..n_rows {
        for cc in co[ci]..co[ci] + d * d {
            out.data[(r, cc)] = mat::ZERO;
        }
    }
    for i in 0..d * d {
        out.data[(ro[ri] + i, co[ci] + i)] = mat::ONE;
    }
    out
}

impl Sampler for InducedOplus {
    fn scaled(&self, f: &Self::Mor, s: f64) -> Self::Mor {
        scaled_block(f, s)
    }

    fn id(&self) -> CategoryId {
        match self.emb.host.mode {
            VectMode::Inv => CategoryId::Q_OPLUS_INV,
            VectMode::Kerim => CategoryId::Q_OPLUS_KERIM,
        }
    }

    fn random_obj(&self, rng: &mut SampleRng, g: &GenConfig) -> Obj {
        oplus_obj(rng, g)
    }

    fn random_mor(&self, rng: &mut SampleRng, x: &[usize], y: &[usize]) -> BlockMorphism {
        random_cpm_grid(rng, x, y, Q_SCALE)
    }

    fn trace_candidate(
        &self,
        rng: &mut SampleRng,
        x: &[usize],
        y: &[usize],
        u: &[usize],
        raw: bool,
    ) -> BlockMorphism {
        let f = random_cpm_grid(rng, &super::concat(x, u), &super::concat(y, u), Q_SCALE);
        if !raw && self.emb.host.mode == VectMode::Kerim && !u.is_empty() && rng.gen_bool(0.5) {
            let k = rng.gen_range(0..u.len());
            return isolate_component(&f, x, y, k);
        }
        f
    }

    fn well_conditioned(
        &self,
        f: &BlockMorphism,
        x: &[usize],
        y: &[usize],
        _u: &[usize],
        _tol: &Tol,
    ) -> bool {
        cpm_trace_conditioned(f, x, y)
    }
}
