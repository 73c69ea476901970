//! Dense complex linear algebra used by every category instance.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Tensor factors are ordered
//! with the first factor most significant, which is what [`kron`] produces.
//! Linear maps between operator spaces are stored as transfer matrices under
//! column-stacking vectorization: `vec(rho)[i + d*j] = rho[i][j]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;

/// Ordered tensor-factor dimensions.
pub type FactorDims = Vec<usize>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Numerical tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tol {
    /// Entrywise absolute tolerance for equality.
    pub eq_tol: f64,
    /// Singular-value cutoff, relative to the largest singular value (floored at scale 1).
    pub rank_tol: f64,
    /// Eigenvalue floor for positivity tests.
    pub psd_tol: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            eq_tol: 1e-8,
            rank_tol: 1e-9,
            psd_tol: 1e-9,
        }
    }
}

impl Tol {
    pub fn new(eq_tol: f64, rank_tol: f64, psd_tol: f64) -> Result<Tol, MatError> {
        let t = Tol {
            eq_tol,
            rank_tol,
            psd_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), MatError> {
        for (name, v) in [
            ("eq_tol", self.eq_tol),
            ("rank_tol", self.rank_tol),
            ("psd_tol", self.psd_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(MatError::BadTolerance(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Singular values at or below this count as zero. The scale is floored at 1 so that
    /// matrices made entirely of rounding noise have rank 0.
    pub fn rank_cut(&self, sigma_max: f64) -> f64 {
        self.rank_tol * sigma_max.max(1.0)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MatError {
    #[error("matrix is singular (smallest singular value {sigma_min:e}, largest {sigma_max:e})")]
    Singular { sigma_min: f64, sigma_max: f64 },
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("linear system has no solution (residual {0:e})")]
    NoSolution(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("bad tolerance: {0}")]
    BadTolerance(String),
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    Mat::zeros(rows, cols)
}

pub fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// Builds a matrix from real entries in row-major order.
pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Mat {
    assert_eq!(rows * cols, entries.len());
    Mat::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

pub fn is_finite(a: &Mat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entrywise absolute difference; infinite on shape mismatch.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &Mat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &Mat, b: &Mat, tol: f64) -> bool {
    max_abs_diff(a, b) <= tol
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Kronecker product of a list; the empty list gives the 1x1 identity.
pub fn kron_all(ms: &[Mat]) -> Mat {
    ms.iter().fold(eye(1), |acc, m| kron(&acc, m))
}

pub fn direct_sum(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Copies the `nr x nc` block starting at `(r0, c0)`.
pub fn block(a: &Mat, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
    a.view((r0, c0), (nr, nc)).into_owned()
}

/// Splits `a` into `(f11, f12, f21, f22)` where rows split at `r` and columns at `c`.
pub fn block_decompose(a: &Mat, r: usize, c: usize) -> (Mat, Mat, Mat, Mat) {
    let (m, n) = a.shape();
    (
        block(a, 0, 0, r, c),
        block(a, 0, c, r, n - c),
        block(a, r, 0, m - r, c),
        block(a, r, c, m - r, n - c),
    )
}

/// Assembles a 2x2 block matrix.
pub fn block_compose(f11: &Mat, f12: &Mat, f21: &Mat, f22: &Mat) -> Mat {
    let r = f11.nrows();
    let cc = f11.ncols();
    let mut out = zeros(r + f21.nrows(), cc + f12.ncols());
    out.view_mut((0, 0), f11.shape()).copy_from(f11);
    out.view_mut((0, cc), f12.shape()).copy_from(f12);
    out.view_mut((r, 0), f21.shape()).copy_from(f21);
    out.view_mut((r, cc), f22.shape()).copy_from(f22);
    out
}

fn to_faer(a: &Mat) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, C64>) -> Mat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Full singular value decomposition `(u, sigma, v)` with `a = u diag(sigma) v^dagger`,
/// `sigma` sorted descending. `u` and `v` are square.
///
/// Uses faer: nalgebra's SVD returns inaccurate singular vectors for exactly
/// rank-deficient inputs, which the kernel-image trace produces routinely.
fn svd_full(a: &Mat) -> (Mat, Vec<f64>, Mat) {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return (eye(m), vec![], eye(n));
    }
    let svd = to_faer(a).svd().expect("SVD converges");
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    (from_faer(svd.U()), sigma, from_faer(svd.V()))
}

/// Singular values, sorted descending.
pub fn singular_values(a: &Mat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return vec![];
    }
    let mut s = to_faer(a).singular_values().expect("SVD converges");
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn spectral_norm(a: &Mat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

fn rank_with_cutoff(sigma: &[f64], cutoff: f64) -> usize {
    sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Numerical rank with cutoff [`Tol::rank_cut`].
pub fn rank(a: &Mat, tol: &Tol) -> usize {
    let s = singular_values(a);
    let cut = tol.rank_cut(s.first().copied().unwrap_or(0.0));
    rank_with_cutoff(&s, cut)
}

pub fn inverse(a: &Mat, tol: &Tol) -> Result<Mat, MatError> {
    if a.nrows() != a.ncols() {
        return Err(MatError::DimMismatch(format!(
            "inverse of non-square {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(eye(0));
    }
    let s = singular_values(a);
    let (smax, smin) = (s[0], s[n - 1]);
    if smax == 0.0 || smin <= tol.rank_cut(smax) {
        return Err(MatError::Singular {
            sigma_min: smin,
            sigma_max: smax,
        });
    }
    a.clone().try_inverse().ok_or(MatError::Singular {
        sigma_min: smin,
        sigma_max: smax,
    })
}

pub fn hermitian_part(h: &Mat) -> Mat {
    (h + h.adjoint()) * c(0.5, 0.0)
}

fn check_hermitian(h: &Mat, tol: &Tol) -> Result<(), MatError> {
    if h.nrows() != h.ncols() {
        return Err(MatError::DimMismatch(
            "Hermitian test on non-square matrix".into(),
        ));
    }
    let asym = max_abs_diff(h, &h.adjoint());
    let scale = max_abs(h).max(1.0);
    if asym > tol.eq_tol * scale {
        return Err(MatError::NotHermitian(asym));
    }
    Ok(())
}

/// Eigen-decomposition of the Hermitian part: ascending eigenvalues and matching eigenvector columns.
pub fn eigh(h: &Mat) -> (Vec<f64>, Mat) {
    let n = h.nrows();
    if n == 0 {
        return (vec![], eye(0));
    }
    let eig = to_faer(&hermitian_part(h))
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigensolver converges");
    let s = eig.S().column_vector();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.total_cmp(&s[j].re));
    let u = eig.U();
    let vals = order.iter().map(|&i| s[i].re).collect();
    let vecs = Mat::from_fn(n, n, |r, cc| u[(r, order[cc])]);
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix (of its Hermitian part, after checking symmetry).
pub fn min_eig_hermitian(h: &Mat, tol: &Tol) -> Result<f64, MatError> {
    check_hermitian(h, tol)?;
    let (vals, _) = eigh(h);
    Ok(vals.first().copied().unwrap_or(f64::INFINITY))
}

/// Largest eigenvalue of the Hermitian part.
pub fn max_eig_hermitian(h: &Mat) -> f64 {
    let (vals, _) = eigh(h);
    vals.last().copied().unwrap_or(f64::NEG_INFINITY)
}

/// Orthonormal kernel basis as column vectors.
pub fn null_space(a: &Mat, tol: &Tol) -> Vec<Mat> {
    let n = a.ncols();
    if n == 0 {
        return vec![];
    }
    if a.nrows() == 0 {
        return (0..n).map(|i| col_of(&eye(n), i)).collect();
    }
    let (_, sigma, v) = svd_full(a);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cut = tol.rank_cut(smax);
    (0..n)
        .filter(|&i| sigma.get(i).is_none_or(|&s| s <= cut))
        .map(|i| col_of(&v, i))
        .collect()
}

fn col_of(a: &Mat, i: usize) -> Mat {
    Mat::from_fn(a.nrows(), 1, |r, _| a[(r, i)])
}

fn hcat(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

fn vcat(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Whether `im b ⊆ im a`, decided as `rank([a|b]) = rank(a)` under a common cutoff.
pub fn image_contains(a: &Mat, b: &Mat, tol: &Tol) -> bool {
    assert_eq!(a.nrows(), b.nrows(), "image_contains: row counts differ");
    let joint = hcat(a, b);
    let sj = singular_values(&joint);
    let smax = sj.first().copied().unwrap_or(0.0);
    let cut = tol.rank_cut(smax);
    rank_with_cutoff(&singular_values(a), cut) == rank_with_cutoff(&sj, cut)
}

/// Whether `ker a ⊆ ker b`, decided as `rank([a;b]) = rank(a)` under a common cutoff.
pub fn kernel_within(a: &Mat, b: &Mat, tol: &Tol) -> bool {
    assert_eq!(a.ncols(), b.ncols(), "kernel_within: column counts differ");
    let joint = vcat(a, b);
    let sj = singular_values(&joint);
    let smax = sj.first().copied().unwrap_or(0.0);
    let cut = tol.rank_cut(smax);
    rank_with_cutoff(&singular_values(a), cut) == rank_with_cutoff(&sj, cut)
}

/// Moore-Penrose pseudo-inverse with cutoff [`Tol::rank_cut`].
pub fn pinv(a: &Mat, tol: &Tol) -> Mat {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return zeros(n, m);
    }
    let (u, sigma, v) = svd_full(a);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cut = tol.rank_cut(smax);
    let mut out = zeros(n, m);
    for (k, &s) in sigma.iter().enumerate() {
        if s > cut && s > 0.0 && k < u.ncols() {
            let vk = v.column(k);
            let uk = u.column(k);
            out += (vk * uk.adjoint()) * c(1.0 / s, 0.0);
        }
    }
    out
}

/// Minimum-norm solution of `a x = b`.
pub fn solve_consistent(a: &Mat, b: &Mat, tol: &Tol) -> Result<Mat, MatError> {
    if a.nrows() != b.nrows() {
        return Err(MatError::DimMismatch(format!(
            "solve: a has {} rows, b has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    let x = pinv(a, tol) * b;
    let residual = max_abs_diff(&(a * &x), b);
    if residual > tol.eq_tol {
        return Err(MatError::NoSolution(residual));
    }
    Ok(x)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn unravel(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// Contracts the tensor factor at `traced` in domain and codomain.
pub fn op_partial_trace(
    f: &Mat,
    dom: &[usize],
    cod: &[usize],
    traced: usize,
) -> Result<Mat, MatError> {
    let dn: usize = dom.iter().product();
    let cn: usize = cod.iter().product();
    if f.shape() != (cn, dn) {
        return Err(MatError::DimMismatch(format!(
            "operator is {}x{}, factors give {}x{}",
            f.nrows(),
            f.ncols(),
            cn,
            dn
        )));
    }
    if traced >= dom.len() || traced >= cod.len() || dom[traced] != cod[traced] {
        return Err(MatError::DimMismatch(format!(
            "traced factor {traced} absent or of unequal dimension"
        )));
    }
    let d = dom[traced];
    let mut rdom = dom.to_vec();
    rdom.remove(traced);
    let mut rcod = cod.to_vec();
    rcod.remove(traced);
    let (sd, sc) = (strides(dom), strides(cod));
    let rn: usize = rcod.iter().product();
    let rm: usize = rdom.iter().product();
    let mut out = zeros(rn, rm);
    for r in 0..rn {
        let ri = unravel(r, &rcod);
        let mut rbase = 0;
        for (k, &v) in ri.iter().enumerate() {
            let pos = if k < traced { k } else { k + 1 };
            rbase += v * sc[pos];
        }
        for col in 0..rm {
            let ci = unravel(col, &rdom);
            let mut cbase = 0;
            for (k, &v) in ci.iter().enumerate() {
                let pos = if k < traced { k } else { k + 1 };
                cbase += v * sd[pos];
            }
            let mut acc = ZERO;
            for t in 0..d {
                acc += f[(rbase + t * sc[traced], cbase + t * sd[traced])];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(out)
}

/// Partial trace over a trailing factor: `f: X⊗U -> Y⊗U` with `dim U = du`.
pub fn partial_trace_tail(f: &Mat, du: usize) -> Mat {
    assert!(du > 0 && f.nrows().is_multiple_of(du) && f.ncols().is_multiple_of(du));
    let (dy, dx) = (f.nrows() / du, f.ncols() / du);
    Mat::from_fn(dy, dx, |y, x| {
        (0..du).map(|u| f[(y * du + u, x * du + u)]).sum()
    })
}

/// Permutation matrix sending factor `perm[k]` of the input to position `k` of the output.
pub fn factor_permutation(dims: &[usize], perm: &[usize]) -> Mat {
    assert_eq!(dims.len(), perm.len(), "permutation length");
    let n: usize = dims.iter().product();
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let os = strides(&out_dims);
    let mut p = zeros(n, n);
    for i in 0..n {
        let mi = unravel(i, dims);
        let j: usize = perm.iter().enumerate().map(|(k, &q)| mi[q] * os[k]).sum();
        p[(j, i)] = ONE;
    }
    p
}

/// `(p ∘ q)[k] = p[q[k]]`: applying `p` then `q` as factor permutations.
pub fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&k| p[k]).collect()
}

pub fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (k, &v) in p.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Column-stacking vectorization.
pub fn vec_op(rho: &Mat) -> Mat {
    let (r, cc) = rho.shape();
    Mat::from_fn(r * cc, 1, |k, _| rho[(k % r, k / r)])
}

pub fn unvec_op(v: &Mat, rows: usize) -> Mat {
    let cc = v.nrows() / rows;
    Mat::from_fn(rows, cc, |i, j| v[(i + rows * j, 0)])
}

pub fn apply_transfer(t: &Mat, rho: &Mat, d_out: usize) -> Mat {
    unvec_op(&(t * vec_op(rho)), d_out)
}

/// Transfer matrix of `rho ↦ Σ K rho K†`.
pub fn transfer_from_kraus(kraus: &[Mat], d_in: usize, d_out: usize) -> Mat {
    let mut t = zeros(d_out * d_out, d_in * d_in);
    for k in kraus {
        t += kron(&k.map(|z| z.conj()), k);
    }
    t
}

fn check_transfer_dims(t: &Mat, d_in: usize, d_out: usize) -> Result<(), MatError> {
    if t.shape() != (d_out * d_out, d_in * d_in) {
        return Err(MatError::DimMismatch(format!(
            "transfer is {}x{}, expected {}x{}",
            t.nrows(),
            t.ncols(),
            d_out * d_out,
            d_in * d_in
        )));
    }
    Ok(())
}

/// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)`.
pub fn choi(t: &Mat, d_in: usize, d_out: usize) -> Result<Mat, MatError> {
    check_transfer_dims(t, d_in, d_out)?;
    let n = d_in * d_out;
    Ok(Mat::from_fn(n, n, |r, cc| {
        let (i, a) = (r / d_out, r % d_out);
        let (j, b) = (cc / d_out, cc % d_out);
        t[(a + d_out * b, i + d_in * j)]
    }))
}

/// Inverse of [`choi`].
pub fn transfer_from_choi(cm: &Mat, d_in: usize, d_out: usize) -> Mat {
    let mut t = zeros(d_out * d_out, d_in * d_in);
    for i in 0..d_in {
        for j in 0..d_in {
            for a in 0..d_out {
                for b in 0..d_out {
                    t[(a + d_out * b, i + d_in * j)] = cm[(i * d_out + a, j * d_out + b)];
                }
            }
        }
    }
    t
}

/// Smallest eigenvalue of the Choi matrix, or an error when it is not Hermitian.
pub fn choi_min_eig(t: &Mat, d_in: usize, d_out: usize, tol: &Tol) -> Result<f64, MatError> {
    let cm = choi(t, d_in, d_out)?;
    min_eig_hermitian(&cm, tol)
}

pub fn is_completely_positive(t: &Mat, d_in: usize, d_out: usize, tol: &Tol) -> bool {
    match choi_min_eig(t, d_in, d_out, tol) {
        Ok(m) => m >= -tol.psd_tol,
        Err(_) => false,
    }
}

/// Minimal Kraus list of a CP map given by its Choi matrix.
pub fn kraus_from_choi(
    cm: &Mat,
    d_in: usize,
    d_out: usize,
    tol: &Tol,
) -> Result<Vec<Mat>, MatError> {
    let n = d_in * d_out;
    if cm.shape() != (n, n) {
        return Err(MatError::DimMismatch(format!(
            "Choi is {}x{}, expected {n}x{n}",
            cm.nrows(),
            cm.ncols()
        )));
    }
    check_hermitian(cm, tol)?;
    let (vals, vecs) = eigh(cm);
    let lmax = vals.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    if let Some(&lmin) = vals.first() {
        if lmin < -tol.psd_tol * lmax.max(1.0) {
            return Err(MatError::NotPsd(lmin));
        }
    }
    let cut = tol.rank_tol * lmax;
    let mut out = Vec::new();
    for (k, &l) in vals.iter().enumerate() {
        if l > cut && l > 0.0 {
            let s = l.sqrt();
            out.push(Mat::from_fn(d_out, d_in, |a, i| {
                vecs[(i * d_out + a, k)] * s
            }));
        }
    }
    Ok(out)
}

/// The operator `W` with `tr Φ(rho) = tr(W rho)`; Hermitian for Hermiticity-preserving maps.
pub fn trace_functional(t: &Mat, d_in: usize, d_out: usize) -> Mat {
    Mat::from_fn(d_in, d_in, |j, i| {
        (0..d_out).map(|a| t[(a + d_out * a, i + d_in * j)]).sum()
    })
}

/// Superoperator tensor product in transfer form.
pub fn superop_tensor(
    tf: &Mat,
    f_in: usize,
    f_out: usize,
    tg: &Mat,
    g_in: usize,
    g_out: usize,
) -> Mat {
    let d_in = f_in * g_in;
    let d_out = f_out * g_out;
    let mut t = zeros(d_out * d_out, d_in * d_in);
    for i1 in 0..f_in {
        for j1 in 0..f_in {
            let mut e = zeros(f_in, f_in);
            e[(i1, j1)] = ONE;
            let fo = apply_transfer(tf, &e, f_out);
            for i2 in 0..g_in {
                for j2 in 0..g_in {
                    let mut e2 = zeros(g_in, g_in);
                    e2[(i2, j2)] = ONE;
                    let go = apply_transfer(tg, &e2, g_out);
                    let col = vec_op(&kron(&fo, &go));
                    let (i, j) = (i1 * g_in + i2, j1 * g_in + j2);
                    t.set_column(i + d_in * j, &col.column(0));
                }
            }
        }
    }
    t
}
