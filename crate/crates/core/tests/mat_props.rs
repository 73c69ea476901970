use proptest::prelude::*;
use tracelab::mat::{self, c, Mat, Tol};

fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| Mat::from_iterator(rows, cols, v.into_iter().map(|(re, im)| c(re, im))))
}

fn any_cmat(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max, 1..=max).prop_flat_map(|(r, k)| cmat(r, k))
}

/// A matrix of rank at most `r`, built as a product through an `r`-dimensional space.
fn low_rank(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max, 1..=max, 1..=max)
        .prop_flat_map(|(m, n, r)| (cmat(m, r), cmat(r, n)))
        .prop_map(|(a, b)| a * b)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn tol() -> Tol {
    Tol::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn choi_round_trip(
        (din, dout, ks) in (1..=3usize, 1..=3usize, 1..=3usize)
            .prop_flat_map(|(i, o, n)| (Just(i), Just(o), prop::collection::vec(cmat(o, i), n)))
    ) {
        let t = mat::transfer_from_kraus(&ks, din, dout);
        let cm = mat::choi(&t, din, dout).unwrap();
        let back = mat::transfer_from_kraus(&mat::kraus_from_choi(&cm, din, dout, &tol()).unwrap(), din, dout);
        prop_assert!(mat::max_abs_diff(&back, &t) <= 10.0 * tol().eq_tol);
        prop_assert!(mat::is_completely_positive(&t, din, dout, &tol()));
    }

    #[test]
    fn inverse_is_two_sided(a in (1..=5usize).prop_flat_map(|n| cmat(n, n))) {
        if let Ok(inv) = mat::inverse(&a, &tol()) {
            let n = a.nrows();
            let scale = mat::max_abs(&inv).max(1.0) * mat::max_abs(&a).max(1.0);
            prop_assert!(mat::max_abs_diff(&(&inv * &a), &mat::eye(n)) <= 1e-10 * scale);
            prop_assert!(mat::max_abs_diff(&(&a * &inv), &mat::eye(n)) <= 1e-10 * scale);
        }
    }

    #[test]
    fn null_space_is_annihilated_and_complements_rank(a in low_rank(5)) {
        let ns = mat::null_space(&a, &tol());
        prop_assert_eq!(ns.len() + mat::rank(&a, &tol()), a.ncols());
        for v in &ns {
            prop_assert!(mat::max_abs(&(&a * v)) <= 1e-10);
        }
    }

    #[test]
    fn images_contain_their_own_columns(a in low_rank(5), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = tracelab::cats::gen::gaussian_mat(&mut rng, a.ncols(), 2);
        prop_assert!(mat::image_contains(&a, &(&a * x), &tol()));
        let s = mat::solve_consistent(&a, &(&a * mat::eye(a.ncols())), &tol());
        prop_assert!(s.is_ok());
    }

    #[test]
    fn pinv_satisfies_penrose_identities(a in low_rank(5)) {
        let p = mat::pinv(&a, &tol());
        prop_assert!(mat::max_abs_diff(&(&a * &p * &a), &a) <= 1e-9);
        prop_assert!(mat::max_abs_diff(&(&p * &a * &p), &p) <= 1e-9 * mat::max_abs(&p).max(1.0).powi(2));
        let ap = &a * &p;
        prop_assert!(mat::max_abs_diff(&ap, &ap.adjoint()) <= 1e-9);
    }

    #[test]
    fn factor_permutations_compose(
        (dims, p, q) in (1..=4usize).prop_flat_map(|n| {
            (prop::collection::vec(1..=3usize, n), permutation(n), permutation(n))
        })
    ) {
        let dims_p: Vec<usize> = p.iter().map(|&k| dims[k]).collect();
        let lhs = mat::factor_permutation(&dims_p, &q) * mat::factor_permutation(&dims, &p);
        let rhs = mat::factor_permutation(&dims, &mat::compose_perm(&p, &q));
        prop_assert_eq!(lhs, rhs);
        let inv = mat::factor_permutation(&dims_p, &mat::invert_perm(&p));
        prop_assert_eq!(inv * mat::factor_permutation(&dims, &p), mat::eye(dims.iter().product()));
    }

    #[test]
    fn kron_mixed_product(a in any_cmat(3), b in any_cmat(3), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let cc = tracelab::cats::gen::gaussian_mat(&mut rng, a.ncols(), 2);
        let d = tracelab::cats::gen::gaussian_mat(&mut rng, b.ncols(), 3);
        let lhs = mat::kron(&a, &b) * mat::kron(&cc, &d);
        let rhs = mat::kron(&(&a * &cc), &(&b * &d));
        prop_assert!(mat::max_abs_diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn partial_traces_agree(
        (dx, dy, du, f) in (1..=3usize, 1..=3usize, 1..=3usize)
            .prop_flat_map(|(x, y, u)| (Just(x), Just(y), Just(u), cmat(y * u, x * u)))
    ) {
        let op = mat::op_partial_trace(&f, &[dx, du], &[dy, du], 1).unwrap();
        prop_assert!(mat::max_abs_diff(&op, &mat::partial_trace_tail(&f, du)) <= 1e-12);
    }

    #[test]
    fn block_decompose_inverts_block_compose(a in any_cmat(5), r in 0..=5usize, k in 0..=5usize) {
        let (r, k) = (r.min(a.nrows()), k.min(a.ncols()));
        let (f11, f12, f21, f22) = mat::block_decompose(&a, r, k);
        prop_assert_eq!(mat::block_compose(&f11, &f12, &f21, &f22), a);
    }
}
