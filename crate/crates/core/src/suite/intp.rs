//! Checks on the partial Int construction.

use super::{checks_section, max_dev, sample_rng, CheckRecord, SuiteConfig};
use crate::cats::gen::{GenConfig, SampleRng, Sampler};
use crate::cats::{concat, CategoryId, CpmsTensor, TracedCategory, VectOplus};
use crate::intp::{
    arrow_distance, check_n_trace_preservation, compose2, identity, int_symmetry, int_tensor,
    int_unit_counit, iterated_binary, path_compose, IntArrow, IntObject, PathExpr,
};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::time::Instant;

const SINGLETONS: u64 = 50;
const PATHS: u64 = 100;
const SNAKES: u64 = 20;
const N_TRACES: u64 = 100;

fn atoms(rng: &mut SampleRng, min_len: usize) -> Vec<usize> {
    let n = rng.gen_range(min_len..=2);
    (0..n).map(|_| rng.gen_range(1..=2)).collect()
}

/// A random Int object. `max_dim` bounds the product of all atom dimensions, which keeps
/// tensor-based categories (where sizes multiply along paths) tractable.
fn int_obj(rng: &mut SampleRng, max_dim: Option<usize>) -> IntObject {
    loop {
        let o = IntObject::new(atoms(rng, 1), atoms(rng, 0));
        let dim: usize = o.plus.iter().chain(&o.minus).product();
        if max_dim.is_none_or(|m| dim <= m) {
            return o;
        }
    }
}

/// Largest total Int object dimension over CPMS_TENSOR.
const CPMS_MAX_DIM: usize = 2;

fn arrow<C: Sampler>(
    cat: &C,
    rng: &mut SampleRng,
    a: &IntObject,
    b: &IntObject,
) -> IntArrow<C::Mor> {
    let base = cat.random_mor(rng, &concat(&a.plus, &b.minus), &concat(&b.plus, &a.minus));
    IntArrow::new(cat, a.clone(), b.clone(), base).expect("typed arrow")
}

fn singletons(cfg: &SuiteConfig) -> CheckRecord {
    let cat = VectOplus::INV;
    let bad = (0..SINGLETONS)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(cfg.seed, "intp", "singleton", i);
            let (a, b) = (int_obj(&mut rng, None), int_obj(&mut rng, None));
            let f = arrow(&cat, &mut rng, &a, &b);
            let p = path_compose(&cat, &PathExpr::new(vec![f.clone()]), &cfg.tol)
                .ok()
                .and_then(|p| p.defined());
            !p.is_some_and(|p| p.base == f.base && p.dom == f.dom && p.cod == f.cod)
        })
        .count();
    CheckRecord::new(
        "singleton_paths_exact",
        bad == 0,
        SINGLETONS as usize,
        Some(0.0).filter(|_| bad == 0),
        json!({ "mismatches": bad }),
    )
}

/// Length-3 paths against iterated binary composition, where the binary composite is defined.
fn paths_vs_binary<C: Sampler>(
    cat: &C,
    cfg: &SuiteConfig,
    label: &str,
    max_dim: Option<usize>,
) -> CheckRecord {
    let res: Vec<Option<f64>> = (0..PATHS)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, cat.id().name(), "path3", i);
            let objs: Vec<IntObject> = (0..4).map(|_| int_obj(&mut rng, max_dim)).collect();
            let p: Vec<_> = (0..3)
                .map(|k| arrow(cat, &mut rng, &objs[k], &objs[k + 1]))
                .collect();
            let bin = iterated_binary(cat, &p, &cfg.tol).ok().flatten()?;
            Some(
                match path_compose(cat, &PathExpr::new(p), &cfg.tol)
                    .ok()
                    .and_then(|o| o.defined())
                {
                    Some(one) => arrow_distance(cat, &one, &bin),
                    None => f64::INFINITY,
                },
            )
        })
        .collect();
    let devs: Vec<f64> = res.iter().flatten().copied().collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        label,
        !devs.is_empty() && m.is_some_and(|d| d <= cfg.tol.eq_tol),
        devs.len(),
        m,
        json!({ "drawn": PATHS, "binary_undefined": PATHS as usize - devs.len() }),
    )
}

fn snakes<C: Sampler>(
    cat: &C,
    cfg: &SuiteConfig,
    label: &str,
    max_dim: Option<usize>,
) -> CheckRecord {
    let devs: Vec<f64> = (0..SNAKES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, cat.id().name(), "snake", i);
            let a = int_obj(&mut rng, max_dim);
            let b = int_obj(&mut rng, max_dim);
            let (eta, eps) = int_unit_counit(cat, &a);
            let ida = identity(cat, &a);
            let ad = identity(cat, &a.dual());
            let run = |l: IntArrow<C::Mor>, r: IntArrow<C::Mor>, want: &IntArrow<C::Mor>| {
                compose2(cat, &l, &r, &cfg.tol)
                    .ok()
                    .and_then(|o| o.defined())
                    .map_or(f64::INFINITY, |s| arrow_distance(cat, &s, want))
            };
            let one = run(
                int_tensor(cat, &eta, &ida).expect("typed"),
                int_tensor(cat, &ida, &eps).expect("typed"),
                &ida,
            );
            let two = run(
                int_tensor(cat, &ad, &eta).expect("typed"),
                int_tensor(cat, &eps, &ad).expect("typed"),
                &ad,
            );
            let sym = run(
                int_symmetry(cat, &a, &b),
                int_symmetry(cat, &b, &a),
                &identity(cat, &a.tensor(&b)),
            );
            one.max(two).max(sym)
        })
        .collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        label,
        m.is_some_and(|d| d <= cfg.tol.eq_tol),
        devs.len(),
        m,
        json!({ "laws": ["snake_left", "snake_right", "symmetry_involution"] }),
    )
}

fn n_trace(cfg: &SuiteConfig) -> CheckRecord {
    let cat = VectOplus::INV;
    let g = GenConfig::for_category(CategoryId::VECT_OPLUS_INV, cfg.dim_max);
    let res: Vec<Option<(bool, Option<f64>)>> = (0..N_TRACES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "intp", "n_trace", i);
            for _ in 0..1000 {
                let (x, y, u) = (
                    cat.random_obj(&mut rng, &g),
                    cat.random_obj(&mut rng, &g),
                    cat.random_obj(&mut rng, &g),
                );
                let f = cat.trace_candidate(&mut rng, &x, &y, &u, false);
                if !cat
                    .trace(&f, &x, &y, &u, &cfg.tol)
                    .is_ok_and(|t| t.is_defined())
                {
                    continue;
                }
                let r = check_n_trace_preservation(&cat, &f, &x, &y, &u, &cfg.tol).ok()?;
                return Some((r.pass(&cfg.tol), r.deviation));
            }
            None
        })
        .collect();
    let found: Vec<(bool, Option<f64>)> = res.into_iter().flatten().collect();
    let m = max_dev(found.iter().map(|r| r.1.unwrap_or(f64::INFINITY)));
    CheckRecord::new(
        "n_preserves_trace",
        found.len() as u64 == N_TRACES && found.iter().all(|r| r.0),
        found.len(),
        m,
        json!({ "category": "VECT_OPLUS_INV" }),
    )
}

pub fn intp_suite(cfg: &SuiteConfig) -> Value {
    let started = Instant::now();
    type Check = fn(&SuiteConfig) -> CheckRecord;
    let checks: [Check; 6] = [
        singletons,
        |c| paths_vs_binary(&CpmsTensor, c, "paths_vs_binary_cpms", Some(CPMS_MAX_DIM)),
        |c| paths_vs_binary(&VectOplus::INV, c, "paths_vs_binary_vect_inv", None),
        |c| snakes(&VectOplus::INV, c, "snakes_vect_inv", None),
        |c| snakes(&CpmsTensor, c, "snakes_cpms", Some(CPMS_MAX_DIM)),
        n_trace,
    ];
    let records: Vec<CheckRecord> = checks.par_iter().map(|f| f(cfg)).collect();
    checks_section(&records, started)
}
