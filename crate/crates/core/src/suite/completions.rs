//! Checks on the coproduct completion and the functors Φ and Ψ.

use super::{checks_section, max_dev, sample_rng, CheckRecord, SuiteConfig};
use crate::cats::cpm::{sq_total, trace_preservation_defect};
use crate::cats::gen::SampleRng;
use crate::cats::{CpmOplus, TracedCategory};
use crate::completions::{
    all_families, all_functions, all_seqs, kernel_bijection_check, pair_maps, phi_map, phi_obj,
    psi_map, psi_monoidal_defect, psi_obj, QppMorphism, QppObject, QPP,
};
use crate::mat;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::time::Instant;

/// Largest `|A|`, `|B|` in the Φ enumeration.
const PHI_MAX: usize = 4;
/// Largest `b` in the kernel check.
const KERNEL_B_MAX: usize = 2;
const NATURALITY_SQUARES: u64 = 50;
const FUNCTORIALITY_PAIRS: u64 = 100;
const PSI_TOL: f64 = 1e-10;

/// Families with at most 3 members, each a sequence of length at most 2 over `{1, 2}`.
fn kernel_objects() -> Vec<QppObject> {
    all_families(&all_seqs(&[1, 2], 2), 3)
}

/// The exhaustive small objects for the Ψ checks.
fn small_objects() -> Vec<QppObject> {
    all_families(&all_seqs(&[1, 2], 1), 2)
}

fn phi_full_faithful(_cfg: &SuiteConfig) -> CheckRecord {
    let mut bad = Vec::new();
    let mut cases = 0;
    for a in 0..=PHI_MAX {
        for b in 0..=PHI_MAX {
            cases += 1;
            let homs = QPP.homs(&phi_obj(a), &phi_obj(b));
            let images: Vec<QppMorphism> =
                all_functions(a, b).iter().map(|h| phi_map(h, b)).collect();
            let mut phis: Vec<&Vec<usize>> = images.iter().map(|m| &m.phi).collect();
            phis.sort();
            phis.dedup();
            let injective = phis.len() == images.len();
            let full = images.len() == homs.len() && homs.iter().all(|h| images.contains(h));
            if homs.len() != b.pow(a as u32) || !injective || !full {
                bad.push(json!({"a": a, "b": b, "homs": homs.len()}));
            }
        }
    }
    CheckRecord::new(
        "phi_full_faithful",
        bad.is_empty(),
        cases,
        None,
        json!({ "max_size": PHI_MAX, "failures": bad }),
    )
}

fn kernel_bijection(_cfg: &SuiteConfig) -> CheckRecord {
    let objs = kernel_objects();
    let n = objs.len();
    let bad: Vec<Value> = (0..=KERNEL_B_MAX)
        .flat_map(|b| (0..n).map(move |i| (b, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(b, i)| {
            let objs = &objs;
            (0..n).filter_map(move |j| {
                let k = kernel_bijection_check(b, &objs[i], &objs[j]);
                match k {
                    Ok(k) if k.bijective && k.left * k.right == k.product => None,
                    _ => Some(json!({"b": b, "c": objs[i].members, "c2": objs[j].members})),
                }
            })
        })
        .collect();
    let cases = (KERNEL_B_MAX + 1) * n * n;
    CheckRecord::new(
        "kernel_pairing_bijection",
        bad.is_empty(),
        cases,
        None,
        json!({ "objects": n, "failures": bad.into_iter().take(10).collect::<Vec<_>>() }),
    )
}

fn choose<'a, T>(rng: &mut SampleRng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("nonempty")
}

/// A random morphism out of `x` into one of `objs`.
fn random_out(rng: &mut SampleRng, objs: &[QppObject], x: &QppObject) -> QppMorphism {
    loop {
        let homs = QPP.homs(x, choose(rng, objs));
        if !homs.is_empty() {
            return choose(rng, &homs).clone();
        }
    }
}

fn kernel_naturality(cfg: &SuiteConfig) -> CheckRecord {
    let objs = kernel_objects();
    let bad = (0..NATURALITY_SQUARES)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(cfg.seed, "completions", "kernel_naturality", i);
            let pb = phi_obj(rng.gen_range(0..=KERNEL_B_MAX));
            let p = random_out(&mut rng, &objs, &pb);
            let q = random_out(&mut rng, &objs, &pb);
            let u = random_out(&mut rng, &objs, &p.cod);
            let v = random_out(&mut rng, &objs, &q.cod);
            let lhs = pair_maps(
                &QPP.compose(&u, &p).expect("typed"),
                &QPP.compose(&v, &q).expect("typed"),
            );
            let rhs = pair_maps(&p, &q).and_then(|pq| QPP.compose(&QPP.tensor(&u, &v), &pq));
            !matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
        })
        .count();
    CheckRecord::new(
        "kernel_pairing_naturality",
        bad == 0,
        NATURALITY_SQUARES as usize,
        None,
        json!({ "failures": bad }),
    )
}

fn psi_functoriality(cfg: &SuiteConfig) -> CheckRecord {
    let objs = kernel_objects();
    let devs: Vec<f64> = (0..FUNCTORIALITY_PAIRS)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "completions", "psi_functoriality", i);
            let x = choose(&mut rng, &objs).clone();
            let f = random_out(&mut rng, &objs, &x);
            let g = random_out(&mut rng, &objs, &f.cod);
            let lhs = psi_map(&QPP.compose(&g, &f).expect("typed"));
            CpmOplus
                .compose(&psi_map(&g), &psi_map(&f))
                .map_or(f64::INFINITY, |rhs| CpmOplus.distance(&lhs, &rhs))
        })
        .collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        "psi_functorial",
        m.is_some_and(|d| d < PSI_TOL),
        devs.len(),
        m,
        json!({}),
    )
}

/// Every morphism between the small objects.
fn small_homs() -> Vec<QppMorphism> {
    let objs = small_objects();
    objs.iter()
        .flat_map(|x| objs.iter().flat_map(move |y| QPP.homs(x, y)))
        .collect()
}

fn psi_monoidal(_cfg: &SuiteConfig) -> CheckRecord {
    let objs = small_objects();
    let obj_ok = objs.iter().all(|x| {
        objs.iter().all(|y| {
            let px = psi_obj(x);
            let py = psi_obj(y);
            let prod: Vec<usize> = px
                .iter()
                .flat_map(|a| py.iter().map(move |b| a * b))
                .collect();
            psi_obj(&QPP.tensor_obj(x, y)) == prod
        })
    });
    let homs = small_homs();
    let devs: Vec<f64> = homs
        .par_iter()
        .flat_map_iter(|f| homs.iter().map(move |g| psi_monoidal_defect(f, g)))
        .collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        "psi_strong_monoidal",
        obj_ok && m.is_some_and(|d| d < PSI_TOL),
        devs.len(),
        m,
        json!({ "objects": objs.len(), "morphisms": homs.len(), "objects_match": obj_ok }),
    )
}

fn psi_trace_preserving(_cfg: &SuiteConfig) -> CheckRecord {
    let objs = kernel_objects();
    // every morphism out of each small object into the larger family set
    let devs: Vec<f64> = small_objects()
        .par_iter()
        .flat_map_iter(|x| {
            let objs = &objs;
            objs.iter()
                .flat_map(move |y| QPP.homs(x, y))
                .map(|f| trace_preservation_defect(&psi_map(&f)))
        })
        .collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        "psi_trace_preserving",
        m.is_some_and(|d| d < PSI_TOL),
        devs.len(),
        m,
        json!({}),
    )
}

fn psi_coproducts(_cfg: &SuiteConfig) -> CheckRecord {
    let objs = small_objects();
    let mut cases = 0;
    let mut bad = 0;
    for x in &objs {
        for y in &objs {
            cases += 1;
            let (s, i1, i2) = QPP.coproduct(x, y);
            let objects = psi_obj(&s) == [psi_obj(x), psi_obj(y)].concat();
            let (nx, ny) = (sq_total(&psi_obj(x)), sq_total(&psi_obj(y)));
            let id = mat::eye(nx + ny);
            let injections = psi_map(&i1).data == mat::block(&id, 0, 0, nx + ny, nx)
                && psi_map(&i2).data == mat::block(&id, 0, nx, nx + ny, ny);
            if !(objects && injections) {
                bad += 1;
            }
        }
    }
    CheckRecord::new(
        "psi_preserves_coproducts",
        bad == 0,
        cases,
        None,
        json!({ "failures": bad }),
    )
}

pub fn completions_suite(cfg: &SuiteConfig) -> Value {
    let started = Instant::now();
    type Check = fn(&SuiteConfig) -> CheckRecord;
    let checks: [Check; 7] = [
        phi_full_faithful,
        kernel_bijection,
        kernel_naturality,
        psi_functoriality,
        psi_monoidal,
        psi_trace_preserving,
        psi_coproducts,
    ];
    let records: Vec<CheckRecord> = checks.par_iter().map(|f| f(cfg)).collect();
    checks_section(&records, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completions_suite_passes() {
        let v = completions_suite(&SuiteConfig::default());
        assert_eq!(v["pass"], Value::Bool(true), "{v:#}");
    }
}
