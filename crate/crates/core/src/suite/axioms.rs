//! The partial-trace axiom suite plus the per-category worked checks.

use super::{checks_section, float, matrix_value, max_dev, sample_rng, CheckRecord, SuiteConfig};
use crate::cats::axioms::{check_axiom, sample_axiom, AxiomCheck, AxiomId, AxiomSample};
use crate::cats::cpm::{from_kraus_grid, q_total_trace, CpmOps};
use crate::cats::cpms::KrausMorphism;
use crate::cats::gen::{kraus_list, random_unitary, GenConfig, SampleRng, Sampler};
use crate::cats::srel::{distributor, distributor_inverse};
use crate::cats::{
    CategoryId, CpmOplus, CpmsTensor, FhilbTensor, InducedOplus, QOplusTotal, QsTensorSub, Reason,
    SrelTensor, TracedCategory, VectOplus,
};
use crate::mat::{self, c, Mat};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::time::Instant;

/// Yanking involves only permutations, so it must hold to rounding.
const YANKING_TOL: f64 = 1e-12;
/// Largest skipped fraction before an entry fails.
const MAX_SKIP_RATE: f64 = 0.5;
/// Margins (decades from the rank cut) below this count as near the decision threshold.
const NEAR_MARGIN: f64 = 1.0;

macro_rules! with_category {
    ($id:expr, $cat:ident => $body:expr) => {
        match $id {
            CategoryId::VECT_OPLUS_INV => {
                let $cat = VectOplus::INV;
                $body
            }
            CategoryId::VECT_OPLUS_KERIM => {
                let $cat = VectOplus::KERIM;
                $body
            }
            CategoryId::SREL_TENSOR => {
                let $cat = SrelTensor;
                $body
            }
            CategoryId::CPMS_TENSOR => {
                let $cat = CpmsTensor;
                $body
            }
            CategoryId::CPM_OPLUS => {
                let $cat = CpmOplus;
                $body
            }
            CategoryId::Q_OPLUS_TOTAL => {
                let $cat = QOplusTotal::default();
                $body
            }
            CategoryId::Q_OPLUS_INV => {
                let $cat = InducedOplus::Q_INV;
                $body
            }
            CategoryId::Q_OPLUS_KERIM => {
                let $cat = InducedOplus::Q_KERIM;
                $body
            }
            CategoryId::QS_TENSOR_SUB => {
                let $cat = QsTensorSub;
                $body
            }
            CategoryId::FHILB_TENSOR => {
                let $cat = FhilbTensor;
                $body
            }
        }
    };
}

fn witness<C: TracedCategory>(
    cat: &C,
    s: &AxiomSample<C::Mor>,
    index: usize,
    check: &AxiomCheck,
) -> Value {
    let objects: serde_json::Map<String, Value> = s
        .objects()
        .into_iter()
        .map(|(k, o)| (k.to_string(), json!(o)))
        .collect();
    let morphisms: serde_json::Map<String, Value> = s
        .morphisms()
        .into_iter()
        .map(|(k, m)| (k.to_string(), matrix_value(&cat.to_matrix(m))))
        .collect();
    json!({
        "index": index,
        "objects": objects,
        "morphisms": morphisms,
        "lhs_defined": check.lhs_defined,
        "rhs_defined": check.rhs_defined,
        "deviation": check.deviation.map(float),
        "error": check.error,
    })
}

/// Runs `cfg.samples` instances of one axiom on one category.
pub fn axiom_entry<C: Sampler>(cat: &C, axiom: AxiomId, cfg: &SuiteConfig) -> Value {
    let started = Instant::now();
    let g = GenConfig::for_category(cat.id(), cfg.dim_max);
    let tol = &cfg.tol;
    let results: Vec<Option<(AxiomSample<C::Mor>, AxiomCheck)>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, cat.id().name(), axiom.name(), i);
            sample_axiom(cat, axiom, &mut rng, &g, tol, i).map(|s| {
                let r = check_axiom(cat, &s, tol);
                (s, r)
            })
        })
        .collect();
    let limit = if axiom == AxiomId::Yanking {
        YANKING_TOL
    } else {
        tol.eq_tol
    };
    let ok = |r: &AxiomCheck| r.pass && r.error.is_none() && r.deviation.is_none_or(|d| d <= limit);
    let mut counts = [0usize; 5];
    let mut failures = 0;
    let mut worst: Option<(usize, f64)> = None;
    let mut first_fail = None;
    let mut margins = Vec::new();
    for (i, (_, r)) in results
        .iter()
        .enumerate()
        .filter_map(|(i, x)| x.as_ref().map(|x| (i, x)))
    {
        let slot = if !r.hypothesis {
            4
        } else {
            match (r.lhs_defined, r.rhs_defined) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            }
        };
        counts[slot] += 1;
        if !ok(r) {
            failures += 1;
            first_fail.get_or_insert(i);
        }
        if let Some(d) = r.deviation {
            if worst.is_none_or(|(_, w)| d > w) {
                worst = Some((i, d));
            }
        }
        margins.extend(r.margin);
    }
    let attempted = results.len();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    let worst_index = first_fail.or(worst.map(|w| w.0));
    let worst_witness = worst_index
        .and_then(|i| results[i].as_ref().map(|(s, r)| witness(cat, s, i, r)))
        .unwrap_or(Value::Null);
    let skip_ok = (skipped as f64) <= MAX_SKIP_RATE * attempted as f64;
    json!({
        "category": cat.id().name(),
        "axiom": axiom.name(),
        "pass": failures == 0 && skip_ok,
        "attempted": attempted,
        "skipped": skipped,
        "failures": failures,
        "max_deviation": worst.map(|w| float(w.1)),
        "definedness": {
            "both": counts[0],
            "lhs_only": counts[1],
            "rhs_only": counts[2],
            "neither": counts[3],
            "vacuous": counts[4],
        },
        "margin": {
            "samples": margins.len(),
            "min": max_dev(margins.iter().map(|m| -m)).map(|m| float(-m)),
            "near_threshold": margins.iter().filter(|&&m| m < NEAR_MARGIN).count(),
        },
        "worst_witness": worst_witness,
        "wall_time_s": float(started.elapsed().as_secs_f64()),
    })
}

pub fn axioms_suite(cfg: &SuiteConfig) -> Value {
    let started = Instant::now();
    let mut entries = Vec::new();
    for &id in &cfg.categories {
        for &axiom in &cfg.axioms {
            entries.push(with_category!(id, cat => axiom_entry(&cat, axiom, cfg)));
        }
    }
    let checks = extra_checks(cfg);
    let pass =
        entries.iter().all(|e| e["pass"] == Value::Bool(true)) && checks.iter().all(|c| c.pass);
    let mut v = checks_section(&checks, started);
    v["entries"] = Value::Array(entries);
    v["pass"] = Value::Bool(pass);
    v
}

/// Worked checks attached to the selected categories.
fn extra_checks(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    type Check = fn(&SuiteConfig) -> CheckRecord;
    let table: [(CategoryId, Check); 8] = [
        (CategoryId::CPM_OPLUS, counterexample),
        (CategoryId::CPMS_TENSOR, cpms_remix),
        (CategoryId::Q_OPLUS_TOTAL, q_series_closed_form),
        (CategoryId::Q_OPLUS_TOTAL, q_scalar_example),
        (CategoryId::Q_OPLUS_TOTAL, q_total_extends_induced),
        (CategoryId::SREL_TENSOR, srel_distributivity),
        (CategoryId::VECT_OPLUS_KERIM, kerim_extends_inv),
        (CategoryId::VECT_OPLUS_KERIM, kerim_kernel_invariance),
    ];
    let selected: Vec<Check> = table
        .iter()
        .filter(|(id, _)| cfg.categories.contains(id))
        .map(|&(_, f)| f)
        .collect();
    selected.par_iter().map(|f| f(cfg)).collect()
}

/// `diag(I, 2I)` on `U ⊕ U` with `dim U = 2`.
pub(crate) fn diag_i_2i() -> crate::cats::BlockMorphism {
    let z = vec![];
    let two = mat::eye(2) * c(2f64.sqrt(), 0.0);
    from_kraus_grid(
        &[2, 2],
        &[2, 2],
        &[vec![vec![mat::eye(2)], z.clone()], vec![z, vec![two]]],
    )
}

fn counterexample(cfg: &SuiteConfig) -> CheckRecord {
    let f = diag_i_2i();
    let tol = &cfg.tol;
    let native = CpmOplus.trace(&f, &[2], &[2], &[2], tol);
    let e = CpmOplus::feedback_inverse(&f, &[2], &[2], &[2], tol)
        .ok()
        .flatten()
        .map(|(_, e)| e);
    let induced = InducedOplus::CPM_KERIM
        .trace(&f, &[2], &[2], &[2], tol)
        .ok()
        .and_then(|t| t.defined());
    let dev = induced
        .as_ref()
        .map(|t| mat::max_abs_diff(&t.data, &mat::eye(4)));
    let rejected = matches!(&native, Ok(o) if o.reason() == Some(Reason::InverseNotCP));
    let pass =
        rejected && e.is_some_and(|e| e <= -1.0 + 1e-9) && dev.is_some_and(|d| d <= tol.eq_tol);
    CheckRecord::new(
        "cpm_counterexample",
        pass,
        1,
        dev,
        json!({
            "native_reason": native.ok().and_then(|o| o.reason()).map(|r| format!("{r:?}")),
            "inverse_min_choi_eig": e.map(float),
            "induced_value": induced.map(|t| matrix_value(&t.data)),
        }),
    )
}

/// `K ↦ K S^{+1/2}` with `S = Σ K†K` and `+` the pseudo-inverse, making the list trace
/// preserving on the support of `S`.
fn normalized_channel(ks: Vec<Mat>) -> Vec<Mat> {
    let s = ks
        .iter()
        .fold(mat::zeros(ks[0].ncols(), ks[0].ncols()), |acc, k| {
            acc + k.adjoint() * k
        });
    let (vals, vecs) = mat::eigh(&s);
    let cut = 1e-12 * vals.last().copied().unwrap_or(0.0).max(0.0);
    let inv_sqrt = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter()
            .map(|&l| c(if l > cut { 1.0 / l.sqrt() } else { 0.0 }, 0.0)),
    ));
    let w = &vecs * inv_sqrt * vecs.adjoint();
    ks.into_iter().map(|k| k * &w).collect()
}

fn cpms_remix(cfg: &SuiteConfig) -> CheckRecord {
    const CASES: u64 = 100;
    let devs: Vec<f64> = (0..CASES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "CPMS_TENSOR", "remix", i);
            let (x, y, u) = (
                [rng.gen_range(1..=3)],
                [rng.gen_range(1..=3)],
                [rng.gen_range(1..=3)],
            );
            let (din, dout) = (x[0] * u[0], y[0] * u[0]);
            let ks = normalized_channel(kraus_list(&mut rng, din, dout, 2, 1.0));
            let f = KrausMorphism::new(vec![x[0], u[0]], vec![y[0], u[0]], ks);
            let g = f.remixed(&random_unitary(&mut rng, 3));
            let tf = CpmsTensor
                .trace(&f, &x, &y, &u, &cfg.tol)
                .ok()
                .and_then(|t| t.defined());
            let tg = CpmsTensor
                .trace(&g, &x, &y, &u, &cfg.tol)
                .ok()
                .and_then(|t| t.defined());
            match (tf, tg) {
                (Some(a), Some(b)) => mat::max_abs_diff(&a.transfer(), &b.transfer()),
                _ => f64::INFINITY,
            }
        })
        .collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        "cpms_remix_invariance",
        m.is_some_and(|d| d <= 1e-8),
        devs.len(),
        m,
        json!({"kraus": [2, 3]}),
    )
}

fn q_series_closed_form(cfg: &SuiteConfig) -> CheckRecord {
    const CASES: u64 = 100;
    let cat = QOplusTotal::default();
    let g = GenConfig::for_category(CategoryId::Q_OPLUS_TOTAL, cfg.dim_max);
    let res: Vec<Option<(f64, f64)>> = (0..CASES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "Q_OPLUS_TOTAL", "series", i);
            for _ in 0..1000 {
                let (x, y, u) = (
                    cat.random_obj(&mut rng, &g),
                    cat.random_obj(&mut rng, &g),
                    cat.random_obj(&mut rng, &g),
                );
                let f = cat.trace_candidate(&mut rng, &x, &y, &u, false);
                let (f11, f12, f21, f22) = CpmOps::blocks(&f, &x, &y);
                // spectral radius ≤ spectral norm < 0.9
                let r = mat::spectral_norm(&f22);
                if r >= 0.9 {
                    continue;
                }
                let series = q_total_trace(&f, &x, &y, &u, &cfg.tol, cat.max_iter).ok()?;
                let inv = mat::inverse(&(mat::eye(f22.nrows()) - &f22), &cfg.tol).ok()?;
                let closed = f11 + f12 * inv * f21;
                return Some((mat::max_abs_diff(&series.data, &closed), r));
            }
            None
        })
        .collect();
    let found: Vec<(f64, f64)> = res.iter().flatten().copied().collect();
    let m = max_dev(found.iter().map(|p| p.0));
    CheckRecord::new(
        "q_series_vs_closed_form",
        found.len() as u64 == CASES && m.is_some_and(|d| d <= 1e-6),
        found.len(),
        m,
        json!({ "max_f22_norm": max_dev(found.iter().map(|p| p.1)).map(float) }),
    )
}

fn q_scalar_example(cfg: &SuiteConfig) -> CheckRecord {
    let f = crate::cats::BlockMorphism::new(
        vec![1, 1],
        vec![1, 1],
        mat::from_real(2, 2, &[0.25, 0.25, 0.25, 0.5]),
    );
    let t = QOplusTotal::default()
        .trace(&f, &[1], &[1], &[1], &cfg.tol)
        .ok()
        .and_then(|t| t.defined());
    let v = t.map(|t| t.data[(0, 0)].re);
    let dev = v.map(|v| (v - 0.375).abs());
    CheckRecord::new(
        "q_scalar_series",
        dev.is_some_and(|d| d <= 1e-9),
        1,
        dev,
        json!({ "value": v.map(float) }),
    )
}

fn q_total_extends_induced(cfg: &SuiteConfig) -> CheckRecord {
    const CASES: u64 = 100;
    let total = QOplusTotal::default();
    let sub = InducedOplus::Q_INV;
    let g = GenConfig::for_category(CategoryId::Q_OPLUS_INV, cfg.dim_max);
    let res: Vec<Option<f64>> = (0..CASES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "Q_OPLUS_TOTAL", "extends_induced", i);
            let (x, y, u) = (
                sub.random_obj(&mut rng, &g),
                sub.random_obj(&mut rng, &g),
                sub.random_obj(&mut rng, &g),
            );
            let f = sub.trace_candidate(&mut rng, &x, &y, &u, false);
            let a = sub.trace(&f, &x, &y, &u, &cfg.tol).ok()?.defined()?;
            Some(
                match total
                    .trace(&f, &x, &y, &u, &cfg.tol)
                    .ok()
                    .and_then(|t| t.defined())
                {
                    Some(b) => mat::max_abs_diff(&a.data, &b.data),
                    None => f64::INFINITY,
                },
            )
        })
        .collect();
    let devs: Vec<f64> = res.into_iter().flatten().collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        "q_total_extends_induced",
        m.is_some_and(|d| d <= 1e-6),
        devs.len(),
        m,
        json!({}),
    )
}

fn srel_distributivity(_cfg: &SuiteConfig) -> CheckRecord {
    let mut cases = 0;
    let mut bad = Vec::new();
    for a in 0..=4 {
        for b in 0..=4 {
            for cc in 0..=4 {
                let d = distributor(a, b, cc);
                let di = distributor_inverse(a, b, cc);
                let one = SrelTensor.compose(&d, &di).expect("typed");
                let other = SrelTensor.compose(&di, &d).expect("typed");
                let (n, m) = (one.data.nrows(), other.data.nrows());
                let exact = one.data == nalgebra::DMatrix::<f64>::identity(n, n)
                    && other.data == nalgebra::DMatrix::<f64>::identity(m, m);
                cases += 1;
                if !exact {
                    bad.push(json!([a, b, cc]));
                }
            }
        }
    }
    CheckRecord::new(
        "srel_distributivity_iso",
        bad.is_empty(),
        cases,
        Some(0.0).filter(|_| bad.is_empty()),
        json!({ "failures": bad }),
    )
}

fn vect_candidate(
    rng: &mut SampleRng,
    g: &GenConfig,
) -> (
    Vec<usize>,
    Vec<usize>,
    Vec<usize>,
    crate::cats::BlockMorphism,
) {
    let cat = VectOplus::KERIM;
    let (x, y, u) = (
        cat.random_obj(rng, g),
        cat.random_obj(rng, g),
        cat.random_obj(rng, g),
    );
    let f = cat.trace_candidate(rng, &x, &y, &u, false);
    (x, y, u, f)
}

fn kerim_extends_inv(cfg: &SuiteConfig) -> CheckRecord {
    const CASES: u64 = 200;
    let g = GenConfig::for_category(CategoryId::VECT_OPLUS_KERIM, cfg.dim_max);
    let res: Vec<(Option<f64>, bool)> = (0..CASES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "VECT_OPLUS_KERIM", "extends_inv", i);
            let (x, y, u, f) = vect_candidate(&mut rng, &g);
            let inv = VectOplus::INV
                .trace(&f, &x, &y, &u, &cfg.tol)
                .ok()
                .and_then(|t| t.defined());
            let ker = VectOplus::KERIM
                .trace(&f, &x, &y, &u, &cfg.tol)
                .ok()
                .and_then(|t| t.defined());
            match (inv, ker) {
                (Some(a), Some(b)) => (Some(VectOplus::KERIM.distance(&a, &b)), false),
                (Some(_), None) => (Some(f64::INFINITY), false),
                (None, k) => (None, k.is_some()),
            }
        })
        .collect();
    let m = max_dev(res.iter().filter_map(|r| r.0));
    let both = res.iter().filter(|r| r.0.is_some()).count();
    let kerim_only = res.iter().filter(|r| r.1).count();
    CheckRecord::new(
        "kerim_extends_inv",
        m.is_none_or(|d| d <= cfg.tol.eq_tol),
        both,
        m,
        json!({ "kerim_only": kerim_only }),
    )
}

fn kerim_kernel_invariance(cfg: &SuiteConfig) -> CheckRecord {
    const CASES: u64 = 100;
    let g = GenConfig::for_category(CategoryId::VECT_OPLUS_KERIM, cfg.dim_max);
    let res: Vec<Option<f64>> = (0..CASES)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, "VECT_OPLUS_KERIM", "kernel_shift", i);
            let (x, y, u) = {
                let cat = VectOplus::KERIM;
                (
                    cat.random_obj(&mut rng, &g),
                    cat.random_obj(&mut rng, &g),
                    cat.random_obj(&mut rng, &g),
                )
            };
            let (f, _) = VectOplus::singular_candidate(&mut rng, &x, &y, &u);
            let t = VectOplus::KERIM
                .trace(&f, &x, &y, &u, &cfg.tol)
                .ok()?
                .defined()?;
            let scale = mat::max_abs(&f.data).max(mat::max_abs(&t.data)).max(1.0);
            VectOplus::kerim_solution_shift(&f, &x, &y, &cfg.tol, &mut rng).map(|d| d / scale)
        })
        .collect();
    let devs: Vec<f64> = res.into_iter().flatten().collect();
    let m = max_dev(devs.iter().copied());
    CheckRecord::new(
        "kerim_kernel_invariance",
        !devs.is_empty() && m.is_some_and(|d| d <= cfg.tol.eq_tol),
        devs.len(),
        m,
        json!({ "relative": true }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            samples: 6,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn extras_pass() {
        for c in extra_checks(&quick()) {
            assert!(c.pass, "{:?}", c);
        }
    }

    #[test]
    fn small_suite_passes_and_is_thread_independent() {
        let mut cfg = quick();
        cfg.categories = vec![CategoryId::SREL_TENSOR, CategoryId::VECT_OPLUS_INV];
        let a = super::super::run_suite(super::super::SuiteKind::Axioms, &cfg);
        cfg.jobs = 4;
        let b = super::super::run_suite(super::super::SuiteKind::Axioms, &cfg);
        assert_eq!(
            super::super::strip_timing(&a),
            super::super::strip_timing(&b)
        );
        assert_eq!(a["pass"], Value::Bool(true), "{a:#}");
    }
}
