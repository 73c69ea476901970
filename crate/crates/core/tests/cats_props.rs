use proptest::prelude::*;
use rand::SeedableRng;
use tracelab::cats::axioms::{check_axiom, sample_axiom, AxiomId};
use tracelab::cats::gen::{GenConfig, SampleRng, Sampler};
use tracelab::cats::{
    CategoryId, CpmOplus, CpmsTensor, FhilbTensor, InducedOplus, QOplusTotal, QsTensorSub,
    SrelTensor, TracedCategory, VectOplus,
};
use tracelab::mat::Tol;

macro_rules! dispatch {
    ($id:expr, $f:ident($($arg:expr),*)) => {
        match $id {
            CategoryId::VECT_OPLUS_INV => $f(&VectOplus::INV, $($arg),*),
            CategoryId::VECT_OPLUS_KERIM => $f(&VectOplus::KERIM, $($arg),*),
            CategoryId::SREL_TENSOR => $f(&SrelTensor, $($arg),*),
            CategoryId::CPMS_TENSOR => $f(&CpmsTensor, $($arg),*),
            CategoryId::CPM_OPLUS => $f(&CpmOplus, $($arg),*),
            CategoryId::Q_OPLUS_TOTAL => $f(&QOplusTotal::default(), $($arg),*),
            CategoryId::Q_OPLUS_INV => $f(&InducedOplus::Q_INV, $($arg),*),
            CategoryId::Q_OPLUS_KERIM => $f(&InducedOplus::Q_KERIM, $($arg),*),
            CategoryId::QS_TENSOR_SUB => $f(&QsTensorSub, $($arg),*),
            CategoryId::FHILB_TENSOR => $f(&FhilbTensor, $($arg),*),
        }
    };
}

fn category() -> impl Strategy<Value = CategoryId> {
    prop::sample::select(CategoryId::ALL.to_vec())
}

fn axiom() -> impl Strategy<Value = AxiomId> {
    prop::sample::select(AxiomId::ALL.to_vec())
}

/// Runs one sampled instance; `Err` carries a description of a violation.
fn axiom_holds<C: Sampler>(cat: &C, axiom: AxiomId, seed: u64, index: u64) -> Result<(), String> {
    let tol = Tol::default();
    let g = GenConfig::for_category(cat.id(), None);
    let mut rng = SampleRng::seed_from_u64(seed);
    let Some(s) = sample_axiom(cat, axiom, &mut rng, &g, &tol, index) else {
        return Ok(());
    };
    let r = check_axiom(cat, &s, &tol);
    let bound = if axiom == AxiomId::Yanking {
        1e-12
    } else {
        1e-8
    };
    if r.pass && r.deviation.is_none_or(|d| d < bound) {
        Ok(())
    } else {
        Err(format!("{} {}: {r:?}", cat.name(), axiom.name()))
    }
}

/// Defined traces have the stated boundary and stay finite.
fn traces_are_typed<C: Sampler>(cat: &C, seed: u64) -> Result<(), String> {
    let tol = Tol::default();
    let g = GenConfig::for_category(cat.id(), None);
    let mut rng = SampleRng::seed_from_u64(seed);
    let (x, y, u) = (
        cat.random_obj(&mut rng, &g),
        cat.random_obj(&mut rng, &g),
        cat.random_obj(&mut rng, &g),
    );
    for raw in [false, true] {
        let f = cat.trace_candidate(&mut rng, &x, &y, &u, raw);
        let out = cat.trace(&f, &x, &y, &u, &tol).map_err(|e| e.to_string())?;
        if let Some(t) = out.defined() {
            if cat.dom(&t) != x || cat.cod(&t) != y || !tracelab::mat::is_finite(&cat.to_matrix(&t))
            {
                return Err(format!(
                    "{}: trace of {x:?} -> {y:?} over {u:?} is ill-typed",
                    cat.name()
                ));
            }
        }
    }
    Ok(())
}

fn identity_and_symmetry_laws<C: Sampler>(cat: &C, seed: u64) -> Result<(), String> {
    let g = GenConfig::for_category(cat.id(), None);
    let mut rng = SampleRng::seed_from_u64(seed);
    let (x, y) = (cat.random_obj(&mut rng, &g), cat.random_obj(&mut rng, &g));
    let f = cat.random_mor(&mut rng, &x, &y);
    let left = cat
        .compose(&cat.identity(&y), &f)
        .map_err(|e| e.to_string())?;
    let right = cat
        .compose(&f, &cat.identity(&x))
        .map_err(|e| e.to_string())?;
    let twice = cat
        .compose(&cat.symmetry(&y, &x), &cat.symmetry(&x, &y))
        .map_err(|e| e.to_string())?;
    let id_xy = cat.identity(&tracelab::cats::concat(&x, &y));
    let worst = cat
        .distance(&left, &f)
        .max(cat.distance(&right, &f))
        .max(cat.distance(&twice, &id_xy));
    if worst <= 1e-12 {
        Ok(())
    } else {
        Err(format!(
            "{}: unit or symmetry law off by {worst:e}",
            cat.name()
        ))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn axioms_hold_on_arbitrary_seeds(id in category(), ax in axiom(), seed in any::<u64>(), index in 0..4u64) {
        let r = dispatch!(id, axiom_holds(ax, seed, index));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn defined_traces_are_well_typed(id in category(), seed in any::<u64>()) {
        let r = dispatch!(id, traces_are_typed(seed));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn identities_and_symmetries(id in category(), seed in any::<u64>()) {
        let r = dispatch!(id, identity_and_symmetry_laws(seed));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn kerim_extends_inv(seed in any::<u64>()) {
        let tol = Tol::default();
        let cat = VectOplus::KERIM;
        let g = GenConfig::for_category(CategoryId::VECT_OPLUS_KERIM, None);
        let mut rng = SampleRng::seed_from_u64(seed);
        let (x, y, u) = (cat.random_obj(&mut rng, &g), cat.random_obj(&mut rng, &g), cat.random_obj(&mut rng, &g));
        let f = cat.trace_candidate(&mut rng, &x, &y, &u, false);
        if let Some(a) = VectOplus::INV.trace(&f, &x, &y, &u, &tol).unwrap().defined() {
            let b = cat.trace(&f, &x, &y, &u, &tol).unwrap().defined();
            prop_assert!(b.is_some_and(|b| cat.distance(&a, &b) <= tol.eq_tol));
        }
    }

    #[test]
    fn native_cpm_trace_is_within_the_induced_one(seed in any::<u64>()) {
        let tol = Tol::default();
        let g = GenConfig::for_category(CategoryId::CPM_OPLUS, None);
        let mut rng = SampleRng::seed_from_u64(seed);
        let (x, y, u) = (CpmOplus.random_obj(&mut rng, &g), CpmOplus.random_obj(&mut rng, &g), CpmOplus.random_obj(&mut rng, &g));
        let f = CpmOplus.trace_candidate(&mut rng, &x, &y, &u, false);
        if let Some(a) = CpmOplus.trace(&f, &x, &y, &u, &tol).unwrap().defined() {
            let b = InducedOplus::CPM_KERIM.trace(&f, &x, &y, &u, &tol).unwrap().defined();
            prop_assert!(b.is_some_and(|b| CpmOplus.distance(&a, &b) <= tol.eq_tol));
        }
    }
}
