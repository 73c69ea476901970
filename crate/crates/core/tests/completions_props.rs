use proptest::prelude::*;
use tracelab::cats::cpm::trace_preservation_defect;
use tracelab::cats::{CpmsTensor, TracedCategory};
use tracelab::completions::{
    hat_f, psi_map, psi_obj, Component, FamilyObject, Fwm, QppMorphism, QppObject, Seq, QPP,
};

fn seq(max_len: usize) -> impl Strategy<Value = Seq> {
    prop::collection::vec(1..=3usize, 0..=max_len)
}

fn family() -> impl Strategy<Value = QppObject> {
    prop::collection::vec(seq(2), 0..=3).prop_map(FamilyObject::new)
}

/// Keeps the entries of `v` selected by `mask`, in an order given by `keys`.
fn sub_multiset(v: &[usize], mask: &[bool], keys: &[u8]) -> Seq {
    let mut kept: Vec<(u8, usize)> = v
        .iter()
        .enumerate()
        .filter(|(i, _)| mask[*i])
        .map(|(i, &d)| (keys[i], d))
        .collect();
    kept.sort();
    kept.into_iter().map(|(_, d)| d).collect()
}

/// A sequence receiving at least one map from `v`.
fn below_seq(v: Seq) -> impl Strategy<Value = Seq> {
    let n = v.len();
    (
        prop::collection::vec(any::<bool>(), n),
        prop::collection::vec(any::<u8>(), n),
    )
        .prop_map(move |(mask, keys)| sub_multiset(&v, &mask, &keys))
}

/// Multiset intersection.
fn meet(a: &[usize], b: &[usize]) -> Seq {
    let mut rest = b.to_vec();
    a.iter()
        .filter(|d| match rest.iter().position(|e| e == *d) {
            Some(i) => {
                rest.remove(i);
                true
            }
            None => false,
        })
        .copied()
        .collect()
}

/// A family receiving at least one map from `x`: each member of `x` is sent to a member
/// built inside the intersection of everything sent there.
fn below_family(x: QppObject) -> impl Strategy<Value = QppObject> {
    let n = x.size();
    (
        1..=3usize,
        prop::collection::vec(any::<usize>(), n),
        prop::collection::vec(seq(2), 3),
        prop::collection::vec(any::<bool>(), 6),
    )
        .prop_map(move |(ny, assign, fillers, mask)| {
            let members = (0..ny)
                .map(|b| {
                    let sources: Vec<&Seq> = (0..n)
                        .filter(|&a| assign[a] % ny == b)
                        .map(|a| &x.members[a])
                        .collect();
                    match sources.split_first() {
                        None => fillers[b].clone(),
                        Some((first, others)) => {
                            let common =
                                others.iter().fold((*first).clone(), |acc, s| meet(&acc, s));
                            let keys: Vec<u8> = (0..common.len() as u8).collect();
                            sub_multiset(&common, &mask[..common.len()], &keys)
                        }
                    }
                })
                .collect();
            FamilyObject::new(members)
        })
}

/// Four objects with morphisms `o0 -> o1 -> o2 -> o3`.
fn chain() -> impl Strategy<Value = Vec<QppObject>> {
    family()
        .prop_flat_map(|a| (Just(a.clone()), below_family(a)))
        .prop_flat_map(|(a, b)| (Just(a), Just(b.clone()), below_family(b)))
        .prop_flat_map(|(a, b, c)| (Just(a), Just(b), Just(c.clone()), below_family(c)))
        .prop_map(|(a, b, c, d)| vec![a, b, c, d])
}

/// The `k`-th morphism `x -> y`, if there is one.
fn pick(x: &QppObject, y: &QppObject, k: usize) -> Option<QppMorphism> {
    let homs = QPP.homs(x, y);
    (!homs.is_empty()).then(|| homs[k % homs.len()].clone())
}

fn pick_fwm(v: &Seq, w: &Seq, k: usize) -> Option<tracelab::completions::InjMorphism> {
    let homs = Fwm.homs(v, w);
    (!homs.is_empty()).then(|| homs[k % homs.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cplus_is_a_category(
        objs in chain(),
        ks in prop::collection::vec(any::<usize>(), 3),
    ) {
        let f = pick(&objs[0], &objs[1], ks[0]).expect("chain is composable");
        let g = pick(&objs[1], &objs[2], ks[1]).expect("chain is composable");
        let h = pick(&objs[2], &objs[3], ks[2]).expect("chain is composable");
        prop_assert_eq!(QPP.compose(&f, &QPP.identity(&objs[0])).unwrap(), f.clone());
        prop_assert_eq!(QPP.compose(&QPP.identity(&objs[1]), &f).unwrap(), f.clone());
        let left = QPP.compose(&h, &QPP.compose(&g, &f).unwrap()).unwrap();
        let right = QPP.compose(&QPP.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert!(QPP.validate(&left).is_ok());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tensor_is_functorial(
        p in chain(),
        q in chain(),
        ks in prop::collection::vec(any::<usize>(), 4),
    ) {
        let f = pick(&p[0], &p[1], ks[0]).expect("chain is composable");
        let g = pick(&p[1], &p[2], ks[1]).expect("chain is composable");
        let f2 = pick(&q[0], &q[1], ks[2]).expect("chain is composable");
        let g2 = pick(&q[1], &q[2], ks[3]).expect("chain is composable");
        let lhs = QPP.compose(&QPP.tensor(&g, &g2), &QPP.tensor(&f, &f2)).unwrap();
        let rhs = QPP.tensor(&QPP.compose(&g, &f).unwrap(), &QPP.compose(&g2, &f2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fwm_unit_is_terminal_and_not_initial(v in seq(3)) {
        prop_assert_eq!(Fwm.homs(&v, &vec![]).len(), 1);
        prop_assert_eq!(Fwm.homs(&vec![], &v).is_empty(), !v.is_empty());
    }

    #[test]
    fn hat_f_is_functorial(
        (u, v, w) in seq(3)
            .prop_flat_map(|u| (Just(u.clone()), below_seq(u)))
            .prop_flat_map(|(u, v)| (Just(u), Just(v.clone()), below_seq(v))),
        k1 in any::<usize>(),
        k2 in any::<usize>(),
    ) {
        let f = pick_fwm(&u, &v, k1).expect("v sits inside u");
        let g = pick_fwm(&v, &w, k2).expect("w sits inside v");
        let lhs = hat_f(&Fwm.compose(&g, &f).unwrap());
        let rhs = CpmsTensor.compose(&hat_f(&g), &hat_f(&f)).unwrap();
        prop_assert!(CpmsTensor.distance(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn psi_is_trace_preserving_and_additive(
        (x, y) in family().prop_flat_map(|x| (Just(x.clone()), below_family(x))),
        k in any::<usize>(),
    ) {
        let (s, _, _) = QPP.coproduct(&x, &y);
        prop_assert_eq!(psi_obj(&s), [psi_obj(&x), psi_obj(&y)].concat());
        let f = pick(&x, &y, k).expect("y receives a map from x");
        prop_assert!(trace_preservation_defect(&psi_map(&f)) < 1e-10);
    }
}
