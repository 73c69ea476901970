use proptest::prelude::*;
use tracelab::finpresheaf::{
    builtin_example, builtin_functor, check_day_structure, check_lan_strong_monoidal,
    check_triangles, Example, FiniteCategory, FiniteFunctor, NatTrans, Presheaf, QuotientBuilder,
    BUILTIN_EXAMPLES, BUILTIN_FUNCTORS,
};

/// Disjoint union of presheaves, elements numbered part by part.
fn coproduct(cat: &FiniteCategory, parts: &[Presheaf]) -> Presheaf {
    let n = cat.n_obj();
    let offsets: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            parts
                .iter()
                .scan(0, |acc, p| {
                    let o = *acc;
                    *acc += p.sizes[a];
                    Some(o)
                })
                .collect()
        })
        .collect();
    let sizes = (0..n)
        .map(|a| parts.iter().map(|p| p.sizes[a]).sum())
        .collect();
    Presheaf::from_fn(cat, sizes, |f, x| {
        let (d, e) = (cat.dom(f), cat.cod(f));
        let i = (0..parts.len())
            .rev()
            .find(|&i| offsets[e][i] <= x && parts[i].sizes[e] > 0)
            .expect("element in range");
        parts[i].act(f, x - offsets[e][i]) + offsets[d][i]
    })
    .expect("coproducts of presheaves are presheaves")
}

/// One representable per entry of `objs`, plus `points` terminal components.
fn free_presheaf(cat: &FiniteCategory, objs: &[usize], points: usize) -> Presheaf {
    let mut parts: Vec<Presheaf> = objs
        .iter()
        .map(|&o| Presheaf::representable(cat, o % cat.n_obj()))
        .collect();
    parts.extend(
        (0..points).map(|_| Presheaf::from_fn(cat, vec![1; cat.n_obj()], |_, _| 0).unwrap()),
    );
    coproduct(cat, &parts)
}

fn presheaf_shape() -> impl Strategy<Value = (Vec<usize>, usize)> {
    (prop::collection::vec(0..4usize, 0..=2), 0..=1usize)
}

fn example(name: &str) -> Example {
    builtin_example(name).unwrap()
}

fn monoidal_names() -> Vec<&'static str> {
    BUILTIN_EXAMPLES
        .iter()
        .map(|e| e.0)
        .filter(|n| example(n).monoidal.is_some())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn day_isos_on_random_presheaves(
        name in prop::sample::select(monoidal_names()),
        shapes in prop::collection::vec(presheaf_shape(), 1..=3),
    ) {
        let m = example(name).monoidal.unwrap();
        let ps: Vec<Presheaf> = shapes.iter().map(|(o, k)| free_presheaf(&m.base, o, *k)).collect();
        let r = check_day_structure(&m, &ps, 3);
        prop_assert!(r.pass(), "{name}: {:?}", r.failures);
    }

    #[test]
    fn lan_triangles_on_random_presheaves(
        k in 0..BUILTIN_FUNCTORS.len(),
        f in presheaf_shape(),
        g in presheaf_shape(),
    ) {
        let (phi, s, t) = builtin_functor(BUILTIN_FUNCTORS[k].0).unwrap();
        let fp = free_presheaf(&s.category, &f.0, f.1);
        let gp = free_presheaf(&t.category, &g.0, g.1);
        prop_assert_eq!(check_triangles(&phi, &s.category, &t.category, &fp, &gp), (true, true));
    }

    #[test]
    fn lan_is_strong_monoidal_on_random_presheaves(
        along_inclusion in any::<bool>(),
        f in presheaf_shape(),
        g in presheaf_shape(),
    ) {
        let zm = example("z2").monoidal.unwrap();
        let (phi, src) = if along_inclusion {
            let (incl, term, _) = builtin_functor("terminal_to_z2").unwrap();
            (incl, term.monoidal.unwrap())
        } else {
            (FiniteFunctor::identity(&zm.base), zm.clone())
        };
        let fp = free_presheaf(&src.base, &f.0, f.1);
        let gp = free_presheaf(&src.base, &g.0, g.1);
        prop_assert!(check_lan_strong_monoidal(&phi, &src, &zm, &fp, &gp).pass());
    }

    /// On an affine base the Day unit is terminal.
    #[test]
    fn affine_unit_is_terminal(name in prop::sample::select(monoidal_names()), f in presheaf_shape()) {
        let m = example(name).monoidal.unwrap();
        if m.is_affine() {
            let unit = Presheaf::representable(&m.base, m.unit);
            let fp = free_presheaf(&m.base, &f.0, f.1);
            let maps = NatTrans::enumerate(&m.base, &fp, &unit, 1000).unwrap();
            prop_assert_eq!(maps.len(), 1);
        }
    }

    /// Class labels depend only on the elements and the relation, not on the order of identifications.
    #[test]
    fn quotient_is_order_independent(
        n in 1..12usize,
        pairs in prop::collection::vec((0..12usize, 0..12usize), 0..16),
        shuffled in any::<u64>(),
    ) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let build = |ps: &[(usize, usize)]| {
            let mut q = QuotientBuilder::default();
            for k in 0..n {
                q.push(k);
            }
            for (a, b) in ps {
                q.relate(a, b);
            }
            q.finish()
        };
        let mut other = pairs.clone();
        other.reverse();
        let shift = (shuffled as usize) % other.len().max(1);
        other.rotate_left(shift);
        let other: Vec<(usize, usize)> = other.into_iter().map(|(a, b)| if shuffled % 2 == 0 { (b, a) } else { (a, b) }).collect();
        let (q1, q2) = (build(&pairs), build(&other));
        prop_assert_eq!(&q1.class_of, &q2.class_of);
        prop_assert_eq!(&q1.reps, &q2.reps);
        for (a, b) in &pairs {
            prop_assert_eq!(q1.class(a), q1.class(b));
        }
    }

    #[test]
    fn loader_rejects_garbage_without_panicking(doc in "\\PC{0,200}") {
        let _ = Example::from_json(&doc);
    }

    #[test]
    fn loader_survives_corrupted_builtins(k in 0..BUILTIN_EXAMPLES.len(), edits in prop::collection::vec((any::<usize>(), any::<u8>()), 1..4)) {
        let mut bytes = BUILTIN_EXAMPLES[k].1.as_bytes().to_vec();
        for (at, b) in edits {
            let i = at % bytes.len();
            bytes[i] = b;
        }
        if let Ok(s) = String::from_utf8(bytes) {
            if let Ok(ex) = Example::from_json(&s) {
                for p in &ex.presheaves {
                    prop_assert!(p.presheaf.validate(&ex.category).is_ok());
                }
            }
        }
    }
}
