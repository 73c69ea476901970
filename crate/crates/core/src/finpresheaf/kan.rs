use super::coend::{Quotient, QuotientBuilder};
use super::day::{day_tensor, DayTensor};
use super::{FiniteCategory, FiniteFunctor, FiniteMonoidalCategory, NatTrans, Presheaf};

/// `(a, h, x)` with `h: b -> φ(a)` and `x ∈ F(a)`.
pub type LanElem = (usize, usize, usize);

/// `Lan_φ F` with the coend presentation of each component.
#[derive(Clone, Debug)]
pub struct LanExt {
    pub presheaf: Presheaf,
    pub parts: Vec<Quotient<LanElem>>,
}

impl LanExt {
    pub fn class(&self, b: usize, e: &LanElem) -> usize {
        self.parts[b]
            .class(e)
            .expect("element of the Kan extension coend")
    }

    pub fn rep(&self, b: usize, k: usize) -> LanElem {
        *self.parts[b].rep(k)
    }
}

/// `Lan_φ(F)(b) = ∫^a hom(b, φa) × F(a)`.
pub fn lan_along(
    phi: &FiniteFunctor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    f: &Presheaf,
) -> LanExt {
    let parts: Vec<Quotient<LanElem>> = (0..tgt.n_obj())
        .map(|b| {
            let mut q = QuotientBuilder::default();
            for a in 0..src.n_obj() {
                for &h in tgt.hom(b, phi.obj[a]) {
                    for x in 0..f.sizes[a] {
                        q.push((a, h, x));
                    }
                }
            }
            // (a, h, F(u)x′) ∼ (a′, φ(u) ∘ h, x′) for u: a -> a′
            for u in 0..src.n_arr() {
                let (a, a2) = (src.dom(u), src.cod(u));
                for &h in tgt.hom(b, phi.obj[a]) {
                    let h2 = tgt.compose(phi.arr[u], h);
                    for x in 0..f.sizes[a2] {
                        q.relate(&(a, h, f.act(u, x)), &(a2, h2, x));
                    }
                }
            }
            q.finish()
        })
        .collect();
    let sizes = parts.iter().map(Quotient::len).collect();
    let maps = (0..tgt.n_arr())
        .map(|k| {
            let (b2, b) = (tgt.dom(k), tgt.cod(k));
            (0..parts[b].len())
                .map(|i| {
                    let (a, h, x) = *parts[b].rep(i);
                    parts[b2]
                        .class(&(a, tgt.compose(h, k), x))
                        .expect("restriction stays in the coend")
                })
                .collect()
        })
        .collect();
    LanExt {
        presheaf: Presheaf { sizes, maps },
        parts,
    }
}

/// `φ*(G) = G ∘ φ`.
pub fn precompose(phi: &FiniteFunctor, g: &Presheaf) -> Presheaf {
    Presheaf {
        sizes: phi.obj.iter().map(|&b| g.sizes[b]).collect(),
        maps: phi.arr.iter().map(|&v| g.maps[v].clone()).collect(),
    }
}

/// `η: F ⇒ φ*(Lan_φ F)`, `x ↦ [(a, 1, x)]`.
pub fn lan_unit(phi: &FiniteFunctor, tgt: &FiniteCategory, f: &Presheaf, lan: &LanExt) -> NatTrans {
    NatTrans {
        components: f
            .sizes
            .iter()
            .enumerate()
            .map(|(a, &s)| {
                (0..s)
                    .map(|x| lan.class(phi.obj[a], &(a, tgt.id(phi.obj[a]), x)))
                    .collect()
            })
            .collect(),
    }
}

/// `ε: Lan_φ(φ*G) ⇒ G`, `[(a, h, x)] ↦ G(h)(x)`.
pub fn lan_counit(g: &Presheaf, lan_pg: &LanExt) -> NatTrans {
    NatTrans {
        components: (0..lan_pg.parts.len())
            .map(|b| {
                (0..lan_pg.parts[b].len())
                    .map(|i| {
                        let (_, h, x) = lan_pg.rep(b, i);
                        g.act(h, x)
                    })
                    .collect()
            })
            .collect(),
    }
}

/// `Lan_φ(α): Lan_φ F ⇒ Lan_φ F′`.
pub fn lan_map(src: &LanExt, tgt: &LanExt, alpha: &NatTrans) -> NatTrans {
    NatTrans {
        components: (0..src.parts.len())
            .map(|b| {
                (0..src.parts[b].len())
                    .map(|i| {
                        let (a, h, x) = src.rep(b, i);
                        tgt.class(b, &(a, h, alpha.components[a][x]))
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Both triangle identities of `Lan_φ ⊣ φ*` at `F` and `G`.
pub fn check_triangles(
    phi: &FiniteFunctor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    f: &Presheaf,
    g: &Presheaf,
) -> (bool, bool) {
    // ε_{Lan F} ∘ Lan(η_F) = 1
    let lf = lan_along(phi, src, tgt, f);
    let eta_f = lan_unit(phi, tgt, f, &lf);
    let plf = precompose(phi, &lf.presheaf);
    let lplf = lan_along(phi, src, tgt, &plf);
    let first = lan_counit(&lf.presheaf, &lplf).after(&lan_map(&lf, &lplf, &eta_f))
        == NatTrans::identity(&lf.presheaf);
    // φ*(ε_G) ∘ η_{φ*G} = 1
    let pg = precompose(phi, g);
    let lpg = lan_along(phi, src, tgt, &pg);
    let eta = lan_unit(phi, tgt, &pg, &lpg);
    let eps = lan_counit(g, &lpg);
    let p_eps = NatTrans {
        components: phi.obj.iter().map(|&b| eps.components[b].clone()).collect(),
    };
    let second = p_eps.after(&eta) == NatTrans::identity(&pg);
    (first, second)
}

/// Result of enumerating both sides of `hom(Lan F, G) ≅ hom(F, φ*G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionCheck {
    pub left: usize,
    pub right: usize,
    pub bijective: bool,
}

/// Transposes every `θ: Lan F ⇒ G` to `φ*(θ) ∘ η` and checks the result is a bijection
/// whose inverse is `ψ ↦ ε ∘ Lan(ψ)`. `None` when either side exceeds `limit`.
pub fn adjunction_bijection(
    phi: &FiniteFunctor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    f: &Presheaf,
    g: &Presheaf,
    limit: usize,
) -> Option<AdjunctionCheck> {
    let lf = lan_along(phi, src, tgt, f);
    let pg = precompose(phi, g);
    let eta = lan_unit(phi, tgt, f, &lf);
    let lpg = lan_along(phi, src, tgt, &pg);
    let eps = lan_counit(g, &lpg);
    let left = NatTrans::enumerate(tgt, &lf.presheaf, g, limit)?;
    let right = NatTrans::enumerate(src, f, &pg, limit)?;
    let flat = |t: &NatTrans| {
        NatTrans {
            components: phi.obj.iter().map(|&b| t.components[b].clone()).collect(),
        }
        .after(&eta)
    };
    let sharp = |p: &NatTrans| eps.after(&lan_map(&lf, &lpg, p));
    let mut images: Vec<NatTrans> = left.iter().map(flat).collect();
    let round_trip = left.iter().zip(&images).all(|(t, p)| sharp(p) == *t);
    let natural = images.iter().all(|p| p.validate(src, f, &pg).is_ok());
    images.sort_by(|a, b| a.components.cmp(&b.components));
    images.dedup();
    let mut rs = right.clone();
    rs.sort_by(|a, b| a.components.cmp(&b.components));
    Some(AdjunctionCheck {
        left: left.len(),
        right: right.len(),
        bijective: round_trip && natural && images.len() == left.len() && images == rs,
    })
}

/// `!G = Lan_φ(φ*G)` with its counit and comultiplication.
#[derive(Clone, Debug)]
pub struct BangData {
    pub bang: LanExt,
    pub bang2: LanExt,
    /// `ε: !G ⇒ G`.
    pub epsilon: NatTrans,
    /// `δ = Lan_φ(η_{φ*G}): !G ⇒ !!G`.
    pub delta: NatTrans,
}

impl BangData {
    /// Every component of `δ` is a bijection.
    pub fn is_idempotent(&self) -> bool {
        self.delta.is_iso(&self.bang.presheaf, &self.bang2.presheaf)
    }

    /// Component sizes of `!G` and `!!G` where `δ` fails to be bijective.
    pub fn witnesses(&self) -> Vec<(usize, usize, usize)> {
        (0..self.bang.presheaf.sizes.len())
            .filter(|&b| {
                let one = NatTrans {
                    components: vec![self.delta.components[b].clone()],
                };
                let p = |s: &Presheaf| Presheaf {
                    sizes: vec![s.sizes[b]],
                    maps: vec![],
                };
                !one.is_iso(&p(&self.bang.presheaf), &p(&self.bang2.presheaf))
            })
            .map(|b| (b, self.bang.presheaf.sizes[b], self.bang2.presheaf.sizes[b]))
            .collect()
    }
}

pub fn bang(
    phi: &FiniteFunctor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    g: &Presheaf,
) -> BangData {
    let pg = precompose(phi, g);
    let bang = lan_along(phi, src, tgt, &pg);
    let epsilon = lan_counit(g, &bang);
    let pbang = precompose(phi, &bang.presheaf);
    let eta = lan_unit(phi, tgt, &pg, &bang);
    let bang2 = lan_along(phi, src, tgt, &pbang);
    let delta = lan_map(&bang, &bang2, &eta);
    BangData {
        bang,
        bang2,
        epsilon,
        delta,
    }
}

/// Outcome of comparing `Lan(F ⊗ G)` with `Lan F ⊗ Lan G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanMonoidalCheck {
    pub strict: bool,
    pub well_defined: bool,
    pub natural: bool,
    pub comparison_bijective: bool,
    pub unit_bijective: bool,
    pub sizes: (Vec<usize>, Vec<usize>),
}

impl LanMonoidalCheck {
    pub fn pass(&self) -> bool {
        self.strict
            && self.well_defined
            && self.natural
            && self.comparison_bijective
            && self.unit_bijective
    }
}

/// Maps every element of each class and requires a single image per class.
fn tabulate<K: Clone + Eq + std::hash::Hash>(
    q: &Quotient<K>,
    image: impl Fn(&K) -> usize,
) -> Option<Vec<usize>> {
    let mut out: Vec<Option<usize>> = vec![None; q.len()];
    for (i, e) in q.elems.iter().enumerate() {
        let v = image(e);
        let slot = &mut out[q.class_of[i]];
        if slot.is_some_and(|w| w != v) {
            return None;
        }
        *slot = Some(v);
    }
    Some(
        out.into_iter()
            .map(|v| v.expect("every class is inhabited"))
            .collect(),
    )
}

/// The comparison `[(c, h, [(a, a′, x, y, k)])] ↦ [(φa, φa′, η x, η y, φ(k) ∘ h)]` for a strict monoidal `φ`,
/// and the unit comparison `[(a, h, x: a -> I)] ↦ φ(x) ∘ h`.
pub fn check_lan_strong_monoidal(
    phi: &FiniteFunctor,
    src: &FiniteMonoidalCategory,
    tgt: &FiniteMonoidalCategory,
    f: &Presheaf,
    g: &Presheaf,
) -> LanMonoidalCheck {
    let (sc, tc) = (&src.base, &tgt.base);
    let strict = phi.is_strict_monoidal(src, tgt);
    let fg: DayTensor = day_tensor(src, f, g);
    let lfg = lan_along(phi, sc, tc, &fg.presheaf);
    let lf = lan_along(phi, sc, tc, f);
    let lg = lan_along(phi, sc, tc, g);
    let d = day_tensor(tgt, &lf.presheaf, &lg.presheaf);
    let mut well_defined = strict;
    let mut comps = Vec::new();
    if strict {
        for b in 0..tc.n_obj() {
            let table = tabulate(&lfg.parts[b], |&(c, h, z)| {
                // z is a Day class at c; every element of it must give the same image
                let vals: Vec<usize> = fg.parts[c]
                    .elems
                    .iter()
                    .zip(&fg.parts[c].class_of)
                    .filter(|(_, &k)| k == z)
                    .map(|(&(a, a2, x, y, k), _)| {
                        let (pa, pa2) = (phi.obj[a], phi.obj[a2]);
                        let ex = lf.class(pa, &(a, tc.id(pa), x));
                        let ey = lg.class(pa2, &(a2, tc.id(pa2), y));
                        d.class(b, &(pa, pa2, ex, ey, tc.compose(phi.arr[k], h)))
                    })
                    .collect();
                if vals.windows(2).all(|w| w[0] == w[1]) {
                    vals[0]
                } else {
                    usize::MAX
                }
            });
            match table {
                Some(t) if !t.contains(&usize::MAX) => comps.push(t),
                _ => {
                    well_defined = false;
                    break;
                }
            }
        }
    }
    let cmp = NatTrans { components: comps };
    let natural = well_defined && cmp.validate(tc, &lfg.presheaf, &d.presheaf).is_ok();
    let comparison_bijective = natural && cmp.is_iso(&lfg.presheaf, &d.presheaf);
    let unit_a = Presheaf::representable(sc, src.unit);
    let unit_b = Presheaf::representable(tc, tgt.unit);
    let lu = lan_along(phi, sc, tc, &unit_a);
    let unit_bijective = strict && {
        let u: Option<Vec<Vec<usize>>> = (0..tc.n_obj())
            .map(|b| {
                tabulate(&lu.parts[b], |&(a, h, x)| {
                    let xa = sc.hom(a, src.unit)[x];
                    tc.hom_index(tc.compose(phi.arr[xa], h))
                })
            })
            .collect();
        u.map(|components| {
            let t = NatTrans { components };
            t.validate(tc, &lu.presheaf, &unit_b).is_ok() && t.is_iso(&lu.presheaf, &unit_b)
        })
        .unwrap_or(false)
    };
    LanMonoidalCheck {
        strict,
        well_defined,
        natural,
        comparison_bijective,
        unit_bijective,
        sizes: (lfg.presheaf.sizes.clone(), d.presheaf.sizes.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteMonoidalCategory {
        let c = FiniteCategory::discrete("Z2", 2);
        FiniteMonoidalCategory::strict(
            c,
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 1], vec![1, 0]],
            0,
        )
        .unwrap()
    }

    fn terminal() -> FiniteMonoidalCategory {
        let c = FiniteCategory::discrete("1", 1);
        FiniteMonoidalCategory::strict(c, vec![vec![0]], vec![vec![0]], 0).unwrap()
    }

    fn poset() -> FiniteCategory {
        FiniteCategory::thin("P", vec!["0".into(), "1".into()], &[(0, 1)]).unwrap()
    }

    #[test]
    fn lan_along_identity_is_identity() {
        let c = poset();
        let f = Presheaf::from_fn(&c, vec![3, 2], |_, x| x).unwrap();
        let l = lan_along(&FiniteFunctor::identity(&c), &c, &c, &f);
        assert_eq!(l.presheaf, f);
    }

    #[test]
    fn lan_from_terminal_into_z2() {
        let (t, z) = (terminal(), z2());
        let phi = FiniteFunctor::new(vec![0], vec![0], &t.base, &z.base).unwrap();
        let f = Presheaf::discrete(&t.base, vec![3]).unwrap();
        assert_eq!(
            lan_along(&phi, &t.base, &z.base, &f).presheaf.sizes,
            vec![3, 0]
        );
    }

    #[test]
    fn triangles_and_adjunction_on_poset() {
        let (t, c) = (terminal(), poset());
        let phi = FiniteFunctor::new(vec![0], vec![0], &t.base, &c).unwrap();
        let f = Presheaf::discrete(&t.base, vec![2]).unwrap();
        let g = Presheaf::from_fn(
            &c,
            vec![2, 3],
            |u, x| if c.dom(u) != c.cod(u) { x % 2 } else { x },
        )
        .unwrap();
        assert_eq!(check_triangles(&phi, &t.base, &c, &f, &g), (true, true));
        let a = adjunction_bijection(&phi, &t.base, &c, &f, &g, 10_000).unwrap();
        assert_eq!((a.left, a.right), (4, 4));
        assert!(a.bijective);
    }

    #[test]
    fn bang_is_idempotent_for_fully_faithful_and_not_for_collapse() {
        let (t, z) = (terminal(), z2());
        let incl = FiniteFunctor::new(vec![0], vec![0], &t.base, &z.base).unwrap();
        assert!(incl.is_fully_faithful(&t.base, &z.base));
        let g = Presheaf::discrete(&z.base, vec![2, 1]).unwrap();
        let b = bang(&incl, &t.base, &z.base, &g);
        assert!(b.is_idempotent());
        let collapse = FiniteFunctor::new(vec![0, 0], vec![0, 0], &z.base, &t.base).unwrap();
        assert!(!collapse.is_fully_faithful(&z.base, &t.base));
        let g = Presheaf::discrete(&t.base, vec![1]).unwrap();
        let b = bang(&collapse, &z.base, &t.base, &g);
        assert!(!b.is_idempotent());
        assert_eq!(b.witnesses(), vec![(0, 2, 4)]);
        // counit law ε_{!G} ∘ δ = 1 still holds
        let e2 = lan_counit(&b.bang.presheaf, &b.bang2);
        assert_eq!(e2.after(&b.delta), NatTrans::identity(&b.bang.presheaf));
    }

    #[test]
    fn lan_is_strong_monoidal_on_z2() {
        let z = z2();
        let id = FiniteFunctor::identity(&z.base);
        for s in [[1, 0], [0, 2], [2, 1], [3, 3]] {
            for t in [[1, 1], [0, 3], [2, 0]] {
                let f = Presheaf::discrete(&z.base, s.to_vec()).unwrap();
                let g = Presheaf::discrete(&z.base, t.to_vec()).unwrap();
                assert!(check_lan_strong_monoidal(&id, &z, &z, &f, &g).pass());
            }
        }
        let t = terminal();
        let incl = FiniteFunctor::new(vec![0], vec![0], &t.base, &z.base).unwrap();
        let f = Presheaf::discrete(&t.base, vec![2]).unwrap();
        let g = Presheaf::discrete(&t.base, vec![3]).unwrap();
        let r = check_lan_strong_monoidal(&incl, &t, &z, &f, &g);
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.sizes.0, vec![6, 0]);
    }
}
