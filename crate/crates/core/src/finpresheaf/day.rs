use super::coend::{Quotient, QuotientBuilder};
use super::{FiniteMonoidalCategory, NatTrans, Presheaf};

/// `(a, b, x, y, h)` with `x ∈ F(a)`, `y ∈ G(b)` and `h: c -> a⊗b`.
pub type DayElem = (usize, usize, usize, usize, usize);

/// `F ⊗_D G` with the coend presentation of each component.
#[derive(Clone, Debug)]
pub struct DayTensor {
    pub presheaf: Presheaf,
    pub parts: Vec<Quotient<DayElem>>,
}

impl DayTensor {
    pub fn class(&self, c: usize, e: &DayElem) -> usize {
        self.parts[c].class(e).expect("element of the Day coend")
    }

    pub fn rep(&self, c: usize, k: usize) -> DayElem {
        *self.parts[c].rep(k)
    }
}

/// `(F ⊗_D G)(c) = ∫^{a,b} F(a) × G(b) × hom(c, a⊗b)`.
pub fn day_tensor(m: &FiniteMonoidalCategory, f: &Presheaf, g: &Presheaf) -> DayTensor {
    let cat = &m.base;
    let n = cat.n_obj();
    let parts: Vec<Quotient<DayElem>> = (0..n)
        .map(|c| {
            let mut q = QuotientBuilder::default();
            for a in 0..n {
                for b in 0..n {
                    for x in 0..f.sizes[a] {
                        for y in 0..g.sizes[b] {
                            for &h in cat.hom(c, m.t(a, b)) {
                                q.push((a, b, x, y, h));
                            }
                        }
                    }
                }
            }
            for u in 0..cat.n_arr() {
                let (a, a2) = (cat.dom(u), cat.cod(u));
                for b in 0..n {
                    let ub = m.tf(u, cat.id(b));
                    let ua = m.tf(cat.id(b), u);
                    for &h in cat.hom(c, m.t(a, b)) {
                        let h2 = cat.compose(ub, h);
                        for x in 0..f.sizes[a2] {
                            for y in 0..g.sizes[b] {
                                q.relate(&(a, b, f.act(u, x), y, h), &(a2, b, x, y, h2));
                            }
                        }
                    }
                    for &h in cat.hom(c, m.t(b, a)) {
                        let h2 = cat.compose(ua, h);
                        for x in 0..f.sizes[b] {
                            for y in 0..g.sizes[a2] {
                                q.relate(&(b, a, x, g.act(u, y), h), &(b, a2, x, y, h2));
                            }
                        }
                    }
                }
            }
            q.finish()
        })
        .collect();
    let sizes = parts.iter().map(Quotient::len).collect();
    let maps = (0..cat.n_arr())
        .map(|k| {
            let (c2, c) = (cat.dom(k), cat.cod(k));
            (0..parts[c].len())
                .map(|i| {
                    let (a, b, x, y, h) = *parts[c].rep(i);
                    parts[c2]
                        .class(&(a, b, x, y, cat.compose(h, k)))
                        .expect("restriction stays in the coend")
                })
                .collect()
        })
        .collect();
    DayTensor {
        presheaf: Presheaf { sizes, maps },
        parts,
    }
}

/// `α ⊗_D β: F⊗G ⇒ F′⊗G′`.
pub fn day_map(src: &DayTensor, tgt: &DayTensor, alpha: &NatTrans, beta: &NatTrans) -> NatTrans {
    NatTrans {
        components: (0..src.parts.len())
            .map(|c| {
                (0..src.parts[c].len())
                    .map(|i| {
                        let (a, b, x, y, h) = src.rep(c, i);
                        tgt.class(c, &(a, b, alpha.components[a][x], beta.components[b][y], h))
                    })
                    .collect()
            })
            .collect(),
    }
}

/// `λ: A(−, I) ⊗_D T ⇒ T`, sending `(a, b, x, y, h)` to `T(λ_b ∘ (x⊗1) ∘ h)(y)`.
pub fn day_lambda(m: &FiniteMonoidalCategory, it: &DayTensor, t: &Presheaf) -> NatTrans {
    let cat = &m.base;
    NatTrans {
        components: (0..it.parts.len())
            .map(|c| {
                (0..it.parts[c].len())
                    .map(|i| {
                        let (a, b, x, y, h) = it.rep(c, i);
                        let xa = cat.hom(a, m.unit)[x];
                        let k = cat.compose(m.lambda[b], cat.compose(m.tf(xa, cat.id(b)), h));
                        t.act(k, y)
                    })
                    .collect()
            })
            .collect(),
    }
}

/// `ρ: T ⊗_D A(−, I) ⇒ T`.
pub fn day_rho(m: &FiniteMonoidalCategory, ti: &DayTensor, t: &Presheaf) -> NatTrans {
    let cat = &m.base;
    NatTrans {
        components: (0..ti.parts.len())
            .map(|c| {
                (0..ti.parts[c].len())
                    .map(|i| {
                        let (a, b, x, y, h) = ti.rep(c, i);
                        let yb = cat.hom(b, m.unit)[y];
                        let k = cat.compose(m.rho[a], cat.compose(m.tf(cat.id(a), yb), h));
                        t.act(k, x)
                    })
                    .collect()
            })
            .collect(),
    }
}

/// `σ: F⊗G ⇒ G⊗F`.
pub fn day_sigma(m: &FiniteMonoidalCategory, fg: &DayTensor, gf: &DayTensor) -> NatTrans {
    let cat = &m.base;
    NatTrans {
        components: (0..fg.parts.len())
            .map(|c| {
                (0..fg.parts[c].len())
                    .map(|i| {
                        let (a, b, x, y, h) = fg.rep(c, i);
                        gf.class(c, &(b, a, y, x, cat.compose(m.sigma[a][b], h)))
                    })
                    .collect()
            })
            .collect(),
    }
}

/// `α: (F⊗G)⊗H ⇒ F⊗(G⊗H)` given the four intermediate tensors.
pub fn day_alpha(
    m: &FiniteMonoidalCategory,
    fg: &DayTensor,
    fg_h: &DayTensor,
    gh: &DayTensor,
    f_gh: &DayTensor,
) -> NatTrans {
    let cat = &m.base;
    NatTrans {
        components: (0..fg_h.parts.len())
            .map(|c| {
                (0..fg_h.parts[c].len())
                    .map(|i| {
                        let (d, e, z, w, h) = fg_h.rep(c, i);
                        let (a, b, x, y, k) = fg.rep(d, z);
                        let be = m.t(b, e);
                        let inner = gh.class(be, &(b, e, y, w, cat.id(be)));
                        let arrow =
                            cat.compose(m.alpha[a][b][e], cat.compose(m.tf(k, cat.id(e)), h));
                        f_gh.class(c, &(a, be, x, inner, arrow))
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Outcome of the structural checks on a list of presheaves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DayReport {
    pub unit_isos: usize,
    pub assoc_isos: usize,
    pub symmetry_isos: usize,
    pub coherence_checks: usize,
    pub failures: Vec<String>,
}

impl DayReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn nat_iso_check(
    r: &mut DayReport,
    what: &str,
    m: &FiniteMonoidalCategory,
    t: &NatTrans,
    f: &Presheaf,
    g: &Presheaf,
) {
    if let Err(e) = t.validate(&m.base, f, g) {
        r.failures.push(format!("{what}: {e}"));
    } else if !t.is_iso(f, g) {
        r.failures.push(format!("{what}: not a bijection"));
    }
}

/// Checks that λ, ρ, σ, α are natural bijections and that the triangle, pentagon,
/// hexagon and `σσ = 1` hold pointwise, over all tuples drawn from `ps`.
/// Pentagon instances are limited to the first `pentagon_width` presheaves.
pub fn check_day_structure(
    m: &FiniteMonoidalCategory,
    ps: &[Presheaf],
    pentagon_width: usize,
) -> DayReport {
    let mut r = DayReport::default();
    let unit = Presheaf::representable(&m.base, m.unit);
    let id = NatTrans::identity;
    for (i, t) in ps.iter().enumerate() {
        let it = day_tensor(m, &unit, t);
        nat_iso_check(
            &mut r,
            &format!("λ[{i}]"),
            m,
            &day_lambda(m, &it, t),
            &it.presheaf,
            t,
        );
        let ti = day_tensor(m, t, &unit);
        nat_iso_check(
            &mut r,
            &format!("ρ[{i}]"),
            m,
            &day_rho(m, &ti, t),
            &ti.presheaf,
            t,
        );
        r.unit_isos += 2;
    }
    for (i, f) in ps.iter().enumerate() {
        for (j, g) in ps.iter().enumerate() {
            let fg = day_tensor(m, f, g);
            let gf = day_tensor(m, g, f);
            let s = day_sigma(m, &fg, &gf);
            nat_iso_check(
                &mut r,
                &format!("σ[{i},{j}]"),
                m,
                &s,
                &fg.presheaf,
                &gf.presheaf,
            );
            if day_sigma(m, &gf, &fg).after(&s) != id(&fg.presheaf) {
                r.failures.push(format!("σσ[{i},{j}] is not the identity"));
            }
            r.symmetry_isos += 1;
            // triangle: (1⊗λ) ∘ α = ρ⊗1 on (F⊗I)⊗G
            let fi = day_tensor(m, f, &unit);
            let fi_g = day_tensor(m, &fi.presheaf, g);
            let ig = day_tensor(m, &unit, g);
            let f_ig = day_tensor(m, f, &ig.presheaf);
            let a = day_alpha(m, &fi, &fi_g, &ig, &f_ig);
            let lhs = day_map(&f_ig, &fg, &id(f), &day_lambda(m, &ig, g)).after(&a);
            let rhs = day_map(&fi_g, &fg, &day_rho(m, &fi, f), &id(g));
            if lhs != rhs {
                r.failures.push(format!("triangle[{i},{j}] fails"));
            }
            r.coherence_checks += 1;
            for (k, h) in ps.iter().enumerate() {
                let fg_h = day_tensor(m, &fg.presheaf, h);
                let gh = day_tensor(m, g, h);
                let f_gh = day_tensor(m, f, &gh.presheaf);
                let a = day_alpha(m, &fg, &fg_h, &gh, &f_gh);
                nat_iso_check(
                    &mut r,
                    &format!("α[{i},{j},{k}]"),
                    m,
                    &a,
                    &fg_h.presheaf,
                    &f_gh.presheaf,
                );
                r.assoc_isos += 1;
                hexagon(m, &mut r, (f, g, h), (i, j, k));
            }
        }
    }
    let w = pentagon_width.min(ps.len());
    for i in 0..w {
        for j in 0..w {
            for k in 0..w {
                for l in 0..w {
                    pentagon(m, &mut r, [&ps[i], &ps[j], &ps[k], &ps[l]], [i, j, k, l]);
                }
            }
        }
    }
    r
}

fn hexagon(
    m: &FiniteMonoidalCategory,
    r: &mut DayReport,
    (f, g, h): (&Presheaf, &Presheaf, &Presheaf),
    ix: (usize, usize, usize),
) {
    let id = NatTrans::identity;
    let t = |a: &Presheaf, b: &Presheaf| day_tensor(m, a, b);
    // α_{G,H,F} ∘ σ_{F,G⊗H} ∘ α_{F,G,H} = (1⊗σ_{F,H}) ∘ α_{G,F,H} ∘ (σ_{F,G}⊗1)
    let (fg, gh, gf, fh, hf) = (t(f, g), t(g, h), t(g, f), t(f, h), t(h, f));
    let fg_h = t(&fg.presheaf, h);
    let f_gh = t(f, &gh.presheaf);
    let gh_f = t(&gh.presheaf, f);
    let g_hf = t(g, &hf.presheaf);
    let gf_h = t(&gf.presheaf, h);
    let g_fh = t(g, &fh.presheaf);
    let lhs = day_alpha(m, &gh, &gh_f, &hf, &g_hf)
        .after(&day_sigma(m, &f_gh, &gh_f))
        .after(&day_alpha(m, &fg, &fg_h, &gh, &f_gh));
    let rhs = day_map(&g_fh, &g_hf, &id(g), &day_sigma(m, &fh, &hf))
        .after(&day_alpha(m, &gf, &gf_h, &fh, &g_fh))
        .after(&day_map(&fg_h, &gf_h, &day_sigma(m, &fg, &gf), &id(h)));
    if lhs != rhs {
        r.failures.push(format!("hexagon{ix:?} fails"));
    }
    r.coherence_checks += 1;
}

fn pentagon(
    m: &FiniteMonoidalCategory,
    r: &mut DayReport,
    [f, g, h, k]: [&Presheaf; 4],
    ix: [usize; 4],
) {
    let id = NatTrans::identity;
    let t = |a: &Presheaf, b: &Presheaf| day_tensor(m, a, b);
    let fg = t(f, g);
    let gh = t(g, h);
    let hk = t(h, k);
    let fg_h = t(&fg.presheaf, h);
    let f_gh = t(f, &gh.presheaf);
    let fgh_k = t(&fg_h.presheaf, k);
    let fg_hk = t(&fg.presheaf, &hk.presheaf);
    let g_hk = t(g, &hk.presheaf);
    let f_ghk = t(f, &g_hk.presheaf);
    let f_gh_k = t(&f_gh.presheaf, k);
    let gh_k = t(&gh.presheaf, k);
    let f_gh_k2 = t(f, &gh_k.presheaf);
    // α_{F,G,H⊗K} ∘ α_{F⊗G,H,K}
    let lhs =
        day_alpha(m, &fg, &fg_hk, &g_hk, &f_ghk).after(&day_alpha(m, &fg_h, &fgh_k, &hk, &fg_hk));
    // (1⊗α_{G,H,K}) ∘ α_{F,G⊗H,K} ∘ (α_{F,G,H}⊗1)
    let rhs = day_map(
        &f_gh_k2,
        &f_ghk,
        &id(f),
        &day_alpha(m, &gh, &gh_k, &hk, &g_hk),
    )
    .after(&day_alpha(m, &f_gh, &f_gh_k, &gh_k, &f_gh_k2))
    .after(&day_map(
        &fgh_k,
        &f_gh_k,
        &day_alpha(m, &fg, &fg_h, &gh, &f_gh),
        &id(k),
    ));
    if lhs != rhs {
        r.failures.push(format!("pentagon{ix:?} fails"));
    }
    r.coherence_checks += 1;
}
