use super::{fail, FiniteCategory, PresheafError, Res};
use petgraph::unionfind::UnionFind;
use std::collections::HashMap;
use std::hash::Hash;

/// Collects elements and identifications before forming the quotient.
pub struct QuotientBuilder<K> {
    elems: Vec<K>,
    index: HashMap<K, usize>,
    pairs: Vec<(usize, usize)>,
}

impl<K: Clone + Eq + Hash> Default for QuotientBuilder<K> {
    fn default() -> Self {
        QuotientBuilder {
            elems: Vec::new(),
            index: HashMap::new(),
            pairs: Vec::new(),
        }
    }
}

impl<K: Clone + Eq + Hash> QuotientBuilder<K> {
    pub fn push(&mut self, k: K) -> usize {
        let n = self.elems.len();
        *self.index.entry(k.clone()).or_insert_with(|| {
            self.elems.push(k);
            n
        })
    }

    /// Identifies two elements already pushed.
    pub fn relate(&mut self, a: &K, b: &K) {
        let (i, j) = (self.index[a], self.index[b]);
        self.pairs.push((i, j));
    }

    /// Classes are numbered by their smallest element, so labels do not depend on the order of `relate` calls.
    pub fn finish(self) -> Quotient<K> {
        let mut uf = UnionFind::<usize>::new(self.elems.len());
        for (i, j) in self.pairs {
            uf.union(i, j);
        }
        let mut class_by_root = HashMap::new();
        let mut class_of = Vec::with_capacity(self.elems.len());
        let mut reps = Vec::new();
        for i in 0..self.elems.len() {
            let r = uf.find_mut(i);
            let k = *class_by_root.entry(r).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            });
            class_of.push(k);
        }
        Quotient {
            elems: self.elems,
            index: self.index,
            class_of,
            reps,
        }
    }
}

/// A finite set modulo an equivalence relation with canonical representatives.
#[derive(Clone, Debug)]
pub struct Quotient<K> {
    pub elems: Vec<K>,
    index: HashMap<K, usize>,
    pub class_of: Vec<usize>,
    /// The smallest element of each class.
    pub reps: Vec<usize>,
}

impl<K: Clone + Eq + Hash> Quotient<K> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class(&self, k: &K) -> Option<usize> {
        self.index.get(k).map(|&i| self.class_of[i])
    }

    pub fn rep(&self, class: usize) -> &K {
        &self.elems[self.reps[class]]
    }
}

/// A functor `H: C^op × C -> FinSet` given by tables.
///
/// `left[f][c]` is `H(f, 1_c): H(b, c) -> H(a, c)` for `f: a -> b`;
/// `right[g][a]` is `H(1_a, g): H(a, b) -> H(a, b′)` for `g: b -> b′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bifunctor {
    pub sizes: Vec<Vec<usize>>,
    pub left: Vec<Vec<Vec<usize>>>,
    pub right: Vec<Vec<Vec<usize>>>,
}

impl Bifunctor {
    /// Tabulates `left(f, c, x)` and `right(g, a, x)` and checks functoriality in each variable and interchange.
    pub fn from_fn(
        cat: &FiniteCategory,
        sizes: Vec<Vec<usize>>,
        left: impl Fn(usize, usize, usize) -> usize,
        right: impl Fn(usize, usize, usize) -> usize,
    ) -> Res<Bifunctor> {
        let n = cat.n_obj();
        let l = (0..cat.n_arr())
            .map(|f| {
                (0..n)
                    .map(|c| (0..sizes[cat.cod(f)][c]).map(|x| left(f, c, x)).collect())
                    .collect()
            })
            .collect();
        let r = (0..cat.n_arr())
            .map(|g| {
                (0..n)
                    .map(|a| (0..sizes[a][cat.dom(g)]).map(|x| right(g, a, x)).collect())
                    .collect()
            })
            .collect();
        let h = Bifunctor {
            sizes,
            left: l,
            right: r,
        };
        h.validate(cat)?;
        Ok(h)
    }

    pub fn validate(&self, cat: &FiniteCategory) -> Res<()> {
        let err = |s: &str| fail(PresheafError::FunctorialityViolation, s.to_string());
        let n = cat.n_obj();
        if self.sizes.len() != n || self.sizes.iter().any(|r| r.len() != n) {
            return err("size table does not match the category");
        }
        for f in 0..cat.n_arr() {
            let (a, b) = (cat.dom(f), cat.cod(f));
            for c in 0..n {
                let lm = &self.left[f][c];
                let rm = &self.right[f][c];
                if lm.len() != self.sizes[b][c] || lm.iter().any(|&y| y >= self.sizes[a][c]) {
                    return err("left action is mistyped");
                }
                if rm.len() != self.sizes[c][a] || rm.iter().any(|&y| y >= self.sizes[c][b]) {
                    return err("right action is mistyped");
                }
                if cat.is_identity(f)
                    && (lm.iter().enumerate().any(|(x, &y)| x != y)
                        || rm.iter().enumerate().any(|(x, &y)| x != y))
                {
                    return err("identity does not act trivially");
                }
            }
        }
        for f in 0..cat.n_arr() {
            for g in cat.out_arrows(cat.cod(f)) {
                let gf = cat.compose(g, f);
                for c in 0..n {
                    // contravariant in the first variable, covariant in the second
                    for x in 0..self.sizes[cat.cod(g)][c] {
                        if self.left[gf][c][x] != self.left[f][c][self.left[g][c][x]] {
                            return err("left action is not functorial");
                        }
                    }
                    for x in 0..self.sizes[c][cat.dom(f)] {
                        if self.right[gf][c][x] != self.right[g][c][self.right[f][c][x]] {
                            return err("right action is not functorial");
                        }
                    }
                }
            }
        }
        for f in 0..cat.n_arr() {
            for g in 0..cat.n_arr() {
                // H(f, 1) ∘ H(1, g) = H(1, g) ∘ H(f, 1) on H(cod f, dom g)
                let (a, b, c, d) = (cat.dom(f), cat.cod(f), cat.dom(g), cat.cod(g));
                for x in 0..self.sizes[b][c] {
                    let p = self.left[f][d][self.right[g][b][x]];
                    let q = self.right[g][a][self.left[f][c][x]];
                    if p != q {
                        return err("the two actions do not commute");
                    }
                }
            }
        }
        Ok(())
    }
}

/// `∫^a H(a, a)`: the elements `(a, x)` with `x ∈ H(a, a)` modulo `H(f, 1)(x) ∼ H(1, f)(x)`.
/// The class map of the quotient is the family of wedge maps.
pub fn coend(h: &Bifunctor, cat: &FiniteCategory) -> Res<Quotient<(usize, usize)>> {
    h.validate(cat)?;
    let mut q = QuotientBuilder::default();
    for a in 0..cat.n_obj() {
        for x in 0..h.sizes[a][a] {
            q.push((a, x));
        }
    }
    for f in 0..cat.n_arr() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        for x in 0..h.sizes[b][a] {
            q.relate(&(a, h.left[f][a][x]), &(b, h.right[f][b][x]));
        }
    }
    Ok(q.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finpresheaf::Presheaf;

    #[test]
    fn discrete_coend_is_disjoint_union() {
        let c = FiniteCategory::discrete("D", 3);
        let sizes = vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 4]];
        let h = Bifunctor::from_fn(&c, sizes, |_, _, x| x, |_, _, x| x).unwrap();
        assert_eq!(coend(&h, &c).unwrap().len(), 7);
    }

    /// `H(a⁻, a⁺) = S(a⁻) × hom(b, a⁺)` with elements `s * |hom(b, a⁺)| + i`.
    fn density(c: &FiniteCategory, s: &Presheaf, b: usize) -> Bifunctor {
        let n = c.n_obj();
        let hb = |a: usize| c.hom(b, a).len();
        let sizes = (0..n)
            .map(|x| (0..n).map(|y| s.sizes[x] * hb(y)).collect())
            .collect();
        Bifunctor::from_fn(
            c,
            sizes,
            |f, cc, x| {
                let (sx, i) = (x / hb(cc), x % hb(cc));
                s.act(f, sx) * hb(cc) + i
            },
            |g, _, x| {
                let (sx, i) = (x / hb(c.dom(g)), x % hb(c.dom(g)));
                let h = c.compose(g, c.hom(b, c.dom(g))[i]);
                sx * hb(c.cod(g)) + c.hom_index(h)
            },
        )
        .unwrap()
    }

    #[test]
    fn density_reduction() {
        let c = FiniteCategory::thin(
            "P",
            vec!["0".into(), "1".into(), "2".into()],
            &[(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        let s = Presheaf::from_fn(&c, vec![3, 2, 1], |f, x| match (c.dom(f), c.cod(f)) {
            (0, 1) => x,
            (1, 2) | (0, 2) => 0,
            _ => x,
        })
        .unwrap();
        for b in 0..3 {
            let h = density(&c, &s, b);
            let q = coend(&h, &c).unwrap();
            assert_eq!(q.len(), s.sizes[b]);
            // λ(x, f) = S(f)(x) is constant on classes and hits every element
            let mut image = vec![None; q.len()];
            for (i, &(a, x)) in q.elems.iter().enumerate() {
                let hb = c.hom(b, a).len();
                let v = s.act(c.hom(b, a)[x % hb], x / hb);
                let slot = &mut image[q.class_of[i]];
                assert!(slot.is_none() || *slot == Some(v));
                *slot = Some(v);
            }
            let mut img: Vec<_> = image.into_iter().map(Option::unwrap).collect();
            img.sort_unstable();
            assert_eq!(img, (0..s.sizes[b]).collect::<Vec<_>>());
        }
    }

    #[test]
    fn idempotent_monoid_matches_brute_force_closure() {
        // {1, e} with e∘e = e; H = S × T where e acts on S = {0,1,2} by [0,0,2] and on T = {0,1} by [1,1]
        let c = FiniteCategory::monoid("E", &[vec![0, 1], vec![1, 1]]).unwrap();
        let (se, te) = ([0, 0, 2], [1, 1]);
        let h = Bifunctor::from_fn(
            &c,
            vec![vec![6]],
            |f, _, x| if f == 1 { se[x / 2] * 2 + x % 2 } else { x },
            |g, _, x| if g == 1 { (x / 2) * 2 + te[x % 2] } else { x },
        )
        .unwrap();
        let q = coend(&h, &c).unwrap();
        let n = 6;
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for x in 0..n {
            let (l, r) = (h.left[1][0][x], h.right[1][0][x]);
            rel[l][r] = true;
            rel[r][l] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(rel[i][j], q.class_of[i] == q.class_of[j]);
            }
        }
        assert!(q.len() < n);
    }

    #[test]
    fn labels_ignore_relation_order() {
        let mut a = QuotientBuilder::default();
        let mut b = QuotientBuilder::default();
        for k in 0..6 {
            a.push(k);
            b.push(k);
        }
        for (x, y) in [(5, 2), (3, 4), (2, 0)] {
            a.relate(&x, &y);
        }
        for (x, y) in [(0, 2), (4, 3), (2, 5)] {
            b.relate(&x, &y);
        }
        let (a, b) = (a.finish(), b.finish());
        assert_eq!(a.class_of, b.class_of);
        assert_eq!(a.class_of, vec![0, 1, 0, 2, 2, 0]);
    }
}
