//! `E(G)`: least `k` such that every length-`k` sequence has an index-ordered
//! subsequence of length exactly `|G|` with product 1.
//!
//! The state holds, for each length `l ≤ |G|`, the set of products of
//! index-increasing subsequences of length `l`, flattened into one bit
//! vector. It grows strictly along sequences avoiding 1 at length `|G|`,
//! since a fixed point could be repeated forever and `E(G)` is finite.

use std::time::Instant;

use rustc_hash::FxHashMap;

use super::{is_ordered_free, Budget, SearchConfig, SearchResult, ZeroSumError, EG_ORDER_CAP};
use crate::group::{Element, GroupLaw};

struct Layers<'a, G: ?Sized> {
    group: &'a G,
    n: usize,
    words: usize,
}

impl<G: GroupLaw + ?Sized> Layers<'_, G> {
    fn bit(&self, len: usize, x: usize) -> usize {
        (len - 1) * self.n + x
    }

    fn get(&self, s: &[u64], len: usize, x: usize) -> bool {
        let b = self.bit(len, x);
        s[b / 64] >> (b % 64) & 1 == 1
    }

    fn empty(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    /// `P'_1 = P_1 ∪ {g}`, `P'_l = P_l ∪ P_{l−1}·g`.
    fn extend(&self, s: &[u64], g: Element) -> Vec<u64> {
        let mut t = s.to_vec();
        let mut put = |len: usize, x: usize| {
            let b = (len - 1) * self.n + x;
            t[b / 64] |= 1 << (b % 64);
        };
        put(1, g.index());
        for len in 2..=self.n {
            for x in 0..self.n {
                if self.get(s, len - 1, x) {
                    put(len, self.group.mul(Element(x as u32), g).index());
                }
            }
        }
        t
    }

    fn hit(&self, s: &[u64]) -> bool {
        self.get(s, self.n, 0)
    }
}

struct Search<'a, G: ?Sized> {
    layers: Layers<'a, G>,
    memo: FxHashMap<Vec<u64>, u16>,
    budget: &'a Budget,
    path: Vec<Element>,
    best: Vec<Element>,
}

impl<G: GroupLaw + ?Sized> Search<'_, G> {
    fn solve(&mut self, s: &[u64]) -> Option<u16> {
        if let Some(&v) = self.memo.get(s) {
            self.note(s, v);
            return Some(v);
        }
        if !self.budget.tick() {
            return None;
        }
        let mut best = 0u16;
        for g in 0..self.layers.n {
            let t = self.layers.extend(s, Element(g as u32));
            if self.layers.hit(&t) {
                continue;
            }
            debug_assert!(t != s, "state fixed point");
            self.path.push(Element(g as u32));
            let v = self.solve(&t);
            self.path.pop();
            best = best.max(v? + 1);
        }
        self.memo.insert(s.to_vec(), best);
        self.note(s, best);
        Some(best)
    }

    fn note(&mut self, s: &[u64], v: u16) {
        if self.path.len() + v as usize > self.best.len() {
            let mut full = self.path.clone();
            full.extend(self.reconstruct(s));
            self.best = full;
        }
    }

    fn reconstruct(&self, s: &[u64]) -> Vec<Element> {
        let mut out = Vec::new();
        let mut s = s.to_vec();
        while let Some(&v) = self.memo.get(&s) {
            if v == 0 {
                break;
            }
            let step = (0..self.layers.n).find_map(|g| {
                let t = self.layers.extend(&s, Element(g as u32));
                (!self.layers.hit(&t) && self.memo.get(&t) == Some(&(v - 1))).then_some((g, t))
            });
            match step {
                Some((g, t)) => {
                    out.push(Element(g as u32));
                    s = t;
                }
                None => break,
            }
        }
        out
    }
}

/// Exact `E(G)` by memoized search over length-stratified states.
pub fn eg_invariant<G: GroupLaw + ?Sized>(group: &G, config: &SearchConfig) -> Result<SearchResult, ZeroSumError> {
    config.check_cap(group.order(), EG_ORDER_CAP)?;
    let start = Instant::now();
    let budget = Budget::new(config);
    let n = group.order();
    let layers = Layers { group, n, words: (n * n).div_ceil(64) };
    let empty = layers.empty();
    let mut search = Search { layers, memo: FxHashMap::default(), budget: &budget, path: Vec::new(), best: Vec::new() };
    let (len, witness) = match search.solve(&empty) {
        Some(v) => (v as usize, search.reconstruct(&empty)),
        None => (search.best.len(), search.best.clone()),
    };
    Ok(SearchResult {
        value: len + 1,
        witness,
        states_explored: budget.states(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        exact: !budget.aborted(),
    })
}

/// Some index-increasing subsequence of exactly `len` terms multiplies to 1.
pub fn has_product_one_of_length<G: GroupLaw + ?Sized>(group: &G, seq: &[Element], len: usize) -> bool {
    if len == 0 {
        return true;
    }
    let n = group.order();
    // layer[l][x]: some subsequence of length l has product x
    let mut layer = vec![vec![false; n]; len + 1];
    layer[0][0] = true;
    for &g in seq {
        for l in (1..=len).rev() {
            for x in 0..n {
                if layer[l - 1][x] {
                    layer[l][group.mul(Element(x as u32), g).index()] = true;
                }
            }
        }
    }
    layer[len][0]
}

/// `witness ++ 1^(|G|−1)` for an ordered product-one-free `witness`.
pub fn eg_lower_witness<G: GroupLaw + ?Sized>(group: &G, witness: &[Element]) -> Result<Vec<Element>, ZeroSumError> {
    if !is_ordered_free(group, witness) {
        return Err(ZeroSumError::NotFree);
    }
    let mut out = witness.to_vec();
    out.extend(std::iter::repeat_n(Element::IDENTITY, group.order().saturating_sub(1)));
    Ok(out)
}
