//! Small Davenport constant `D'(G)` by DFS over multisets.
//!
//! Let `A(V)` be the set of products of all arrangements of a multiset `V`
//! (`A(∅) = {1}`) and `P(M) = ∪_{V ⊆ M} A(V)`. A product-one arrangement of
//! `V + g` can be rotated to end in `g`, so `M + g` stays free in every order
//! iff `M` does and `g⁻¹ ∉ P(M)`. `P` grows strictly along a free chain,
//! which bounds the remaining depth by `|G| − |P(M)|`.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use rustc_hash::{FxHashMap, FxHashSet};

use super::{is_product_one, Budget, SearchConfig, SearchResult, ZeroSumError, UNORDERED_ORDER_CAP};
use crate::group::{Element, GroupLaw};

struct Dfs<'a, G: ?Sized> {
    group: &'a G,
    inverse: Vec<Element>,
    /// `A(V)` keyed by the sorted multiset `V`.
    arrangements: FxHashMap<Vec<u32>, FixedBitSet>,
    budget: &'a Budget,
    best: Vec<u32>,
}

impl<G: GroupLaw + ?Sized> Dfs<'_, G> {
    /// `A(V)` from `A(V − h)·h` over the distinct `h ∈ V`; every `V − h` must
    /// already be known.
    fn arrangement_set(&mut self, v: &[u32]) -> FixedBitSet {
        if let Some(a) = self.arrangements.get(v) {
            return a.clone();
        }
        let mut out = FixedBitSet::with_capacity(self.group.order());
        let mut last = None;
        for i in 0..v.len() {
            if last == Some(v[i]) {
                continue;
            }
            last = Some(v[i]);
            let mut rest = v.to_vec();
            rest.remove(i);
            let prev = self.arrangement_set(&rest);
            let h = Element(v[i]);
            for x in prev.ones() {
                out.insert(self.group.mul(Element(x as u32), h).index());
            }
        }
        self.arrangements.insert(v.to_vec(), out.clone());
        out
    }

    /// `subs` lists the distinct sub-multisets of `m` (including `∅`),
    /// `reach` is `P(m)`. Returns false once the budget is spent.
    fn walk(&mut self, m: &mut Vec<u32>, subs: &[Vec<u32>], reach: &FixedBitSet) -> bool {
        if !self.budget.tick() {
            return false;
        }
        if m.len() > self.best.len() {
            self.best = m.clone();
        }
        let n = self.group.order();
        let first = m.last().copied().unwrap_or(1).max(1);
        for g in first..n as u32 {
            let remaining = n - reach.count_ones(..);
            if m.len() + remaining <= self.best.len() {
                break;
            }
            if reach.contains(self.inverse[g as usize].index()) {
                continue;
            }
            let mut next_reach = reach.clone();
            let mut seen: FxHashSet<&[u32]> = subs.iter().map(|v| v.as_slice()).collect();
            let mut grown: Vec<Vec<u32>> = subs
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w.push(g);
                    w
                })
                .collect();
            grown.sort_by_key(Vec::len);
            grown.retain(|w| !seen.contains(w.as_slice()));
            for w in &grown {
                next_reach.union_with(&self.arrangement_set(w));
            }
            seen.extend(grown.iter().map(|v| v.as_slice()));
            let next_subs: Vec<Vec<u32>> = subs.iter().cloned().chain(grown.iter().cloned()).collect();
            drop(seen);
            m.push(g);
            let ok = self.walk(m, &next_subs, &next_reach);
            m.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Exact `D'(G)`: one more than the longest sequence with no nonempty
/// subsequence multiplying to 1 in any order.
pub fn davenport_unordered<G: GroupLaw + ?Sized>(
    group: &G,
    config: &SearchConfig,
) -> Result<SearchResult, ZeroSumError> {
    config.check_cap(group.order(), UNORDERED_ORDER_CAP)?;
    let start = Instant::now();
    let budget = Budget::new(config);
    let n = group.order();
    let mut empty_set = FixedBitSet::with_capacity(n);
    empty_set.insert(0);
    let mut dfs = Dfs {
        group,
        inverse: group.elements().map(|g| group.inv(g)).collect(),
        arrangements: FxHashMap::default(),
        budget: &budget,
        best: Vec::new(),
    };
    dfs.arrangements.insert(Vec::new(), empty_set.clone());
    let complete = dfs.walk(&mut Vec::new(), &[Vec::new()], &empty_set);
    Ok(SearchResult {
        value: dfs.best.len() + 1,
        witness: dfs.best.iter().map(|&g| Element(g)).collect(),
        states_explored: budget.states(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        exact: complete && !budget.aborted(),
    })
}

/// No nonempty sub-multiset has an arrangement multiplying to 1. Checks
/// every sub-multiset with `is_product_one`.
pub fn is_unordered_free<G: GroupLaw + ?Sized>(group: &G, seq: &[Element]) -> Result<bool, ZeroSumError> {
    let (terms, counts) = super::multiplicities(seq);
    let mut sub = vec![0u8; terms.len()];
    loop {
        // next sub-multiset in mixed radix
        let mut i = 0;
        while i < sub.len() && sub[i] == counts[i] {
            sub[i] = 0;
            i += 1;
        }
        if i == sub.len() {
            return Ok(true);
        }
        sub[i] += 1;
        let v: Vec<Element> = terms.iter().zip(&sub).flat_map(|(&t, &c)| std::iter::repeat_n(t, c as usize)).collect();
        if is_product_one(group, &v)? {
            return Ok(false);
        }
    }
}
