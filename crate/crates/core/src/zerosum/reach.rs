//! Longest-path search over reach states for `D(G)` and `D_A(G)`.
//!
//! `f(S) = 0` if every move hits 1, else `max_g 1 + f(extend(S, g))`, memoized
//! on `S`. Since `S` grows strictly, `f(S) ≤ |G| − 1 − |S|`; a move reaching
//! that bound ends the scan of its siblings.

use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{Budget, SearchConfig, SearchResult, ZeroSumError, ORDERED_ORDER_CAP};
use crate::group::{power, Element, GroupLaw};

/// Bit set over element indices stored inline in `W` words.
type Bits<const W: usize> = [u64; W];

#[inline]
fn set<const W: usize>(b: &mut Bits<W>, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

#[inline]
fn get<const W: usize>(b: &Bits<W>, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn count<const W: usize>(b: &Bits<W>) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn for_each_one<const W: usize>(b: &Bits<W>, mut f: impl FnMut(usize)) {
    for (k, &w) in b.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let t = w.trailing_zeros() as usize;
            f(k * 64 + t);
            w &= w - 1;
        }
    }
}

/// Per-term multipliers: choosing term `g` multiplies by any of `moves[g]`.
/// `D(G)` uses `moves[g] = [g]`.
struct Walker<'a, G: ?Sized, const W: usize> {
    group: &'a G,
    moves: &'a [Vec<Element>],
    n: usize,
    memo: FxHashMap<Bits<W>, u16>,
    budget: &'a Budget,
    path: Vec<Element>,
    best: Vec<Element>,
}

impl<'a, G: GroupLaw + ?Sized, const W: usize> Walker<'a, G, W> {
    fn new(group: &'a G, moves: &'a [Vec<Element>], budget: &'a Budget) -> Self {
        Walker {
            group,
            moves,
            n: group.order(),
            memo: FxHashMap::default(),
            budget,
            path: Vec::new(),
            best: Vec::new(),
        }
    }

    /// `None` when the extension contains 1.
    fn extend(&self, s: &Bits<W>, g: usize) -> Option<Bits<W>> {
        let mut t = *s;
        for &m in &self.moves[g] {
            if m.is_identity() {
                return None;
            }
            set(&mut t, m.index());
            for_each_one(s, |x| set(&mut t, self.group.mul(Element(x as u32), m).index()));
        }
        (!get(&t, 0)).then_some(t)
    }

    /// Exact `f(s)`, or `None` once the budget is spent.
    fn solve(&mut self, s: &Bits<W>) -> Option<u16> {
        if let Some(&v) = self.memo.get(s) {
            self.note(s, v);
            return Some(v);
        }
        if !self.budget.tick() {
            return None;
        }
        let bound = (self.n - 1 - count(s)) as u16;
        let mut best = 0u16;
        for g in 0..self.n {
            if best == bound {
                break;
            }
            if let Some(t) = self.extend(s, g) {
                self.path.push(Element(g as u32));
                let v = self.solve(&t);
                self.path.pop();
                best = best.max(v? + 1);
            }
        }
        self.memo.insert(*s, best);
        self.note(s, best);
        Some(best)
    }

    /// Keeps the longest free sequence seen so far, for budget cut-offs.
    fn note(&mut self, s: &Bits<W>, v: u16) {
        if self.path.len() + v as usize > self.best.len() {
            let mut full = self.path.clone();
            full.extend(self.reconstruct(s));
            self.best = full;
        }
    }

    /// Lexicographically least optimal continuation from `s`, read off the
    /// memo of a completed subtree.
    fn reconstruct(&self, s: &Bits<W>) -> Vec<Element> {
        let mut out = Vec::new();
        let mut s = *s;
        while let Some(&v) = self.memo.get(&s) {
            if v == 0 {
                break;
            }
            let step = (0..self.n).find_map(|g| {
                let t = self.extend(&s, g)?;
                (self.memo.get(&t) == Some(&(v - 1))).then_some((g, t))
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

fn search<G, const W: usize>(group: &G, moves: &[Vec<Element>], config: &SearchConfig) -> SearchResult
where
    G: GroupLaw + Sync + ?Sized,
{
    let start = Instant::now();
    let budget = Budget::new(config);
    let empty = [0u64; W];
    let (best_len, witness) = if config.threads <= 1 {
        let mut w = Walker::<G, W>::new(group, moves, &budget);
        match w.solve(&empty) {
            Some(v) => (v as usize, w.reconstruct(&empty)),
            None => (w.best.len(), w.best),
        }
    } else {
        // root partition with worker-local memo tables
        let per_root = |g: usize| -> (usize, Vec<Element>, bool) {
            let mut w = Walker::<G, W>::new(group, moves, &budget);
            let Some(t) = w.extend(&empty, g) else {
                return (0, Vec::new(), true);
            };
            w.path.push(Element(g as u32));
            let solved = w.solve(&t);
            w.path.pop();
            match solved {
                Some(v) => {
                    let mut seq = vec![Element(g as u32)];
                    seq.extend(w.reconstruct(&t));
                    (v as usize + 1, seq, true)
                }
                None => (w.best.len(), w.best, false),
            }
        };
        let run = || (0..group.order()).into_par_iter().map(per_root).collect::<Vec<_>>();
        let roots = match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
        // first root of maximal length, as in the sequential order
        let (len, seq, _) =
            roots.into_iter().reduce(|a, b| if b.0 > a.0 { b } else { a }).unwrap_or((0, Vec::new(), true));
        (len, seq)
    };
    SearchResult {
        value: best_len + 1,
        witness,
        states_explored: budget.states(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        exact: !budget.aborted(),
    }
}

fn dispatch<G: GroupLaw + Sync + ?Sized>(group: &G, moves: &[Vec<Element>], config: &SearchConfig) -> SearchResult {
    match group.order().div_ceil(64) {
        0 | 1 => search::<G, 1>(group, moves, config),
        2 => search::<G, 2>(group, moves, config),
        3 | 4 => search::<G, 4>(group, moves, config),
        5..=8 => search::<G, 8>(group, moves, config),
        9..=16 => search::<G, 16>(group, moves, config),
        17..=32 => search::<G, 32>(group, moves, config),
        _ => search::<G, 64>(group, moves, config),
    }
}

/// Largest order `dispatch` can hold inline.
const INLINE_ORDER_LIMIT: usize = 64 * 64;

fn check_inline(order: usize) -> Result<(), ZeroSumError> {
    if order > INLINE_ORDER_LIMIT {
        return Err(ZeroSumError::GroupTooLarge { order, cap: INLINE_ORDER_LIMIT });
    }
    Ok(())
}

/// Exact ordered Davenport constant `D(G)`.
pub fn davenport_ordered<G: GroupLaw + Sync + ?Sized>(
    group: &G,
    config: &SearchConfig,
) -> Result<SearchResult, ZeroSumError> {
    config.check_cap(group.order(), ORDERED_ORDER_CAP)?;
    check_inline(group.order())?;
    let moves: Vec<Vec<Element>> = group.elements().map(|g| vec![g]).collect();
    Ok(dispatch(group, &moves, config))
}

/// Distinct nonidentity-or-identity powers `g^a`, `a ∈ A`, per term `g`.
/// Errors unless `A` is a nonempty subset of `[1, exp(G) − 1]`.
pub fn weight_moves<G: GroupLaw + ?Sized>(group: &G, weights: &[u64]) -> Result<Vec<Vec<Element>>, ZeroSumError> {
    let exp = group.exponent();
    if weights.is_empty() {
        return Err(ZeroSumError::InvalidWeights("A must be nonempty".into()));
    }
    if let Some(&a) = weights.iter().find(|&&a| a == 0 || a >= exp) {
        return Err(ZeroSumError::InvalidWeights(format!("{a} ∉ [1, {}]", exp.saturating_sub(1))));
    }
    Ok(group
        .elements()
        .map(|g| {
            let mut m: Vec<Element> = weights.iter().map(|&a| power(group, g, a)).collect();
            m.sort();
            m.dedup();
            m
        })
        .collect())
}

/// `D_A(G)`: terms may be raised to any `a ∈ A` before multiplying in
/// index order.
pub fn davenport_weighted<G: GroupLaw + Sync + ?Sized>(
    group: &G,
    weights: &[u64],
    config: &SearchConfig,
) -> Result<SearchResult, ZeroSumError> {
    config.check_cap(group.order(), ORDERED_ORDER_CAP)?;
    check_inline(group.order())?;
    let moves = weight_moves(group, weights)?;
    Ok(dispatch(group, &moves, config))
}

/// `min |A|` over nonempty `A ⊆ [1, exp(G) − 1]` with `D_A(G) ≤ k`, with
/// `None` when no such `A` exists. Errors if a search is cut by the budget.
pub fn min_weight_set<G: GroupLaw + Sync + ?Sized>(
    group: &G,
    k: usize,
    config: &SearchConfig,
) -> Result<Option<usize>, ZeroSumError> {
    let exp = group.exponent();
    if exp < 2 {
        return Ok(None);
    }
    let universe: Vec<u64> = (1..exp).collect();
    if universe.len() > 20 {
        return Err(ZeroSumError::InvalidWeights(format!("exponent {exp} too large for subset search")));
    }
    let mut subsets: Vec<u32> = (1..1u32 << universe.len()).collect();
    subsets.sort_by_key(|m| (m.count_ones(), *m));
    for mask in subsets {
        let weights: Vec<u64> =
            universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        let result = davenport_weighted(group, &weights, config)?;
        if !result.exact && result.value <= k {
            // a lower bound below k decides nothing
            return Err(ZeroSumError::BudgetExceeded(format!("search for A = {weights:?}")));
        }
        if result.value <= k {
            return Ok(Some(weights.len()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build, FiniteGroup};
    use crate::zerosum::is_ordered_free;

    fn group(s: &str) -> FiniteGroup {
        build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn small_values() {
        let cfg = SearchConfig::default();
        let r = davenport_ordered(&group("q[8]"), &cfg).unwrap();
        assert_eq!(r.value, 5);
        assert!(r.exact);
        assert_eq!(r.witness.len(), 4);
        assert!(is_ordered_free(&group("q[8]"), &r.witness));
        assert_eq!(davenport_ordered(&group("c[1]"), &cfg).unwrap().value, 1);
        for n in 2..=12 {
            assert_eq!(davenport_ordered(&group(&format!("c[{n}]")), &cfg).unwrap().value, n as usize);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = SearchConfig::default();
        let par = SearchConfig { threads: 4, ..SearchConfig::default() };
        for s in ["q[8]", "d[6]", "q[12]", "ab[2,4]"] {
            let g = group(s);
            let a = davenport_ordered(&g, &seq).unwrap();
            let b = davenport_ordered(&g, &par).unwrap();
            assert_eq!((a.value, &a.witness), (b.value, &b.witness), "{s}");
        }
    }

    #[test]
    fn budget_cutoff_is_flagged() {
        let cfg = SearchConfig { max_states: 5, ..SearchConfig::default() };
        let g = group("sd[16]");
        let r = davenport_ordered(&g, &cfg).unwrap();
        assert!(!r.exact);
        assert_eq!(r.witness.len() + 1, r.value);
        assert!(is_ordered_free(&g, &r.witness));
    }

    #[test]
    fn caps_and_weights() {
        let cfg = SearchConfig::default();
        assert!(matches!(davenport_ordered(&group("c[65]"), &cfg), Err(ZeroSumError::GroupTooLarge { .. })));
        let c5 = group("c[5]");
        assert_eq!(davenport_weighted(&c5, &[1, 4], &cfg).unwrap().value, 3);
        assert!(davenport_weighted(&c5, &[5], &cfg).is_err());
        assert!(davenport_weighted(&c5, &[], &cfg).is_err());
        assert_eq!(min_weight_set(&c5, 3, &cfg), Ok(Some(2)));
        assert_eq!(min_weight_set(&c5, 5, &cfg), Ok(Some(1)));
        assert_eq!(min_weight_set(&c5, 1, &cfg), Ok(None));
        // involutions die under 2 and 3-cycles under 3, so nothing is free
        let s3 = group("d[6]");
        assert_eq!(min_weight_set(&s3, 1, &cfg), Ok(Some(2)));
        assert_eq!(davenport_weighted(&s3, &[2, 3], &cfg).unwrap().value, 1);
        let tight = SearchConfig { max_states: 1, ..SearchConfig::default() };
        assert!(matches!(min_weight_set(&group("q[8]"), 2, &tight), Err(ZeroSumError::BudgetExceeded(_))));
    }
}
