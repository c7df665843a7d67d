//! Zero-sum invariants of small finite groups by exhaustive search.
//!
//! A sequence is a slice of [`Element`]s. Ordered product-one-freeness is
//! decided by the reach state of the sequence: the set of products of all
//! nonempty index-increasing subsequences. The reach state grows strictly
//! while the sequence stays free, so every search below is a longest path
//! in a finite DAG of states.

mod eg;
mod reach;
mod unordered;

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashSet;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Element, GroupError, GroupLaw};

pub use eg::{eg_invariant, eg_lower_witness, has_product_one_of_length};
pub use reach::{davenport_ordered, davenport_weighted, min_weight_set, weight_moves};
pub use unordered::{davenport_unordered, is_unordered_free};

pub const DEFAULT_MAX_STATES: u64 = 10_000_000;
pub const DEFAULT_MAX_TIME: Duration = Duration::from_secs(60);
pub const ORDERED_ORDER_CAP: usize = 64;
pub const UNORDERED_ORDER_CAP: usize = 16;
pub const EG_ORDER_CAP: usize = 8;
/// Longest sequence accepted by the arrangement verifiers.
pub const ARRANGEMENT_MAX_TERMS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZeroSumError {
    #[error("group of order {order} exceeds the search cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("sequence of length {len} exceeds the verifier limit {max}")]
    SequenceTooLong { len: usize, max: usize },
    #[error("invalid weight set: {0}")]
    InvalidWeights(String),
    #[error("search budget exhausted: {0}")]
    BudgetExceeded(String),
    #[error("the Olson–White bound applies only to non-cyclic groups")]
    CyclicGroup,
    #[error("sequence is not ordered product-one free")]
    NotFree,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Resource limits for one search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_states: u64,
    pub max_time: Duration,
    /// Overrides the per-invariant default order cap.
    pub order_cap: Option<usize>,
    /// Worker count for root-partitioned searches; `1` is sequential.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_states: DEFAULT_MAX_STATES, max_time: DEFAULT_MAX_TIME, order_cap: None, threads: 1 }
    }
}

impl SearchConfig {
    /// Defaults with `threads` read from `DAVLAB_THREADS`, else the
    /// available parallelism.
    pub fn from_env() -> Self {
        let threads = std::env::var("DAVLAB_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&t| t > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        SearchConfig { threads, ..SearchConfig::default() }
    }

    fn check_cap(&self, order: usize, default_cap: usize) -> Result<(), ZeroSumError> {
        let cap = self.order_cap.unwrap_or(default_cap);
        if order > cap {
            return Err(ZeroSumError::GroupTooLarge { order, cap });
        }
        Ok(())
    }
}

/// Outcome of an invariant search. `value` is exact when `exact` holds and a
/// lower bound otherwise; `witness` always has length `value − 1` and is
/// free in the sense of the invariant searched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub value: usize,
    pub witness: Vec<Element>,
    pub states_explored: u64,
    pub elapsed_ms: u64,
    pub exact: bool,
}

/// Shared state and time budget of one search.
pub(crate) struct Budget {
    states: std::sync::atomic::AtomicU64,
    max_states: u64,
    deadline: Instant,
    aborted: std::sync::atomic::AtomicBool,
}

impl Budget {
    pub(crate) fn new(config: &SearchConfig) -> Budget {
        Budget {
            states: 0.into(),
            max_states: config.max_states,
            deadline: Instant::now() + config.max_time,
            aborted: false.into(),
        }
    }

    /// Counts one expanded state; false once the budget is spent.
    pub(crate) fn tick(&self) -> bool {
        use std::sync::atomic::Ordering::Relaxed;
        if self.aborted.load(Relaxed) {
            return false;
        }
        let n = self.states.fetch_add(1, Relaxed) + 1;
        if n > self.max_states || (n.is_multiple_of(1024) && Instant::now() >= self.deadline) {
            self.aborted.store(true, Relaxed);
            return false;
        }
        true
    }

    pub(crate) fn states(&self) -> u64 {
        self.states.load(std::sync::atomic::Ordering::Relaxed).min(self.max_states)
    }

    pub(crate) fn aborted(&self) -> bool {
        self.aborted.load(std::sync::atomic::Ordering::Relaxed)
    }
}

/// Products of all nonempty index-increasing subsequences of a prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReachState {
    pub products: FixedBitSet,
}

impl ReachState {
    pub fn empty(order: usize) -> ReachState {
        ReachState { products: FixedBitSet::with_capacity(order) }
    }

    pub fn of<G: GroupLaw + ?Sized>(group: &G, seq: &[Element]) -> ReachState {
        seq.iter().fold(ReachState::empty(group.order()), |s, &g| reach_extend(group, &s, g))
    }

    pub fn contains_identity(&self) -> bool {
        self.products.contains(0)
    }

    pub fn len(&self) -> usize {
        self.products.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_clear()
    }
}

/// `S ∪ S·g ∪ {g}`
pub fn reach_extend<G: GroupLaw + ?Sized>(group: &G, s: &ReachState, g: Element) -> ReachState {
    let mut products = s.products.clone();
    for x in s.products.ones() {
        products.insert(group.mul(Element(x as u32), g).index());
    }
    products.insert(g.index());
    ReachState { products }
}

/// No nonempty index-ordered subsequence multiplies to 1.
pub fn is_ordered_free<G: GroupLaw + ?Sized>(group: &G, seq: &[Element]) -> bool {
    let mut s = ReachState::empty(group.order());
    for &g in seq {
        s = reach_extend(group, &s, g);
        if s.contains_identity() {
            return false;
        }
    }
    true
}

/// `⌈(|G|+1)/2⌉` for non-cyclic `G`. Cyclicity is decided by an element of
/// order `|G|`; the exponent alone does not decide it (`Q_12` has exponent 12).
pub fn olson_white_bound<G: GroupLaw + ?Sized>(group: &G) -> Result<usize, ZeroSumError> {
    if group.elements().any(|g| group.element_order(g) == group.order() as u64) {
        return Err(ZeroSumError::CyclicGroup);
    }
    Ok((group.order() + 2) / 2)
}

fn check_arrangement_len(seq: &[Element]) -> Result<(), ZeroSumError> {
    if seq.len() > ARRANGEMENT_MAX_TERMS {
        return Err(ZeroSumError::SequenceTooLong { len: seq.len(), max: ARRANGEMENT_MAX_TERMS });
    }
    Ok(())
}

/// Distinct terms with multiplicities, in first-occurrence order.
pub(crate) fn multiplicities(seq: &[Element]) -> (Vec<Element>, Vec<u8>) {
    let mut terms: Vec<Element> = Vec::new();
    let mut counts: Vec<u8> = Vec::new();
    for &g in seq {
        match terms.iter().position(|&t| t == g) {
            Some(i) => counts[i] += 1,
            None => {
                terms.push(g);
                counts.push(1);
            }
        }
    }
    (terms, counts)
}

/// Some arrangement of all terms multiplies to 1. The empty sequence counts
/// as product-one.
pub fn is_product_one<G: GroupLaw + ?Sized>(group: &G, seq: &[Element]) -> Result<bool, ZeroSumError> {
    check_arrangement_len(seq)?;
    let (terms, counts) = multiplicities(seq);
    // DFS over (remaining counts, running product)
    let mut seen: FxHashSet<(Vec<u8>, Element)> = FxHashSet::default();
    let mut stack = vec![(counts, Element::IDENTITY)];
    while let Some((rest, acc)) = stack.pop() {
        if rest.iter().all(|&c| c == 0) {
            if acc.is_identity() {
                return Ok(true);
            }
            continue;
        }
        for i in 0..terms.len() {
            if rest[i] > 0 {
                let mut next = rest.clone();
                next[i] -= 1;
                let prod = group.mul(acc, terms[i]);
                if seen.insert((next.clone(), prod)) {
                    stack.push((next, prod));
                }
            }
        }
    }
    Ok(false)
}

/// Product-one, and no proper nonempty index-ordered subsequence multiplies
/// to 1.
pub fn is_minimal_product_one<G: GroupLaw + ?Sized>(group: &G, seq: &[Element]) -> Result<bool, ZeroSumError> {
    if seq.is_empty() || !is_product_one(group, seq)? {
        return Ok(false);
    }
    // `partial`: products of nonempty subsequences of the prefix other than
    // the whole prefix; `full`: product of the whole prefix
    let mut partial = FixedBitSet::with_capacity(group.order());
    let mut full = seq[0];
    for &g in &seq[1..] {
        let mut next = partial.clone();
        for x in partial.ones() {
            next.insert(group.mul(Element(x as u32), g).index());
        }
        next.insert(full.index());
        next.insert(g.index());
        partial = next;
        full = group.mul(full, g);
    }
    Ok(!partial.contains(0))
}
