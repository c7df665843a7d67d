//! Zero-sum invariants and Loewy lengths of small explicit finite groups.
//!
//! * [`group`] builds multiplication tables from family presentations and
//!   provides subgroup machinery.
//! * [`jennings`] computes the Jennings (dimension subgroup) series, the
//!   Loewy polynomial and the Loewy length, and checks closed forms.
//! * [`zerosum`] computes ordered/unordered Davenport constants, `E(G)`
//!   and weighted variants by exhaustive memoized search.
//! * [`witnesses`] builds explicit extremal product-one-free sequences and
//!   the congruence/quadratic-residue oracles that certify them.

pub mod group;
pub mod jennings;
pub mod numtheory;
pub mod witnesses;
pub mod zerosum;
