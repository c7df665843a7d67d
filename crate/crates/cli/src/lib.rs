//! Command-line front end for `davlab-core`: group info, Loewy lengths,
//! Davenport searches, published witnesses, the congruence oracle and
//! grid scans, with an append-only JSON-lines cache of every result.

pub mod cache;
pub mod commands;
pub mod load;
pub mod record;
pub mod scan;
