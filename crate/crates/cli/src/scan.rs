//! Parameter-grid scans comparing verified lower bounds on `D(G)` with the
//! available upper bounds.
//!
//! Upper bounds: `L(G)` for p-groups, `⌈(|G|+1)/2⌉` for non-cyclic groups,
//! and an exact search value. Lower bounds: an exact search value and
//! `length + 1` of a witness whose freeness was checked here. A row is
//! CONFIRMED when the bounds meet, CONSISTENT when they do not, and REFUTED
//! when some computed fact contradicts a proven statement or `D = L`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use davlab_core::group::{enumerate_p_groups, Family, GroupDescriptor};
use davlab_core::jennings::{loewy_formula, loewy_length, JenningsError};
use davlab_core::numtheory::{gcd, is_prime};
use davlab_core::witnesses::{congruence_search, CongruenceSystem, WitnessOptions};
use davlab_core::zerosum::{davenport_ordered, is_ordered_free, SearchConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::load::{class_two_in_scope, construct, table, Loaded, Theorem};
use crate::record::{CacheKey, Invariant, ResultRecord, Value, TOOL_VERSION};

/// Largest grid a scan accepts.
pub const MAX_ROWS: usize = 2000;
/// Default largest order for family enumeration.
pub const DEFAULT_MAX_ORDER: u64 = 729;
/// Default largest order for exact `D` searches inside a scan.
pub const DEFAULT_SEARCH_MAX_ORDER: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Confirmed,
    Consistent,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRow {
    pub descriptor: String,
    pub order: u64,
    pub loewy: Option<u64>,
    pub loewy_formula: Option<u64>,
    pub d_exact: Option<u64>,
    pub witness_len: Option<u64>,
    pub witness_free: Option<bool>,
    pub oracle: Option<bool>,
    pub lower: Option<u64>,
    pub lower_source: String,
    pub upper: Option<u64>,
    pub upper_source: String,
    pub status: Status,
    pub notes: Vec<String>,
    pub cache_hits: u32,
    pub computed: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanOutput {
    pub version: String,
    pub rows: Vec<ScanRow>,
    pub confirmed: usize,
    pub consistent: usize,
    pub refuted: usize,
    pub elapsed_ms: u64,
}

/// `name=v1,v2` or `name=lo..hi` (either end optional), joined by `;`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamRanges {
    ranges: BTreeMap<String, Vec<(u64, u64)>>,
}

impl FromStr for ParamRanges {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ranges: BTreeMap<String, Vec<(u64, u64)>> = BTreeMap::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, spec) = part.split_once('=').ok_or_else(|| anyhow!("expected name=values in `{part}`"))?;
            let entry = ranges.entry(name.trim().to_string()).or_default();
            for item in spec.split(',').map(str::trim) {
                let parse = |t: &str, default: u64| -> Result<u64> {
                    if t.is_empty() {
                        Ok(default)
                    } else {
                        t.parse().with_context(|| format!("bad number `{t}` in `{part}`"))
                    }
                };
                let range = match item.split_once("..") {
                    Some((lo, hi)) => {
                        let hi = hi.strip_prefix('=').unwrap_or(hi);
                        (parse(lo, 0)?, parse(hi, u64::MAX)?)
                    }
                    None => {
                        let v = parse(item, 0)?;
                        (v, v)
                    }
                };
                entry.push(range);
            }
        }
        Ok(ParamRanges { ranges })
    }
}

impl ParamRanges {
    fn allows(&self, name: &str, v: u64) -> bool {
        self.ranges.get(name).is_none_or(|rs| rs.iter().any(|&(lo, hi)| lo <= v && v <= hi))
    }

    fn upper(&self, name: &str) -> Option<u64> {
        self.ranges.get(name).map(|rs| rs.iter().map(|r| r.1).max().unwrap_or(0))
    }

    /// Primes admitted by the `p` range, `[3]` when unconstrained.
    fn primes(&self) -> Vec<u64> {
        match self.upper("p") {
            None => vec![3],
            Some(hi) => (2..=hi.min(1000)).filter(|&p| is_prime(p) && self.allows("p", p)).collect(),
        }
    }

    pub fn admits(&self, d: &GroupDescriptor) -> bool {
        let order = d.expected_order().unwrap_or(u64::MAX);
        self.allows("order", order) && d.params().iter().all(|(n, v)| self.allows(n, *v))
    }
}

/// The grid of the families with published values of `D`.
pub fn proven_preset() -> Vec<GroupDescriptor> {
    let mut out: Vec<GroupDescriptor> = [
        "d[8]", "d[16]", "d[32]", "q[8]", "q[16]", "q[32]", "sd[16]", "sd[32]", "m2[16]", "m2[32]", "q[12]", "q[20]",
        "q[24]", "q[28]", "sd[24]", "sd[40]",
    ]
    .iter()
    .map(|s| s.parse().expect("preset descriptor"))
    .collect();
    for p in [3, 5] {
        out.extend(enumerate_p_groups(Family::G2, p, DEFAULT_MAX_ORDER));
        out.extend(enumerate_p_groups(Family::G1, p, DEFAULT_MAX_ORDER).into_iter().filter(class_two_in_scope));
    }
    out.extend(enumerate_p_groups(Family::G3, 3, 2187).into_iter().filter(class_two_in_scope));
    out
}

/// Descriptors of `families` admitted by `ranges`.
pub fn grid(families: &[Family], ranges: &ParamRanges) -> Vec<GroupDescriptor> {
    let max_order = ranges.upper("order").unwrap_or(DEFAULT_MAX_ORDER).min(1 << 24);
    let mut out = Vec::new();
    for &f in families {
        let primes = if f.is_dihedral_type() { vec![2] } else { ranges.primes() };
        for p in primes {
            out.extend(enumerate_p_groups(f, p, max_order).into_iter().filter(|d| ranges.admits(d)));
        }
    }
    out
}

pub struct ScanOptions {
    pub descriptors: Vec<GroupDescriptor>,
    pub search_max_order: usize,
    pub explore: bool,
    pub config: SearchConfig,
}

fn non_cyclic(d: &GroupDescriptor) -> bool {
    match d {
        GroupDescriptor::Cyclic { .. } => false,
        GroupDescriptor::AbelianProduct { factors } => {
            let nontrivial: Vec<u64> = factors.iter().copied().filter(|&n| n > 1).collect();
            nontrivial.iter().enumerate().any(|(i, &a)| nontrivial[i + 1..].iter().any(|&b| gcd(a, b) > 1))
        }
        _ => true,
    }
}

/// Looks up exact records in a shared cache and collects new ones.
struct RowCache<'a> {
    cache: Option<&'a Cache>,
    descriptor: String,
    fresh: Vec<ResultRecord>,
    hits: u32,
}

impl RowCache<'_> {
    fn get(&mut self, invariant: Invariant) -> Option<ResultRecord> {
        let key = CacheKey { descriptor: self.descriptor.clone(), invariant, weight_set: None };
        let r = self.cache.and_then(|c| c.get_exact(&key)).cloned();
        self.hits += u32::from(r.is_some());
        r
    }

    fn put(&mut self, r: ResultRecord) {
        self.fresh.push(r);
    }
}

fn evaluate(d: &GroupDescriptor, cache: Option<&Cache>, opts: &ScanOptions) -> Result<(ScanRow, Vec<ResultRecord>)> {
    let name = d.to_string();
    let order = d.expected_order().ok_or_else(|| anyhow!("{name}: order overflows"))?;
    let mut rc = RowCache { cache, descriptor: name.clone(), fresh: Vec::new(), hits: 0 };
    let mut loaded: Option<Loaded> = None;
    let mut notes = Vec::new();
    let load = |slot: &mut Option<Loaded>| -> Result<()> {
        if slot.is_none() {
            *slot = Some(Loaded::load(d)?);
        }
        Ok(())
    };

    let loewy = match d.prime() {
        None => None,
        Some(p) => Some(match rc.get(Invariant::L) {
            Some(r) => r.value.as_int().unwrap_or(0),
            None => {
                let t = Instant::now();
                load(&mut loaded)?;
                let l = loewy_length(loaded.as_ref().unwrap().get(), p)?;
                rc.put(ResultRecord::new(&name, Invariant::L, Value::Int(l), true, t.elapsed().as_millis() as u64));
                l
            }
        }),
    };
    let loewy_formula = match rc.get(Invariant::LFormula) {
        Some(r) => r.value.as_int(),
        None => match loewy_formula(d) {
            Ok(f) => {
                rc.put(ResultRecord::new(&name, Invariant::LFormula, Value::Int(f), true, 0));
                Some(f)
            }
            Err(JenningsError::NoFormula(_)) => None,
            Err(e) => return Err(e.into()),
        },
    };

    let mut d_exact = None;
    let mut partial = None;
    if order as usize <= opts.search_max_order {
        match rc.get(Invariant::D) {
            Some(r) => d_exact = r.value.as_int(),
            None => {
                let g = table(d)?;
                let r = davenport_ordered(&g, &opts.config)?;
                let mut rec = ResultRecord::new(&name, Invariant::D, Value::Int(r.value as u64), r.exact, r.elapsed_ms);
                rec.witness = Some(r.witness.iter().map(|&x| g.label(x).to_string()).collect());
                rc.put(rec);
                if r.exact {
                    d_exact = Some(r.value as u64);
                } else {
                    partial = Some(r.value as u64);
                    notes.push("search budget exhausted".to_string());
                }
            }
        }
    }

    let theorem = Theorem::for_descriptor(d);
    let in_scope = class_two_in_scope(d);
    let want_witness = theorem.is_some() && (in_scope || opts.explore);
    let (mut witness_len, mut witness_free) = (None, None);
    if want_witness {
        match rc.get(Invariant::WitnessCheck) {
            Some(r) => {
                witness_len = r.witness.as_ref().map(|w| w.len() as u64);
                witness_free = r.value.as_bool();
            }
            None => {
                let t = Instant::now();
                load(&mut loaded)?;
                let g = loaded.as_ref().unwrap().get();
                let spec = construct(g, theorem.unwrap(), opts.explore)?;
                let seq = spec.sequence();
                let free = is_ordered_free(g, &seq);
                let mut rec = ResultRecord::new(
                    &name,
                    Invariant::WitnessCheck,
                    Value::Bool(free),
                    true,
                    t.elapsed().as_millis() as u64,
                );
                rec.witness = Some(seq.iter().map(|&x| g.normal_form().label(x)).collect());
                rc.put(rec);
                witness_len = Some(seq.len() as u64);
                witness_free = Some(free);
            }
        }
    }
    let has_oracle = want_witness && matches!(d, GroupDescriptor::G1 { .. } | GroupDescriptor::G3 { .. });
    let oracle = if has_oracle {
        match rc.get(Invariant::OracleCheck) {
            Some(r) => r.value.as_bool(),
            None => {
                let sys = CongruenceSystem::for_descriptor(d, WitnessOptions::default())?;
                match congruence_search(&sys) {
                    Ok(r) => {
                        rc.put(ResultRecord::new(&name, Invariant::OracleCheck, Value::Bool(r.only_trivial), true, 0));
                        Some(r.only_trivial)
                    }
                    Err(e) => {
                        notes.push(format!("oracle skipped: {e}"));
                        None
                    }
                }
            }
        }
    } else {
        None
    };

    // bounds
    let mut uppers: Vec<(u64, &str)> = Vec::new();
    if let Some(l) = loewy {
        uppers.push((l, "loewy"));
    }
    if loewy.is_none() && non_cyclic(d) {
        uppers.push(((order + 2) / 2, "olson_white"));
    }
    if let Some(v) = d_exact {
        uppers.push((v, "search"));
    }
    let mut lowers: Vec<(u64, &str)> = Vec::new();
    if let Some(v) = d_exact {
        lowers.push((v, "search"));
    }
    if let (Some(len), Some(true)) = (witness_len, witness_free) {
        lowers.push((len + 1, "witness"));
    }
    if let Some(v) = partial {
        lowers.push((v, "partial_search"));
    }
    let upper = uppers.iter().min_by_key(|u| u.0).copied();
    let lower = lowers.iter().max_by_key(|l| l.0).copied();

    let mut refuted = Vec::new();
    if let (Some(l), Some(f)) = (loewy, loewy_formula) {
        if l != f {
            refuted.push(format!("closed form {f} ≠ M-series value {l}"));
        }
    }
    let proven = theorem.is_some() && in_scope;
    if proven && witness_free == Some(false) {
        refuted.push("published witness is not free".into());
    }
    if proven && oracle == Some(false) {
        refuted.push("congruence system has a nontrivial solution".into());
    }
    if let (Some(o), Some(f)) = (oracle, witness_free) {
        if in_scope && o != f {
            refuted.push("oracle and group verdicts differ".into());
        }
    }
    if let (Some(dv), Some(l)) = (d_exact, loewy) {
        if dv != l {
            refuted.push(format!("D = {dv} ≠ L = {l}"));
        }
    }
    if let (Some(lo), Some(up)) = (lower, upper) {
        if lo.0 > up.0 {
            refuted.push(format!("lower bound {} exceeds upper bound {}", lo.0, up.0));
        }
    }
    let status = if !refuted.is_empty() {
        Status::Refuted
    } else if matches!((lower, upper), (Some(lo), Some(up)) if lo.0 == up.0) {
        Status::Confirmed
    } else {
        Status::Consistent
    };
    notes.extend(refuted);
    let computed = rc.fresh.len() as u32;
    let row = ScanRow {
        descriptor: name,
        order,
        loewy,
        loewy_formula,
        d_exact,
        witness_len,
        witness_free,
        oracle,
        lower: lower.map(|l| l.0),
        lower_source: lower.map_or("none", |l| l.1).to_string(),
        upper: upper.map(|u| u.0),
        upper_source: upper.map_or("none", |u| u.1).to_string(),
        status,
        notes,
        cache_hits: rc.hits,
        computed,
    };
    Ok((row, rc.fresh))
}

/// Evaluates every row (in parallel), then appends new records in row order.
pub fn scan(cache: Option<&mut Cache>, opts: &ScanOptions) -> Result<ScanOutput> {
    let start = Instant::now();
    if opts.descriptors.len() > MAX_ROWS {
        bail!("grid of {} rows exceeds the limit {MAX_ROWS}", opts.descriptors.len());
    }
    if opts.descriptors.is_empty() {
        bail!("the grid is empty");
    }
    let shared = cache.as_deref();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.config.threads.max(1)).build()?;
    let row_opts = ScanOptions {
        descriptors: Vec::new(),
        search_max_order: opts.search_max_order,
        explore: opts.explore,
        config: SearchConfig { threads: 1, ..opts.config.clone() },
    };
    let results: Vec<Result<(ScanRow, Vec<ResultRecord>)>> =
        pool.install(|| opts.descriptors.par_iter().map(|d| evaluate(d, shared, &row_opts)).collect());
    let mut rows = Vec::with_capacity(results.len());
    let mut fresh = Vec::new();
    for (d, r) in opts.descriptors.iter().zip(results) {
        let (row, recs) = r.with_context(|| format!("row {d}"))?;
        rows.push(row);
        fresh.extend(recs);
    }
    if let Some(c) = cache {
        for r in fresh {
            c.put(r)?;
        }
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    Ok(ScanOutput {
        version: TOOL_VERSION.into(),
        confirmed: count(Status::Confirmed),
        consistent: count(Status::Consistent),
        refuted: count(Status::Refuted),
        rows,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn render_table(out: &ScanOutput) -> String {
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let mut s = format!(
        "{:<18} {:>6} {:>5} {:>5} {:>5} {:>10} {:>10}  {}\n",
        "descriptor", "order", "L", "Lf", "D", "lower", "upper", "status"
    );
    for r in &out.rows {
        s += &format!(
            "{:<18} {:>6} {:>5} {:>5} {:>5} {:>10} {:>10}  {:?}{}\n",
            r.descriptor,
            r.order,
            opt(r.loewy),
            opt(r.loewy_formula),
            opt(r.d_exact),
            format!("{}:{}", opt(r.lower), r.lower_source),
            format!("{}:{}", opt(r.upper), r.upper_source),
            r.status,
            if r.notes.is_empty() { String::new() } else { format!("  ({})", r.notes.join("; ")) },
        );
    }
    s += &format!(
        "{} rows: {} confirmed, {} consistent, {} refuted ({} ms)\n",
        out.rows.len(),
        out.confirmed,
        out.consistent,
        out.refuted,
        out.elapsed_ms
    );
    s
}

pub fn render_csv(out: &ScanOutput) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "descriptor",
        "order",
        "L",
        "L_formula",
        "D",
        "witness_len",
        "witness_free",
        "oracle",
        "lower",
        "lower_source",
        "upper",
        "upper_source",
        "status",
        "notes",
    ])?;
    let opt = |v: Option<u64>| v.map_or(String::new(), |v| v.to_string());
    let optb = |v: Option<bool>| v.map_or(String::new(), |v| v.to_string());
    for r in &out.rows {
        w.write_record([
            r.descriptor.clone(),
            r.order.to_string(),
            opt(r.loewy),
            opt(r.loewy_formula),
            opt(r.d_exact),
            opt(r.witness_len),
            optb(r.witness_free),
            optb(r.oracle),
            opt(r.lower),
            r.lower_source.clone(),
            opt(r.upper),
            r.upper_source.clone(),
            format!("{:?}", r.status).to_uppercase(),
            r.notes.join("; "),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
