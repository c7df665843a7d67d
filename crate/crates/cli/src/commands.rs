//! The single-descriptor subcommands. Each returns a [`Report`] holding the
//! text rendering, the JSON document and whether every assertion held.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use davlab_core::group::{commutator_with_whole, Element, GroupDescriptor, Subgroup};
use davlab_core::jennings::{jennings_data, loewy_formula};
use davlab_core::witnesses::{congruence_search, CongruenceSystem, OracleReport, WitnessOptions};
use davlab_core::zerosum::{
    davenport_ordered, davenport_unordered, davenport_weighted, eg_invariant, is_ordered_free, SearchConfig,
    SearchResult, ZeroSumError,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cache::Cache;
use crate::load::{class_two_in_scope, construct, table, Loaded, Theorem};
use crate::record::{run_length, Bounds, CacheKey, Invariant, Output, ResultRecord, Value, TOOL_VERSION};

/// Shared state of one invocation.
pub struct Ctx {
    /// `None` with `--no-cache`.
    pub cache: Option<Cache>,
    pub config: SearchConfig,
    pub explore: bool,
}

impl Ctx {
    fn lookup(&self, descriptor: &str, invariant: Invariant, weights: Option<&[u64]>) -> Option<ResultRecord> {
        let key = CacheKey { descriptor: descriptor.to_string(), invariant, weight_set: weights.map(<[u64]>::to_vec) };
        self.cache.as_ref()?.get_exact(&key).cloned()
    }

    fn store(&mut self, record: ResultRecord) -> Result<()> {
        match self.cache.as_mut() {
            Some(c) => c.put(record),
            None => Ok(()),
        }
    }
}

pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    /// False when an assertion failed; the process then exits nonzero.
    pub ok: bool,
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn output_report(out: Output, text: String, ok: bool) -> Result<Report> {
    Ok(Report { json: serde_json::to_value(&out)?, text, ok })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorOrder {
    pub name: String,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoOutput {
    pub descriptor: String,
    pub family: String,
    pub order: u64,
    pub exponent: u64,
    pub center_size: u64,
    pub derived_size: u64,
    pub nilpotency_class: Option<u64>,
    pub prime: Option<u64>,
    pub abelian: bool,
    pub generators: Vec<GeneratorOrder>,
    pub version: String,
}

/// Structure constants computed from the named generators.
pub fn info(d: &GroupDescriptor) -> Result<Report> {
    let loaded = Loaded::load(d)?;
    let g = loaded.get();
    let n = g.order();
    let named = g.normal_form().generators().to_vec();
    let gens: Vec<Element> = named.iter().map(|&(_, e)| e).collect();
    let center_size = g.elements().filter(|&x| gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x))).count() as u64;
    let whole = Subgroup::whole(n);
    let derived = commutator_with_whole(g, &whole, &gens);
    let mut class = Some(0u64);
    let mut term = whole;
    while !term.is_trivial() {
        let next = commutator_with_whole(g, &term, &gens);
        if next == term {
            class = None;
            break;
        }
        term = next;
        class = class.map(|c| c + 1);
    }
    let out = InfoOutput {
        descriptor: d.to_string(),
        family: d.family().name().to_string(),
        order: n as u64,
        exponent: g.exponent(),
        center_size,
        derived_size: derived.size() as u64,
        nilpotency_class: class,
        prime: d.prime(),
        abelian: derived.is_trivial(),
        generators: named
            .iter()
            .map(|(name, e)| GeneratorOrder { name: name.clone(), order: g.element_order(*e) })
            .collect(),
        version: TOOL_VERSION.to_string(),
    };
    let mut text = String::new();
    writeln!(text, "{} ({})", out.descriptor, out.family)?;
    writeln!(text, "  order            {}", out.order)?;
    writeln!(text, "  exponent         {}", out.exponent)?;
    writeln!(text, "  |Z(G)|           {}", out.center_size)?;
    writeln!(text, "  |[G,G]|          {}", out.derived_size)?;
    match out.nilpotency_class {
        Some(c) => writeln!(text, "  nilpotency class {c}")?,
        None => writeln!(text, "  nilpotency class none (not nilpotent)")?,
    }
    let orders: Vec<String> = out.generators.iter().map(|g| format!("o({})={}", g.name, g.order)).collect();
    writeln!(text, "  generators       {}", orders.join(" "))?;
    Ok(Report { json: serde_json::to_value(&out)?, text, ok: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LoewyMethod {
    Direct,
    Formula,
    Both,
}

pub fn loewy(ctx: &mut Ctx, d: &GroupDescriptor, method: LoewyMethod) -> Result<Report> {
    let start = Instant::now();
    let name = d.to_string();
    let p = d.prime().ok_or_else(|| anyhow!("{name} is not a p-group"))?;
    let mut text = String::new();
    let mut details = serde_json::Map::new();
    let mut hit = true;

    let direct = if method == LoewyMethod::Formula {
        None
    } else if let Some(r) = ctx.lookup(&name, Invariant::L, None) {
        r.value.as_int()
    } else {
        hit = false;
        let t = Instant::now();
        let loaded = Loaded::load(d)?;
        let data = jennings_data(loaded.get(), p)?;
        ctx.store(ResultRecord::new(&name, Invariant::L, Value::Int(data.loewy_length), true, ms(t)))?;
        details.insert("chain_sizes".into(), json!(data.sizes()));
        details.insert("exponents".into(), json!(data.exponents));
        details.insert("coefficients".into(), json!(data.coefficients));
        Some(data.loewy_length)
    };
    let formula = if method == LoewyMethod::Direct {
        None
    } else if let Some(r) = ctx.lookup(&name, Invariant::LFormula, None) {
        r.value.as_int()
    } else {
        hit = false;
        let f = loewy_formula(d)?;
        ctx.store(ResultRecord::new(&name, Invariant::LFormula, Value::Int(f), true, 0))?;
        Some(f)
    };

    let ok = match (direct, formula) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    match (direct, formula) {
        (Some(a), Some(b)) => {
            let verdict = if a == b { "agree" } else { "DISAGREE" };
            writeln!(text, "{name}: L = {a} (M-series) = {b} (closed form): {verdict}")?;
        }
        (Some(a), None) => writeln!(text, "{name}: L = {a}")?,
        (None, Some(b)) => writeln!(text, "{name}: L = {b} (closed form)")?,
        (None, None) => unreachable!("at least one method runs"),
    }
    if method == LoewyMethod::Both {
        match details.get("chain_sizes") {
            Some(sizes) => {
                writeln!(text, "  |M_i|  {sizes}")?;
                writeln!(text, "  c_k    {}", details["coefficients"])?;
            }
            None => writeln!(text, "  (cached; rerun with --no-cache for the series)")?,
        }
    }
    if hit {
        writeln!(text, "  cache hit")?;
    }
    let (invariant, value) = match direct {
        Some(v) => ("L", v),
        None => ("L_formula", formula.unwrap()),
    };
    let out = Output {
        descriptor: name,
        invariant: invariant.into(),
        value: Value::Int(value),
        exact: true,
        witness: None,
        bounds: None,
        elapsed_ms: ms(start),
        version: TOOL_VERSION.into(),
        cache_hit: hit,
        details: Some(serde_json::Value::Object({
            let mut m = details;
            if let Some(f) = formula {
                m.insert("formula".into(), json!(f));
            }
            if let Some(v) = direct {
                m.insert("direct".into(), json!(v));
            }
            m
        })),
    };
    output_report(out, text, ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Variant {
    Ordered,
    Unordered,
    #[value(name = "E")]
    E,
    Weighted,
}

impl Variant {
    fn invariant(self) -> Invariant {
        match self {
            Variant::Ordered => Invariant::D,
            Variant::Unordered => Invariant::Dprime,
            Variant::E => Invariant::E,
            Variant::Weighted => Invariant::DA,
        }
    }
}

fn run_search(
    g: &davlab_core::group::FiniteGroup,
    variant: Variant,
    weights: &[u64],
    cfg: &SearchConfig,
) -> Result<SearchResult, ZeroSumError> {
    match variant {
        Variant::Ordered => davenport_ordered(g, cfg),
        Variant::Unordered => davenport_unordered(g, cfg),
        Variant::E => eg_invariant(g, cfg),
        Variant::Weighted => davenport_weighted(g, weights, cfg),
    }
}

pub fn davenport(ctx: &mut Ctx, d: &GroupDescriptor, variant: Variant, weights: Option<Vec<u64>>) -> Result<Report> {
    let start = Instant::now();
    let name = d.to_string();
    let invariant = variant.invariant();
    let weights = match (variant, weights) {
        (Variant::Weighted, Some(mut w)) => {
            w.sort_unstable();
            w.dedup();
            Some(w)
        }
        (Variant::Weighted, None) => bail!("--variant=weighted needs --weights"),
        (_, Some(_)) => bail!("--weights applies only to --variant=weighted"),
        (_, None) => None,
    };
    let (record, hit, states) = match ctx.lookup(&name, invariant, weights.as_deref()) {
        Some(r) => (r, true, None),
        None => {
            let g = table(d)?;
            let r = run_search(&g, variant, weights.as_deref().unwrap_or(&[]), &ctx.config)?;
            let mut record = ResultRecord::new(&name, invariant, Value::Int(r.value as u64), r.exact, r.elapsed_ms);
            record.weight_set = weights.clone();
            record.witness = Some(r.witness.iter().map(|&x| g.label(x).to_string()).collect());
            ctx.store(record.clone())?;
            (record, false, Some(r.states_explored))
        }
    };
    let labels = record.witness.clone().unwrap_or_default();
    let mut text = String::new();
    let what = match &weights {
        Some(w) => format!("{}_{{{}}}", invariant.name(), w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
        None => invariant.name().to_string(),
    };
    let exactness = if record.exact { "exact" } else { "lower bound, budget exhausted" };
    writeln!(text, "{name}: {what} = {} ({exactness})", record.value)?;
    writeln!(text, "  witness ({} terms): {}", labels.len(), run_length(&labels))?;
    match states {
        Some(s) => writeln!(text, "  states explored: {s}")?,
        None => writeln!(text, "  cache hit")?,
    }
    if !record.exact {
        log::warn!("{name}: search stopped at the budget; {} is only a lower bound", record.value);
    }
    let bounds = (!record.exact).then(|| Bounds {
        lower: record.value.as_int(),
        upper: None,
        lower_source: "partial_search".into(),
        upper_source: "none".into(),
    });
    let out = Output {
        descriptor: name,
        invariant: invariant.name().into(),
        value: record.value,
        exact: record.exact,
        witness: Some(labels),
        bounds,
        elapsed_ms: ms(start),
        version: TOOL_VERSION.into(),
        cache_hit: hit,
        details: Some(json!({ "states_explored": states, "weights": weights })),
    };
    output_report(out, text, true)
}

fn oracle_system(d: &GroupDescriptor) -> Result<Option<CongruenceSystem>> {
    match d {
        GroupDescriptor::G1 { .. } | GroupDescriptor::G3 { .. } => {
            Ok(Some(CongruenceSystem::for_descriptor(d, WitnessOptions::default())?))
        }
        _ => Ok(None),
    }
}

pub fn witness(ctx: &mut Ctx, d: &GroupDescriptor, theorem: u32, verify: bool) -> Result<Report> {
    let start = Instant::now();
    let name = d.to_string();
    let th = Theorem::from_number(theorem).ok_or_else(|| anyhow!("--theorem must be 1, 6 or 7"))?;
    let in_scope = class_two_in_scope(d);
    if !in_scope && !ctx.explore {
        bail!("{name} lies outside the proven range (γ = 1 for g1, σ = 1 for g3); pass --unverified-explore");
    }
    let has_oracle = verify && oracle_system(d)?.is_some();
    let cached_w = verify.then(|| ctx.lookup(&name, Invariant::WitnessCheck, None)).flatten();
    let cached_o = has_oracle.then(|| ctx.lookup(&name, Invariant::OracleCheck, None)).flatten();
    let hit = cached_w.is_some() && (cached_o.is_some() || !has_oracle);

    let mut text = String::new();
    let mut details = serde_json::Map::new();
    let (labels, free, oracle): (Vec<String>, Option<bool>, Option<bool>) = if hit {
        let w = cached_w.unwrap();
        (w.witness.unwrap_or_default(), w.value.as_bool(), cached_o.and_then(|o| o.value.as_bool()))
    } else {
        let loaded = Loaded::load(d)?;
        let g = loaded.get();
        let spec = construct(g, th, ctx.explore)?;
        let seq = spec.sequence();
        let labels: Vec<String> = seq.iter().map(|&x| g.normal_form().label(x)).collect();
        writeln!(text, "{name}: case {}", spec.case)?;
        for b in &spec.blocks {
            writeln!(text, "  {} = {} = {}  (×{})", b.name, b.word, b.label, b.count)?;
        }
        details.insert("case".into(), json!(spec.case.tag()));
        details.insert("blocks".into(), serde_json::to_value(&spec.blocks)?);
        let (mut free, mut oracle) = (None, None);
        if verify {
            let t = Instant::now();
            let f = is_ordered_free(g, &seq);
            let mut rec = ResultRecord::new(&name, Invariant::WitnessCheck, Value::Bool(f), true, ms(t));
            rec.witness = Some(labels.clone());
            ctx.store(rec)?;
            free = Some(f);
            if let Some(sys) = oracle_system(d)? {
                let t = Instant::now();
                let report: OracleReport = congruence_search(&sys)?;
                ctx.store(ResultRecord::new(
                    &name,
                    Invariant::OracleCheck,
                    Value::Bool(report.only_trivial),
                    true,
                    ms(t),
                ))?;
                details.insert("oracle_counterexample".into(), json!(report.counterexample));
                oracle = Some(report.only_trivial);
            }
        }
        (labels, free, oracle)
    };

    let len = labels.len() as u64;
    writeln!(text, "  S = {}  (length {len})", run_length(&labels))?;
    let mut ok = true;
    if let Some(f) = free {
        writeln!(text, "  ordered product-one free: {f}")?;
        if let Some(o) = oracle {
            writeln!(text, "  congruence oracle (only trivial solution): {o}")?;
            if in_scope && o != f {
                ok = false;
                writeln!(text, "  ASSERTION FAILED: the two verdicts differ")?;
            }
        }
        if f {
            writeln!(text, "  D ≥ {}", len + 1)?;
        }
        if in_scope && !f {
            ok = false;
            writeln!(text, "  ASSERTION FAILED: the published witness is not free")?;
        }
        if !in_scope {
            writeln!(text, "  (outside the proven range; reported, not asserted)")?;
        }
    }
    if hit {
        writeln!(text, "  cache hit")?;
    }
    details.insert("in_scope".into(), json!(in_scope));
    details.insert("oracle".into(), json!(oracle));
    let out = Output {
        descriptor: name,
        invariant: if verify { "witness_check" } else { "witness" }.into(),
        value: free.map_or(Value::Int(len), Value::Bool),
        exact: true,
        bounds: (free == Some(true)).then(|| Bounds {
            lower: Some(len + 1),
            upper: None,
            lower_source: "witness".into(),
            upper_source: "none".into(),
        }),
        witness: Some(labels),
        elapsed_ms: ms(start),
        version: TOOL_VERSION.into(),
        cache_hit: hit,
        details: Some(serde_json::Value::Object(details)),
    };
    output_report(out, text, ok)
}

pub fn oracle(ctx: &mut Ctx, d: &GroupDescriptor) -> Result<Report> {
    let start = Instant::now();
    let name = d.to_string();
    let sys = oracle_system(d)?.ok_or_else(|| anyhow!("the congruence oracle covers g1 and g3 only"))?;
    let in_scope = class_two_in_scope(d);
    if !in_scope && !ctx.explore {
        bail!("{name} lies outside the proven range (γ = 1 for g1, σ = 1 for g3); pass --unverified-explore");
    }
    let mut text = String::new();
    let (only_trivial, counterexample, hit) = match ctx.lookup(&name, Invariant::OracleCheck, None) {
        Some(r) => (r.value.as_bool().unwrap_or(false), None, true),
        None => {
            let t = Instant::now();
            let r = congruence_search(&sys)?;
            ctx.store(ResultRecord::new(&name, Invariant::OracleCheck, Value::Bool(r.only_trivial), true, ms(t)))?;
            (r.only_trivial, r.counterexample, false)
        }
    };
    let [x, y, z, w] = sys.ranges();
    writeln!(text, "{name}: system {} over 0≤x≤{x}, 0≤y≤{y}, 0≤z≤{z}, 0≤w≤{w}", sys.case)?;
    writeln!(text, "  only the trivial solution: {only_trivial}")?;
    if let Some(c) = counterexample {
        writeln!(text, "  solution (x,y,z,w) = {c:?}")?;
    }
    if hit {
        writeln!(text, "  cache hit")?;
    }
    let ok = only_trivial || !in_scope;
    let out = Output {
        descriptor: name,
        invariant: "oracle_check".into(),
        value: Value::Bool(only_trivial),
        exact: true,
        witness: None,
        bounds: None,
        elapsed_ms: ms(start),
        version: TOOL_VERSION.into(),
        cache_hit: hit,
        details: Some(
            json!({ "case": sys.case.tag(), "q": sys.q, "counterexample": counterexample, "in_scope": in_scope }),
        ),
    };
    output_report(out, text, ok)
}
