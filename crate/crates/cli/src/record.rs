//! Cache records and the JSON documents printed with `--json`.

use serde::{Deserialize, Serialize};

/// Schema version written into every cache line as `v`.
pub const RECORD_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Invariant {
    D,
    Dprime,
    E,
    DA,
    L,
    #[serde(rename = "L_formula")]
    LFormula,
    #[serde(rename = "witness_check")]
    WitnessCheck,
    #[serde(rename = "oracle_check")]
    OracleCheck,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::D => "D",
            Invariant::Dprime => "Dprime",
            Invariant::E => "E",
            Invariant::DA => "DA",
            Invariant::L => "L",
            Invariant::LFormula => "L_formula",
            Invariant::WitnessCheck => "witness_check",
            Invariant::OracleCheck => "oracle_check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(u64),
    Bool(bool),
}

impl Value {
    pub fn as_int(self) -> Option<u64> {
        match self {
            Value::Int(n) => Some(n),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub descriptor: String,
    pub invariant: Invariant,
    pub weight_set: Option<Vec<u64>>,
}

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub v: u32,
    pub descriptor: String,
    pub invariant: Invariant,
    pub value: Value,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_set: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub tool_version: String,
    pub elapsed_ms: u64,
    pub timestamp: String,
}

impl ResultRecord {
    pub fn new(descriptor: &str, invariant: Invariant, value: Value, exact: bool, elapsed_ms: u64) -> ResultRecord {
        ResultRecord {
            v: RECORD_VERSION,
            descriptor: descriptor.to_string(),
            invariant,
            value,
            exact,
            weight_set: None,
            witness: None,
            tool_version: TOOL_VERSION.to_string(),
            elapsed_ms,
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn key(&self) -> CacheKey {
        CacheKey { descriptor: self.descriptor.clone(), invariant: self.invariant, weight_set: self.weight_set.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub lower_source: String,
    pub upper_source: String,
}

/// The document printed by `loewy`, `davenport`, `witness` and `oracle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub descriptor: String,
    pub invariant: String,
    pub value: Value,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub elapsed_ms: u64,
    pub version: String,
    #[serde(default)]
    pub cache_hit: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

/// Run-length form of a label sequence: `(y)^3 (x)^1`.
pub fn run_length(labels: &[String]) -> String {
    let mut parts: Vec<(String, usize)> = Vec::new();
    for l in labels {
        match parts.last_mut() {
            Some((last, n)) if last == l => *n += 1,
            _ => parts.push((l.clone(), 1)),
        }
    }
    parts.iter().map(|(l, n)| format!("({l})^{n}")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let mut r = ResultRecord::new("q[8]", Invariant::D, Value::Int(5), true, 3);
        r.witness = Some(vec!["y".into(), "y".into(), "x".into()]);
        let line = serde_json::to_string(&r).unwrap();
        assert!(line.contains("\"invariant\":\"D\""));
        assert_eq!(serde_json::from_str::<ResultRecord>(&line).unwrap(), r);
        let b = ResultRecord::new("g1[3,1,1,1]", Invariant::WitnessCheck, Value::Bool(true), true, 0);
        let line = serde_json::to_string(&b).unwrap();
        assert!(line.contains("\"witness_check\"") && line.contains("\"value\":true"));
        assert!(serde_json::from_str::<ResultRecord>(&line.replace("\"v\":1", "\"v\":1,\"extra\":0")).is_err());
    }

    #[test]
    fn run_lengths() {
        let l: Vec<String> = ["y", "y", "y", "x"].iter().map(|s| s.to_string()).collect();
        assert_eq!(run_length(&l), "(y)^3 (x)^1");
        assert_eq!(run_length(&[]), "");
    }
}
