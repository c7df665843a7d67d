//! Explicit extremal product-one-free sequences and the number theory that
//! certifies them.
//!
//! Each witness is a run of blocks `k^(x_max) ℓ^(y_max) m^(z_max) n^(w_max)`
//! kept in exactly this order. A nonempty ordered product-one subsequence
//! `k^x ℓ^y m^z n^w = 1` of the class-two witnesses is equivalent to a
//! nontrivial solution of a small congruence system, which
//! [`congruence_oracle`] rules out by exhaustive enumeration.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Element, GroupDescriptor, GroupError, Presented};
use crate::numtheory::{is_prime, mod_pow};

/// Largest range accepted for one oracle variable.
pub const ORACLE_MAX_RANGE: u64 = 10_000;
/// Largest number of loop bodies the oracle may execute.
pub const ORACLE_MAX_WORK: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("{descriptor} is not in the scope of this construction: {reason}")]
    WrongFamily { descriptor: String, reason: String },
    #[error("{descriptor}: {reason}; pass the unverified-explore flag to build it anyway")]
    OutOfScope { descriptor: String, reason: String },
    #[error("modulus {0} is even")]
    EvenModulus(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("oracle range {range} exceeds {max}")]
    RangeTooLarge { range: u64, max: u64 },
    #[error("oracle work exceeds {max} iterations")]
    WorkTooLarge { max: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Which construction (and which quadratic-residue class) a witness uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessCase {
    Dicyclic,
    Semidihedral,
    TwoGroup,
    #[serde(rename = "g1_3mod4")]
    G1ThreeMod4,
    #[serde(rename = "g1_1mod4")]
    G1OneMod4,
    G2,
    #[serde(rename = "g3_3mod4")]
    G3ThreeMod4,
    #[serde(rename = "g3_1mod4")]
    G3OneMod4,
}

impl WitnessCase {
    pub fn tag(self) -> &'static str {
        match self {
            WitnessCase::Dicyclic => "dicyclic",
            WitnessCase::Semidihedral => "semidihedral",
            WitnessCase::TwoGroup => "two_group",
            WitnessCase::G1ThreeMod4 => "g1_3mod4",
            WitnessCase::G1OneMod4 => "g1_1mod4",
            WitnessCase::G2 => "g2",
            WitnessCase::G3ThreeMod4 => "g3_3mod4",
            WitnessCase::G3OneMod4 => "g3_1mod4",
        }
    }

    /// The quadratic-residue class the case is built for, if any.
    pub fn residue_class(self) -> Option<ResidueClass> {
        match self {
            WitnessCase::G1ThreeMod4 | WitnessCase::G3ThreeMod4 => Some(ResidueClass::ThreeMod4),
            WitnessCase::G1OneMod4 | WitnessCase::G3OneMod4 => Some(ResidueClass::OneMod4),
            _ => None,
        }
    }
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Residue of an odd prime modulo 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ResidueClass {
    OneMod4,
    ThreeMod4,
}

impl ResidueClass {
    pub fn of(p: u64) -> ResidueClass {
        if p % 4 == 1 {
            ResidueClass::OneMod4
        } else {
            ResidueClass::ThreeMod4
        }
    }
}

/// One run `name^count` of a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBlock {
    pub name: String,
    /// The defining word with fractional exponents, e.g. `a^-1 b c^(1/2)`.
    pub word: String,
    /// The element in normal form.
    pub label: String,
    pub element: Element,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSpec {
    pub descriptor: String,
    pub case: WitnessCase,
    pub blocks: Vec<WitnessBlock>,
    /// False when the construction was forced outside the proven scope.
    pub in_scope: bool,
}

impl WitnessSpec {
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The blocks expanded in order.
    pub fn sequence(&self) -> Vec<Element> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.element, b.count as usize)).collect()
    }

    /// Compact form such as `(y^3)^3 (x)^1`.
    pub fn notation(&self) -> String {
        self.blocks
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| format!("({})^{}", b.label, b.count))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Construction switches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WitnessOptions {
    /// Build class-two witnesses beyond `γ = 1` / `σ = 1`.
    pub allow_unverified: bool,
    /// Use this residue-class construction instead of the one matching `p`.
    pub force_class: Option<ResidueClass>,
}

/// Least quadratic non-residue modulo the odd prime `p`.
pub fn least_qnr(p: u64) -> Result<u64, WitnessError> {
    if p < 3 || !is_prime(p) {
        return Err(WitnessError::NotOddPrime(p));
    }
    let q = (2..p).find(|&q| mod_pow(q, (p - 1) / 2, p) == p - 1).expect("non-residues exist mod an odd prime");
    assert!(is_prime(q) && ((q - 1) * (q - 1)) < p, "least non-residue {q} mod {p} breaks its bound");
    Ok(q)
}

/// `x / 2` modulo an odd modulus, in `[0, modulus)`.
pub fn half_exponent(x: i64, modulus: u64) -> Result<u64, WitnessError> {
    if modulus.is_multiple_of(2) {
        return Err(WitnessError::EvenModulus(modulus));
    }
    let m = modulus as i128;
    Ok(((x as i128).rem_euclid(m) * ((m + 1) / 2) % m) as u64)
}

/// `−4` (for `ThreeMod4`) or `−4·n_p` (for `OneMod4`) is a non-residue mod `p`.
pub fn discriminant_check(p: u64, class: ResidueClass) -> Result<bool, WitnessError> {
    let q = least_qnr(p)?;
    let disc = match class {
        ResidueClass::ThreeMod4 => -4i128,
        ResidueClass::OneMod4 => -4 * q as i128,
    };
    let d = disc.rem_euclid(p as i128) as u64;
    Ok(d != 0 && mod_pow(d, (p - 1) / 2, p) == p - 1)
}

fn wrong_family(d: &GroupDescriptor, reason: &str) -> WitnessError {
    WitnessError::WrongFamily { descriptor: d.to_string(), reason: reason.into() }
}

fn block<G: Presented + ?Sized>(group: &G, name: &str, word: String, element: Element, count: u64) -> WitnessBlock {
    WitnessBlock { name: name.into(), word, label: group.normal_form().label(element), element, count }
}

/// `Π g_i^(e_i)` over named generators.
fn word<G: Presented + ?Sized>(group: &G, parts: &[(Element, i64)]) -> Element {
    parts.iter().fold(Element::IDENTITY, |acc, &(g, e)| group.mul(acc, group.pow(g, e)))
}

/// `y^(|G|/2 − 1) x` on the dicyclic and semidihedral families.
pub fn witness_theorem1<G: Presented + ?Sized>(group: &G) -> Result<WitnessSpec, WitnessError> {
    let d = group.descriptor().clone();
    let case = match d {
        GroupDescriptor::Dicyclic { .. } => WitnessCase::Dicyclic,
        GroupDescriptor::Semidihedral { .. } => WitnessCase::Semidihedral,
        _ => return Err(wrong_family(&d, "expected a dicyclic or semidihedral group")),
    };
    half_cycle_witness(group, case)
}

/// `y^(2^(r−1) − 1) x` on the dihedral-type 2-groups of order `2^r`.
pub fn witness_theorem7<G: Presented + ?Sized>(group: &G) -> Result<WitnessSpec, WitnessError> {
    let d = group.descriptor().clone();
    let two_power = d.expected_order().is_some_and(|n| n >= 8 && n.is_power_of_two());
    if !d.family().is_dihedral_type() || !two_power {
        return Err(wrong_family(&d, "expected d, q, sd or m2 of order 2^r, r ≥ 3"));
    }
    half_cycle_witness(group, WitnessCase::TwoGroup)
}

fn half_cycle_witness<G: Presented + ?Sized>(group: &G, case: WitnessCase) -> Result<WitnessSpec, WitnessError> {
    let (x, y) = (group.generator("x")?, group.generator("y")?);
    let half = group.order() as u64 / 2;
    Ok(WitnessSpec {
        descriptor: group.descriptor().to_string(),
        case,
        blocks: vec![block(group, "y", "y".into(), y, half - 1), block(group, "x", "x".into(), x, 1)],
        in_scope: true,
    })
}

/// `a^(p^α − 1) b^(p^β − 1)` on `G_2`.
pub fn witness_g2<G: Presented + ?Sized>(group: &G) -> Result<WitnessSpec, WitnessError> {
    let d = group.descriptor().clone();
    let GroupDescriptor::G2 { p, alpha, beta, .. } = d else {
        return Err(wrong_family(&d, "expected g2"));
    };
    let (a, b) = (group.generator("a")?, group.generator("b")?);
    Ok(WitnessSpec {
        descriptor: d.to_string(),
        case: WitnessCase::G2,
        blocks: vec![
            block(group, "a", "a".into(), a, p.pow(alpha) - 1),
            block(group, "b", "b".into(), b, p.pow(beta) - 1),
        ],
        in_scope: true,
    })
}

fn pick_class(p: u64, opts: WitnessOptions) -> ResidueClass {
    opts.force_class.unwrap_or(ResidueClass::of(p))
}

/// The four-block witness on `G_1` with `γ = 1`.
pub fn witness_g1<G: Presented + ?Sized>(group: &G, opts: WitnessOptions) -> Result<WitnessSpec, WitnessError> {
    let d = group.descriptor().clone();
    let GroupDescriptor::G1 { p, alpha, beta, gamma } = d else {
        return Err(wrong_family(&d, "expected g1"));
    };
    if gamma != 1 && !opts.allow_unverified {
        return Err(WitnessError::OutOfScope { descriptor: d.to_string(), reason: "γ ≠ 1".into() });
    }
    let (a, b, c) = (group.generator("a")?, group.generator("b")?, group.generator("c")?);
    let oc = group.element_order(c);
    let half = |x: i64| half_exponent(x, oc).map(|e| e as i64);
    let class = pick_class(p, opts);
    let k = word(group, &[(a, -1), (b, 1), (c, half(1)?)]);
    let l = group.inv(b);
    let (case, m, m_word, n, n_word) = match class {
        ResidueClass::ThreeMod4 => (
            WitnessCase::G1ThreeMod4,
            a,
            "a".to_string(),
            word(group, &[(a, 2), (b, -1), (c, 1)]),
            "a^2 b^-1 c".to_string(),
        ),
        ResidueClass::OneMod4 => {
            let q = least_qnr(p)?;
            let qi = q as i64;
            (
                WitnessCase::G1OneMod4,
                word(group, &[(a, 1), (b, qi), (c, half(-qi)?)]),
                format!("a b^{q} c^(-{q}/2)"),
                a,
                "a".to_string(),
            )
        }
    };
    let small = p.pow(gamma) - 1;
    Ok(WitnessSpec {
        descriptor: d.to_string(),
        case,
        blocks: vec![
            block(group, "k", "a^-1 b c^(1/2)".into(), k, p.pow(alpha) - 1),
            block(group, "l", "b^-1".into(), l, p.pow(beta) - 1),
            block(group, "m", m_word, m, small),
            block(group, "n", n_word, n, small),
        ],
        in_scope: gamma == 1 && opts.force_class.is_none_or(|f| f == ResidueClass::of(p)),
    })
}

/// The four-block witness on `G_3` with `σ = 1`.
pub fn witness_g3<G: Presented + ?Sized>(group: &G, opts: WitnessOptions) -> Result<WitnessSpec, WitnessError> {
    let d = group.descriptor().clone();
    let GroupDescriptor::G3 { p, alpha, beta, sigma, .. } = d else {
        return Err(wrong_family(&d, "expected g3"));
    };
    if sigma != 1 && !opts.allow_unverified {
        return Err(WitnessError::OutOfScope { descriptor: d.to_string(), reason: "σ ≠ 1".into() });
    }
    let (a, b) = (group.generator("a")?, group.generator("b")?);
    let ab = group.commutator(a, b);
    let oab = group.element_order(ab);
    let half = |x: i64| half_exponent(x, oab).map(|e| e as i64);
    let class = pick_class(p, opts);
    let k = group.inv(a);
    let (case, m, m_word, n, n_word) = match class {
        ResidueClass::ThreeMod4 => (
            WitnessCase::G3ThreeMod4,
            word(group, &[(a, 1), (b, 1), (ab, half(-1)?)]),
            "a b [a,b]^(-1/2)".to_string(),
            word(group, &[(a, 2), (b, 1), (ab, -1)]),
            "a^2 b [a,b]^-1".to_string(),
        ),
        ResidueClass::OneMod4 => {
            let q1 = least_qnr(p)? as i64 + 1;
            (
                WitnessCase::G3OneMod4,
                word(group, &[(a, 1), (b, q1), (ab, half(-q1)?)]),
                format!("a b^{q1} [a,b]^(-{q1}/2)"),
                word(group, &[(a, 1), (b, 1), (ab, half(-1)?)]),
                "a b [a,b]^(-1/2)".to_string(),
            )
        }
    };
    let small = p.pow(sigma) - 1;
    Ok(WitnessSpec {
        descriptor: d.to_string(),
        case,
        blocks: vec![
            block(group, "k", "a^-1".into(), k, p.pow(alpha) - 1),
            block(group, "l", "b".into(), b, p.pow(beta) - 1),
            block(group, "m", m_word, m, small),
            block(group, "n", n_word, n, small),
        ],
        in_scope: sigma == 1 && opts.force_class.is_none_or(|f| f == ResidueClass::of(p)),
    })
}

/// The congruences equivalent to `k^x ℓ^y m^z n^w = 1` for a class-two
/// witness, over `0 ≤ x < p^α`, `0 ≤ y < p^β`, `0 ≤ z, w < p^t` where `t`
/// is `γ` on `G_1` and `σ` on `G_3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceSystem {
    pub case: WitnessCase,
    pub p: u64,
    pub alpha: u32,
    pub beta: u32,
    /// `γ` of the presentation; enters `G_3` through `p^(α−γ)`.
    pub gamma: u32,
    /// Exponent of the `m`, `n` ranges and of the last modulus.
    pub small: u32,
    /// Least non-residue; unused in the `3 mod 4` cases.
    pub q: u64,
}

impl CongruenceSystem {
    /// The system matching what [`witness_g1`] / [`witness_g3`] build.
    pub fn for_descriptor(d: &GroupDescriptor, opts: WitnessOptions) -> Result<CongruenceSystem, WitnessError> {
        let (g1, p, alpha, beta, gamma, small) = match *d {
            GroupDescriptor::G1 { p, alpha, beta, gamma } => (true, p, alpha, beta, gamma, gamma),
            GroupDescriptor::G3 { p, alpha, beta, gamma, sigma } => (false, p, alpha, beta, gamma, sigma),
            _ => return Err(wrong_family(d, "expected g1 or g3")),
        };
        let class = pick_class(p, opts);
        let case = match (g1, class) {
            (true, ResidueClass::ThreeMod4) => WitnessCase::G1ThreeMod4,
            (true, ResidueClass::OneMod4) => WitnessCase::G1OneMod4,
            (false, ResidueClass::ThreeMod4) => WitnessCase::G3ThreeMod4,
            (false, ResidueClass::OneMod4) => WitnessCase::G3OneMod4,
        };
        Ok(CongruenceSystem { case, p, alpha, beta, gamma, small, q: least_qnr(p)? })
    }

    /// Upper ends of the ranges of `x, y, z, w`.
    pub fn ranges(&self) -> [u64; 4] {
        let s = self.p.pow(self.small) - 1;
        [self.p.pow(self.alpha) - 1, self.p.pow(self.beta) - 1, s, s]
    }

    fn moduli(&self) -> [i128; 3] {
        [self.p.pow(self.alpha) as i128, self.p.pow(self.beta) as i128, self.p.pow(self.small) as i128]
    }

    /// Loop order, outermost first, as indices into `(x, y, z, w)`.
    fn loop_order(&self) -> [usize; 4] {
        match self.case {
            WitnessCase::G1ThreeMod4 | WitnessCase::G1OneMod4 => [3, 2, 0, 1],
            _ => [3, 2, 1, 0],
        }
    }

    /// Loop depth after which equation `i` has all its variables bound.
    fn equation_depth(&self, i: usize) -> usize {
        match (self.case, i) {
            (WitnessCase::G1ThreeMod4 | WitnessCase::G1OneMod4, 0) => 2,
            (WitnessCase::G3ThreeMod4 | WitnessCase::G3OneMod4, 1 | 2) => 2,
            _ => 3,
        }
    }

    /// Left side of equation `i` (not yet reduced).
    fn lhs(&self, i: usize, v: [i128; 4]) -> i128 {
        let [x, y, z, w] = v;
        let q = self.q as i128;
        let g3_bracket = || match self.case {
            WitnessCase::G3ThreeMod4 => -2 * y * (z + 2 * w) - 4 * z * w - (z * z + 2 * w * w),
            _ => -2 * y * (z + w) - 2 * (q + 1) * z * w - (q + 1) * z * z - w * w,
        };
        let modulus = self.moduli()[0];
        // (1/2)·p^(α−γ)·B modulo p^α
        let half_shift = |b: i128| {
            let shift = self.p.pow(self.alpha.saturating_sub(self.gamma)) as i128;
            (shift * b).rem_euclid(modulus) * ((modulus + 1) / 2)
        };
        match (self.case, i) {
            (WitnessCase::G1ThreeMod4, 0) => -x + z + 2 * w,
            (WitnessCase::G1ThreeMod4, 1) => x - y - w,
            (WitnessCase::G1ThreeMod4, _) => -2 * (x - y) * (z + 2 * w) + (x * x + 2 * w * w),
            (WitnessCase::G1OneMod4, 0) => -x + z + w,
            (WitnessCase::G1OneMod4, 1) => x - y + q * z,
            (WitnessCase::G1OneMod4, _) => -2 * (x - y) * (z + w) - 2 * q * z * w + x * x - q * z * z,
            (WitnessCase::G3ThreeMod4, 0) => -x + z + 2 * w + half_shift(g3_bracket()),
            (WitnessCase::G3ThreeMod4, 1) => y + z + w,
            (WitnessCase::G3OneMod4, 0) => -x + z + w + half_shift(g3_bracket()),
            (WitnessCase::G3OneMod4, 1) => y + (q + 1) * z + w,
            (_, _) => g3_bracket(),
        }
    }

    /// Every equation of the system holds at `(x, y, z, w)`.
    pub fn holds(&self, v: [u64; 4]) -> bool {
        let v = v.map(|t| t as i128);
        let m = self.moduli();
        (0..3).all(|i| self.lhs(i, v).rem_euclid(m[i]) == 0)
    }
}

/// Result of an exhaustive oracle run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    /// The only solution in range is `x = y = z = w = 0`.
    pub only_trivial: bool,
    /// Least nontrivial solution `(x, y, z, w)` in loop order, if any.
    pub counterexample: Option<[u64; 4]>,
    pub iterations: u64,
}

/// Counterexample and work spent for one value of the outer variable.
type Branch = Result<(Option<[u64; 4]>, u64), WitnessError>;

/// Exhaustive enumeration of the system over its ranges. Equations are
/// tested as soon as their variables are bound, which skips no tuple that
/// could satisfy the system. Parallel over `w`.
pub fn congruence_search(sys: &CongruenceSystem) -> Result<OracleReport, WitnessError> {
    let ranges = sys.ranges();
    if let Some(&r) = ranges.iter().find(|&&r| r + 1 > ORACLE_MAX_RANGE) {
        return Err(WitnessError::RangeTooLarge { range: r + 1, max: ORACLE_MAX_RANGE });
    }
    let order = sys.loop_order();
    let moduli = sys.moduli();
    let at_depth: Vec<Vec<usize>> =
        (0..4).map(|depth| (0..3).filter(|&i| sys.equation_depth(i) == depth).collect()).collect();
    let work = AtomicU64::new(0);

    let outer: Vec<Branch> = (0..=ranges[order[0]])
        .into_par_iter()
        .map(|first| {
            let mut v = [0i128; 4];
            v[order[0]] = first as i128;
            let mut found = None;
            let mut local = 0u64;
            let ok = |v: &[i128; 4], depth: usize| {
                at_depth[depth].iter().all(|&i| sys.lhs(i, *v).rem_euclid(moduli[i]) == 0)
            };
            if ok(&v, 0) {
                for t1 in 0..=ranges[order[1]] {
                    v[order[1]] = t1 as i128;
                    local += 1;
                    if !ok(&v, 1) {
                        continue;
                    }
                    for t2 in 0..=ranges[order[2]] {
                        v[order[2]] = t2 as i128;
                        local += 1;
                        if !ok(&v, 2) {
                            continue;
                        }
                        for t3 in 0..=ranges[order[3]] {
                            v[order[3]] = t3 as i128;
                            local += 1;
                            if ok(&v, 3) && v.iter().any(|&t| t != 0) && found.is_none() {
                                found = Some(v.map(|t| t as u64));
                            }
                        }
                    }
                    if local > 1 << 16 {
                        if work.fetch_add(local, Ordering::Relaxed) + local > ORACLE_MAX_WORK {
                            return Err(WitnessError::WorkTooLarge { max: ORACLE_MAX_WORK });
                        }
                        local = 0;
                    }
                }
            }
            if work.fetch_add(local, Ordering::Relaxed) + local > ORACLE_MAX_WORK {
                return Err(WitnessError::WorkTooLarge { max: ORACLE_MAX_WORK });
            }
            Ok((found, local))
        })
        .collect();
    let mut counterexample = None;
    for r in outer {
        let (found, _) = r?;
        if counterexample.is_none() {
            counterexample = found;
        }
    }
    Ok(OracleReport {
        only_trivial: counterexample.is_none(),
        counterexample,
        iterations: work.load(Ordering::Relaxed),
    })
}

/// True iff the system has only the trivial solution in range.
pub fn congruence_oracle(sys: &CongruenceSystem) -> Result<bool, WitnessError> {
    congruence_search(sys).map(|r| r.only_trivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build, FiniteGroup, GroupLaw, NormalForm};
    use crate::jennings::loewy_formula;
    use crate::zerosum::is_ordered_free;

    fn group(s: &str) -> FiniteGroup {
        build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn residue_helpers() {
        assert_eq!(least_qnr(3), Ok(2));
        assert_eq!(least_qnr(5), Ok(2));
        assert_eq!(least_qnr(13), Ok(2));
        assert_eq!(least_qnr(17), Ok(3));
        assert_eq!(least_qnr(9), Err(WitnessError::NotOddPrime(9)));
        assert_eq!(half_exponent(1, 3), Ok(2));
        assert_eq!(half_exponent(0, 7), Ok(0));
        assert_eq!(half_exponent(1, 9), Ok(5));
        assert_eq!(half_exponent(-2, 5), Ok(4));
        assert_eq!(half_exponent(1, 8), Err(WitnessError::EvenModulus(8)));
        assert_eq!(discriminant_check(3, ResidueClass::ThreeMod4), Ok(true));
        assert_eq!(discriminant_check(7, ResidueClass::ThreeMod4), Ok(true));
        assert_eq!(discriminant_check(5, ResidueClass::ThreeMod4), Ok(false));
        assert_eq!(discriminant_check(5, ResidueClass::OneMod4), Ok(true));
    }

    #[test]
    fn half_cycle_witnesses() {
        for (s, len) in [("q[8]", 4), ("q[12]", 6), ("sd[16]", 8)] {
            let g = group(s);
            let w = witness_theorem1(&g).unwrap();
            assert_eq!(w.len(), len, "{s}");
            assert_eq!(w.len(), (g.order() + 1).div_ceil(2) - 1);
            assert!(is_ordered_free(&g, &w.sequence()), "{s}");
        }
        for (s, len) in [("d[8]", 4), ("m2[16]", 8), ("sd[16]", 8), ("q[16]", 8)] {
            let g = group(s);
            let w = witness_theorem7(&g).unwrap();
            assert_eq!(w.len(), len);
            assert!(is_ordered_free(&g, &w.sequence()), "{s}");
        }
        let sd = group("sd[16]");
        assert_eq!(witness_theorem7(&sd).unwrap().sequence(), witness_theorem1(&sd).unwrap().sequence());
        assert!(witness_theorem1(&group("d[8]")).is_err());
        assert!(witness_theorem7(&group("q[12]")).is_err());
    }

    #[test]
    fn class_two_witness_shapes() {
        let g = group("g2[3,2,1,1]");
        let w = witness_g2(&g).unwrap();
        assert_eq!(w.len(), 10);
        assert_eq!(w.len() as u64 + 1, loewy_formula(g.descriptor()).unwrap());
        let g = group("g1[3,1,1,1]");
        let w = witness_g1(&g, WitnessOptions::default()).unwrap();
        assert_eq!(w.case, WitnessCase::G1ThreeMod4);
        assert_eq!(w.len(), 8);
        let (a, b, c) = (g.generator("a").unwrap(), g.generator("b").unwrap(), g.generator("c").unwrap());
        let k = g.mul(g.mul(g.inv(a), b), g.pow(c, 2));
        assert_eq!(w.blocks[0].element, k);
        let g5 = NormalForm::new(&"g1[5,1,1,1]".parse().unwrap()).unwrap();
        let w = witness_g1(&g5, WitnessOptions::default()).unwrap();
        assert_eq!(w.case, WitnessCase::G1OneMod4);
        let (a, b, c) = (g5.generator("a").unwrap(), g5.generator("b").unwrap(), g5.generator("c").unwrap());
        assert_eq!(w.blocks[2].element, g5.mul(g5.mul(a, g5.pow(b, 2)), g5.pow(c, 4)));
        assert!(matches!(
            witness_g1(&group("g1[3,2,2,2]"), WitnessOptions::default()),
            Err(WitnessError::OutOfScope { .. })
        ));
        let forced = witness_g1(&group("g1[3,2,2,2]"), WitnessOptions { allow_unverified: true, force_class: None });
        assert!(!forced.unwrap().in_scope);
        let g = group("g3[3,3,2,2,1]");
        assert_eq!(witness_g3(&g, WitnessOptions::default()).unwrap().len(), 38);
    }

    #[test]
    fn oracle_trivial_ranges() {
        let sys =
            CongruenceSystem { case: WitnessCase::G1ThreeMod4, p: 3, alpha: 0, beta: 0, gamma: 0, small: 0, q: 2 };
        let r = congruence_search(&sys).unwrap();
        assert!(r.only_trivial);
        let sys = CongruenceSystem::for_descriptor(&"g1[3,1,1,1]".parse().unwrap(), WitnessOptions::default()).unwrap();
        assert_eq!(congruence_oracle(&sys), Ok(true));
        assert!(sys.holds([0, 0, 0, 0]));
    }
}
