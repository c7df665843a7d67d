//! Jennings M-series, Loewy polynomial and Loewy length of p-groups.
//!
//! The series is computed by the literal recursion
//! `M_1 = G`, `M_n = [M_{n−1}, G] · M_{⌈n/p⌉}^(p)` until the first trivial
//! term. The group algebra and its radical are never formed.

use serde::Serialize;
use thiserror::Error;

use crate::group::{
    commutator_with_whole, generating_set, is_normal_by_generators, power, power_set, power_subgroup, product_subgroup,
    subgroup_closure, Element, GroupDescriptor, GroupError, GroupLaw, Presented, Subgroup,
};
use crate::numtheory::{is_prime, prime_power_exponent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JenningsError {
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: u64 },
    #[error("index |M_{index}/M_{next}| = {ratio} is not a power of {p}", next = index + 1)]
    NotPowerOfP { index: usize, ratio: usize, p: u64 },
    #[error("no closed-form Loewy length for {0}")]
    NoFormula(String),
    #[error("{0} is not a two-generator class-two family")]
    NotClassTwo(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Series, exponents, polynomial and Loewy length of one p-group.
#[derive(Clone, Debug)]
pub struct JenningsData {
    pub series: Vec<Subgroup>,
    pub exponents: Vec<u32>,
    pub coefficients: Vec<u64>,
    pub loewy_length: u64,
    pub prime: u64,
}

impl JenningsData {
    pub fn sizes(&self) -> Vec<usize> {
        self.series.iter().map(Subgroup::size).collect()
    }
}

fn check_p_group<G: GroupLaw + ?Sized>(group: &G, p: u64) -> Result<(), JenningsError> {
    if !is_prime(p) || prime_power_exponent(group.order() as u64, p).is_none() {
        return Err(JenningsError::NotPGroup { order: group.order(), p });
    }
    Ok(())
}

/// `M_1 ⊇ M_2 ⊇ …` ending with the first trivial term. The trivial group
/// gives the one-term series `[1]`.
pub fn m_series<G: GroupLaw + ?Sized>(group: &G, p: u64) -> Result<Vec<Subgroup>, JenningsError> {
    check_p_group(group, p)?;
    let whole = Subgroup::whole(group.order());
    let gens = generating_set(group, &whole);
    let mut series = vec![whole];
    // each step with M_n = M_{n−1} still strictly shrinks some later term;
    // the bound only guards against a broken group law
    let limit = group.order() + 2;
    while !series.last().unwrap().is_trivial() {
        let n = series.len() + 1;
        if n > limit {
            return Err(GroupError::Inconsistent("M-series does not terminate".into()).into());
        }
        let comm = commutator_with_whole(group, series.last().unwrap(), &gens);
        let pw = power_subgroup(group, &series[n.div_ceil(p as usize) - 1], p);
        series.push(product_subgroup(group, &comm, &pw));
    }
    Ok(series)
}

/// `e_i = log_p |M_i / M_{i+1}|` for every `i` up to the last nontrivial
/// term, zeros included.
pub fn jennings_exponents(series: &[Subgroup], p: u64) -> Result<Vec<u32>, JenningsError> {
    series
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let ratio = w[0].size() / w[1].size();
            if w[0].size() % w[1].size() != 0 {
                return Err(JenningsError::NotPowerOfP { index: i + 1, ratio, p });
            }
            prime_power_exponent(ratio as u64, p).ok_or(JenningsError::NotPowerOfP { index: i + 1, ratio, p })
        })
        .collect()
}

/// Coefficients of `∏_i (1 + x^i + … + x^((p−1)i))^(e_i)`.
pub fn loewy_polynomial(exponents: &[u32], p: u64) -> Vec<u64> {
    let mut poly = vec![1u64];
    for (k, &e) in exponents.iter().enumerate() {
        let i = k + 1;
        for _ in 0..e {
            let mut next = vec![0u64; poly.len() + (p as usize - 1) * i];
            for (deg, &c) in poly.iter().enumerate() {
                for j in 0..p as usize {
                    next[deg + j * i] += c;
                }
            }
            poly = next;
        }
    }
    poly
}

/// `1 + (p−1) Σ i·e_i`
pub fn loewy_from_exponents(exponents: &[u32], p: u64) -> u64 {
    let weighted: u64 = exponents.iter().enumerate().map(|(k, &e)| (k as u64 + 1) * e as u64).sum();
    1 + (p - 1) * weighted
}

pub fn loewy_length<G: GroupLaw + ?Sized>(group: &G, p: u64) -> Result<u64, JenningsError> {
    Ok(jennings_data(group, p)?.loewy_length)
}

pub fn jennings_data<G: GroupLaw + ?Sized>(group: &G, p: u64) -> Result<JenningsData, JenningsError> {
    let series = m_series(group, p)?;
    let exponents = jennings_exponents(&series, p)?;
    let coefficients = loewy_polynomial(&exponents, p);
    let loewy_length = loewy_from_exponents(&exponents, p);
    Ok(JenningsData { series, exponents, coefficients, loewy_length, prime: p })
}

/// Closed-form Loewy length for g1, g2, g3 and the 2-power d, q, sd, m2
/// families.
pub fn loewy_formula(d: &GroupDescriptor) -> Result<u64, JenningsError> {
    d.validate()?;
    let no_formula = || JenningsError::NoFormula(d.to_string());
    let two_power = |order: u64, min_r: u32| match prime_power_exponent(order, 2) {
        Some(r) if r >= min_r => Ok((1u64 << (r - 1)) + 1),
        _ => Err(no_formula()),
    };
    match *d {
        GroupDescriptor::G1 { p, alpha, beta, gamma } => Ok(p.pow(alpha) + p.pow(beta) + 2 * p.pow(gamma) - 3),
        GroupDescriptor::G2 { p, alpha, beta, .. } => Ok(p.pow(alpha) + p.pow(beta) - 1),
        GroupDescriptor::G3 { p, alpha, beta, sigma, .. } => Ok(p.pow(alpha) + p.pow(beta) + 2 * p.pow(sigma) - 3),
        GroupDescriptor::Dihedral { order } | GroupDescriptor::Dicyclic { order } => two_power(order, 3),
        GroupDescriptor::Semidihedral { order } | GroupDescriptor::Modular2 { order } => two_power(order, 4),
        _ => Err(no_formula()),
    }
}

/// Per-index result of the structural checks on a computed series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub index: usize,
    pub normal: bool,
    pub elementary_abelian: bool,
}

/// `M_i ⊴ G` and `M_i / M_{i+1}` elementary abelian, by membership tests in
/// `M_{i+1}`: `h^p ∈ M_{i+1}` for all `h ∈ M_i` and `[x,y] ∈ M_{i+1}` for
/// generators `x, y` of `M_i`.
pub fn quotient_checks<G: GroupLaw + ?Sized>(group: &G, series: &[Subgroup], p: u64) -> Vec<QuotientCheck> {
    let ambient = generating_set(group, &Subgroup::whole(group.order()));
    series
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let normal = is_normal_by_generators(group, m, &ambient);
            let elementary_abelian = match series.get(i + 1) {
                None => true,
                Some(next) => {
                    let gens = generating_set(group, m);
                    m.elements().all(|h| next.contains(power(group, h, p)))
                        && gens.iter().all(|&x| gens.iter().all(|&y| next.contains(group.commutator(x, y))))
                }
            };
            QuotientCheck { index: i + 1, normal, elementary_abelian }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MSeriesEntry {
    pub index: usize,
    pub predicted_size: usize,
    pub computed_size: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MSeriesReport {
    pub entries: Vec<MSeriesEntry>,
    /// Last index with `M_d` nontrivial, from the computed series.
    pub computed_d: usize,
    /// The `d` stated for the family, when one is stated.
    pub stated_d: Option<u64>,
}

impl MSeriesReport {
    pub fn all_equal(&self) -> bool {
        self.entries.iter().all(|e| e.equal)
    }

    pub fn d_agrees(&self) -> bool {
        self.stated_d.is_none_or(|d| d == self.computed_d as u64)
    }
}

fn class_two_params(d: &GroupDescriptor) -> Result<u64, JenningsError> {
    match *d {
        GroupDescriptor::G1 { p, .. }
        | GroupDescriptor::G2 { p, .. }
        | GroupDescriptor::G3 { p, .. }
        | GroupDescriptor::G4 { p, .. } => Ok(p),
        _ => Err(JenningsError::NotClassTwo(d.to_string())),
    }
}

fn stated_d(d: &GroupDescriptor) -> Option<u64> {
    match *d {
        GroupDescriptor::G1 { p, alpha, beta, gamma } => {
            Some(if alpha == beta && beta == gamma { 2 * p.pow(gamma - 1) } else { p.pow(alpha - 1) })
        }
        GroupDescriptor::G2 { p, alpha, beta, .. } | GroupDescriptor::G3 { p, alpha, beta, .. } => {
            Some(p.pow(alpha.max(beta) - 1))
        }
        _ => None,
    }
}

/// Compares each computed `M_i` with the two-generator class-two prediction
/// `M_1 = G`, `M_2 = γ_2(G) G^(p)` and for `s ≥ 1`
/// `M_i = γ_2(G)^(p^s) G^(p^s)` on `2p^(s−1)+1 ≤ i ≤ p^s`,
/// `M_i = γ_2(G)^(p^s) G^(p^(s+1))` on `p^s+1 ≤ i ≤ 2p^s`.
pub fn mseries_closed_form_check<G: Presented>(group: &G, d: &GroupDescriptor) -> Result<MSeriesReport, JenningsError> {
    let p = class_two_params(d)?;
    let series = m_series(group, p)?;
    let whole = Subgroup::whole(group.order());
    let gens = generating_set(group, &whole);
    let gamma2 = commutator_with_whole(group, &whole, &gens);
    let mut g_pow: Vec<Subgroup> = vec![whole.clone()];
    let mut gamma_pow: Vec<Subgroup> = vec![gamma2.clone()];
    // G^(p^s) and γ_2^(p^s), extended on demand
    let ensure = |s: usize, g_pow: &mut Vec<Subgroup>, gamma_pow: &mut Vec<Subgroup>| {
        while g_pow.len() <= s {
            let next = power_subgroup(group, g_pow.last().unwrap(), p);
            g_pow.push(next);
            let next = power_subgroup(group, gamma_pow.last().unwrap(), p);
            gamma_pow.push(next);
        }
    };
    let mut entries = Vec::new();
    for (k, computed) in series.iter().enumerate() {
        let i = k + 1;
        let predicted = if i == 1 {
            whole.clone()
        } else if i == 2 {
            ensure(1, &mut g_pow, &mut gamma_pow);
            product_subgroup(group, &gamma2, &g_pow[1])
        } else {
            let mut s = 1usize;
            let mut ps = p as usize;
            while i > 2 * ps {
                s += 1;
                ps *= p as usize;
            }
            let g_index = if i <= ps { s } else { s + 1 };
            ensure(s + 1, &mut g_pow, &mut gamma_pow);
            product_subgroup(group, &gamma_pow[s], &g_pow[g_index])
        };
        entries.push(MSeriesEntry {
            index: i,
            predicted_size: predicted.size(),
            computed_size: computed.size(),
            equal: &predicted == computed,
        });
    }
    Ok(MSeriesReport { entries, computed_d: series.len() - 1, stated_d: stated_d(d) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerEntry {
    pub s: u32,
    /// `|⟨g^(p^s) : g ∈ G⟩|`
    pub generated_size: usize,
    /// `|⟨a^(p^s), b^(p^s), [a,b]^(p^s)⟩|`
    pub three_generator_size: usize,
    /// `|{g^(p^s) : g ∈ G}|`
    pub power_set_size: usize,
    pub closure_matches: bool,
    pub set_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub entries: Vec<PowerEntry>,
}

impl PowerReport {
    pub fn all_equal(&self) -> bool {
        self.entries.iter().all(|e| e.closure_matches && e.set_matches)
    }
}

/// For `s = 1, 2, …` up to the first trivial `G^(p^s)`, compares the power
/// subgroup with the closure of `a^(p^s), b^(p^s), [a,b]^(p^s)` and with
/// the bare set of `p^s`-th powers.
pub fn power_generators_check<G: Presented>(group: &G, d: &GroupDescriptor) -> Result<PowerReport, JenningsError> {
    let p = class_two_params(d)?;
    check_p_group(group, p)?;
    let (a, b) = (group.generator("a")?, group.generator("b")?);
    let c = group.commutator(a, b);
    let whole = Subgroup::whole(group.order());
    let mut entries = Vec::new();
    let mut q = 1u64;
    for s in 1.. {
        q *= p;
        let generated = power_subgroup(group, &whole, q);
        let three: [Element; 3] = [power(group, a, q), power(group, b, q), power(group, c, q)];
        let closure = subgroup_closure(group, three);
        let set = power_set(group, &whole, q);
        entries.push(PowerEntry {
            s,
            generated_size: generated.size(),
            three_generator_size: closure.size(),
            power_set_size: set.count_ones(..),
            closure_matches: closure == generated,
            set_matches: &set == generated.members(),
        });
        if generated.is_trivial() {
            break;
        }
    }
    Ok(PowerReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build, FiniteGroup};

    fn group(s: &str) -> FiniteGroup {
        build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn q8_series() {
        let q = group("q[8]");
        let series = m_series(&q, 2).unwrap();
        let sizes: Vec<usize> = series.iter().map(Subgroup::size).collect();
        assert_eq!(sizes, [8, 2, 1]);
        let y2 = q.pow(q.generator("y").unwrap(), 2);
        assert!(series[1].contains(y2));
        assert_eq!(jennings_exponents(&series, 2).unwrap(), [2, 1]);
        assert_eq!(loewy_polynomial(&[2, 1], 2), [1, 2, 2, 2, 1]);
    }

    #[test]
    fn cyclic_prime() {
        for p in [2u64, 3, 5, 7] {
            let c = group(&format!("c[{p}]"));
            let data = jennings_data(&c, p).unwrap();
            assert_eq!(data.sizes(), [p as usize, 1]);
            assert_eq!(data.exponents, [1]);
            assert_eq!(data.coefficients, vec![1; p as usize]);
            assert_eq!(data.loewy_length, p);
        }
        let t = group("c[1]");
        assert_eq!(jennings_data(&t, 3).unwrap().loewy_length, 1);
    }

    #[test]
    fn heisenberg_order_27() {
        let g = group("g1[3,1,1,1]");
        let data = jennings_data(&g, 3).unwrap();
        assert_eq!(data.sizes(), [27, 3, 1]);
        assert_eq!(data.exponents, [2, 1]);
        assert_eq!(data.loewy_length, 9);
        let c = &data.coefficients;
        assert_eq!(c.len(), 9);
        assert_eq!(c.iter().sum::<u64>(), 27);
        assert!(c.iter().eq(c.iter().rev()));
    }

    #[test]
    fn rejects_non_p_groups() {
        assert!(matches!(m_series(&group("d[6]"), 2), Err(JenningsError::NotPGroup { .. })));
        assert!(matches!(m_series(&group("c[9]"), 2), Err(JenningsError::NotPGroup { .. })));
        assert!(matches!(m_series(&group("c[9]"), 9), Err(JenningsError::NotPGroup { .. })));
    }

    #[test]
    fn formulas() {
        let f = |s: &str| loewy_formula(&s.parse().unwrap());
        assert_eq!(f("g1[3,1,1,1]"), Ok(9));
        assert_eq!(f("g2[3,2,1,1]"), Ok(11));
        assert_eq!(f("g3[3,3,2,2,1]"), Ok(39));
        assert_eq!(f("q[16]"), Ok(9));
        assert_eq!(f("d[8]"), Ok(5));
        assert!(matches!(f("sd[24]"), Err(JenningsError::NoFormula(_))));
        assert!(matches!(f("d[12]"), Err(JenningsError::NoFormula(_))));
        assert!(matches!(f("g4[3,4,2,2,1,0]"), Err(JenningsError::NoFormula(_))));
        assert!(matches!(f("c[3]"), Err(JenningsError::NoFormula(_))));
    }

    #[test]
    fn quotient_checks_pass_on_series() {
        for (s, p) in [("g1[3,2,1,1]", 3), ("m2[16]", 2), ("g2[3,2,1,1]", 3)] {
            let g = group(s);
            let series = m_series(&g, p).unwrap();
            for qc in quotient_checks(&g, &series, p) {
                assert!(qc.normal && qc.elementary_abelian, "{s} {qc:?}");
            }
        }
    }

    #[test]
    fn class_two_reports() {
        let g = group("g2[3,2,1,1]");
        let d = "g2[3,2,1,1]".parse().unwrap();
        let report = mseries_closed_form_check(&g, &d).unwrap();
        assert!(report.all_equal(), "{report:?}");
        assert!(report.d_agrees());
        let pw = power_generators_check(&g, &d).unwrap();
        assert!(pw.all_equal(), "{pw:?}");
        assert!(pw.entries.last().unwrap().generated_size == 1);
        assert!(mseries_closed_form_check(&group("q[8]"), &"q[8]".parse().unwrap()).is_err());
    }
}
