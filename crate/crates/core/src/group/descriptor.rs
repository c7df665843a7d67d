//! Family-plus-parameters identifiers for the groups this crate can build.
//!
//! The textual grammar is whitespace-free: `c[n]`, `ab[n1,n2,...]`, `d[2m]`,
//! `q[4n]`, `sd[8n]`, `m2[2^r]`, `g1[p,alpha,beta,gamma]`,
//! `g2[p,alpha,beta,gamma]`, `g3[p,alpha,beta,gamma,sigma]` and
//! `g4[p,alpha,beta,gamma,rho,sigma]`. The single parameter of the
//! dihedral-type families is the group order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::numtheory::{is_prime, prime_power_exponent};

pub const GRAMMAR_HINT: &str = "expected one of c[n], ab[n1,n2,...], d[2m], q[4n], sd[8n], m2[2^r], \
     g1[p,alpha,beta,gamma], g2[p,alpha,beta,gamma], g3[p,alpha,beta,gamma,sigma], \
     g4[p,alpha,beta,gamma,rho,sigma]";

/// Largest order a descriptor may describe at all (tables are capped far below).
const MAX_DESCRIBED_ORDER: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cyclic,
    AbelianProduct,
    Dihedral,
    Dicyclic,
    Semidihedral,
    Modular2,
    G1,
    G2,
    G3,
    G4,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Cyclic,
        Family::AbelianProduct,
        Family::Dihedral,
        Family::Dicyclic,
        Family::Semidihedral,
        Family::Modular2,
        Family::G1,
        Family::G2,
        Family::G3,
        Family::G4,
    ];

    /// Short tag used by the descriptor grammar.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Cyclic => "c",
            Family::AbelianProduct => "ab",
            Family::Dihedral => "d",
            Family::Dicyclic => "q",
            Family::Semidihedral => "sd",
            Family::Modular2 => "m2",
            Family::G1 => "g1",
            Family::G2 => "g2",
            Family::G3 => "g3",
            Family::G4 => "g4",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::AbelianProduct => "abelian_product",
            Family::Dihedral => "dihedral",
            Family::Dicyclic => "dicyclic",
            Family::Semidihedral => "semidihedral",
            Family::Modular2 => "modular2",
            Family::G1 => "g1",
            Family::G2 => "g2",
            Family::G3 => "g3",
            Family::G4 => "g4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.tag() == tag || f.name() == tag)
    }

    /// Positional parameter names, in grammar order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Cyclic => &["n"],
            Family::AbelianProduct => &[],
            Family::Dihedral | Family::Dicyclic | Family::Semidihedral | Family::Modular2 => &["order"],
            Family::G1 | Family::G2 => &["p", "alpha", "beta", "gamma"],
            Family::G3 => &["p", "alpha", "beta", "gamma", "sigma"],
            Family::G4 => &["p", "alpha", "beta", "gamma", "rho", "sigma"],
        }
    }

    /// The 2-generated families with a `x`, `y` presentation.
    pub fn is_dihedral_type(self) -> bool {
        matches!(self, Family::Dihedral | Family::Dicyclic | Family::Semidihedral | Family::Modular2)
    }

    /// The odd-prime 2-generator class-two families.
    pub fn is_class_two(self) -> bool {
        matches!(self, Family::G1 | Family::G2 | Family::G3 | Family::G4)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupDescriptor {
    Cyclic { n: u64 },
    AbelianProduct { factors: Vec<u64> },
    Dihedral { order: u64 },
    Dicyclic { order: u64 },
    Semidihedral { order: u64 },
    Modular2 { order: u64 },
    G1 { p: u64, alpha: u32, beta: u32, gamma: u32 },
    G2 { p: u64, alpha: u32, beta: u32, gamma: u32 },
    G3 { p: u64, alpha: u32, beta: u32, gamma: u32, sigma: u32 },
    G4 { p: u64, alpha: u32, beta: u32, gamma: u32, rho: u32, sigma: u32 },
}

fn pow_checked(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

impl GroupDescriptor {
    pub fn family(&self) -> Family {
        match self {
            GroupDescriptor::Cyclic { .. } => Family::Cyclic,
            GroupDescriptor::AbelianProduct { .. } => Family::AbelianProduct,
            GroupDescriptor::Dihedral { .. } => Family::Dihedral,
            GroupDescriptor::Dicyclic { .. } => Family::Dicyclic,
            GroupDescriptor::Semidihedral { .. } => Family::Semidihedral,
            GroupDescriptor::Modular2 { .. } => Family::Modular2,
            GroupDescriptor::G1 { .. } => Family::G1,
            GroupDescriptor::G2 { .. } => Family::G2,
            GroupDescriptor::G3 { .. } => Family::G3,
            GroupDescriptor::G4 { .. } => Family::G4,
        }
    }

    /// Named parameters in grammar order.
    pub fn params(&self) -> Vec<(String, u64)> {
        let values: Vec<u64> = match self {
            GroupDescriptor::Cyclic { n } => vec![*n],
            GroupDescriptor::AbelianProduct { factors } => {
                return factors.iter().enumerate().map(|(i, &n)| (format!("n{}", i + 1), n)).collect()
            }
            GroupDescriptor::Dihedral { order }
            | GroupDescriptor::Dicyclic { order }
            | GroupDescriptor::Semidihedral { order }
            | GroupDescriptor::Modular2 { order } => vec![*order],
            GroupDescriptor::G1 { p, alpha, beta, gamma } | GroupDescriptor::G2 { p, alpha, beta, gamma } => {
                vec![*p, *alpha as u64, *beta as u64, *gamma as u64]
            }
            GroupDescriptor::G3 { p, alpha, beta, gamma, sigma } => {
                vec![*p, *alpha as u64, *beta as u64, *gamma as u64, *sigma as u64]
            }
            GroupDescriptor::G4 { p, alpha, beta, gamma, rho, sigma } => {
                vec![*p, *alpha as u64, *beta as u64, *gamma as u64, *rho as u64, *sigma as u64]
            }
        };
        self.family().param_names().iter().map(|s| s.to_string()).zip(values).collect()
    }

    /// Builds a descriptor from a family and positional parameters.
    pub fn from_parts(family: Family, values: &[u64]) -> Result<GroupDescriptor, GroupError> {
        let bad = |reason: String| GroupError::Parse {
            input: format!("{}{:?}", family.tag(), values),
            reason: format!("{reason}; {GRAMMAR_HINT}"),
        };
        let want = family.param_names().len();
        if family != Family::AbelianProduct && values.len() != want {
            return Err(bad(format!("family {} takes {} parameter(s), got {}", family.tag(), want, values.len())));
        }
        let exp = |v: u64| -> Result<u32, GroupError> {
            u32::try_from(v).map_err(|_| bad(format!("exponent {v} out of range")))
        };
        Ok(match family {
            Family::Cyclic => GroupDescriptor::Cyclic { n: values[0] },
            Family::AbelianProduct => {
                if values.is_empty() {
                    return Err(bad("ab[...] needs at least one factor".into()));
                }
                GroupDescriptor::AbelianProduct { factors: values.to_vec() }
            }
            Family::Dihedral => GroupDescriptor::Dihedral { order: values[0] },
            Family::Dicyclic => GroupDescriptor::Dicyclic { order: values[0] },
            Family::Semidihedral => GroupDescriptor::Semidihedral { order: values[0] },
            Family::Modular2 => GroupDescriptor::Modular2 { order: values[0] },
            Family::G1 => GroupDescriptor::G1 {
                p: values[0],
                alpha: exp(values[1])?,
                beta: exp(values[2])?,
                gamma: exp(values[3])?,
            },
            Family::G2 => GroupDescriptor::G2 {
                p: values[0],
                alpha: exp(values[1])?,
                beta: exp(values[2])?,
                gamma: exp(values[3])?,
            },
            Family::G3 => GroupDescriptor::G3 {
                p: values[0],
                alpha: exp(values[1])?,
                beta: exp(values[2])?,
                gamma: exp(values[3])?,
                sigma: exp(values[4])?,
            },
            Family::G4 => GroupDescriptor::G4 {
                p: values[0],
                alpha: exp(values[1])?,
                beta: exp(values[2])?,
                gamma: exp(values[3])?,
                rho: exp(values[4])?,
                sigma: exp(values[5])?,
            },
        })
    }

    /// Checks the parameter inequalities of the family's presentation.
    pub fn validate(&self) -> Result<(), GroupError> {
        let fail = |constraint: &str| {
            Err(GroupError::Constraint { descriptor: self.to_string(), constraint: constraint.to_string() })
        };
        let odd_prime = |p: u64| is_prime(p) && p != 2;
        match *self {
            GroupDescriptor::Cyclic { n } => {
                if n < 1 {
                    return fail("n ≥ 1");
                }
            }
            GroupDescriptor::AbelianProduct { ref factors } => {
                if factors.is_empty() {
                    return fail("at least one factor");
                }
                if factors.iter().any(|&n| n < 1) {
                    return fail("every factor ≥ 1");
                }
            }
            GroupDescriptor::Dihedral { order } => {
                if order % 2 != 0 || order < 4 {
                    return fail("order = 2m with m ≥ 2");
                }
            }
            GroupDescriptor::Dicyclic { order } => {
                if order % 4 != 0 || order / 4 < 2 {
                    return fail("order = 4n with n ≥ 2");
                }
            }
            GroupDescriptor::Semidihedral { order } => {
                if order % 8 != 0 || order / 8 < 2 {
                    return fail("order = 8n with n ≥ 2");
                }
            }
            GroupDescriptor::Modular2 { order } => match prime_power_exponent(order, 2) {
                Some(r) if r >= 4 => {}
                _ => return fail("order = 2^r with r ≥ 4"),
            },
            GroupDescriptor::G1 { p, alpha, beta, gamma } => {
                if !odd_prime(p) {
                    return fail("p odd prime");
                }
                if !(alpha >= beta && beta >= gamma && gamma >= 1) {
                    return fail("α ≥ β ≥ γ ≥ 1");
                }
            }
            GroupDescriptor::G2 { p, alpha, beta, gamma } => {
                if !odd_prime(p) {
                    return fail("p odd prime");
                }
                if !(alpha >= 2 * gamma && beta >= gamma && gamma >= 1) {
                    return fail("α ≥ 2γ, β ≥ γ ≥ 1");
                }
            }
            GroupDescriptor::G3 { p, alpha, beta, gamma, sigma } => {
                if !odd_prime(p) {
                    return fail("p odd prime");
                }
                if !(beta >= gamma && gamma > sigma && sigma >= 1) {
                    return fail("β ≥ γ > σ ≥ 1");
                }
                if alpha + sigma < 2 * gamma {
                    return fail("α + σ ≥ 2γ");
                }
            }
            GroupDescriptor::G4 { p, alpha, beta, gamma, rho, sigma } => {
                if !odd_prime(p) {
                    return fail("p odd prime");
                }
                if !(alpha > beta && beta >= gamma && gamma >= 1) {
                    return fail("α > β ≥ γ ≥ 1");
                }
                if !(sigma < rho && rho < gamma.min(sigma + alpha - beta)) {
                    return fail("0 ≤ σ < ρ < min{γ, σ+α−β}");
                }
            }
        }
        match self.expected_order() {
            Some(n) if n <= MAX_DESCRIBED_ORDER => Ok(()),
            _ => fail("group order ≤ 2^40"),
        }
    }

    /// Closed-form group order, `None` on overflow.
    pub fn expected_order(&self) -> Option<u64> {
        match *self {
            GroupDescriptor::Cyclic { n } => Some(n),
            GroupDescriptor::AbelianProduct { ref factors } => {
                factors.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n))
            }
            GroupDescriptor::Dihedral { order }
            | GroupDescriptor::Dicyclic { order }
            | GroupDescriptor::Semidihedral { order }
            | GroupDescriptor::Modular2 { order } => Some(order),
            GroupDescriptor::G1 { p, alpha, beta, gamma } => pow_checked(p, alpha + beta + gamma),
            GroupDescriptor::G2 { p, alpha, beta, .. } => pow_checked(p, alpha + beta),
            GroupDescriptor::G3 { p, alpha, beta, sigma, .. } => pow_checked(p, alpha + beta + sigma),
            GroupDescriptor::G4 { p, alpha, beta, gamma, .. } => pow_checked(p, alpha + beta + gamma),
        }
    }

    /// The prime `p` when the described group is a nontrivial p-group.
    pub fn prime(&self) -> Option<u64> {
        match *self {
            GroupDescriptor::G1 { p, .. }
            | GroupDescriptor::G2 { p, .. }
            | GroupDescriptor::G3 { p, .. }
            | GroupDescriptor::G4 { p, .. } => Some(p),
            _ => self.expected_order().and_then(crate::numtheory::prime_power_base),
        }
    }

    pub fn is_p_group(&self) -> bool {
        self.prime().is_some()
    }
}

/// Every valid descriptor of `family` that is a `p`-group of order at most
/// `max_order`, in increasing parameter order. Dihedral-type families exist
/// only for `p = 2`, the class-two families only for odd `p`.
pub fn enumerate_p_groups(family: Family, p: u64, max_order: u64) -> Vec<GroupDescriptor> {
    if !crate::numtheory::is_prime(p) || max_order < p {
        return Vec::new();
    }
    let mut top = 0u32;
    while pow_checked(p, top + 1).is_some_and(|q| q <= max_order) {
        top += 1;
    }
    let mut out = Vec::new();
    let mut push = |d: GroupDescriptor| {
        if d.validate().is_ok() && d.expected_order().is_some_and(|o| o <= max_order) {
            out.push(d);
        }
    };
    match family {
        Family::Cyclic => (1..=top).for_each(|k| push(GroupDescriptor::Cyclic { n: p.pow(k) })),
        Family::AbelianProduct => {
            // partitions of k into at least two non-increasing parts
            fn parts(rest: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
                if rest == 0 {
                    if acc.len() >= 2 {
                        out.push(acc.clone());
                    }
                    return;
                }
                for part in (1..=rest.min(max)).rev() {
                    acc.push(part);
                    parts(rest - part, part, acc, out);
                    acc.pop();
                }
            }
            for k in 2..=top {
                let mut all = Vec::new();
                parts(k, k, &mut Vec::new(), &mut all);
                for lambda in all.into_iter().rev() {
                    push(GroupDescriptor::AbelianProduct { factors: lambda.iter().map(|&e| p.pow(e)).collect() });
                }
            }
        }
        Family::Dihedral | Family::Dicyclic | Family::Semidihedral | Family::Modular2 => {
            if p == 2 {
                for r in 2..=top {
                    let order = 1u64 << r;
                    push(match family {
                        Family::Dihedral => GroupDescriptor::Dihedral { order },
                        Family::Dicyclic => GroupDescriptor::Dicyclic { order },
                        Family::Semidihedral => GroupDescriptor::Semidihedral { order },
                        _ => GroupDescriptor::Modular2 { order },
                    });
                }
            }
        }
        Family::G1 | Family::G2 | Family::G3 | Family::G4 => {
            let range = || 0..=top;
            for alpha in range() {
                for beta in range() {
                    for gamma in range() {
                        match family {
                            Family::G1 => push(GroupDescriptor::G1 { p, alpha, beta, gamma }),
                            Family::G2 => push(GroupDescriptor::G2 { p, alpha, beta, gamma }),
                            Family::G3 => {
                                for sigma in range() {
                                    push(GroupDescriptor::G3 { p, alpha, beta, gamma, sigma });
                                }
                            }
                            _ => {
                                for rho in range() {
                                    for sigma in range() {
                                        push(GroupDescriptor::G4 { p, alpha, beta, gamma, rho, sigma });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out.sort_by_key(|d| (d.expected_order(), d.params().into_iter().map(|(_, v)| v).collect::<Vec<_>>()));
        }
    }
    out
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.params().into_iter().map(|(_, v)| v.to_string()).collect();
        write!(f, "{}[{}]", self.family().tag(), values.join(","))
    }
}

impl FromStr for GroupDescriptor {
    type Err = GroupError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let bad =
            |reason: &str| GroupError::Parse { input: input.to_string(), reason: format!("{reason}; {GRAMMAR_HINT}") };
        let open = input.find('[').ok_or_else(|| bad("missing '['"))?;
        if !input.ends_with(']') {
            return Err(bad("missing closing ']'"));
        }
        let tag = &input[..open];
        let family = Family::from_tag(tag).ok_or_else(|| bad("unknown family"))?;
        let body = &input[open + 1..input.len() - 1];
        let values = body
            .split(',')
            .map(|s| {
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    Err(bad("parameters must be decimal integers"))
                } else {
                    s.parse::<u64>().map_err(|_| bad("parameter out of range"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupDescriptor::from_parts(family, &values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> GroupDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_round_trip() {
        for s in [
            "c[1]",
            "ab[2,2]",
            "d[6]",
            "q[8]",
            "sd[16]",
            "m2[16]",
            "g1[3,1,1,1]",
            "g2[3,2,1,1]",
            "g3[3,3,2,2,1]",
            "g4[3,4,2,2,1,0]",
        ] {
            assert_eq!(parse(s).to_string(), s);
        }
        assert_eq!(parse("c[007]").to_string(), "c[7]");
    }

    #[test]
    fn parse_errors_carry_grammar_hint() {
        for s in ["x[3]", "c[3", "c[]", "c[-1]", "g1[3,1,1]", "c[ 3]", "g1"] {
            match s.parse::<GroupDescriptor>() {
                Err(GroupError::Parse { reason, .. }) => assert!(reason.contains("g1[p,alpha")),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn presentation_constraints() {
        assert!(parse("g1[3,1,1,1]").validate().is_ok());
        let err = parse("g3[3,2,2,2,1]").validate().unwrap_err();
        assert!(err.to_string().contains("α + σ ≥ 2γ"), "{err}");
        let err = parse("q[4]").validate().unwrap_err();
        assert!(err.to_string().contains("n ≥ 2"), "{err}");
        assert!(parse("g1[3,1,2,1]").validate().is_err());
        assert!(parse("g1[9,1,1,1]").validate().is_err());
        assert!(parse("g1[2,1,1,1]").validate().is_err());
        assert!(parse("g2[3,1,1,1]").validate().is_err());
        assert!(parse("g2[3,2,1,1]").validate().is_ok());
        assert!(parse("g3[3,3,2,2,1]").validate().is_ok());
        assert!(parse("g3[3,3,2,1,1]").validate().is_err());
        assert!(parse("g4[3,4,2,2,1,0]").validate().is_ok());
        assert!(parse("g4[3,3,2,2,1,0]").validate().is_err());
        assert!(parse("g4[3,3,2,2,2,0]").validate().is_err());
        assert!(parse("g4[3,3,2,2,0,0]").validate().is_err());
        assert!(parse("m2[8]").validate().is_err());
        assert!(parse("m2[24]").validate().is_err());
        assert!(parse("sd[8]").validate().is_err());
        assert!(parse("sd[24]").validate().is_ok());
        assert!(parse("d[6]").validate().is_ok());
        assert!(parse("d[7]").validate().is_err());
        assert!(parse("c[0]").validate().is_err());
    }

    #[test]
    fn grid_enumeration() {
        let names = |v: Vec<GroupDescriptor>| v.iter().map(|d| d.to_string()).collect::<Vec<_>>();
        assert_eq!(names(enumerate_p_groups(Family::G3, 3, 729)), ["g3[3,3,2,2,1]"]);
        assert!(enumerate_p_groups(Family::G4, 3, 4096).is_empty());
        assert_eq!(names(enumerate_p_groups(Family::G4, 3, 6561)), ["g4[3,4,2,2,1,0]"]);
        assert_eq!(enumerate_p_groups(Family::G1, 3, 729).len(), 7);
        assert_eq!(names(enumerate_p_groups(Family::Modular2, 2, 32)), ["m2[16]", "m2[32]"]);
        assert!(enumerate_p_groups(Family::Dihedral, 3, 729).is_empty());
        assert_eq!(names(enumerate_p_groups(Family::AbelianProduct, 2, 8)), ["ab[2,2]", "ab[2,2,2]", "ab[4,2]"]);
        for d in enumerate_p_groups(Family::G2, 5, 4096) {
            assert!(d.validate().is_ok() && d.expected_order().unwrap() <= 4096);
        }
    }

    #[test]
    fn closed_form_orders() {
        assert_eq!(parse("g1[3,2,1,1]").expected_order(), Some(81));
        assert_eq!(parse("g2[3,2,1,1]").expected_order(), Some(27));
        assert_eq!(parse("g3[3,3,2,2,1]").expected_order(), Some(729));
        assert_eq!(parse("g4[3,4,2,2,1,0]").expected_order(), Some(6561));
        assert_eq!(parse("ab[2,3,4]").expected_order(), Some(24));
        assert_eq!(parse("q[12]").prime(), None);
        assert_eq!(parse("q[16]").prime(), Some(2));
        assert_eq!(parse("c[1]").prime(), None);
    }
}
