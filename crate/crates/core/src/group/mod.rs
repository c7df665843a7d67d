//! Explicit finite groups: multiplication tables built from normal-form
//! collection rules, plus the subgroup machinery the Jennings series needs.

mod descriptor;
mod normal_form;
mod presentation;
mod subgroup;

use std::fmt;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use descriptor::{enumerate_p_groups, Family, GroupDescriptor, GRAMMAR_HINT};
pub use normal_form::NormalForm;
pub use presentation::{verify_presentation, PresentationReport, RelationCheck};
pub use subgroup::{
    center, commutator_subgroup, commutator_with_whole, generating_set, is_normal, is_normal_by_generators,
    is_normal_in, lower_central_series, nilpotency_class, normal_closure, power_set, power_subgroup, product_subgroup,
    quotient_order, subgroup_closure, Subgroup,
};

use crate::numtheory::{divisors, lcm, prime_power_base};

/// Tables are refused above this order.
pub const ORDER_CAP: usize = 4096;

/// Full associativity is checked up to this order, sampled above it.
const FULL_ASSOCIATIVITY_LIMIT: usize = 512;
const ASSOCIATIVITY_SAMPLES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse descriptor `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("{descriptor} violates the constraint {constraint}")]
    Constraint { descriptor: String, constraint: String },
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCap { order: u64, cap: u64 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("no generator named `{0}`")]
    UnknownGenerator(String),
    #[error("not a subgroup relation: {0}")]
    NotNormalSubgroup(String),
}

/// Index of an element inside one group; index 0 is always the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// `x^k` for `k ≥ 0` by square-and-multiply.
pub fn power<G: GroupLaw + ?Sized>(group: &G, x: Element, mut k: u64) -> Element {
    let mut result = Element::IDENTITY;
    let mut base = x;
    while k > 0 {
        if k & 1 == 1 {
            result = group.mul(result, base);
        }
        k >>= 1;
        if k > 0 {
            base = group.mul(base, base);
        }
    }
    result
}

/// Group arithmetic on element indices.
pub trait GroupLaw {
    fn order(&self) -> usize;
    fn mul(&self, x: Element, y: Element) -> Element;
    fn inv(&self, x: Element) -> Element;

    fn elements(&self) -> std::iter::Map<std::ops::Range<u32>, fn(u32) -> Element> {
        (0..self.order() as u32).map(Element as fn(u32) -> Element)
    }

    /// `x^k`; negative `k` powers the inverse.
    fn pow(&self, x: Element, k: i64) -> Element {
        if k >= 0 {
            power(self, x, k as u64)
        } else {
            power(self, self.inv(x), k.unsigned_abs())
        }
    }

    /// `[x,y] = x⁻¹y⁻¹xy`.
    fn commutator(&self, x: Element, y: Element) -> Element {
        let left = self.mul(self.inv(x), self.inv(y));
        self.mul(left, self.mul(x, y))
    }

    /// Least `k ≥ 1` with `x^k = 1`.
    fn element_order(&self, x: Element) -> u64 {
        divisors(self.order() as u64).into_iter().find(|&d| power(self, x, d).is_identity()).expect("x^|G| = 1")
    }

    fn exponent(&self) -> u64 {
        self.elements().fold(1, |acc, x| lcm(acc, self.element_order(x)))
    }

    /// Left-to-right product of a sequence.
    fn product(&self, terms: &[Element]) -> Element {
        terms.iter().fold(Element::IDENTITY, |acc, &g| self.mul(acc, g))
    }
}

/// A group that knows its descriptor and named generators.
pub trait Presented: GroupLaw {
    fn normal_form(&self) -> &NormalForm;

    fn descriptor(&self) -> &GroupDescriptor {
        self.normal_form().descriptor()
    }

    fn generator(&self, name: &str) -> Result<Element, GroupError> {
        self.normal_form().generator(name)
    }
}

impl Presented for NormalForm {
    fn normal_form(&self) -> &NormalForm {
        self
    }
}

impl Presented for FiniteGroup {
    fn normal_form(&self) -> &NormalForm {
        &self.form
    }
}

/// A finite group stored as its complete multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    form: NormalForm,
    order: usize,
    table: Vec<Element>,
    inverse: Vec<Element>,
    labels: Vec<String>,
    prime: Option<u64>,
}

/// Validates the descriptor, runs the collection rule over all pairs and
/// checks the group axioms on the resulting table.
pub fn build(descriptor: &GroupDescriptor) -> Result<FiniteGroup, GroupError> {
    descriptor.validate()?;
    let order = descriptor.expected_order().unwrap_or(u64::MAX);
    if order > ORDER_CAP as u64 {
        return Err(GroupError::OrderCap { order, cap: ORDER_CAP as u64 });
    }
    FiniteGroup::from_normal_form(NormalForm::new(descriptor)?)
}

impl FiniteGroup {
    pub fn from_normal_form(form: NormalForm) -> Result<FiniteGroup, GroupError> {
        let n = form.order();
        if n > ORDER_CAP {
            return Err(GroupError::OrderCap { order: n as u64, cap: ORDER_CAP as u64 });
        }
        let digits: Vec<Vec<u64>> = form.elements().map(|x| form.decode(x)).collect();
        let mut table = Vec::with_capacity(n * n);
        for dx in &digits {
            for dy in &digits {
                table.push(form.encode(&form.mul_digits(dx, dy)));
            }
        }
        let labels = form.elements().map(|x| form.label(x)).collect();
        let mut group = FiniteGroup {
            prime: prime_power_base(n as u64),
            order: n,
            inverse: vec![Element::IDENTITY; n],
            table,
            labels,
            form,
        };
        group.fill_inverses()?;
        group.check_axioms()?;
        Ok(group)
    }

    fn fill_inverses(&mut self) -> Result<(), GroupError> {
        let n = self.order;
        for x in 0..n {
            let row = &self.table[x * n..(x + 1) * n];
            let y = row
                .iter()
                .position(|e| e.is_identity())
                .ok_or_else(|| GroupError::Inconsistent(format!("element {} has no right inverse", self.labels[x])))?;
            self.inverse[x] = Element(y as u32);
        }
        Ok(())
    }

    /// Identity, inverse, Latin-square and associativity checks. Associativity
    /// is exhaustive up to order 512 and sampled (fixed seed) above.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        let fail = |msg: String| Err(GroupError::Inconsistent(format!("{}: {msg}", self.descriptor())));
        for x in self.elements() {
            if self.mul(Element::IDENTITY, x) != x || self.mul(x, Element::IDENTITY) != x {
                return fail(format!("index 0 is not a two-sided identity at {x}"));
            }
            if !self.mul(self.inverse[x.index()], x).is_identity() {
                return fail(format!("inverse of {x} is one-sided"));
            }
        }
        let mut seen = vec![0u32; n];
        for x in 0..n {
            let stamp = x as u32 + 1;
            for y in 0..n {
                let z = self.table[x * n + y].index();
                if seen[z] == stamp {
                    return fail(format!("row {x} repeats an entry"));
                }
                seen[z] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for y in 0..n {
            let stamp = y as u32 + 1;
            for x in 0..n {
                let z = self.table[x * n + y].index();
                if seen[z] == stamp {
                    return fail(format!("column {y} repeats an entry"));
                }
                seen[z] = stamp;
            }
        }
        let assoc = |x: usize, y: usize, z: usize| {
            let xy = self.table[x * n + y].index();
            let yz = self.table[y * n + z].index();
            self.table[xy * n + z] == self.table[x * n + yz]
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(x, y, z) {
                            return fail(format!("({x}·{y})·{z} ≠ {x}·({y}·{z})"));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed_da7e);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(x, y, z) {
                    return fail(format!("({x}·{y})·{z} ≠ {x}·({y}·{z})"));
                }
            }
        }
        Ok(())
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn label(&self, x: Element) -> &str {
        &self.labels[x.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[(String, Element)] {
        self.form.generators()
    }

    /// Row `x` of the table: `row(x)[y] = x·y`.
    pub fn row(&self, x: Element) -> &[Element] {
        &self.table[x.index() * self.order..(x.index() + 1) * self.order]
    }

    /// Element with the given normal-form label.
    pub fn element_by_label(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label).map(|i| Element(i as u32))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| (x + 1..n).all(|y| self.table[x * n + y] == self.table[y * n + x]))
    }

    /// Some element has order `|G|`. The exponent alone does not decide
    /// this: `Q_12` has exponent 12.
    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|x| self.element_order(x) == self.order as u64)
    }
}

impl GroupLaw for FiniteGroup {
    #[inline]
    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, x: Element, y: Element) -> Element {
        self.table[x.index() * self.order + y.index()]
    }

    #[inline]
    fn inv(&self, x: Element) -> Element {
        self.inverse[x.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> FiniteGroup {
        build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn trivial_group_table() {
        let g = group("c[1]");
        assert_eq!(g.order(), 1);
        assert_eq!(g.row(Element::IDENTITY), &[Element::IDENTITY]);
        assert_eq!(g.prime(), None);
    }

    #[test]
    fn dicyclic_eight_relations() {
        let g = group("q[8]");
        assert_eq!(g.order(), 8);
        let (x, y) = (g.generator("x").unwrap(), g.generator("y").unwrap());
        assert_eq!(g.pow(x, 2), g.pow(y, 2));
        assert_eq!(g.pow(y, 4), Element::IDENTITY);
        assert!(!g.is_abelian());
    }

    #[test]
    fn heisenberg_order_27() {
        let g = group("g1[3,1,1,1]");
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 3);
        assert_eq!(center(&g).size(), 3);
        let (a, b, c) = (g.generator("a").unwrap(), g.generator("b").unwrap(), g.generator("c").unwrap());
        assert_eq!(g.commutator(a, b), c);
        assert_eq!(g.commutator(a, a), Element::IDENTITY);
    }

    #[test]
    fn element_orders() {
        let g = group("g2[3,2,1,1]");
        assert_eq!(g.element_order(g.generator("a").unwrap()), 9);
        assert_eq!(g.element_order(Element::IDENTITY), 1);
        assert_eq!(g.exponent(), 9);
        let q = group("q[8]");
        assert_eq!(q.pow(q.generator("y").unwrap(), 4), Element::IDENTITY);
        assert_eq!(q.pow(q.generator("y").unwrap(), -1), q.pow(q.generator("y").unwrap(), 3));
    }

    #[test]
    fn order_cap_is_enforced() {
        let err = build(&"g1[17,1,1,1]".parse().unwrap()).unwrap_err();
        assert!(matches!(err, GroupError::OrderCap { order: 4913, .. }));
        assert!(NormalForm::new(&"g1[17,1,1,1]".parse().unwrap()).is_ok());
    }

    #[test]
    fn sampled_associativity_above_full_limit() {
        let g = group("g3[3,3,2,2,1]");
        assert_eq!(g.order(), 729);
        assert!(g.check_axioms().is_ok());
    }

    #[test]
    fn semidihedral_tables_from_both_presentations_match() {
        for (n, r) in [(2u64, 4u32), (4, 5)] {
            let a = group(&format!("sd[{}]", 8 * n));
            let b = FiniteGroup::from_normal_form(NormalForm::semidihedral_power_of_two(r).unwrap()).unwrap();
            for x in a.elements() {
                assert_eq!(a.row(x), b.row(x));
            }
        }
    }
}
