//! Table-free group arithmetic on normal-form words.
//!
//! Every family is encoded as a mixed-radix tuple of generator exponents;
//! the tuple with all digits zero (index 0) is the identity. Each family
//! carries a collection rule that multiplies two normal forms. The rules are
//! trusted only after `FiniteGroup` checks the axioms and
//! `verify_presentation` checks the defining relations.

use super::{descriptor::GroupDescriptor, power, Element, GroupError, GroupLaw};
use crate::numtheory::{mod_inv, mod_pow};

/// Endomorphism of `Z/m0 × Z/m1` written as images of the two basis vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct MixedMap {
    cols: [[u64; 2]; 2],
}

impl MixedMap {
    fn identity() -> Self {
        MixedMap { cols: [[1, 0], [0, 1]] }
    }

    fn apply(&self, v: [u64; 2], moduli: [u64; 2]) -> [u64; 2] {
        let [c0, c1] = self.cols;
        let x = (c0[0] as u128 * v[0] as u128 + c1[0] as u128 * v[1] as u128) % moduli[0] as u128;
        let y = (c0[1] as u128 * v[0] as u128 + c1[1] as u128 * v[1] as u128) % moduli[1] as u128;
        [x as u64, y as u64]
    }

    /// `self ∘ other`
    fn compose(&self, other: &MixedMap, moduli: [u64; 2]) -> MixedMap {
        MixedMap { cols: [self.apply(other.cols[0], moduli), self.apply(other.cols[1], moduli)] }
    }
}

#[derive(Clone, Debug)]
enum Law {
    /// Componentwise addition.
    Abelian,
    /// Digits `(i, e)` for `y^i x^e`, `e ∈ {0,1}`, with `x y x⁻¹ = y^twist`
    /// and `x² = y^square`.
    Metacyclic { twist: u64, square: u64 },
    /// Digits `(i, j, t)` for `a^i b^j c^t` with `c = [a,b]` central,
    /// `a^(p^α) = c^a_carry` and `b^(p^β) = c^b_carry`.
    ClassTwo { a_carry: u64, b_carry: u64 },
    /// Digits `(i, j)` for `a^i b^j`; `conj[j]` is the exponent `u` with
    /// `b^j a b^-j = a^u`.
    CyclicByCyclic { conj: Vec<u64> },
    /// Digits `(i, t, j)` for `a^i c^t b^j`; `conj[j]` is the action of
    /// conjugation `n ↦ b^j n b^-j` on `⟨a⟩ × ⟨c⟩`.
    AbelianByCyclic { conj: Vec<MixedMap> },
}

/// A group given by normal forms and a collection rule.
#[derive(Clone, Debug)]
pub struct NormalForm {
    descriptor: GroupDescriptor,
    radices: Vec<u64>,
    digit_names: Vec<String>,
    law: Law,
    order: usize,
    generators: Vec<(String, Element)>,
}

fn pw(p: u64, e: u32) -> u64 {
    p.pow(e)
}

impl NormalForm {
    /// Sets up the collection rule for a validated descriptor. No order cap
    /// applies here beyond what fits an element index.
    pub fn new(descriptor: &GroupDescriptor) -> Result<NormalForm, GroupError> {
        descriptor.validate()?;
        let order = descriptor.expected_order().unwrap_or(u64::MAX);
        if order > u32::MAX as u64 {
            return Err(GroupError::OrderCap { order, cap: u32::MAX as u64 });
        }
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (radices, digit_names, law) = match *descriptor {
            GroupDescriptor::Cyclic { n } => (vec![n], names(&["g"]), Law::Abelian),
            GroupDescriptor::AbelianProduct { ref factors } => {
                (factors.clone(), (1..=factors.len()).map(|i| format!("e{i}")).collect(), Law::Abelian)
            }
            GroupDescriptor::Dihedral { order } => {
                let n = order / 2;
                metacyclic(n, n - 1, 0)?
            }
            GroupDescriptor::Dicyclic { order } => {
                let m = order / 4;
                metacyclic(2 * m, 2 * m - 1, m)?
            }
            GroupDescriptor::Semidihedral { order } => {
                let m = order / 8;
                metacyclic(4 * m, 2 * m - 1, 0)?
            }
            GroupDescriptor::Modular2 { order } => {
                let n = order / 2;
                metacyclic(n, n / 2 + 1, 0)?
            }
            GroupDescriptor::G1 { p, alpha, beta, gamma } => (
                vec![pw(p, alpha), pw(p, beta), pw(p, gamma)],
                names(&["a", "b", "c"]),
                Law::ClassTwo { a_carry: 0, b_carry: 0 },
            ),
            GroupDescriptor::G4 { p, alpha, beta, gamma, rho, sigma } => (
                vec![pw(p, alpha), pw(p, beta), pw(p, gamma)],
                names(&["a", "b", "c"]),
                Law::ClassTwo { a_carry: pw(p, rho), b_carry: pw(p, sigma) },
            ),
            GroupDescriptor::G2 { p, alpha, beta, gamma } => {
                let (ma, mb) = (pw(p, alpha), pw(p, beta));
                // [a,b] = a^(p^(α−γ))  ⇔  b⁻¹ a b = a^u
                let u = (1 + pw(p, alpha - gamma)) % ma;
                if mod_pow(u, mb, ma) != 1 {
                    return Err(GroupError::Inconsistent(format!(
                        "{descriptor}: conjugation by b does not have order dividing p^β"
                    )));
                }
                let u_inv = mod_inv(u, ma).expect("1 + p^k is a unit mod p^α");
                let conj = (0..mb).map(|j| mod_pow(u_inv, j, ma)).collect();
                (vec![ma, mb], names(&["a", "b"]), Law::CyclicByCyclic { conj })
            }
            GroupDescriptor::G3 { p, alpha, beta, gamma, sigma } => {
                let (ma, mc, mb) = (pw(p, alpha), pw(p, sigma), pw(p, beta));
                let moduli = [ma, mc];
                let d = pw(p, alpha - gamma);
                // φ(n) = b⁻¹ n b, read off from [a,b] = a^d c and
                // [c,b] = a^(−d²) c^(−d).
                let phi =
                    MixedMap { cols: [[(1 + d) % ma, 1 % mc], [(ma - (d * d) % ma) % ma, (mc + 1 - d % mc) % mc]] };
                let mut powers = vec![MixedMap::identity()];
                for _ in 0..mb {
                    let next = phi.compose(powers.last().unwrap(), moduli);
                    powers.push(next);
                }
                if powers[mb as usize] != MixedMap::identity() {
                    return Err(GroupError::Inconsistent(format!(
                        "{descriptor}: conjugation by b has order not dividing p^β"
                    )));
                }
                // b^j n b^-j = φ^(−j)(n)
                let conj = (0..mb).map(|j| powers[((mb - j) % mb) as usize]).collect();
                (vec![ma, mc, mb], names(&["a", "c", "b"]), Law::AbelianByCyclic { conj })
            }
        };
        let mut form = NormalForm {
            descriptor: descriptor.clone(),
            radices,
            digit_names,
            law,
            order: order as usize,
            generators: Vec::new(),
        };
        form.generators = form.default_generators();
        Ok(form)
    }

    /// The semidihedral group of order `2^r` from the presentation
    /// `x² = y^(2^(r−1)) = 1, x⁻¹yx = y^(2^(r−2)−1)`.
    pub fn semidihedral_power_of_two(r: u32) -> Result<NormalForm, GroupError> {
        if r < 4 {
            return Err(GroupError::Constraint { descriptor: format!("sd[2^{r}]"), constraint: "r ≥ 4".into() });
        }
        let order = 1u64 << r;
        let descriptor = GroupDescriptor::Semidihedral { order };
        let (radices, digit_names, law) = metacyclic(1 << (r - 1), (1 << (r - 2)) - 1, 0)?;
        let mut form =
            NormalForm { descriptor, radices, digit_names, law, order: order as usize, generators: Vec::new() };
        form.generators = form.default_generators();
        Ok(form)
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn generators(&self) -> &[(String, Element)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<Element, GroupError> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, g)| g)
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))
    }

    fn default_generators(&self) -> Vec<(String, Element)> {
        (0..self.radices.len())
            .filter(|&k| self.radices[k] > 1 || self.radices.len() == 1)
            .map(|k| {
                let mut digits = vec![0; self.radices.len()];
                if self.radices[k] > 1 {
                    digits[k] = 1;
                }
                (self.digit_names[k].clone(), self.encode(&digits))
            })
            .collect()
    }

    pub fn encode(&self, digits: &[u64]) -> Element {
        let mut index = 0u64;
        for (d, r) in digits.iter().zip(&self.radices).rev() {
            index = index * r + d % r;
        }
        Element(index as u32)
    }

    pub fn decode(&self, x: Element) -> Vec<u64> {
        let mut rest = x.0 as u64;
        self.radices
            .iter()
            .map(|r| {
                let d = rest % r;
                rest /= r;
                d
            })
            .collect()
    }

    /// Normal-form word such as `a^2 b c`, or `1` for the identity.
    pub fn label(&self, x: Element) -> String {
        let digits = self.decode(x);
        let (order, names): (Vec<usize>, &[String]) = match self.law {
            // print a^i b^j for the digit layout (i, t, j)
            Law::AbelianByCyclic { .. } => (vec![0, 2, 1], &self.digit_names),
            _ => ((0..digits.len()).collect(), &self.digit_names),
        };
        let parts: Vec<String> = order
            .into_iter()
            .filter(|&k| digits[k] != 0)
            .map(|k| if digits[k] == 1 { names[k].clone() } else { format!("{}^{}", names[k], digits[k]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub(super) fn mul_digits(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let r = &self.radices;
        match &self.law {
            Law::Abelian => x.iter().zip(y).zip(r).map(|((a, b), m)| (a + b) % m).collect(),
            Law::Metacyclic { twist, square } => {
                let n = r[0];
                let shifted = if x[1] == 1 { y[0] * twist % n } else { y[0] };
                let carry = if x[1] == 1 && y[1] == 1 { *square } else { 0 };
                vec![(x[0] + shifted + carry) % n, x[1] ^ y[1]]
            }
            Law::ClassTwo { a_carry, b_carry } => {
                let (ma, mb, mc) = (r[0], r[1], r[2]);
                let mut i = x[0] + y[0];
                let mut j = x[1] + y[1];
                let mut t = x[2] + y[2] + mc - (x[1] * y[0]) % mc;
                if i >= ma {
                    i -= ma;
                    t += a_carry;
                }
                if j >= mb {
                    j -= mb;
                    t += b_carry;
                }
                vec![i, j, t % mc]
            }
            Law::CyclicByCyclic { conj } => {
                let (ma, mb) = (r[0], r[1]);
                let moved = (y[0] as u128 * conj[x[1] as usize] as u128 % ma as u128) as u64;
                vec![(x[0] + moved) % ma, (x[1] + y[1]) % mb]
            }
            Law::AbelianByCyclic { conj } => {
                let moduli = [r[0], r[1]];
                let [ya, yc] = conj[x[2] as usize].apply([y[0], y[1]], moduli);
                vec![(x[0] + ya) % r[0], (x[1] + yc) % r[1], (x[2] + y[2]) % r[2]]
            }
        }
    }
}

fn metacyclic(n: u64, twist: u64, square: u64) -> Result<(Vec<u64>, Vec<String>, Law), GroupError> {
    if n == 0 || (twist as u128 * twist as u128) % n as u128 != 1 % n as u128 {
        return Err(GroupError::Inconsistent(format!("twist {twist} is not an involution mod {n}")));
    }
    if (square as u128 * twist as u128) % n as u128 != square as u128 % n as u128 {
        return Err(GroupError::Inconsistent(format!("x² = y^{square} does not commute with x")));
    }
    Ok((vec![n, 2], vec!["y".into(), "x".into()], Law::Metacyclic { twist: twist % n, square: square % n }))
}

impl GroupLaw for NormalForm {
    fn order(&self) -> usize {
        self.order
    }

    fn mul(&self, x: Element, y: Element) -> Element {
        let digits = self.mul_digits(&self.decode(x), &self.decode(y));
        self.encode(&digits)
    }

    fn inv(&self, x: Element) -> Element {
        power(self, x, self.order as u64 - 1)
    }
}
