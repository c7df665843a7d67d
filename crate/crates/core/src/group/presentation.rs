use std::fmt;

use serde::Serialize;

use super::{subgroup_closure, Element, GroupDescriptor, GroupError, GroupLaw, Presented};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub checks: Vec<RelationCheck>,
}

impl PresentationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    fn push(&mut self, relation: impl Into<String>, holds: bool) {
        self.checks.push(RelationCheck { relation: relation.into(), holds });
    }
}

impl fmt::Display for PresentationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}", if c.holds { "ok  " } else { "FAIL" }, c.relation)?;
        }
        Ok(())
    }
}

/// Evaluates every defining relation of the descriptor's family on `group`,
/// plus generator orders, `⟨generators⟩ = G` and the closed-form order.
pub fn verify_presentation<G: Presented>(
    group: &G,
    descriptor: &GroupDescriptor,
) -> Result<PresentationReport, GroupError> {
    let mut report = PresentationReport::default();
    let gen = |name: &str| group.generator(name);
    let pow = |x: Element, k: i64| group.pow(x, k);
    let ord = |x: Element| group.element_order(x);
    let id = Element::IDENTITY;
    let mut two_generated = None;
    match *descriptor {
        GroupDescriptor::Cyclic { n } => {
            let g = gen("g")?;
            report.push(format!("g^{n} = 1"), pow(g, n as i64) == id);
            report.push(format!("o(g) = {n}"), ord(g) == n);
        }
        GroupDescriptor::AbelianProduct { ref factors } => {
            let gens: Vec<(String, Element)> = group.normal_form().generators().to_vec();
            for (name, g) in &gens {
                let k: usize = name[1..].parse().unwrap();
                report.push(format!("o({name}) = {}", factors[k - 1]), ord(*g) == factors[k - 1]);
            }
            for (i, (ni, gi)) in gens.iter().enumerate() {
                for (nj, gj) in &gens[i + 1..] {
                    report.push(format!("[{ni},{nj}] = 1"), group.commutator(*gi, *gj) == id);
                }
            }
        }
        GroupDescriptor::Dihedral { order } => {
            let (x, y) = (gen("x")?, gen("y")?);
            let m = order / 2;
            report.push("x^2 = 1", pow(x, 2) == id);
            report.push(format!("o(y) = {m}"), ord(y) == m);
            report.push("x^-1 y x = y^-1", conj(group, x, y) == pow(y, -1));
            two_generated = Some((x, y));
        }
        GroupDescriptor::Dicyclic { order } => {
            let (x, y) = (gen("x")?, gen("y")?);
            let n = (order / 4) as i64;
            report.push(format!("x^2 = y^{n}"), pow(x, 2) == pow(y, n));
            report.push(format!("y^{} = 1", 2 * n), pow(y, 2 * n) == id);
            report.push(format!("o(y) = {}", 2 * n), ord(y) == 2 * n as u64);
            report.push("x^-1 y x = y^-1", conj(group, x, y) == pow(y, -1));
            two_generated = Some((x, y));
        }
        GroupDescriptor::Semidihedral { order } => {
            let (x, y) = (gen("x")?, gen("y")?);
            let n = (order / 8) as i64;
            report.push("x^2 = 1", pow(x, 2) == id);
            report.push(format!("o(y) = {}", 4 * n), ord(y) == 4 * n as u64);
            report.push(format!("x^-1 y x = y^{}", 2 * n - 1), conj(group, x, y) == pow(y, 2 * n - 1));
            two_generated = Some((x, y));
        }
        GroupDescriptor::Modular2 { order } => {
            let (x, y) = (gen("x")?, gen("y")?);
            let half = (order / 2) as i64;
            report.push("x^2 = 1", pow(x, 2) == id);
            report.push(format!("o(y) = {half}"), ord(y) == half as u64);
            report.push(format!("x^-1 y x = y^{}", half / 2 + 1), conj(group, x, y) == pow(y, half / 2 + 1));
            two_generated = Some((x, y));
        }
        GroupDescriptor::G1 { p, alpha, beta, gamma } => {
            let (a, b, c) = (gen("a")?, gen("b")?, gen("c")?);
            report.push("[a,b] = c", group.commutator(a, b) == c);
            report.push("[a,c] = 1", group.commutator(a, c) == id);
            report.push("[b,c] = 1", group.commutator(b, c) == id);
            report.push(format!("o(a) = p^{alpha}"), ord(a) == p.pow(alpha));
            report.push(format!("o(b) = p^{beta}"), ord(b) == p.pow(beta));
            report.push(format!("o(c) = p^{gamma}"), ord(c) == p.pow(gamma));
            two_generated = Some((a, b));
        }
        GroupDescriptor::G2 { p, alpha, beta, gamma } => {
            let (a, b) = (gen("a")?, gen("b")?);
            let ab = group.commutator(a, b);
            report.push("[a,b] = a^(p^(α−γ))", ab == pow(a, p.pow(alpha - gamma) as i64));
            report.push(format!("o(a) = p^{alpha}"), ord(a) == p.pow(alpha));
            report.push(format!("o(b) = p^{beta}"), ord(b) == p.pow(beta));
            report.push(format!("o([a,b]) = p^{gamma}"), ord(ab) == p.pow(gamma));
            two_generated = Some((a, b));
        }
        GroupDescriptor::G3 { p, alpha, beta, gamma, sigma } => {
            let (a, b, c) = (gen("a")?, gen("b")?, gen("c")?);
            let d = p.pow(alpha - gamma) as i64;
            report.push("[a,b] = a^(p^(α−γ)) c", group.commutator(a, b) == group.mul(pow(a, d), c));
            report.push(
                "[c,b] = a^(−p^(2(α−γ))) c^(−p^(α−γ))",
                group.commutator(c, b) == group.mul(pow(a, -(d * d)), pow(c, -d)),
            );
            report.push("[a,c] = 1", group.commutator(a, c) == id);
            report.push(format!("o(a) = p^{alpha}"), ord(a) == p.pow(alpha));
            report.push(format!("o(b) = p^{beta}"), ord(b) == p.pow(beta));
            report.push(format!("o(c) = p^{sigma}"), ord(c) == p.pow(sigma));
            report.push(format!("o([a,b]) = p^{gamma}"), ord(group.commutator(a, b)) == p.pow(gamma));
            two_generated = Some((a, b));
        }
        GroupDescriptor::G4 { p, alpha, beta, gamma, rho, sigma } => {
            let (a, b) = (gen("a")?, gen("b")?);
            let c = group.commutator(a, b);
            report.push("c = [a,b]", c == gen("c")?);
            report.push(format!("[a,b]^(p^{gamma}) = 1"), pow(c, p.pow(gamma) as i64) == id);
            report.push(format!("o([a,b]) = p^{gamma}"), ord(c) == p.pow(gamma));
            report.push("[a,b,a] = 1", group.commutator(c, a) == id);
            report.push("[a,b,b] = 1", group.commutator(c, b) == id);
            report.push(
                format!("a^(p^{alpha}) = [a,b]^(p^{rho})"),
                pow(a, p.pow(alpha) as i64) == pow(c, p.pow(rho) as i64),
            );
            report.push(
                format!("b^(p^{beta}) = [a,b]^(p^{sigma})"),
                pow(b, p.pow(beta) as i64) == pow(c, p.pow(sigma) as i64),
            );
            two_generated = Some((a, b));
        }
    }
    if let Some((u, v)) = two_generated {
        report.push(
            "G is generated by its two named generators",
            subgroup_closure(group, [u, v]).size() == group.order(),
        );
    } else {
        let gens: Vec<Element> = group.normal_form().generators().iter().map(|g| g.1).collect();
        report.push("G is generated by its named generators", subgroup_closure(group, gens).size() == group.order());
    }
    let expected = descriptor.expected_order();
    report.push(format!("|G| = {}", expected.unwrap_or(0)), expected == Some(group.order() as u64));
    Ok(report)
}

/// `x⁻¹ y x`
fn conj<G: GroupLaw>(group: &G, x: Element, y: Element) -> Element {
    group.mul(group.mul(group.inv(x), y), x)
}
