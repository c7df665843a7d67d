//! Picks the table-backed group when the order allows and the normal form
//! above the cap.

use anyhow::{Context, Result};
use davlab_core::group::{build, FiniteGroup, GroupDescriptor, NormalForm, Presented, ORDER_CAP};
use davlab_core::witnesses::{
    witness_g1, witness_g2, witness_g3, witness_theorem1, witness_theorem7, WitnessError, WitnessOptions, WitnessSpec,
};

pub enum Loaded {
    Table(FiniteGroup),
    Form(NormalForm),
}

impl Loaded {
    pub fn load(d: &GroupDescriptor) -> Result<Loaded> {
        let order = d.expected_order().unwrap_or(u64::MAX);
        if order <= ORDER_CAP as u64 {
            Ok(Loaded::Table(build(d).with_context(|| format!("cannot build {d}"))?))
        } else {
            Ok(Loaded::Form(NormalForm::new(d).with_context(|| format!("cannot build {d}"))?))
        }
    }

    pub fn get(&self) -> &(dyn Presented + Sync) {
        match self {
            Loaded::Table(g) => g,
            Loaded::Form(g) => g,
        }
    }
}

/// The table, required by the exhaustive searches.
pub fn table(d: &GroupDescriptor) -> Result<FiniteGroup> {
    build(d).with_context(|| format!("cannot build the multiplication table of {d}"))
}

/// Which published construction applies to a descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Dicyclic and semidihedral groups, `y^(|G|/2−1) x`.
    HalfCycle,
    /// Class-two families g1, g2, g3.
    ClassTwo,
    /// Dihedral-type 2-groups.
    TwoGroup,
}

impl Theorem {
    pub fn from_number(n: u32) -> Option<Theorem> {
        match n {
            1 => Some(Theorem::HalfCycle),
            6 => Some(Theorem::ClassTwo),
            7 => Some(Theorem::TwoGroup),
            _ => None,
        }
    }

    /// The construction a scan row uses by default.
    pub fn for_descriptor(d: &GroupDescriptor) -> Option<Theorem> {
        use GroupDescriptor as D;
        let two_power = d.expected_order().is_some_and(|n| n >= 8 && n.is_power_of_two());
        match d {
            D::Dihedral { .. } | D::Dicyclic { .. } | D::Semidihedral { .. } | D::Modular2 { .. } if two_power => {
                Some(Theorem::TwoGroup)
            }
            D::Dicyclic { .. } | D::Semidihedral { .. } => Some(Theorem::HalfCycle),
            D::G1 { .. } | D::G2 { .. } | D::G3 { .. } => Some(Theorem::ClassTwo),
            _ => None,
        }
    }
}

pub fn construct(group: &(dyn Presented + Sync), theorem: Theorem, explore: bool) -> Result<WitnessSpec, WitnessError> {
    let opts = WitnessOptions { allow_unverified: explore, force_class: None };
    match theorem {
        Theorem::HalfCycle => witness_theorem1(group),
        Theorem::TwoGroup => witness_theorem7(group),
        Theorem::ClassTwo => match group.descriptor() {
            GroupDescriptor::G1 { .. } => witness_g1(group, opts),
            GroupDescriptor::G2 { .. } => witness_g2(group),
            GroupDescriptor::G3 { .. } => witness_g3(group, opts),
            d => Err(WitnessError::WrongFamily { descriptor: d.to_string(), reason: "expected g1, g2 or g3".into() }),
        },
    }
}

/// Whether the class-two witness of `d` lies inside the proven range.
pub fn class_two_in_scope(d: &GroupDescriptor) -> bool {
    match *d {
        GroupDescriptor::G1 { gamma, .. } => gamma == 1,
        GroupDescriptor::G3 { sigma, .. } => sigma == 1,
        _ => true,
    }
}
