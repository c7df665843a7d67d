use std::time::Instant;

use davlab_core::group::{build, GroupDescriptor, NormalForm, Presented, ORDER_CAP};
use davlab_core::jennings::loewy_formula;
use davlab_core::numtheory::is_prime;
use davlab_core::witnesses::{
    congruence_search, discriminant_check, least_qnr, witness_g1, witness_g3, CongruenceSystem, ResidueClass,
    WitnessError, WitnessOptions, WitnessSpec,
};
use davlab_core::zerosum::is_ordered_free;

type Make<G> = fn(&G, WitnessOptions) -> Result<WitnessSpec, WitnessError>;

fn verdict<G: Presented>(g: &G, make: Make<G>, opts: WitnessOptions) -> (WitnessSpec, bool) {
    let w = make(g, opts).unwrap();
    let free = is_ordered_free(g, &w.sequence());
    (w, free)
}

/// Witness and its freeness, on the table when the order allows.
fn witness_verdict(d: &GroupDescriptor, opts: WitnessOptions) -> (WitnessSpec, bool) {
    let g3 = matches!(d, GroupDescriptor::G3 { .. });
    if d.expected_order().unwrap() <= ORDER_CAP as u64 {
        let g = build(d).unwrap();
        verdict(&g, if g3 { witness_g3 } else { witness_g1 }, opts)
    } else {
        let g = NormalForm::new(d).unwrap();
        verdict(&g, if g3 { witness_g3 } else { witness_g1 }, opts)
    }
}

fn agree(s: &str, opts: WitnessOptions) -> bool {
    let d: GroupDescriptor = s.parse().unwrap();
    let t = Instant::now();
    let (w, free) = witness_verdict(&d, opts);
    let sys = CongruenceSystem::for_descriptor(&d, opts).unwrap();
    let oracle = congruence_search(&sys).unwrap();
    eprintln!(
        "{s} {}: free={free} oracle={} {:?} len={} ({:?})",
        w.case,
        oracle.only_trivial,
        oracle.counterexample,
        w.len(),
        t.elapsed()
    );
    assert_eq!(w.len() as u64 + 1, loewy_formula(&d).unwrap(), "{s}");
    assert_eq!(free, oracle.only_trivial, "{s}: group and congruence verdicts differ");
    free
}

const G1_GRID: [&str; 7] =
    ["g1[3,1,1,1]", "g1[3,2,1,1]", "g1[7,1,1,1]", "g1[5,1,1,1]", "g1[5,2,1,1]", "g1[13,1,1,1]", "g1[17,1,1,1]"];
const G3_GRID: [&str; 4] = ["g3[3,3,2,2,1]", "g3[3,4,2,2,1]", "g3[5,3,2,2,1]", "g3[7,3,2,2,1]"];

#[test]
fn g1_witnesses_are_free() {
    for s in G1_GRID {
        assert!(agree(s, WitnessOptions::default()), "{s}");
    }
}

#[test]
fn g3_witnesses_are_free() {
    for s in G3_GRID {
        assert!(agree(s, WitnessOptions::default()), "{s}");
    }
}

#[test]
fn g3_oracle_at_larger_primes() {
    for s in ["g3[13,3,2,2,1]", "g3[17,3,2,2,1]"] {
        let sys = CongruenceSystem::for_descriptor(&s.parse().unwrap(), WitnessOptions::default()).unwrap();
        let r = congruence_search(&sys).unwrap();
        assert!(r.only_trivial, "{s}: {:?}", r.counterexample);
    }
}

#[test]
fn wrong_residue_class_is_caught_by_both_routes() {
    let forced = |c| WitnessOptions { allow_unverified: false, force_class: Some(c) };
    for s in ["g1[5,1,1,1]", "g1[13,1,1,1]"] {
        assert!(!agree(s, forced(ResidueClass::ThreeMod4)), "{s}");
    }
    for s in ["g1[3,1,1,1]", "g1[7,1,1,1]"] {
        assert!(!agree(s, forced(ResidueClass::OneMod4)), "{s}");
    }
}

#[test]
fn discriminants_match_residue_class() {
    for p in (3..100).filter(|&p| is_prime(p)) {
        let class = ResidueClass::of(p);
        assert_eq!(discriminant_check(p, ResidueClass::ThreeMod4), Ok(class == ResidueClass::ThreeMod4), "{p}");
        assert_eq!(discriminant_check(p, ResidueClass::OneMod4), Ok(class == ResidueClass::OneMod4), "{p}");
    }
}

#[test]
fn least_qnr_bound() {
    for p in (3..10_000u64).filter(|&p| is_prime(p)) {
        let q = least_qnr(p).unwrap();
        assert!(is_prime(q) && ((q as f64) < (p as f64).sqrt() + 1.0), "{p}: {q}");
        // every smaller candidate is a residue
        assert!((2..q).all(|r| (1..p).any(|t| t * t % p == r)), "{p}");
    }
}
