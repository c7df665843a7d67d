use std::time::Instant;

use davlab_core::group::{build, Element, FiniteGroup, GroupLaw};
use davlab_core::jennings::loewy_length;
use davlab_core::zerosum::{
    davenport_ordered, davenport_unordered, davenport_weighted, eg_invariant, eg_lower_witness,
    has_product_one_of_length, is_minimal_product_one, is_ordered_free, is_unordered_free, olson_white_bound,
    SearchConfig,
};

fn group(s: &str) -> FiniteGroup {
    build(&s.parse().unwrap()).unwrap()
}

/// Ordered freeness by direct enumeration of all `2^k − 1` index subsets.
fn subsets_free<G: GroupLaw>(g: &G, seq: &[Element], weights: &[u64]) -> bool {
    // every subset with a choice of weight per chosen term
    fn rec<G: GroupLaw>(g: &G, seq: &[Element], w: &[u64], i: usize, acc: Element, used: bool) -> bool {
        if i == seq.len() {
            return !(used && acc.is_identity());
        }
        if !rec(g, seq, w, i + 1, acc, used) {
            return false;
        }
        w.iter().all(|&a| rec(g, seq, w, i + 1, g.mul(acc, g.pow(seq[i], a as i64)), true))
    }
    rec(g, seq, weights, 0, Element::IDENTITY, false)
}

/// `1 + max k` such that some length-`k` sequence is free, enumerating
/// sequences term by term. Extensions of a non-free prefix are never free,
/// so pruning there loses no sequence.
fn naive_davenport<G: GroupLaw>(g: &G, weights: &[u64]) -> usize {
    fn rec<G: GroupLaw>(g: &G, w: &[u64], seq: &mut Vec<Element>) -> usize {
        let mut best = seq.len();
        for x in g.elements() {
            seq.push(x);
            if subsets_free(g, seq, w) {
                best = best.max(rec(g, w, seq));
            }
            seq.pop();
        }
        best
    }
    1 + rec(g, weights, &mut Vec::new())
}

const SMALL: [&str; 14] = [
    "c[1]", "c[2]", "c[3]", "c[4]", "c[5]", "c[6]", "c[7]", "c[8]", "c[9]", "c[10]", "ab[2,2]", "d[6]", "q[8]", "d[8]",
];

#[test]
fn ordered_matches_naive_oracle() {
    let cfg = SearchConfig::default();
    for s in SMALL {
        let g = group(s);
        let r = davenport_ordered(&g, &cfg).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, naive_davenport(&g, &[1]), "{s}");
        assert!(is_ordered_free(&g, &r.witness));
        assert!(subsets_free(&g, &r.witness, &[1]));
        let w = davenport_weighted(&g, &[1], &cfg);
        if g.order() > 1 {
            assert_eq!(w.unwrap().value, r.value, "{s}");
        }
    }
}

#[test]
fn weighted_matches_naive_oracle() {
    let cfg = SearchConfig::default();
    for (s, a) in
        [("c[5]", vec![1, 4]), ("q[8]", vec![1, 3]), ("d[6]", vec![1, 5]), ("c[6]", vec![1, 5]), ("ab[2,2]", vec![1])]
    {
        let g = group(s);
        let r = davenport_weighted(&g, &a, &cfg).unwrap();
        assert_eq!(r.value, naive_davenport(&g, &a), "{s} {a:?}");
        assert!(subsets_free(&g, &r.witness, &a));
    }
    assert_eq!(davenport_weighted(&group("c[5]"), &[1, 4], &cfg).unwrap().value, 3);
}

#[test]
fn olson_white_extremal_families() {
    let cfg = SearchConfig::default();
    for (s, d) in [("q[8]", 5), ("q[12]", 7), ("sd[16]", 9)] {
        let g = group(s);
        let t = Instant::now();
        let r = davenport_ordered(&g, &cfg).unwrap();
        assert!(r.exact && t.elapsed().as_secs() < 10, "{s}");
        assert_eq!(r.value, d, "{s}");
        assert_eq!(olson_white_bound(&g), Ok(d), "{s}");
    }
}

#[test]
fn two_groups_reach_loewy_length() {
    let cfg = SearchConfig::default();
    for s in ["d[8]", "q[8]", "d[16]", "q[16]", "sd[16]", "m2[16]"] {
        let g = group(s);
        let r = davenport_ordered(&g, &cfg).unwrap();
        assert!(r.exact);
        assert_eq!(Ok(r.value as u64), loewy_length(&g, 2), "{s}");
    }
}

#[test]
fn unordered_variant() {
    let cfg = SearchConfig::default();
    let m16 = group("m2[16]");
    let r = davenport_unordered(&m16, &cfg).unwrap();
    assert!(r.exact);
    assert_eq!(r.value, 9);
    assert_eq!(is_unordered_free(&m16, &r.witness), Ok(true));
    for s in ["c[4]", "c[7]", "ab[2,2]", "ab[2,4]", "ab[2,2,2]", "c[8]", "d[6]", "q[8]", "d[8]"] {
        let g = group(s);
        let u = davenport_unordered(&g, &cfg).unwrap();
        let o = davenport_ordered(&g, &cfg).unwrap();
        assert!(u.value <= o.value, "{s}");
        if g.is_abelian() {
            assert_eq!(u.value, o.value, "{s}");
        }
    }
}

#[test]
fn eg_variant() {
    let cfg = SearchConfig::default();
    for s in ["c[2]", "c[3]", "c[4]", "ab[2,2]", "d[6]"] {
        let g = group(s);
        let e = eg_invariant(&g, &cfg).unwrap();
        let d = davenport_ordered(&g, &cfg).unwrap();
        assert!(e.exact);
        assert!(e.value >= d.value + g.order() - 1, "{s}");
        assert!(!has_product_one_of_length(&g, &e.witness, g.order()));
        let lower = eg_lower_witness(&g, &d.witness).unwrap();
        assert!(!has_product_one_of_length(&g, &lower, g.order()));
    }
}

#[test]
fn witness_plus_inverse_is_minimal_product_one() {
    let cfg = SearchConfig::default();
    for s in ["q[8]", "d[6]", "c[7]", "ab[2,4]"] {
        let g = group(s);
        let r = davenport_ordered(&g, &cfg).unwrap();
        let mut seq = r.witness.clone();
        seq.push(g.inv(g.product(&r.witness)));
        assert_eq!(seq.len(), r.value);
        assert_eq!(is_minimal_product_one(&g, &seq), Ok(true), "{s}");
    }
}
