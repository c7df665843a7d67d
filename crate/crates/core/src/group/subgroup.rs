//! Subgroups as bit-vectors over element indices of a parent group.
//!
//! A `Subgroup` does not hold a reference to its parent; every operation
//! takes the parent group explicitly and the caller keeps them paired.

use fixedbitset::FixedBitSet;

use super::{power, Element, GroupError, GroupLaw};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: FixedBitSet,
    size: usize,
}

impl Subgroup {
    pub fn trivial(parent_order: usize) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(parent_order);
        members.insert(0);
        Subgroup { members, size: 1 }
    }

    pub fn whole(parent_order: usize) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(parent_order);
        members.insert_range(..);
        Subgroup { members, size: parent_order }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        self.members.contains(x.index())
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.ones().map(|i| Element(i as u32))
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Least subgroup containing `gens`. Generators are added one at a time and
/// the set is closed under right multiplication by every generator used.
pub fn subgroup_closure<G, I>(group: &G, gens: I) -> Subgroup
where
    G: GroupLaw + ?Sized,
    I: IntoIterator<Item = Element>,
{
    let n = group.order();
    let mut members = FixedBitSet::with_capacity(n);
    members.insert(0);
    let mut elems = vec![Element::IDENTITY];
    let mut used: Vec<Element> = Vec::new();
    for g in gens {
        if members.contains(g.index()) {
            continue;
        }
        used.push(g);
        let old_len = elems.len();
        let mut i = 0;
        while i < elems.len() {
            let e = elems[i];
            let apply: &[Element] = if i < old_len { std::slice::from_ref(&g) } else { &used };
            for &s in apply {
                let y = group.mul(e, s);
                if !members.put(y.index()) {
                    elems.push(y);
                }
            }
            i += 1;
        }
    }
    Subgroup { size: elems.len(), members }
}

/// `[H,K]`, generated by all `[h,k]`.
pub fn commutator_subgroup<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let mut gens = FixedBitSet::with_capacity(group.order());
    for x in h.elements() {
        for y in k.elements() {
            gens.insert(group.commutator(x, y).index());
        }
    }
    subgroup_closure(group, gens.ones().map(|i| Element(i as u32)))
}

/// A small generating set of `H`, chosen greedily in element order.
pub fn generating_set<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup) -> Vec<Element> {
    let mut gens = Vec::new();
    let mut span = Subgroup::trivial(group.order());
    for x in h.elements() {
        if span.size() == h.size() {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = subgroup_closure(group, gens.iter().copied());
        }
    }
    gens
}

/// Least subgroup containing `seeds` and normalized by every element of
/// `ambient_gens`, which must generate the whole group.
pub fn normal_closure<G, I>(group: &G, seeds: I, ambient_gens: &[Element]) -> Subgroup
where
    G: GroupLaw + ?Sized,
    I: IntoIterator<Item = Element>,
{
    let mut gens: Vec<Element> = seeds.into_iter().collect();
    let ambient: Vec<(Element, Element)> = ambient_gens.iter().map(|&g| (g, group.inv(g))).collect();
    let mut span = subgroup_closure(group, gens.iter().copied());
    loop {
        let mut grown = false;
        let mut k = 0;
        while k < gens.len() {
            let s = gens[k];
            for &(g, gi) in &ambient {
                let conj = group.mul(group.mul(gi, s), g);
                if !span.contains(conj) {
                    gens.push(conj);
                    span = subgroup_closure(group, gens.iter().copied());
                    grown = true;
                }
            }
            k += 1;
        }
        if !grown {
            return span;
        }
    }
}

/// `[H,G]` for `H ⊴ G`: the normal closure of `[x,y]` over generators `x`
/// of `H` and `y` of `G`. Needs only `O(|gens|²)` commutators.
pub fn commutator_with_whole<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, ambient_gens: &[Element]) -> Subgroup {
    let hg = generating_set(group, h);
    let seeds: Vec<Element> = hg
        .iter()
        .flat_map(|&x| ambient_gens.iter().map(move |&y| (x, y)))
        .map(|(x, y)| group.commutator(x, y))
        .collect();
    normal_closure(group, seeds, ambient_gens)
}

/// Normality tested on generators only.
pub fn is_normal_by_generators<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, ambient_gens: &[Element]) -> bool {
    let hg = generating_set(group, h);
    ambient_gens.iter().all(|&g| {
        let gi = group.inv(g);
        hg.iter().all(|&x| h.contains(group.mul(group.mul(gi, x), g)))
    })
}

/// The set `{h^k : h ∈ H}` (not closed in general).
pub fn power_set<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, k: u64) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(group.order());
    for x in h.elements() {
        set.insert(power(group, x, k).index());
    }
    set
}

/// `H^(k)`, generated by all k-th powers of elements of `H`.
pub fn power_subgroup<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, k: u64) -> Subgroup {
    let set = power_set(group, h, k);
    subgroup_closure(group, set.ones().map(|i| Element(i as u32)))
}

/// `⟨H ∪ K⟩`, which is `HK` when one of them is normal.
pub fn product_subgroup<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, k: &Subgroup) -> Subgroup {
    subgroup_closure(group, h.elements().chain(k.elements()))
}

/// Whether `K` is normalized by every element of `H`.
pub fn is_normal_in<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, k: &Subgroup) -> bool {
    h.elements().all(|x| {
        let xi = group.inv(x);
        k.elements().all(|y| k.contains(group.mul(group.mul(xi, y), x)))
    })
}

/// Whether `H` is normal in the whole group.
pub fn is_normal<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup) -> bool {
    is_normal_in(group, &Subgroup::whole(group.order()), h)
}

/// `|H/K|` for `K ⊴ H`.
pub fn quotient_order<G: GroupLaw + ?Sized>(group: &G, h: &Subgroup, k: &Subgroup) -> Result<usize, GroupError> {
    if !k.is_subset(h) {
        return Err(GroupError::NotNormalSubgroup("K is not contained in H".into()));
    }
    if !is_normal_in(group, h, k) {
        return Err(GroupError::NotNormalSubgroup("K is not normal in H".into()));
    }
    Ok(h.size() / k.size())
}

pub fn center<G: GroupLaw + ?Sized>(group: &G) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(group.order());
    for x in group.elements() {
        if group.elements().all(|y| group.mul(x, y) == group.mul(y, x)) {
            members.insert(x.index());
        }
    }
    Subgroup { size: members.count_ones(..), members }
}

/// `γ_1 = G, γ_{i+1} = [γ_i, G]` until the series stops changing.
pub fn lower_central_series<G: GroupLaw + ?Sized>(group: &G) -> Vec<Subgroup> {
    let whole = Subgroup::whole(group.order());
    let mut series = vec![whole.clone()];
    loop {
        let next = commutator_subgroup(group, series.last().unwrap(), &whole);
        if &next == series.last().unwrap() {
            return series;
        }
        series.push(next);
    }
}

/// Nilpotency class, `None` when the lower central series stalls above 1.
pub fn nilpotency_class<G: GroupLaw + ?Sized>(group: &G) -> Option<usize> {
    let series = lower_central_series(group);
    series.last().unwrap().is_trivial().then(|| series.len() - 1)
}
