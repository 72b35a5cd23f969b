//! Δ-subsystems of finite families of sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::structure::Elem;

/// Selected members (indices into the input family) pairwise meeting in
/// exactly `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSystem {
    pub root: BTreeSet<Elem>,
    pub members: Vec<usize>,
}

pub fn is_delta_system(family: &[BTreeSet<Elem>], members: &[usize], root: &BTreeSet<Elem>) -> bool {
    members.iter().enumerate().all(|(k, &i)| {
        members[k + 1..]
            .iter()
            .all(|&j| family[i].intersection(&family[j]).eq(root.iter()))
    })
}

/// The size guarantee `m / (k · 2^s)` where `m` is the family size, `s` the
/// largest set size and `k` the number of distinct elements (at least 1).
pub fn delta_bound(family: &[BTreeSet<Elem>]) -> f64 {
    let s = family.iter().map(BTreeSet::len).max().unwrap_or(0);
    let k = family.iter().flatten().collect::<BTreeSet<_>>().len().max(1);
    family.len() as f64 / (k as f64 * 2f64.powi(s as i32))
}

fn subsets(set: &BTreeSet<Elem>) -> impl Iterator<Item = BTreeSet<Elem>> + '_ {
    let elems: Vec<Elem> = set.iter().copied().collect();
    (0u64..1 << elems.len()).map(move |mask| {
        elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &x)| x)
            .collect()
    })
}

/// Up to this many non-empty petals per root the packing is exact.
pub const EXACT_PETALS: usize = 12;

/// Members for a fixed root: every superset of `root` whose petal (the part
/// outside `root`) misses the other kept petals. Sets equal to `root` never
/// conflict. With at most [`EXACT_PETALS`] other candidates the largest such
/// packing is found (lexicographically first among the largest); beyond that,
/// a greedy scan in index order.
fn packing_for_root(family: &[BTreeSet<Elem>], root: &BTreeSet<Elem>) -> Vec<usize> {
    let mut free = Vec::new();
    let mut petals: Vec<(usize, BTreeSet<Elem>)> = Vec::new();
    for (i, s) in family.iter().enumerate() {
        if root.is_subset(s) {
            let petal: BTreeSet<Elem> = s.difference(root).copied().collect();
            if petal.is_empty() {
                free.push(i);
            } else {
                petals.push((i, petal));
            }
        }
    }
    let chosen = if petals.len() <= EXACT_PETALS {
        let mut best = Vec::new();
        exact(&petals, 0, &mut Vec::new(), &mut BTreeSet::new(), &mut best);
        best
    } else {
        let mut used = BTreeSet::new();
        let mut kept = Vec::new();
        for (i, petal) in &petals {
            if petal.is_disjoint(&used) {
                used.extend(petal.iter().copied());
                kept.push(*i);
            }
        }
        kept
    };
    let mut members: Vec<usize> = free.into_iter().chain(chosen).collect();
    members.sort_unstable();
    members
}

fn exact(
    petals: &[(usize, BTreeSet<Elem>)],
    at: usize,
    current: &mut Vec<usize>,
    used: &mut BTreeSet<Elem>,
    best: &mut Vec<usize>,
) {
    if current.len() + (petals.len() - at) <= best.len() {
        return;
    }
    if at == petals.len() {
        *best = current.clone();
        return;
    }
    let (i, petal) = &petals[at];
    if petal.is_disjoint(used) {
        used.extend(petal.iter().copied());
        current.push(*i);
        exact(petals, at + 1, current, used, best);
        current.pop();
        for x in petal {
            used.remove(x);
        }
    }
    exact(petals, at + 1, current, used, best);
}

/// Every subset of a member is a candidate root; the largest packing wins,
/// ties going to the larger root and then the lexicographically smaller one.
/// Sets are expected to be small (the candidate count is exponential in set
/// size).
pub fn delta_system(family: &[BTreeSet<Elem>]) -> DeltaSystem {
    let mut candidates: BTreeMap<BTreeSet<Elem>, ()> = BTreeMap::new();
    for s in family {
        for r in subsets(s) {
            candidates.insert(r, ());
        }
    }
    let mut best = DeltaSystem {
        root: BTreeSet::new(),
        members: Vec::new(),
    };
    for root in candidates.into_keys() {
        let members = packing_for_root(family, &root);
        let better = members.len() > best.members.len()
            || (members.len() == best.members.len() && root.len() > best.root.len());
        if better {
            best = DeltaSystem { root, members };
        }
    }
    // one selected set is a Δ-system with itself as root
    if best.members.len() == 1 {
        best.root = family[best.members[0]].clone();
    }
    best
}
