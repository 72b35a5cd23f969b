//! Δ-system trimming for automorphic conditions.

use std::collections::{BTreeMap, BTreeSet};

use super::AutCondition;
use crate::forcing::delta_system;
use crate::structure::Elem;

/// Order and map restricted to `root`, used to group members.
fn trace(p: &AutCondition, root: &BTreeSet<Elem>) -> (Vec<Elem>, BTreeMap<Elem, Elem>) {
    let chain = p.chain().iter().copied().filter(|x| root.contains(x)).collect();
    let phi = p
        .phi()
        .iter()
        .filter(|(x, _)| root.contains(x))
        .map(|(&x, &y)| (x, y))
        .collect();
    (chain, phi)
}

fn closed(p: &AutCondition, root: &BTreeSet<Elem>) -> bool {
    p.phi().iter().all(|(x, y)| root.contains(x) == root.contains(y))
}

/// Δ-system on the universes, then the members whose root is closed under
/// the map both ways, then the largest class agreeing on the root's order
/// and map (ties to the class of the earliest member). Returns the root and
/// the kept indices in increasing order.
pub fn equivariant_delta_trim(family: &[AutCondition]) -> (BTreeSet<Elem>, Vec<usize>) {
    let universes: Vec<BTreeSet<Elem>> = family.iter().map(AutCondition::universe).collect();
    let delta = delta_system(&universes);
    let root = delta.root;
    let mut groups: BTreeMap<(Vec<Elem>, BTreeMap<Elem, Elem>), Vec<usize>> = BTreeMap::new();
    for &i in &delta.members {
        if closed(&family[i], &root) {
            groups.entry(trace(&family[i], &root)).or_default().push(i);
        }
    }
    let best = groups
        .into_values()
        .max_by(|x, y| x.len().cmp(&y.len()).then(y[0].cmp(&x[0])))
        .unwrap_or_default();
    (root, best)
}
