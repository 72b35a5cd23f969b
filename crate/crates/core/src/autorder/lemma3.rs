//! Amalgamating two isomorphic extensions of a common suborder so that a
//! chosen pair of points cross.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use super::{AutCondition, AutError};
use crate::structure::Elem;

/// Radius of the interval around each point of the first order.
fn radius() -> Rational64 {
    Rational64::new(1, 3)
}

/// Offset of `f(h(x))` from `x`: the simplest rational strictly inside
/// `(0, radius)`, with sign chosen per orbit.
fn offset() -> Rational64 {
    Rational64::new(1, 4)
}

fn check(
    l1: &AutCondition,
    l2: &AutCondition,
    root: &BTreeSet<Elem>,
    h: &BTreeMap<Elem, Elem>,
    a: Elem,
    b: Elem,
) -> Result<(), AutError> {
    let bad = |m: &str| Err(AutError::NotIsomorphicExtensions(m.to_string()));
    let (u1, u2) = (l1.universe(), l2.universe());
    if u1.intersection(&u2).copied().collect::<BTreeSet<_>>() != *root {
        return bad("the two universes must meet exactly in the base");
    }
    if h.keys().copied().collect::<BTreeSet<_>>() != u1 || h.values().copied().collect::<BTreeSet<_>>() != u2 {
        return bad("h must be a bijection between the universes");
    }
    if l1.chain().iter().map(|x| h[x]).ne(l2.chain().iter().copied()) {
        return bad("h must preserve the order");
    }
    if root.iter().any(|r| h[r] != *r) {
        return bad("h must fix the base pointwise");
    }
    let moved: BTreeMap<Elem, Elem> = l1.phi().iter().map(|(x, y)| (h[x], h[y])).collect();
    if moved != *l2.phi() {
        return bad("h must carry phi1 onto phi2");
    }
    let closed = l1
        .phi()
        .iter()
        .all(|(x, y)| root.contains(x) == root.contains(y));
    if !closed {
        return bad("the base must be closed under phi1 and its inverse");
    }
    for x in [a, b] {
        if !u1.contains(&x) || root.contains(&x) {
            return Err(AutError::InvalidPoint(format!("{x} must lie in the first order outside the base")));
        }
    }
    if l1.orbit(a).contains(&b) {
        return Err(AutError::SameOrbit(a, b));
    }
    Ok(())
}

/// Places the first order at the integers and each `h(x)` outside the base
/// at `x ± 1/4`, the sign constant along orbits: `+` on the orbit of `a`,
/// `-` elsewhere. The result contains both orders and `φ1 ∪ φ2`, with
/// `a < h(a)` and `h(b) < b`.
pub fn lemma3_amalgamate(
    l1: &AutCondition,
    l2: &AutCondition,
    root: &BTreeSet<Elem>,
    h: &BTreeMap<Elem, Elem>,
    a: Elem,
    b: Elem,
) -> Result<AutCondition, AutError> {
    check(l1, l2, root, h, a, b)?;
    debug_assert!(offset() < radius());
    let a_orbit: BTreeSet<Elem> = l1.orbit(a).into_iter().collect();
    let mut keyed: Vec<(Rational64, Elem)> = Vec::with_capacity(l1.len() + l2.len() - root.len());
    for (k, &x) in l1.chain().iter().enumerate() {
        let at = Rational64::from(k as i64);
        keyed.push((at, x));
        if !root.contains(&x) {
            let shift = if a_orbit.contains(&x) { offset() } else { -offset() };
            keyed.push((at + shift, h[&x]));
        }
    }
    keyed.sort();
    let mut phi = l1.phi().clone();
    phi.extend(l2.phi().iter().map(|(&x, &y)| (x, y)));
    AutCondition::new(keyed.into_iter().map(|(_, x)| x).collect(), phi)
}
