//! Finite metric spaces with rational distances.
//!
//! A metric space is encoded as a family of symmetric binary relations, one
//! per distance actually used: the pair `(x, y)` belongs to `d3/2` iff the
//! distance between `x` and `y` is `3/2`. The signature therefore depends on
//! the space.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::structure::{Elem, FinStructure, Signature, StructureError};

/// Distances used when enumerating metric spaces exhaustively.
pub const ENUMERATION_PALETTE: [i64; 2] = [1, 2];

pub fn distance_symbol(d: Rational64) -> String {
    format!("d{d}")
}

pub fn parse_distance_symbol(name: &str) -> Option<Rational64> {
    let q: Rational64 = name.strip_prefix('d')?.parse().ok()?;
    (q > Rational64::zero()).then_some(q)
}

/// Builds a metric structure from a distance table over `points`. Pairs not
/// present in `dist` get no relation, which membership will reject.
pub fn metric_structure(
    points: impl IntoIterator<Item = Elem>,
    dist: &BTreeMap<(Elem, Elem), Rational64>,
) -> Result<FinStructure, StructureError> {
    let points: BTreeSet<Elem> = points.into_iter().collect();
    let mut by_symbol: BTreeMap<String, Vec<Vec<Elem>>> = BTreeMap::new();
    for (&(x, y), &d) in dist {
        if x == y {
            continue;
        }
        let sym = distance_symbol(d);
        let entry = by_symbol.entry(sym).or_default();
        entry.push(vec![x, y]);
        entry.push(vec![y, x]);
    }
    let sig = Signature::new(by_symbol.keys().map(|k| (k.clone(), 2)))?;
    FinStructure::new(sig, points, by_symbol)
}

/// Distance between two distinct points, if exactly one relation holds.
pub fn distance(s: &FinStructure, x: Elem, y: Elem) -> Option<Rational64> {
    let mut found = None;
    for (idx, (name, _)) in s.sig().symbols().iter().enumerate() {
        if s.holds_at(idx, &[x, y]) {
            if found.is_some() {
                return None;
            }
            found = parse_distance_symbol(name);
        }
    }
    found
}

pub fn is_metric_signature(sig: &Signature) -> bool {
    sig.symbols()
        .iter()
        .all(|(name, arity)| *arity == 2 && parse_distance_symbol(name).is_some())
}

pub fn is_metric_space(s: &FinStructure) -> bool {
    if !is_metric_signature(s.sig()) {
        return false;
    }
    let pts: Vec<Elem> = s.universe().iter().copied().collect();
    let mut d = BTreeMap::new();
    for &x in &pts {
        for (idx, _) in s.sig().symbols().iter().enumerate() {
            if s.holds_at(idx, &[x, x]) {
                return false;
            }
        }
        for &y in &pts {
            if x == y {
                continue;
            }
            match distance(s, x, y) {
                Some(q) => {
                    d.insert((x, y), q);
                }
                None => return false,
            }
        }
    }
    for (&(x, y), q) in &d {
        if d[&(y, x)] != *q {
            return false;
        }
    }
    for &x in &pts {
        for &y in &pts {
            for &z in &pts {
                if x != y && y != z && x != z && d[&(x, z)] > d[&(x, y)] + d[&(y, z)] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn diameter(s: &FinStructure) -> Rational64 {
    let pts: Vec<Elem> = s.universe().iter().copied().collect();
    let mut best = Rational64::zero();
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            if let Some(q) = distance(s, x, y) {
                best = best.max(q);
            }
        }
    }
    best
}

/// Shortest-path amalgam distances for cross pairs. With an empty base every
/// cross distance is `max(diam B, diam C, 1)`.
pub fn cross_distance(
    left: &FinStructure,
    right: &FinStructure,
    base: &[Elem],
    b: Elem,
    c: Elem,
) -> Rational64 {
    if base.is_empty() {
        return diameter(left).max(diameter(right)).max(Rational64::one());
    }
    let dist = |s: &FinStructure, x: Elem, y: Elem| {
        if x == y {
            Rational64::zero()
        } else {
            distance(s, x, y).expect("member metric")
        }
    };
    base.iter()
        .map(|&a| dist(left, b, a) + dist(right, a, c))
        .min()
        .expect("nonempty base")
}
