//! Strong density of a subset of a finite partial order.

use std::collections::BTreeSet;

use super::ForcingError;
use crate::structure::{Elem, FinStructure};

/// Witness kinds for an incomparable ordered pair `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessKind {
    /// Above `s`, incomparable with `t`.
    AboveFirst,
    /// Below both.
    BelowBoth,
    /// Below `s`, incomparable with `t`.
    BelowFirst,
    /// Above both.
    AboveBoth,
    /// Incomparable with both.
    Incomparable,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 5] = [
        WitnessKind::AboveFirst,
        WitnessKind::BelowBoth,
        WitnessKind::BelowFirst,
        WitnessKind::AboveBoth,
        WitnessKind::Incomparable,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityVerdict {
    Holds,
    /// `s < t` with nothing from `E` strictly between.
    MissingBetween(Elem, Elem),
    /// The incomparable pair `(s, t)` lacks a witness of this kind.
    MissingWitness(Elem, Elem, WitnessKind),
}

impl DensityVerdict {
    pub fn holds(&self) -> bool {
        *self == DensityVerdict::Holds
    }
}

fn lt(p: &FinStructure, a: Elem, b: Elem) -> bool {
    p.holds("<", &[a, b])
}

fn incomparable(p: &FinStructure, a: Elem, b: Elem) -> bool {
    a != b && !lt(p, a, b) && !lt(p, b, a)
}

fn realizes(p: &FinStructure, kind: WitnessKind, e: Elem, s: Elem, t: Elem) -> bool {
    match kind {
        WitnessKind::AboveFirst => lt(p, s, e) && incomparable(p, e, t),
        WitnessKind::BelowBoth => lt(p, e, s) && lt(p, e, t),
        WitnessKind::BelowFirst => lt(p, e, s) && incomparable(p, e, t),
        WitnessKind::AboveBoth => lt(p, s, e) && lt(p, t, e),
        WitnessKind::Incomparable => incomparable(p, e, s) && incomparable(p, e, t),
    }
}

/// Strong density checked on the pairs drawn from `params` only.
pub fn strongly_dense_over(
    e: &BTreeSet<Elem>,
    p: &FinStructure,
    params: &BTreeSet<Elem>,
) -> Result<DensityVerdict, ForcingError> {
    if let Some(&x) = e.iter().chain(params).find(|x| !p.contains(**x)) {
        return Err(ForcingError::ElementOutsideUniverse(x));
    }
    for &s in params {
        for &t in params {
            if lt(p, s, t) && !e.iter().any(|&x| lt(p, s, x) && lt(p, x, t)) {
                return Ok(DensityVerdict::MissingBetween(s, t));
            }
            if incomparable(p, s, t) {
                for kind in WitnessKind::ALL {
                    if !e.iter().any(|&x| realizes(p, kind, x, s, t)) {
                        return Ok(DensityVerdict::MissingWitness(s, t, kind));
                    }
                }
            }
        }
    }
    Ok(DensityVerdict::Holds)
}

/// Strong density of `e` in the whole order `p`.
pub fn strongly_dense_check(e: &BTreeSet<Elem>, p: &FinStructure) -> Result<DensityVerdict, ForcingError> {
    strongly_dense_over(e, p, p.universe())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(n: Elem, rel: &[(Elem, Elem)]) -> FinStructure {
        FinStructure::from_binary("<", 0..n, rel.iter().copied()).unwrap()
    }

    #[test]
    fn chain_without_witness() {
        let p = poset(2, &[(0, 1)]);
        assert_eq!(strongly_dense_check(&BTreeSet::new(), &p).unwrap(), DensityVerdict::MissingBetween(0, 1));
    }

    #[test]
    fn antichain_lacks_lower_bound() {
        let p = poset(2, &[]);
        let v = strongly_dense_check(&[0, 1].into(), &p).unwrap();
        assert_eq!(v, DensityVerdict::MissingWitness(0, 1, WitnessKind::AboveFirst));
        assert!(!v.holds());
    }

    #[test]
    fn outside_elements_are_rejected() {
        let p = poset(2, &[]);
        assert_eq!(
            strongly_dense_check(&[5].into(), &p),
            Err(ForcingError::ElementOutsideUniverse(5))
        );
    }
}
