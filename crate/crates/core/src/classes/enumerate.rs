//! Exhaustive enumeration of class members.

use std::collections::BTreeMap;

use super::metric::{distance_symbol, ENUMERATION_PALETTE};
use super::{membership, ClassError, ClassTag};
use crate::search::{canonical_code, canonical_structure};
use crate::structure::{Elem, FinStructure, Signature};

/// One way of relating a new point `x` to an existing point `y`: the listed
/// symbols hold on `(x, y)` when the flag is `true`, on `(y, x)` otherwise.
type Link = Vec<(String, bool)>;

fn link_options(tag: ClassTag) -> Vec<Link> {
    let e = |dirs: &[bool]| dirs.iter().map(|&d| ("E".to_string(), d)).collect::<Link>();
    let lt = |d: bool| vec![("<".to_string(), d)];
    match tag {
        ClassTag::Graph | ClassTag::LinearGraph => vec![vec![], e(&[true, false])],
        ClassTag::Digraph => vec![vec![], e(&[true]), e(&[false]), e(&[true, false])],
        ClassTag::Tournament => vec![e(&[true]), e(&[false])],
        ClassTag::LinearOrder => vec![lt(true), lt(false)],
        ClassTag::PartialOrder => vec![vec![], lt(true), lt(false)],
        ClassTag::RationalMetric => ENUMERATION_PALETTE
            .iter()
            .map(|&d| {
                let s = distance_symbol(d.into());
                vec![(s.clone(), true), (s, false)]
            })
            .collect(),
    }
}

/// Cross-relation choices for strong amalgam search. Metric spaces may use
/// any distance already present in `sig`.
pub(super) fn cross_options(tag: ClassTag, sig: &Signature) -> Vec<Link> {
    if tag != ClassTag::RationalMetric {
        return link_options(tag);
    }
    let mut names: Vec<String> = sig.symbols().iter().map(|(n, _)| n.clone()).collect();
    for d in ENUMERATION_PALETTE {
        names.push(distance_symbol(d.into()));
    }
    names.sort();
    names.dedup();
    names.into_iter().map(|s| vec![(s.clone(), true), (s, false)]).collect()
}

/// Signature used for enumeration: metric spaces are read over the palette.
fn enumeration_signature(tag: ClassTag, s: &FinStructure) -> Result<Signature, ClassError> {
    tag.check_signature(s)?;
    if tag == ClassTag::RationalMetric {
        let palette = Signature::new(
            ENUMERATION_PALETTE
                .iter()
                .map(|&d| (distance_symbol(d.into()), 2)),
        )?;
        Ok(s.sig().union(&palette)?)
    } else {
        Ok(s.sig().clone())
    }
}

/// Every member on `universe(s) ∪ new` inducing `s`, in a fixed order. Metric
/// distances to new points come from the enumeration palette.
pub fn labeled_extensions(
    tag: ClassTag,
    s: &FinStructure,
    new: &[Elem],
) -> Result<Vec<FinStructure>, ClassError> {
    let sig = enumeration_signature(tag, s)?;
    let s = s.widen(&sig)?;
    let mut slots = Vec::new();
    for (j, &x) in new.iter().enumerate() {
        assert!(!s.contains(x), "new point {x} already present");
        for &y in s.universe().iter().chain(&new[..j]) {
            slots.push((x, y));
        }
    }
    let options = link_options(tag);
    let mut out = Vec::new();
    let mut counter = vec![0usize; slots.len()];
    loop {
        let mut interp: BTreeMap<String, Vec<Vec<Elem>>> = sig
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), s.tuples_at(i).iter().cloned().collect()))
            .collect();
        for (&(x, y), &o) in slots.iter().zip(&counter) {
            for (name, forward) in &options[o] {
                let t = if *forward { vec![x, y] } else { vec![y, x] };
                interp.get_mut(name).expect("palette symbol").push(t);
            }
        }
        let universe = s.universe().iter().chain(new).copied();
        let cand = FinStructure::new(sig.clone(), universe, interp)?;
        if membership(tag, &cand)? {
            out.push(cand);
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == counter.len() {
                return Ok(out);
            }
            counter[i] += 1;
            if counter[i] < options.len() {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

pub fn one_point_extensions(
    tag: ClassTag,
    s: &FinStructure,
    new: Elem,
) -> Result<Vec<FinStructure>, ClassError> {
    labeled_extensions(tag, s, &[new])
}

/// Isomorphism types of members of each size `0..=n`, as canonical
/// structures on `0..size`, sorted by canonical code.
pub fn iso_types_up_to(tag: ClassTag, n: usize) -> Result<Vec<Vec<FinStructure>>, ClassError> {
    let empty = tag.empty();
    let sig = enumeration_signature(tag, &empty)?;
    let mut levels = vec![vec![empty.widen(&sig)?]];
    for k in 1..=n {
        let mut next = BTreeMap::new();
        for t in &levels[k - 1] {
            for e in one_point_extensions(tag, t, (k - 1) as Elem)? {
                next.entry(canonical_code(&e)).or_insert_with(|| canonical_structure(&e));
            }
        }
        levels.push(next.into_values().collect());
    }
    Ok(levels)
}

pub fn iso_types(tag: ClassTag, n: usize) -> Result<Vec<FinStructure>, ClassError> {
    Ok(iso_types_up_to(tag, n)?.pop().expect("level n exists"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(tag: ClassTag, n: usize) -> Vec<usize> {
        iso_types_up_to(tag, n).unwrap().iter().map(Vec::len).collect()
    }

    #[test]
    fn known_counts() {
        assert_eq!(counts(ClassTag::Graph, 4), vec![1, 1, 2, 4, 11]);
        assert_eq!(counts(ClassTag::LinearOrder, 4), vec![1, 1, 1, 1, 1]);
        assert_eq!(counts(ClassTag::Tournament, 4), vec![1, 1, 1, 2, 4]);
        assert_eq!(counts(ClassTag::Digraph, 3), vec![1, 1, 3, 16]);
        assert_eq!(counts(ClassTag::PartialOrder, 4), vec![1, 1, 2, 5, 16]);
        assert_eq!(counts(ClassTag::LinearGraph, 5), vec![1, 1, 1, 1, 1, 1]);
        // palette {1,2}: every triangle is a metric, so types are multisets
        assert_eq!(counts(ClassTag::RationalMetric, 3), vec![1, 1, 2, 4]);
    }

    #[test]
    fn labeled_extensions_fix_the_base() {
        let base = crate::classes::graph([0], &[]).unwrap();
        let ext = labeled_extensions(ClassTag::Graph, &base, &[5, 6]).unwrap();
        assert_eq!(ext.len(), 8);
        for e in &ext {
            assert_eq!(e.induced(&[0].into()).unwrap(), base);
        }
        // a path through a non-path intermediate is still found
        let two = crate::classes::graph([0, 1], &[]).unwrap();
        let paths = labeled_extensions(ClassTag::LinearGraph, &two, &[2]).unwrap();
        assert_eq!(paths.len(), 1);
    }
}
