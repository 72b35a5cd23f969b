//! Brute-force HP/JEP/AP/SAP verification up to a size bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::amalgam::{amalgamate, is_strong, place, Placement};
use super::enumerate::iso_types_up_to;
use super::{adjacency, membership, ClassError, ClassTag};
use crate::search::enumerate_embeddings;
use crate::structure::{Elem, Embedding, FinStructure, Signature};

/// Largest size handled by exhaustive enumeration.
pub const MAX_ENUMERATION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    HP,
    JEP,
    AP,
    SAP,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HP" => Ok(Property::HP),
            "JEP" => Ok(Property::JEP),
            "AP" => Ok(Property::AP),
            "SAP" => Ok(Property::SAP),
            _ => Err(format!("unknown property {s}")),
        }
    }
}

/// A failing instance: the structures and maps involved plus a reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub property: Property,
    pub structures: Vec<(String, FinStructure)>,
    pub maps: Vec<(String, Embedding)>,
    pub reason: String,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        let structures: serde_json::Map<String, Value> = self
            .structures
            .iter()
            .map(|(k, s)| (k.clone(), serde_json::to_value(s.to_doc()).expect("doc")))
            .collect();
        let maps: serde_json::Map<String, Value> = self
            .maps
            .iter()
            .map(|(k, e)| (k.clone(), json!(e.pairs())))
            .collect();
        json!({
            "property": self.property.to_string(),
            "structures": structures,
            "maps": maps,
            "reason": self.reason,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds { up_to: usize },
    Counterexample(Box<Counterexample>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Holds { .. } => None,
            Verdict::Counterexample(c) => Some(c),
        }
    }
}

fn scale_check(n: usize) -> Result<(), ClassError> {
    if n > MAX_ENUMERATION {
        return Err(ClassError::ScaleExceeded(format!(
            "size bound {n} exceeds {MAX_ENUMERATION}"
        )));
    }
    Ok(())
}

/// Number of isomorphism types with exactly `n` elements. Metric spaces are
/// counted over the distance palette {1, 2}.
pub fn count_iso_types(tag: ClassTag, n: usize) -> Result<usize, ClassError> {
    scale_check(n)?;
    Ok(super::iso_types(tag, n)?.len())
}

/// Exhaustive check of `property` over members with at most `n` elements.
/// Members are visited by size, then canonical code; embeddings in
/// lexicographic order. The first failure is returned.
pub fn check_property(tag: ClassTag, property: Property, n: usize) -> Result<Verdict, ClassError> {
    scale_check(n)?;
    let types: Vec<FinStructure> = iso_types_up_to(tag, n)?.into_iter().flatten().collect();
    let found = match property {
        Property::HP => check_hp(tag, &types)?,
        Property::JEP => check_jep(tag, &types)?,
        Property::AP | Property::SAP => check_ap(tag, &types, property == Property::SAP)?,
    };
    Ok(match found {
        None => Verdict::Holds { up_to: n },
        Some(c) => Verdict::Counterexample(Box::new(c)),
    })
}

fn check_hp(tag: ClassTag, types: &[FinStructure]) -> Result<Option<Counterexample>, ClassError> {
    for b in types {
        let elems: Vec<Elem> = b.universe().iter().copied().collect();
        for mask in 0u32..(1 << elems.len()) {
            let subset: BTreeSet<Elem> = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &x)| x)
                .collect();
            let sub = b.induced(&subset)?;
            if !membership(tag, &sub)? {
                return Ok(Some(Counterexample {
                    property: Property::HP,
                    reason: format!("induced substructure on {subset:?} is not a member"),
                    structures: vec![("B".into(), b.clone()), ("A".into(), sub)],
                    maps: vec![],
                }));
            }
        }
    }
    Ok(None)
}

fn check_jep(tag: ClassTag, types: &[FinStructure]) -> Result<Option<Counterexample>, ClassError> {
    let empty = types[0].clone();
    let none = Embedding::identity(&empty);
    for b in types {
        for c in types {
            if let Err(e) = amalgamate(tag, &empty, b, c, &none, &none) {
                return Ok(Some(Counterexample {
                    property: Property::JEP,
                    reason: e.to_string(),
                    structures: vec![("B".into(), b.clone()), ("C".into(), c.clone())],
                    maps: vec![],
                }));
            }
        }
    }
    Ok(None)
}

fn check_ap(
    tag: ClassTag,
    types: &[FinStructure],
    strong: bool,
) -> Result<Option<Counterexample>, ClassError> {
    let property = if strong { Property::SAP } else { Property::AP };
    for a in types {
        for b in types.iter().filter(|b| b.len() >= a.len()) {
            let fs = enumerate_embeddings(a, b)?;
            if fs.is_empty() {
                continue;
            }
            for c in types.iter().filter(|c| c.len() >= a.len()) {
                let gs = enumerate_embeddings(a, c)?;
                for f in &fs {
                    for g in &gs {
                        let reason = match amalgamate(tag, a, b, c, f, g) {
                            Ok(am) if !strong || is_strong(&am, f) => None,
                            Ok(_) => match strong_amalgam_search(tag, a, b, c, f, g)? {
                                Ok(_) => None,
                                Err(r) => Some(r),
                            },
                            Err(ClassError::AmalgamationImpossible(r)) => Some(r),
                            Err(e) => return Err(e),
                        };
                        if let Some(reason) = reason {
                            return Ok(Some(Counterexample {
                                property,
                                reason,
                                structures: vec![
                                    ("A".into(), a.clone()),
                                    ("B".into(), b.clone()),
                                    ("C".into(), c.clone()),
                                ],
                                maps: vec![("f".into(), f.clone()), ("g".into(), g.clone())],
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Searches all strong amalgams of `f: a → b` and `g: a → c`: the universe
/// is `b` plus a disjoint copy of `c ∖ g[a]`, and every choice of cross
/// relations is tried. Returns a member or the reason none exists.
pub fn strong_amalgam_search(
    tag: ClassTag,
    a: &FinStructure,
    b: &FinStructure,
    c: &FinStructure,
    f: &Embedding,
    g: &Embedding,
) -> Result<Result<FinStructure, String>, ClassError> {
    let sig: Signature = a.sig().union(b.sig())?.union(c.sig())?;
    let (b, c) = (b.widen(&sig)?, c.widen(&sig)?);
    let pinned: BTreeMap<Elem, Elem> = g.map().iter().map(|(x, &y)| (y, f.map()[x])).collect();
    let rmap = place(&b, &c, pinned, Placement::Keep);
    let moved = c.rename(&rmap);
    let base: BTreeSet<Elem> = f.image();
    let mut known = BTreeMap::new();
    for (idx, (name, _)) in sig.symbols().iter().enumerate() {
        let mut t: Vec<Vec<Elem>> = b.tuples_at(idx).iter().cloned().collect();
        t.extend(moved.tuples_at(idx).iter().cloned());
        known.insert(name.clone(), t);
    }
    let universe: BTreeSet<Elem> = b.universe().union(moved.universe()).copied().collect();

    if tag == ClassTag::LinearGraph {
        let forced = FinStructure::new(sig.clone(), universe.clone(), known.clone())?;
        let adj = adjacency(&forced);
        if let Some((v, n)) = adj.iter().find(|(_, n)| n.len() > 2) {
            return Ok(Err(format!("degree overflow: vertex {v} forced degree {}", n.len())));
        }
    }

    let left_only: Vec<Elem> = b.universe().iter().copied().filter(|x| !base.contains(x)).collect();
    let right_only: Vec<Elem> = moved.universe().iter().copied().filter(|x| !base.contains(x)).collect();
    let slots: Vec<(Elem, Elem)> = left_only
        .iter()
        .flat_map(|&x| right_only.iter().map(move |&y| (x, y)))
        .collect();
    let options = super::enumerate::cross_options(tag, &sig);
    let mut counter = vec![0usize; slots.len()];
    loop {
        let mut interp = known.clone();
        for (&(x, y), &o) in slots.iter().zip(&counter) {
            for (name, forward) in &options[o] {
                let t = if *forward { vec![x, y] } else { vec![y, x] };
                interp.entry(name.clone()).or_default().push(t);
            }
        }
        let cand = FinStructure::new(sig.clone(), universe.clone(), interp)?;
        if membership(tag, &cand)? {
            return Ok(Ok(cand));
        }
        let mut i = 0;
        loop {
            if i == counter.len() {
                return Ok(Err(format!("no strong amalgam among {} candidates", candidates(options.len(), slots.len()))));
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

fn candidates(options: usize, slots: usize) -> u128 {
    (options as u128).saturating_pow(slots as u32)
}
