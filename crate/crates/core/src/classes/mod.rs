//! Concrete Fraïssé-style classes: membership, amalgamation strategies and
//! exhaustive property checks.

mod amalgam;
mod enumerate;
pub mod metric;
mod properties;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structure::{Elem, FinStructure, Signature, StructureError};

pub use amalgam::{amalgamate, amalgamate_with, is_strong, Amalgam, CrossChoice, Placement};
pub use enumerate::{iso_types, iso_types_up_to, labeled_extensions, one_point_extensions};
pub use properties::{
    check_property, count_iso_types, strong_amalgam_search, Counterexample, Property, Verdict,
    MAX_ENUMERATION,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("SignatureMismatch: structure signature does not match class {0}")]
    SignatureMismatch(ClassTag),
    #[error("NotInClass: {0}")]
    NotInClass(String),
    #[error("AmalgamationImpossible: {0}")]
    AmalgamationImpossible(String),
    #[error("ScaleExceeded: {0}")]
    ScaleExceeded(String),
    #[error("UnknownClass: {0}")]
    UnknownClass(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl ClassError {
    pub fn name(&self) -> &'static str {
        match self {
            ClassError::SignatureMismatch(_) => "SignatureMismatch",
            ClassError::NotInClass(_) => "NotInClass",
            ClassError::AmalgamationImpossible(_) => "AmalgamationImpossible",
            ClassError::ScaleExceeded(_) => "ScaleExceeded",
            ClassError::UnknownClass(_) => "UnknownClass",
            ClassError::Structure(_) => "StructureError",
        }
    }
}

/// The built-in classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    /// Symmetric irreflexive `E`.
    Graph,
    /// Irreflexive `E`, both orientations of a pair allowed.
    Digraph,
    /// Irreflexive `E` with exactly one orientation per pair.
    Tournament,
    /// Strict linear order `<`.
    LinearOrder,
    /// Strict partial order `<`.
    PartialOrder,
    /// Rational metric spaces, one relation per distance.
    RationalMetric,
    /// Simple paths: connected, acyclic, degrees at most two.
    LinearGraph,
}

impl ClassTag {
    pub const ALL: [ClassTag; 7] = [
        ClassTag::Graph,
        ClassTag::Digraph,
        ClassTag::Tournament,
        ClassTag::LinearOrder,
        ClassTag::PartialOrder,
        ClassTag::RationalMetric,
        ClassTag::LinearGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Graph => "Graph",
            ClassTag::Digraph => "Digraph",
            ClassTag::Tournament => "Tournament",
            ClassTag::LinearOrder => "LinearOrder",
            ClassTag::PartialOrder => "PartialOrder",
            ClassTag::RationalMetric => "RationalMetric",
            ClassTag::LinearGraph => "LinearGraph",
        }
    }

    /// Whether the class has strong amalgamation.
    pub fn has_sap(self) -> bool {
        !matches!(self, ClassTag::LinearGraph)
    }

    /// Paths are not closed under induced substructures.
    pub fn is_hereditary(self) -> bool {
        !matches!(self, ClassTag::LinearGraph)
    }

    /// The relation symbol of the single-symbol classes.
    pub fn symbol(self) -> Option<&'static str> {
        match self {
            ClassTag::LinearOrder | ClassTag::PartialOrder => Some("<"),
            ClassTag::RationalMetric => None,
            _ => Some("E"),
        }
    }

    /// The class signature. Metric spaces start from the empty signature and
    /// grow one symbol per distance used.
    pub fn signature(self) -> Signature {
        match self.symbol() {
            Some(s) => Signature::binary(s),
            None => Signature::default(),
        }
    }

    pub fn empty(self) -> FinStructure {
        FinStructure::empty(self.signature())
    }

    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            ClassTag::Graph | ClassTag::LinearGraph | ClassTag::RationalMetric
        )
    }

    pub fn check_signature(self, s: &FinStructure) -> Result<(), ClassError> {
        let ok = match self {
            ClassTag::RationalMetric => metric::is_metric_signature(s.sig()),
            _ => *s.sig() == self.signature(),
        };
        if ok {
            Ok(())
        } else {
            Err(ClassError::SignatureMismatch(self))
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ClassError::UnknownClass(s.to_string()))
    }
}

/// Pairs of the single binary relation of `s`.
pub(crate) fn pairs(s: &FinStructure) -> impl Iterator<Item = (Elem, Elem)> + '_ {
    s.tuples_at(0).iter().map(|t| (t[0], t[1]))
}

pub(crate) fn adjacency(s: &FinStructure) -> BTreeMap<Elem, BTreeSet<Elem>> {
    let mut adj: BTreeMap<Elem, BTreeSet<Elem>> =
        s.universe().iter().map(|&x| (x, BTreeSet::new())).collect();
    for (a, b) in pairs(s) {
        adj.get_mut(&a).unwrap().insert(b);
    }
    adj
}

/// Whether `s` satisfies the axioms of `tag`.
pub fn membership(tag: ClassTag, s: &FinStructure) -> Result<bool, ClassError> {
    tag.check_signature(s)?;
    Ok(satisfies_axioms(tag, s))
}

fn satisfies_axioms(tag: ClassTag, s: &FinStructure) -> bool {
    if tag == ClassTag::RationalMetric {
        return metric::is_metric_space(s);
    }
    let rel = s.tuples_at(0);
    let has = |a: Elem, b: Elem| rel.contains(&[a, b][..]);
    if pairs(s).any(|(a, b)| a == b) {
        return false;
    }
    let elems: Vec<Elem> = s.universe().iter().copied().collect();
    match tag {
        ClassTag::Graph => pairs(s).all(|(a, b)| has(b, a)),
        ClassTag::Digraph => true,
        ClassTag::Tournament => elems.iter().enumerate().all(|(i, &a)| {
            elems[i + 1..].iter().all(|&b| has(a, b) != has(b, a))
        }),
        ClassTag::PartialOrder | ClassTag::LinearOrder => {
            let transitive = pairs(s).all(|(a, b)| {
                elems.iter().all(|&c| !has(b, c) || has(a, c))
            });
            let antisymmetric = pairs(s).all(|(a, b)| !has(b, a));
            let total = tag == ClassTag::PartialOrder
                || elems.iter().enumerate().all(|(i, &a)| {
                    elems[i + 1..].iter().all(|&b| has(a, b) || has(b, a))
                });
            transitive && antisymmetric && total
        }
        ClassTag::LinearGraph => {
            if !pairs(s).all(|(a, b)| has(b, a)) {
                return false;
            }
            let adj = adjacency(s);
            if adj.values().any(|n| n.len() > 2) {
                return false;
            }
            let edges = s.tuples_at(0).len() / 2;
            // a connected graph with |V| - 1 edges is a tree
            elems.is_empty() || (edges + 1 == elems.len() && connected(&adj))
        }
        ClassTag::RationalMetric => unreachable!(),
    }
}

pub(crate) fn connected(adj: &BTreeMap<Elem, BTreeSet<Elem>>) -> bool {
    let Some(&start) = adj.keys().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == adj.len()
}

/// Graph with the given undirected edges.
pub fn graph(
    universe: impl IntoIterator<Item = Elem>,
    edges: &[(Elem, Elem)],
) -> Result<FinStructure, StructureError> {
    FinStructure::from_binary(
        "E",
        universe,
        edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]),
    )
}

/// Linear order listing `chain` from smallest to largest.
pub fn chain(chain: &[Elem]) -> FinStructure {
    let mut pairs = Vec::new();
    for i in 0..chain.len() {
        for j in i + 1..chain.len() {
            pairs.push((chain[i], chain[j]));
        }
    }
    FinStructure::from_binary("<", chain.iter().copied(), pairs).expect("chain is well formed")
}

/// Elements of a linear order from smallest to largest.
pub fn chain_of(order: &FinStructure) -> Vec<Elem> {
    let mut below: BTreeMap<Elem, usize> = order.universe().iter().map(|&x| (x, 0)).collect();
    for (_, b) in pairs(order) {
        *below.get_mut(&b).unwrap() += 1;
    }
    let mut v: Vec<(usize, Elem)> = below.into_iter().map(|(x, n)| (n, x)).collect();
    v.sort();
    v.into_iter().map(|(_, x)| x).collect()
}
