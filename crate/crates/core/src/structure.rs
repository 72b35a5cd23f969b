//! Finite relational structures over natural-number universes.
//!
//! A [`FinStructure`] is a finite universe of [`Elem`] ids together with an
//! interpretation of every symbol of its [`Signature`]. Structures are plain
//! immutable values; every constructor validates the invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Universe element. The ground set of every construction is the naturals.
pub type Elem = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("TupleOutOfUniverse: tuple {tuple:?} of {symbol} mentions an element outside the universe")]
    TupleOutOfUniverse { symbol: String, tuple: Vec<Elem> },
    #[error("UnknownSymbol: {0}")]
    UnknownSymbol(String),
    #[error("ArityMismatch: {symbol} has arity {expected}, got a tuple of length {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("InvalidSignature: {0}")]
    InvalidSignature(String),
    #[error("SubsetNotContained: element {0} is not in the universe")]
    SubsetNotContained(Elem),
    #[error("SignatureMismatch")]
    SignatureMismatch,
    #[error("NotAnEmbedding: {0}")]
    NotAnEmbedding(String),
    #[error("ParseError: {0}")]
    Parse(String),
}

/// A finite relational signature. Symbols are kept sorted by name so that
/// equal signatures compare equal regardless of declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self, StructureError> {
        let mut symbols: Vec<(String, usize)> =
            symbols.into_iter().map(|(s, a)| (s.into(), a)).collect();
        symbols.sort();
        for (name, arity) in &symbols {
            if *arity == 0 {
                return Err(StructureError::InvalidSignature(format!(
                    "symbol {name} has arity 0"
                )));
            }
            if name.is_empty() {
                return Err(StructureError::InvalidSignature("empty symbol name".into()));
            }
        }
        for w in symbols.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(StructureError::InvalidSignature(format!(
                    "duplicate symbol {}",
                    w[0].0
                )));
            }
        }
        Ok(Signature { symbols })
    }

    /// A signature with one binary symbol.
    pub fn binary(name: &str) -> Self {
        Signature {
            symbols: vec![(name.to_string(), 2)],
        }
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols
            .binary_search_by(|(n, _)| n.as_str().cmp(name))
            .ok()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].1)
    }

    /// Union of two signatures; a symbol declared with two arities is an error.
    pub fn union(&self, other: &Signature) -> Result<Signature, StructureError> {
        let mut all = self.symbols.clone();
        for (name, arity) in &other.symbols {
            match self.arity(name) {
                Some(a) if a == *arity => {}
                Some(_) => {
                    return Err(StructureError::InvalidSignature(format!(
                        "symbol {name} declared with two arities"
                    )))
                }
                None => all.push((name.clone(), *arity)),
            }
        }
        Signature::new(all)
    }

    pub fn contains(&self, other: &Signature) -> bool {
        other
            .symbols
            .iter()
            .all(|(n, a)| self.arity(n) == Some(*a))
    }
}

/// A finite relational structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinStructure {
    sig: Signature,
    universe: BTreeSet<Elem>,
    rels: Vec<BTreeSet<Vec<Elem>>>,
}

impl FinStructure {
    /// Builds a structure, checking that every tuple has the right length and
    /// lives inside the universe. Symbols absent from `interp` are empty.
    pub fn new(
        sig: Signature,
        universe: impl IntoIterator<Item = Elem>,
        interp: impl IntoIterator<Item = (String, Vec<Vec<Elem>>)>,
    ) -> Result<Self, StructureError> {
        let universe: BTreeSet<Elem> = universe.into_iter().collect();
        let mut rels = vec![BTreeSet::new(); sig.len()];
        for (name, tuples) in interp {
            let idx = sig
                .index_of(&name)
                .ok_or_else(|| StructureError::UnknownSymbol(name.clone()))?;
            let arity = sig.symbols[idx].1;
            for t in tuples {
                if t.len() != arity {
                    return Err(StructureError::ArityMismatch {
                        symbol: name.clone(),
                        expected: arity,
                        found: t.len(),
                    });
                }
                if t.iter().any(|x| !universe.contains(x)) {
                    return Err(StructureError::TupleOutOfUniverse {
                        symbol: name.clone(),
                        tuple: t,
                    });
                }
                rels[idx].insert(t);
            }
        }
        Ok(FinStructure {
            sig,
            universe,
            rels,
        })
    }

    pub fn empty(sig: Signature) -> Self {
        let rels = vec![BTreeSet::new(); sig.len()];
        FinStructure {
            sig,
            universe: BTreeSet::new(),
            rels,
        }
    }

    /// Structure with a single binary relation given by `pairs`.
    pub fn from_binary(
        name: &str,
        universe: impl IntoIterator<Item = Elem>,
        pairs: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Result<Self, StructureError> {
        let tuples = pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
        FinStructure::new(
            Signature::binary(name),
            universe,
            [(name.to_string(), tuples)],
        )
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn universe(&self) -> &BTreeSet<Elem> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.universe.contains(&x)
    }

    /// Tuples of the symbol at position `idx` of the signature.
    pub fn tuples_at(&self, idx: usize) -> &BTreeSet<Vec<Elem>> {
        &self.rels[idx]
    }

    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<Elem>>> {
        self.sig.index_of(name).map(|i| &self.rels[i])
    }

    pub fn holds(&self, name: &str, tuple: &[Elem]) -> bool {
        self.relation(name).is_some_and(|r| r.contains(tuple))
    }

    pub fn holds_at(&self, idx: usize, tuple: &[Elem]) -> bool {
        self.rels[idx].contains(tuple)
    }

    pub fn tuple_count(&self) -> usize {
        self.rels.iter().map(BTreeSet::len).sum()
    }

    /// Restriction to `subset`.
    pub fn induced(&self, subset: &BTreeSet<Elem>) -> Result<FinStructure, StructureError> {
        if let Some(x) = subset.iter().find(|x| !self.universe.contains(x)) {
            return Err(StructureError::SubsetNotContained(*x));
        }
        let rels = self
            .rels
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|t| t.iter().all(|x| subset.contains(x)))
                    .cloned()
                    .collect()
            })
            .collect();
        Ok(FinStructure {
            sig: self.sig.clone(),
            universe: subset.clone(),
            rels,
        })
    }

    /// Image of the structure under an injective renaming defined on the
    /// whole universe.
    pub fn rename(&self, map: &BTreeMap<Elem, Elem>) -> FinStructure {
        let universe = self.universe.iter().map(|x| map[x]).collect();
        let rels = self
            .rels
            .iter()
            .map(|r| r.iter().map(|t| t.iter().map(|x| map[x]).collect()).collect())
            .collect();
        FinStructure {
            sig: self.sig.clone(),
            universe,
            rels,
        }
    }

    /// The same structure read in a larger signature; new symbols are empty.
    pub fn widen(&self, sig: &Signature) -> Result<FinStructure, StructureError> {
        if !sig.contains(&self.sig) {
            return Err(StructureError::SignatureMismatch);
        }
        let rels = sig
            .symbols()
            .iter()
            .map(|(name, _)| self.relation(name).cloned().unwrap_or_default())
            .collect();
        Ok(FinStructure {
            sig: sig.clone(),
            universe: self.universe.clone(),
            rels,
        })
    }

    pub(crate) fn insert_tuple(&mut self, idx: usize, t: Vec<Elem>) {
        debug_assert!(t.iter().all(|x| self.universe.contains(x)));
        self.rels[idx].insert(t);
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            sig: self.sig.symbols.clone(),
            universe: self.universe.iter().copied().collect(),
            interp: self
                .sig
                .symbols
                .iter()
                .zip(&self.rels)
                .map(|((name, _), r)| (name.clone(), r.iter().cloned().collect()))
                .collect(),
        }
    }

    pub fn from_doc(doc: StructureDoc) -> Result<Self, StructureError> {
        let sig = Signature::new(doc.sig)?;
        FinStructure::new(sig, doc.universe, doc.interp)
    }

    /// Compact JSON in the fixed field order `sig`, `universe`, `interp`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        let doc: StructureDoc =
            serde_json::from_str(text).map_err(|e| StructureError::Parse(e.to_string()))?;
        FinStructure::from_doc(doc)
    }
}

impl fmt::Display for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Serialized form of a structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub sig: Vec<(String, usize)>,
    pub universe: Vec<Elem>,
    pub interp: BTreeMap<String, Vec<Vec<Elem>>>,
}

/// Checks all structure invariants; the entry point for untrusted input.
pub fn validate_structure(
    sig: Signature,
    universe: impl IntoIterator<Item = Elem>,
    interp: impl IntoIterator<Item = (String, Vec<Vec<Elem>>)>,
) -> Result<FinStructure, StructureError> {
    FinStructure::new(sig, universe, interp)
}

pub fn induced_substructure(
    a: &FinStructure,
    subset: &BTreeSet<Elem>,
) -> Result<FinStructure, StructureError> {
    a.induced(subset)
}

/// Smallest naturals not in `used`, in increasing order.
pub fn fresh_ids(used: &BTreeSet<Elem>, count: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(count);
    let mut next: Elem = 0;
    while out.len() < count {
        if !used.contains(&next) {
            out.push(next);
        }
        next += 1;
    }
    out
}

/// Isomorphic copy of `a` avoiding `forbidden`. Elements already outside
/// `forbidden` keep nothing special: the whole universe is renamed, in
/// increasing order, onto the smallest naturals outside `forbidden`.
pub fn relabel_disjoint(
    a: &FinStructure,
    forbidden: &BTreeSet<Elem>,
) -> (FinStructure, BTreeMap<Elem, Elem>) {
    if a.universe.is_disjoint(forbidden) {
        let id: BTreeMap<Elem, Elem> = a.universe.iter().map(|&x| (x, x)).collect();
        return (a.clone(), id);
    }
    let fresh = fresh_ids(forbidden, a.len());
    let map: BTreeMap<Elem, Elem> = a.universe.iter().copied().zip(fresh).collect();
    (a.rename(&map), map)
}

/// An injective map between universes that preserves and reflects every
/// relation. The map is ordered, so embeddings compare lexicographically by
/// their images in increasing source order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Embedding {
    map: BTreeMap<Elem, Elem>,
}

impl Embedding {
    pub fn new(
        source: &FinStructure,
        target: &FinStructure,
        map: BTreeMap<Elem, Elem>,
    ) -> Result<Self, StructureError> {
        check_embedding(source, target, &map)?;
        Ok(Embedding { map })
    }

    /// Wraps a map already known to be an embedding.
    pub(crate) fn from_map_unchecked(map: BTreeMap<Elem, Elem>) -> Self {
        Embedding { map }
    }

    pub fn identity(s: &FinStructure) -> Self {
        Embedding {
            map: s.universe.iter().map(|&x| (x, x)).collect(),
        }
    }

    pub fn inclusion(sub: &FinStructure, sup: &FinStructure) -> Result<Self, StructureError> {
        Embedding::new(sub, sup, sub.universe.iter().map(|&x| (x, x)).collect())
    }

    pub fn map(&self) -> &BTreeMap<Elem, Elem> {
        &self.map
    }

    pub fn apply(&self, x: Elem) -> Option<Elem> {
        self.map.get(&x).copied()
    }

    pub fn domain(&self) -> BTreeSet<Elem> {
        self.map.keys().copied().collect()
    }

    pub fn image(&self) -> BTreeSet<Elem> {
        self.map.values().copied().collect()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Embedding) -> Embedding {
        Embedding {
            map: self
                .map
                .iter()
                .filter_map(|(&x, y)| then.apply(*y).map(|z| (x, z)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Embedding {
        Embedding {
            map: self.map.iter().map(|(&x, &y)| (y, x)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(x, y)| x == y)
    }

    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        self.map.iter().map(|(&x, &y)| (x, y)).collect()
    }
}

/// Verifies that `map` is an embedding of `source` into `target`.
pub fn check_embedding(
    source: &FinStructure,
    target: &FinStructure,
    map: &BTreeMap<Elem, Elem>,
) -> Result<(), StructureError> {
    if source.sig != target.sig {
        return Err(StructureError::SignatureMismatch);
    }
    if map.len() != source.len() || map.keys().any(|x| !source.contains(*x)) {
        return Err(StructureError::NotAnEmbedding(
            "map is not defined exactly on the source universe".into(),
        ));
    }
    let image: BTreeSet<Elem> = map.values().copied().collect();
    if image.len() != map.len() {
        return Err(StructureError::NotAnEmbedding("map is not injective".into()));
    }
    if let Some(y) = image.iter().find(|y| !target.contains(**y)) {
        return Err(StructureError::NotAnEmbedding(format!(
            "image {y} is outside the target"
        )));
    }
    let image_struct = target.induced(&image)?;
    for (idx, (name, _)) in source.sig.symbols.iter().enumerate() {
        let mapped: BTreeSet<Vec<Elem>> = source.rels[idx]
            .iter()
            .map(|t| t.iter().map(|x| map[x]).collect())
            .collect();
        if mapped != image_struct.rels[idx] {
            return Err(StructureError::NotAnEmbedding(format!(
                "relation {name} is not preserved and reflected"
            )));
        }
    }
    Ok(())
}
