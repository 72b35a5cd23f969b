//! Finite linear orders carrying an increasing partial automorphism that
//! moves every point of its domain upward.

mod builder;
mod lemma3;
mod orbit;
mod trim;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{chain, chain_of, membership, ClassTag};
use crate::structure::{Elem, FinStructure, StructureError};

pub use builder::{automorphic_schedule, build_automorphic_order, AutBuild, AutRequirement};
pub use lemma3::lemma3_amalgamate;
pub use orbit::{dom_meet, orbit_requirement_meet, orbit_satisfied, rng_meet, straddle_index};
pub use trim::equivariant_delta_trim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("InvalidCondition: item {item}: {reason}")]
    Invalid { item: u8, reason: String },
    #[error("SameOrbit: {0} and {1} lie in one orbit")]
    SameOrbit(Elem, Elem),
    #[error("NotIsomorphicExtensions: {0}")]
    NotIsomorphicExtensions(String),
    #[error("InvalidPoint: {0}")]
    InvalidPoint(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl AutError {
    pub fn name(&self) -> &'static str {
        match self {
            AutError::Invalid { .. } => "InvalidCondition",
            AutError::SameOrbit(..) => "SameOrbit",
            AutError::NotIsomorphicExtensions(_) => "NotIsomorphicExtensions",
            AutError::InvalidPoint(_) => "InvalidPoint",
            AutError::Structure(_) => "StructureError",
        }
    }
}

/// Outcome of validation, naming the first violated item:
/// 1 linear order, 2 increasing injective partial map, 3 above the diagonal.
/// Items 4 and 5 bound `φ(x)` and `φ⁻¹(x)` by `x + ω` in the ordinal
/// order; every natural number is below `x + ω`, so they never fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutVerdict {
    Valid,
    Invalid { item: u8, reason: String },
}

impl AutVerdict {
    pub fn is_valid(&self) -> bool {
        *self == AutVerdict::Valid
    }

    pub fn item(&self) -> Option<u8> {
        match self {
            AutVerdict::Valid => None,
            AutVerdict::Invalid { item, .. } => Some(*item),
        }
    }
}

/// Unchecked triple as read from input: universe, strict order pairs, map
/// pairs (a list, so non-functional input can be reported).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawAutCondition {
    pub universe: BTreeSet<Elem>,
    pub less: BTreeSet<(Elem, Elem)>,
    pub phi: Vec<(Elem, Elem)>,
}

fn invalid(item: u8, reason: String) -> AutVerdict {
    AutVerdict::Invalid { item, reason }
}

pub fn validate_aut_condition(raw: &RawAutCondition) -> AutVerdict {
    let u = &raw.universe;
    let lt = |a: Elem, b: Elem| raw.less.contains(&(a, b));
    if let Some(&(a, b)) = raw.less.iter().find(|(a, b)| !u.contains(a) || !u.contains(b)) {
        return invalid(1, format!("pair ({a},{b}) leaves the universe"));
    }
    let order = FinStructure::from_binary("<", u.iter().copied(), raw.less.iter().copied())
        .expect("pairs checked above");
    if !membership(ClassTag::LinearOrder, &order).expect("order signature") {
        return invalid(1, "not a strict linear order".into());
    }
    let mut map = BTreeMap::new();
    for &(x, y) in &raw.phi {
        if !u.contains(&x) || !u.contains(&y) {
            return invalid(2, format!("pair {x}->{y} leaves the universe"));
        }
        if map.insert(x, y).is_some_and(|old| old != y) {
            return invalid(2, format!("{x} has two images"));
        }
    }
    let image: BTreeSet<Elem> = map.values().copied().collect();
    if image.len() != map.len() {
        return invalid(2, "map is not injective".into());
    }
    for (&x, &fx) in &map {
        for (&y, &fy) in &map {
            if lt(x, y) && !lt(fx, fy) {
                return invalid(2, format!("{x} < {y} but not {fx} < {fy}"));
            }
        }
    }
    if let Some((x, fx)) = map.iter().find(|(x, fx)| !lt(**x, **fx)) {
        return invalid(3, format!("{fx} = phi({x}) is not above {x}"));
    }
    AutVerdict::Valid
}

/// A validated triple. The order is stored as its increasing enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AutCondition {
    chain: Vec<Elem>,
    phi: BTreeMap<Elem, Elem>,
}

impl AutCondition {
    pub fn new(chain: Vec<Elem>, phi: BTreeMap<Elem, Elem>) -> Result<Self, AutError> {
        let c = AutCondition { chain, phi };
        match validate_aut_condition(&c.to_raw()) {
            AutVerdict::Valid => Ok(c),
            AutVerdict::Invalid { item, reason } => Err(AutError::Invalid { item, reason }),
        }
    }

    pub fn from_raw(raw: &RawAutCondition) -> Result<Self, AutError> {
        if let AutVerdict::Invalid { item, reason } = validate_aut_condition(raw) {
            return Err(AutError::Invalid { item, reason });
        }
        let order = FinStructure::from_binary("<", raw.universe.iter().copied(), raw.less.iter().copied())?;
        Ok(AutCondition {
            chain: chain_of(&order),
            phi: raw.phi.iter().copied().collect(),
        })
    }

    pub fn empty() -> Self {
        AutCondition::default()
    }

    pub fn chain(&self) -> &[Elem] {
        &self.chain
    }

    pub fn phi(&self) -> &BTreeMap<Elem, Elem> {
        &self.phi
    }

    pub fn phi_inverse(&self) -> BTreeMap<Elem, Elem> {
        self.phi.iter().map(|(&x, &y)| (y, x)).collect()
    }

    pub fn universe(&self) -> BTreeSet<Elem> {
        self.chain.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.chain.contains(&x)
    }

    pub fn positions(&self) -> BTreeMap<Elem, usize> {
        self.chain.iter().enumerate().map(|(i, &x)| (x, i)).collect()
    }

    pub fn less(&self, a: Elem, b: Elem) -> bool {
        let pos = |x| self.chain.iter().position(|&y| y == x);
        matches!((pos(a), pos(b)), (Some(i), Some(j)) if i < j)
    }

    /// `φ^k(x)` for integer `k`, if every step is defined.
    pub fn iterate(&self, x: Elem, k: i64) -> Option<Elem> {
        let inv;
        let map = if k >= 0 {
            &self.phi
        } else {
            inv = self.phi_inverse();
            &inv
        };
        let mut y = x;
        for _ in 0..k.unsigned_abs() {
            y = *map.get(&y)?;
        }
        Some(y)
    }

    /// The orbit of `x` under the partial map, in increasing order.
    pub fn orbit(&self, x: Elem) -> Vec<Elem> {
        let inv = self.phi_inverse();
        let mut start = x;
        while let Some(&y) = inv.get(&start) {
            start = y;
        }
        let mut out = vec![start];
        while let Some(&y) = self.phi.get(out.last().unwrap()) {
            out.push(y);
        }
        out
    }

    pub fn to_raw(&self) -> RawAutCondition {
        let mut less = BTreeSet::new();
        for (i, &a) in self.chain.iter().enumerate() {
            for &b in &self.chain[i + 1..] {
                less.insert((a, b));
            }
        }
        RawAutCondition {
            universe: self.universe(),
            less,
            phi: self.phi.iter().map(|(&x, &y)| (x, y)).collect(),
        }
    }

    pub fn order_structure(&self) -> FinStructure {
        chain(&self.chain)
    }

    pub fn to_doc(&self) -> AutDoc {
        let doc = self.order_structure().to_doc();
        AutDoc {
            sig: doc.sig,
            universe: doc.universe,
            interp: doc.interp,
            phi: self.phi.iter().map(|(&x, &y)| (x, y)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, AutError> {
        let doc: AutDoc = serde_json::from_str(text).map_err(|e| StructureError::Parse(e.to_string()))?;
        let order = FinStructure::from_doc(crate::structure::StructureDoc {
            sig: doc.sig,
            universe: doc.universe,
            interp: doc.interp,
        })?;
        if *order.sig() != ClassTag::LinearOrder.signature() {
            return Err(StructureError::SignatureMismatch.into());
        }
        let raw = RawAutCondition {
            universe: order.universe().clone(),
            less: order.tuples_at(0).iter().map(|t| (t[0], t[1])).collect(),
            phi: doc.phi,
        };
        AutCondition::from_raw(&raw)
    }
}

/// JSON form: the order as a structure document plus `"phi"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutDoc {
    pub sig: Vec<(String, usize)>,
    pub universe: Vec<Elem>,
    pub interp: BTreeMap<String, Vec<Vec<Elem>>>,
    #[serde(default)]
    pub phi: Vec<(Elem, Elem)>,
}

/// `q` contains `p`'s order as a suborder and `φ_p ⊆ φ_q`.
pub fn aut_stronger(q: &AutCondition, p: &AutCondition) -> bool {
    let qpos = q.positions();
    let Some(mapped) = p.chain.iter().map(|x| qpos.get(x)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    mapped.windows(2).all(|w| w[0] < w[1]) && p.phi.iter().all(|(x, y)| q.phi.get(x) == Some(y))
}
