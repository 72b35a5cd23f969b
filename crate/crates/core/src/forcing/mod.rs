//! Finite conditions ordered by extension, dense requirements and the
//! round-robin generic builder, plus the combinatorial tools used on
//! families of conditions (Δ-systems, crossing amalgams, trimming).

mod build;
mod crossing;
mod delta;
mod density;
mod knaster;
mod requirement;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::classes::{amalgamate_with, membership, strong_amalgam_search, ClassError, ClassTag, CrossChoice, Placement};
use crate::structure::{Elem, Embedding, FinStructure, StructureError};

pub use build::{generic_build, GenericChain, LogEntry};
pub use crossing::{crossing_amalgamation, CrossingSpec};
pub use delta::{delta_bound, delta_system, is_delta_system, DeltaSystem};
pub use density::{strongly_dense_check, strongly_dense_over, DensityVerdict, WitnessKind};
pub use knaster::knaster_trim;
pub use requirement::{
    extension_requirement, graph_schedule, meet, order_schedule, schedule_for, DenseRequirement,
    ExtensionRequirement,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("TagMismatch: {0} vs {1}")]
    TagMismatch(ClassTag, ClassTag),
    #[error("RootDisagreement: {0}")]
    RootDisagreement(String),
    #[error("IsomorphismTypeMismatch: {0}")]
    IsomorphismTypeMismatch(String),
    #[error("ElementOutsideUniverse: {0}")]
    ElementOutsideUniverse(Elem),
    #[error("SAPRequired: {0} lacks strong amalgamation")]
    SAPRequired(ClassTag),
    #[error("NotApplicable: {0}")]
    NotApplicable(String),
    #[error("EmptySchedule: a nonempty schedule is required")]
    EmptySchedule,
    #[error("NoExtension: {0}")]
    NoExtension(String),
    #[error(transparent)]
    Class(#[from] ClassError),
}

impl ForcingError {
    pub fn name(&self) -> &'static str {
        match self {
            ForcingError::TagMismatch(..) => "TagMismatch",
            ForcingError::RootDisagreement(_) => "RootDisagreement",
            ForcingError::IsomorphismTypeMismatch(_) => "IsomorphismTypeMismatch",
            ForcingError::ElementOutsideUniverse(_) => "ElementOutsideUniverse",
            ForcingError::SAPRequired(_) => "SAPRequired",
            ForcingError::NotApplicable(_) => "NotApplicable",
            ForcingError::EmptySchedule => "EmptySchedule",
            ForcingError::NoExtension(_) => "NoExtension",
            ForcingError::Class(e) => e.name(),
        }
    }
}

impl From<StructureError> for ForcingError {
    fn from(e: StructureError) -> Self {
        ForcingError::Class(e.into())
    }
}

/// A class member with universe inside ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Condition {
    tag: ClassTag,
    #[serde(serialize_with = "serialize_doc")]
    structure: FinStructure,
}

fn serialize_doc<S: serde::Serializer>(s: &FinStructure, ser: S) -> Result<S::Ok, S::Error> {
    s.to_doc().serialize(ser)
}

impl Condition {
    pub fn new(tag: ClassTag, structure: FinStructure) -> Result<Self, ForcingError> {
        if !membership(tag, &structure)? {
            return Err(ClassError::NotInClass(structure.to_string()).into());
        }
        Ok(Condition { tag, structure })
    }

    pub(crate) fn new_unchecked(tag: ClassTag, structure: FinStructure) -> Self {
        debug_assert!(membership(tag, &structure).unwrap_or(false));
        Condition { tag, structure }
    }

    pub fn empty(tag: ClassTag) -> Self {
        Condition { tag, structure: tag.empty() }
    }

    pub fn tag(&self) -> ClassTag {
        self.tag
    }

    pub fn structure(&self) -> &FinStructure {
        &self.structure
    }

    pub fn universe(&self) -> &BTreeSet<Elem> {
        self.structure.universe()
    }

    pub fn into_structure(self) -> FinStructure {
        self.structure
    }
}

/// Equality of two structures after reading both in the union signature.
/// Only metric spaces have varying signatures.
pub(crate) fn same_structure(a: &FinStructure, b: &FinStructure) -> bool {
    match a.sig().union(b.sig()) {
        Ok(sig) => a.widen(&sig).ok() == b.widen(&sig).ok(),
        Err(_) => false,
    }
}

fn same_tag(p: &Condition, q: &Condition) -> Result<ClassTag, ForcingError> {
    if p.tag != q.tag {
        return Err(ForcingError::TagMismatch(p.tag, q.tag));
    }
    Ok(p.tag)
}

/// `q` extends `p`: it contains `p` as an induced substructure.
pub fn stronger(q: &Condition, p: &Condition) -> Result<bool, ForcingError> {
    same_tag(p, q)?;
    if !p.universe().is_subset(q.universe()) {
        return Ok(false);
    }
    let restricted = q.structure.induced(p.universe())?;
    Ok(same_structure(&restricted, &p.structure))
}

/// A condition extending both, unless they disagree on their overlap.
pub fn common_extension(p: &Condition, q: &Condition) -> Result<Option<Condition>, ForcingError> {
    let tag = same_tag(p, q)?;
    let shared: BTreeSet<Elem> = p.universe().intersection(q.universe()).copied().collect();
    let base = p.structure.induced(&shared)?;
    if !same_structure(&base, &q.structure.induced(&shared)?) {
        return Ok(None);
    }
    if !membership(tag, &base)? {
        return find_strong(tag, &base, p, q);
    }
    let id = Embedding::identity(&base);
    let am = amalgamate_with(
        tag,
        &base,
        &p.structure,
        &q.structure,
        &id,
        &id,
        Placement::Keep,
        CrossChoice::Canonical,
    )?;
    if am.right.is_identity() {
        return Ok(Some(Condition::new_unchecked(tag, am.result)));
    }
    find_strong(tag, &base, p, q)
}

/// Fallback for classes whose canonical amalgam identifies points.
fn find_strong(
    tag: ClassTag,
    base: &FinStructure,
    p: &Condition,
    q: &Condition,
) -> Result<Option<Condition>, ForcingError> {
    let id = Embedding::identity(base);
    Ok(strong_amalgam_search(tag, base, &p.structure, &q.structure, &id, &id)?
        .ok()
        .map(|s| Condition::new_unchecked(tag, s)))
}
