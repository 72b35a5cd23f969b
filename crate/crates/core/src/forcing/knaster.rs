//! Pairwise-compatible subfamilies of finite condition families.

use std::collections::BTreeSet;

use super::delta::delta_system;
use super::{common_extension, same_structure, Condition, ForcingError};
use crate::structure::{Elem, FinStructure};

/// Δ-system on the universes, then the largest group agreeing on the root,
/// then a greedy pass keeping only members compatible with every kept one.
/// The output is pairwise compatible; its size is whatever survives.
pub fn knaster_trim(conditions: &[Condition]) -> Result<Vec<Condition>, ForcingError> {
    let Some(first) = conditions.first() else {
        return Ok(Vec::new());
    };
    let tag = first.tag();
    if let Some(c) = conditions.iter().find(|c| c.tag() != tag) {
        return Err(ForcingError::TagMismatch(tag, c.tag()));
    }
    if !tag.has_sap() {
        return Err(ForcingError::SAPRequired(tag));
    }
    let universes: Vec<BTreeSet<Elem>> = conditions.iter().map(|c| c.universe().clone()).collect();
    let delta = delta_system(&universes);

    let mut groups: Vec<(FinStructure, Vec<usize>)> = Vec::new();
    for &i in &delta.members {
        let r = conditions[i].structure().induced(&delta.root)?;
        match groups.iter_mut().find(|(s, _)| same_structure(s, &r)) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let best = groups
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.1.cmp(&a.1)))
        .map(|(_, g)| g)
        .unwrap_or_default();

    let mut kept: Vec<Condition> = Vec::new();
    for i in best {
        let c = &conditions[i];
        let mut ok = true;
        for k in &kept {
            if common_extension(k, c)?.is_none() {
                ok = false;
                break;
            }
        }
        if ok {
            kept.push(c.clone());
        }
    }
    Ok(kept)
}
