//! Amalgamating two conditions over a common root so that designated points
//! cross: an edge between `s` and `t` but none between `s̄` and `t̄`, or
//! `s < t` together with `t̄ < s̄`.

use std::collections::{BTreeMap, BTreeSet};

use super::{same_structure, Condition, ForcingError};
use crate::classes::{amalgamate, chain, chain_of, ClassTag};
use crate::structure::{check_embedding, Elem, Embedding, FinStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingSpec {
    pub s: Elem,
    pub sbar: Elem,
    pub t: Elem,
    pub tbar: Elem,
}

fn check_preconditions(
    p_s: &Condition,
    p_t: &Condition,
    root: &BTreeSet<Elem>,
    spec: &CrossingSpec,
) -> Result<ClassTag, ForcingError> {
    let tag = p_s.tag();
    if p_t.tag() != tag {
        return Err(ForcingError::TagMismatch(tag, p_t.tag()));
    }
    if !matches!(tag, ClassTag::Graph | ClassTag::LinearOrder) {
        return Err(ForcingError::NotApplicable(format!("crossing amalgams need Graph or LinearOrder, got {tag}")));
    }
    if spec.s == spec.t || spec.sbar == spec.tbar || spec.s == spec.sbar {
        return Err(ForcingError::IsomorphismTypeMismatch("designated points coincide".into()));
    }
    let shared: BTreeSet<Elem> = p_s.universe().intersection(p_t.universe()).copied().collect();
    if shared != *root {
        return Err(ForcingError::RootDisagreement(format!(
            "universes meet in {shared:?}, not in the root {root:?}"
        )));
    }
    let rs = p_s.structure().induced(root)?;
    if !same_structure(&rs, &p_t.structure().induced(root)?) {
        return Err(ForcingError::RootDisagreement("conditions differ on the root".into()));
    }
    let in_petal = |p: &Condition, x: Elem| p.structure().contains(x) && !root.contains(&x);
    if !(in_petal(p_s, spec.s) && in_petal(p_s, spec.sbar) && in_petal(p_t, spec.t) && in_petal(p_t, spec.tbar)) {
        return Err(ForcingError::IsomorphismTypeMismatch(
            "designated points must lie outside the root in their own condition".into(),
        ));
    }
    let with = |xs: [Elem; 2]| -> BTreeSet<Elem> { root.iter().copied().chain(xs).collect() };
    let a = p_s.structure().induced(&with([spec.s, spec.sbar]))?;
    let b = p_t.structure().induced(&with([spec.t, spec.tbar]))?;
    let mut map: BTreeMap<Elem, Elem> = root.iter().map(|&r| (r, r)).collect();
    map.insert(spec.s, spec.t);
    map.insert(spec.sbar, spec.tbar);
    if check_embedding(&a, &b, &map).is_err() {
        return Err(ForcingError::IsomorphismTypeMismatch(
            "root ∪ {s, s̄} and root ∪ {t, t̄} are not isomorphic via s ↦ t, s̄ ↦ t̄".into(),
        ));
    }
    Ok(tag)
}

pub fn crossing_amalgamation(
    p_s: &Condition,
    p_t: &Condition,
    root: &BTreeSet<Elem>,
    spec: CrossingSpec,
) -> Result<Condition, ForcingError> {
    let tag = check_preconditions(p_s, p_t, root, &spec)?;
    let result = match tag {
        ClassTag::Graph => cross_graphs(p_s, p_t, root, &spec)?,
        _ => cross_orders(p_s, p_t, root, &spec)?,
    };
    Condition::new(tag, result)
}

fn cross_graphs(
    p_s: &Condition,
    p_t: &Condition,
    root: &BTreeSet<Elem>,
    spec: &CrossingSpec,
) -> Result<FinStructure, ForcingError> {
    let base = p_s.structure().induced(root)?;
    let id = Embedding::identity(&base);
    let am = amalgamate(ClassTag::Graph, &base, p_s.structure(), p_t.structure(), &id, &id)?;
    let mut g = am.result;
    g.insert_tuple(0, vec![spec.s, spec.t]);
    g.insert_tuple(0, vec![spec.t, spec.s]);
    Ok(g)
}

/// Builds the four-point pattern over the root, then glues each condition to
/// it and the two results to each other.
fn cross_orders(
    p_s: &Condition,
    p_t: &Condition,
    root: &BTreeSet<Elem>,
    spec: &CrossingSpec,
) -> Result<FinStructure, ForcingError> {
    let ls = p_s.structure();
    let order = chain_of(ls);
    let root_chain: Vec<Elem> = order.iter().copied().filter(|x| root.contains(x)).collect();
    let gap = |x: Elem| root_chain.iter().filter(|&&r| ls.holds("<", &[r, x])).count();
    let rank: [(Elem, usize); 4] = if ls.holds("<", &[spec.s, spec.sbar]) {
        [(spec.s, 0), (spec.t, 1), (spec.tbar, 2), (spec.sbar, 3)]
    } else {
        [(spec.tbar, 0), (spec.sbar, 1), (spec.s, 2), (spec.t, 3)]
    };
    let gap_of = |x: Elem| if x == spec.s || x == spec.t { gap(spec.s) } else { gap(spec.sbar) };
    let mut keyed: Vec<((usize, usize), Elem)> = root_chain
        .iter()
        .enumerate()
        .map(|(j, &r)| ((2 * j + 1, 0), r))
        .collect();
    keyed.extend(rank.iter().map(|&(x, k)| ((2 * gap_of(x), k), x)));
    keyed.sort();
    let z = chain(&keyed.iter().map(|(_, x)| *x).collect::<Vec<_>>());

    let glue = |p: &FinStructure, pair: [Elem; 2]| -> Result<FinStructure, ForcingError> {
        let over: BTreeSet<Elem> = root.iter().copied().chain(pair).collect();
        let base = z.induced(&over)?;
        let id = Embedding::identity(&base);
        Ok(amalgamate(ClassTag::LinearOrder, &base, p, &z, &id, &id)?.result)
    };
    let x = glue(ls, [spec.s, spec.sbar])?;
    let y = glue(p_t.structure(), [spec.t, spec.tbar])?;
    let id = Embedding::identity(&z);
    let q = amalgamate(ClassTag::LinearOrder, &z, &x, &y, &id, &id)?;
    debug_assert!(q.right.is_identity());
    Ok(q.result)
}
