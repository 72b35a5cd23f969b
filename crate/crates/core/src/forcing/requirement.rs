//! Dense requirements and the schedules that feed the generic builder.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::{Rng, RngCore};

use super::{Condition, ForcingError};
use crate::classes::{
    amalgamate_with, chain, chain_of, labeled_extensions, membership, ClassError, ClassTag,
    CrossChoice, Placement,
};
use crate::search::{canonical_code_colored, find_extension};
use crate::structure::{check_embedding, Elem, Embedding, FinStructure};

/// "Some embedding `g: ext → p` satisfies `g ∘ f = i`", relativised to
/// conditions where `i` is an embedding at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionRequirement {
    pub name: String,
    pub base: FinStructure,
    pub ext: FinStructure,
    pub f: Embedding,
    pub i: BTreeMap<Elem, Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DenseRequirement {
    /// The element belongs to the condition.
    Contains(Elem),
    /// Both elements belong and some element lies strictly between them.
    /// Linear orders only.
    Between(Elem, Elem),
    Extension(ExtensionRequirement),
}

impl DenseRequirement {
    pub fn name(&self) -> String {
        match self {
            DenseRequirement::Contains(n) => format!("D_{n}"),
            DenseRequirement::Between(a, b) => format!("D_{a},{b}"),
            DenseRequirement::Extension(e) => e.name.clone(),
        }
    }

    pub fn is_satisfied(&self, p: &Condition) -> Result<bool, ForcingError> {
        let s = p.structure();
        match self {
            DenseRequirement::Contains(n) => Ok(s.contains(*n)),
            DenseRequirement::Between(a, b) => {
                between_applicable(p)?;
                if !(s.contains(*a) && s.contains(*b)) {
                    return Ok(false);
                }
                if a == b {
                    return Ok(true);
                }
                let (lo, hi) = if s.holds("<", &[*a, *b]) { (*a, *b) } else { (*b, *a) };
                Ok(s.universe()
                    .iter()
                    .any(|&x| s.holds("<", &[lo, x]) && s.holds("<", &[x, hi])))
            }
            DenseRequirement::Extension(e) => {
                if !e.i.values().all(|y| s.contains(*y)) {
                    return Ok(false);
                }
                let sig = e.base.sig().union(s.sig())?;
                let (base, target) = (e.base.widen(&sig)?, s.widen(&sig)?);
                if check_embedding(&base, &target, &e.i).is_err() {
                    return Ok(true);
                }
                Ok(realization(e, &target)?.is_some())
            }
        }
    }

    /// A condition extending `p` that satisfies the requirement. Only called
    /// when the requirement fails at `p`.
    fn extend(&self, p: &Condition, rng: &mut dyn RngCore) -> Result<Condition, ForcingError> {
        match self {
            DenseRequirement::Contains(n) => add_point(p, *n, rng),
            DenseRequirement::Between(a, b) => {
                let mut q = p.clone();
                for x in [*a, *b] {
                    if !q.structure().contains(x) {
                        q = add_point(&q, x, rng)?;
                    }
                }
                if self.is_satisfied(&q)? {
                    return Ok(q);
                }
                let order = chain_of(q.structure());
                let lo_pos = order
                    .iter()
                    .position(|x| x == a || x == b)
                    .expect("both present");
                let fresh = smallest_unused(q.universe());
                let mut next = order.clone();
                next.insert(lo_pos + 1, fresh);
                Ok(Condition::new_unchecked(ClassTag::LinearOrder, chain(&next)))
            }
            DenseRequirement::Extension(e) => {
                let mut q = p.clone();
                let mut missing: Vec<Elem> = e.i.values().copied().filter(|y| !q.structure().contains(*y)).collect();
                missing.sort_unstable();
                for y in missing {
                    q = add_point(&q, y, rng)?;
                }
                if self.is_satisfied(&q)? {
                    return Ok(q);
                }
                let i = Embedding::new(&e.base.widen(q.structure().sig())?, q.structure(), e.i.clone())?;
                let am = amalgamate_with(
                    q.tag(),
                    &e.base,
                    q.structure(),
                    &e.ext,
                    &i,
                    &e.f,
                    Placement::Fresh,
                    CrossChoice::Random(rng),
                )?;
                Ok(Condition::new_unchecked(q.tag(), am.result))
            }
        }
    }
}

fn between_applicable(p: &Condition) -> Result<(), ForcingError> {
    if p.tag() != ClassTag::LinearOrder {
        return Err(ForcingError::NotApplicable(format!(
            "betweenness requirements need LinearOrder, got {}",
            p.tag()
        )));
    }
    Ok(())
}

fn realization(e: &ExtensionRequirement, target: &FinStructure) -> Result<Option<Embedding>, ForcingError> {
    let ext = e.ext.widen(&e.ext.sig().union(target.sig())?)?;
    let target = target.widen(ext.sig())?;
    let fixed: BTreeMap<Elem, Elem> = e.f.map().iter().map(|(b, y)| (*y, e.i[b])).collect();
    Ok(find_extension(&ext, &target, &fixed)?)
}

fn smallest_unused(used: &BTreeSet<Elem>) -> Elem {
    (0..).find(|x| !used.contains(x)).expect("naturals are infinite")
}

/// Adds `x` with randomly chosen relations to the existing points: a uniform
/// position for orders, coin flips where the class leaves cross relations
/// free, and the class's canonical one-point amalgam otherwise.
fn add_point(p: &Condition, x: Elem, rng: &mut dyn RngCore) -> Result<Condition, ForcingError> {
    debug_assert!(!p.structure().contains(x));
    let tag = p.tag();
    if tag == ClassTag::LinearOrder {
        let mut order = chain_of(p.structure());
        let pos = rng.gen_range(0..=order.len());
        order.insert(pos, x);
        return Ok(Condition::new_unchecked(tag, chain(&order)));
    }
    let empty = tag.empty();
    let point = labeled_extensions(tag, &empty, &[x])?
        .into_iter()
        .next()
        .ok_or_else(|| ForcingError::NoExtension(format!("{tag} has no one-point member")))?;
    let none = Embedding::identity(&empty);
    let am = amalgamate_with(
        tag,
        &empty,
        p.structure(),
        &point,
        &none,
        &none,
        Placement::Keep,
        CrossChoice::Random(rng),
    )?;
    debug_assert!(am.result.contains(x));
    Ok(Condition::new_unchecked(tag, am.result))
}

/// `p` itself when it already satisfies `req`, otherwise an extension that
/// does. Fresh points are the smallest unused naturals.
pub fn meet(p: &Condition, req: &DenseRequirement, rng: &mut dyn RngCore) -> Result<Condition, ForcingError> {
    if req.is_satisfied(p)? {
        return Ok(p.clone());
    }
    let q = req.extend(p, rng)?;
    debug_assert!(req.is_satisfied(&q)?);
    Ok(q)
}

/// Requirement that `i: base → ℕ` extends along `f: base → ext`.
pub fn extension_requirement(
    tag: ClassTag,
    i: BTreeMap<Elem, Elem>,
    base: FinStructure,
    ext: FinStructure,
    f: Embedding,
) -> Result<DenseRequirement, ForcingError> {
    for s in [&base, &ext] {
        if !membership(tag, s)? {
            return Err(ClassError::NotInClass(s.to_string()).into());
        }
    }
    let sig = base.sig().union(ext.sig())?;
    check_embedding(&base.widen(&sig)?, &ext.widen(&sig)?, f.map())?;
    let image: BTreeSet<Elem> = i.values().copied().collect();
    if i.keys().copied().collect::<BTreeSet<_>>() != *base.universe() || image.len() != i.len() {
        return Err(ForcingError::NotApplicable(
            "i must be injective and defined on the base".into(),
        ));
    }
    let mut name = String::from("E[i=");
    for (k, (x, y)) in i.iter().enumerate() {
        let sep = if k == 0 { "" } else { "," };
        write!(name, "{sep}{x}:{y}").unwrap();
    }
    write!(name, ";f=").unwrap();
    for (k, (x, y)) in f.map().iter().enumerate() {
        let sep = if k == 0 { "" } else { "," };
        write!(name, "{sep}{x}:{y}").unwrap();
    }
    write!(name, ";ext={}]", ext.to_json()).unwrap();
    Ok(DenseRequirement::Extension(ExtensionRequirement { name, base, ext, f, i }))
}

fn subsets_by_size(n: Elem, max: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = (0u32..(1 << n))
        .map(|mask| (0..n).filter(|x| mask & (1 << x) != 0).collect::<Vec<_>>())
        .filter(|s| s.len() <= max)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// `D_m` for `m < n`, then one extension requirement for every labeled
/// member `B` on a subset `S ⊆ {0..n-1}` and every extension `B'` of `B`
/// with at most `max_ext` points, taken up to isomorphism over `S`.
pub fn graph_schedule(tag: ClassTag, n: Elem, max_ext: usize) -> Result<Vec<DenseRequirement>, ForcingError> {
    let mut out: Vec<DenseRequirement> = (0..n).map(DenseRequirement::Contains).collect();
    let empty = tag.empty();
    let fresh: Vec<Elem> = (n..n + max_ext as Elem).collect();
    for s in subsets_by_size(n, max_ext.saturating_sub(1)) {
        let colors: BTreeMap<Elem, u32> = s.iter().enumerate().map(|(j, &x)| (x, j as u32 + 1)).collect();
        for b in labeled_extensions(tag, &empty, &s)? {
            let i: BTreeMap<Elem, Elem> = s.iter().map(|&x| (x, x)).collect();
            for k in 1..=max_ext - s.len() {
                let mut seen = BTreeSet::new();
                for ext in labeled_extensions(tag, &b, &fresh[..k])? {
                    if !seen.insert(canonical_code_colored(&ext, &colors)) {
                        continue;
                    }
                    let f = Embedding::new(&b.widen(ext.sig())?, &ext, i.clone())?;
                    out.push(extension_requirement(tag, i.clone(), b.clone(), ext, f)?);
                }
            }
        }
    }
    Ok(out)
}

/// `D_m` for `m < n`, then `D_{α,β}` for `α < β < n`.
pub fn order_schedule(n: Elem) -> Vec<DenseRequirement> {
    let mut out: Vec<DenseRequirement> = (0..n).map(DenseRequirement::Contains).collect();
    for a in 0..n {
        for b in a + 1..n {
            out.push(DenseRequirement::Between(a, b));
        }
    }
    out
}

/// The default schedule: betweenness for linear orders, extension
/// requirements with up to three points for every other class.
pub fn schedule_for(tag: ClassTag, n: Elem) -> Result<Vec<DenseRequirement>, ForcingError> {
    if tag == ClassTag::LinearOrder {
        Ok(order_schedule(n))
    } else {
        graph_schedule(tag, n, 3)
    }
}
