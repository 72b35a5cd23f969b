//! Verifiers for finite prefixes of generic structures.
//!
//! Each check produces a [`Report`] of items in a fixed order. An item names
//! one concrete instance (a map, an extension, a type) and records whether it
//! passed, with a witness when one exists.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{iso_types_up_to, membership, ClassError, ClassTag};
use crate::search::{enumerate_embeddings, find_extension};
use crate::structure::{Elem, FinStructure};

/// Largest `k` accepted by the extension and universality checks.
pub const MAX_K: usize = 4;
/// Largest structure accepted by the extension and universality checks.
pub const MAX_SIZE: usize = 40;
/// Item budget for the homogeneity check.
pub const MAX_HOMOGENEITY_ITEMS: f64 = 2e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportItem {
    pub item: String,
    pub verdict: ItemVerdict,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub items: Vec<ReportItem>,
}

impl Report {
    fn push(&mut self, item: String, witness: Option<String>) {
        let verdict = if witness.is_some() { ItemVerdict::Pass } else { ItemVerdict::Fail };
        self.items.push(ReportItem { item, verdict, witness });
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.verdict == ItemVerdict::Pass)
    }

    pub fn failures(&self) -> Vec<&ReportItem> {
        self.items.iter().filter(|i| i.verdict == ItemVerdict::Fail).collect()
    }

    pub fn get(&self, item: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.item == item)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn render_map(m: &BTreeMap<Elem, Elem>) -> String {
    m.iter().map(|(x, y)| format!("{x}:{y}")).collect::<Vec<_>>().join(",")
}

fn render_set(s: &BTreeSet<Elem>) -> String {
    s.iter().map(Elem::to_string).collect::<Vec<_>>().join(",")
}

fn subsets_up_to(universe: &BTreeSet<Elem>, k: usize) -> Vec<BTreeSet<Elem>> {
    let elems: Vec<Elem> = universe.iter().copied().collect();
    let mut out = vec![BTreeSet::new()];
    let mut frontier = vec![(BTreeSet::new(), 0usize)];
    for _ in 0..k {
        let mut next = Vec::new();
        for (s, from) in &frontier {
            for (i, &x) in elems.iter().enumerate().skip(*from) {
                let mut t: BTreeSet<Elem> = s.clone();
                t.insert(x);
                out.push(t.clone());
                next.push((t, i + 1));
            }
        }
        frontier = next;
    }
    out
}

fn precheck(m: &FinStructure, tag: ClassTag, k: usize) -> Result<(), ClassError> {
    if k > MAX_K || m.len() > MAX_SIZE {
        return Err(ClassError::ScaleExceeded(format!(
            "k = {k}, |M| = {} (limits {MAX_K}, {MAX_SIZE})",
            m.len()
        )));
    }
    if !membership(tag, m)? {
        return Err(ClassError::NotInClass(format!("{tag}: input is not a member")));
    }
    Ok(())
}

/// Members of the class with at most `k` elements, widened to `m`'s
/// signature. Fails if `m`'s signature cannot hold them.
fn types_for(m: &FinStructure, tag: ClassTag, k: usize) -> Result<(FinStructure, Vec<FinStructure>), ClassError> {
    let levels = iso_types_up_to(tag, k)?;
    let sig = levels[0][0].sig().union(m.sig())?;
    let types = levels
        .into_iter()
        .flatten()
        .map(|t| t.widen(&sig))
        .collect::<Result<_, _>>()?;
    Ok((m.widen(&sig)?, types))
}

/// For every class member `B` with `|B| ≤ k`, every proper `A ⊆ B` and every
/// embedding `e: A → M`, whether `e` extends to an embedding `B → M`.
///
/// Items read `B=<json> A=<elements of B> e=<pairs>`; the witness is the
/// extending embedding.
pub fn extension_property_report(m: &FinStructure, tag: ClassTag, k: usize) -> Result<Report, ClassError> {
    precheck(m, tag, k)?;
    let (m, types) = types_for(m, tag, k)?;
    let mut report = Report::default();
    for b in &types {
        for a_set in subsets_up_to(b.universe(), b.len().saturating_sub(1)) {
            let a = b.induced(&a_set)?;
            for e in enumerate_embeddings(&a, &m)? {
                let item = format!("B={} A={{{}}} e={}", b.to_json(), render_set(&a_set), render_map(e.map()));
                let found = find_extension(b, &m, e.map())?;
                report.push(item, found.map(|f| render_map(f.map())));
            }
        }
    }
    Ok(report)
}

/// Whether each isomorphism type with at most `k` elements embeds in `m`.
pub fn universality_check(m: &FinStructure, tag: ClassTag, k: usize) -> Result<Report, ClassError> {
    precheck(m, tag, k)?;
    let (m, types) = types_for(m, tag, k)?;
    let mut report = Report::default();
    for t in &types {
        let found = find_extension(t, &m, &BTreeMap::new())?;
        report.push(format!("type={}", t.to_json()), found.map(|f| render_map(f.map())));
    }
    Ok(report)
}

fn falling(n: usize, j: usize) -> f64 {
    (0..j).map(|i| n.saturating_sub(i) as f64).product()
}

fn binomial(n: usize, j: usize) -> f64 {
    falling(n, j) / falling(j, j)
}

/// Upper bound on the number of homogeneity items.
pub fn homogeneity_items_estimate(n: usize, k: usize) -> f64 {
    (0..=k.min(n)).map(|j| binomial(n, j) * falling(n, j) * n as f64).sum()
}

/// For every partial isomorphism `f` of `m` with `|dom f| ≤ k` and every
/// `x ∉ dom f`, whether some `y` makes `f ∪ {x ↦ y}` a partial isomorphism.
///
/// Items read `f=<pairs> x=<elem>`; the witness is `y`.
pub fn one_point_homogeneity(m: &FinStructure, tag: ClassTag, k: usize) -> Result<Report, ClassError> {
    let estimate = homogeneity_items_estimate(m.len(), k);
    if estimate > MAX_HOMOGENEITY_ITEMS {
        return Err(ClassError::ScaleExceeded(format!("about {estimate:.0} items")));
    }
    if !membership(tag, m)? {
        return Err(ClassError::NotInClass(format!("{tag}: input is not a member")));
    }
    let mut report = Report::default();
    for dom in subsets_up_to(m.universe(), k) {
        let d = m.induced(&dom)?;
        for f in enumerate_embeddings(&d, m)? {
            for &x in m.universe().difference(&dom) {
                let mut wider = dom.clone();
                wider.insert(x);
                let found = find_extension(&m.induced(&wider)?, m, f.map())?;
                let item = format!("f={} x={x}", render_map(f.map()));
                report.push(item, found.map(|g| g.map()[&x].to_string()));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("InvalidInstance: {0}")]
pub struct InvalidInstance(pub String);

/// Pairwise disjoint `k`-tuples of points of ℤ (with its usual order) and a
/// target pattern in `{T, F}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntangledInstance {
    k: usize,
    tuples: Vec<Vec<i64>>,
    pattern: Vec<bool>,
}

impl EntangledInstance {
    pub fn new(k: usize, tuples: Vec<Vec<i64>>, pattern: Vec<bool>) -> Result<Self, InvalidInstance> {
        if pattern.len() != k {
            return Err(InvalidInstance(format!("pattern has length {}, expected {k}", pattern.len())));
        }
        let mut seen = BTreeMap::new();
        for (n, t) in tuples.iter().enumerate() {
            if t.len() != k {
                return Err(InvalidInstance(format!("tuple {n} has length {}", t.len())));
            }
            for &x in t {
                if let Some(prev) = seen.insert(x, n) {
                    if prev != n {
                        return Err(InvalidInstance(format!("tuples {prev} and {n} share {x}")));
                    }
                }
            }
        }
        Ok(EntangledInstance { k, tuples, pattern })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tuples(&self) -> &[Vec<i64>] {
        &self.tuples
    }

    pub fn pattern(&self) -> &[bool] {
        &self.pattern
    }
}

/// Lexicographically first `(ξ, η)`, `ξ ≠ η`, with `t_ξ[i] ≤ t_η[i]` exactly
/// where the pattern is `T`.
pub fn entangled_check(inst: &EntangledInstance) -> Option<(usize, usize)> {
    let n = inst.tuples.len();
    (0..n)
        .flat_map(|xi| (0..n).map(move |eta| (xi, eta)))
        .filter(|(xi, eta)| xi != eta)
        .find(|&(xi, eta)| {
            let (s, t) = (&inst.tuples[xi], &inst.tuples[eta]);
            (0..inst.k).all(|i| (s[i] <= t[i]) == inst.pattern[i])
        })
}
