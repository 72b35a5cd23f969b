//! Amalgamation strategies for the built-in classes.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngCore};

use super::metric::{cross_distance, distance_symbol};
use super::{adjacency, membership, ClassError, ClassTag};
use crate::structure::{check_embedding, Elem, Embedding, FinStructure, Signature};

/// How the non-base points of the right factor are named in the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// Keep the right factor's id when it is free, otherwise take the
    /// smallest id unused by either factor.
    #[default]
    Keep,
    /// Always take the smallest id unused by the left factor.
    Fresh,
}

/// How undetermined cross relations are decided for classes that leave them
/// free (graphs, digraphs, tournaments).
pub enum CrossChoice<'a> {
    /// No cross edges; tournaments orient cross pairs left to right.
    Canonical,
    /// Fair coin flips.
    Random(&'a mut dyn RngCore),
}

/// `result` together with the embeddings of the two factors. The left
/// embedding is always the inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    pub result: FinStructure,
    pub left: Embedding,
    pub right: Embedding,
}

/// Amalgam of `f: base → left` and `g: base → right` with canonical choices.
pub fn amalgamate(
    tag: ClassTag,
    base: &FinStructure,
    left: &FinStructure,
    right: &FinStructure,
    f: &Embedding,
    g: &Embedding,
) -> Result<Amalgam, ClassError> {
    amalgamate_with(tag, base, left, right, f, g, Placement::Keep, CrossChoice::Canonical)
}

#[allow(clippy::too_many_arguments)]
pub fn amalgamate_with(
    tag: ClassTag,
    base: &FinStructure,
    left: &FinStructure,
    right: &FinStructure,
    f: &Embedding,
    g: &Embedding,
    placement: Placement,
    mut choice: CrossChoice<'_>,
) -> Result<Amalgam, ClassError> {
    for (role, s) in [("base", base), ("left", left), ("right", right)] {
        if !membership(tag, s)? {
            return Err(ClassError::NotInClass(format!("{role} factor {s}")));
        }
    }
    let sig = base.sig().union(left.sig())?.union(right.sig())?;
    let (base, left, right) = (base.widen(&sig)?, left.widen(&sig)?, right.widen(&sig)?);
    check_embedding(&base, &left, f.map())?;
    check_embedding(&base, &right, g.map())?;

    let pinned: BTreeMap<Elem, Elem> = g.map().iter().map(|(a, &c)| (c, f.map()[a])).collect();
    let (result, rmap) = if tag == ClassTag::LinearGraph {
        linear_graph_amalgam(&base, &left, &right, f, g, pinned, placement)?
    } else {
        let rmap = place(&left, &right, pinned, placement);
        let result = strong_amalgam(tag, &sig, f, &left, &right, &rmap, &mut choice)?;
        (result, rmap)
    };
    let left_emb = Embedding::identity(&left);
    let right_emb = Embedding::new(&right.widen(result.sig())?, &result, rmap)
        .map_err(|e| ClassError::AmalgamationImpossible(e.to_string()))?;
    check_embedding(&left.widen(result.sig())?, &result, left_emb.map())
        .map_err(|e| ClassError::AmalgamationImpossible(e.to_string()))?;
    if !membership(tag, &result)? {
        return Err(ClassError::AmalgamationImpossible(format!(
            "{tag} strategy produced a non-member {result}"
        )));
    }
    Ok(Amalgam {
        result,
        left: left_emb,
        right: right_emb,
    })
}

/// Whether the two images meet exactly in the image of the base.
pub fn is_strong(am: &Amalgam, f: &Embedding) -> bool {
    let shared: BTreeSet<Elem> = am.left.image().intersection(&am.right.image()).copied().collect();
    shared == f.then(&am.left).image()
}

/// Names for the right factor: pinned points follow the base, the rest per
/// `placement`.
pub(super) fn place(
    left: &FinStructure,
    right: &FinStructure,
    mut rmap: BTreeMap<Elem, Elem>,
    placement: Placement,
) -> BTreeMap<Elem, Elem> {
    let mut used: BTreeSet<Elem> = left.universe().clone();
    used.extend(rmap.values().copied());
    let avoid_right = placement == Placement::Keep;
    let mut next: Elem = 0;
    for &c in right.universe() {
        if rmap.contains_key(&c) {
            continue;
        }
        let id = if avoid_right && !used.contains(&c) {
            c
        } else {
            while used.contains(&next) || (avoid_right && right.contains(next)) {
                next += 1;
            }
            next
        };
        used.insert(id);
        rmap.insert(c, id);
    }
    rmap
}

/// Union of `left` and the renamed `right` plus the class's cross rule. No
/// points are identified beyond the base.
fn strong_amalgam(
    tag: ClassTag,
    sig: &Signature,
    f: &Embedding,
    left: &FinStructure,
    right: &FinStructure,
    rmap: &BTreeMap<Elem, Elem>,
    choice: &mut CrossChoice<'_>,
) -> Result<FinStructure, ClassError> {
    let moved = right.rename(rmap);
    let base_ids = f.image();
    let left_only: Vec<Elem> = left.universe().iter().copied().filter(|x| !base_ids.contains(x)).collect();
    let right_only: Vec<Elem> = moved.universe().iter().copied().filter(|x| !base_ids.contains(x)).collect();

    let mut interp: BTreeMap<String, BTreeSet<Vec<Elem>>> = BTreeMap::new();
    for (idx, (name, _)) in sig.symbols().iter().enumerate() {
        let e = interp.entry(name.clone()).or_default();
        e.extend(left.tuples_at(idx).iter().cloned());
        e.extend(moved.tuples_at(idx).iter().cloned());
    }
    let mut add = |name: String, x: Elem, y: Elem| {
        interp.entry(name).or_default().insert(vec![x, y]);
    };
    match tag {
        ClassTag::Graph => {
            if let CrossChoice::Random(rng) = choice {
                for &b in &left_only {
                    for &c in &right_only {
                        if rng.gen_bool(0.5) {
                            add("E".into(), b, c);
                            add("E".into(), c, b);
                        }
                    }
                }
            }
        }
        ClassTag::Digraph => {
            if let CrossChoice::Random(rng) = choice {
                for &b in &left_only {
                    for &c in &right_only {
                        if rng.gen_bool(0.5) {
                            add("E".into(), b, c);
                        }
                        if rng.gen_bool(0.5) {
                            add("E".into(), c, b);
                        }
                    }
                }
            }
        }
        ClassTag::Tournament => {
            for &b in &left_only {
                for &c in &right_only {
                    let forward = match choice {
                        CrossChoice::Canonical => true,
                        CrossChoice::Random(rng) => rng.gen_bool(0.5),
                    };
                    if forward {
                        add("E".into(), b, c);
                    } else {
                        add("E".into(), c, b);
                    }
                }
            }
        }
        ClassTag::LinearOrder => {
            // l1 < l2 iff some base point r has l1 <_left r <_right l2;
            // otherwise l2 < l1.
            for &l1 in &left_only {
                for &l2 in &right_only {
                    let separated = base_ids
                        .iter()
                        .any(|&r| left.holds("<", &[l1, r]) && moved.holds("<", &[r, l2]));
                    if separated {
                        add("<".into(), l1, l2);
                    } else {
                        add("<".into(), l2, l1);
                    }
                }
            }
        }
        ClassTag::PartialOrder => {
            let universe: Vec<Elem> = left.universe().union(moved.universe()).copied().collect();
            let rel = interp.entry("<".into()).or_default();
            loop {
                let mut fresh = Vec::new();
                for t in rel.iter() {
                    for &z in &universe {
                        if rel.contains(&vec![t[1], z]) && !rel.contains(&vec![t[0], z]) {
                            fresh.push(vec![t[0], z]);
                        }
                    }
                }
                if fresh.is_empty() {
                    break;
                }
                rel.extend(fresh);
            }
            if rel.iter().any(|t| t[0] == t[1] || rel.contains(&vec![t[1], t[0]])) {
                return Err(ClassError::AmalgamationImpossible(
                    "transitive closure breaks antisymmetry".into(),
                ));
            }
        }
        ClassTag::RationalMetric => {
            let base_pts: Vec<Elem> = base_ids.iter().copied().collect();
            for &b in &left_only {
                for &c in &right_only {
                    let d = cross_distance(left, &moved, &base_pts, b, c);
                    add(distance_symbol(d), b, c);
                    add(distance_symbol(d), c, b);
                }
            }
        }
        ClassTag::LinearGraph => unreachable!("paths use the merge strategy"),
    }
    let full_sig = sig.union(&Signature::new(interp.keys().map(|k| (k.clone(), 2)))?)?;
    let universe = left.universe().union(moved.universe()).copied();
    Ok(FinStructure::new(
        full_sig,
        universe,
        interp.into_iter().map(|(k, v)| (k, v.into_iter().collect())),
    )?)
}

/// Vertices of a path from its smaller endpoint to the other.
pub(crate) fn path_sequence(s: &FinStructure) -> Vec<Elem> {
    let adj = adjacency(s);
    let Some(start) = adj.iter().find(|(_, n)| n.len() <= 1).map(|(&x, _)| x) else {
        return Vec::new();
    };
    let mut seq = vec![start];
    let mut prev = None;
    let mut cur = start;
    while let Some(&next) = adj[&cur].iter().find(|&&y| Some(y) != prev) {
        seq.push(next);
        prev = Some(cur);
        cur = next;
    }
    seq
}

/// Orients `seq` so that `segment` occurs in it left to right; returns the
/// outward tails on either side.
fn split_around(mut seq: Vec<Elem>, segment: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let k = segment.len();
    let find = |seq: &[Elem]| seq.windows(k).position(|w| w == segment);
    let start = match find(&seq) {
        Some(s) => s,
        None => {
            seq.reverse();
            find(&seq).expect("embedded path is a contiguous segment")
        }
    };
    let left: Vec<Elem> = seq[..start].iter().rev().copied().collect();
    let right = seq[start + k..].to_vec();
    (left, right)
}

/// Paths amalgamate by gluing the tails on each side of the base outward,
/// identifying points at equal distance from the base. Over the empty base
/// the two paths are joined end to end.
fn linear_graph_amalgam(
    base: &FinStructure,
    left: &FinStructure,
    right: &FinStructure,
    f: &Embedding,
    g: &Embedding,
    mut pinned: BTreeMap<Elem, Elem>,
    placement: Placement,
) -> Result<(FinStructure, BTreeMap<Elem, Elem>), ClassError> {
    let bseq = path_sequence(left);
    let aseq = path_sequence(base);
    let mut seq: Vec<Elem>;
    let rmap;
    if aseq.is_empty() {
        rmap = place(left, right, pinned, placement);
        seq = bseq;
        seq.extend(path_sequence(right).iter().map(|c| rmap[c]));
    } else {
        let fa: Vec<Elem> = aseq.iter().map(|a| f.map()[a]).collect();
        let ga: Vec<Elem> = aseq.iter().map(|a| g.map()[a]).collect();
        let (lb, rb) = split_around(bseq, &fa);
        let (mut lc, mut rc) = split_around(path_sequence(right), &ga);
        let overlap = |x: &[Elem], y: &[Elem], z: &[Elem], w: &[Elem]| {
            x.len().min(y.len()) + z.len().min(w.len())
        };
        if aseq.len() == 1 && overlap(&lb, &rc, &rb, &lc) < overlap(&lb, &lc, &rb, &rc) {
            std::mem::swap(&mut lc, &mut rc);
        }
        for (tb, tc) in [(&lb, &lc), (&rb, &rc)] {
            for (x, y) in tb.iter().zip(tc.iter()) {
                pinned.insert(*y, *x);
            }
        }
        rmap = place(left, right, pinned, placement);
        let tail = |tb: &[Elem], tc: &[Elem]| -> Vec<Elem> {
            (0..tb.len().max(tc.len()))
                .map(|i| tb.get(i).copied().unwrap_or_else(|| rmap[&tc[i]]))
                .collect()
        };
        seq = tail(&lb, &lc);
        seq.reverse();
        seq.extend(&fa);
        seq.extend(tail(&rb, &rc));
    }
    let edges: Vec<(Elem, Elem)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
    let result = super::graph(seq.iter().copied(), &edges)?;
    Ok((result, rmap))
}
