//! Exhaustive embedding and isomorphism search, and canonical forms.
//!
//! Everything here is backtracking over dense indices. Source elements are
//! assigned in increasing id order and candidates tried in increasing id
//! order, so the first witness found is the lexicographically least one.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::structure::{Elem, Embedding, FinStructure, StructureError};

enum Rel {
    Unary(Vec<bool>),
    Binary { n: usize, bits: Vec<bool> },
    General(HashSet<Vec<usize>>),
}

impl Rel {
    fn contains(&self, t: &[usize]) -> bool {
        match self {
            Rel::Unary(v) => v[t[0]],
            Rel::Binary { n, bits } => bits[t[0] * n + t[1]],
            Rel::General(s) => s.contains(t),
        }
    }
}

struct Indexed {
    elems: Vec<Elem>,
    pos: HashMap<Elem, usize>,
    arities: Vec<usize>,
    rels: Vec<Rel>,
}

impl Indexed {
    fn new(s: &FinStructure) -> Self {
        let elems: Vec<Elem> = s.universe().iter().copied().collect();
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elems.len();
        let mut arities = Vec::new();
        let mut rels = Vec::new();
        for (idx, (_, arity)) in s.sig().symbols().iter().enumerate() {
            arities.push(*arity);
            let tuples = s.tuples_at(idx);
            let rel = match arity {
                1 => {
                    let mut v = vec![false; n];
                    for t in tuples {
                        v[pos[&t[0]]] = true;
                    }
                    Rel::Unary(v)
                }
                2 => {
                    let mut bits = vec![false; n * n];
                    for t in tuples {
                        bits[pos[&t[0]] * n + pos[&t[1]]] = true;
                    }
                    Rel::Binary { n, bits }
                }
                _ => Rel::General(
                    tuples
                        .iter()
                        .map(|t| t.iter().map(|x| pos[x]).collect())
                        .collect(),
                ),
            };
            rels.push(rel);
        }
        Indexed {
            elems,
            pos,
            arities,
            rels,
        }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    /// Per-element counts of tuple occurrences by (symbol, position), plus
    /// the number of tuples with repeated entries. Invariant under isomorphism.
    fn valence(&self, s: &FinStructure) -> Vec<Vec<usize>> {
        let width: usize = self.arities.iter().sum::<usize>() + self.arities.len();
        let mut val = vec![vec![0usize; width]; self.len()];
        let mut offset = 0;
        for (idx, &arity) in self.arities.iter().enumerate() {
            for t in s.tuples_at(idx) {
                let mut seen = BTreeSet::new();
                let repeated = t.iter().any(|x| !seen.insert(*x));
                for (p, x) in t.iter().enumerate() {
                    val[self.pos[x]][offset + p] += 1;
                    if repeated {
                        val[self.pos[x]][offset + arity] += 1;
                    }
                }
            }
            offset += arity + 1;
        }
        val
    }
}

/// Checks every tuple over `assigned` that mentions `new` for agreement
/// between source and target under `image`.
fn consistent(src: &Indexed, tgt: &Indexed, assigned: &[usize], new: usize, image: &[usize]) -> bool {
    for (r, &arity) in src.arities.iter().enumerate() {
        let (srel, trel) = (&src.rels[r], &tgt.rels[r]);
        match arity {
            1 => {
                if srel.contains(&[new]) != trel.contains(&[image[new]]) {
                    return false;
                }
            }
            2 => {
                let (a, fa) = (new, image[new]);
                if srel.contains(&[a, a]) != trel.contains(&[fa, fa]) {
                    return false;
                }
                for &b in assigned {
                    if b == new {
                        continue;
                    }
                    let fb = image[b];
                    if srel.contains(&[a, b]) != trel.contains(&[fa, fb])
                        || srel.contains(&[b, a]) != trel.contains(&[fb, fa])
                    {
                        return false;
                    }
                }
            }
            _ => {
                let pool: Vec<usize> = assigned.to_vec();
                let mut idx = vec![0usize; arity];
                loop {
                    let t: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
                    if t.contains(&new) {
                        let ft: Vec<usize> = t.iter().map(|&x| image[x]).collect();
                        if srel.contains(&t) != trel.contains(&ft) {
                            return false;
                        }
                    }
                    let mut k = 0;
                    loop {
                        if k == arity {
                            break;
                        }
                        idx[k] += 1;
                        if idx[k] < pool.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == arity {
                        break;
                    }
                }
            }
        }
    }
    true
}

struct Search<'a, F: FnMut(&BTreeMap<Elem, Elem>) -> bool> {
    src: &'a Indexed,
    tgt: &'a Indexed,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    allowed: Option<Vec<Vec<bool>>>,
    visit: F,
    stop: bool,
}

impl<F: FnMut(&BTreeMap<Elem, Elem>) -> bool> Search<'_, F> {
    fn run(&mut self, depth: usize) {
        if self.stop {
            return;
        }
        if depth == self.order.len() {
            let map = self
                .src
                .elems
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, self.tgt.elems[self.image[i]]))
                .collect();
            if !(self.visit)(&map) {
                self.stop = true;
            }
            return;
        }
        let s = self.order[depth];
        for t in 0..self.tgt.len() {
            if self.used[t] {
                continue;
            }
            if let Some(allowed) = &self.allowed {
                if !allowed[s][t] {
                    continue;
                }
            }
            self.image[s] = t;
            self.assigned.push(s);
            if consistent(self.src, self.tgt, &self.assigned, s, &self.image) {
                self.used[t] = true;
                self.run(depth + 1);
                self.used[t] = false;
            }
            self.assigned.pop();
            if self.stop {
                return;
            }
        }
    }
}

/// Walks every embedding of `source` into `target` that extends `fixed`, in
/// lexicographic order, until `visit` returns `false`.
pub fn for_each_extension<F>(
    source: &FinStructure,
    target: &FinStructure,
    fixed: &BTreeMap<Elem, Elem>,
    iso: bool,
    visit: F,
) -> Result<(), StructureError>
where
    F: FnMut(&BTreeMap<Elem, Elem>) -> bool,
{
    if source.sig() != target.sig() {
        return Err(StructureError::SignatureMismatch);
    }
    if iso && source.len() != target.len() {
        return Ok(());
    }
    if source.len() > target.len() {
        return Ok(());
    }
    let src = Indexed::new(source);
    let tgt = Indexed::new(target);
    let mut image = vec![usize::MAX; src.len()];
    let mut used = vec![false; tgt.len()];
    let mut assigned = Vec::new();
    for (x, y) in fixed {
        let (Some(&i), Some(&j)) = (src.pos.get(x), tgt.pos.get(y)) else {
            return Ok(());
        };
        if used[j] {
            return Ok(());
        }
        image[i] = j;
        assigned.push(i);
        if !consistent(&src, &tgt, &assigned, i, &image) {
            return Ok(());
        }
        used[j] = true;
    }
    let allowed = if iso {
        let (vs, vt) = (src.valence(source), tgt.valence(target));
        Some(
            vs.iter()
                .map(|a| vt.iter().map(|b| a == b).collect())
                .collect(),
        )
    } else {
        None
    };
    let order: Vec<usize> = (0..src.len()).filter(|i| image[*i] == usize::MAX).collect();
    let mut search = Search {
        src: &src,
        tgt: &tgt,
        order,
        image,
        used,
        assigned,
        allowed,
        visit,
        stop: false,
    };
    search.run(0);
    Ok(())
}

/// The lexicographically least isomorphism, if any.
pub fn find_isomorphism(
    a: &FinStructure,
    b: &FinStructure,
) -> Result<Option<Embedding>, StructureError> {
    let mut found = None;
    for_each_extension(a, b, &BTreeMap::new(), true, |m| {
        found = Some(m.clone());
        false
    })?;
    Ok(found.map(Embedding::from_map_unchecked))
}

pub fn enumerate_embeddings(
    a: &FinStructure,
    b: &FinStructure,
) -> Result<Vec<Embedding>, StructureError> {
    let mut out = Vec::new();
    for_each_extension(a, b, &BTreeMap::new(), false, |m| {
        out.push(Embedding::from_map_unchecked(m.clone()));
        true
    })?;
    Ok(out)
}

/// First embedding of `a` into `b` extending `fixed`.
pub fn find_extension(
    a: &FinStructure,
    b: &FinStructure,
    fixed: &BTreeMap<Elem, Elem>,
) -> Result<Option<Embedding>, StructureError> {
    let mut found = None;
    for_each_extension(a, b, fixed, false, |m| {
        found = Some(m.clone());
        false
    })?;
    Ok(found.map(Embedding::from_map_unchecked))
}

pub fn embeds(a: &FinStructure, b: &FinStructure) -> Result<bool, StructureError> {
    Ok(find_extension(a, b, &BTreeMap::new())?.is_some())
}

/// Isomorphism-invariant code of a structure: the lexicographically least
/// relabelled tuple list over all orderings compatible with `colors`.
pub type CanonicalCode = (usize, Vec<Vec<Vec<u32>>>);

/// Canonical code where elements carrying a color may only be permuted among
/// elements of the same color. Uncolored elements share color 0. Meant for
/// small structures (a dozen elements at most).
pub fn canonical_code_colored(s: &FinStructure, colors: &BTreeMap<Elem, u32>) -> CanonicalCode {
    let idx = Indexed::new(s);
    let val = idx.valence(s);
    let mut keyed: Vec<((u32, Vec<usize>), usize)> = (0..idx.len())
        .map(|i| {
            let c = colors.get(&idx.elems[i]).copied().unwrap_or(0);
            ((c, val[i].clone()), i)
        })
        .collect();
    keyed.sort();
    // cells of equal key, in key order
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (k, (key, i)) in keyed.iter().enumerate() {
        if k > 0 && keyed[k - 1].0 == *key {
            cells.last_mut().unwrap().push(*i);
        } else {
            cells.push(vec![*i]);
        }
    }
    let mut best: Option<Vec<Vec<Vec<u32>>>> = None;
    let mut label = vec![0u32; idx.len()];
    let perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c)).collect();
    let mut choice = vec![0usize; perms.len()];
    loop {
        let mut next = 0u32;
        for (c, p) in perms.iter().enumerate() {
            for &i in &p[choice[c]] {
                label[i] = next;
                next += 1;
            }
        }
        let code = encode(s, &idx, &label);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        let mut c = 0;
        while c < perms.len() {
            choice[c] += 1;
            if choice[c] < perms[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
        if c == perms.len() {
            break;
        }
    }
    (s.len(), best.unwrap_or_default())
}

pub fn canonical_code(s: &FinStructure) -> CanonicalCode {
    canonical_code_colored(s, &BTreeMap::new())
}

fn encode(s: &FinStructure, idx: &Indexed, label: &[u32]) -> Vec<Vec<Vec<u32>>> {
    (0..s.sig().len())
        .map(|r| {
            let mut ts: Vec<Vec<u32>> = s
                .tuples_at(r)
                .iter()
                .map(|t| t.iter().map(|x| label[idx.pos[x]]).collect())
                .collect();
            ts.sort();
            ts
        })
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// The structure on `0..n` whose code is the canonical code of `s`.
pub fn canonical_structure(s: &FinStructure) -> FinStructure {
    let (n, code) = canonical_code(s);
    let interp = s
        .sig()
        .symbols()
        .iter()
        .zip(code)
        .map(|((name, _), ts)| (name.clone(), ts));
    FinStructure::new(s.sig().clone(), 0..n as Elem, interp).expect("canonical relabelling is valid")
}
