#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use generic_structures::classes::{chain, one_point_extensions};
use generic_structures::{ClassTag, Elem, FinStructure};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random member of `tag` grown from `start` by adding `ids` one at a time,
/// each extension drawn uniformly from the one-point extensions.
pub fn grow(tag: ClassTag, start: &FinStructure, ids: &[Elem], rng: &mut impl Rng) -> FinStructure {
    let mut s = start.clone();
    for &x in ids {
        let opts = one_point_extensions(tag, &s, x).unwrap();
        s = opts.choose(rng).expect("every member has a one-point extension").clone();
    }
    s
}

pub fn random_member(tag: ClassTag, n: usize, rng: &mut impl Rng) -> FinStructure {
    let ids: Vec<Elem> = (0..n as Elem).collect();
    grow(tag, &tag.empty(), &ids, rng)
}

/// Random chain on `base` with `extra` inserted at random positions.
pub fn random_chain_over(base: &[Elem], extra: &[Elem], rng: &mut impl Rng) -> Vec<Elem> {
    let mut c = base.to_vec();
    for &x in extra {
        let at = rng.gen_range(0..=c.len());
        c.insert(at, x);
    }
    c
}

pub fn random_order(base: &[Elem], extra: &[Elem], rng: &mut impl Rng) -> FinStructure {
    chain(&random_chain_over(base, extra, rng))
}

pub fn random_subset(u: &BTreeSet<Elem>, rng: &mut impl Rng) -> BTreeSet<Elem> {
    u.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Random injective relabelling of `u` into `0..bound`.
pub fn random_relabel(u: &BTreeSet<Elem>, bound: Elem, rng: &mut impl Rng) -> BTreeMap<Elem, Elem> {
    let mut pool: Vec<Elem> = (0..bound).collect();
    pool.shuffle(rng);
    u.iter().copied().zip(pool).collect()
}

/// Structure on `0..n` with one binary symbol and random pairs (loops included).
pub fn random_binary(name: &str, n: Elem, density: f64, rng: &mut impl Rng) -> FinStructure {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    FinStructure::from_binary(name, 0..n, pairs).unwrap()
}
