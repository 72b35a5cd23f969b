mod common;

use std::collections::BTreeSet;

use generic_structures::classes::{
    amalgamate, chain, chain_of, check_property, count_iso_types, graph, is_strong, membership, Property,
};
use generic_structures::search::find_isomorphism;
use generic_structures::structure::relabel_disjoint;
use generic_structures::{ClassTag, Elem, Embedding, FinStructure};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn edges(s: &FinStructure) -> BTreeSet<(Elem, Elem)> {
    s.relation("E").unwrap().iter().filter(|t| t[0] < t[1]).map(|t| (t[0], t[1])).collect()
}

#[test]
fn membership_examples() {
    assert!(membership(ClassTag::LinearOrder, &chain(&[0, 1, 2])).unwrap());
    let partial = FinStructure::from_binary("<", [0, 1, 2], [(0, 1), (1, 2)]).unwrap();
    assert!(!membership(ClassTag::LinearOrder, &partial).unwrap());
    let k3 = graph([0, 1, 2], &[(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(!membership(ClassTag::LinearGraph, &k3).unwrap());
}

#[test]
fn free_join_over_empty_base() {
    let base = ClassTag::Graph.empty();
    let b = graph([0, 1], &[(0, 1)]).unwrap();
    let c = graph([2, 3], &[(2, 3)]).unwrap();
    let none = Embedding::identity(&base);
    let am = amalgamate(ClassTag::Graph, &base, &b, &c, &none, &none).unwrap();
    assert_eq!(am.result.len(), 4);
    assert_eq!(edges(&am.result), [(0, 1), (2, 3)].into());
}

#[test]
fn free_graph_amalgam_adds_nothing() {
    // a = 0, x = 1, y = 2
    let base = graph([0], &[]).unwrap();
    let b = graph([0, 1], &[(0, 1)]).unwrap();
    let c = graph([0, 2], &[(0, 2)]).unwrap();
    let id = Embedding::identity(&base);
    let am = amalgamate(ClassTag::Graph, &base, &b, &c, &id, &id).unwrap();
    assert_eq!(am.result.universe(), &[0, 1, 2].into());
    assert_eq!(edges(&am.result), [(0, 1), (0, 2)].into());
}

#[test]
fn order_tie_break() {
    // r = 0, a = 1, b = 2
    let base = chain(&[0]);
    let l1 = chain(&[0, 1]);
    let l2 = chain(&[0, 2]);
    let id = Embedding::identity(&base);
    let am = amalgamate(ClassTag::LinearOrder, &base, &l1, &l2, &id, &id).unwrap();
    assert_eq!(chain_of(&am.result), vec![0, 2, 1]);
}

#[test]
fn property_examples() {
    assert!(check_property(ClassTag::LinearOrder, Property::SAP, 3).unwrap().holds());
    assert!(check_property(ClassTag::Graph, Property::AP, 3).unwrap().holds());
    let v = check_property(ClassTag::LinearGraph, Property::SAP, 5).unwrap();
    let cx = v.counterexample().unwrap();
    assert!(cx.reason.starts_with("degree overflow"), "{}", cx.reason);
    assert_eq!(cx.structures.len(), 3);
}

#[test]
fn count_examples() {
    assert_eq!(count_iso_types(ClassTag::LinearOrder, 3).unwrap(), 1);
    assert_eq!(count_iso_types(ClassTag::Graph, 2).unwrap(), 2);
    assert_eq!(count_iso_types(ClassTag::Tournament, 3).unwrap(), 2);
}

const STRONG: [ClassTag; 6] = [
    ClassTag::Graph,
    ClassTag::LinearOrder,
    ClassTag::PartialOrder,
    ClassTag::Tournament,
    ClassTag::Digraph,
    ClassTag::RationalMetric,
];

/// Random base on `0..a` with disjoint extensions on `10..` and `20..`.
fn triple(tag: ClassTag, a: usize, b: usize, c: usize, rng: &mut impl Rng) -> (FinStructure, FinStructure, FinStructure) {
    let base = common::random_member(tag, a, rng);
    let ids = |from: Elem, k: usize| (from..from + k as Elem).collect::<Vec<_>>();
    let left = common::grow(tag, &base, &ids(10, b), rng);
    let right = common::grow(tag, &base, &ids(20, c), rng);
    (base, left, right)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hereditary_classes(seed in any::<u64>(), n in 0usize..7, t in 0usize..7) {
        let tag = ClassTag::ALL[t];
        prop_assume!(tag != ClassTag::LinearGraph);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_member(tag, n, &mut rng);
        let x = common::random_subset(s.universe(), &mut rng);
        prop_assert!(membership(tag, &s.induced(&x).unwrap()).unwrap());
    }

    #[test]
    fn lemma1_law(seed in any::<u64>(), r in 0usize..4, p in 0usize..4, q in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base_chain = common::random_chain_over(&[], &(0..r as Elem).collect::<Vec<_>>(), &mut rng);
        let left_extra: Vec<Elem> = (10..10 + p as Elem).collect();
        let right_extra: Vec<Elem> = (20..20 + q as Elem).collect();
        let c1 = common::random_chain_over(&base_chain, &left_extra, &mut rng);
        let c2 = common::random_chain_over(&base_chain, &right_extra, &mut rng);
        let (base, l1, l2) = (chain(&base_chain), chain(&c1), chain(&c2));
        let id = Embedding::identity(&base);
        let am = amalgamate(ClassTag::LinearOrder, &base, &l1, &l2, &id, &id).unwrap();
        prop_assert!(membership(ClassTag::LinearOrder, &am.result).unwrap());
        prop_assert_eq!(am.result.induced(l1.universe()).unwrap(), l1.clone());
        prop_assert_eq!(am.result.induced(l2.universe()).unwrap(), l2.clone());
        let pos = |c: &[Elem], x: Elem| c.iter().position(|&y| y == x).unwrap();
        let out = chain_of(&am.result);
        for &a in &left_extra {
            for &b in &right_extra {
                let ab = base_chain.iter().any(|&s| pos(&c1, a) < pos(&c1, s) && pos(&c2, s) < pos(&c2, b));
                let ba = base_chain.iter().any(|&s| pos(&c2, b) < pos(&c2, s) && pos(&c1, s) < pos(&c1, a));
                if ab || ba {
                    prop_assert_eq!(pos(&out, a) < pos(&out, b), ab);
                }
            }
        }
    }

    #[test]
    fn strong_amalgam_sizes(seed in any::<u64>(), t in 0usize..6, a in 0usize..3, b in 0usize..3, c in 0usize..3) {
        let tag = STRONG[t];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (base, left, right) = triple(tag, a, b, c, &mut rng);
        let id = Embedding::identity(&base);
        let am = amalgamate(tag, &base, &left, &right, &id, &id).unwrap();
        prop_assert_eq!(am.result.len(), left.len() + right.len() - base.len());
        prop_assert!(is_strong(&am, &id));
    }

    #[test]
    fn amalgam_is_stable_under_relabelling(seed in any::<u64>(), t in 0usize..6, a in 0usize..3, b in 0usize..3, c in 0usize..3) {
        let tag = STRONG[t];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (base, left, right) = triple(tag, a, b, c, &mut rng);
        let id = Embedding::identity(&base);
        let first = amalgamate(tag, &base, &left, &right, &id, &id).unwrap().result;
        let forbid: BTreeSet<Elem> = left.universe().union(right.universe()).copied().collect();
        let (moved, ren) = relabel_disjoint(&right, &forbid);
        let g = Embedding::new(&base.widen(moved.sig()).unwrap(), &moved, base.universe().iter().map(|&x| (x, ren[&x])).collect()).unwrap();
        let second = amalgamate(tag, &base, &left, &moved, &id, &g).unwrap().result;
        prop_assert!(find_isomorphism(&first, &second).unwrap().is_some());
    }
}
