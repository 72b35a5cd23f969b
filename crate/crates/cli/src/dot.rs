//! Graphviz export. Orders are drawn as chains; the partial automorphism of
//! an automorphic order as dashed arcs.

use std::fmt::Write;

use generic_structures::autorder::AutCondition;
use generic_structures::classes::{chain_of, metric};
use generic_structures::{ClassTag, FinStructure};

fn nodes(out: &mut String, s: &FinStructure) {
    for x in s.universe() {
        writeln!(out, "  {x};").unwrap();
    }
}

fn chain_edges(out: &mut String, chain: &[u32]) {
    for w in chain.windows(2) {
        writeln!(out, "  {} -> {};", w[0], w[1]).unwrap();
    }
}

pub fn structure(tag: ClassTag, s: &FinStructure) -> String {
    let mut out = String::new();
    match tag {
        ClassTag::LinearOrder => {
            out.push_str("digraph order {\n  rankdir=LR;\n");
            nodes(&mut out, s);
            chain_edges(&mut out, &chain_of(s));
        }
        ClassTag::PartialOrder => {
            out.push_str("digraph poset {\n  rankdir=BT;\n");
            nodes(&mut out, s);
            let lt = |a: u32, b: u32| s.holds("<", &[a, b]);
            for &a in s.universe() {
                for &b in s.universe() {
                    let covers = lt(a, b) && !s.universe().iter().any(|&c| lt(a, c) && lt(c, b));
                    if covers {
                        writeln!(out, "  {a} -> {b};").unwrap();
                    }
                }
            }
        }
        ClassTag::Digraph | ClassTag::Tournament => {
            out.push_str("digraph g {\n");
            nodes(&mut out, s);
            for t in s.relation("E").into_iter().flatten() {
                writeln!(out, "  {} -> {};", t[0], t[1]).unwrap();
            }
        }
        ClassTag::Graph | ClassTag::LinearGraph => {
            out.push_str("graph g {\n");
            nodes(&mut out, s);
            for t in s.relation("E").into_iter().flatten().filter(|t| t[0] < t[1]) {
                writeln!(out, "  {} -- {};", t[0], t[1]).unwrap();
            }
        }
        ClassTag::RationalMetric => {
            out.push_str("graph metric {\n");
            nodes(&mut out, s);
            for &a in s.universe() {
                for &b in s.universe().range(a + 1..) {
                    if let Some(d) = metric::distance(s, a, b) {
                        writeln!(out, "  {a} -- {b} [label=\"{d}\"];").unwrap();
                    }
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn aut_order(p: &AutCondition) -> String {
    let mut out = String::from("digraph aut_order {\n  rankdir=LR;\n");
    for x in p.chain() {
        writeln!(out, "  {x};").unwrap();
    }
    chain_edges(&mut out, p.chain());
    for (x, y) in p.phi() {
        writeln!(out, "  {x} -> {y} [style=dashed, constraint=false];").unwrap();
    }
    out.push_str("}\n");
    out
}
