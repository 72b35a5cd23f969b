//! Acceptance run: one line per criterion, `PASS` or `FAIL`, then a nonzero
//! exit if anything failed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use generic_structures::analysis::{entangled_check, extension_property_report, EntangledInstance};
use generic_structures::autorder::{
    aut_stronger, lemma3_amalgamate, validate_aut_condition, AutCondition,
};
use generic_structures::classes::{
    amalgamate, chain, chain_of, check_property, membership, one_point_extensions, Property,
};
use generic_structures::forcing::{
    crossing_amalgamation, delta_bound, delta_system, generic_build, is_delta_system, order_schedule, stronger,
    Condition, CrossingSpec,
};
use generic_structures::{ClassTag, Elem, Embedding, FinStructure};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const GRAPH_LIMIT: Duration = Duration::from_secs(5);
const ORDER_LIMIT: Duration = Duration::from_secs(5);
const SAP_LIMIT: Duration = Duration::from_secs(60);
const AUT_LIMIT: Duration = Duration::from_secs(10);
const GRAPH_SEEDS: u64 = 10;
const ORDER_SEEDS: u64 = 10;
const LEMMA1_TRIPLES: u64 = 1000;
const LEMMA3_INSTANCES: usize = 500;
const DELTA_FAMILIES: u64 = 1000;
const CROSSING_INSTANCES: u64 = 200;
const ENTANGLED_SEEDS: u64 = 500;
const AUT_MAX_POWER: i64 = 32;

type Outcome = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_generic"))
}

fn run_bin(dir: &Path, args: &[&str]) -> Result<(), String> {
    let o = bin().current_dir(dir).args(args).output().map_err(|e| e.to_string())?;
    if o.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr).trim()))
    }
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn ms(d: Duration) -> u128 {
    d.as_millis()
}

fn grow(tag: ClassTag, start: &FinStructure, ids: &[Elem], rng: &mut impl Rng) -> FinStructure {
    let mut s = start.clone();
    for &x in ids {
        let opts = one_point_extensions(tag, &s, x).unwrap();
        s = opts.choose(rng).unwrap().clone();
    }
    s
}

fn insert_randomly(base: &[Elem], extra: &[Elem], rng: &mut impl Rng) -> Vec<Elem> {
    let mut c = base.to_vec();
    for &x in extra {
        let at = rng.gen_range(0..=c.len());
        c.insert(at, x);
    }
    c
}

fn c1_graph_prefix(dir: &Path) -> Outcome {
    let mut worst = Duration::ZERO;
    let mut sizes = Vec::new();
    for seed in 0..GRAPH_SEEDS {
        let start = Instant::now();
        let out = dir.join(format!("c1-{seed}.json"));
        let seed_s = seed.to_string();
        run_bin(dir, &["build", "--class", "Graph", "--n", "5", "--seed", &seed_s, "--verify", "--out", out.to_str().unwrap()])?;
        let v = read_json(&out)?;
        let m = FinStructure::from_doc(serde_json::from_value(v["structure"].clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let report = extension_property_report(&m, ClassTag::Graph, 2).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        worst = worst.max(elapsed);
        if !report.passed() {
            return Err(format!("seed {seed}: {} failing items, first {}", report.failures().len(), report.failures()[0].item));
        }
        if elapsed > GRAPH_LIMIT {
            return Err(format!("seed {seed}: {} ms exceeds {} ms", ms(elapsed), ms(GRAPH_LIMIT)));
        }
        sizes.push(m.len());
    }
    Ok(format!(
        "seeds 0..{GRAPH_SEEDS}, |M| in {}..={}, 0 failing items at k=2, worst {} ms (limit {} ms)",
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap(),
        ms(worst),
        ms(GRAPH_LIMIT)
    ))
}

fn c2_order_prefix() -> Outcome {
    let sched = order_schedule(20);
    let mut worst = Duration::ZERO;
    for seed in 0..ORDER_SEEDS {
        let start = Instant::now();
        let built = generic_build(ClassTag::LinearOrder, &sched, sched.len(), seed).map_err(|e| e.to_string())?;
        let m = built.structure();
        if !membership(ClassTag::LinearOrder, m).map_err(|e| e.to_string())? {
            return Err(format!("seed {seed}: result is not a linear order"));
        }
        let order = chain_of(m);
        let pos: BTreeMap<Elem, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        for a in 0..20 {
            for b in a + 1..20 {
                let (Some(&pa), Some(&pb)) = (pos.get(&a), pos.get(&b)) else {
                    return Err(format!("seed {seed}: {a} or {b} missing"));
                };
                if pa.abs_diff(pb) < 2 {
                    return Err(format!("seed {seed}: nothing strictly between {a} and {b}"));
                }
            }
        }
        let elapsed = start.elapsed();
        worst = worst.max(elapsed);
        if elapsed > ORDER_LIMIT {
            return Err(format!("seed {seed}: {} ms exceeds {} ms", ms(elapsed), ms(ORDER_LIMIT)));
        }
    }
    Ok(format!("seeds 0..{ORDER_SEEDS}, all 190 pairs of 0..19 separated, worst {} ms (limit {} ms)", ms(worst), ms(ORDER_LIMIT)))
}

fn c3_lemma1() -> Outcome {
    let mut checked_pairs = 0usize;
    for seed in 0..LEMMA1_TRIPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(0..=8);
        let p = rng.gen_range(0..=8 - r);
        let q = rng.gen_range(0..=8 - r);
        let mut ids: Vec<Elem> = (0..r as Elem).collect();
        ids.shuffle(&mut rng);
        let base_chain = ids;
        let left_extra: Vec<Elem> = (100..100 + p as Elem).collect();
        let right_extra: Vec<Elem> = (200..200 + q as Elem).collect();
        let c1 = insert_randomly(&base_chain, &left_extra, &mut rng);
        let c2 = insert_randomly(&base_chain, &right_extra, &mut rng);
        let (base, l1, l2) = (chain(&base_chain), chain(&c1), chain(&c2));
        let id = Embedding::identity(&base);
        let am = amalgamate(ClassTag::LinearOrder, &base, &l1, &l2, &id, &id).map_err(|e| format!("seed {seed}: {e}"))?;
        let out = &am.result;
        if !membership(ClassTag::LinearOrder, out).unwrap() {
            return Err(format!("seed {seed}: not a linear order"));
        }
        if out.induced(l1.universe()).unwrap() != l1 || out.induced(l2.universe()).unwrap() != l2 {
            return Err(format!("seed {seed}: does not extend both inputs"));
        }
        let pos = |c: &[Elem], x: Elem| c.iter().position(|&y| y == x).unwrap();
        for &a in &left_extra {
            for &b in &right_extra {
                let ab = base_chain.iter().any(|&s| pos(&c1, a) < pos(&c1, s) && pos(&c2, s) < pos(&c2, b));
                let ba = base_chain.iter().any(|&s| pos(&c2, b) < pos(&c2, s) && pos(&c1, s) < pos(&c1, a));
                if ab || ba {
                    checked_pairs += 1;
                    if out.holds("<", &[a, b]) != ab || out.holds("<", &[b, a]) != ba {
                        return Err(format!("seed {seed}: biconditional fails on ({a}, {b})"));
                    }
                }
            }
        }
    }
    Ok(format!("{LEMMA1_TRIPLES} triples, sizes <= 8, {checked_pairs} separated cross pairs, 0 violations"))
}

struct Lemma3Instance {
    l1: AutCondition,
    l2: AutCondition,
    root: BTreeSet<Elem>,
    h: BTreeMap<Elem, Elem>,
    a: Elem,
    b: Elem,
}

/// `L1` on `0..n` with orbits of length at most 3, a base made of whole
/// orbits, and `L2` its copy shifting non-base points by 100.
fn lemma3_instance(rng: &mut impl Rng) -> Option<Lemma3Instance> {
    let n = rng.gen_range(2..=8);
    let mut order: Vec<Elem> = (0..n).collect();
    order.shuffle(rng);
    let pos = |x: Elem, c: &[Elem]| c.iter().position(|&y| y == x).unwrap();
    let mut ids = order.clone();
    ids.shuffle(rng);
    let mut phi = BTreeMap::new();
    while !ids.is_empty() {
        let k = rng.gen_range(1..=3.min(ids.len()));
        let mut orbit: Vec<Elem> = ids.drain(..k).collect();
        orbit.sort_by_key(|&x| pos(x, &order));
        let mut trial = phi.clone();
        trial.extend(orbit.windows(2).map(|w| (w[0], w[1])));
        if AutCondition::new(order.clone(), trial.clone()).is_ok() {
            phi = trial;
        }
    }
    let l1 = AutCondition::new(order.clone(), phi).unwrap();
    let mut groups: Vec<Vec<Elem>> = Vec::new();
    let mut seen = BTreeSet::new();
    for &x in &order {
        if seen.insert(l1.orbit(x)[0]) {
            groups.push(l1.orbit(x));
        }
    }
    let root: BTreeSet<Elem> = groups.iter().filter(|_| rng.gen_bool(0.3)).flatten().copied().collect();
    let outside: Vec<&Vec<Elem>> = groups.iter().filter(|o| !root.contains(&o[0])).collect();
    if outside.len() < 2 {
        return None;
    }
    let pick: Vec<&&Vec<Elem>> = outside.choose_multiple(rng, 2).collect();
    let (a, b) = (*pick[0].choose(rng).unwrap(), *pick[1].choose(rng).unwrap());
    let h: BTreeMap<Elem, Elem> = order.iter().map(|&x| (x, if root.contains(&x) { x } else { x + 100 })).collect();
    let l2 = AutCondition::new(
        order.iter().map(|x| h[x]).collect(),
        l1.phi().iter().map(|(x, y)| (h[x], h[y])).collect(),
    )
    .unwrap();
    Some(Lemma3Instance { l1, l2, root, h, a, b })
}

fn c4_lemma3() -> Outcome {
    let mut done = 0;
    let mut seed = 0u64;
    while done < LEMMA3_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        let Some(i) = lemma3_instance(&mut rng) else { continue };
        done += 1;
        let c = lemma3_amalgamate(&i.l1, &i.l2, &i.root, &i.h, i.a, i.b).map_err(|e| format!("seed {}: {e}", seed - 1))?;
        let tag = format!("seed {}", seed - 1);
        if let Some(item) = validate_aut_condition(&c.to_raw()).item() {
            return Err(format!("{tag}: invalid at item {item}"));
        }
        if !aut_stronger(&c, &i.l1) || !aut_stronger(&c, &i.l2) {
            return Err(format!("{tag}: does not extend both inputs"));
        }
        for (&x, &fx) in c.phi() {
            for (&y, &fy) in c.phi() {
                if c.less(x, y) != c.less(fx, fy) {
                    return Err(format!("{tag}: phi not order-preserving on {x}, {y}"));
                }
            }
        }
        if !c.less(i.a, i.h[&i.a]) || !c.less(i.h[&i.b], i.b) {
            return Err(format!("{tag}: a < h(a) or h(b) < b fails"));
        }
    }
    Ok(format!("{LEMMA3_INSTANCES} instances from seeds 0..{seed}, sizes <= 8, orbits <= 3, 0 violations"))
}

fn c5_sap() -> Outcome {
    let start = Instant::now();
    let cases = [
        (ClassTag::LinearOrder, Property::SAP, 3, true),
        (ClassTag::Graph, Property::SAP, 3, true),
        (ClassTag::LinearGraph, Property::SAP, 5, false),
        (ClassTag::LinearGraph, Property::AP, 5, true),
    ];
    let mut notes = Vec::new();
    for (tag, prop, n, expect) in cases {
        let v = check_property(tag, prop, n).map_err(|e| e.to_string())?;
        if v.holds() != expect {
            return Err(format!("{tag} {prop} {n}: expected holds={expect}"));
        }
        if let Some(cx) = v.counterexample() {
            if !cx.reason.contains("degree") {
                return Err(format!("{tag} {prop} {n}: witness is not a degree overflow: {}", cx.reason));
            }
            notes.push(format!("{tag} {prop}: {}", cx.reason));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > SAP_LIMIT {
        return Err(format!("{} ms exceeds {} ms", ms(elapsed), ms(SAP_LIMIT)));
    }
    Ok(format!("4 verdicts as expected ({}), {} ms (limit {} ms)", notes.join("; "), ms(elapsed), ms(SAP_LIMIT)))
}

fn c6_aut_order(dir: &Path) -> Outcome {
    let start = Instant::now();
    let out = dir.join("c6.json");
    run_bin(dir, &["build", "--class", "AutOrder", "--n", "8", "--out", out.to_str().unwrap()])?;
    let v = read_json(&out)?;
    let p = AutCondition::from_json(&v["condition"].to_string()).map_err(|e| e.to_string())?;
    if let Some(item) = validate_aut_condition(&p.to_raw()).item() {
        return Err(format!("invalid at item {item}"));
    }
    for (&x, &y) in p.phi() {
        if !p.less(x, y) {
            return Err(format!("phi({x}) = {y} is not above {x}"));
        }
        for (&x2, &y2) in p.phi() {
            if p.less(x, x2) && !p.less(y, y2) {
                return Err(format!("phi not increasing on {x}, {x2}"));
            }
        }
    }
    let mut powers = Vec::new();
    for m in 0..8 {
        let k = (1..=AUT_MAX_POWER).find(|&k| {
            let up = p.iterate(0, k).is_some_and(|u| p.less(m, u));
            let down = p.iterate(0, -k).is_some_and(|d| p.less(d, m));
            up && down
        });
        match k {
            Some(k) => powers.push(k),
            None => return Err(format!("no k <= {AUT_MAX_POWER} straddles {m}")),
        }
    }
    let pos = p.positions();
    for a in 0..8 {
        for b in a + 1..8 {
            if pos[&a].abs_diff(pos[&b]) < 2 {
                return Err(format!("nothing between {a} and {b}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > AUT_LIMIT {
        return Err(format!("{} ms exceeds {} ms", ms(elapsed), ms(AUT_LIMIT)));
    }
    Ok(format!(
        "|p| = {}, straddling powers {powers:?} (bound {AUT_MAX_POWER}), 0..7 pairwise separated, {} ms (limit {} ms)",
        p.len(),
        ms(elapsed),
        ms(AUT_LIMIT)
    ))
}

fn exhaustive_delta(f: &[BTreeSet<Elem>]) -> usize {
    let n = f.len();
    (1u32..1 << n)
        .filter_map(|mask| {
            let m: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let root: BTreeSet<Elem> = match m.as_slice() {
                [only] => f[*only].clone(),
                [x, y, ..] => f[*x].intersection(&f[*y]).copied().collect(),
                [] => unreachable!(),
            };
            is_delta_system(f, &m, &root).then_some(m.len())
        })
        .max()
        .unwrap_or(0)
}

fn c7_delta() -> Outcome {
    let mut exhaustive = 0;
    let mut min_margin = f64::INFINITY;
    for seed in 0..DELTA_FAMILIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = if seed % 2 == 0 { rng.gen_range(1..=12) } else { rng.gen_range(13..=200) };
        let ground = rng.gen_range(4..=60);
        let family: Vec<BTreeSet<Elem>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(0..=4);
                (0..size).map(|_| rng.gen_range(0..ground)).collect()
            })
            .collect();
        let d = delta_system(&family);
        if d.members.is_empty() || !is_delta_system(&family, &d.members, &d.root) {
            return Err(format!("seed {seed}: not a Δ-system with the stated root"));
        }
        for i in 0..n {
            if d.members.contains(&i) {
                continue;
            }
            let mut more = d.members.clone();
            more.push(i);
            if is_delta_system(&family, &more, &d.root) {
                return Err(format!("seed {seed}: member {i} could still be added"));
            }
        }
        let bound = delta_bound(&family);
        min_margin = min_margin.min(d.members.len() as f64 - bound);
        if (d.members.len() as f64) < bound {
            return Err(format!("seed {seed}: {} members below the bound {bound:.3}", d.members.len()));
        }
        if n <= 12 {
            exhaustive += 1;
            let best = exhaustive_delta(&family);
            if d.members.len() != best {
                return Err(format!("seed {seed}: {} members, exhaustive maximum {best}", d.members.len()));
            }
        }
    }
    Ok(format!(
        "{DELTA_FAMILIES} families (<= 200 sets, set size <= 4): valid and maximal, smallest margin over the bound {min_margin:.3}, {exhaustive} matched the exhaustive maximum"
    ))
}

fn crossing_instance(tag: ClassTag, rng: &mut impl Rng) -> (Condition, Condition, BTreeSet<Elem>, CrossingSpec) {
    let r = rng.gen_range(0..=3);
    let root_ids: Vec<Elem> = (0..r).collect();
    let root = grow(tag, &tag.empty(), &root_ids, rng);
    let extra = rng.gen_range(0..=2);
    let ids: Vec<Elem> = (10..12 + extra).collect();
    let left = grow(tag, &root, &ids, rng);
    let shift: BTreeMap<Elem, Elem> = left.universe().iter().map(|&x| (x, if x < 10 { x } else { x + 100 })).collect();
    let right = left.rename(&shift);
    let spec = CrossingSpec { s: 10, sbar: 11, t: 110, tbar: 111 };
    (
        Condition::new(tag, left).unwrap(),
        Condition::new(tag, right).unwrap(),
        root_ids.into_iter().collect(),
        spec,
    )
}

fn c8_crossing() -> Outcome {
    for tag in [ClassTag::Graph, ClassTag::LinearOrder] {
        for seed in 0..CROSSING_INSTANCES {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (ps, pt, root, spec) = crossing_instance(tag, &mut rng);
            let q = crossing_amalgamation(&ps, &pt, &root, spec).map_err(|e| format!("{tag} seed {seed}: {e}"))?;
            if !stronger(&q, &ps).unwrap() || !stronger(&q, &pt).unwrap() {
                return Err(format!("{tag} seed {seed}: not stronger than both inputs"));
            }
            let m = q.structure();
            let realized = match tag {
                ClassTag::Graph => m.holds("E", &[spec.s, spec.t]) && !m.holds("E", &[spec.sbar, spec.tbar]),
                _ => m.holds("<", &[spec.s, spec.t]) && m.holds("<", &[spec.tbar, spec.sbar]),
            };
            if !realized {
                return Err(format!("{tag} seed {seed}: crossing pattern missing"));
            }
        }
    }
    Ok(format!("{CROSSING_INSTANCES} Graph and {CROSSING_INSTANCES} LinearOrder instances, all stronger and crossing"))
}

fn entangled_oracle(inst: &EntangledInstance) -> Option<(usize, usize)> {
    let t = inst.tuples();
    let mut hits = Vec::new();
    for (xi, a) in t.iter().enumerate() {
        for (eta, b) in t.iter().enumerate() {
            if xi != eta && (0..inst.k()).all(|i| (a[i] <= b[i]) == inst.pattern()[i]) {
                hits.push((xi, eta));
            }
        }
    }
    hits.into_iter().min()
}

fn c9_entangled() -> Outcome {
    let mut avoided = 0;
    for seed in 0..ENTANGLED_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(0..=12);
        let mut pool: Vec<i64> = (0..(3 * k * n) as i64).collect();
        pool.shuffle(&mut rng);
        let tuples: Vec<Vec<i64>> = pool.chunks(k).take(n).map(<[i64]>::to_vec).collect();
        let pattern: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
        let inst = EntangledInstance::new(k, tuples, pattern).map_err(|e| format!("seed {seed}: {e}"))?;
        let got = entangled_check(&inst);
        if got != entangled_oracle(&inst) {
            return Err(format!("seed {seed}: {got:?} disagrees with the oracle"));
        }
        avoided += usize::from(got.is_none());
    }
    Ok(format!("{ENTANGLED_SEEDS} seeds (<= 12 tuples, k <= 3) agree with the oracle, {avoided} with the pattern avoided"))
}

fn c10_determinism(dir: &Path) -> Outcome {
    std::fs::write(dir.join("edgeless.json"), r#"{"sig":[["E",2]],"universe":[0,1,2],"interp":{"E":[]}}"#)
        .map_err(|e| e.to_string())?;
    let commands: [&[&str]; 6] = [
        &["build", "--class", "Graph", "--n", "5", "--seed", "7", "--steps", "200"],
        &["build", "--class", "LinearOrder", "--n", "20", "--seed", "3"],
        &["build", "--class", "AutOrder", "--n", "8", "--seed", "11"],
        &["build", "--class", "Graph", "--n", "4", "--seed", "2", "--format", "dot"],
        &["check", "--property", "extension", "--class", "Graph", "--in", "edgeless.json"],
        &["check", "--property", "SAP", "--class", "LinearGraph", "--n", "4"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let name = format!("c10-{i}-{run}.out");
            let mut full = args.to_vec();
            full.extend(["--out", &name]);
            let status = bin().current_dir(dir).args(&full).stderr(Stdio::null()).status().map_err(|e| e.to_string())?;
            if !matches!(status.code(), Some(0 | 1)) {
                return Err(format!("{args:?} exited {:?}", status.code()));
            }
            outputs.push(std::fs::read(dir.join(&name)).map_err(|e| e.to_string())?);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{args:?}: artifacts differ between runs"));
        }
    }
    Ok(format!("{} commands run twice, artifacts byte-identical", commands.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let d = dir.path();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("generic graph prefix", Box::new(|| c1_graph_prefix(d))),
        ("generic linear order prefix", Box::new(c2_order_prefix)),
        ("order amalgamation law", Box::new(c3_lemma1)),
        ("automorphic amalgamation law", Box::new(c4_lemma3)),
        ("SAP verdicts", Box::new(c5_sap)),
        ("automorphic order builder", Box::new(|| c6_aut_order(d))),
        ("delta-system validity", Box::new(c7_delta)),
        ("crossing amalgamation", Box::new(c8_crossing)),
        ("entangledness oracle", Box::new(c9_entangled)),
        ("determinism", Box::new(|| c10_determinism(d))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
