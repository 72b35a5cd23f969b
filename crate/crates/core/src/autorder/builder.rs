//! Round-robin builder for an order with an upward-moving automorphism.

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::orbit::{dom_meet, orbit_requirement_meet, orbit_satisfied, rng_meet};
use super::AutCondition;
use crate::forcing::LogEntry;
use crate::structure::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutRequirement {
    /// The element is present.
    Member(Elem),
    /// The element is in the domain of the map.
    Dom(Elem),
    /// The element is in the range of the map.
    Rng(Elem),
    /// The orbit of `alpha0` lies on both sides of `beta`.
    Orbit { alpha0: Elem, beta: Elem },
    /// Both present with a point strictly between them.
    Between(Elem, Elem),
}

impl AutRequirement {
    pub fn name(&self) -> String {
        match self {
            AutRequirement::Member(m) => format!("D_{m}"),
            AutRequirement::Dom(m) => format!("dom_{m}"),
            AutRequirement::Rng(m) => format!("rng_{m}"),
            AutRequirement::Orbit { beta, .. } => format!("E_{beta}"),
            AutRequirement::Between(a, b) => format!("D_{a},{b}"),
        }
    }

    pub fn is_satisfied(&self, p: &AutCondition) -> bool {
        match *self {
            AutRequirement::Member(m) => p.contains(m),
            AutRequirement::Dom(m) => p.phi().contains_key(&m),
            AutRequirement::Rng(m) => p.phi().values().any(|&y| y == m),
            AutRequirement::Orbit { alpha0, beta } => orbit_satisfied(p, alpha0, beta),
            AutRequirement::Between(a, b) => {
                let pos = p.positions();
                match (pos.get(&a), pos.get(&b)) {
                    (Some(&i), Some(&j)) => i.abs_diff(j) >= 2 || a == b,
                    _ => false,
                }
            }
        }
    }

    pub fn meet(&self, p: &AutCondition, rng: &mut impl Rng) -> AutCondition {
        if self.is_satisfied(p) {
            return p.clone();
        }
        match *self {
            AutRequirement::Member(m) => insert_random(p, m, rng),
            AutRequirement::Dom(m) => dom_meet(&ensure(p, m, rng), m),
            AutRequirement::Rng(m) => rng_meet(&ensure(p, m, rng), m),
            AutRequirement::Orbit { alpha0, beta } => orbit_requirement_meet(p, alpha0, beta),
            AutRequirement::Between(a, b) => {
                let q = ensure(&ensure(p, a, rng), b, rng);
                if self.is_satisfied(&q) {
                    return q;
                }
                let mut chain = q.chain().to_vec();
                let lo = chain.iter().position(|&x| x == a || x == b).unwrap();
                let fresh = (0..).find(|x| !chain.contains(x)).unwrap();
                chain.insert(lo + 1, fresh);
                AutCondition::new(chain, q.phi().clone()).expect("inserting a point keeps validity")
            }
        }
    }
}

fn ensure(p: &AutCondition, m: Elem, rng: &mut impl Rng) -> AutCondition {
    if p.contains(m) {
        p.clone()
    } else {
        insert_random(p, m, rng)
    }
}

/// Inserts `m` at a uniform position; `m` is outside the map's support.
fn insert_random(p: &AutCondition, m: Elem, rng: &mut impl Rng) -> AutCondition {
    let mut chain = p.chain().to_vec();
    chain.insert(rng.gen_range(0..=chain.len()), m);
    AutCondition::new(chain, p.phi().clone()).expect("a point outside the map's support keeps validity")
}

/// Per element `m < n`: membership, domain, range, orbit of `alpha0`; then
/// betweenness for every pair below `n`.
pub fn automorphic_schedule(n: Elem, alpha0: Elem) -> Vec<AutRequirement> {
    let mut out = Vec::new();
    for m in 0..n {
        out.push(AutRequirement::Member(m));
        out.push(AutRequirement::Dom(m));
        out.push(AutRequirement::Rng(m));
        out.push(AutRequirement::Orbit { alpha0, beta: m });
    }
    for a in 0..n {
        for b in a + 1..n {
            out.push(AutRequirement::Between(a, b));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutBuild {
    pub condition: AutCondition,
    pub schedule: Vec<AutRequirement>,
    pub log: Vec<LogEntry>,
    /// First step after which each scheduled requirement holds.
    pub met_at: Vec<Option<usize>>,
}

impl AutBuild {
    pub fn report_lines(&self) -> Vec<String> {
        self.schedule
            .iter()
            .zip(&self.met_at)
            .map(|(r, m)| match m {
                Some(s) => format!("req={} met_at={s}", r.name()),
                None => format!("req={} met_at=never", r.name()),
            })
            .collect()
    }
}

/// Meets the schedule round-robin for `steps` steps (one full pass when
/// `None`). Random insertion points come from ChaCha8 seeded with `seed`.
pub fn build_automorphic_order(n: Elem, steps: Option<usize>, seed: u64, alpha0: Elem) -> AutBuild {
    let schedule = if n == 0 { Vec::new() } else { automorphic_schedule(n, alpha0) };
    let steps = if schedule.is_empty() { 0 } else { steps.unwrap_or(schedule.len()) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = AutCondition::empty();
    let mut log = Vec::with_capacity(steps);
    let mut met_at = vec![None; schedule.len()];
    for step in 0..steps {
        let req = schedule[step % schedule.len()];
        let q = req.meet(&p, &mut rng);
        let added: Vec<Elem> = q.universe().difference(&p.universe()).copied().collect();
        let entry = LogEntry { step, req: req.name(), added };
        debug!("{}", entry.line());
        log.push(entry);
        p = q;
        for (slot, r) in met_at.iter_mut().zip(&schedule) {
            if slot.is_none() && r.is_satisfied(&p) {
                *slot = Some(step);
            }
        }
    }
    AutBuild {
        condition: p,
        schedule,
        log,
        met_at,
    }
}
