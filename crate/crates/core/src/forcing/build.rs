//! Round-robin generic builder.

use std::collections::BTreeSet;

use log::debug;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::requirement::{meet, DenseRequirement};
use super::{Condition, ForcingError};
use crate::classes::ClassTag;
use crate::structure::{Elem, FinStructure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogEntry {
    pub step: usize,
    pub req: String,
    pub added: Vec<Elem>,
}

impl LogEntry {
    pub fn line(&self) -> String {
        let added: Vec<String> = self.added.iter().map(Elem::to_string).collect();
        format!("step={} req={} added={}", self.step, self.req, added.join(","))
    }
}

/// Conditions `steps[0] ≤ steps[1] ≤ …` starting from the empty condition,
/// with one log entry per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericChain {
    pub tag: ClassTag,
    pub steps: Vec<Condition>,
    pub log: Vec<LogEntry>,
}

impl GenericChain {
    pub fn last(&self) -> &Condition {
        self.steps.last().expect("chain starts with the empty condition")
    }

    pub fn structure(&self) -> &FinStructure {
        self.last().structure()
    }

    pub fn log_lines(&self) -> Vec<String> {
        self.log.iter().map(LogEntry::line).collect()
    }

    /// Final structure plus the log, enough to replay the build.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "class": self.tag.name(),
            "structure": self.structure().to_doc(),
            "log": self.log_lines(),
        })
    }
}

/// Meets `schedule[i mod len]` at step `i` for `steps` steps. All random
/// choices come from a ChaCha8 stream seeded with `seed`.
pub fn generic_build(
    tag: ClassTag,
    schedule: &[DenseRequirement],
    steps: usize,
    seed: u64,
) -> Result<GenericChain, ForcingError> {
    if schedule.is_empty() && steps > 0 {
        return Err(ForcingError::EmptySchedule);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = GenericChain {
        tag,
        steps: vec![Condition::empty(tag)],
        log: Vec::with_capacity(steps),
    };
    for step in 0..steps {
        let req = &schedule[step % schedule.len()];
        let p = chain.last();
        let q = meet(p, req, &mut rng)?;
        let added: BTreeSet<Elem> = q.universe().difference(p.universe()).copied().collect();
        let entry = LogEntry {
            step,
            req: req.name(),
            added: added.into_iter().collect(),
        };
        debug!("{}", entry.line());
        chain.log.push(entry);
        chain.steps.push(q);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::requirement::{order_schedule, schedule_for};
    use crate::forcing::stronger;

    #[test]
    fn zero_steps_give_the_empty_condition() {
        let c = generic_build(ClassTag::Graph, &[], 0, 0).unwrap();
        assert_eq!(c.steps, vec![Condition::empty(ClassTag::Graph)]);
        assert!(matches!(
            generic_build(ClassTag::Graph, &[], 1, 0),
            Err(ForcingError::EmptySchedule)
        ));
    }

    #[test]
    fn order_build_is_dense_on_the_named_points() {
        let sched = order_schedule(4);
        let c = generic_build(ClassTag::LinearOrder, &sched, sched.len(), 3).unwrap();
        for req in &sched {
            assert!(req.is_satisfied(c.last()).unwrap(), "{}", req.name());
        }
        for w in c.steps.windows(2) {
            assert!(stronger(&w[1], &w[0]).unwrap());
        }
    }

    #[test]
    fn builds_are_reproducible() {
        let sched = schedule_for(ClassTag::Graph, 3).unwrap();
        let a = generic_build(ClassTag::Graph, &sched, 40, 9).unwrap();
        let b = generic_build(ClassTag::Graph, &sched, 40, 9).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert!(a.log_lines()[0].starts_with("step=0 req=D_0 added=0"));
    }
}
