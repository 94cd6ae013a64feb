//! By-simulation: every execution path of a system simulates the
//! deterministic specification.

use std::collections::VecDeque;

use super::{align, Clause, Counterexample, Parents, Relation, RelationVerdict};
use crate::error::{Error, Result};
use crate::ts::{StateId, WeightedTs};
use crate::weight::WeightDomain;

/// Traverses the synchronized product of `spec_ts` and `exec_ts` from every
/// initial pair. Holds iff every reachable pair `(p, q)` has `O(q) ≤ O(p)`
/// and every spec move from `p` is available from `q`; branches of
/// `exec_ts` are all followed, so the check is universal over its paths.
pub fn check_by_simulation<W: WeightDomain + std::fmt::Display>(
    spec_ts: &WeightedTs<W>,
    exec_ts: &WeightedTs<W>,
) -> Result<RelationVerdict> {
    if let Some((state, action)) = spec_ts.nondeterminism() {
        return Err(Error::Nondeterministic { state, action: spec_ts.label(action).to_string() });
    }
    let rename = align(spec_ts, exec_ts)?;
    let fail = |cex: Counterexample| RelationVerdict {
        relation: "bysimulation",
        holds: false,
        witness: None,
        counterexample: Some(cex),
        c: None,
    };
    if !spec_ts.initial().is_empty() && exec_ts.initial().is_empty() {
        let p = spec_ts.initial()[0];
        return Ok(fail(Counterexample {
            lhs: p,
            rhs: None,
            clause: Clause::NoInitial,
            path: Vec::new(),
            lhs_obs: spec_ts.observe(p).to_string(),
            rhs_obs: None,
        }));
    }

    let mut parent = Parents::new();
    let mut queue = VecDeque::new();
    for &p in spec_ts.initial() {
        for &q in exec_ts.initial() {
            parent.entry((p, q)).or_insert_with(|| {
                queue.push_back((p, q));
                None
            });
        }
    }
    let path_to = |parent: &Parents, mut at| {
        let mut labels = Vec::new();
        while let Some(Some((p, q, a))) = parent.get(&at) {
            labels.push(spec_ts.label(*a).to_string());
            at = (*p, *q);
        }
        labels.reverse();
        labels
    };
    while let Some((p, q)) = queue.pop_front() {
        let make = |clause, path| Counterexample {
            lhs: p,
            rhs: Some(q),
            clause,
            path,
            lhs_obs: spec_ts.observe(p).to_string(),
            rhs_obs: Some(exec_ts.observe(q).to_string()),
        };
        if !exec_ts.observe(q).leq(spec_ts.observe(p)) {
            return Ok(fail(make(Clause::Order, path_to(&parent, (p, q)))));
        }
        for tr in spec_ts.transitions(p) {
            let a2 = rename[tr.action];
            let targets: Vec<StateId> =
                exec_ts.transitions(q).iter().filter(|t| t.action == a2).map(|t| t.target).collect();
            if targets.is_empty() {
                let action = spec_ts.label(tr.action).to_string();
                let mut path = path_to(&parent, (p, q));
                path.push(action.clone());
                return Ok(fail(make(Clause::MissingMove { action }, path)));
            }
            for q2 in targets {
                parent.entry((tr.target, q2)).or_insert_with(|| {
                    queue.push_back((tr.target, q2));
                    Some((p, q, tr.action))
                });
            }
        }
    }
    let witness = Relation::from_pairs(spec_ts.num_states(), exec_ts.num_states(), parent.keys().copied());
    Ok(RelationVerdict { relation: "bysimulation", holds: true, witness: Some(witness), counterexample: None, c: None })
}
