//! Greatest-fixpoint refinement shared by simulation, betterment and
//! `c`-simulation.

use std::collections::VecDeque;

use super::{align, Clause, Counterexample, Parents, Relation, RelationVerdict};
use crate::error::Result;
use crate::ts::{ActionId, StateId, WeightedTs};
use crate::weight::WeightDomain;

/// Adjacency of both systems, with `t1` actions renamed into `t2`'s alphabet.
pub(super) struct Index {
    /// `succ1[p]` = `(a, p′)` for every `p —a→ p′`.
    succ1: Vec<Vec<(ActionId, StateId)>>,
    pred1: Vec<Vec<(ActionId, StateId)>>,
    /// `succ2[q][a]` = targets of `q —a→`.
    succ2: Vec<Vec<Vec<StateId>>>,
    pred2: Vec<Vec<(ActionId, StateId)>>,
}

impl Index {
    pub(super) fn new<W: WeightDomain>(t1: &WeightedTs<W>, t2: &WeightedTs<W>) -> Result<Self> {
        let rename = align(t1, t2)?;
        let n1 = t1.num_states();
        let n2 = t2.num_states();
        let k = t2.alphabet().len();
        let mut succ1 = vec![Vec::new(); n1];
        let mut pred1 = vec![Vec::new(); n1];
        for (p, out) in succ1.iter_mut().enumerate() {
            for tr in t1.transitions(p) {
                let a = rename[tr.action];
                out.push((a, tr.target));
                pred1[tr.target].push((a, p));
            }
        }
        let mut succ2 = vec![vec![Vec::new(); k]; n2];
        let mut pred2 = vec![Vec::new(); n2];
        for (q, out) in succ2.iter_mut().enumerate() {
            for tr in t2.transitions(q) {
                out[tr.action].push(tr.target);
                pred2[tr.target].push((tr.action, q));
            }
        }
        Ok(Index { succ1, pred1, succ2, pred2 })
    }

    /// Whether the move `p —a→ p′` is matched from `q`.
    fn matched(&self, r: &Relation, a: ActionId, p2: StateId, q: StateId, universal: bool) -> bool {
        let qs = &self.succ2[q][a];
        if universal {
            !qs.is_empty() && qs.iter().all(|&q2| r.contains(p2, q2))
        } else {
            qs.iter().any(|&q2| r.contains(p2, q2))
        }
    }

    fn clauses_hold(&self, r: &Relation, p: StateId, q: StateId, universal: bool) -> bool {
        self.succ1[p].iter().all(|&(a, p2)| self.matched(r, a, p2, q, universal))
    }
}

/// Refines `{(p,q) | order(p,q)}` to the greatest relation closed under the
/// move-matching clause. With `universal` every `q`-move must stay inside
/// the relation (betterment); otherwise one matching move suffices.
pub(super) fn greatest<W: WeightDomain>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
    idx: &Index,
    order: impl Fn(StateId, StateId) -> bool,
    universal: bool,
) -> Relation {
    let (n1, n2) = (t1.num_states(), t2.num_states());
    let mut r = Relation::empty(n1, n2);
    for p in 0..n1 {
        for q in 0..n2 {
            if order(p, q) {
                r.insert(p, q);
            }
        }
    }
    let mut work = VecDeque::new();
    for p in 0..n1 {
        for q in 0..n2 {
            if r.contains(p, q) && !idx.clauses_hold(&r, p, q, universal) {
                r.remove(p, q);
                work.push_back((p, q));
            }
        }
    }
    // Removing (p′,q′) can only break the move p —a→ p′ from predecessors q
    // of q′ under the same action.
    while let Some((p2, q2)) = work.pop_front() {
        for &(a, q) in &idx.pred2[q2] {
            for &(a1, p) in &idx.pred1[p2] {
                if a1 != a || !r.contains(p, q) {
                    continue;
                }
                if !idx.matched(&r, a, p2, q, universal) {
                    r.remove(p, q);
                    work.push_back((p, q));
                }
            }
        }
    }
    r
}

/// Verdict for a computed relation: every initial `p` needs some related
/// initial `q` (or, with `universal`, every initial `q` must be related).
pub(super) fn verdict<W: WeightDomain + std::fmt::Display>(
    name: &'static str,
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
    idx: &Index,
    r: Relation,
    order: impl Fn(StateId, StateId) -> bool,
    universal: bool,
) -> RelationVerdict {
    let mut starts = Vec::new();
    for &p in t1.initial() {
        if t2.initial().is_empty() {
            let cex = Counterexample {
                lhs: p,
                rhs: None,
                clause: Clause::NoInitial,
                path: Vec::new(),
                lhs_obs: t1.observe(p).to_string(),
                rhs_obs: None,
            };
            return RelationVerdict { relation: name, holds: false, witness: None, counterexample: Some(cex), c: None };
        }
        let related: Vec<StateId> = t2.initial().iter().copied().filter(|&q| r.contains(p, q)).collect();
        let ok = if universal { related.len() == t2.initial().len() } else { !related.is_empty() };
        if !ok {
            starts.extend(t2.initial().iter().filter(|&&q| !r.contains(p, q)).map(|&q| (p, q)));
            break;
        }
    }
    if starts.is_empty() {
        return RelationVerdict { relation: name, holds: true, witness: Some(r), counterexample: None, c: None };
    }
    let cex = explain(t1, t2, idx, &r, &starts, order, universal);
    RelationVerdict { relation: name, holds: false, witness: None, counterexample: Some(cex), c: None }
}

/// Breadth-first search from unrelated initial pairs down to a pair whose
/// failure is local: an order violation or a move with no candidate at all.
fn explain<W: WeightDomain + std::fmt::Display>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
    idx: &Index,
    r: &Relation,
    starts: &[(StateId, StateId)],
    order: impl Fn(StateId, StateId) -> bool,
    universal: bool,
) -> Counterexample {
    let n2 = t2.num_states();
    let mut parent = Parents::new();
    let mut queue = VecDeque::new();
    for &s in starts {
        parent.entry(s).or_insert_with(|| {
            queue.push_back(s);
            None
        });
    }
    let path_to = |parent: &Parents, mut at: (StateId, StateId)| {
        let mut labels = Vec::new();
        while let Some(Some((p, q, a))) = parent.get(&at) {
            labels.push(t2.label(*a).to_string());
            at = (*p, *q);
        }
        labels.reverse();
        labels
    };
    let make = |p: StateId, q: StateId, clause: Clause, path: Vec<String>| Counterexample {
        lhs: p,
        rhs: Some(q),
        clause,
        path,
        lhs_obs: t1.observe(p).to_string(),
        rhs_obs: Some(t2.observe(q).to_string()),
    };
    while let Some((p, q)) = queue.pop_front() {
        if !order(p, q) {
            return make(p, q, Clause::Order, path_to(&parent, (p, q)));
        }
        for &(a, p2) in &idx.succ1[p] {
            let qs = &idx.succ2[q][a];
            if qs.is_empty() {
                let mut path = path_to(&parent, (p, q));
                let action = t2.label(a).to_string();
                path.push(action.clone());
                return make(p, q, Clause::MissingMove { action }, path);
            }
            if !universal && qs.iter().any(|&q2| r.contains(p2, q2)) {
                continue;
            }
            for &q2 in qs {
                if !r.contains(p2, q2) && q2 < n2 {
                    parent.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        Some((p, q, a))
                    });
                }
            }
        }
    }
    unreachable!("every pair outside the greatest fixpoint has a finite failure witness")
}

/// Whether `r` satisfies the order and move clauses on every pair it contains.
pub(super) fn satisfies<W: WeightDomain>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
    r: &Relation,
    order: impl Fn(StateId, StateId) -> bool,
    universal: bool,
) -> Result<bool> {
    let idx = Index::new(t1, t2)?;
    if r.dims() != (t1.num_states(), t2.num_states()) {
        return Ok(false);
    }
    Ok(r.pairs().all(|(p, q)| order(p, q) && idx.clauses_hold(r, p, q, universal)))
}

/// The largest simulation of `t1` by `t2`: `O₂(q) ≤ O₁(p)` and every move of
/// `p` is matched by some move of `q`.
pub fn largest_simulation<W: WeightDomain + std::fmt::Display>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
) -> Result<RelationVerdict> {
    let idx = Index::new(t1, t2)?;
    let order = |p, q| t2.observe(q).leq(t1.observe(p));
    let r = greatest(t1, t2, &idx, order, false);
    Ok(verdict("simulation", t1, t2, &idx, r, order, false))
}

/// The largest betterment: like simulation, but `q` must have a move on every
/// action `p` takes and every such move must stay related.
pub fn largest_betterment<W: WeightDomain + std::fmt::Display>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
) -> Result<RelationVerdict> {
    let idx = Index::new(t1, t2)?;
    let order = |p, q| t2.observe(q).leq(t1.observe(p));
    let r = greatest(t1, t2, &idx, order, true);
    Ok(verdict("betterment", t1, t2, &idx, r, order, true))
}

/// The greatest relation satisfying the simulation clauses, whatever the
/// initial states.
pub fn simulation_relation<W: WeightDomain>(t1: &WeightedTs<W>, t2: &WeightedTs<W>) -> Result<Relation> {
    let idx = Index::new(t1, t2)?;
    Ok(greatest(t1, t2, &idx, |p, q| t2.observe(q).leq(t1.observe(p)), false))
}

/// The greatest relation satisfying the betterment clauses, whatever the
/// initial states.
pub fn betterment_relation<W: WeightDomain>(t1: &WeightedTs<W>, t2: &WeightedTs<W>) -> Result<Relation> {
    let idx = Index::new(t1, t2)?;
    Ok(greatest(t1, t2, &idx, |p, q| t2.observe(q).leq(t1.observe(p)), true))
}
