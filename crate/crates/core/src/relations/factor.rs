//! Constant-factor simulation and the least factor between two systems.

use super::fixpoint::{greatest, verdict, Index};
use super::{Relation, RelationVerdict};
use crate::error::{Error, Result};
use crate::num::Fixed;
use crate::ts::WeightedTs;
use crate::weight::{Semiring, TimeWeight};

/// Simulation with the order test relaxed to `O₂(q) ≤ c ⊙ O₁(p)`.
pub fn check_c_simulation<W: Semiring + std::fmt::Display>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
    c: &W,
) -> Result<RelationVerdict> {
    let idx = Index::new(t1, t2)?;
    let order = |p, q| t2.observe(q).scaled_leq(c, t1.observe(p));
    let r = greatest(t1, t2, &idx, order, false);
    let mut v = verdict("c_simulation", t1, t2, &idx, r, order, false);
    v.c = scalar(c);
    Ok(v)
}

/// The greatest relation satisfying the `c`-simulation clauses, whatever the
/// initial states.
pub fn c_simulation_relation<W: Semiring>(t1: &WeightedTs<W>, t2: &WeightedTs<W>, c: &W) -> Result<Relation> {
    let idx = Index::new(t1, t2)?;
    Ok(greatest(t1, t2, &idx, |p, q| t2.observe(q).scaled_leq(c, t1.observe(p)), false))
}

fn scalar<W: std::fmt::Display>(c: &W) -> Option<Fixed> {
    Fixed::parse(&c.to_string()).ok()
}

/// The least `c` on the `10⁻⁹` grid for which `t2` `c`-simulates `t1`.
///
/// Holding is monotone in `c`, and the only thresholds at which a single
/// order test flips are the ratios `O₂(q)/O₁(p)` rounded up to the grid, so
/// a binary search over those candidates (plus 0) is exact.
pub fn min_c_factor(t1: &WeightedTs<TimeWeight>, t2: &WeightedTs<TimeWeight>) -> Result<Fixed> {
    let idx = Index::new(t1, t2)?;
    let mut candidates = vec![Fixed::ZERO];
    for p in 0..t1.num_states() {
        let Some(o1) = t1.observe(p).value() else { continue };
        if !o1.is_positive() {
            continue;
        }
        for q in 0..t2.num_states() {
            if let Some(o2) = t2.observe(q).value() {
                candidates.push(Fixed::ratio_ceil(o2, o1));
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    let holds_at = |c: Fixed| -> RelationVerdict {
        let w = TimeWeight::new(c);
        let order = |p, q| t2.observe(q).scaled_leq(&w, t1.observe(p));
        let r = greatest(t1, t2, &idx, order, false);
        verdict("c_simulation", t1, t2, &idx, r, order, false)
    };

    let top = *candidates.last().expect("zero is always a candidate");
    let at_top = holds_at(top);
    if !at_top.holds {
        let cex = at_top.counterexample.expect("failing verdict has a counterexample");
        let why = match &cex.clause {
            super::Clause::Order => format!(
                "after {:?}: rhs observes {} while lhs observes {}",
                cex.path,
                cex.rhs_obs.as_deref().unwrap_or("-"),
                cex.lhs_obs
            ),
            super::Clause::MissingMove { action } => format!("after {:?}: rhs cannot perform `{action}`", cex.path),
            super::Clause::NoInitial => "rhs has no initial state".to_string(),
        };
        return Err(Error::UnboundedRatio(why));
    }
    // invariant: holds at candidates[hi]; fails below lo
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if holds_at(candidates[mid]).holds {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[hi])
}
