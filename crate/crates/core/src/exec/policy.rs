use super::optimal::optimal_offline;
use super::systems::pal_moves;
use super::{Costs, ExecState, GuardMode, SchemeId, Trace};
use crate::error::Result;
use crate::machine::{ConfigId, CostModel};
use crate::workload::WorkloadSpec;

/// Deterministic run of a scheme.
///
/// * `baseline`: every action on `rmax`.
/// * `pal_time` / `pal_energy`: among the moves the scheme licenses, the one
///   with least `γ(r′,aᵢ)`; ties go to the lexicographically least name.
/// * `greedy_min_energy`: among moves of the reconfigurable system that keep
///   `tᵢ + δ ≤ dᵢ` (or reach `rmax` with `tᵢ ≤ dᵢ`), least step energy.
/// * `optimal_dp`: the offline optimum.
pub fn run_policy(scheme: SchemeId, spec: &WorkloadSpec, m: &CostModel, mode: GuardMode) -> Result<Trace> {
    let costs = Costs::resolve(spec, m)?;
    match scheme {
        SchemeId::Baseline => Ok(costs.replay(ExecState::initial(costs.rmax), &vec![costs.rmax; spec.len()])),
        SchemeId::PalTime => {
            super::systems::check_baseline(spec, m, spec.len())?;
            Ok(drive(&costs, |s| pick_min_gamma(&costs, s, &pal_moves(&costs, s, mode, false))))
        }
        SchemeId::PalEnergy => {
            super::systems::check_baseline(spec, m, spec.len())?;
            Ok(drive(&costs, |s| pick_min_gamma(&costs, s, &pal_moves(&costs, s, mode, true))))
        }
        SchemeId::GreedyMinEnergy => {
            super::systems::check_baseline(spec, m, spec.len())?;
            Ok(drive(&costs, |s| greedy_choice(&costs, s)))
        }
        SchemeId::OptimalDp => optimal_offline(spec, m).map(|(trace, _)| trace),
    }
}

fn drive(costs: &Costs<'_>, mut choose: impl FnMut(&ExecState) -> ConfigId) -> Trace {
    let start = ExecState::initial(costs.rmax);
    let mut state = start;
    let mut configs = Vec::with_capacity(costs.len());
    for _ in 0..costs.len() {
        let r = choose(&state);
        configs.push(r);
        state = costs.advance(&state, r).1;
    }
    costs.replay(start, &configs)
}

fn pick_min_gamma(costs: &Costs<'_>, state: &ExecState, moves: &[ConfigId]) -> ConfigId {
    // `moves` is in name order and `min_by_key` keeps the first minimum
    *moves.iter().min_by_key(|&&r| costs.gamma(state.step, r)).expect("rmax fallback is always licensed")
}

fn greedy_choice(costs: &Costs<'_>, state: &ExecState) -> ConfigId {
    let m = costs.model;
    let deadline = costs.deadlines[state.step];
    costs
        .configs()
        .filter(|&r| {
            let (_, next) = costs.advance(state, r);
            if r == costs.rmax {
                next.time <= deadline
            } else {
                next.time + m.delta() <= deadline
            }
        })
        .min_by_key(|&r| costs.step_weight(state, r).energy)
        // unreachable once the baseline check passed: the rmax move is always safe
        .unwrap_or(costs.rmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desk;
    use crate::num::Fixed;

    fn fx(v: i64) -> Fixed {
        Fixed::from_int(v)
    }

    #[test]
    fn policy_examples() {
        let m = desk::m1();
        let t = run_policy(SchemeId::PalEnergy, &desk::w2(), &m, GuardMode::Literal).unwrap();
        assert_eq!(t.config_names(&m), vec!["little", "little"]);
        assert_eq!(t.times(), vec![fx(6), fx(11)]);
        assert_eq!(t.energies(), vec![fx(6), fx(10)]);

        let b = run_policy(SchemeId::Baseline, &desk::w2(), &m, GuardMode::Literal).unwrap();
        assert_eq!(b.times(), vec![fx(3), fx(6)]);
        assert_eq!(b.energies(), vec![fx(10), fx(20)]);

        let p = run_policy(SchemeId::PalTime, &desk::w1(), &m, GuardMode::Literal).unwrap();
        assert_eq!(p.config_names(&m), vec!["big", "big"]);
    }

    #[test]
    fn greedy_is_deadline_safe() {
        let m = desk::m1();
        let g = run_policy(SchemeId::GreedyMinEnergy, &desk::w2(), &m, GuardMode::Literal).unwrap();
        // step 1: little reaches 6 and 6 + 1 <= 8; step 2: little reaches 11 and 11 + 1 <= 16
        assert_eq!(g.config_names(&m), vec!["little", "little"]);
        assert!(g.meets_deadlines());
        let g = run_policy(SchemeId::GreedyMinEnergy, &desk::w1(), &m, GuardMode::Literal).unwrap();
        assert_eq!(g.config_names(&m), vec!["big", "big"]);
    }

    #[test]
    fn optimal_scheme_delegates() {
        let m = desk::m1();
        let o = run_policy(SchemeId::OptimalDp, &desk::w2(), &m, GuardMode::Literal).unwrap();
        assert_eq!(o.total_energy(), fx(10));
    }

    #[test]
    fn policies_need_baseline() {
        let m = desk::m1();
        let spec = WorkloadSpec::from_pairs(&[("f", 2)]).unwrap();
        for s in [SchemeId::PalTime, SchemeId::PalEnergy, SchemeId::GreedyMinEnergy] {
            assert!(run_policy(s, &spec, &m, GuardMode::Literal).is_err());
        }
        // the baseline itself just runs and misses the deadline
        let b = run_policy(SchemeId::Baseline, &spec, &m, GuardMode::Literal).unwrap();
        assert!(!b.meets_deadlines());
    }
}
