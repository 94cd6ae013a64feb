//! Offline-optimal energy schedules: a Pareto-frontier dynamic program over
//! `(step, configuration)` and an exhaustive enumeration used as its oracle.

use super::{Costs, ExecState, Trace};
use crate::error::{Error, Result};
use crate::machine::{ConfigId, CostModel};
use crate::num::Fixed;
use crate::workload::WorkloadSpec;

pub const DEFAULT_BRUTE_FORCE_BOUND: u64 = 1_000_000;

/// Non-dominated `(time, energy)` pairs, sorted by time. A pair dominates
/// another when it is `≤` in both coordinates and `<` in one; equal pairs merge.
type Frontier = Vec<(Fixed, Fixed)>;

fn prune(mut points: Frontier) -> Frontier {
    points.sort_unstable();
    points.dedup();
    let mut out: Frontier = Vec::with_capacity(points.len());
    for p in points {
        // sorted by time: keep only strict energy improvements
        if out.last().is_none_or(|&(_, e)| p.1 < e) {
            out.push(p);
        }
    }
    out
}

/// Least energy needed to finish the workload from `state` (energy counted
/// from zero), or the 1-based step at which every continuation misses its
/// deadline.
fn min_energy_to_go(costs: &Costs<'_>, state: &ExecState) -> Result<Fixed, usize> {
    let m = costs.model;
    let n_conf = m.len();
    let mut frontier: Vec<Frontier> = vec![Vec::new(); n_conf];
    frontier[state.config.0].push((state.time, Fixed::ZERO));
    for i in state.step..costs.len() {
        let mut next: Vec<Frontier> = vec![Vec::new(); n_conf];
        for (r, points) in frontier.iter().enumerate() {
            let r = ConfigId(r);
            for r2 in costs.configs() {
                let dt = m.reconfig_time_between(r, r2) + costs.tau(i, r2);
                let de = m.reconfig_energy_between(r, r2) + costs.gamma(i, r2);
                for &(t, e) in points {
                    let t2 = t + dt;
                    if t2 <= costs.deadlines[i] {
                        next[r2.0].push((t2, e + de));
                    }
                }
            }
        }
        frontier = next.into_iter().map(prune).collect();
        if frontier.iter().all(Vec::is_empty) {
            return Err(i + 1);
        }
    }
    Ok(frontier.iter().flatten().map(|&(_, e)| e).min().expect("non-empty frontier"))
}

/// Minimum total energy over all configuration sequences that meet every
/// deadline, starting from `⟨rmax, 0, 0⟩`. Among optimal sequences the
/// lexicographically least (by configuration name) is returned.
pub fn optimal_offline(spec: &WorkloadSpec, m: &CostModel) -> Result<(Trace, Fixed)> {
    let costs = Costs::resolve(spec, m)?;
    let start = ExecState::initial(costs.rmax);
    let best = min_energy_to_go(&costs, &start).map_err(|step| Error::NoFeasibleSchedule { step })?;

    // Walk forward fixing the least configuration that still admits an
    // optimal completion.
    let mut state = start;
    let mut configs = Vec::with_capacity(costs.len());
    for i in 0..costs.len() {
        let choice = costs
            .configs()
            .find(|&r| {
                let (_, next) = costs.advance(&state, r);
                next.time <= costs.deadlines[i]
                    && min_energy_to_go(&costs, &next).is_ok_and(|rest| next.energy + rest == best)
            })
            .expect("an optimal completion exists at every step");
        configs.push(choice);
        state = costs.advance(&state, choice).1;
    }
    Ok((costs.replay(start, &configs), best))
}

/// Exhaustive enumeration of configuration sequences in lexicographic order;
/// same objective and tie-break as [`optimal_offline`]. Refuses instances with
/// more than `bound` sequences.
pub fn brute_force_optimal(spec: &WorkloadSpec, m: &CostModel, bound: u64) -> Result<(Trace, Fixed)> {
    let costs = Costs::resolve(spec, m)?;
    let size = (m.len() as u128).checked_pow(spec.len() as u32);
    if size.is_none_or(|s| s > bound as u128) {
        return Err(Error::BoundExceeded { size: format!("{}^{}", m.len(), spec.len()), bound });
    }

    struct Search<'c, 'a> {
        costs: &'c Costs<'a>,
        prefix: Vec<ConfigId>,
        best: Option<(Fixed, Vec<ConfigId>)>,
        deepest: usize,
    }

    impl Search<'_, '_> {
        fn visit(&mut self, state: ExecState) {
            self.deepest = self.deepest.max(state.step);
            if state.step == self.costs.len() {
                if self.best.as_ref().is_none_or(|(e, _)| state.energy < *e) {
                    self.best = Some((state.energy, self.prefix.clone()));
                }
                return;
            }
            for r in self.costs.configs() {
                let (_, next) = self.costs.advance(&state, r);
                if next.time > self.costs.deadlines[state.step] {
                    continue;
                }
                self.prefix.push(r);
                self.visit(next);
                self.prefix.pop();
            }
        }
    }

    let start = ExecState::initial(costs.rmax);
    let mut search = Search { costs: &costs, prefix: Vec::new(), best: None, deepest: 0 };
    search.visit(start);
    match search.best {
        Some((energy, configs)) => Ok((costs.replay(start, &configs), energy)),
        None => Err(Error::NoFeasibleSchedule { step: search.deepest + 1 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desk;

    fn fx(v: i64) -> Fixed {
        Fixed::from_int(v)
    }

    #[test]
    fn prune_keeps_strict_frontier() {
        let pts = vec![(fx(3), fx(5)), (fx(1), fx(9)), (fx(3), fx(5)), (fx(2), fx(9)), (fx(4), fx(5)), (fx(5), fx(1))];
        assert_eq!(prune(pts), vec![(fx(1), fx(9)), (fx(3), fx(5)), (fx(5), fx(1))]);
    }

    #[test]
    fn desk_optima() {
        let m = desk::m1();
        let (trace, e) = optimal_offline(&desk::w2(), &m).unwrap();
        assert_eq!(e, fx(10));
        assert_eq!(trace.config_names(&m), vec!["little", "little"]);
        let (trace, e) = optimal_offline(&desk::w1(), &m).unwrap();
        assert_eq!(e, fx(20));
        assert_eq!(trace.config_names(&m), vec!["big", "big"]);
        let (trace, e) = optimal_offline(&WorkloadSpec::default(), &m).unwrap();
        assert_eq!(e, fx(0));
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn desk_brute_force() {
        let m = desk::m1();
        assert_eq!(brute_force_optimal(&desk::w2(), &m, DEFAULT_BRUTE_FORCE_BOUND).unwrap().1, fx(10));
        assert_eq!(brute_force_optimal(&desk::w1(), &m, DEFAULT_BRUTE_FORCE_BOUND).unwrap().1, fx(20));
        assert_eq!(brute_force_optimal(&WorkloadSpec::default(), &m, DEFAULT_BRUTE_FORCE_BOUND).unwrap().1, fx(0));
    }

    #[test]
    fn infeasible_instances_name_the_blocking_step() {
        let m = desk::m1();
        let spec = WorkloadSpec::from_pairs(&[("f", 4), ("f", 1)]).unwrap();
        assert!(matches!(optimal_offline(&spec, &m), Err(Error::NoFeasibleSchedule { step: 2 })));
        assert!(matches!(brute_force_optimal(&spec, &m, 100), Err(Error::NoFeasibleSchedule { step: 2 })));
    }

    #[test]
    fn brute_force_bound() {
        let m = desk::m1();
        let spec = WorkloadSpec::from_pairs(&[("f", 8); 11]).unwrap();
        assert!(matches!(brute_force_optimal(&spec, &m, 1024), Err(Error::BoundExceeded { .. })));
        assert!(brute_force_optimal(&spec, &m, 2048).is_ok());
    }

    #[test]
    fn ties_prefer_lexicographically_least_sequence() {
        // a and b cost the same everywhere; rmax = c is dearer
        let m = CostModel::new(
            vec![
                crate::machine::ConfigCosts::new("a").with("f", fx(1), fx(1)),
                crate::machine::ConfigCosts::new("b").with("f", fx(1), fx(1)),
                crate::machine::ConfigCosts::new("c").with("f", fx(1), fx(5)),
            ],
            "c",
            fx(0),
            fx(0),
        );
        let spec = WorkloadSpec::from_pairs(&[("f", 5); 3]).unwrap();
        let (dp, e) = optimal_offline(&spec, &m).unwrap();
        let (bf, e2) = brute_force_optimal(&spec, &m, 1000).unwrap();
        assert_eq!(e, fx(3));
        assert_eq!(e, e2);
        assert_eq!(dp.config_names(&m), vec!["a", "a", "a"]);
        assert_eq!(dp, bf);
    }
}
