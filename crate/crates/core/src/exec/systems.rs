use std::collections::HashMap;

use super::{Costs, ExecState, GuardMode};
use crate::error::{Error, Result};
use crate::machine::{ConfigId, CostModel};
use crate::num::Fixed;
use crate::ts::{StateId, WeightedTs};
use crate::weight::{TimeEnergyWeight, TimeWeight, WeightDomain};
use crate::workload::WorkloadSpec;

/// A built execution system with the semantic payload of every state.
/// `states[q]` describes state `q` of `ts`.
#[derive(Debug, Clone)]
pub struct ExecTs<W> {
    pub ts: WeightedTs<W>,
    pub states: Vec<ExecState>,
}

impl<W: WeightDomain> ExecTs<W> {
    pub fn states_at(&self, step: usize) -> impl Iterator<Item = (StateId, &ExecState)> {
        self.states.iter().enumerate().filter(move |(_, s)| s.step == step)
    }
}

/// `τ(rmax, aᵢ) ≤ bᵢ` for the first `horizon` actions.
pub fn check_baseline(spec: &WorkloadSpec, m: &CostModel, horizon: usize) -> Result<()> {
    let costs = Costs::resolve(spec, m)?;
    baseline_ok(&costs, horizon)
}

fn baseline_ok(costs: &Costs<'_>, horizon: usize) -> Result<()> {
    for i in 0..horizon.min(costs.len()) {
        let time = costs.tau(i, costs.rmax);
        if time > costs.budgets[i] {
            return Err(Error::BaselineInfeasible {
                step: i + 1,
                label: costs.labels[i].to_string(),
                time,
                budget: costs.budgets[i],
            });
        }
    }
    Ok(())
}

fn check_horizon(spec: &WorkloadSpec, horizon: usize) -> Result<()> {
    if horizon > spec.len() {
        return Err(Error::OutOfRange { index: horizon, len: spec.len() });
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Observation {
    Time,
    TimeEnergy,
}

/// Breadth-first unrolling to depth `horizon`. States within a layer are
/// merged when their `(config, time[, energy])` coincide.
fn unroll<W: WeightDomain>(
    costs: &Costs<'_>,
    horizon: usize,
    observation: Observation,
    lift: impl Fn(TimeEnergyWeight) -> W,
    moves: impl Fn(&ExecState) -> Vec<ConfigId>,
) -> ExecTs<W> {
    let mut ts = WeightedTs::new(costs.alphabet.clone());
    let start = ExecState::initial(costs.rmax);
    let q0 = ts.add_state(lift(TimeEnergyWeight::zero()));
    ts.add_initial(q0).expect("fresh state");
    let mut states = vec![start];
    let mut layer = vec![q0];
    for step in 0..horizon {
        let mut index: HashMap<(ConfigId, Fixed, Fixed), StateId> = HashMap::new();
        let mut next_layer = Vec::new();
        for &q in &layer {
            let state = states[q];
            for r in moves(&state) {
                let (mut w, mut next) = costs.advance(&state, r);
                if let Observation::Time = observation {
                    w.energy = Fixed::ZERO;
                    next.energy = Fixed::ZERO;
                }
                let key = (next.config, next.time, next.energy);
                let target = *index.entry(key).or_insert_with(|| {
                    let id = ts.add_state(lift(TimeEnergyWeight::new(next.time, next.energy)));
                    states.push(next);
                    next_layer.push(id);
                    id
                });
                ts.add_transition(q, costs.actions[step], target, lift(w)).expect("valid states");
            }
        }
        layer = next_layer;
    }
    ExecTs { ts, states }
}

fn time_only(w: TimeEnergyWeight) -> TimeWeight {
    TimeWeight::new(w.time)
}

/// The nondeterministic system `𝒩`: from `⟨r,t⟩` every `r′` is possible with
/// `t′ = t + δ_{r,r′} + τ(r′,a)`. Starts at `⟨rmax, 0⟩`; observes time.
pub fn build_reconfigurable_ts(spec: &WorkloadSpec, m: &CostModel, horizon: usize) -> Result<ExecTs<TimeWeight>> {
    check_horizon(spec, horizon)?;
    let costs = Costs::resolve(spec, m)?;
    let all: Vec<ConfigId> = costs.configs().collect();
    Ok(unroll(&costs, horizon, Observation::Time, time_only, |_| all.clone()))
}

/// `𝒩` with cumulative energy `e′ = e + θ_{r,r′} + γ(r′,a)`; observes `(time, energy)`.
pub fn build_energy_aware_ts(
    spec: &WorkloadSpec,
    m: &CostModel,
    horizon: usize,
) -> Result<ExecTs<TimeEnergyWeight>> {
    check_horizon(spec, horizon)?;
    let costs = Costs::resolve(spec, m)?;
    let all: Vec<ConfigId> = costs.configs().collect();
    Ok(unroll(&costs, horizon, Observation::TimeEnergy, |w| w, |_| all.clone()))
}

fn time_guard(costs: &Costs<'_>, state: &ExecState, next: ConfigId, mode: GuardMode) -> bool {
    let m = costs.model;
    let reserve = match mode {
        GuardMode::Literal => m.delta() + m.delta(),
        GuardMode::Tight => m.reconfig_time_between(state.config, next) + m.delta(),
    };
    let i = state.step;
    costs.deadlines[i] >= state.time + reserve + costs.tau(i, next)
}

// Staying put is not a reconfiguration, so only switches are energy-guarded.
fn energy_guard(costs: &Costs<'_>, state: &ExecState, next: ConfigId) -> bool {
    if next == state.config {
        return true;
    }
    let theta = costs.model.theta();
    let i = state.step;
    costs.gamma(i, state.config) >= costs.gamma(i, next) + theta + theta
}

/// Moves licensed by the slack scheme from `state`, in config order: every
/// non-`rmax` target passing the guard(s), plus the `rmax` fallback.
pub(crate) fn pal_moves(costs: &Costs<'_>, state: &ExecState, mode: GuardMode, energy_aware: bool) -> Vec<ConfigId> {
    costs
        .configs()
        .filter(|&r| {
            r == costs.rmax
                || (time_guard(costs, state, r, mode) && (!energy_aware || energy_guard(costs, state, r)))
        })
        .collect()
}

/// The time-guarded slack scheme `𝒫`, a sub-system of `𝒩`.
pub fn build_pal_time_ts(
    spec: &WorkloadSpec,
    m: &CostModel,
    horizon: usize,
    mode: GuardMode,
) -> Result<ExecTs<TimeWeight>> {
    check_horizon(spec, horizon)?;
    let costs = Costs::resolve(spec, m)?;
    baseline_ok(&costs, horizon)?;
    Ok(unroll(&costs, horizon, Observation::Time, time_only, |s| pal_moves(&costs, s, mode, false)))
}

/// The energy-guarded slack scheme over the `(time, energy)` system.
pub fn build_pal_energy_ts(
    spec: &WorkloadSpec,
    m: &CostModel,
    horizon: usize,
    mode: GuardMode,
) -> Result<ExecTs<TimeEnergyWeight>> {
    check_horizon(spec, horizon)?;
    let costs = Costs::resolve(spec, m)?;
    baseline_ok(&costs, horizon)?;
    Ok(unroll(&costs, horizon, Observation::TimeEnergy, |w| w, |s| pal_moves(&costs, s, mode, true)))
}

/// The energy-guarded scheme with states merged on `(step, config, time)`,
/// each observing the largest energy reaching it.
///
/// The scheme's moves depend on the configuration, the elapsed time and the
/// step, never on accumulated energy, so every state of
/// [`build_pal_energy_ts`] lies in exactly one class here with energy at
/// most the class maximum, and each class maximum is attained. Bounds on
/// reachable energy can be checked on this much smaller system.
pub fn pal_energy_envelope(
    spec: &WorkloadSpec,
    m: &CostModel,
    horizon: usize,
    mode: GuardMode,
) -> Result<ExecTs<TimeEnergyWeight>> {
    check_horizon(spec, horizon)?;
    let costs = Costs::resolve(spec, m)?;
    baseline_ok(&costs, horizon)?;
    let mut ts = WeightedTs::new(costs.alphabet.clone());
    let q0 = ts.add_state(TimeEnergyWeight::zero());
    ts.add_initial(q0).expect("fresh state");
    let mut states = vec![ExecState::initial(costs.rmax)];
    let mut layer = vec![q0];
    for step in 0..horizon {
        let mut index: HashMap<(ConfigId, Fixed), usize> = HashMap::new();
        let mut classes: Vec<ExecState> = Vec::new();
        let mut edges = Vec::new();
        for &q in &layer {
            let state = states[q];
            for r in pal_moves(&costs, &state, mode, true) {
                let (w, next) = costs.advance(&state, r);
                let slot = *index.entry((next.config, next.time)).or_insert_with(|| {
                    classes.push(next);
                    classes.len() - 1
                });
                if next.energy > classes[slot].energy {
                    classes[slot].energy = next.energy;
                }
                edges.push((q, slot, w));
            }
        }
        let ids: Vec<StateId> = classes
            .iter()
            .map(|c| {
                states.push(*c);
                ts.add_state(TimeEnergyWeight::new(c.time, c.energy))
            })
            .collect();
        for (q, slot, w) in edges {
            ts.add_transition(q, costs.actions[step], ids[slot], w).expect("valid states");
        }
        layer = ids;
    }
    Ok(ExecTs { ts, states })
}
