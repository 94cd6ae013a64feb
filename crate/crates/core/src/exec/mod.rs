//! Execution systems: fixed-configuration paths, the reconfigurable system,
//! its energy-aware variant, the slack-guarded schemes, deterministic
//! policies and offline-optimal schedules.

mod optimal;
mod policy;
mod systems;

use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;
use crate::machine::{ConfigId, CostModel};
use crate::num::Fixed;
use crate::ts::WeightedTs;
use crate::weight::{TimeEnergyWeight, WeightDomain};
use crate::workload::WorkloadSpec;

pub use optimal::{brute_force_optimal, optimal_offline, DEFAULT_BRUTE_FORCE_BOUND};
pub use policy::run_policy;
pub use systems::{
    build_energy_aware_ts, build_pal_energy_ts, build_pal_time_ts, build_reconfigurable_ts, check_baseline,
    pal_energy_envelope, ExecTs,
};

/// `⟨r, t, e⟩` before the action with index `step` (0-based) is executed.
/// Time-only systems leave `energy` at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExecState {
    pub config: ConfigId,
    pub time: Fixed,
    pub energy: Fixed,
    pub step: usize,
}

impl ExecState {
    pub fn initial(config: ConfigId) -> Self {
        ExecState { config, time: Fixed::ZERO, energy: Fixed::ZERO, step: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub action: String,
    pub config: ConfigId,
    pub weight: TimeEnergyWeight,
    pub state: ExecState,
    pub deadline: Fixed,
}

/// A deterministic run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start: ExecState,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn times(&self) -> Vec<Fixed> {
        self.steps.iter().map(|s| s.state.time).collect()
    }

    pub fn energies(&self) -> Vec<Fixed> {
        self.steps.iter().map(|s| s.state.energy).collect()
    }

    pub fn configs(&self) -> Vec<ConfigId> {
        self.steps.iter().map(|s| s.config).collect()
    }

    pub fn config_names<'m>(&self, m: &'m CostModel) -> Vec<&'m str> {
        self.steps.iter().map(|s| m.name(s.config)).collect()
    }

    pub fn total_energy(&self) -> Fixed {
        self.steps.last().map_or(self.start.energy, |s| s.state.energy)
    }

    pub fn meets_deadlines(&self) -> bool {
        self.steps.iter().all(|s| s.state.time <= s.deadline)
    }

    /// The run as a path-shaped transition system observing `(time, energy)`.
    pub fn to_ts(&self, alphabet: &[String]) -> Result<WeightedTs<TimeEnergyWeight>> {
        let mut ts = WeightedTs::new(alphabet.to_vec());
        let mut prev = ts.add_state(TimeEnergyWeight::new(self.start.time, self.start.energy));
        ts.add_initial(prev)?;
        for s in &self.steps {
            let a = alphabet
                .iter()
                .position(|l| *l == s.action)
                .ok_or_else(|| Error::UnknownAction(s.action.clone()))?;
            let next = ts.add_state(TimeEnergyWeight::new(s.state.time, s.state.energy));
            ts.add_transition(prev, a, next, s.weight)?;
            prev = next;
        }
        Ok(ts)
    }

    /// `{"scheme", "steps":[{"i","label","config","t","e","deadline"}], "total_energy"}`
    pub fn to_json(&self, m: &CostModel, scheme: &str) -> Value {
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json::object([
                    ("i", Value::from(i + 1)),
                    ("label", Value::String(s.action.clone())),
                    ("config", Value::String(m.name(s.config).to_string())),
                    ("t", json::number(s.state.time)),
                    ("e", json::number(s.state.energy)),
                    ("deadline", json::number(s.deadline)),
                ])
            })
            .collect();
        json::object([
            ("scheme", Value::String(scheme.to_string())),
            ("steps", Value::Array(steps)),
            ("total_energy", json::number(self.total_energy())),
        ])
    }

    pub fn to_csv(&self, m: &CostModel) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::parse("csv", e.to_string());
        w.write_record(["i", "label", "config", "t", "e", "deadline"]).map_err(err)?;
        for (i, s) in self.steps.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                s.action.clone(),
                m.name(s.config).to_string(),
                s.state.time.to_string(),
                s.state.energy.to_string(),
                s.deadline.to_string(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::parse("csv", e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Baseline,
    PalTime,
    PalEnergy,
    GreedyMinEnergy,
    OptimalDp,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] =
        [SchemeId::Baseline, SchemeId::PalTime, SchemeId::PalEnergy, SchemeId::GreedyMinEnergy, SchemeId::OptimalDp];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Baseline => "baseline",
            SchemeId::PalTime => "pal_time",
            SchemeId::PalEnergy => "pal_energy",
            SchemeId::GreedyMinEnergy => "greedy_min_energy",
            SchemeId::OptimalDp => "optimal_dp",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown scheme `{s}`")))
    }
}

/// Guard used by the slack-based schemes for a move `r → r′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GuardMode {
    /// `dᵢ − tᵢ₋₁ ≥ 2δ + τ(r′,aᵢ)` for every non-`rmax` target, self-moves included.
    #[default]
    Literal,
    /// `dᵢ − tᵢ₋₁ ≥ δ_{r,r′} + δ + τ(r′,aᵢ)`: the actual switch plus one
    /// reserved switch back to `rmax`.
    Tight,
}

impl FromStr for GuardMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(GuardMode::Literal),
            "tight" => Ok(GuardMode::Tight),
            other => Err(Error::InvalidParams(format!("unknown guard mode `{other}`"))),
        }
    }
}

/// Per-step cost lookups resolved against a model.
pub(crate) struct Costs<'a> {
    pub model: &'a CostModel,
    pub rmax: ConfigId,
    pub labels: Vec<&'a str>,
    pub alphabet: Vec<String>,
    /// Alphabet index of each step's action.
    pub actions: Vec<usize>,
    pub budgets: Vec<Fixed>,
    pub deadlines: Vec<Fixed>,
    tau: Vec<Vec<Fixed>>,
    gamma: Vec<Vec<Fixed>>,
}

impl<'a> Costs<'a> {
    pub fn resolve(spec: &'a WorkloadSpec, model: &'a CostModel) -> Result<Self> {
        let rmax = model.rmax()?;
        let alphabet = spec.alphabet();
        let mut tau = Vec::with_capacity(spec.len());
        let mut gamma = Vec::with_capacity(spec.len());
        for item in spec.items() {
            let label = item.action.as_str();
            tau.push(model.ids().map(|r| model.tau(r, label)).collect::<Result<Vec<_>>>()?);
            gamma.push(model.ids().map(|r| model.gamma(r, label)).collect::<Result<Vec<_>>>()?);
        }
        let actions = spec
            .items()
            .iter()
            .map(|it| alphabet.binary_search_by(|l| l.as_str().cmp(it.action.as_str())).expect("label in alphabet"))
            .collect();
        Ok(Costs {
            model,
            rmax,
            labels: spec.items().iter().map(|i| i.action.as_str()).collect(),
            alphabet,
            actions,
            budgets: spec.budgets(),
            deadlines: spec.deadlines(),
            tau,
            gamma,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn tau(&self, step: usize, r: ConfigId) -> Fixed {
        self.tau[step][r.0]
    }

    pub fn gamma(&self, step: usize, r: ConfigId) -> Fixed {
        self.gamma[step][r.0]
    }

    pub fn configs(&self) -> impl Iterator<Item = ConfigId> + '_ {
        self.model.ids()
    }

    /// Weight of executing step `state.step` on `next`, reconfiguring if needed.
    pub fn step_weight(&self, state: &ExecState, next: ConfigId) -> TimeEnergyWeight {
        let m = self.model;
        TimeEnergyWeight::new(
            m.reconfig_time_between(state.config, next) + self.tau(state.step, next),
            m.reconfig_energy_between(state.config, next) + self.gamma(state.step, next),
        )
    }

    pub fn advance(&self, state: &ExecState, next: ConfigId) -> (TimeEnergyWeight, ExecState) {
        let w = self.step_weight(state, next);
        let cum = TimeEnergyWeight::new(state.time, state.energy).combine(&w);
        (w, ExecState { config: next, time: cum.time, energy: cum.energy, step: state.step + 1 })
    }

    /// Executes `configs` in order from `start`.
    pub fn replay(&self, start: ExecState, configs: &[ConfigId]) -> Trace {
        let mut state = start;
        let mut steps = Vec::with_capacity(configs.len());
        for &r in configs {
            let (weight, next) = self.advance(&state, r);
            steps.push(TraceStep {
                action: self.labels[state.step].to_string(),
                config: r,
                weight,
                state: next,
                deadline: self.deadlines[state.step],
            });
            state = next;
        }
        Trace { start, steps }
    }
}

/// The path `𝒯ᵃᵣ`: every action on `r`, starting from `⟨r, 0⟩`.
pub fn run_fixed(r: &str, spec: &WorkloadSpec, m: &CostModel) -> Result<Trace> {
    let r = m.config_id(r)?;
    run_fixed_id(r, spec, m)
}

pub(crate) fn run_fixed_id(r: ConfigId, spec: &WorkloadSpec, m: &CostModel) -> Result<Trace> {
    let costs = Costs::resolve(spec, m)?;
    Ok(costs.replay(ExecState::initial(r), &vec![r; spec.len()]))
}

/// `r` meets every absolute deadline of `spec` without reconfiguring.
pub fn feasible_on(r: &str, spec: &WorkloadSpec, m: &CostModel) -> Result<bool> {
    Ok(run_fixed(r, spec, m)?.meets_deadlines())
}
