//! Workload specifications: actions with budgeted times and the absolute
//! deadlines they induce.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::num::Fixed;
use crate::ts::WeightedTs;
use crate::weight::TimeWeight;

/// Non-empty action label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(String);

impl Action {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::InvalidParams("action label must be non-empty".into()));
        }
        Ok(Action(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkloadItem {
    pub action: Action,
    pub budget: Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WorkloadSpec {
    items: Vec<WorkloadItem>,
}

impl WorkloadSpec {
    pub fn new(items: Vec<WorkloadItem>) -> Result<Self> {
        if let Some((i, item)) = items.iter().enumerate().find(|(_, it)| it.budget.is_negative()) {
            return Err(Error::parse(format!("items[{i}].budget"), format!("budget {} is negative", item.budget)));
        }
        Ok(WorkloadSpec { items })
    }

    /// Convenience for tests and examples: `(label, budget)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, i64)]) -> Result<Self> {
        pairs
            .iter()
            .map(|(l, b)| Ok(WorkloadItem { action: Action::new(l.as_ref())?, budget: Fixed::from_int(*b) }))
            .collect::<Result<Vec<_>>>()
            .and_then(WorkloadSpec::new)
    }

    pub fn items(&self) -> &[WorkloadItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn budgets(&self) -> Vec<Fixed> {
        self.items.iter().map(|i| i.budget).collect()
    }

    /// `dᵢ = Σ_{j≤i} bⱼ`.
    pub fn deadlines(&self) -> Vec<Fixed> {
        self.items
            .iter()
            .scan(Fixed::ZERO, |acc, item| {
                *acc += item.budget;
                Some(*acc)
            })
            .collect()
    }

    /// Sorted distinct labels.
    pub fn alphabet(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.items.iter().map(|i| i.action.0.clone()).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// The deterministic path `0 →(a₁,b₁) d₁ →(a₂,b₂) d₂ …`. State `i` observes
    /// `dᵢ`; states are keyed by index so repeated deadlines stay distinct.
    pub fn build_spec_ts(&self) -> WeightedTs<TimeWeight> {
        let alphabet = self.alphabet();
        let mut ts = WeightedTs::new(alphabet.clone());
        let mut prev = ts.add_state(TimeWeight::new(Fixed::ZERO));
        ts.add_initial(prev).expect("fresh state");
        for (item, deadline) in self.items.iter().zip(self.deadlines()) {
            let next = ts.add_state(TimeWeight::new(deadline));
            let action = alphabet.binary_search(&item.action.0).expect("label in alphabet");
            ts.add_transition(prev, action, next, TimeWeight::new(item.budget)).expect("valid states");
            prev = next;
        }
        ts
    }

    pub fn prefix(&self, k: usize) -> Result<WorkloadSpec> {
        if k > self.items.len() {
            return Err(Error::OutOfRange { index: k, len: self.items.len() });
        }
        Ok(WorkloadSpec { items: self.items[..k].to_vec() })
    }

    /// Sequencing: `self` followed by `tail`, whose deadlines shift by `self`'s last deadline.
    pub fn concat_shifted(&self, tail: &WorkloadSpec) -> WorkloadSpec {
        // shifting deadlines by d_m is the same as appending budgets
        let mut items = self.items.clone();
        items.extend(tail.items.iter().cloned());
        WorkloadSpec { items }
    }

    pub fn to_json(&self) -> Value {
        let items = self
            .items
            .iter()
            .map(|it| {
                let mut m = Map::new();
                m.insert("label".into(), Value::String(it.action.0.clone()));
                m.insert("budget".into(), json::number(it.budget));
                Value::Object(m)
            })
            .collect();
        let mut root = Map::new();
        root.insert("items".into(), Value::Array(items));
        Value::Object(root)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::parse("csv", e.to_string());
        w.write_record(["index", "label", "budget"]).map_err(io)?;
        for (i, it) in self.items.iter().enumerate() {
            w.write_record([(i + 1).to_string(), it.action.0.clone(), it.budget.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::parse("csv", e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

impl FromIterator<WorkloadItem> for WorkloadSpec {
    /// Panics on a negative budget; use [`WorkloadSpec::new`] for untrusted input.
    fn from_iter<T: IntoIterator<Item = WorkloadItem>>(iter: T) -> Self {
        WorkloadSpec::new(iter.into_iter().collect()).expect("non-negative budgets")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkloadFormat {
    Json,
    Csv,
}

impl WorkloadFormat {
    /// `.csv` selects CSV; everything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => WorkloadFormat::Csv,
            _ => WorkloadFormat::Json,
        }
    }
}

pub fn parse_workload(text: &str, format: WorkloadFormat) -> Result<WorkloadSpec> {
    match format {
        WorkloadFormat::Json => parse_workload_json(text),
        WorkloadFormat::Csv => parse_workload_csv(text),
    }
}

/// `{"items":[{"label": string, "budget": number}, …]}`
pub fn parse_workload_json(text: &str) -> Result<WorkloadSpec> {
    let root = json::parse_document(text)?;
    let obj = json::as_object(&root, "workload")?;
    let items = json::field(obj, "items", "workload")?;
    let items = items.as_array().ok_or_else(|| Error::parse("workload.items", "expected an array"))?;
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let ctx = format!("items[{i}]");
        let obj = json::as_object(item, &ctx)?;
        let label = json::field(obj, "label", &ctx)?
            .as_str()
            .ok_or_else(|| Error::parse(format!("{ctx}.label"), "expected a string"))?;
        if label.is_empty() {
            return Err(Error::parse(format!("{ctx}.label"), "label must be non-empty"));
        }
        let budget = json::fixed(json::field(obj, "budget", &ctx)?, &format!("{ctx}.budget"))?;
        if budget.is_negative() {
            return Err(Error::parse(format!("{ctx}.budget"), format!("budget {budget} is negative")));
        }
        out.push(WorkloadItem { action: Action(label.to_string()), budget });
    }
    WorkloadSpec::new(out)
}

/// Header `index,label,budget`; indices run 1, 2, … in row order.
pub fn parse_workload_csv(text: &str) -> Result<WorkloadSpec> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| Error::parse("line 1", e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["index", "label", "budget"] {
        return Err(Error::parse("line 1", "expected header `index,label,budget`"));
    }
    let mut out = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| Error::parse(format!("line {line}"), e.to_string()))?;
        if record.len() != 3 {
            return Err(Error::parse(format!("line {line}"), "expected 3 fields"));
        }
        let index: usize = record[0]
            .parse()
            .map_err(|_| Error::parse(format!("line {line}, field index"), format!("`{}` is not an index", &record[0])))?;
        if index != row + 1 {
            return Err(Error::parse(format!("line {line}, field index"), format!("expected {}, found {index}", row + 1)));
        }
        let label = &record[1];
        if label.is_empty() {
            return Err(Error::parse(format!("line {line}, field label"), "label must be non-empty"));
        }
        let budget = Fixed::parse(&record[2])
            .map_err(|source| Error::Number { context: format!("line {line}, field budget"), source })?;
        if budget.is_negative() {
            return Err(Error::parse(format!("line {line}, field budget"), format!("budget {budget} is negative")));
        }
        out.push(WorkloadItem { action: Action(label.to_string()), budget });
    }
    WorkloadSpec::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Budgets uniform in `[min, max]`.
    Uniform,
    /// Two-state calm/burst chain: calm budgets in the lower half of the
    /// range, burst budgets in the upper half.
    Bursty,
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Profile::Uniform),
            "bursty" => Ok(Profile::Bursty),
            other => Err(Error::InvalidParams(format!("unknown profile `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub min: Fixed,
    pub max: Fixed,
    pub labels: Vec<String>,
    /// Probability of entering a burst from the calm state.
    pub burst_enter: f64,
    /// Probability of leaving a burst.
    pub burst_exit: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            min: Fixed::from_int(1),
            max: Fixed::from_int(10),
            labels: vec!["f".into()],
            burst_enter: 0.1,
            burst_exit: 0.3,
        }
    }
}

impl GenParams {
    fn validate(&self) -> Result<()> {
        if self.min.is_negative() {
            return Err(Error::InvalidParams(format!("min {} is negative", self.min)));
        }
        if self.min > self.max {
            return Err(Error::InvalidParams(format!("min {} exceeds max {}", self.min, self.max)));
        }
        if self.labels.is_empty() || self.labels.iter().any(String::is_empty) {
            return Err(Error::InvalidParams("labels must be a non-empty list of non-empty strings".into()));
        }
        for (name, p) in [("burst_enter", self.burst_enter), ("burst_exit", self.burst_exit)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Unbounded seeded stream of workload items; take a finite horizon with
/// `Iterator::take`.
pub struct WorkloadGen {
    profile: Profile,
    params: GenParams,
    rng: ChaCha8Rng,
    bursting: bool,
}

impl WorkloadGen {
    pub fn new(profile: Profile, seed: u64, params: GenParams) -> Result<Self> {
        params.validate()?;
        Ok(WorkloadGen { profile, params, rng: ChaCha8Rng::seed_from_u64(seed), bursting: false })
    }

    fn budget_in(&mut self, lo: Fixed, hi: Fixed) -> Fixed {
        Fixed::from_raw(self.rng.random_range(lo.raw()..=hi.raw()))
    }
}

impl Iterator for WorkloadGen {
    type Item = WorkloadItem;

    fn next(&mut self) -> Option<WorkloadItem> {
        let label = if self.params.labels.len() == 1 {
            self.params.labels[0].clone()
        } else {
            let i = self.rng.random_range(0..self.params.labels.len());
            self.params.labels[i].clone()
        };
        let (min, max) = (self.params.min, self.params.max);
        let budget = match self.profile {
            Profile::Uniform => self.budget_in(min, max),
            Profile::Bursty => {
                let flip = if self.bursting { self.params.burst_exit } else { self.params.burst_enter };
                if self.rng.random_bool(flip) {
                    self.bursting = !self.bursting;
                }
                let mid = Fixed::from_raw(min.raw() + (max.raw() - min.raw()) / 2);
                if self.bursting {
                    self.budget_in(mid, max)
                } else {
                    self.budget_in(min, mid)
                }
            }
        };
        Some(WorkloadItem { action: Action(label), budget })
    }
}

/// Deterministic in `(profile, n, seed, params)`.
pub fn gen_synthetic(profile: Profile, n: usize, seed: u64, params: GenParams) -> Result<WorkloadSpec> {
    let gen = WorkloadGen::new(profile, seed, params)?;
    WorkloadSpec::new(gen.take(n).collect())
}
