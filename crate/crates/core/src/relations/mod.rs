//! Decision procedures for simulation-style relations between finite
//! weighted transition systems.
//!
//! Every checker computes the greatest relation satisfying its clauses and
//! reports either that relation as a witness or a shortest counterexample
//! found by breadth-first traversal of the pair space.

mod bysim;
mod capability;
mod factor;
mod fixpoint;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;
use crate::num::Fixed;
use crate::ts::{StateId, WeightedTs};
use crate::weight::{TimeEnergyWeight, TimeWeight, WeightDomain};

pub use bysim::check_by_simulation;
pub use capability::{capability_compare, Capability};
pub use factor::{c_simulation_relation, check_c_simulation, min_c_factor};
pub use fixpoint::{betterment_relation, largest_betterment, largest_simulation, simulation_relation};

/// BFS parent pointers over state pairs: the predecessor pair and action.
type Parents = std::collections::HashMap<(StateId, StateId), Option<(StateId, StateId, crate::ts::ActionId)>>;

/// Which component of a cumulative `(time, energy)` observation to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsProjection {
    Time,
    Energy,
    Composite,
}

impl FromStr for ObsProjection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(ObsProjection::Time),
            "energy" => Ok(ObsProjection::Energy),
            "composite" => Ok(ObsProjection::Composite),
            other => Err(Error::InvalidParams(format!("unknown observation `{other}`"))),
        }
    }
}

/// Projects a `(time, energy)` system onto one scalar component.
pub fn project(ts: &WeightedTs<TimeEnergyWeight>, obs: ObsProjection) -> Result<WeightedTs<TimeWeight>> {
    match obs {
        ObsProjection::Time => Ok(ts.map_weights(|w| TimeWeight::new(w.time))),
        ObsProjection::Energy => Ok(ts.map_weights(|w| TimeWeight::new(w.energy))),
        ObsProjection::Composite => {
            Err(Error::InvalidParams("composite observations cannot be projected to a scalar".into()))
        }
    }
}

/// A binary relation `R ⊆ Q₁ × Q₂` stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    n1: usize,
    n2: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n1: usize, n2: usize) -> Self {
        Relation { n1, n2, bits: vec![false; n1 * n2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n, n);
        for p in 0..n {
            r.insert(p, p);
        }
        r
    }

    pub fn from_pairs(n1: usize, n2: usize, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Self {
        let mut r = Relation::empty(n1, n2);
        for (p, q) in pairs {
            r.insert(p, q);
        }
        r
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn contains(&self, p: StateId, q: StateId) -> bool {
        p < self.n1 && q < self.n2 && self.bits[p * self.n2 + q]
    }

    pub fn insert(&mut self, p: StateId, q: StateId) {
        self.bits[p * self.n2 + q] = true;
    }

    pub fn remove(&mut self, p: StateId, q: StateId) {
        self.bits[p * self.n2 + q] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(move |(i, _)| (i / self.n2, i % self.n2))
    }

    /// `R₁ ∘ R₂ = {(p, s) | ∃q. (p,q) ∈ R₁, (q,s) ∈ R₂}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.n2, other.n1, "composition of incompatible relations");
        let mut out = Relation::empty(self.n1, other.n2);
        for (p, q) in self.pairs() {
            for s in 0..other.n2 {
                if other.contains(q, s) {
                    out.insert(p, s);
                }
            }
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.dims(), other.dims(), "union of incompatible relations");
        Relation { n1: self.n1, n2: self.n2, bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect() }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clause {
    /// The order test `O₂(q) ≤ O₁(p)` (possibly scaled) fails.
    Order,
    /// `p` moves on `action` but `q` cannot.
    MissingMove { action: String },
    /// The right-hand system has no initial state.
    NoInitial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub lhs: StateId,
    pub rhs: Option<StateId>,
    pub clause: Clause,
    /// Actions from the initial pair to the offending pair.
    pub path: Vec<String>,
    pub lhs_obs: String,
    pub rhs_obs: Option<String>,
}

impl Counterexample {
    pub fn step(&self) -> usize {
        self.path.len()
    }

    fn to_json(&self) -> Value {
        let (clause, action) = match &self.clause {
            Clause::Order => ("order", Value::Null),
            Clause::MissingMove { action } => ("missing_move", Value::String(action.clone())),
            Clause::NoInitial => ("no_initial", Value::Null),
        };
        let mut v = json::object([
            ("lhs_state", Value::from(self.lhs)),
            ("rhs_state", self.rhs.map_or(Value::Null, Value::from)),
            ("clause", Value::String(clause.to_string())),
            ("path", Value::Array(self.path.iter().cloned().map(Value::String).collect())),
            ("step", Value::from(self.step())),
            ("lhs_obs", Value::String(self.lhs_obs.clone())),
            ("rhs_obs", self.rhs_obs.clone().map_or(Value::Null, Value::String)),
        ]);
        if !action.is_null() {
            v.as_object_mut().expect("object").insert("action".into(), action);
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct RelationVerdict {
    pub relation: &'static str,
    pub holds: bool,
    /// The computed relation, present when the check holds.
    pub witness: Option<Relation>,
    pub counterexample: Option<Counterexample>,
    pub c: Option<Fixed>,
}

impl RelationVerdict {
    /// `{"relation", "holds", "c"?, "counterexample"?, "witness_size"?}`
    pub fn to_json(&self) -> Value {
        let mut v = json::object([("relation", Value::String(self.relation.to_string())), ("holds", Value::Bool(self.holds))]);
        let obj = v.as_object_mut().expect("object");
        if let Some(c) = self.c {
            obj.insert("c".into(), json::number(c));
        }
        if let Some(cex) = &self.counterexample {
            obj.insert("counterexample".into(), cex.to_json());
        }
        if let Some(w) = &self.witness {
            obj.insert("witness_size".into(), Value::from(w.len()));
        }
        v
    }
}

/// Maps each action of `t1` to the same-labelled action of `t2`; the two
/// alphabets must coincide as sets.
pub(crate) fn align<W1: WeightDomain, W2: WeightDomain>(t1: &WeightedTs<W1>, t2: &WeightedTs<W2>) -> Result<Vec<usize>> {
    let s1: BTreeSet<&String> = t1.alphabet().iter().collect();
    let s2: BTreeSet<&String> = t2.alphabet().iter().collect();
    if s1 != s2 {
        let only1: Vec<_> = s1.difference(&s2).collect();
        let only2: Vec<_> = s2.difference(&s1).collect();
        return Err(Error::AlphabetMismatch(format!("only left: {only1:?}, only right: {only2:?}")));
    }
    Ok(t1.alphabet().iter().map(|l| t2.action_id(l).expect("same label set")).collect())
}

/// Checks the simulation clauses for an explicit relation.
pub fn is_simulation<W: WeightDomain>(t1: &WeightedTs<W>, t2: &WeightedTs<W>, r: &Relation) -> Result<bool> {
    fixpoint::satisfies(t1, t2, r, |p, q| t2.observe(q).leq(t1.observe(p)), false)
}

/// Checks the betterment clauses for an explicit relation.
pub fn is_betterment<W: WeightDomain>(t1: &WeightedTs<W>, t2: &WeightedTs<W>, r: &Relation) -> Result<bool> {
    fixpoint::satisfies(t1, t2, r, |p, q| t2.observe(q).leq(t1.observe(p)), true)
}

/// Checks the `c`-simulation clauses for an explicit relation.
pub fn is_c_simulation<W: crate::weight::Semiring>(
    t1: &WeightedTs<W>,
    t2: &WeightedTs<W>,
    c: &W,
    r: &Relation,
) -> Result<bool> {
    fixpoint::satisfies(t1, t2, r, |p, q| t2.observe(q).scaled_leq(c, t1.observe(p)), false)
}
