//! Finite explicit weighted transition systems.

use crate::error::{Error, Result};
use crate::weight::WeightDomain;

pub type StateId = usize;
pub type ActionId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition<W> {
    pub action: ActionId,
    pub target: StateId,
    pub weight: W,
}

/// States are dense integers `0..num_states()`. A missing transition stands
/// for weight `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTs<W> {
    alphabet: Vec<String>,
    observe: Vec<W>,
    out: Vec<Vec<Transition<W>>>,
    initial: Vec<StateId>,
}

impl<W: WeightDomain> WeightedTs<W> {
    pub fn new(alphabet: Vec<String>) -> Self {
        WeightedTs { alphabet, observe: Vec::new(), out: Vec::new(), initial: Vec::new() }
    }

    pub fn add_state(&mut self, observation: W) -> StateId {
        self.observe.push(observation);
        self.out.push(Vec::new());
        self.observe.len() - 1
    }

    pub fn add_initial(&mut self, q: StateId) -> Result<()> {
        self.check_state(q)?;
        if !self.initial.contains(&q) {
            self.initial.push(q);
        }
        Ok(())
    }

    pub fn add_transition(&mut self, source: StateId, action: ActionId, target: StateId, weight: W) -> Result<()> {
        self.check_state(source)?;
        self.check_state(target)?;
        if action >= self.alphabet.len() {
            return Err(Error::UnknownAction(format!("#{action}")));
        }
        if weight.is_omega() {
            return Err(Error::OmegaWeight);
        }
        self.out[source].push(Transition { action, target, weight });
        Ok(())
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.observe.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(q))
        }
    }

    pub fn num_states(&self) -> usize {
        self.observe.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn action_id(&self, label: &str) -> Option<ActionId> {
        self.alphabet.iter().position(|a| a == label)
    }

    pub fn label(&self, a: ActionId) -> &str {
        &self.alphabet[a]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn observe(&self, q: StateId) -> &W {
        &self.observe[q]
    }

    pub fn transitions(&self, q: StateId) -> &[Transition<W>] {
        &self.out[q]
    }

    /// All `(q′, w)` with `q →ᵃ q′` of weight `w`. Empty means no `a`-move.
    pub fn successors(&self, q: StateId, a: ActionId) -> Result<Vec<(StateId, &W)>> {
        self.check_state(q)?;
        Ok(self.out[q].iter().filter(|t| t.action == a).map(|t| (t.target, &t.weight)).collect())
    }

    /// `O(q′) = O(q) ⊕ w` on every transition.
    pub fn is_cumulative(&self) -> bool {
        self.out.iter().enumerate().all(|(q, ts)| {
            ts.iter().all(|t| self.observe[t.target] == self.observe[q].combine(&t.weight))
        })
    }

    /// First `(state, action)` with two or more moves, if any.
    pub fn nondeterminism(&self) -> Option<(StateId, ActionId)> {
        let mut seen = Vec::new();
        for (q, ts) in self.out.iter().enumerate() {
            seen.clear();
            for t in ts {
                if seen.contains(&t.action) {
                    return Some((q, t.action));
                }
                seen.push(t.action);
            }
        }
        None
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1 && self.nondeterminism().is_none()
    }

    /// Relabels observations and weights into another domain, keeping state ids.
    pub fn map_weights<V: WeightDomain>(&self, f: impl Fn(&W) -> V) -> WeightedTs<V> {
        WeightedTs {
            alphabet: self.alphabet.clone(),
            observe: self.observe.iter().map(&f).collect(),
            out: self
                .out
                .iter()
                .map(|ts| ts.iter().map(|t| Transition { action: t.action, target: t.target, weight: f(&t.weight) }).collect())
                .collect(),
            initial: self.initial.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Fixed;
    use crate::weight::TimeWeight;

    fn tw(v: i64) -> TimeWeight {
        TimeWeight::from_int(v)
    }

    #[test]
    fn cumulativity_detects_mismatch() {
        let mut ts = WeightedTs::new(vec!["f".into()]);
        let q = ts.add_state(tw(0));
        let q2 = ts.add_state(tw(7));
        ts.add_initial(q).unwrap();
        ts.add_transition(q, 0, q2, tw(3)).unwrap();
        assert!(!ts.is_cumulative());

        let mut ok = WeightedTs::new(vec!["f".into()]);
        let a = ok.add_state(tw(0));
        let b = ok.add_state(tw(3));
        ok.add_transition(a, 0, b, tw(3)).unwrap();
        assert!(ok.is_cumulative());
    }

    #[test]
    fn empty_transition_system_is_cumulative() {
        let mut ts = WeightedTs::<TimeWeight>::new(vec![]);
        ts.add_state(tw(0));
        assert!(ts.is_cumulative());
        assert!(ts.is_deterministic());
    }

    #[test]
    fn successors_and_errors() {
        let mut ts = WeightedTs::new(vec!["f".into(), "g".into()]);
        let q = ts.add_state(tw(0));
        let a = ts.add_state(tw(1));
        let b = ts.add_state(tw(2));
        ts.add_transition(q, 0, a, tw(1)).unwrap();
        ts.add_transition(q, 0, b, tw(2)).unwrap();
        assert_eq!(ts.successors(q, 0).unwrap().len(), 2);
        assert!(ts.successors(q, 1).unwrap().is_empty());
        assert!(ts.successors(a, 0).unwrap().is_empty());
        assert!(matches!(ts.successors(9, 0), Err(Error::UnknownState(9))));
        assert_eq!(ts.nondeterminism(), Some((q, 0)));
        assert!(matches!(ts.add_transition(q, 0, a, TimeWeight::Omega), Err(Error::OmegaWeight)));
        assert!(ts.add_transition(q, 5, a, tw(1)).is_err());
        assert!(ts.add_transition(q, 0, 42, tw(1)).is_err());
    }

    #[test]
    fn map_weights_keeps_structure() {
        let mut ts = WeightedTs::new(vec!["f".into()]);
        let q = ts.add_state(tw(0));
        let r = ts.add_state(tw(4));
        ts.add_initial(q).unwrap();
        ts.add_transition(q, 0, r, tw(4)).unwrap();
        let doubled = ts.map_weights(|w| TimeWeight::new(w.value().unwrap() + w.value().unwrap()));
        assert_eq!(doubled.observe(r), &TimeWeight::new(Fixed::from_int(8)));
        assert!(doubled.is_cumulative());
        assert_eq!(doubled.initial(), &[q]);
    }
}
