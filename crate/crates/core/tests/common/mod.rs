//! Seeded random instances shared by the integration and acceptance suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wtsim::machine::{ConfigCosts, CostModel};
use wtsim::ts::WeightedTs;
use wtsim::weight::TimeWeight;
use wtsim::workload::{WorkloadItem, WorkloadSpec};
use wtsim::Fixed;

pub const CONFIG_NAMES: [&str; 4] = ["c0", "c1", "c2", "c3"];
pub const LABELS: [&str; 3] = ["a", "b", "c"];

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub spec: WorkloadSpec,
    pub model: CostModel,
}

/// Multiples of `1/den` in `[lo, hi]`.
fn grid(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Fixed {
    let k = rng.random_range(lo * den..=hi * den);
    Fixed::from_raw(k as i128 * (wtsim::num::SCALE / den as i128))
}

/// A random instance with `n ≤ max_n` actions and at most four configs.
///
/// The baseline precondition `τ(rmax,aᵢ) ≤ bᵢ` holds, and `rmax` draws the
/// most energy on every action (`γ(r,a) ≤ γ(rmax,a)`). Costs are positive
/// multiples of `1/den`.
pub fn random_instance(seed: u64, max_n: usize, den: i64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(1..=4usize);
    let n_labels = rng.random_range(1..=3usize);
    let labels = &LABELS[..n_labels];
    let rmax = rng.random_range(0..k);

    let mut tau_max = Vec::new();
    let mut gamma_max = Vec::new();
    for _ in labels {
        tau_max.push(grid(&mut rng, 1, 4, den));
        gamma_max.push(grid(&mut rng, 2, 12, den));
    }
    let mut configs = Vec::new();
    for (r, name) in CONFIG_NAMES[..k].iter().enumerate() {
        let mut c = ConfigCosts::new(*name);
        for (j, label) in labels.iter().enumerate() {
            let (tau, gamma) = if r == rmax {
                (tau_max[j], gamma_max[j])
            } else {
                // slower, and never more power-hungry than rmax
                let slow = tau_max[j] + grid(&mut rng, 0, 5, den);
                let max_gamma = gamma_max[j].raw() / (wtsim::num::SCALE / den as i128);
                let g = rng.random_range(1..=max_gamma as i64);
                (slow, Fixed::from_raw(g as i128 * (wtsim::num::SCALE / den as i128)))
            };
            c = c.with(*label, tau, gamma);
        }
        configs.push(c);
    }
    let delta = grid(&mut rng, 0, 2, den);
    let theta = grid(&mut rng, 0, 3, den);
    let model = CostModel::new(configs, CONFIG_NAMES[rmax], delta, theta);

    let n = rng.random_range(0..=max_n);
    let mut items = Vec::with_capacity(n);
    for _ in 0..n {
        let j = rng.random_range(0..n_labels);
        let budget = tau_max[j] + grid(&mut rng, 0, 8, den);
        items.push(WorkloadItem { action: wtsim::workload::Action::new(labels[j]).unwrap(), budget });
    }
    Instance { seed, spec: WorkloadSpec::new(items).unwrap(), model }
}

/// A random small transition system over `{a, b}` with integer observations.
pub fn random_ts(rng: &mut ChaCha8Rng, max_states: usize) -> WeightedTs<TimeWeight> {
    let n = rng.random_range(1..=max_states);
    let mut ts = WeightedTs::new(vec!["a".into(), "b".into()]);
    for _ in 0..n {
        ts.add_state(TimeWeight::from_int(rng.random_range(0..5)));
    }
    let edges = rng.random_range(0..=2 * n);
    for _ in 0..edges {
        let s = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        let a = rng.random_range(0..2);
        ts.add_transition(s, a, t, TimeWeight::from_int(1)).unwrap();
    }
    let inits = rng.random_range(1..=2);
    for _ in 0..inits {
        ts.add_initial(rng.random_range(0..n)).unwrap();
    }
    ts
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
