//! The two-configuration big/little reference instance used throughout the
//! docs and tests.
//!
//! `M1`: `τ(big,f)=3, γ(big,f)=10, τ(little,f)=5, γ(little,f)=4`, `rmax = big`,
//! `δ = 1`, `θ = 2`. `W1` has two `f` actions with budget 4, `W2` two with
//! budget 8.

use crate::machine::{ConfigCosts, CostModel};
use crate::num::Fixed;
use crate::workload::WorkloadSpec;

pub fn m1() -> CostModel {
    m1_with_theta(Fixed::from_int(2))
}

pub fn m1_with_theta(theta: Fixed) -> CostModel {
    let fx = Fixed::from_int;
    CostModel::new(
        vec![
            ConfigCosts::new("big").with("f", fx(3), fx(10)),
            ConfigCosts::new("little").with("f", fx(5), fx(4)),
        ],
        "big",
        fx(1),
        theta,
    )
}

pub fn w1() -> WorkloadSpec {
    WorkloadSpec::from_pairs(&[("f", 4), ("f", 4)]).expect("valid budgets")
}

pub fn w2() -> WorkloadSpec {
    WorkloadSpec::from_pairs(&[("f", 8), ("f", 8)]).expect("valid budgets")
}
