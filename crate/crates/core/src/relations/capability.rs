//! Workload-relative capability of two configurations.

use std::fmt;

use crate::error::Result;
use crate::exec::feasible_on;
use crate::machine::CostModel;
use crate::workload::WorkloadSpec;

/// Outcome of comparing `r2` against `r` on one workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capability {
    /// Only `r` is feasible: `r2` is strictly less capable.
    R2BelowR,
    /// Only `r2` is feasible.
    RBelowR2,
    /// Both feasible.
    Equi,
    /// Neither feasible; equi-capable by vacuity.
    BothInfeasibleEqui,
    /// Never produced: the decision table over two feasibility bits is total.
    IncomparableNever,
}

impl Capability {
    pub fn name(self) -> &'static str {
        match self {
            Capability::R2BelowR => "r2_below_r",
            Capability::RBelowR2 => "r_below_r2",
            Capability::Equi => "equi",
            Capability::BothInfeasibleEqui => "both_infeasible_equi",
            Capability::IncomparableNever => "incomparable_never",
        }
    }

    /// `r2 ≼ r`: feasibility on `r2` implies feasibility on `r`.
    pub fn r2_at_most_r(self) -> bool {
        !matches!(self, Capability::RBelowR2 | Capability::IncomparableNever)
    }

    /// `r ≼ r2`.
    pub fn r_at_most_r2(self) -> bool {
        !matches!(self, Capability::R2BelowR | Capability::IncomparableNever)
    }

    pub fn is_equi(self) -> bool {
        matches!(self, Capability::Equi | Capability::BothInfeasibleEqui)
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Compares `r2` against `r` from their feasibility on `spec`.
pub fn capability_compare(r: &str, r2: &str, spec: &WorkloadSpec, m: &CostModel) -> Result<Capability> {
    let fr = feasible_on(r, spec, m)?;
    let fr2 = feasible_on(r2, spec, m)?;
    Ok(match (fr, fr2) {
        (true, true) => Capability::Equi,
        (false, false) => Capability::BothInfeasibleEqui,
        (true, false) => Capability::R2BelowR,
        (false, true) => Capability::RBelowR2,
    })
}
