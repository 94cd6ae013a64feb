//! Weight domains: ordered monoids, optionally with a multiplicative
//! structure for constant-factor comparisons.

use std::cmp::Ordering;
use std::fmt;

use crate::num::Fixed;

/// A partially ordered monoid `(W, ⊕, 𝟘, ≤)` with `⊕` monotone and expansive.
pub trait WeightDomain: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn combine(&self, other: &Self) -> Self;
    fn leq(&self, other: &Self) -> bool;

    /// True for the absorbing maximum, if the domain has one.
    fn is_omega(&self) -> bool {
        false
    }
}

/// Adds `⊙` with identity `𝟙`.
pub trait Semiring: WeightDomain {
    fn one() -> Self;
    fn times(&self, other: &Self) -> Self;

    /// `self ≤ c ⊙ other`.
    fn scaled_leq(&self, c: &Self, other: &Self) -> bool {
        self.leq(&c.times(other))
    }
}

/// Left fold `((𝟘 ⊕ w₁) ⊕ …) ⊕ wₙ`; `𝟘` for an empty sequence.
pub fn fold_weights<W, I>(ws: I) -> W
where
    W: WeightDomain,
    I: IntoIterator<Item = W>,
{
    ws.into_iter().fold(W::zero(), |acc, w| acc.combine(&w))
}

/// Non-negative seconds extended with `ω = ∞`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeWeight {
    Finite(Fixed),
    Omega,
}

impl TimeWeight {
    pub fn new(value: Fixed) -> Self {
        TimeWeight::Finite(value)
    }

    pub fn from_int(value: i64) -> Self {
        TimeWeight::Finite(Fixed::from_int(value))
    }

    pub fn value(self) -> Option<Fixed> {
        match self {
            TimeWeight::Finite(v) => Some(v),
            TimeWeight::Omega => None,
        }
    }
}

impl PartialOrd for TimeWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimeWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TimeWeight::Finite(a), TimeWeight::Finite(b)) => a.cmp(b),
            (TimeWeight::Finite(_), TimeWeight::Omega) => Ordering::Less,
            (TimeWeight::Omega, TimeWeight::Finite(_)) => Ordering::Greater,
            (TimeWeight::Omega, TimeWeight::Omega) => Ordering::Equal,
        }
    }
}

impl WeightDomain for TimeWeight {
    fn zero() -> Self {
        TimeWeight::Finite(Fixed::ZERO)
    }

    fn combine(&self, other: &Self) -> Self {
        match (self, other) {
            (TimeWeight::Finite(a), TimeWeight::Finite(b)) => TimeWeight::Finite(*a + *b),
            _ => TimeWeight::Omega,
        }
    }

    fn leq(&self, other: &Self) -> bool {
        self <= other
    }

    fn is_omega(&self) -> bool {
        matches!(self, TimeWeight::Omega)
    }
}

impl Semiring for TimeWeight {
    fn one() -> Self {
        TimeWeight::Finite(Fixed::ONE)
    }

    // ω ⊙ 0 = 0, as in the usual extended-reals convention for measures.
    fn times(&self, other: &Self) -> Self {
        match (self, other) {
            (TimeWeight::Finite(a), TimeWeight::Finite(b)) => TimeWeight::Finite(a.mul_round(*b)),
            (TimeWeight::Finite(z), TimeWeight::Omega) | (TimeWeight::Omega, TimeWeight::Finite(z))
                if z.is_zero() =>
            {
                TimeWeight::zero()
            }
            _ => TimeWeight::Omega,
        }
    }

    fn scaled_leq(&self, c: &Self, other: &Self) -> bool {
        match (self, c, other) {
            (TimeWeight::Finite(lhs), TimeWeight::Finite(c), TimeWeight::Finite(rhs)) => {
                lhs.cmp_scaled(*c, *rhs) != Ordering::Greater
            }
            _ => self.leq(&c.times(other)),
        }
    }
}

impl fmt::Debug for TimeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TimeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeWeight::Finite(v) => write!(f, "{v}"),
            TimeWeight::Omega => f.write_str("omega"),
        }
    }
}

/// Cumulative `(time, energy)` with componentwise `⊕` and the product order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TimeEnergyWeight {
    pub time: Fixed,
    pub energy: Fixed,
}

impl TimeEnergyWeight {
    pub fn new(time: Fixed, energy: Fixed) -> Self {
        TimeEnergyWeight { time, energy }
    }
}

impl WeightDomain for TimeEnergyWeight {
    fn zero() -> Self {
        TimeEnergyWeight::default()
    }

    fn combine(&self, other: &Self) -> Self {
        TimeEnergyWeight { time: self.time + other.time, energy: self.energy + other.energy }
    }

    fn leq(&self, other: &Self) -> bool {
        self.time <= other.time && self.energy <= other.energy
    }
}

impl fmt::Debug for TimeEnergyWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TimeEnergyWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, e={})", self.time, self.energy)
    }
}
