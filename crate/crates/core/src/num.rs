//! Fixed-point reals with nanosecond / nanojoule resolution.
//!
//! Decimal inputs with at most nine fractional digits are represented
//! exactly; longer inputs are rounded to the nearest 1e-9.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Number of raw units per whole unit.
pub const SCALE: i128 = 1_000_000_000;
const FRAC_DIGITS: usize = 9;
/// Largest accepted magnitude for a parsed literal (exclusive).
pub const MAX_LITERAL: i128 = 1_000_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("empty number")]
    Empty,
    #[error("invalid number literal `{0}`")]
    Invalid(String),
    #[error("number `{0}` is out of range (|x| must be below 1e15)")]
    OutOfRange(String),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fixed(i128);

impl Fixed {
    pub const ZERO: Fixed = Fixed(0);
    pub const ONE: Fixed = Fixed(SCALE);

    pub const fn from_raw(raw: i128) -> Self {
        Fixed(raw)
    }

    pub const fn raw(self) -> i128 {
        self.0
    }

    pub const fn from_int(v: i64) -> Self {
        Fixed(v as i128 * SCALE)
    }

    /// Rounds `value` to the 1e-9 grid.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() || value.abs() >= MAX_LITERAL as f64 {
            return None;
        }
        Some(Fixed((value * SCALE as f64).round() as i128))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Parses a decimal literal (optional sign, fraction and exponent).
    pub fn parse(text: &str) -> Result<Self, NumError> {
        let s = text.trim();
        if s.is_empty() {
            return Err(NumError::Empty);
        }
        let invalid = || NumError::Invalid(s.to_string());
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
            None => (body, None),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let mut exp: i64 = match exponent {
            None => 0,
            Some(e) => parse_exponent(e).ok_or_else(invalid)?,
        };
        exp -= frac_part.len() as i64;

        // value = digits * 10^exp
        let digits: Vec<u8> = int_part
            .bytes()
            .chain(frac_part.bytes())
            .map(|b| b - b'0')
            .skip_while(|&d| d == 0)
            .collect();
        if digits.is_empty() {
            return Ok(Fixed::ZERO);
        }
        let magnitude = digits.len() as i64 - 1 + exp;
        if magnitude >= 15 {
            return Err(NumError::OutOfRange(s.to_string()));
        }
        if magnitude < -(FRAC_DIGITS as i64) - 1 {
            return Ok(Fixed::ZERO);
        }
        let shift = exp + FRAC_DIGITS as i64;
        let raw = if shift >= 0 {
            let mut acc: i128 = 0;
            for &d in &digits {
                acc = acc * 10 + d as i128;
            }
            acc * 10i128.pow(shift as u32)
        } else {
            let keep = digits.len() as i64 + shift;
            let mut acc: i128 = 0;
            for &d in digits.iter().take(keep.max(0) as usize) {
                acc = acc * 10 + d as i128;
            }
            let round_digit = if keep >= 0 { digits.get(keep as usize).copied().unwrap_or(0) } else { 0 };
            if round_digit >= 5 {
                acc += 1;
            }
            acc
        };
        let raw = if negative { -raw } else { raw };
        if raw.abs() >= MAX_LITERAL * SCALE {
            return Err(NumError::OutOfRange(s.to_string()));
        }
        Ok(Fixed(raw))
    }

    /// Smallest grid value `c` with `c >= num / den`. `den` must be positive.
    pub fn ratio_ceil(num: Fixed, den: Fixed) -> Fixed {
        assert!(den.0 > 0, "ratio_ceil: non-positive denominator");
        let q = num.0.div_euclid(den.0);
        let r = num.0.rem_euclid(den.0);
        let frac = match r.checked_mul(SCALE) {
            Some(scaled) => ceil_div(scaled, den.0),
            // denominators this large only arise from astronomically long runs
            None => ceil_div(r, den.0 / SCALE + 1),
        };
        Fixed(q * SCALE + frac)
    }

    /// `self * other` rounded up to the grid.
    pub fn mul_ceil(self, other: Fixed) -> Fixed {
        let (hi, lo, neg) = wide_mul(self.0, other.0);
        assert!(hi == 0 && lo <= i128::MAX as u128, "mul_ceil overflow");
        let p = lo as i128;
        if neg {
            Fixed(-(p / SCALE))
        } else {
            Fixed(ceil_div(p, SCALE))
        }
    }

    /// `self * other` rounded half away from zero to the grid.
    pub fn mul_round(self, other: Fixed) -> Fixed {
        let (hi, lo, neg) = wide_mul(self.0, other.0);
        assert!(hi == 0 && lo <= i128::MAX as u128, "mul_round overflow");
        let p = lo as i128;
        let q = (p + SCALE / 2) / SCALE;
        Fixed(if neg { -q } else { q })
    }

    /// Exact comparison of `self` against `c * other`.
    pub fn cmp_scaled(self, c: Fixed, other: Fixed) -> Ordering {
        // self * SCALE  vs  c * other
        cmp_products(self.0, SCALE, c.0, other.0)
    }
}

fn parse_exponent(e: &str) -> Option<i64> {
    let (neg, digits) = match e.as_bytes().first()? {
        b'-' => (true, &e[1..]),
        b'+' => (false, &e[1..]),
        _ => (false, e),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut v: i64 = 0;
    for b in digits.bytes() {
        v = v.saturating_mul(10).saturating_add((b - b'0') as i64);
    }
    // clamp: anything beyond this is either zero or out of range anyway
    let v = v.min(1_000_000);
    Some(if neg { -v } else { v })
}

fn ceil_div(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

/// 256-bit product of two i128 magnitudes as (hi, lo, negative).
fn wide_mul(a: i128, b: i128) -> (u128, u128, bool) {
    let neg = (a < 0) != (b < 0) && a != 0 && b != 0;
    let (x, y) = (a.unsigned_abs(), b.unsigned_abs());
    let mask = u64::MAX as u128;
    let (x1, x0) = (x >> 64, x & mask);
    let (y1, y0) = (y >> 64, y & mask);
    let p00 = x0 * y0;
    let p01 = x0 * y1;
    let p10 = x1 * y0;
    let p11 = x1 * y1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo, neg)
}

/// Compares `a * b` with `c * d` exactly.
fn cmp_products(a: i128, b: i128, c: i128, d: i128) -> Ordering {
    let (h1, l1, n1) = wide_mul(a, b);
    let (h2, l2, n2) = wide_mul(c, d);
    let zero1 = h1 == 0 && l1 == 0;
    let zero2 = h2 == 0 && l2 == 0;
    let s1 = if zero1 { 0 } else if n1 { -1 } else { 1 };
    let s2 = if zero2 { 0 } else if n2 { -1 } else { 1 };
    match s1.cmp(&s2) {
        Ordering::Equal => {}
        other => return other,
    }
    let mag = (h1, l1).cmp(&(h2, l2));
    if s1 < 0 {
        mag.reverse()
    } else {
        mag
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl AddAssign for Fixed {
    fn add_assign(&mut self, rhs: Fixed) {
        self.0 += rhs.0;
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 - rhs.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

impl Sum for Fixed {
    fn sum<I: Iterator<Item = Fixed>>(iter: I) -> Fixed {
        iter.fold(Fixed::ZERO, Add::add)
    }
}

impl FromStr for Fixed {
    type Err = NumError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fixed::parse(s)
    }
}

impl From<i64> for Fixed {
    fn from(v: i64) -> Self {
        Fixed::from_int(v)
    }
}

impl fmt::Display for Fixed {
    /// Always renders nine fractional digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let scale = SCALE as u128;
        write!(f, "{sign}{}.{:09}", abs / scale, abs % scale)
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fx(s: &str) -> Fixed {
        Fixed::parse(s).unwrap()
    }

    #[test]
    fn parses_plain_and_scientific() {
        assert_eq!(fx("4"), Fixed::from_int(4));
        assert_eq!(fx("-1"), Fixed::from_int(-1));
        assert_eq!(fx("0.5").raw(), 500_000_000);
        assert_eq!(fx("1e3"), Fixed::from_int(1000));
        assert_eq!(fx("2.5E-1").raw(), 250_000_000);
        assert_eq!(fx(".25").raw(), 250_000_000);
        assert_eq!(fx("7."), Fixed::from_int(7));
        assert_eq!(fx("0.000000000"), Fixed::ZERO);
        assert_eq!(fx("-0"), Fixed::ZERO);
    }

    #[test]
    fn rounds_beyond_nine_digits() {
        assert_eq!(fx("0.0000000004").raw(), 0);
        assert_eq!(fx("0.0000000005").raw(), 1);
        assert_eq!(fx("1.9999999999").raw(), 2 * SCALE);
        assert_eq!(fx("1e-30"), Fixed::ZERO);
        assert_eq!(fx("-0.0000000015").raw(), -2);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", ".", "1.2.3", "abc", "1e", "1e+", "--1", "1 2", "0x10", "NaN", "inf"] {
            assert!(Fixed::parse(bad).is_err(), "{bad:?} should fail");
        }
        assert!(matches!(Fixed::parse("1e15"), Err(NumError::OutOfRange(_))));
        assert!(matches!(Fixed::parse("1e999999999999999"), Err(NumError::OutOfRange(_))));
        assert!(Fixed::parse("999999999999999.9").is_ok());
    }

    #[test]
    fn display_has_nine_digits() {
        assert_eq!(Fixed::from_int(10).to_string(), "10.000000000");
        assert_eq!(fx("-0.5").to_string(), "-0.500000000");
        assert_eq!(Fixed::from_raw(1).to_string(), "0.000000001");
    }

    #[test]
    fn ratio_ceil_rounds_up() {
        assert_eq!(Fixed::ratio_ceil(Fixed::from_int(20), Fixed::from_int(10)), Fixed::from_int(2));
        assert_eq!(Fixed::ratio_ceil(Fixed::from_int(10), Fixed::from_int(6)).to_string(), "1.666666667");
        assert_eq!(Fixed::ratio_ceil(Fixed::ZERO, Fixed::from_int(3)), Fixed::ZERO);
    }

    #[test]
    fn scaled_comparison_is_exact() {
        let c = Fixed::ratio_ceil(Fixed::from_int(10), Fixed::from_int(6));
        assert_eq!(Fixed::from_int(10).cmp_scaled(c, Fixed::from_int(6)), Ordering::Less);
        let below = Fixed::from_raw(c.raw() - 1);
        assert_eq!(Fixed::from_int(10).cmp_scaled(below, Fixed::from_int(6)), Ordering::Greater);
        assert_eq!(Fixed::from_int(20).cmp_scaled(Fixed::from_int(2), Fixed::from_int(10)), Ordering::Equal);
    }

    #[test]
    fn products() {
        assert_eq!(fx("1.5").mul_round(fx("2")), fx("3"));
        assert_eq!(Fixed::from_raw(1).mul_ceil(fx("0.5")), Fixed::from_raw(1));
        assert_eq!(Fixed::from_raw(1).mul_round(fx("0.4")), Fixed::ZERO);
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(raw in -(MAX_LITERAL * SCALE - 1)..(MAX_LITERAL * SCALE)) {
            let v = Fixed::from_raw(raw);
            prop_assert_eq!(Fixed::parse(&v.to_string()).unwrap(), v);
        }

        #[test]
        fn cmp_scaled_matches_widened(a in -10i128.pow(20)..10i128.pow(20), c in 0i128..10i128.pow(14), b in -10i128.pow(20)..10i128.pow(20)) {
            let lhs = Fixed::from_raw(a).cmp_scaled(Fixed::from_raw(c), Fixed::from_raw(b));
            // reference via f64 only where it is unambiguous
            let l = a as f64 * SCALE as f64;
            let r = c as f64 * b as f64;
            if (l - r).abs() > 1e-6 * l.abs().max(r.abs()).max(1.0) {
                prop_assert_eq!(lhs, l.partial_cmp(&r).unwrap());
            }
        }
    }
}
