//! Exact numeric types shared by every module.
//!
//! Utilities are fixed-point values with six fractional digits stored in a
//! `u128`, so sums over large databases never lose precision. Ratio-valued
//! measures (confidence, bond, lift) and their thresholds are exact
//! fractions; every threshold comparison is a cross-multiplication.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Exact non-negative fraction used for confidence, bond and lift.
pub type Fraction = Ratio<u64>;

/// Number of fractional decimal digits a [`Utility`] can hold.
pub const UTILITY_DECIMALS: u32 = 6;
const SCALE: u128 = 10u128.pow(UTILITY_DECIMALS);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("`{0}` is not a non-negative decimal number")]
    Invalid(String),
    #[error("`{0}` has more than {UTILITY_DECIMALS} fractional digits")]
    TooPrecise(String),
    #[error("`{0}` is out of range")]
    Overflow(String),
}

/// Non-negative utility (currency units) with six exact fractional digits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Utility(u128);

impl Utility {
    pub const ZERO: Utility = Utility(0);
    pub const MAX: Utility = Utility(u128::MAX);

    pub fn from_units(units: u64) -> Self {
        Utility(units as u128 * SCALE)
    }

    pub fn from_micros(micros: u128) -> Self {
        Utility(micros)
    }

    pub fn micros(self) -> u128 {
        self.0
    }

    /// Utility of `quantity` items at this unit price.
    pub fn times(self, quantity: u32) -> Utility {
        Utility(self.0 * quantity as u128)
    }

    pub fn saturating_sub(self, rhs: Utility) -> Utility {
        Utility(self.0.saturating_sub(rhs.0))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    /// Parses a threshold. Unlike [`FromStr`], digits beyond the sixth
    /// fractional place are accepted and rounded up, which keeps
    /// `u >= threshold` exact for every representable `u`.
    pub fn parse_threshold(text: &str) -> Result<Utility, NumberError> {
        let (int, frac) = split_decimal(text)?;
        let (kept, rest) = frac.split_at(frac.len().min(UTILITY_DECIMALS as usize));
        let mut micros = to_micros(text, int, kept)?;
        if rest.bytes().any(|b| b != b'0') {
            micros = micros
                .checked_add(1)
                .ok_or_else(|| NumberError::Overflow(text.to_string()))?;
        }
        Ok(Utility(micros))
    }
}

impl FromStr for Utility {
    type Err = NumberError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (int, frac) = split_decimal(text)?;
        if frac.len() > UTILITY_DECIMALS as usize {
            return Err(NumberError::TooPrecise(text.to_string()));
        }
        to_micros(text, int, &frac).map(Utility)
    }
}

fn to_micros(text: &str, int: u128, frac: &str) -> Result<u128, NumberError> {
    let overflow = || NumberError::Overflow(text.to_string());
    let mut frac_micros: u128 = 0;
    for (k, digit) in frac.bytes().enumerate() {
        frac_micros += (digit - b'0') as u128 * 10u128.pow(UTILITY_DECIMALS - 1 - k as u32);
    }
    int.checked_mul(SCALE)
        .and_then(|v| v.checked_add(frac_micros))
        .ok_or_else(overflow)
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fixed(f, self.0 / SCALE, self.0 % SCALE)
    }
}

impl Serialize for Utility {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add for Utility {
    type Output = Utility;
    fn add(self, rhs: Utility) -> Utility {
        Utility(self.0 + rhs.0)
    }
}

impl AddAssign for Utility {
    fn add_assign(&mut self, rhs: Utility) {
        self.0 += rhs.0;
    }
}

impl Sub for Utility {
    type Output = Utility;
    fn sub(self, rhs: Utility) -> Utility {
        Utility(self.0 - rhs.0)
    }
}

impl SubAssign for Utility {
    fn sub_assign(&mut self, rhs: Utility) {
        self.0 -= rhs.0;
    }
}

impl Sum for Utility {
    fn sum<I: Iterator<Item = Utility>>(iter: I) -> Utility {
        iter.fold(Utility::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Utility> for Utility {
    fn sum<I: Iterator<Item = &'a Utility>>(iter: I) -> Utility {
        iter.copied().sum()
    }
}

/// Parses a non-negative decimal (`0.7`, `1.25`, `3`, `1e-2`) into an exact
/// fraction.
pub fn parse_fraction(text: &str) -> Result<Fraction, NumberError> {
    let (int, frac) = split_decimal(text)?;
    let overflow = || NumberError::Overflow(text.to_string());
    if frac.len() > 18 {
        return Err(NumberError::TooPrecise(text.to_string()));
    }
    let denom = 10u64.pow(frac.len() as u32);
    let frac_value: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| overflow())? };
    let int: u64 = int.try_into().map_err(|_| overflow())?;
    let numer = int
        .checked_mul(denom)
        .and_then(|v| v.checked_add(frac_value))
        .ok_or_else(overflow)?;
    Ok(Fraction::new(numer, denom))
}

/// Converts a float to the fraction its shortest decimal rendering denotes,
/// so `0.7` becomes exactly 7/10.
pub fn fraction_from_f64(value: f64) -> Result<Fraction, NumberError> {
    parse_fraction(&format!("{value}"))
}

/// `numer / denom >= threshold`, exactly. A zero denominator never passes.
pub fn ratio_at_least(numer: u64, denom: u64, threshold: &Fraction) -> bool {
    if denom == 0 {
        return false;
    }
    numer as u128 * *threshold.denom() as u128 >= *threshold.numer() as u128 * denom as u128
}

/// Renders a fraction with at most six fractional digits (rounded half up),
/// trailing zeros trimmed.
pub fn format_fraction(value: &Fraction) -> String {
    let numer = *value.numer() as u128;
    let denom = *value.denom() as u128;
    let scaled = (numer * SCALE * 2 + denom) / (denom * 2);
    let mut out = String::new();
    let _ = write_fixed_into(&mut out, scaled / SCALE, scaled % SCALE);
    out
}

pub fn fraction_to_f64(value: &Fraction) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

fn write_fixed(f: &mut fmt::Formatter<'_>, int: u128, frac: u128) -> fmt::Result {
    let mut out = String::new();
    write_fixed_into(&mut out, int, frac)?;
    f.write_str(&out)
}

fn write_fixed_into(out: &mut impl fmt::Write, int: u128, frac: u128) -> fmt::Result {
    if frac == 0 {
        return write!(out, "{int}");
    }
    let digits = format!("{frac:06}");
    write!(out, "{int}.{}", digits.trim_end_matches('0'))
}

/// Splits `text` into its integer value and fractional digit string.
/// Scientific notation goes through `f64`'s shortest round-trip rendering.
fn split_decimal(text: &str) -> Result<(u128, String), NumberError> {
    let invalid = || NumberError::Invalid(text.to_string());
    let trimmed = text.trim();
    if trimmed.contains(['e', 'E']) {
        let value: f64 = trimmed.parse().map_err(|_| invalid())?;
        if !value.is_finite() || value < 0.0 {
            return Err(invalid());
        }
        return split_decimal(&format!("{value}"));
    }
    let (int_part, frac_part) = match trimmed.split_once('.') {
        Some((i, f)) => (i, f),
        None => (trimmed, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) || (trimmed.contains('.') && frac_part.is_empty()) {
        return Err(invalid());
    }
    let int = if int_part.is_empty() {
        0
    } else {
        int_part
            .parse::<u128>()
            .map_err(|_| NumberError::Overflow(text.to_string()))?
    };
    Ok((int, frac_part.to_string()))
}
