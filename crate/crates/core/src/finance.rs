//! Annuity arithmetic.
//!
//! Every monetary quantity in this crate is expressed in millions of
//! constant base-year dollars. Lump sums (capital) are converted to
//! constant end-of-year payments over an asset lifetime at the investor's
//! required rate of return, compounded annually.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Investor-required annual rate of return and asset lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSpec {
    annual_rate: f64,
    lifetime_years: u32,
}

impl RateSpec {
    pub fn new(annual_rate: f64, lifetime_years: u32) -> Result<Self> {
        if !annual_rate.is_finite() || annual_rate < 0.0 {
            return Err(Error::invalid(
                "rate.annual_rate",
                format!("must be a finite fraction >= 0, got {annual_rate}"),
            ));
        }
        if lifetime_years < 1 {
            return Err(Error::invalid("rate.lifetime_years", "must be at least 1 year"));
        }
        Ok(Self {
            annual_rate,
            lifetime_years,
        })
    }

    pub fn annual_rate(&self) -> f64 {
        self.annual_rate
    }

    pub fn lifetime_years(&self) -> u32 {
        self.lifetime_years
    }

    /// Present value of one unit paid at the end of each year of the lifetime.
    pub fn annuity_pv_factor(&self) -> f64 {
        let years = f64::from(self.lifetime_years);
        if self.annual_rate == 0.0 {
            return years;
        }
        // -expm1(-T * ln(1 + r)) == 1 - (1 + r)^-T without cancellation at tiny r
        let discount = -(-years * self.annual_rate.ln_1p()).exp_m1();
        discount / self.annual_rate
    }
}

/// A lump-sum amount, e.g. a construction cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoneyLump(f64);

impl MoneyLump {
    pub const ZERO: Self = Self(0.0);

    pub fn new(amount: f64) -> Result<Self> {
        if !amount.is_finite() || amount < 0.0 {
            return Err(Error::invalid(
                "capital",
                format!("lump sums must be finite and non-negative, got {amount}"),
            ));
        }
        Ok(Self(amount))
    }

    pub fn amount(self) -> f64 {
        self.0
    }
}

impl Add for MoneyLump {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sum for MoneyLump {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for MoneyLump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${:.0}M", self.0)
    }
}

/// An annual flow. Sign is unrestricted since profits may be negative.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoneyPerYear(f64);

impl MoneyPerYear {
    pub const ZERO: Self = Self(0.0);

    pub fn new(amount: f64) -> Result<Self> {
        if !amount.is_finite() {
            return Err(Error::invalid("amount", "annual amounts must be finite"));
        }
        Ok(Self(amount))
    }

    pub fn amount(self) -> f64 {
        self.0
    }
}

impl Add for MoneyPerYear {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl AddAssign for MoneyPerYear {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for MoneyPerYear {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for MoneyPerYear {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for MoneyPerYear {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * rhs)
    }
}

impl Sum for MoneyPerYear {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for MoneyPerYear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${:.0}M/year", self.0)
    }
}

/// Constant end-of-year payment equivalent to `capital` over the lifetime.
pub fn annuitize(capital: MoneyLump, rate: RateSpec) -> MoneyPerYear {
    MoneyPerYear(capital.0 / rate.annuity_pv_factor())
}

/// Lump sum whose annuity at `rate` is `payment`; inverse of [`annuitize`].
pub fn present_value_of_annuity(payment: MoneyPerYear, rate: RateSpec) -> MoneyLump {
    MoneyLump(payment.0 * rate.annuity_pv_factor())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rate(r: f64, t: u32) -> RateSpec {
        RateSpec::new(r, t).unwrap()
    }

    fn lump(c: f64) -> MoneyLump {
        MoneyLump::new(c).unwrap()
    }

    // Oracle: sum of discounted end-of-year payments.
    fn schedule_factor(r: f64, t: u32) -> f64 {
        (1..=t).map(|k| (1.0 + r).powi(-(k as i32))).sum()
    }

    #[test]
    fn published_annuities() {
        let core = annuitize(lump(2688.0), rate(0.05, 15)).amount();
        let habitat = annuitize(lump(1934.0), rate(0.05, 15)).amount();
        assert!((core - 258.97).abs() < 0.01, "{core}");
        assert!((habitat - 186.33).abs() < 0.01, "{habitat}");
    }

    #[test]
    fn ten_percent_matches_schedule_sum() {
        let got = annuitize(lump(2688.0), rate(0.10, 15)).amount();
        let oracle = 2688.0 / schedule_factor(0.10, 15);
        assert!((got - oracle).abs() < 1e-9);
        assert!((got - 353.4).abs() < 0.01);
    }

    #[test]
    fn zero_rate_is_straight_line() {
        assert_eq!(annuitize(lump(1500.0), rate(0.0, 15)).amount(), 100.0);
        assert_eq!(
            present_value_of_annuity(MoneyPerYear::new(100.0).unwrap(), rate(0.0, 15)).amount(),
            1500.0
        );
    }

    #[test]
    fn present_value_inverts() {
        let pv = present_value_of_annuity(MoneyPerYear::new(258.97).unwrap(), rate(0.05, 15));
        assert!((pv.amount() - 2688.0).abs() / 2688.0 < 1e-4);
        let zero = present_value_of_annuity(MoneyPerYear::ZERO, rate(0.07, 30));
        assert_eq!(zero.amount(), 0.0);
    }

    #[test]
    fn near_zero_rate_is_continuous() {
        let c = 1500.0;
        let got = annuitize(lump(c), rate(1e-9, 15)).amount();
        assert!((got - c / 15.0).abs() < 1e-4 * c / 15.0);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(RateSpec::new(-0.01, 15).is_err());
        assert!(RateSpec::new(f64::NAN, 15).is_err());
        assert!(RateSpec::new(0.05, 0).is_err());
        assert!(MoneyLump::new(-1.0).is_err());
        assert!(MoneyLump::new(f64::INFINITY).is_err());
        assert!(MoneyPerYear::new(-5.0).is_ok());
    }
}
