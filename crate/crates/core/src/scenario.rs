//! What-if analysis: parameter overrides, sweeps and threshold search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::econ::{MarketScaling, Valuation};
use crate::error::{Error, Result};
use crate::finance::RateSpec;
use crate::model::{Evaluation, Model};
use crate::region::DiagramSpec;

/// Replacement values for scenario parameters. Absent fields keep the
/// base model's value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOverride {
    #[serde(alias = "RM", skip_serializing_if = "Option::is_none")]
    pub market_revenue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub market_scaling: Option<MarketScaling>,
    #[serde(alias = "rate", skip_serializing_if = "Option::is_none")]
    pub annual_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifetime_years: Option<u32>,
    #[serde(alias = "B", skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(alias = "GS", skip_serializing_if = "Option::is_none")]
    pub shared_infrastructure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<Valuation>,
    #[serde(alias = "N0", skip_serializing_if = "Option::is_none")]
    pub reference_firms: Option<u32>,
}

impl ScenarioOverride {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Derives a scenario from `base`. A changed rate or lifetime re-annuitizes
/// every module from its capital breakdown; infrastructure-first
/// architectures then re-set `G^S` to the new shared annuity and buy from
/// the industry with what is left.
pub fn apply_override(base: &Model, ov: &ScenarioOverride) -> Result<Model> {
    if ov.is_empty() {
        return Err(Error::invalid("override", "at least one parameter must be overridden"));
    }
    let mut model = base.clone();
    if let Some(revenue) = ov.market_revenue {
        if !revenue.is_finite() || revenue < 0.0 {
            return Err(Error::invalid("market_revenue", "must be finite and >= 0"));
        }
        model.market.revenue = revenue;
    }
    if let Some(scaling) = ov.market_scaling {
        model.market.scaling = scaling;
    }
    if ov.annual_rate.is_some() || ov.lifetime_years.is_some() {
        let rate = RateSpec::new(
            ov.annual_rate.unwrap_or(base.rate.annual_rate()),
            ov.lifetime_years.unwrap_or(base.rate.lifetime_years()),
        )?;
        model = model.repriced(rate);
    }
    if let Some(budget) = ov.budget {
        model.budget = budget;
    }
    if let Some(shared) = ov.shared_infrastructure {
        model.shared_infrastructure = Some(shared);
    }
    if let Some(valuation) = ov.valuation {
        model.valuation = valuation;
    }
    if let Some(n0) = ov.reference_firms {
        model.reference_firms = n0;
    }
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "RM")]
    MarketRevenue,
    #[serde(rename = "rate")]
    Rate,
    #[serde(rename = "B")]
    Budget,
    #[serde(rename = "GS")]
    SharedInfrastructure,
}

impl SweepParameter {
    pub fn to_override(self, value: f64) -> ScenarioOverride {
        let mut ov = ScenarioOverride::default();
        match self {
            SweepParameter::MarketRevenue => ov.market_revenue = Some(value),
            SweepParameter::Rate => ov.annual_rate = Some(value),
            SweepParameter::Budget => ov.budget = Some(value),
            SweepParameter::SharedInfrastructure => ov.shared_infrastructure = Some(value),
        }
        ov
    }

    /// Convergence tolerance for threshold search.
    pub fn tolerance(self) -> f64 {
        match self {
            SweepParameter::Rate => 1e-4,
            _ => 0.1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::MarketRevenue => "RM",
            SweepParameter::Rate => "rate",
            SweepParameter::Budget => "B",
            SweepParameter::SharedInfrastructure => "GS",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RM" | "market_revenue" => Ok(Self::MarketRevenue),
            "rate" | "annual_rate" => Ok(Self::Rate),
            "B" | "budget" => Ok(Self::Budget),
            "GS" | "shared_infrastructure" => Ok(Self::SharedInfrastructure),
            other => Err(Error::invalid(
                "parameter",
                format!("unknown parameter \"{other}\"; expected one of RM, rate, B, GS"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub label: String,
    pub evaluation: Evaluation,
    pub diagram: DiagramSpec,
}

/// Evaluates a derived scenario.
pub fn evaluate_scenario(base: &Model, label: &str, ov: &ScenarioOverride) -> Result<ScenarioResult> {
    let model = apply_override(base, ov)?;
    let evaluation = model.evaluate()?;
    let points: Vec<_> = evaluation.architectures.iter().map(|a| a.point).collect();
    Ok(ScenarioResult {
        label: label.to_string(),
        diagram: model.diagram_spec(&points),
        evaluation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<ScenarioResult>,
}

/// One independent evaluation per value, in input order. Failures are
/// reported in place.
pub fn run_sweep(base: &Model, parameter: SweepParameter, values: &[f64]) -> Vec<SweepPoint> {
    values
        .iter()
        .map(|&value| SweepPoint {
            value,
            result: evaluate_scenario(base, &format!("{parameter}={value}"), &parameter.to_override(value)),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Raising the parameter adds competitors.
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub architecture: String,
    pub parameter: SweepParameter,
    pub target_firms: u32,
    /// Boundary value on the side where the target is sustained, within
    /// `tolerance` of the exact threshold.
    pub value: f64,
    pub tolerance: f64,
    pub direction: Direction,
    pub iterations: u32,
}

fn max_firms_at(base: &Model, architecture: &str, parameter: SweepParameter, value: f64) -> Result<u32> {
    let model = apply_override(base, &parameter.to_override(value))?;
    let arch = model
        .architectures
        .iter()
        .find(|a| a.name == architecture)
        .ok_or_else(|| Error::invalid("architecture", format!("no architecture named \"{architecture}\"")))?;
    Ok(model.evaluate_architecture(arch)?.classification.max_firms)
}

/// Bisects for the parameter value at which `architecture` starts (or, for
/// a decreasing parameter, stops) sustaining `target_firms` competitors.
/// The bracket ends must classify on opposite sides of the target.
pub fn find_threshold(
    base: &Model,
    architecture: &str,
    parameter: SweepParameter,
    target_firms: u32,
    bracket: (f64, f64),
) -> Result<Threshold> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Bracket(format!(
            "bracket must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    let sustained = |v: f64| max_firms_at(base, architecture, parameter, v).map(|n| n >= target_firms);
    let (at_lo, at_hi) = (sustained(lo)?, sustained(hi)?);
    if at_lo == at_hi {
        let state = if at_lo { "sustained" } else { "not sustained" };
        return Err(Error::Bracket(format!(
            "{target_firms} firms are {state} at both {parameter}={lo} and {parameter}={hi}"
        )));
    }
    let direction = if at_hi {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    let tolerance = parameter.tolerance();
    // `good` always sustains the target, `bad` never does
    let (mut good, mut bad) = if at_hi { (hi, lo) } else { (lo, hi) };
    let mut iterations = 0;
    while (good - bad).abs() > tolerance {
        let mid = 0.5 * (good + bad);
        if sustained(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
        iterations += 1;
    }
    Ok(Threshold {
        architecture: architecture.to_string(),
        parameter,
        target_firms,
        value: good,
        tolerance,
        direction,
        iterations,
    })
}
