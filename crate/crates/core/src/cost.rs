//! Roll-up of itemized capital and operations costs into annual figures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finance::{annuitize, MoneyLump, MoneyPerYear, RateSpec};

/// One line of a cost breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostElement {
    pub name: String,
    pub capital: MoneyLump,
    pub ops_per_year: MoneyPerYear,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl CostElement {
    pub fn new(name: impl Into<String>, capital: f64, ops_per_year: f64) -> Result<Self> {
        let name = name.into();
        let capital = MoneyLump::new(capital)
            .map_err(|_| Error::invalid(format!("{name}.capital"), "must be finite and >= 0"))?;
        if !ops_per_year.is_finite() || ops_per_year < 0.0 {
            return Err(Error::invalid(
                format!("{name}.ops_per_year"),
                "must be finite and >= 0",
            ));
        }
        Ok(Self {
            name,
            capital,
            ops_per_year: MoneyPerYear::new(ops_per_year)?,
            notes: String::new(),
        })
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }
}

/// A system module (e.g. a station core) with its derived annual costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemModuleCost {
    pub elements: Vec<CostElement>,
    pub integration_fraction: f64,
    pub rate: RateSpec,
    /// Element capital including the integration surcharge.
    pub construction_capital: MoneyLump,
    pub construction_annuity: MoneyPerYear,
    pub ops_annuity: MoneyPerYear,
    pub total_annuity: MoneyPerYear,
}

impl SystemModuleCost {
    /// Same breakdown priced at a different rate or lifetime.
    pub fn repriced(&self, rate: RateSpec) -> Self {
        rollup_unchecked(self.elements.clone(), self.integration_fraction, rate)
    }
}

/// Sums a module's elements. The integration surcharge applies to capital only.
pub fn rollup_module(
    elements: Vec<CostElement>,
    integration_fraction: f64,
    rate: RateSpec,
) -> Result<SystemModuleCost> {
    if !integration_fraction.is_finite() || integration_fraction < 0.0 {
        return Err(Error::invalid(
            "integration_fraction",
            format!("must be >= 0, got {integration_fraction}"),
        ));
    }
    Ok(rollup_unchecked(elements, integration_fraction, rate))
}

fn rollup_unchecked(elements: Vec<CostElement>, integration_fraction: f64, rate: RateSpec) -> SystemModuleCost {
    let element_capital: f64 = elements.iter().map(|e| e.capital.amount()).sum();
    // non-negative by construction of the elements and the fraction check
    let construction_capital =
        MoneyLump::new(element_capital * (1.0 + integration_fraction)).unwrap_or(MoneyLump::ZERO);
    let construction_annuity = annuitize(construction_capital, rate);
    let ops_annuity: MoneyPerYear = elements.iter().map(|e| e.ops_per_year).sum();
    SystemModuleCost {
        elements,
        integration_fraction,
        rate,
        construction_capital,
        construction_annuity,
        ops_annuity,
        total_annuity: construction_annuity + ops_annuity,
    }
}

/// Scales a base operations budget by a usage share in [0, 1], e.g. a
/// module's fraction of total habitable volume.
pub fn scale_ops_by_share(base_ops: MoneyPerYear, share: f64) -> Result<MoneyPerYear> {
    if !(0.0..=1.0).contains(&share) {
        return Err(Error::invalid("ops_share", format!("must lie in [0, 1], got {share}")));
    }
    Ok(base_ops * share)
}

/// Modules each firm builds itself plus modules that may be provided as
/// shared infrastructure.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ArchitectureCostSpec {
    pub per_firm_modules: Vec<SystemModuleCost>,
    pub shared_modules: Vec<SystemModuleCost>,
}

impl ArchitectureCostSpec {
    pub fn shared_annuity(&self) -> MoneyPerYear {
        self.shared_modules.iter().map(|m| m.total_annuity).sum()
    }

    pub fn repriced(&self, rate: RateSpec) -> Self {
        Self {
            per_firm_modules: self.per_firm_modules.iter().map(|m| m.repriced(rate)).collect(),
            shared_modules: self.shared_modules.iter().map(|m| m.repriced(rate)).collect(),
        }
    }
}

/// Gross annual cost per firm. Shared modules still count: they are
/// functions every firm needs, whoever pays for them.
pub fn per_firm_gross_cost(spec: &ArchitectureCostSpec) -> MoneyPerYear {
    spec.per_firm_modules
        .iter()
        .chain(&spec.shared_modules)
        .map(|m| m.total_annuity)
        .sum()
}
