//! A resolved program: cost library priced at a rate, market and budget
//! conditions, and the architectures under comparison.

use serde::{Deserialize, Serialize};

use crate::cost::{per_firm_gross_cost, ArchitectureCostSpec};
use crate::econ::{
    check_budget, dominance_margin, industry_account, BudgetAllocation, IndustryAccount, IndustryScenario,
    MarketDemand, Valuation,
};
use crate::error::{Error, Result};
use crate::finance::RateSpec;
use crate::region::{
    architecture_coordinates, build_region, classify_architecture, AxisRange, Classification, CompetitionRegion,
    DiagramSpec, LabeledPoint,
};
use crate::scenario::ScenarioOverride;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AllocationRule {
    /// Shared infrastructure first (at the shared modules' annuity), then
    /// transfers; the remainder of the budget buys from the industry.
    InfraFirst { direct_transfers: f64 },
    Explicit {
        direct_purchases: f64,
        direct_transfers: f64,
        shared_infrastructure: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchitectureCost {
    /// Derived from module cost breakdowns.
    Modules(ArchitectureCostSpec),
    /// Gross cost per firm given directly ($M/year).
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub name: String,
    pub cost: ArchitectureCost,
    pub allocation: AllocationRule,
}

impl Architecture {
    pub fn gross_cost_per_firm(&self) -> f64 {
        match &self.cost {
            ArchitectureCost::Modules(spec) => per_firm_gross_cost(spec).amount(),
            ArchitectureCost::Fixed(x) => *x,
        }
    }

    fn shared_annuity(&self) -> f64 {
        match &self.cost {
            ArchitectureCost::Modules(spec) => spec.shared_annuity().amount(),
            ArchitectureCost::Fixed(_) => 0.0,
        }
    }

    fn repriced(&self, rate: RateSpec) -> Self {
        let cost = match &self.cost {
            ArchitectureCost::Modules(spec) => ArchitectureCost::Modules(spec.repriced(rate)),
            fixed => fixed.clone(),
        };
        Self {
            name: self.name.clone(),
            cost,
            allocation: self.allocation.clone(),
        }
    }
}

/// Plotting window; when absent it is derived from the budget and the
/// architectures' own coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramWindow {
    pub purchases_range: AxisRange,
    pub cost_range: AxisRange,
    pub resolution: [usize; 2],
}

pub const DEFAULT_RESOLUTION: [usize; 2] = [151, 151];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub name: String,
    pub base_year: String,
    pub rate: RateSpec,
    pub market: MarketDemand,
    pub budget: f64,
    pub reference_firms: u32,
    pub max_firms: u32,
    pub valuation: Valuation,
    /// Explicit `G^S` replacing every architecture's allocation rule value.
    pub shared_infrastructure: Option<f64>,
    pub diagram: Option<DiagramWindow>,
    pub architectures: Vec<Architecture>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub rg: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureResult {
    pub name: String,
    pub allocation: BudgetAllocation,
    pub scenario: IndustryScenario,
    pub account: IndustryAccount,
    pub point: PlanePoint,
    pub classification: Classification,
    pub dominance_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub name: String,
    pub parameters: ScenarioOverride,
    pub architectures: Vec<ArchitectureResult>,
}

impl Evaluation {
    pub fn architecture(&self, name: &str) -> Option<&ArchitectureResult> {
        self.architectures.iter().find(|a| a.name == name)
    }
}

impl Model {
    pub fn scenario_for(&self, arch: &Architecture) -> IndustryScenario {
        IndustryScenario {
            reference_firms: self.reference_firms,
            gross_cost_per_firm: arch.gross_cost_per_firm(),
            market: self.market,
        }
    }

    /// Budget split for an architecture after its allocation rule.
    pub fn allocation_for(&self, arch: &Architecture) -> Result<BudgetAllocation> {
        let path = format!("architectures.{}.allocation", arch.name);
        let alloc = match arch.allocation {
            AllocationRule::InfraFirst { direct_transfers } => {
                let shared = self.shared_infrastructure.unwrap_or_else(|| arch.shared_annuity());
                let purchases = self.budget - shared - direct_transfers;
                if purchases < 0.0 {
                    return Err(Error::Infeasible {
                        constraint: "budget constraint R^G + G^D + G^S <= B".into(),
                        detail: format!(
                            "{path}: G^S ({shared:.3}) + G^D ({direct_transfers:.3}) exceeds B ({:.3}), leaving R^G = {purchases:.3}",
                            self.budget
                        ),
                    });
                }
                BudgetAllocation::new(self.budget, purchases, direct_transfers, shared)
            }
            AllocationRule::Explicit {
                direct_purchases,
                direct_transfers,
                shared_infrastructure,
            } => match self.shared_infrastructure {
                Some(shared) => {
                    let purchases = self.budget - shared - direct_transfers;
                    if purchases < 0.0 {
                        return Err(Error::Infeasible {
                            constraint: "budget constraint R^G + G^D + G^S <= B".into(),
                            detail: format!(
                                "{path}: G^S ({shared:.3}) + G^D ({direct_transfers:.3}) exceeds B ({:.3})",
                                self.budget
                            ),
                        });
                    }
                    BudgetAllocation::new(self.budget, purchases, direct_transfers, shared)
                }
                None => BudgetAllocation::new(
                    self.budget,
                    direct_purchases,
                    direct_transfers,
                    shared_infrastructure,
                ),
            },
        }
        .map_err(|e| match e {
            Error::Invalid { path: p, reason } => Error::Invalid {
                path: format!("{path}.{p}"),
                reason,
            },
            other => other,
        })?;
        let verdict = check_budget(&alloc);
        if !verdict.feasible {
            return Err(Error::Infeasible {
                constraint: "budget constraint R^G + G^D + G^S <= B".into(),
                detail: format!(
                    "{path}: spending {:.3} exceeds budget {:.3} by {:.3}",
                    alloc.spent(),
                    alloc.budget,
                    -verdict.slack
                ),
            });
        }
        Ok(alloc)
    }

    /// Checks every invariant that does not depend on a particular architecture.
    pub fn validate(&self) -> Result<()> {
        if !self.budget.is_finite() || self.budget < 0.0 {
            return Err(Error::invalid("program.budget", "must be finite and >= 0"));
        }
        if self.max_firms < 1 {
            return Err(Error::invalid("program.max_firms", "must be at least 1"));
        }
        if let Some(g) = self.shared_infrastructure {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::invalid("shared_infrastructure", "must be finite and >= 0"));
            }
        }
        self.valuation.validate()?;
        if self.architectures.is_empty() {
            return Err(Error::invalid("architectures", "at least one architecture is required"));
        }
        for arch in &self.architectures {
            self.scenario_for(arch).validate().map_err(|e| match e {
                Error::Invalid { path, reason } => Error::Invalid {
                    path: format!("architectures.{}.{path}", arch.name),
                    reason,
                },
                other => other,
            })?;
            self.allocation_for(arch)?;
        }
        Ok(())
    }

    pub fn evaluate_architecture(&self, arch: &Architecture) -> Result<ArchitectureResult> {
        let alloc = self.allocation_for(arch)?;
        let scenario = self.scenario_for(arch);
        let account = industry_account(&alloc, &scenario, self.reference_firms, &self.valuation)?;
        let (rg, cost) = architecture_coordinates(&alloc, &scenario, &self.valuation);
        Ok(ArchitectureResult {
            name: arch.name.clone(),
            allocation: alloc,
            scenario,
            account,
            point: PlanePoint { rg, cost },
            classification: classify_architecture(&alloc, &scenario, &self.valuation, self.max_firms),
            dominance_margin: dominance_margin(alloc.shared_infrastructure, self.reference_firms, &self.valuation)?,
        })
    }

    pub fn evaluate(&self) -> Result<Evaluation> {
        let architectures = self
            .architectures
            .iter()
            .map(|a| self.evaluate_architecture(a))
            .collect::<Result<_>>()?;
        Ok(Evaluation {
            name: self.name.clone(),
            parameters: self.resolved_parameters(),
            architectures,
        })
    }

    /// Every scenario parameter as an override; applying it to the base
    /// model reproduces this model's results.
    pub fn resolved_parameters(&self) -> ScenarioOverride {
        ScenarioOverride {
            market_revenue: Some(self.market.revenue),
            market_scaling: Some(self.market.scaling),
            annual_rate: Some(self.rate.annual_rate()),
            lifetime_years: Some(self.rate.lifetime_years()),
            budget: Some(self.budget),
            shared_infrastructure: self.shared_infrastructure,
            valuation: Some(self.valuation),
            reference_firms: Some(self.reference_firms),
        }
    }

    pub fn diagram_spec(&self, points: &[PlanePoint]) -> DiagramSpec {
        let window = self.diagram.unwrap_or_else(|| {
            let max_rg = points.iter().map(|p| p.rg).fold(self.budget, f64::max);
            let max_cost = points
                .iter()
                .map(|p| p.cost)
                .chain(
                    self.architectures
                        .iter()
                        .map(|a| f64::from(self.reference_firms) * a.gross_cost_per_firm()),
                )
                .fold(0.0, f64::max);
            DiagramWindow {
                purchases_range: AxisRange::new(0.0, (1.5 * max_rg).max(1.0)),
                cost_range: AxisRange::new(0.0, (1.25 * max_cost).max(1.0)),
                resolution: DEFAULT_RESOLUTION,
            }
        });
        DiagramSpec {
            market: self.market,
            reference_firms: self.reference_firms,
            max_firms: self.max_firms,
            purchases_range: window.purchases_range,
            cost_range: window.cost_range,
            resolution: window.resolution,
        }
    }

    /// Diagram with every architecture placed at its coordinates.
    pub fn region(&self) -> Result<CompetitionRegion> {
        let eval = self.evaluate()?;
        let points: Vec<PlanePoint> = eval.architectures.iter().map(|a| a.point).collect();
        let labeled: Vec<LabeledPoint> = eval
            .architectures
            .iter()
            .map(|a| LabeledPoint {
                label: a.name.clone(),
                rg: a.point.rg,
                cost: a.point.cost,
            })
            .collect();
        build_region(&self.diagram_spec(&points), &labeled)
    }

    pub(crate) fn repriced(&self, rate: RateSpec) -> Self {
        Self {
            rate,
            architectures: self.architectures.iter().map(|a| a.repriced(rate)).collect(),
            ..self.clone()
        }
    }
}
