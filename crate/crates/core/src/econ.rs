//! Program budget, shared-infrastructure valuation and firm/industry
//! profit accounting under symmetric firms with equal shares.
//!
//! A program with annual budget `B` spends it on direct purchases from the
//! industry (`R^G`, booked as firm revenue), direct transfers (`G^D`, which
//! reduce net cost) and shared infrastructure (`G^S`). Shared
//! infrastructure yields a non-rival benefit `f(G^S)` that every firm
//! receives in full, so a dollar of it lowers every firm's cost while a
//! dollar of purchases or transfers is split `N` ways.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Industry-level split of an annual program budget ($M/year).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetAllocation {
    pub budget: f64,
    pub direct_purchases: f64,
    pub direct_transfers: f64,
    pub shared_infrastructure: f64,
}

impl BudgetAllocation {
    pub fn new(budget: f64, direct_purchases: f64, direct_transfers: f64, shared_infrastructure: f64) -> Result<Self> {
        for (path, v) in [
            ("budget", budget),
            ("direct_purchases", direct_purchases),
            ("direct_transfers", direct_transfers),
            ("shared_infrastructure", shared_infrastructure),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(path, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self {
            budget,
            direct_purchases,
            direct_transfers,
            shared_infrastructure,
        })
    }

    pub fn spent(&self) -> f64 {
        self.direct_purchases + self.direct_transfers + self.shared_infrastructure
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetCheck {
    pub feasible: bool,
    pub slack: f64,
}

/// Budget constraint `R^G + G^D + G^S <= B`. Infeasibility is a verdict.
pub fn check_budget(alloc: &BudgetAllocation) -> BudgetCheck {
    let slack = alloc.budget - alloc.spent();
    BudgetCheck {
        feasible: slack >= 0.0,
        slack,
    }
}

/// How firms value shared-infrastructure spending, per firm per year.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum Valuation {
    /// Every dollar of infrastructure is worth a dollar to each firm.
    #[default]
    AtCost,
    /// At cost up to the cost of the shareable elements, worthless beyond.
    CappedLinear { cap: f64 },
    /// `cap * (1 - exp(-G / cap))`: unit slope at zero, saturating at `cap`.
    Saturating { cap: f64 },
}

impl Valuation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Valuation::AtCost => Ok(()),
            Valuation::CappedLinear { cap } if cap.is_finite() && cap >= 0.0 => Ok(()),
            Valuation::Saturating { cap } if cap.is_finite() && cap > 0.0 => Ok(()),
            _ => Err(Error::invalid("valuation.cap", "must be finite and positive")),
        }
    }

    pub fn value(&self, spending: f64) -> f64 {
        match *self {
            Valuation::AtCost => spending,
            Valuation::CappedLinear { cap } => spending.min(cap),
            Valuation::Saturating { cap } => -cap * (-spending / cap).exp_m1(),
        }
    }

    pub fn derivative(&self, spending: f64) -> f64 {
        match *self {
            Valuation::AtCost => 1.0,
            Valuation::CappedLinear { cap } => {
                if spending < cap {
                    1.0
                } else {
                    0.0
                }
            }
            Valuation::Saturating { cap } => (-spending / cap).exp(),
        }
    }
}

/// How non-government demand responds to the number of firms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketScaling {
    /// A fixed industry-wide pool split equally among the firms.
    #[default]
    IndustryFixed,
    /// Each firm earns the same amount regardless of how many compete.
    PerFirmFixed,
}

/// Non-government demand. `revenue` is the industry pool under
/// [`MarketScaling::IndustryFixed`] and the per-firm amount otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketDemand {
    pub revenue: f64,
    pub scaling: MarketScaling,
}

impl MarketDemand {
    pub fn industry_fixed(revenue: f64) -> Self {
        Self {
            revenue,
            scaling: MarketScaling::IndustryFixed,
        }
    }

    pub fn per_firm_fixed(revenue: f64) -> Self {
        Self {
            revenue,
            scaling: MarketScaling::PerFirmFixed,
        }
    }

    /// Total market revenue of an industry with `firms` members.
    pub fn industry_revenue(&self, firms: u32) -> f64 {
        match self.scaling {
            MarketScaling::IndustryFixed => self.revenue,
            MarketScaling::PerFirmFixed => self.revenue * f64::from(firms),
        }
    }

    pub fn per_firm_revenue(&self, firms: u32) -> f64 {
        match self.scaling {
            MarketScaling::IndustryFixed => self.revenue / f64::from(firms),
            MarketScaling::PerFirmFixed => self.revenue,
        }
    }
}

/// Cost and demand conditions for a symmetric industry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndustryScenario {
    /// Desired number of competitors; also the diagram's reference size.
    pub reference_firms: u32,
    /// Gross annual cost of one firm, `X_i`.
    pub gross_cost_per_firm: f64,
    pub market: MarketDemand,
}

impl IndustryScenario {
    pub fn validate(&self) -> Result<()> {
        if self.reference_firms < 1 {
            return Err(Error::invalid("reference_firms", "must be at least 1"));
        }
        if !self.gross_cost_per_firm.is_finite() || self.gross_cost_per_firm < 0.0 {
            return Err(Error::invalid("gross_cost_per_firm", "must be finite and >= 0"));
        }
        if !self.market.revenue.is_finite() || self.market.revenue < 0.0 {
            return Err(Error::invalid("market.revenue", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// One firm's annual income statement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirmLedger {
    pub revenue_gov: f64,
    pub revenue_market: f64,
    pub transfer: f64,
    pub infra_benefit: f64,
    pub gross_cost: f64,
    pub net_cost: f64,
    pub profit: f64,
}

impl FirmLedger {
    pub fn revenue(&self) -> f64 {
        self.revenue_gov + self.revenue_market
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndustryAccount {
    pub firms: u32,
    pub total_revenue: f64,
    pub total_cost: f64,
    pub total_profit: f64,
    pub per_firm: FirmLedger,
}

fn require_firms(firms: u32) -> Result<()> {
    if firms == 0 {
        return Err(Error::Domain("industry size must be at least one firm".into()));
    }
    Ok(())
}

/// Income statement of each of `firms` identical firms.
pub fn firm_ledger(
    alloc: &BudgetAllocation,
    scenario: &IndustryScenario,
    firms: u32,
    valuation: &Valuation,
) -> Result<FirmLedger> {
    require_firms(firms)?;
    let n = f64::from(firms);
    let revenue_gov = alloc.direct_purchases / n;
    let revenue_market = scenario.market.per_firm_revenue(firms);
    let transfer = alloc.direct_transfers / n;
    let infra_benefit = valuation.value(alloc.shared_infrastructure);
    let gross_cost = scenario.gross_cost_per_firm;
    let net_cost = gross_cost - infra_benefit - transfer;
    Ok(FirmLedger {
        revenue_gov,
        revenue_market,
        transfer,
        infra_benefit,
        gross_cost,
        net_cost,
        profit: revenue_gov + revenue_market - net_cost,
    })
}

/// Industry totals for `firms` identical firms: `C = X - N*Y^G - G^D`.
pub fn industry_account(
    alloc: &BudgetAllocation,
    scenario: &IndustryScenario,
    firms: u32,
    valuation: &Valuation,
) -> Result<IndustryAccount> {
    let per_firm = firm_ledger(alloc, scenario, firms, valuation)?;
    let n = f64::from(firms);
    let total_revenue = alloc.direct_purchases + scenario.market.industry_revenue(firms);
    let total_cost = n * per_firm.gross_cost - n * per_firm.infra_benefit - alloc.direct_transfers;
    Ok(IndustryAccount {
        firms,
        total_revenue,
        total_cost,
        total_profit: total_revenue - total_cost,
        per_firm,
    })
}

/// `f'(G^S) - 1/N`. Positive when a marginal dollar of shared
/// infrastructure raises each firm's profit more than a marginal dollar of
/// direct purchases or transfers.
pub fn dominance_margin(shared_infrastructure: f64, firms: u32, valuation: &Valuation) -> Result<f64> {
    require_firms(firms)?;
    Ok(valuation.derivative(shared_infrastructure) - 1.0 / f64::from(firms))
}

/// Smallest industry-level `R^G + G^D` keeping all `firms` firms at
/// non-negative profit for the given infrastructure spending.
pub fn min_sustainable_support(
    scenario: &IndustryScenario,
    firms: u32,
    valuation: &Valuation,
    shared_infrastructure: f64,
) -> Result<f64> {
    require_firms(firms)?;
    let n = f64::from(firms);
    let uncovered = n * (scenario.gross_cost_per_firm - valuation.value(shared_infrastructure))
        - scenario.market.industry_revenue(firms);
    Ok(uncovered.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const X_STATIONS: f64 = 927.2094621871013;
    const CORE_ANNUITY: f64 = 508.9247150642247;

    fn table1() -> IndustryScenario {
        IndustryScenario {
            reference_firms: 2,
            gross_cost_per_firm: 1000.0,
            market: MarketDemand::industry_fixed(1000.0),
        }
    }

    fn stations() -> IndustryScenario {
        IndustryScenario {
            reference_firms: 2,
            gross_cost_per_firm: X_STATIONS,
            market: MarketDemand::industry_fixed(500.0),
        }
    }

    #[test]
    fn budget_verdicts() {
        let ok = check_budget(&BudgetAllocation::new(1000.0, 491.0, 0.0, 509.0).unwrap());
        assert!(ok.feasible);
        assert_eq!(ok.slack, 0.0);
        let over = check_budget(&BudgetAllocation::new(1000.0, 500.0, 0.0, 501.0).unwrap());
        assert!(!over.feasible);
        assert_eq!(over.slack, -1.0);
        let idle = check_budget(&BudgetAllocation::new(1000.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(
            idle,
            BudgetCheck {
                feasible: true,
                slack: 1000.0
            }
        );
        assert!(BudgetAllocation::new(1000.0, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn table1_architectures() {
        let f = Valuation::AtCost;
        let a = BudgetAllocation::new(1000.0, 0.0, 1000.0, 0.0).unwrap();
        let la = firm_ledger(&a, &table1(), 2, &f).unwrap();
        assert_eq!(la.profit, 0.0);
        assert_eq!(industry_account(&a, &table1(), 2, &f).unwrap().total_profit, 0.0);

        let b = BudgetAllocation::new(1000.0, 500.0, 0.0, 500.0).unwrap();
        let lb = firm_ledger(&b, &table1(), 2, &f).unwrap();
        assert_eq!(lb.profit, 250.0);
        let acct = industry_account(&b, &table1(), 2, &f).unwrap();
        assert_eq!(acct.total_profit, 500.0);
        assert_eq!(acct.total_revenue, 1500.0);
        assert_eq!(acct.total_cost, 1000.0);
    }

    #[test]
    fn station_architectures() {
        let f = Valuation::AtCost;
        let free = BudgetAllocation::new(1000.0, 1000.0, 0.0, 0.0).unwrap();
        let acct = industry_account(&free, &stations(), 2, &f).unwrap();
        assert!((acct.per_firm.profit + 177.5).abs() < 0.5);
        assert!((acct.total_profit + 355.0).abs() < 1.0);
        assert_eq!(acct.total_revenue, 1500.0);
        assert!((acct.total_cost - 1855.0).abs() < 1.0);

        let shared = BudgetAllocation::new(1000.0, 1000.0 - CORE_ANNUITY, 0.0, CORE_ANNUITY).unwrap();
        let acct = industry_account(&shared, &stations(), 2, &f).unwrap();
        assert!((acct.per_firm.profit - 77.0).abs() < 0.5);
        assert!((acct.total_profit - 154.0).abs() < 1.0);
        assert!((acct.total_revenue - 991.0).abs() < 0.5);
        assert!((acct.total_cost - 837.0).abs() < 0.5);
    }

    #[test]
    fn all_zero_economy() {
        let zero = BudgetAllocation::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let scenario = IndustryScenario {
            reference_firms: 1,
            gross_cost_per_firm: 0.0,
            market: MarketDemand::industry_fixed(0.0),
        };
        let acct = industry_account(&zero, &scenario, 1, &Valuation::AtCost).unwrap();
        assert_eq!(
            (acct.total_revenue, acct.total_cost, acct.total_profit),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn zero_firms_is_a_domain_error() {
        let alloc = BudgetAllocation::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            firm_ledger(&alloc, &table1(), 0, &Valuation::AtCost),
            Err(Error::Domain(_))
        ));
        assert!(dominance_margin(0.0, 0, &Valuation::AtCost).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominance_margin(123.0, 2, &Valuation::AtCost).unwrap(), 0.5);
        assert_eq!(dominance_margin(0.0, 1, &Valuation::AtCost).unwrap(), 0.0);
        let capped = Valuation::CappedLinear { cap: 509.0 };
        assert!((dominance_margin(600.0, 3, &capped).unwrap() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn minimum_support() {
        let f = Valuation::AtCost;
        assert_eq!(min_sustainable_support(&table1(), 2, &f, 0.0).unwrap(), 1000.0);
        assert_eq!(min_sustainable_support(&table1(), 5, &f, 1000.0).unwrap(), 0.0);
        let got = min_sustainable_support(&stations(), 2, &f, CORE_ANNUITY).unwrap();
        assert!((got - 336.6).abs() < 0.05, "{got}");
    }

    #[test]
    fn per_firm_market_scaling() {
        let mut scenario = table1();
        scenario.market = MarketDemand::per_firm_fixed(500.0);
        let alloc = BudgetAllocation::new(1000.0, 0.0, 1000.0, 0.0).unwrap();
        let ledger = firm_ledger(&alloc, &scenario, 4, &Valuation::AtCost).unwrap();
        assert_eq!(ledger.revenue_market, 500.0);
        let acct = industry_account(&alloc, &scenario, 4, &Valuation::AtCost).unwrap();
        assert_eq!(acct.total_revenue, 2000.0);
    }

    #[test]
    fn valuation_forms() {
        for f in [
            Valuation::AtCost,
            Valuation::CappedLinear { cap: 509.0 },
            Valuation::Saturating { cap: 509.0 },
        ] {
            assert_eq!(f.value(0.0), 0.0);
            // central difference away from the cap kink
            for g in [0.0, 100.0, 400.0, 800.0, 2000.0] {
                let h = 1e-4;
                let fd = (f.value(g + h) - f.value((g - h).max(0.0))) / (g + h - (g - h).max(0.0));
                assert!((fd - f.derivative(g)).abs() < 1e-6, "{f:?} at {g}");
                assert!(f.derivative(g) >= 0.0);
                assert!(f.value(g + 1.0) >= f.value(g));
            }
        }
        assert!(Valuation::Saturating { cap: 0.0 }.validate().is_err());
        assert!(Valuation::CappedLinear { cap: -1.0 }.validate().is_err());
    }
}
