//! Report emitters. Values are rounded to $1M only here; JSON also carries
//! the unrounded figures.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::model::{ArchitectureResult, Evaluation};
use crate::region::Classification;
use crate::scenario::{ScenarioOverride, SweepParameter, SweepPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub revenue: f64,
    pub cost: f64,
    pub profit: f64,
}

/// One column of the architecture comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableColumn {
    pub firms: u32,
    pub budget: f64,
    pub direct_transfers_per_firm: f64,
    pub direct_purchases_per_firm: f64,
    pub shared_infrastructure: f64,
    pub market_revenue_per_firm: f64,
    pub infra_value: f64,
    pub gross_cost_per_firm: f64,
    pub profit_per_firm: f64,
    pub totals: Totals,
}

impl TableColumn {
    fn from_result(r: &ArchitectureResult) -> Self {
        let firm = &r.account.per_firm;
        Self {
            firms: r.account.firms,
            budget: r.allocation.budget,
            direct_transfers_per_firm: firm.transfer,
            direct_purchases_per_firm: firm.revenue_gov,
            shared_infrastructure: r.allocation.shared_infrastructure,
            market_revenue_per_firm: firm.revenue_market,
            infra_value: firm.infra_benefit,
            gross_cost_per_firm: firm.gross_cost,
            profit_per_firm: firm.profit,
            totals: Totals {
                revenue: r.account.total_revenue,
                cost: r.account.total_cost,
                profit: r.account.total_profit,
            },
        }
    }

    fn rounded(&self) -> Self {
        let r = |v: f64| {
            let v = v.round();
            // no "-0" in reports
            if v == 0.0 {
                0.0
            } else {
                v
            }
        };
        Self {
            firms: self.firms,
            budget: r(self.budget),
            direct_transfers_per_firm: r(self.direct_transfers_per_firm),
            direct_purchases_per_firm: r(self.direct_purchases_per_firm),
            shared_infrastructure: r(self.shared_infrastructure),
            market_revenue_per_firm: r(self.market_revenue_per_firm),
            infra_value: r(self.infra_value),
            gross_cost_per_firm: r(self.gross_cost_per_firm),
            profit_per_firm: r(self.profit_per_firm),
            totals: Totals {
                revenue: r(self.totals.revenue),
                cost: r(self.totals.cost),
                profit: r(self.totals.profit),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureReport {
    pub name: String,
    pub classification: Classification,
    pub dominance_margin: f64,
    pub point: crate::model::PlanePoint,
    pub exact: TableColumn,
    pub rounded: TableColumn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub name: String,
    pub parameters: ScenarioOverride,
    pub architectures: Vec<ArchitectureReport>,
}

impl From<&Evaluation> for EvaluationReport {
    fn from(eval: &Evaluation) -> Self {
        Self {
            name: eval.name.clone(),
            parameters: eval.parameters,
            architectures: eval
                .architectures
                .iter()
                .map(|a| {
                    let exact = TableColumn::from_result(a);
                    ArchitectureReport {
                        name: a.name.clone(),
                        classification: a.classification,
                        dominance_margin: a.dominance_margin,
                        point: a.point,
                        rounded: exact.rounded(),
                        exact,
                    }
                })
                .collect(),
        }
    }
}

fn money(v: f64, unit: &str) -> String {
    let sign = if v < 0.0 { "-" } else { "" };
    format!("{sign}${:.0} M/{unit}", v.abs())
}

fn optional(v: f64, unit: &str) -> String {
    if v == 0.0 {
        "---".into()
    } else {
        money(v, unit)
    }
}

fn firms_label(c: &Classification) -> String {
    if c.unbounded {
        format!(">= {} (cap)", c.max_firms)
    } else {
        c.max_firms.to_string()
    }
}

impl EvaluationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Side-by-side table, one column per architecture.
    pub fn to_text(&self) -> String {
        let cols: Vec<&TableColumn> = self.architectures.iter().map(|a| &a.rounded).collect();
        type Row = (&'static str, fn(&TableColumn) -> String);
        let rows: [Row; 12] = [
            ("Desired number of competitors (N)", |c| format!("{} firms", c.firms)),
            ("Program budget (B)", |c| money(c.budget, "year")),
            ("  Direct transfers (G_i)", |c| {
                optional(c.direct_transfers_per_firm, "year/firm")
            }),
            ("  Direct purchases (R^G_i)", |c| {
                optional(c.direct_purchases_per_firm, "year/firm")
            }),
            ("  Shared infrastructure spending (G^S)", |c| {
                optional(c.shared_infrastructure, "year")
            }),
            ("Market revenue (R^M_i)", |c| {
                money(c.market_revenue_per_firm, "year/firm")
            }),
            ("Shared infrastructure value (Y^G)", |c| {
                optional(c.infra_value, "year/firm")
            }),
            ("Gross total cost (X_i)", |c| money(c.gross_cost_per_firm, "year/firm")),
            ("Total industry revenues (R)", |c| money(c.totals.revenue, "year")),
            ("Total industry costs (C)", |c| money(c.totals.cost, "year")),
            ("TOTAL INDUSTRY PROFITS (PI)", |c| money(c.totals.profit, "year")),
            ("Profit per firm", |c| money(c.profit_per_firm, "year/firm")),
        ];
        let label_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0) + 2;
        let col_w = self
            .architectures
            .iter()
            .map(|a| a.name.len())
            .max()
            .unwrap_or(0)
            .max(22)
            + 2;
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.name);
        let _ = write!(s, "{:label_w$}", "");
        for a in &self.architectures {
            let _ = write!(s, "{:>col_w$}", a.name);
        }
        s.push('\n');
        for (label, cell) in &rows {
            let _ = write!(s, "{label:label_w$}");
            for c in &cols {
                let _ = write!(s, "{:>col_w$}", cell(c));
            }
            s.push('\n');
        }
        let _ = write!(s, "{:label_w$}", "Max sustainable competitors");
        for a in &self.architectures {
            let _ = write!(s, "{:>col_w$}", firms_label(&a.classification));
        }
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "architecture,firms,budget,direct_transfers_per_firm,direct_purchases_per_firm,\
shared_infrastructure,market_revenue_per_firm,infra_value,gross_cost_per_firm,\
total_revenue,total_cost,total_profit,profit_per_firm,max_firms,unbounded\n",
        );
        for a in &self.architectures {
            let c = &a.rounded;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                csv_field(&a.name),
                c.firms,
                c.budget,
                c.direct_transfers_per_firm,
                c.direct_purchases_per_firm,
                c.shared_infrastructure,
                c.market_revenue_per_firm,
                c.infra_value,
                c.gross_cost_per_firm,
                c.totals.revenue,
                c.totals.cost,
                c.totals.profit,
                c.profit_per_firm,
                a.classification.max_firms,
                a.classification.unbounded
            );
        }
        s
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<EvaluationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub parameter: SweepParameter,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn new(parameter: SweepParameter, points: &[SweepPoint]) -> Self {
        Self {
            parameter,
            entries: points
                .iter()
                .map(|p| match &p.result {
                    Ok(r) => SweepEntry {
                        value: p.value,
                        report: Some(EvaluationReport::from(&r.evaluation)),
                        error: None,
                    },
                    Err(e) => SweepEntry {
                        value: p.value,
                        report: None,
                        error: Some(e.to_string()),
                    },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per scenario per architecture; infeasible scenarios get a
    /// single row carrying the error.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "parameter,value,architecture,max_firms,unbounded,total_revenue,total_cost,total_profit,profit_per_firm,error\n",
        );
        for e in &self.entries {
            match (&e.report, &e.error) {
                (Some(report), _) => {
                    for a in &report.architectures {
                        let c = &a.exact;
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{},{},{},",
                            self.parameter,
                            e.value,
                            csv_field(&a.name),
                            a.classification.max_firms,
                            a.classification.unbounded,
                            c.totals.revenue,
                            c.totals.cost,
                            c.totals.profit,
                            c.profit_per_firm
                        );
                    }
                }
                (None, err) => {
                    let _ = writeln!(
                        s,
                        "{},{},,,,,,,,{}",
                        self.parameter,
                        e.value,
                        csv_field(err.as_deref().unwrap_or("unknown error"))
                    );
                }
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "== {} = {}", self.parameter, e.value);
            match (&e.report, &e.error) {
                (Some(r), _) => s.push_str(&r.to_text()),
                (None, err) => {
                    let _ = writeln!(s, "error: {}", err.as_deref().unwrap_or("unknown error"));
                }
            }
        }
        s
    }
}
