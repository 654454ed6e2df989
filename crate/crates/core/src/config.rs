//! TOML program configuration.
//!
//! Parsing is strict: unknown keys are rejected so that a typo cannot
//! silently change the economics. Diagnostics name the offending path and,
//! where the source position is known, the line.
//!
//! ```toml
//! [metadata]
//! name = "Stations"
//! base_year = "2025 USD"
//!
//! [rate]
//! annual_rate = 0.05
//! lifetime_years = 15
//!
//! [[modules]]
//! name = "habitat"
//! integration_fraction = 0.0
//! elements = [
//!   { name = "Construction", capital = 1934.0 },
//!   { name = "Operations", ops_per_year = 1200.0, ops_share = [75.0, 388.0] },
//! ]
//!
//! [market]
//! revenue = 500.0
//! scaling = "industry_fixed"   # or "per_firm_fixed"
//!
//! [program]
//! budget = 1000.0
//! reference_firms = 2
//! valuation = { form = "at_cost" }
//!
//! [[architectures]]
//! name = "Shared core"
//! per_firm_modules = ["habitat"]
//! shared_modules = ["core"]
//! allocation = { rule = "infra_first" }
//! ```

use std::collections::HashMap;

use serde::Deserialize;
use toml::Spanned;

use crate::cost::{rollup_module, scale_ops_by_share, ArchitectureCostSpec, CostElement, SystemModuleCost};
use crate::econ::{MarketDemand, MarketScaling, Valuation};
use crate::error::{Error, Result};
use crate::finance::{MoneyPerYear, RateSpec};
use crate::model::{AllocationRule, Architecture, ArchitectureCost, DiagramWindow, Model, DEFAULT_RESOLUTION};
use crate::region::{AxisRange, DEFAULT_MAX_FIRMS};

/// Bundled example configurations.
pub mod bundled {
    /// Two-firm worked example with a fixed gross cost per firm.
    pub const TABLE1_EXAMPLE: &str = include_str!("../configs/table1_example.toml");
    /// Free-flyer vs shared-core crewed stations from itemized costs.
    pub const STATIONS_BASELINE: &str = include_str!("../configs/stations_baseline.toml");
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    metadata: RawMetadata,
    rate: RawRate,
    #[serde(default)]
    modules: Vec<RawModule>,
    market: RawMarket,
    program: RawProgram,
    diagram: Option<RawDiagram>,
    #[serde(default)]
    architectures: Vec<RawArchitecture>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetadata {
    name: String,
    #[serde(default)]
    base_year: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRate {
    annual_rate: f64,
    lifetime_years: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    name: Spanned<String>,
    #[serde(default)]
    integration_fraction: f64,
    #[serde(default)]
    elements: Vec<RawElement>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    name: String,
    #[serde(default)]
    capital: f64,
    #[serde(default)]
    ops_per_year: f64,
    ops_share: Option<RawShare>,
    #[serde(default)]
    notes: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawShare {
    Fraction(f64),
    Ratio([f64; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMarket {
    revenue: f64,
    #[serde(default)]
    scaling: MarketScaling,
    share_mode: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProgram {
    budget: f64,
    reference_firms: u32,
    #[serde(default = "default_max_firms")]
    max_firms: u32,
    #[serde(default)]
    valuation: Valuation,
}

fn default_max_firms() -> u32 {
    DEFAULT_MAX_FIRMS
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagram {
    purchases_range: [f64; 2],
    cost_range: [f64; 2],
    #[serde(default = "default_resolution")]
    resolution: [usize; 2],
}

fn default_resolution() -> [usize; 2] {
    DEFAULT_RESOLUTION
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArchitecture {
    name: Spanned<String>,
    #[serde(default)]
    per_firm_modules: Vec<Spanned<String>>,
    #[serde(default)]
    shared_modules: Vec<Spanned<String>>,
    gross_cost_per_firm: Option<f64>,
    allocation: RawAllocation,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
enum RawAllocation {
    InfraFirst {
        #[serde(default)]
        direct_transfers: f64,
    },
    Explicit {
        #[serde(default)]
        direct_purchases: f64,
        #[serde(default)]
        direct_transfers: f64,
        #[serde(default)]
        shared_infrastructure: f64,
    },
}

/// Validated program configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramConfig {
    pub model: Model,
    /// Cost library by module name, priced at the configured rate.
    pub modules: Vec<(String, SystemModuleCost)>,
}

struct LineIndex<'a>(&'a str);

impl LineIndex<'_> {
    fn line(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())].matches('\n').count() + 1
    }

    fn at<T>(&self, spanned: &Spanned<T>, path: &str) -> String {
        format!("{path} (line {})", self.line(spanned.span().start))
    }
}

fn with_path(path: &str, e: Error) -> Error {
    match e {
        Error::Invalid { path: inner, reason } => Error::Invalid {
            path: format!("{path}.{inner}"),
            reason,
        },
        other => other,
    }
}

pub fn parse_config(text: &str) -> Result<ProgramConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    let lines = LineIndex(text);

    let rate = RateSpec::new(raw.rate.annual_rate, raw.rate.lifetime_years)?;

    if let Some(mode) = &raw.market.share_mode {
        if mode.get_ref() != "equal" {
            return Err(Error::Unsupported {
                path: lines.at(mode, "market.share_mode"),
                reason: format!(
                    "share mode \"{}\" requested; only equal market and government shares are supported",
                    mode.get_ref()
                ),
            });
        }
    }
    if !raw.market.revenue.is_finite() || raw.market.revenue < 0.0 {
        return Err(Error::invalid("market.revenue", "must be finite and >= 0"));
    }
    let market = MarketDemand {
        revenue: raw.market.revenue,
        scaling: raw.market.scaling,
    };

    let mut library: HashMap<String, SystemModuleCost> = HashMap::new();
    let mut modules = Vec::with_capacity(raw.modules.len());
    for (i, m) in raw.modules.iter().enumerate() {
        let path = lines.at(&m.name, &format!("modules[{i}]"));
        let mut elements = Vec::with_capacity(m.elements.len());
        for (j, el) in m.elements.iter().enumerate() {
            let el_path = format!("{path}.elements[{j}]");
            let ops = match el.ops_share {
                None => el.ops_per_year,
                Some(ref share) => {
                    let fraction = match *share {
                        RawShare::Fraction(f) => f,
                        RawShare::Ratio([part, whole]) if whole > 0.0 => part / whole,
                        RawShare::Ratio(_) => {
                            return Err(Error::invalid(
                                format!("{el_path}.ops_share"),
                                "ratio denominator must be positive",
                            ))
                        }
                    };
                    let base = MoneyPerYear::new(el.ops_per_year).map_err(|e| with_path(&el_path, e))?;
                    scale_ops_by_share(base, fraction)
                        .map_err(|e| with_path(&el_path, e))?
                        .amount()
                }
            };
            let element = CostElement::new(el.name.clone(), el.capital, ops)
                .map_err(|e| with_path(&el_path, e))?
                .with_notes(el.notes.clone());
            elements.push(element);
        }
        let module = rollup_module(elements, m.integration_fraction, rate).map_err(|e| with_path(&path, e))?;
        if library.insert(m.name.get_ref().clone(), module.clone()).is_some() {
            return Err(Error::invalid(
                path,
                format!("duplicate module name \"{}\"", m.name.get_ref()),
            ));
        }
        modules.push((m.name.get_ref().clone(), module));
    }

    let resolve = |refs: &[Spanned<String>], path: &str| -> Result<Vec<SystemModuleCost>> {
        refs.iter()
            .map(|r| {
                library
                    .get(r.get_ref())
                    .cloned()
                    .ok_or_else(|| Error::UnresolvedReference {
                        path: lines.at(r, path),
                        name: r.get_ref().clone(),
                    })
            })
            .collect()
    };

    let mut architectures = Vec::with_capacity(raw.architectures.len());
    for (i, a) in raw.architectures.iter().enumerate() {
        let path = lines.at(&a.name, &format!("architectures[{i}]"));
        let per_firm = resolve(&a.per_firm_modules, &format!("architectures[{i}].per_firm_modules"))?;
        let shared = resolve(&a.shared_modules, &format!("architectures[{i}].shared_modules"))?;
        let cost = match a.gross_cost_per_firm {
            Some(x) if per_firm.is_empty() && shared.is_empty() => ArchitectureCost::Fixed(x),
            Some(_) => {
                return Err(Error::invalid(
                    path,
                    "give either gross_cost_per_firm or module lists, not both",
                ))
            }
            None => ArchitectureCost::Modules(ArchitectureCostSpec {
                per_firm_modules: per_firm,
                shared_modules: shared,
            }),
        };
        let allocation = match a.allocation {
            RawAllocation::InfraFirst { direct_transfers } => AllocationRule::InfraFirst { direct_transfers },
            RawAllocation::Explicit {
                direct_purchases,
                direct_transfers,
                shared_infrastructure,
            } => AllocationRule::Explicit {
                direct_purchases,
                direct_transfers,
                shared_infrastructure,
            },
        };
        if architectures.iter().any(|x: &Architecture| x.name == *a.name.get_ref()) {
            return Err(Error::invalid(
                path,
                format!("duplicate architecture name \"{}\"", a.name.get_ref()),
            ));
        }
        architectures.push(Architecture {
            name: a.name.get_ref().clone(),
            cost,
            allocation,
        });
    }

    let diagram = raw.diagram.map(|d| DiagramWindow {
        purchases_range: AxisRange::new(d.purchases_range[0], d.purchases_range[1]),
        cost_range: AxisRange::new(d.cost_range[0], d.cost_range[1]),
        resolution: d.resolution,
    });

    let model = Model {
        name: raw.metadata.name,
        base_year: raw.metadata.base_year,
        rate,
        market,
        budget: raw.program.budget,
        reference_firms: raw.program.reference_firms,
        max_firms: raw.program.max_firms,
        valuation: raw.program.valuation,
        shared_infrastructure: None,
        diagram,
        architectures,
    };
    model.validate()?;
    if model.diagram.is_some() {
        model.diagram_spec(&[]).validate()?;
    }
    Ok(ProgramConfig { model, modules })
}
