//! Sustainable-competition diagrams.
//!
//! Points of the plane (industry direct purchases `R^G`, industry net total
//! cost `C`) are classified by the largest industry size at which every
//! firm breaks even. The plane fixes per-firm net cost at `C / N0`, where
//! `N0` is the diagram's reference size, so the boundary for `N` firms is
//! the line `C = (N0 / N) * (R^G + R^M(N))`. Regions are closed: a firm
//! exactly at break-even counts as sustained.

use serde::{Deserialize, Serialize};

use crate::econ::{BudgetAllocation, IndustryScenario, MarketDemand, Valuation};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_FIRMS: u32 = 10;

/// Relative slack on break-even comparisons so points constructed on a
/// boundary stay on the closed side despite rounding.
const BOUNDARY_EPS: f64 = 1e-12;

fn at_least(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs - BOUNDARY_EPS * lhs.abs().max(rhs.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
}

impl AxisRange {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    /// `count` evenly spaced values including both ends.
    pub fn samples(&self, count: usize) -> impl Iterator<Item = f64> + '_ {
        let step = self.span() / (count - 1) as f64;
        (0..count).map(move |i| {
            if i + 1 == count {
                self.max
            } else {
                self.min + step * i as f64
            }
        })
    }

    fn validate(&self, path: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(Error::invalid(
                path,
                format!("range must be finite with min < max, got [{}, {}]", self.min, self.max),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub market: MarketDemand,
    pub reference_firms: u32,
    pub max_firms: u32,
    pub purchases_range: AxisRange,
    pub cost_range: AxisRange,
    /// Grid samples along the purchases and cost axes.
    pub resolution: [usize; 2],
}

impl DiagramSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reference_firms < 1 {
            return Err(Error::invalid("diagram.reference_firms", "must be at least 1"));
        }
        if self.max_firms < 1 {
            return Err(Error::invalid("diagram.max_firms", "must be at least 1"));
        }
        if !self.market.revenue.is_finite() || self.market.revenue < 0.0 {
            return Err(Error::invalid("diagram.market.revenue", "must be finite and >= 0"));
        }
        self.purchases_range.validate("diagram.purchases_range")?;
        self.cost_range.validate("diagram.cost_range")?;
        if self.resolution.iter().any(|&r| r < 2) {
            return Err(Error::invalid("diagram.resolution", "need at least 2 samples per axis"));
        }
        Ok(())
    }

    /// Industry cost `C` on the `firms` boundary at purchases `rg`.
    pub fn boundary_cost(&self, firms: u32, rg: f64) -> f64 {
        let ratio = f64::from(self.reference_firms) / f64::from(firms);
        ratio * (rg + self.market.industry_revenue(firms))
    }
}

/// Largest sustainable industry size. `unbounded` marks points where the
/// cap, not the economics, limits the count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub max_firms: u32,
    pub unbounded: bool,
}

impl Classification {
    fn bounded(max_firms: u32) -> Self {
        Self {
            max_firms,
            unbounded: false,
        }
    }
}

/// Classifies one point of the plane.
pub fn classify_point(rg: f64, cost: f64, spec: &DiagramSpec) -> Classification {
    if cost <= 0.0 {
        return Classification {
            max_firms: spec.max_firms,
            unbounded: true,
        };
    }
    let per_firm_cost = cost / f64::from(spec.reference_firms);
    let max_firms = (1..=spec.max_firms)
        .rev()
        .find(|&n| {
            let per_firm_revenue = (rg + spec.market.industry_revenue(n)) / f64::from(n);
            at_least(per_firm_revenue, per_firm_cost)
        })
        .unwrap_or(0);
    Classification::bounded(max_firms)
}

/// Plane coordinates of an economic architecture: its direct purchases and
/// industry net cost at the reference size.
pub fn architecture_coordinates(
    alloc: &BudgetAllocation,
    scenario: &IndustryScenario,
    valuation: &Valuation,
) -> (f64, f64) {
    let n0 = f64::from(scenario.reference_firms);
    let benefit = valuation.value(alloc.shared_infrastructure);
    let cost = n0 * scenario.gross_cost_per_firm - n0 * benefit - alloc.direct_transfers;
    (alloc.direct_purchases, cost)
}

/// Largest industry size, up to `max_firms`, at which every firm of the
/// architecture breaks even. Transfers are split among the actual number
/// of firms, so this agrees with [`classify_point`] at the architecture's
/// coordinates whenever there are no transfers.
pub fn classify_architecture(
    alloc: &BudgetAllocation,
    scenario: &IndustryScenario,
    valuation: &Valuation,
    max_firms: u32,
) -> Classification {
    let uncovered = scenario.gross_cost_per_firm - valuation.value(alloc.shared_infrastructure);
    let support = alloc.direct_purchases + alloc.direct_transfers;
    let best = (1..=max_firms)
        .rev()
        .find(|&n| {
            let revenue = (support + scenario.market.industry_revenue(n)) / f64::from(n);
            at_least(revenue, uncovered)
        })
        .unwrap_or(0);
    let unbounded = max_firms >= 1 && uncovered - alloc.direct_transfers / f64::from(max_firms) <= 0.0;
    Classification {
        max_firms: best,
        unbounded,
    }
}

/// The line `C = slope * R^G + intercept` bounding the `firms` region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLine {
    pub firms: u32,
    pub slope: f64,
    pub intercept: f64,
}

impl BoundaryLine {
    pub fn cost_at(&self, rg: f64) -> f64 {
        self.slope * rg + self.intercept
    }

    /// Portion of the line inside the plotting window, if any.
    pub fn clip(&self, xr: AxisRange, yr: AxisRange) -> Option<[(f64, f64); 2]> {
        // Liang-Barsky on the parametric segment x in [xr.min, xr.max]
        let (x0, y0) = (xr.min, self.cost_at(xr.min));
        let (dx, dy) = (xr.span(), self.cost_at(xr.max) - y0);
        let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
        for (p, q) in [(-dy, y0 - yr.min), (dy, yr.max - y0)] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
                continue;
            }
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
        (t0 <= t1).then_some([(x0 + t0 * dx, y0 + t0 * dy), (x0 + t1 * dx, y0 + t1 * dy)])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub rg: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub label: String,
    pub rg: f64,
    pub cost: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub rg: f64,
    pub cost: f64,
    pub max_firms: u32,
    pub unbounded: bool,
}

/// Polygon (in data coordinates) of the plotting window where at least
/// `min_firms` firms are sustainable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperlevelPolygon {
    pub min_firms: u32,
    pub vertices: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitionRegion {
    pub spec: DiagramSpec,
    pub boundaries: Vec<BoundaryLine>,
    pub polygons: Vec<SuperlevelPolygon>,
    /// Row-major: cost outer, purchases inner, both ascending.
    pub grid: Vec<GridCell>,
    pub points: Vec<ClassifiedPoint>,
}

pub fn build_region(spec: &DiagramSpec, points: &[LabeledPoint]) -> Result<CompetitionRegion> {
    spec.validate()?;
    let boundaries: Vec<BoundaryLine> = (1..=spec.max_firms)
        .map(|n| {
            let slope = f64::from(spec.reference_firms) / f64::from(n);
            BoundaryLine {
                firms: n,
                slope,
                intercept: spec.boundary_cost(n, 0.0),
            }
        })
        .collect();
    let polygons = boundaries
        .iter()
        .filter_map(|b| {
            let vertices = clip_box_below_line(spec.purchases_range, spec.cost_range, b);
            (vertices.len() >= 3).then_some(SuperlevelPolygon {
                min_firms: b.firms,
                vertices,
            })
        })
        .collect();
    let [nx, ny] = spec.resolution;
    let mut grid = Vec::with_capacity(nx * ny);
    for cost in spec.cost_range.samples(ny) {
        for rg in spec.purchases_range.samples(nx) {
            let c = classify_point(rg, cost, spec);
            grid.push(GridCell {
                rg,
                cost,
                max_firms: c.max_firms,
                unbounded: c.unbounded,
            });
        }
    }
    let points = points
        .iter()
        .map(|p| ClassifiedPoint {
            label: p.label.clone(),
            rg: p.rg,
            cost: p.cost,
            classification: classify_point(p.rg, p.cost, spec),
        })
        .collect();
    Ok(CompetitionRegion {
        spec: *spec,
        boundaries,
        polygons,
        grid,
        points,
    })
}

// Sutherland-Hodgman clip of the window rectangle against C <= line(R^G).
fn clip_box_below_line(xr: AxisRange, yr: AxisRange, line: &BoundaryLine) -> Vec<(f64, f64)> {
    let corners = [(xr.min, yr.min), (xr.max, yr.min), (xr.max, yr.max), (xr.min, yr.max)];
    let side = |(x, y): (f64, f64)| line.cost_at(x) - y;
    let mut out = Vec::with_capacity(5);
    for i in 0..corners.len() {
        let cur = corners[i];
        let next = corners[(i + 1) % corners.len()];
        let (sc, sn) = (side(cur), side(next));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc >= 0.0) != (sn >= 0.0) {
            let t = sc / (sc - sn);
            out.push((cur.0 + t * (next.0 - cur.0), cur.1 + t * (next.1 - cur.1)));
        }
    }
    out
}

impl CompetitionRegion {
    /// Grid as CSV with header `RG,C,maxN`. Unbounded cells are written as
    /// `>=N_max`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("RG,C,maxN\n");
        for cell in &self.grid {
            let n = if cell.unbounded {
                format!(">={}", cell.max_firms)
            } else {
                cell.max_firms.to_string()
            };
            out.push_str(&format!("{},{},{}\n", cell.rg, cell.cost, n));
        }
        out
    }
}
