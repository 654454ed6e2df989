//! SVG rendering of a [`CompetitionRegion`].

use std::fmt::Write;

use crate::region::{AxisRange, CompetitionRegion};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

/// Maps data coordinates to pixels for the plotting window.
#[derive(Debug, Clone, Copy)]
pub struct PlotFrame {
    pub x: AxisRange,
    pub y: AxisRange,
}

impl PlotFrame {
    pub fn plot_width() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    pub fn plot_height() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    pub fn to_px(&self, rg: f64, cost: f64) -> (f64, f64) {
        let px = LEFT + (rg - self.x.min) / self.x.span() * Self::plot_width();
        let py = TOP + (1.0 - (cost - self.y.min) / self.y.span()) * Self::plot_height();
        (px, py)
    }

    pub fn from_px(&self, px: f64, py: f64) -> (f64, f64) {
        let rg = self.x.min + (px - LEFT) / Self::plot_width() * self.x.span();
        let cost = self.y.min + (1.0 - (py - TOP) / Self::plot_height()) * self.y.span();
        (rg, cost)
    }
}

// Light to dark as the sustainable count grows.
fn fill_for(firms: u32, max_firms: u32) -> String {
    let t = f64::from(firms) / f64::from(max_firms.max(1));
    let shade = (235.0 - 150.0 * t).round() as u8;
    format!("rgb({shade},{},{})", shade.saturating_add(10), 255)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(region: &CompetitionRegion, title: &str) -> String {
    let spec = &region.spec;
    let frame = PlotFrame {
        x: spec.purchases_range,
        y: spec.cost_range,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (x0, y0) = frame.to_px(frame.x.min, frame.y.max);
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#,
        PlotFrame::plot_width(),
        PlotFrame::plot_height()
    );

    let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);
    for poly in &region.polygons {
        let pts: Vec<String> = poly
            .vertices
            .iter()
            .map(|&(x, y)| {
                let (px, py) = frame.to_px(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon class="region" data-firms="{}" points="{}" fill="{}" stroke="none"/>"#,
            poly.min_firms,
            pts.join(" "),
            fill_for(poly.min_firms, spec.max_firms)
        );
    }
    let mut labels = Vec::new();
    for line in &region.boundaries {
        if let Some([(ax, ay), (bx, by)]) = line.clip(frame.x, frame.y) {
            let (x1, y1) = frame.to_px(ax, ay);
            let (x2, y2) = frame.to_px(bx, by);
            let _ = writeln!(
                s,
                r##"<line class="boundary" data-firms="{}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#333" stroke-width="1"/>"##,
                line.firms
            );
            labels.push(format!(
                r##"<text x="{:.2}" y="{:.2}" fill="#333" text-anchor="end">N={}</text>"##,
                x2 - 4.0,
                y2 + 14.0,
                line.firms
            ));
        }
    }
    let _ = writeln!(s, "</g>");
    for label in labels {
        let _ = writeln!(s, "{label}");
    }

    // axes
    let (ox, oy) = frame.to_px(frame.x.min, frame.y.min);
    let (ex, _) = frame.to_px(frame.x.max, frame.y.min);
    let (_, ty) = frame.to_px(frame.x.min, frame.y.max);
    let _ = writeln!(
        s,
        r#"<g class="axes" stroke="black"><line x1="{ox:.2}" y1="{oy:.2}" x2="{ex:.2}" y2="{oy:.2}"/><line x1="{ox:.2}" y1="{oy:.2}" x2="{ox:.2}" y2="{ty:.2}"/></g>"#
    );
    for v in frame.x.samples(6) {
        let (px, py) = frame.to_px(v, frame.y.min);
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{v:.0}</text>"#,
            py + 18.0
        );
    }
    for v in frame.y.samples(6) {
        let (px, py) = frame.to_px(frame.x.min, v);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.0}</text>"#,
            px - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Industry direct government purchases R^G ($M/year)</text>"#,
        LEFT + PlotFrame::plot_width() / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">Industry total cost C ($M/year)</text>"#,
        TOP + PlotFrame::plot_height() / 2.0,
        TOP + PlotFrame::plot_height() / 2.0
    );

    for p in &region.points {
        let (px, py) = frame.to_px(p.rg, p.cost);
        let _ = writeln!(
            s,
            r#"<g class="point" data-max-firms="{}"><circle cx="{px:.2}" cy="{py:.2}" r="5" fill="black"/><text x="{:.2}" y="{:.2}">{} (N={})</text></g>"#,
            p.classification.max_firms,
            px + 8.0,
            py - 8.0,
            escape(&p.label),
            p.classification.max_firms
        );
    }
    s.push_str("</svg>\n");
    s
}
