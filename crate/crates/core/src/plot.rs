//! Standalone SVG plots of aggregated rows: simulation points per
//! (heuristic, alpha) series, analytic values as a polyline.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::harness::{AggregateRow, Estimate};
use crate::heuristics::Heuristic;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Pn,
    Pm,
    Zd,
    Pt,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Pn => "P_n",
            Metric::Pm => "P_m",
            Metric::Zd => "Z_D,GCC_G",
            Metric::Pt => "P_t",
        }
    }

    fn simulated(self, r: &AggregateRow) -> Estimate {
        match self {
            Metric::Pn => r.pn,
            Metric::Pm => r.pm,
            Metric::Zd => r.zd,
            Metric::Pt => r.pt,
        }
    }

    fn analytic(self, r: &AggregateRow) -> Option<f64> {
        match self {
            Metric::Pn => r.analytic.pn,
            Metric::Pm => r.analytic.pm,
            Metric::Zd => r.analytic.zd,
            Metric::Pt => r.analytic.pt,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pn" => Ok(Metric::Pn),
            "pm" => Ok(Metric::Pm),
            "zd" => Ok(Metric::Zd),
            "pt" => Ok(Metric::Pt),
            _ => Err(Error::InvalidParameter(format!("unsupported metric {s:?}"))),
        }
    }
}

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 150.0, 30.0, 55.0); // left, right, top, bottom
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Series<'a> {
    heuristic: Heuristic,
    alpha: f64,
    rows: Vec<&'a AggregateRow>,
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = lo.abs().max(1.0) * 0.05;
        (lo - pad, hi + pad)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

/// Renders `metric` against the sweep parameter. Rows must come from a
/// single model family.
pub fn render_svg(rows: &[AggregateRow], metric: Metric) -> Result<String> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidParameter("nothing to plot".into()))?;
    if rows.iter().any(|r| r.point.family != first.point.family) {
        return Err(Error::InvalidParameter("rows mix model families".into()));
    }
    let mut series: Vec<Series> = Vec::new();
    for r in rows {
        match series
            .iter_mut()
            .find(|s| s.heuristic == r.heuristic && s.alpha == r.alpha)
        {
            Some(s) => s.rows.push(r),
            None => series.push(Series {
                heuristic: r.heuristic,
                alpha: r.alpha,
                rows: vec![r],
            }),
        }
    }
    for s in &mut series {
        s.rows.sort_by(|a, b| a.point.param.total_cmp(&b.point.param));
    }

    let (x0, x1) = span(rows.iter().map(|r| r.point.param));
    let (y0, y1) = span(
        rows.iter()
            .flat_map(|r| [Some(metric.simulated(r).mean), metric.analytic(r)])
            .flatten(),
    );
    let (ml, mr, mt, mb) = MARGIN;
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (W - ml - mr);
    let py = |y: f64| H - mb - (y - y0) / (y1 - y0) * (H - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - ml - mr,
        H - mt - mb
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.3}</text>"#,
            px(xv),
            H - mb + 18.0,
            xv
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{:.3}</text>"#,
            ml - 6.0,
            py(yv) + 4.0,
            yv
        );
    }
    let xname = match first.point.family {
        crate::harness::Family::Poisson => "z",
        crate::harness::Family::PowerLaw => "tau",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xname}</text>"#,
        ml + (W - ml - mr) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        mt + (H - mt - mb) / 2.0,
        mt + (H - mt - mb) / 2.0,
        metric.label()
    );

    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let line: Vec<String> = ser
            .rows
            .iter()
            .filter_map(|r| metric.analytic(r).map(|y| format!("{:.2},{:.2}", px(r.point.param), py(y))))
            .collect();
        if line.len() >= 2 {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                line.join(" ")
            );
        }
        for r in &ser.rows {
            let y = metric.simulated(r).mean;
            if !y.is_finite() {
                continue;
            }
            let (cx, cy) = (px(r.point.param), py(y));
            match ser.heuristic {
                Heuristic::Uniform => {
                    let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="{color}"/>"#);
                }
                Heuristic::DegreeBased => {
                    let _ = writeln!(
                        s,
                        r#"<rect x="{:.2}" y="{:.2}" width="7" height="7" fill="{color}"/>"#,
                        cx - 3.5,
                        cy - 3.5
                    );
                }
            }
        }
        let ly = mt + 14.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{} a={}</text>"#,
            W - mr + 12.0,
            ser.heuristic.name(),
            ser.alpha
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_plot(rows: &[AggregateRow], metric: Metric, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, render_svg(rows, metric)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{AnalyticColumns, ModelPoint};

    fn row(param: f64, alpha: f64, pn: f64, analytic: Option<f64>) -> AggregateRow {
        let e = Estimate { mean: pn, se: 0.01, count: 10 };
        AggregateRow {
            point: ModelPoint::poisson(param),
            alpha,
            heuristic: Heuristic::Uniform,
            gamma: 1.0,
            pn: e,
            pm: e,
            zd: e,
            pt: e,
            analytic: AnalyticColumns { pn: analytic, ..Default::default() },
            skipped_graphs: 0,
        }
    }

    #[test]
    fn one_series_per_alpha_with_lines() {
        let rows: Vec<_> = [0.1, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .flat_map(|&a| (1..=10).map(move |z| row(z as f64, a, 0.5, Some(0.6))))
            .collect();
        let svg = render_svg(&rows, Metric::Pn).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert_eq!(svg.matches("<circle").count(), 50);
    }

    #[test]
    fn points_only_without_analytics() {
        let rows = vec![row(1.0, 0.5, 0.3, None), row(2.0, 0.5, 0.4, None)];
        let svg = render_svg(&rows, Metric::Pm).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 0);
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn single_point() {
        let svg = render_svg(&[row(5.0, 0.5, 0.9, Some(0.9))], Metric::Pn).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn bad_inputs() {
        assert!("speed".parse::<Metric>().is_err());
        assert!(render_svg(&[], Metric::Pn).is_err());
        let mut mixed = vec![row(1.0, 0.5, 0.3, None), row(2.0, 0.5, 0.3, None)];
        mixed[1].point = ModelPoint::power_law(2.5);
        assert!(render_svg(&mixed, Metric::Pn).is_err());
    }
}
