//! Experiment sweeps: graphs per model point, one `D` per (graph, alpha,
//! heuristic), flooding runs from originators drawn uniformly over `GCC_G`.
//!
//! Every graph's work is independent and runs in parallel; results are folded
//! in graph order, so output does not depend on scheduling.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::analytics::{self, PathRatio};
use crate::degree::DegreeModel;
use crate::dissemination::{disseminate, giant_mean_degree, mean_distance};
use crate::error::{Error, Result};
use crate::generators::{generate, GenSpec};
use crate::graph::{ComponentLabeling, Graph, NodeId};
use crate::heuristics::{build_subgraph, make_choices, Heuristic};
use crate::rng::{self, tag};

pub const DEFAULT_ALPHAS: [f64; 5] = [0.10, 0.25, 0.50, 0.75, 1.00];
pub const DEFAULT_GRAPHS: usize = 30;
pub const DEFAULT_RUNS: usize = 100;
pub const DEFAULT_N: usize = 10_000;

pub const CSV_HEADER: &str = "model,param,alpha,heuristic,gamma,pn,pn_se,pm,pm_se,zd,zd_se,pt,pt_se,\
pn_analytic,pm_analytic,zd_analytic,pt_analytic";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Poisson,
    PowerLaw,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Poisson => "poisson",
            Family::PowerLaw => "powerlaw",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poisson" | "er" => Ok(Family::Poisson),
            "powerlaw" | "power-law" => Ok(Family::PowerLaw),
            _ => Err(Error::InvalidParameter(format!("unknown model {s:?}"))),
        }
    }
}

/// One point of a parameter sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelPoint {
    pub family: Family,
    /// `z` or `tau`.
    pub param: f64,
}

impl ModelPoint {
    pub fn poisson(z: f64) -> Self {
        Self { family: Family::Poisson, param: z }
    }

    pub fn power_law(tau: f64) -> Self {
        Self { family: Family::PowerLaw, param: tau }
    }

    /// The degree law, truncated at `max_degree`.
    pub fn model(&self, max_degree: usize) -> Result<DegreeModel> {
        match self.family {
            Family::Poisson => DegreeModel::poisson(self.param, max_degree),
            Family::PowerLaw => DegreeModel::power_law(self.param, max_degree),
        }
    }
}

/// Evenly spaced grid from `lo` to `hi` inclusive, rounded to 1e-9 so that
/// printed parameters stay tidy.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=k).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub points: Vec<ModelPoint>,
    pub alphas: Vec<f64>,
    pub heuristics: Vec<Heuristic>,
    /// `R`: graphs per point.
    pub graphs: usize,
    /// `S`: disseminations per `D`.
    pub runs: usize,
    pub n: usize,
    pub gamma: f64,
    pub seed: u64,
    /// Degree cap; `n - 1` when absent.
    pub max_degree: Option<usize>,
}

impl ExperimentPlan {
    pub fn new(points: Vec<ModelPoint>) -> Self {
        Self {
            points,
            alphas: DEFAULT_ALPHAS.to_vec(),
            heuristics: vec![Heuristic::Uniform, Heuristic::DegreeBased],
            graphs: DEFAULT_GRAPHS,
            runs: DEFAULT_RUNS,
            n: DEFAULT_N,
            gamma: 1.0,
            seed: 0,
            max_degree: None,
        }
    }

    /// Sweeps of the three published figures: Poisson `z = 1..10`, power law
    /// `tau = 2..3`, and lossy flooding (`gamma = 0.95`, degree rule) on both.
    pub fn figure(k: u32) -> Result<Self> {
        let poisson = || grid(1.0, 10.0, 1.0).into_iter().map(ModelPoint::poisson);
        let power = || grid(2.0, 3.0, 0.1).into_iter().map(ModelPoint::power_law);
        match k {
            1 => Ok(Self::new(poisson().collect())),
            2 => Ok(Self::new(power().collect())),
            3 => Ok(Self {
                alphas: vec![0.50, 0.75, 1.00],
                heuristics: vec![Heuristic::DegreeBased],
                gamma: 0.95,
                ..Self::new(poisson().chain(power()).collect())
            }),
            _ => Err(Error::InvalidParameter(format!("no figure {k}"))),
        }
    }

    pub fn cap(&self) -> usize {
        self.max_degree.unwrap_or(self.n.saturating_sub(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.graphs == 0 || self.runs == 0 {
            return Err(Error::InvalidParameter("graphs and runs must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n={} too small", self.n)));
        }
        if self.points.is_empty() || self.alphas.is_empty() || self.heuristics.is_empty() {
            return Err(Error::InvalidParameter("empty sweep".into()));
        }
        if let Some(a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
            return Err(Error::InvalidParameter(format!("alpha={a} outside (0, 1]")));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!("gamma={} outside [0, 1]", self.gamma)));
        }
        Ok(())
    }
}

/// Mean and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub count: usize,
}

impl Estimate {
    /// Summed in slice order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let count = xs.len();
        if count == 0 {
            return Self { mean: f64::NAN, se: f64::NAN, count };
        }
        let mean = xs.iter().sum::<f64>() / count as f64;
        let se = if count > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, se, count }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AnalyticColumns {
    pub pn: Option<f64>,
    pub pm: Option<f64>,
    pub zd: Option<f64>,
    pub pt: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub point: ModelPoint,
    pub alpha: f64,
    pub heuristic: Heuristic,
    pub gamma: f64,
    pub pn: Estimate,
    pub pm: Estimate,
    /// One sample per graph.
    pub zd: Estimate,
    pub pt: Estimate,
    pub analytic: AnalyticColumns,
    /// Graphs dropped because their giant component was a single node.
    pub skipped_graphs: usize,
}

/// Per-run records of one `D`.
#[derive(Clone, Debug, Default)]
struct Cell {
    pn: Vec<f64>,
    pm: Vec<f64>,
    pt: Vec<f64>,
    zd: f64,
}

/// Originators for `runs` disseminations on one graph, with the mean
/// `G`-distance from each. Shared by every (alpha, heuristic) on that graph.
fn draw_originators(
    g: &Graph,
    labels: &ComponentLabeling,
    runs: usize,
    seed: u64,
) -> Result<Vec<(NodeId, f64)>> {
    let members = labels.giant_members();
    let mut rng = rng::stream(seed, &[tag::RUN]);
    (0..runs)
        .map(|_| {
            let o = members[rng.gen_range(0..members.len())];
            Ok((o, mean_distance(g, o)?))
        })
        .collect()
}

fn run_cell(
    g: &Graph,
    labels: &ComponentLabeling,
    origins: &[(NodeId, f64)],
    h: Heuristic,
    alpha: f64,
    gamma: f64,
    seed: u64,
) -> Result<Cell> {
    let table = make_choices(g, h, alpha, rng::derive(seed, &[tag::CHOICE]))?;
    let d = build_subgraph(g, &table)?;
    let giant = labels.giant_size();
    let mut rng = rng::stream(seed, &[tag::RUN]);
    let mut cell = Cell {
        zd: giant_mean_degree(&d, labels),
        ..Cell::default()
    };
    for &(o, g_mean) in origins {
        let out = disseminate(&d, o, gamma, &mut rng)?;
        let others = out.reached_count() - 1;
        let d_mean = if others > 0 {
            out.distance_sum as f64 / others as f64
        } else {
            0.0
        };
        cell.pn.push(out.reached_count() as f64 / giant as f64);
        cell.pm.push(out.messages as f64 / (2.0 * (giant - 1) as f64));
        cell.pt.push(d_mean / g_mean);
    }
    Ok(cell)
}

/// All cells of one graph, in (alpha, heuristic) order; `None` when the
/// graph has no usable giant component.
fn run_graph(plan: &ExperimentPlan, model: &DegreeModel, point: usize, graph: usize) -> Result<Option<Vec<Cell>>> {
    let graph_seed = rng::derive(plan.seed, &[tag::POINT, point as u64, tag::GRAPH, graph as u64]);
    let g = generate(&GenSpec::new(plan.n, model.clone(), graph_seed))?;
    let labels = g.components();
    if labels.giant_size() <= 1 {
        return Ok(None);
    }
    let origins = draw_originators(&g, &labels, plan.runs, graph_seed)?;
    let mut cells = Vec::with_capacity(plan.alphas.len() * plan.heuristics.len());
    for (ai, &alpha) in plan.alphas.iter().enumerate() {
        for (hi, &h) in plan.heuristics.iter().enumerate() {
            let seed = rng::derive(graph_seed, &[tag::SUBGRAPH, ai as u64, hi as u64]);
            cells.push(run_cell(&g, &labels, &origins, h, alpha, plan.gamma, seed)?);
        }
    }
    Ok(Some(cells))
}

/// Analytic columns of a row. Lossless uniform rows get the full prediction;
/// lossy rows get only the reach bound of the thinned graph.
pub fn analytic_columns(model: &DegreeModel, alpha: f64, h: Heuristic, n: usize, gamma: f64) -> AnalyticColumns {
    let law = analytics::DegreeLaw::new(model);
    if gamma < 1.0 {
        return AnalyticColumns {
            pn: analytics::fixed_point::failure_fixed_point(&law, gamma)
                .ok()
                .map(|f| f.bound),
            ..AnalyticColumns::default()
        };
    }
    if h != Heuristic::Uniform {
        return AnalyticColumns::default();
    }
    match analytics::predict(model, alpha, n, None) {
        Ok(p) => AnalyticColumns {
            pn: Some(p.pn),
            pm: Some(p.pm),
            zd: Some(p.z_d_gcc_g),
            pt: match p.pt {
                PathRatio::Converged(x) => Some(x),
                PathRatio::NonConvergent | PathRatio::Undefined => None,
            },
        },
        Err(_) => AnalyticColumns::default(),
    }
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<AggregateRow>> {
    plan.validate()?;
    let mut rows = Vec::new();
    let cells_per_graph = plan.alphas.len() * plan.heuristics.len();
    for (pi, point) in plan.points.iter().enumerate() {
        let model = point.model(plan.cap())?;
        if !model.above_phase_transition().unwrap_or(false) {
            eprintln!(
                "warning: skipping {} {} (not above the phase transition)",
                point.family.name(),
                point.param
            );
            continue;
        }
        let per_graph: Vec<Option<Vec<Cell>>> = (0..plan.graphs)
            .into_par_iter()
            .map(|gi| run_graph(plan, &model, pi, gi))
            .collect::<Result<_>>()?;
        let skipped = per_graph.iter().filter(|c| c.is_none()).count();
        let usable: Vec<&Vec<Cell>> = per_graph.iter().flatten().collect();
        for ci in 0..cells_per_graph {
            let alpha = plan.alphas[ci / plan.heuristics.len()];
            let h = plan.heuristics[ci % plan.heuristics.len()];
            let gather = |f: fn(&Cell) -> &[f64]| -> Vec<f64> {
                usable.iter().flat_map(|cells| f(&cells[ci]).iter().copied()).collect()
            };
            let zd: Vec<f64> = usable.iter().map(|cells| cells[ci].zd).collect();
            rows.push(AggregateRow {
                point: *point,
                alpha,
                heuristic: h,
                gamma: plan.gamma,
                pn: Estimate::from_samples(&gather(|c| &c.pn)),
                pm: Estimate::from_samples(&gather(|c| &c.pm)),
                zd: Estimate::from_samples(&zd),
                pt: Estimate::from_samples(&gather(|c| &c.pt)),
                analytic: analytic_columns(&model, alpha, h, plan.n, plan.gamma),
                skipped_graphs: skipped,
            });
        }
    }
    Ok(rows)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One CSV line (no newline) in [`CSV_HEADER`] order. Rust float formatting
/// never uses locale-dependent separators.
pub fn csv_line(r: &AggregateRow) -> String {
    [
        r.point.family.name().to_string(),
        r.point.param.to_string(),
        r.alpha.to_string(),
        r.heuristic.name().to_string(),
        r.gamma.to_string(),
        r.pn.mean.to_string(),
        r.pn.se.to_string(),
        r.pm.mean.to_string(),
        r.pm.se.to_string(),
        r.zd.mean.to_string(),
        r.zd.se.to_string(),
        r.pt.mean.to_string(),
        r.pt.se.to_string(),
        opt(r.analytic.pn),
        opt(r.analytic.pm),
        opt(r.analytic.zd),
        opt(r.analytic.pt),
    ]
    .join(",")
}

pub fn write_csv<W: Write>(rows: &[AggregateRow], mut w: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no rows to write".into()));
    }
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", csv_line(r))?;
    }
    Ok(())
}

pub fn emit_csv(rows: &[AggregateRow], path: &std::path::Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parse rows written by [`write_csv`] back, as far as plotting needs them.
pub fn read_csv(text: &str) -> Result<Vec<AggregateRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "unexpected header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 17 {
            return Err(bad("expected 17 fields"));
        }
        let num = |k: usize| f[k].parse::<f64>().map_err(|_| bad("bad number"));
        let maybe = |k: usize| -> Result<Option<f64>> {
            if f[k].is_empty() {
                Ok(None)
            } else {
                num(k).map(Some)
            }
        };
        let est = |k: usize| -> Result<Estimate> {
            Ok(Estimate {
                mean: num(k)?,
                se: num(k + 1)?,
                count: 0,
            })
        };
        rows.push(AggregateRow {
            point: ModelPoint {
                family: f[0].parse()?,
                param: num(1)?,
            },
            alpha: num(2)?,
            heuristic: f[3].parse()?,
            gamma: num(4)?,
            pn: est(5)?,
            pm: est(7)?,
            zd: est(9)?,
            pt: est(11)?,
            analytic: AnalyticColumns {
                pn: maybe(13)?,
                pm: maybe(14)?,
                zd: maybe(15)?,
                pt: maybe(16)?,
            },
            skipped_graphs: 0,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoke(seed: u64) -> ExperimentPlan {
        ExperimentPlan {
            graphs: 1,
            runs: 1,
            n: 10,
            seed,
            ..ExperimentPlan::new(vec![ModelPoint::poisson(5.0)])
        }
    }

    #[test]
    fn smoke_plan_one_row_per_cell() {
        let rows = run_experiment(&smoke(1)).unwrap();
        assert_eq!(rows.len(), 10);
        for r in &rows {
            for e in [r.pn, r.pm, r.pt, r.zd] {
                assert!(e.mean.is_finite() && e.se.is_finite() && e.se >= 0.0);
            }
        }
    }

    #[test]
    fn figure_presets() {
        let f1 = ExperimentPlan::figure(1).unwrap();
        assert_eq!(f1.points.len(), 10);
        assert_eq!(f1.alphas, DEFAULT_ALPHAS.to_vec());
        let f2 = ExperimentPlan::figure(2).unwrap();
        assert_eq!(f2.points.first().unwrap().param, 2.0);
        assert_eq!(f2.points.last().unwrap().param, 3.0);
        assert_eq!(f2.points.len(), 11);
        let f3 = ExperimentPlan::figure(3).unwrap();
        assert_eq!(f3.gamma, 0.95);
        assert_eq!(f3.heuristics, vec![Heuristic::DegreeBased]);
        assert!(ExperimentPlan::figure(4).is_err());
    }

    #[test]
    fn below_transition_points_skipped() {
        let plan = ExperimentPlan {
            graphs: 1,
            runs: 2,
            n: 50,
            alphas: vec![0.5],
            heuristics: vec![Heuristic::Uniform],
            ..ExperimentPlan::new(vec![ModelPoint::poisson(0.5), ModelPoint::poisson(4.0)])
        };
        let rows = run_experiment(&plan).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].point.param, 4.0);
    }

    #[test]
    fn invalid_plans_rejected() {
        let mut p = smoke(0);
        p.runs = 0;
        assert!(run_experiment(&p).is_err());
        let mut p = smoke(0);
        p.alphas = vec![0.0];
        assert!(run_experiment(&p).is_err());
    }

    #[test]
    fn csv_round_trip_and_empty_fields() {
        let mut rows = run_experiment(&smoke(2)).unwrap();
        rows[0].analytic.pt = None;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), rows.len() + 1);
        let first = text.lines().nth(1).unwrap();
        assert!(first.ends_with(','), "{first}");
        let back = read_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        assert_eq!(back[0].pn.mean, rows[0].pn.mean);
        assert_eq!(back[0].analytic.pt, None);
        assert!(write_csv(&[], Vec::new()).is_err());
    }

    #[test]
    fn estimate_basics() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0]);
        assert_eq!(e.mean, 2.0);
        assert!((e.se - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(Estimate::from_samples(&[4.0]).se, 0.0);
    }

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(grid(1.0, 3.0, 1.0), vec![1.0, 2.0, 3.0]);
        assert_eq!(grid(2.0, 2.3, 0.1), vec![2.0, 2.1, 2.2, 2.3]);
    }
}
