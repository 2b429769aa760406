use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::Rng;

use dsub::analytics::{self, PathRatio, Prediction};
use dsub::dissemination::{disseminate, measure};
use dsub::generators::{generate, GenSpec};
use dsub::harness::{self, emit_csv, grid, ExperimentPlan, Family, ModelPoint};
use dsub::heuristics::{build_subgraph, make_choices};
use dsub::plot::{emit_plot, Metric};
use dsub::rng::{self, tag};
use dsub::{DegreeModel, Graph, Heuristic};

#[derive(Parser)]
#[command(name = "dsub", version, about = "Dissemination subgraphs of random networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// poisson or powerlaw
    #[arg(long, default_value = "poisson")]
    model: String,
    /// Mean degree of the Poisson model.
    #[arg(long)]
    z: Option<f64>,
    /// Exponent of the power-law model.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = harness::DEFAULT_N)]
    n: usize,
    /// Degree cap (defaults to n - 1).
    #[arg(long)]
    max_degree: Option<usize>,
}

impl ModelArgs {
    fn point(&self) -> Result<ModelPoint> {
        let family: Family = self.model.parse()?;
        let param = match family {
            Family::Poisson => self.z.context("--z is required for the poisson model")?,
            Family::PowerLaw => self.tau.context("--tau is required for the powerlaw model")?,
        };
        Ok(ModelPoint { family, param })
    }

    fn cap(&self) -> usize {
        self.max_degree.unwrap_or(self.n.saturating_sub(1))
    }

    fn degree_model(&self) -> Result<DegreeModel> {
        Ok(self.point()?.model(self.cap())?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random graph and write it as an edge list.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the dissemination subgraph of a loaded graph.
    Build {
        #[arg(long)]
        load: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "uniform")]
        heuristic: Heuristic,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flood one dissemination subgraph repeatedly and report the metrics.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Use this graph instead of sampling one.
        #[arg(long)]
        load: Option<PathBuf>,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "uniform")]
        heuristic: Heuristic,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = harness::DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one CSV record per run here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write G as an edge list.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Write D as an edge list.
        #[arg(long)]
        dump_d: Option<PathBuf>,
    },
    /// Analytic predictions for the uniform rule.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Emit the analytic curves of figure 1, 2 or 3 instead of one point.
        #[arg(long)]
        sweep: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep and write aggregated CSV plus one SVG per metric.
    Experiment {
        /// Preset sweep of figure 1, 2 or 3.
        #[arg(long)]
        figure: Option<u32>,
        #[arg(long)]
        model: Option<String>,
        /// Sweep as lo:hi:step, or a single value.
        #[arg(long)]
        range: Option<String>,
        /// Comma-separated alphas.
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        /// Comma-separated heuristics.
        #[arg(long, value_delimiter = ',')]
        heuristic: Option<Vec<Heuristic>>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        graphs: Option<usize>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Skip the SVG plots.
        #[arg(long)]
        no_plots: bool,
    },
    /// Plot one metric from an experiment CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        metric: Metric,
        /// Restrict to one model family when the CSV holds several.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        heuristic: Option<Heuristic>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn writer(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Graph::read_edge_list(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn save_graph(g: &Graph, path: &Path) -> Result<()> {
    let mut w = writer(Some(path))?;
    g.write_edge_list(&mut w)?;
    w.flush()?;
    Ok(())
}

const PREDICT_HEADER: &str = "model,param,alpha,n,q,theta_g,theta_d,q_c,q_nc1,q_nc2,r,r_nc1,r_nc2,\
z_gcc_d,z_d_gcc_g,z_gcc_g,rho,l_g,l_d,pn,pm,pt,pt_status,gamma,bound";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn prediction_line(point: &ModelPoint, p: &Prediction) -> String {
    let status = match p.pt {
        PathRatio::Converged(_) => "converged",
        PathRatio::NonConvergent => "nonconvergent",
        PathRatio::Undefined => "undefined",
    };
    let f = p.failure;
    [
        point.family.name().to_string(),
        point.param.to_string(),
        p.alpha.to_string(),
        p.n.to_string(),
        p.q.to_string(),
        p.theta_g.to_string(),
        p.theta_d.to_string(),
        p.dead_ends.q_c.to_string(),
        p.dead_ends.q_nc1.to_string(),
        p.dead_ends.q_nc2.to_string(),
        p.r.to_string(),
        p.r_nc1.to_string(),
        p.r_nc2.to_string(),
        opt(p.z_gcc_d),
        p.z_d_gcc_g.to_string(),
        p.z_gcc_g.to_string(),
        p.rho.to_string(),
        p.l_g.to_string(),
        opt(p.l_d),
        p.pn.to_string(),
        p.pm.to_string(),
        opt(p.pt.value()),
        status.to_string(),
        opt(f.map(|f| f.gamma)),
        opt(f.map(|f| f.bound)),
    ]
    .join(",")
}

fn cmd_predict(
    model: &ModelArgs,
    alpha: Option<f64>,
    gamma: Option<f64>,
    sweep: Option<u32>,
    out: Option<&Path>,
) -> Result<()> {
    let mut w = writer(out)?;
    writeln!(w, "{PREDICT_HEADER}")?;
    let Some(fig) = sweep else {
        let alpha = alpha.context("--alpha is required")?;
        let point = model.point()?;
        let p = analytics::predict(&model.degree_model()?, alpha, model.n, gamma)?;
        writeln!(w, "{}", prediction_line(&point, &p))?;
        return Ok(w.flush()?);
    };
    let (points, alphas, gamma): (Vec<ModelPoint>, Vec<f64>, Option<f64>) = match fig {
        1 => (
            grid(1.0, 10.0, 0.1).into_iter().map(ModelPoint::poisson).collect(),
            harness::DEFAULT_ALPHAS.to_vec(),
            gamma,
        ),
        2 => (
            grid(2.0, 3.0, 0.02).into_iter().map(ModelPoint::power_law).collect(),
            harness::DEFAULT_ALPHAS.to_vec(),
            gamma,
        ),
        3 => (
            grid(1.0, 10.0, 0.1)
                .into_iter()
                .map(ModelPoint::poisson)
                .chain(grid(2.0, 3.0, 0.02).into_iter().map(ModelPoint::power_law))
                .collect(),
            vec![0.50, 0.75, 1.00],
            Some(gamma.unwrap_or(0.95)),
        ),
        k => bail!("no figure {k}"),
    };
    let alphas = alpha.map(|a| vec![a]).unwrap_or(alphas);
    for point in &points {
        let m = point.model(model.cap())?;
        for &a in &alphas {
            match analytics::predict(&m, a, model.n, gamma) {
                Ok(p) => writeln!(w, "{}", prediction_line(point, &p))?,
                Err(dsub::Error::BelowPhaseTransition) => break,
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(w.flush()?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    model: &ModelArgs,
    load: Option<&Path>,
    alpha: f64,
    heuristic: Heuristic,
    gamma: f64,
    runs: usize,
    seed: u64,
    out: Option<&Path>,
    dump: Option<&Path>,
    dump_d: Option<&Path>,
) -> Result<()> {
    if runs == 0 {
        bail!("--runs must be at least 1");
    }
    let g = match load {
        Some(p) => load_graph(p)?,
        None => generate(&GenSpec::new(model.n, model.degree_model()?, rng::derive(seed, &[tag::GRAPH])))?,
    };
    let table = make_choices(&g, heuristic, alpha, rng::derive(seed, &[tag::CHOICE]))?;
    let d = build_subgraph(&g, &table)?;
    if let Some(p) = dump {
        save_graph(&g, p)?;
    }
    if let Some(p) = dump_d {
        save_graph(&d, p)?;
    }
    let labels = g.components();
    let members = labels.giant_members();
    if members.len() <= 1 {
        bail!("largest component of G has {} node(s); nothing to disseminate over", members.len());
    }
    let mut rng = rng::stream(seed, &[tag::RUN]);
    let mut records = out.map(|p| writer(Some(p))).transpose()?;
    if let Some(w) = records.as_mut() {
        writeln!(w, "run,originator,reached,messages,pn,pm,pt")?;
    }
    let mut samples = Vec::with_capacity(runs);
    for run in 0..runs {
        let o = members[rng.gen_range(0..members.len())];
        let outcome = disseminate(&d, o, gamma, &mut rng)?;
        let m = measure(&g, &d, &outcome, &labels)?;
        if let Some(w) = records.as_mut() {
            writeln!(
                w,
                "{run},{o},{},{},{},{},{}",
                outcome.reached_count(),
                outcome.messages,
                m.pn,
                m.pm,
                m.pt
            )?;
        }
        samples.push(m);
    }
    if let Some(mut w) = records {
        w.flush()?;
    }
    let est = |f: fn(&dsub::dissemination::MetricSample) -> f64| {
        harness::Estimate::from_samples(&samples.iter().map(f).collect::<Vec<_>>())
    };
    let (pn, pm, pt) = (est(|s| s.pn), est(|s| s.pm), est(|s| s.pt));
    println!("nodes={} edges_g={} edges_d={} giant_g={}", g.node_count(), g.edge_count(), d.edge_count(), members.len());
    println!("pn={} pn_se={}", pn.mean, pn.se);
    println!("pm={} pm_se={}", pm.mean, pm.se);
    println!("pt={} pt_se={}", pt.mean, pt.se);
    println!("zd={}", samples[0].zd);
    Ok(())
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad range {s:?}"))?;
    match parts[..] {
        [x] => Ok(vec![x]),
        [lo, hi, step] if step > 0.0 && hi >= lo => Ok(grid(lo, hi, step)),
        _ => bail!("range must be a value or lo:hi:step, got {s:?}"),
    }
}

fn cmd_plot(input: &Path, metric: Metric, model: Option<&str>, heuristic: Option<Heuristic>, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
    let mut rows = harness::read_csv(&text)?;
    if let Some(m) = model {
        let fam: Family = m.parse()?;
        rows.retain(|r| r.point.family == fam);
    }
    if let Some(h) = heuristic {
        rows.retain(|r| r.heuristic == h);
    }
    emit_plot(&rows, metric, out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { model, seed, out } => {
            let g = generate(&GenSpec::new(model.n, model.degree_model()?, seed))?;
            let mut w = writer(out.as_deref())?;
            g.write_edge_list(&mut w)?;
            w.flush()?;
        }
        Command::Build {
            load,
            alpha,
            heuristic,
            seed,
            out,
        } => {
            let g = load_graph(&load)?;
            let d = build_subgraph(&g, &make_choices(&g, heuristic, alpha, seed)?)?;
            let mut w = writer(out.as_deref())?;
            d.write_edge_list(&mut w)?;
            w.flush()?;
        }
        Command::Simulate {
            model,
            load,
            alpha,
            heuristic,
            gamma,
            runs,
            seed,
            out,
            dump,
            dump_d,
        } => cmd_simulate(
            &model,
            load.as_deref(),
            alpha,
            heuristic,
            gamma,
            runs,
            seed,
            out.as_deref(),
            dump.as_deref(),
            dump_d.as_deref(),
        )?,
        Command::Predict {
            model,
            alpha,
            gamma,
            sweep,
            out,
        } => cmd_predict(&model, alpha, gamma, sweep, out.as_deref())?,
        Command::Experiment {
            figure,
            model,
            range,
            alpha,
            heuristic,
            gamma,
            graphs,
            runs,
            n,
            max_degree,
            seed,
            out,
            no_plots,
        } => {
            let mut plan = match (figure, model) {
                (Some(k), None) => ExperimentPlan::figure(k)?,
                (None, Some(m)) => {
                    let family: Family = m.parse()?;
                    let range = range.context("--range is required with --model")?;
                    let points = parse_range(&range)?
                        .into_iter()
                        .map(|param| ModelPoint { family, param })
                        .collect();
                    ExperimentPlan::new(points)
                }
                (Some(_), Some(_)) => bail!("--figure and --model are mutually exclusive"),
                (None, None) => bail!("one of --figure or --model is required"),
            };
            if let Some(a) = alpha {
                plan.alphas = a;
            }
            if let Some(h) = heuristic {
                plan.heuristics = h;
            }
            if let Some(g) = gamma {
                plan.gamma = g;
            }
            plan.graphs = graphs.unwrap_or(plan.graphs);
            plan.runs = runs.unwrap_or(plan.runs);
            plan.n = n.unwrap_or(plan.n);
            plan.max_degree = max_degree.or(plan.max_degree);
            plan.seed = seed;
            let rows = harness::run_experiment(&plan)?;
            if rows.is_empty() {
                bail!("every point of the sweep is below the phase transition");
            }
            std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
            let stem = figure.map(|k| format!("figure{k}")).unwrap_or_else(|| "experiment".into());
            emit_csv(&rows, &out.join(format!("{stem}.csv")))?;
            if !no_plots {
                for fam in [Family::Poisson, Family::PowerLaw] {
                    for h in &plan.heuristics {
                        let subset: Vec<_> = rows
                            .iter()
                            .filter(|r| r.point.family == fam && r.heuristic == *h)
                            .cloned()
                            .collect();
                        if subset.is_empty() {
                            continue;
                        }
                        for metric in [Metric::Pn, Metric::Pm, Metric::Zd, Metric::Pt] {
                            let name = format!("{stem}_{}_{}_{:?}.svg", fam.name(), h.name(), metric).to_lowercase();
                            emit_plot(&subset, metric, &out.join(name))?;
                        }
                    }
                }
            }
        }
        Command::Plot {
            input,
            metric,
            model,
            heuristic,
            out,
        } => cmd_plot(&input, metric, model.as_deref(), heuristic, &out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
