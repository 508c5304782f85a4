use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use geotsp::construct::{karp_partition_tour, line_greedy_tour, nn_lower_bound, solve_direct, KarpConfig};
use geotsp::exact::{brute_force_tour, held_karp};
use geotsp::experiments::{
    concentration_check, continuity_check, estimate_beta, scaling_fit, threshold_scan, trial_instance,
    verify_permutation_lemma, BetaConfig, ConcentrationConfig, ContinuityConfig, ExperimentReport, ScalingConfig,
    Sweep, ThresholdConfig,
};
use geotsp::geodesics::shortest_path;
use geotsp::model::{apply_geometric_filter, parse_graph, write_graph};
use geotsp::{BlockProcess, Graph64, RngSeed, Tour64};
use serde_json::{json, Value};

use crate::args::*;
use crate::plot::{emit_plot, PlotSpec, OVERLAY_COLUMNS};
use crate::CliError;

/// What a subcommand produced: lines for standard output and the files
/// it wrote.
#[derive(Debug, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

struct Ctx<'a> {
    cli: &'a Cli,
    run_config: Value,
    out: Outcome,
}

impl Ctx<'_> {
    fn global(&self) -> &GlobalArgs {
        &self.cli.global
    }

    fn say(&mut self, line: impl Into<String>) {
        self.out.lines.push(line.into());
    }

    fn out_dir(&self) -> Result<&Path, CliError> {
        let dir = &self.global().out_dir;
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(dir)
    }

    fn default_path(&self, explicit: &Option<PathBuf>, name: &str) -> Result<PathBuf, CliError> {
        match explicit {
            Some(p) => Ok(p.clone()),
            None => Ok(self.out_dir()?.join(name)),
        }
    }

    fn write_file(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
        self.out.files.push(path.to_owned());
        Ok(())
    }

    /// Echoes the run configuration into `report`, saves it and, with
    /// `--plot`, renders it.
    fn finish(&mut self, mut report: ExperimentReport, plot: PlotSpec) -> Result<(), CliError> {
        match &mut report.parameters {
            Value::Object(map) => {
                map.insert("run_config".into(), self.run_config.clone());
            }
            other => *other = json!({ "operation": other.take(), "run_config": self.run_config }),
        }
        let dir = self.out_dir()?.to_owned();
        let files = report.save(&dir, self.global().format.into())?;
        self.out.files.extend(files);
        if self.global().plot {
            let path = dir.join(format!("{}.svg", report.experiment_id));
            emit_plot(&report, &plot, &path)?;
            self.out.files.push(path);
        }
        Ok(())
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let run_config = serde_json::to_value(cli).expect("run configuration serializes");
    log::info!("effective configuration: {run_config}");
    let mut ctx = Ctx { cli, run_config, out: Outcome::default() };
    let config_path = ctx.out_dir()?.join(format!("{}.config.json", cli.command.name()));
    let pretty = serde_json::to_vec_pretty(&ctx.run_config).expect("JSON value serializes");
    ctx.write_file(&config_path, &pretty)?;
    match &cli.command {
        Command::Generate(a) => generate(&mut ctx, a)?,
        Command::Geodesic(a) => geodesic(&mut ctx, a)?,
        Command::Tour(a) => tour(&mut ctx, a)?,
        Command::Exact(a) => exact(&mut ctx, a)?,
        Command::ScanThreshold(a) => scan_threshold(&mut ctx, a)?,
        Command::FitScaling(a) => fit_scaling(&mut ctx, a)?,
        Command::EstimateBeta(a) => beta(&mut ctx, a)?,
        Command::VerifyLemmas(a) => verify_lemmas(&mut ctx, a)?,
        Command::Concentration(a) => concentration(&mut ctx, a)?,
        Command::Continuity(a) => continuity(&mut ctx, a)?,
    }
    Ok(ctx.out)
}

pub fn load_graph(path: &Path) -> Result<Graph64, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    parse_graph(&bytes).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

/// Path-overlay layout: every vertex with a NaN step, then `path` in order.
pub fn overlay_report(
    id: &str,
    graph: &Graph64,
    path: &[usize],
    parameters: &Value,
    seed: u64,
) -> Result<ExperimentReport, CliError> {
    let mut report = ExperimentReport::new(id, parameters, seed, &OVERLAY_COLUMNS)?;
    let xy = |v: usize| {
        let p = graph.cloud().point(v);
        (p[0], p.get(1).copied().unwrap_or(0.0))
    };
    for v in 0..graph.len() {
        let (x, y) = xy(v);
        report.push_row(graph.seed(), vec![v as f64, x, y, f64::NAN]);
    }
    for (step, &v) in path.iter().enumerate() {
        let (x, y) = xy(v);
        report.push_row(graph.seed(), vec![v as f64, x, y, step as f64]);
    }
    Ok(report)
}

fn closed(tour: &Tour64) -> Vec<usize> {
    let mut path = tour.order().to_vec();
    path.extend(tour.order().first());
    path
}

fn generate(ctx: &mut Ctx, a: &GenerateArgs) -> Result<(), CliError> {
    let mut graph = trial_instance(a.n, a.d, a.p, ctx.global().seed)?;
    if let Some(r) = a.radius {
        graph = apply_geometric_filter(&graph, r)?;
    }
    let path = ctx.default_path(&a.out, "graph.geograph")?;
    let mut buf = BufWriter::new(Vec::new());
    write_graph(&graph, &mut buf).map_err(|e| CliError::io(&path, e))?;
    let bytes = buf.into_inner().expect("Vec writer flushes");
    ctx.write_file(&path, &bytes)?;
    ctx.say(format!("graph n={} d={} edges={} -> {}", graph.len(), graph.dim(), graph.edge_count(), path.display()));
    if ctx.global().plot {
        let report = overlay_report("generate", &graph, &[], &json!({ "n": a.n, "d": a.d, "p": a.p }), graph.seed())?;
        let svg = ctx.out_dir()?.join("generate.svg");
        emit_plot(&report, &PlotSpec::path_overlay(), &svg)?;
        ctx.out.files.push(svg);
    }
    Ok(())
}

fn geodesic(ctx: &mut Ctx, a: &GeodesicArgs) -> Result<(), CliError> {
    let graph = load_graph(&a.input)?;
    let r = shortest_path(&graph, a.source, a.target)?;
    let params = json!({
        "input": a.input,
        "source": a.source,
        "target": a.target,
        "graph_distance": r.graph_distance.value(),
        "euclidean_distance": r.euclidean_distance,
        "hops": r.hops.value(),
    });
    match r.graph_distance.value() {
        Some(dx) => ctx.say(format!(
            "d_X={dx} d_E={} excess={} hops={}",
            r.euclidean_distance,
            r.excess(),
            r.path.len().saturating_sub(1)
        )),
        None => ctx.say(format!("UNREACHABLE d_E={}", r.euclidean_distance)),
    }
    let report = overlay_report("geodesic", &graph, &r.path, &params, graph.seed())?;
    ctx.finish(report, PlotSpec::path_overlay())
}

fn tour(ctx: &mut Ctx, a: &TourArgs) -> Result<(), CliError> {
    let graph = load_graph(&a.input)?;
    let seed = RngSeed::new(ctx.global().seed, "tour");
    let tour = match a.method {
        TourMethod::KarpPartition => {
            let p = graph.edge_probability();
            if p <= 0.0 {
                return Err(CliError::Usage(format!(
                    "karp-partition needs a positive edge probability, graph has {p}"
                )));
            }
            let config = KarpConfig::with_density(a.k0 / p);
            karp_partition_tour(&graph, &config, &seed).map_err(|e| CliError::Failure(e.to_string()))?.tour
        }
        TourMethod::PosaReduce => {
            solve_direct(&graph, &KarpConfig::default(), &seed).map_err(|e| CliError::Failure(e.to_string()))?
        }
        TourMethod::LineGreedy => line_greedy_tour(&graph).map_err(|e| CliError::Failure(e.to_string()))?.tour,
    };
    write_tour(ctx, "tour", &graph, &tour, &a.out, json!({ "input": a.input, "method": a.method, "k0": a.k0 }))
}

fn exact(ctx: &mut Ctx, a: &ExactArgs) -> Result<(), CliError> {
    let graph = load_graph(&a.input)?;
    let found = match a.solver {
        Solver::HeldKarp => held_karp(&graph)?,
        Solver::BruteForce => brute_force_tour(&graph)?,
    };
    let Some(tour) = found else {
        return Err(CliError::Infeasible(format!("no Hamilton cycle on {} vertices", graph.len())));
    };
    write_tour(ctx, "exact", &graph, &tour, &a.out, json!({ "input": a.input, "solver": a.solver }))
}

fn write_tour(
    ctx: &mut Ctx,
    id: &str,
    graph: &Graph64,
    tour: &Tour64,
    out: &Option<PathBuf>,
    mut params: Value,
) -> Result<(), CliError> {
    let path = ctx.default_path(out, &format!("{id}.txt"))?;
    ctx.write_file(&path, tour.to_text().as_bytes())?;
    let bound = nn_lower_bound(graph).value;
    params["length"] = json!(tour.length());
    params["lower_bound"] = json!(bound);
    ctx.say(format!("length={} lower_bound={bound} n={} -> {}", tour.length(), tour.len(), path.display()));
    let report = overlay_report(id, graph, &closed(tour), &params, graph.seed())?;
    ctx.finish(report, PlotSpec::path_overlay())
}

fn say_json(ctx: &mut Ctx, label: &str, value: &impl serde::Serialize) {
    let line = serde_json::to_string(value).expect("plain data serializes");
    ctx.say(format!("{label} {line}"));
}

fn scan_threshold(ctx: &mut Ctx, a: &ThresholdArgs) -> Result<(), CliError> {
    let out = threshold_scan(&ThresholdConfig {
        d: a.d,
        n: a.n,
        omega_grid: a.omega_grid.clone(),
        pairs_per_trial: a.pairs,
        trials: a.trials,
        seed: ctx.global().seed,
    })?;
    for p in &out.points {
        say_json(ctx, "point", p);
    }
    ctx.finish(out.report, PlotSpec::scatter("unreachable_fraction", "median_excess", Some("omega")))
}

fn fit_scaling(ctx: &mut Ctx, a: &ScalingArgs) -> Result<(), CliError> {
    let (sweep, x) = match a.sweep {
        SweepAxis::N => (Sweep::N { p: a.p, n_grid: a.n_grid.clone() }, "n"),
        SweepAxis::P => (Sweep::P { n: a.n, p_grid: a.p_grid.clone() }, "p"),
    };
    let out = scaling_fit(&ScalingConfig {
        d: a.d,
        sweep,
        trials: a.trials,
        heuristic: a.heuristic.into(),
        k0: a.k0,
        seed: ctx.global().seed,
        paper_convention: a.paper_convention,
    })?;
    for p in &out.points {
        say_json(ctx, "point", p);
    }
    ctx.say(format!(
        "slope_{x}={:.6} stderr={:.6} r_squared={:.6} lower_bound_violations={}",
        out.fit.slope, out.fit.slope_stderr, out.fit.r_squared, out.lower_bound_violations
    ));
    ctx.finish(out.report, PlotSpec::loglog(x, "T"))
}

fn beta(ctx: &mut Ctx, a: &BetaArgs) -> Result<(), CliError> {
    let out = estimate_beta(&BetaConfig {
        d: a.d,
        p: a.p,
        n_grid: a.n_grid.clone(),
        trials: a.trials,
        heuristic: a.heuristic.into(),
        k0: a.k0,
        seed: ctx.global().seed,
    })?;
    for p in &out.points {
        say_json(ctx, "point", p);
    }
    ctx.say(format!(
        "beta_hat={:.6} relative_change={:.6} intervals_overlap={} lower_bound_violations={}",
        out.beta_hat, out.relative_change, out.intervals_overlap, out.lower_bound_violations
    ));
    ctx.finish(out.report, PlotSpec::scatter("n", "ratio", None))
}

fn verify_lemmas(ctx: &mut Ctx, a: &LemmaArgs) -> Result<(), CliError> {
    let out = verify_permutation_lemma(a.n_max)?;
    ctx.say(format!("permutations={} violations={} max_gap={}", out.permutations, out.violations, out.max_gap));
    let violations = out.violations;
    ctx.finish(out.report, PlotSpec::scatter("n", "max_gap", None))?;
    if violations > 0 {
        return Err(CliError::Failure(format!("{violations} permutations violate the inequality")));
    }
    Ok(())
}

fn concentration(ctx: &mut Ctx, a: &ConcentrationArgs) -> Result<(), CliError> {
    let process = match a.process {
        ProcessKind::UnitPoisson => BlockProcess::UnitPoisson { intensity: a.intensity },
        ProcessKind::BernoulliCenter => BlockProcess::BernoulliCenter { rho: a.rho },
        ProcessKind::FixedGrid => BlockProcess::FixedGrid,
    };
    let out = concentration_check(&ConcentrationConfig {
        process,
        d: a.d,
        block_grid: a.blocks.clone(),
        trials: a.trials,
        delta: a.delta,
        seed: ctx.global().seed,
    })?;
    for p in &out.points {
        say_json(ctx, "point", p);
    }
    ctx.say(format!("strictly_decreasing={}", out.strictly_decreasing));
    ctx.finish(out.report, PlotSpec::scatter("blocks", "count", None))
}

fn continuity(ctx: &mut Ctx, a: &ContinuityArgs) -> Result<(), CliError> {
    let out = continuity_check(&ContinuityConfig {
        d: a.d,
        p: a.p,
        n: a.n,
        delta_grid: a.delta_grid.clone(),
        trials: a.trials,
        heuristic: a.heuristic.into(),
        k0: a.k0,
        seed: ctx.global().seed,
        epsilon: a.epsilon,
    })?;
    for p in &out.points {
        say_json(ctx, "point", p);
    }
    ctx.finish(out.report, PlotSpec::scatter("delta", "excess", None))
}

/// Writes `lines` to `out`, one per line.
pub fn print_lines(out: &mut impl Write, lines: &[String]) -> std::io::Result<()> {
    for line in lines {
        writeln!(out, "{line}")?;
    }
    Ok(())
}
