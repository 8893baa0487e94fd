mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use shiftframe::analytic::{jensen_audit, rolle_trials, DiscreteMeasure, RolleTrialConfig};
use shiftframe::gabor::{lattice_sweep, FrameParams, FrameVerdict, SWEEP_CSV_HEADER};
use shiftframe::pointset::make_jittered;
use shiftframe::pregramian::{default_margin, sampling_bounds, SamplingOptions};
use shiftframe::reconstruct::{interpolate, recover, window_nodes, SolveOptions, Solver};
use shiftframe::zak::{zak_grid, zak_zero_search};
use shiftframe::{Generator, PointSet};

use io::{parse_list, parse_range, positive, read_generator, read_values, write_csv, write_json, RunConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "shiftframe",
    version,
    about = "Sampling and Gabor frame numerics for Gaussian-type windows"
)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "SHIFTFRAME_THREADS")]
    threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct PointSource {
    /// File with one point per line.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Lattice spacing alpha.
    #[arg(long)]
    lattice: Option<f64>,
    /// Jittered lattice `alpha,jitter,seed,span`.
    #[arg(long)]
    jitter: Option<String>,
}

impl PointSource {
    /// Loads the set; generated lattices reach `reach` on both sides.
    fn load(&self, reach: f64) -> Result<(PointSet, String)> {
        if let Some(path) = &self.points {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok((PointSet::parse(&text)?, format!("file:{}", path.display())));
        }
        if let Some(alpha) = self.lattice {
            let p = PointSet::lattice_covering(positive("lattice", alpha)?, reach)?;
            return Ok((p, format!("lattice:{alpha}")));
        }
        let spec = self.jitter.as_deref().unwrap_or_default();
        let v = parse_list(spec)?;
        let [alpha, j, seed, span] = v[..] else {
            bail!("--jitter takes alpha,jitter,seed,span");
        };
        if seed < 0.0 || seed.fract() != 0.0 || span < 1.0 || span.fract() != 0.0 {
            bail!("--jitter seed and span must be nonnegative integers");
        }
        Ok((
            make_jittered(alpha, j, seed as u64, span as u32)?,
            format!("jitter:{spec}"),
        ))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the window at a point.
    Eval {
        #[arg(long)]
        gen: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Separation and Beurling density estimates of a point set.
    Density {
        #[command(flatten)]
        source: PointSource,
        /// Window radius; a quarter of the extent by default.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Zak transform on a uniform grid of the unit square.
    Zak {
        #[arg(long)]
        gen: PathBuf,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Lower and upper sampling bounds of a truncated pre-Gramian.
    SampleBounds {
        #[arg(long)]
        gen: PathBuf,
        #[command(flatten)]
        source: PointSource,
        #[arg(long = "T", default_value_t = 40.0)]
        t: f64,
        /// Interior margin; `ceil(5 / separation)` by default.
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1e-8)]
        floor: f64,
    },
    /// Frame bounds of `alpha Z x beta Z` over a range of beta.
    GaborSweep {
        #[arg(long)]
        gen: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// `start:stop:step`.
        #[arg(long)]
        betas: String,
        #[arg(long = "T", default_value_t = 40.0)]
        t: f64,
        #[arg(long, default_value_t = 64)]
        xres: usize,
        #[arg(long, default_value_t = 12)]
        margin: usize,
    },
    /// Recover coefficients from samples on the window nodes.
    Reconstruct {
        #[arg(long)]
        gen: PathBuf,
        #[command(flatten)]
        source: PointSource,
        /// One sample per node in `[-T, T]`, in increasing node order.
        #[arg(long)]
        samples: PathBuf,
        #[arg(long = "T", default_value_t = 40.0)]
        t: f64,
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
    },
    /// Minimum-norm coefficients interpolating values on the window nodes.
    Interpolate {
        #[arg(long)]
        gen: PathBuf,
        #[command(flatten)]
        source: PointSource,
        #[arg(long)]
        values: PathBuf,
        #[arg(long = "T", default_value_t = 40.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
    },
    /// Randomised zero-count audits of the factor-removal step.
    Rolle {
        #[arg(long)]
        gen: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// `a,b`.
        #[arg(long, default_value = "-15,15", allow_hyphen_values = true)]
        interval: String,
        #[arg(long, default_value_t = 0.005)]
        grid: f64,
    },
    /// Jensen audit of the Bargmann transform of a discrete measure.
    FockAudit {
        /// JSON `{"atoms": [[t, re, im], ...]}`.
        #[arg(long)]
        measure: PathBuf,
        /// Comma-separated radii.
        #[arg(long)]
        radii: String,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SolverArg {
    Auto,
    Dense,
    Iterative,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Auto => Solver::Auto,
            SolverArg::Dense => Solver::Dense,
            SolverArg::Iterative => Solver::Iterative,
        }
    }
}

impl SolverArg {
    fn name(self) -> &'static str {
        match self {
            SolverArg::Auto => "auto",
            SolverArg::Dense => "dense",
            SolverArg::Iterative => "iterative",
        }
    }
}

/// How a finished run should exit.
enum Status {
    Done,
    Inconclusive,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Inconclusive) => ExitCode::from(EXIT_INCONCLUSIVE),
        Err(e) => {
            eprintln!("error: {e:#}");
            let numerical = e
                .downcast_ref::<shiftframe::Error>()
                .is_some_and(shiftframe::Error::is_numerical);
            ExitCode::from(if numerical { EXIT_NUMERICAL } else { EXIT_USAGE })
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    let (seed, out) = (cli.seed, cli.out);
    match cli.command {
        Command::Eval { gen, x, tol } => {
            let spec = read_generator(&gen)?;
            let g = Generator::new(&spec)?;
            let value = g.eval(x, positive("tol", tol)?)?;
            match out {
                Some(_) => {
                    let mut cfg = RunConfig::new("eval", seed, out);
                    cfg.generator = Some(gen);
                    cfg.param("x", x).param("tol", tol);
                    write_json(&cfg, json!({ "x": x, "value": value }))?;
                }
                None => println!("{value:.16e}"),
            }
        }
        Command::Density { source, radius } => {
            let (points, label) = source.load(100.0)?;
            let radius = match radius {
                Some(r) => positive("radius", r)?,
                None => 0.25 * (points.max().unwrap_or(0.0) - points.min().unwrap_or(0.0)),
            };
            let mut cfg = RunConfig::new("density", seed, out);
            cfg.points = Some(label);
            cfg.param("radius", radius);
            let d = points.beurling(radius)?;
            write_json(
                &cfg,
                json!({
                    "count": points.len(),
                    "separation": points.separation()?,
                    "rel_separation": points.rel_separation(),
                    "density": d,
                }),
            )?;
        }
        Command::Zak { gen, grid, tol } => {
            if grid == 0 {
                bail!("--grid must be positive");
            }
            let spec = read_generator(&gen)?;
            let g = Generator::new(&spec)?;
            let mut cfg = RunConfig::new("zak", seed, out);
            cfg.generator = Some(gen);
            cfg.param("grid", grid).param("tol", positive("tol", tol)?);
            let z = zak_grid(&g, grid, grid, tol)?;
            let zeros = zak_zero_search(&g, 64, 1e-10)?;
            let mut body = String::new();
            for p in &zeros {
                body.push_str(&format!("# zero {:.16e} {:.16e} {:.16e}\n", p.x, p.xi, p.abs));
            }
            body.push_str(&z.to_csv());
            write_csv(&cfg, &body)?;
        }
        Command::SampleBounds {
            gen,
            source,
            t,
            margin,
            x,
            floor,
        } => {
            let spec = read_generator(&gen)?;
            let g = Generator::new(&spec)?;
            let t = positive("T", t)?;
            let (points, label) = source.load(t + 1.0)?;
            let margin = margin.unwrap_or(default_margin(&points));
            let mut cfg = RunConfig::new("sample-bounds", seed, out);
            cfg.generator = Some(gen);
            cfg.points = Some(label);
            cfg.param("T", t)
                .param("margin", margin)
                .param("x", x)
                .param("floor", positive("floor", floor)?);
            let opts = SamplingOptions {
                t,
                margin: Some(margin),
                x,
                floor_rel: floor,
                ..SamplingOptions::default()
            };
            write_json(&cfg, sampling_bounds(&g, &points, &opts)?)?;
        }
        Command::GaborSweep {
            gen,
            alpha,
            betas,
            t,
            xres,
            margin,
        } => {
            let spec = read_generator(&gen)?;
            let beta_values = parse_range(&betas)?;
            for &b in &beta_values {
                positive("betas", b)?;
            }
            if xres == 0 {
                bail!("--xres must be positive");
            }
            let mut cfg = RunConfig::new("gabor-sweep", seed, out);
            cfg.generator = Some(gen);
            cfg.param("alpha", positive("alpha", alpha)?)
                .param("betas", &betas)
                .param("T", positive("T", t)?)
                .param("xres", xres)
                .param("margin", margin);
            let params = FrameParams {
                t,
                margin,
                x_resolution: xres,
                ..FrameParams::default()
            };
            let reports = lattice_sweep(&spec, alpha, &beta_values, &params)?;
            let mut body = format!("{SWEEP_CSV_HEADER}\n");
            for r in &reports {
                body.push_str(&shiftframe::gabor::sweep_csv_row(r, alpha));
                body.push('\n');
            }
            write_csv(&cfg, &body)?;
            if reports.iter().any(|r| r.verdict == FrameVerdict::Inconclusive) {
                return Ok(Status::Inconclusive);
            }
        }
        Command::Reconstruct {
            gen,
            source,
            samples,
            t,
            margin,
            solver,
        } => {
            let spec = read_generator(&gen)?;
            let g = Generator::new(&spec)?;
            let t = positive("T", t)?;
            let (points, label) = source.load(t + 1.0)?;
            let margin = margin.unwrap_or(default_margin(&points));
            let data = read_values(&samples)?;
            let mut cfg = RunConfig::new("reconstruct", seed, out);
            cfg.generator = Some(gen);
            cfg.points = Some(label);
            cfg.param("samples", &samples)
                .param("T", t)
                .param("margin", margin)
                .param("solver", solver.name());
            let opts = SolveOptions {
                solver: solver.into(),
                ..SolveOptions::default()
            };
            let r = recover(&g, &points, &data, t, margin, &opts)?;
            write_json(&cfg, Solution::new(&r, &points, t, &data))?;
        }
        Command::Interpolate {
            gen,
            source,
            values,
            t,
            solver,
        } => {
            let spec = read_generator(&gen)?;
            let g = Generator::new(&spec)?;
            let t = positive("T", t)?;
            let (points, label) = source.load(t + 1.0)?;
            let data = read_values(&values)?;
            let mut cfg = RunConfig::new("interpolate", seed, out);
            cfg.generator = Some(gen);
            cfg.points = Some(label);
            cfg.param("values", &values)
                .param("T", t)
                .param("solver", solver.name());
            let opts = SolveOptions {
                solver: solver.into(),
                ..SolveOptions::default()
            };
            let r = interpolate(&g, &points, &data, t, &opts)?;
            write_json(&cfg, Solution::new(&r, &points, t, &data))?;
        }
        Command::Rolle {
            gen,
            trials,
            interval,
            grid,
        } => {
            let spec = read_generator(&gen)?;
            let bounds = parse_list(&interval)?;
            let [a, b] = bounds[..] else {
                bail!("--interval takes a,b");
            };
            let mut cfg = RunConfig::new("rolle", seed, out);
            cfg.generator = Some(gen);
            cfg.param("trials", trials)
                .param("interval", [a, b])
                .param("grid", positive("grid", grid)?);
            let config = RolleTrialConfig {
                trials,
                interval: (a, b),
                grid_step: grid,
                seed,
                ..RolleTrialConfig::default()
            };
            let audits = rolle_trials(&spec, &config)?;
            let rows: Vec<_> = audits
                .iter()
                .enumerate()
                .map(|(i, a)| json!({ "trial": i, "before": a.before.count, "after": a.after.count, "ok": a.ok }))
                .collect();
            let passed = audits.iter().filter(|a| a.ok).count();
            write_json(&cfg, json!({ "trials": trials, "passed": passed, "rows": rows }))?;
        }
        Command::FockAudit { measure, radii } => {
            let text = std::fs::read_to_string(&measure).with_context(|| format!("reading {}", measure.display()))?;
            let mu: DiscreteMeasure =
                serde_json::from_str(&text).with_context(|| format!("parsing measure {}", measure.display()))?;
            let radii_values = parse_list(&radii)?;
            let mut cfg = RunConfig::new("fock-audit", seed, out);
            cfg.param("measure", &measure).param("radii", &radii_values);
            write_json(&cfg, jensen_audit(&mu, &radii_values)?)?;
        }
    }
    Ok(Status::Done)
}

#[derive(Serialize)]
struct Solution {
    nodes: usize,
    data_norm: f64,
    gain: f64,
    #[serde(flatten)]
    result: shiftframe::reconstruct::ReconstructionResult,
}

impl Solution {
    fn new(r: &shiftframe::reconstruct::ReconstructionResult, points: &PointSet, t: f64, data: &[f64]) -> Self {
        let data_norm = data.iter().map(|a| a * a).sum::<f64>().sqrt();
        Self {
            nodes: window_nodes(points, t).len(),
            data_norm,
            gain: r.gain(data_norm),
            result: r.clone(),
        }
    }
}
