//! `quadvar`: simulate Gaussian paths, estimate their global smoothness,
//! and reproduce the sampling studies from the command line.
//!
//! Exit codes: 0 success; 1 I/O or data-parse failure; 2 bad arguments or
//! config; 3 the order scan ended at the sentinel (no crossing below m_n).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use quadvar::design::{build_design, DensitySpec};
use quadvar::estimators::{
    estimate_h, estimate_r0, theoretical_limit, EstimatorConfig, OrderEstimate,
};
use quadvar::gp::spec::{KernelSpec, ModelSpec};
use quadvar::gp::{ingest_csv, TimeFn};
use quadvar::interp::{plugin_order, PiecewiseLagrange};
use quadvar::montecarlo::{parse_bn_spec, run_experiment, sample_path, ExperimentConfig};
use quadvar::{util, Error, Result};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "quadvar", version, about = "Global smoothness of Gaussian paths \
from discrete observations: simulation, estimation, and replication studies")]
struct Cli {
    /// Cap on worker threads for parallel sections (default: all cores).
    /// Output never depends on this.
    #[arg(long, global = true, env = "QUADVAR_THREADS")]
    threads: Option<usize>,
    /// Machine-readable JSON on stdout (limits, ingest; estimate is always JSON).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a path from an exact Gaussian model; write a `t,x` CSV.
    Simulate(SimulateArgs),
    /// Estimate (r0, beta0, H) from a `t,x` CSV; write a JSON report.
    Estimate(EstimateArgs),
    /// Run a replication experiment from a JSON config; write a summary CSV.
    Experiment(ExperimentArgs),
    /// Reconstruct a path by plug-in piecewise Lagrange interpolation.
    Interpolate(InterpolateArgs),
    /// Print the limit constant of the normalized quadratic variation.
    Limits(LimitsArgs),
    /// Validate a CSV and describe the sampling design it carries.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Kernel: wiener | fbm | integrated_fbm | integrated_wiener | ou | matern.
    #[arg(long)]
    model: String,
    /// Fractional exponent in (0,1) for fbm / integrated_fbm.
    #[arg(long)]
    beta: Option<f64>,
    /// Mean-reversion rate for ou.
    #[arg(long)]
    theta: Option<f64>,
    /// Diffusion coefficient for ou.
    #[arg(long)]
    sigma: Option<f64>,
    /// Smoothness parameter for matern.
    #[arg(long)]
    nu: Option<f64>,
    /// Inverse length scale for matern.
    #[arg(long)]
    alpha: Option<f64>,
    /// Variance scale for matern.
    #[arg(long)]
    phi: Option<f64>,
    /// Number of observation steps; the CSV has n+1 data rows.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Right end of the observation window [0, T].
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Sampling density: "uniform" or "affine:c0,c1".
    #[arg(long, default_value = "uniform")]
    density: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Estimator settings shared by `estimate` and `interpolate`.
#[derive(Args)]
struct EstimatorFlags {
    /// Threshold rule: inv_log | const:<c> | power_log:<a>.
    #[arg(long, default_value = "inv_log")]
    bn: String,
    /// Order-scan ceiling (default: min(8, floor(ln n) + 2)).
    #[arg(long)]
    mn: Option<usize>,
    /// Offset of the second-step order, 1 or 2.
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Smaller dilation factor.
    #[arg(long, default_value_t = 1)]
    u: usize,
    /// Larger dilation factor.
    #[arg(long, default_value_t = 4)]
    v: usize,
    /// Clamp beta-hat into [eps, 1-eps] (raw by default).
    #[arg(long)]
    clamp_epsilon: Option<f64>,
}

impl EstimatorFlags {
    fn to_config(&self) -> Result<EstimatorConfig<f64>> {
        let config = EstimatorConfig {
            b_n: parse_bn_spec(&self.bn)?,
            m_n: self.mn,
            p: self.p,
            u: self.u,
            v: self.v,
            clamp_epsilon: self.clamp_epsilon,
        };
        config.validate()?;
        Ok(config)
    }

    fn describe(&self) -> serde_json::Value {
        json!({
            "bn": self.bn,
            "mn": self.mn,
            "p": self.p,
            "u": self.u,
            "v": self.v,
            "clamp_epsilon": self.clamp_epsilon,
        })
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// Input CSV with `t,x` rows (`#` comments and a header row are fine).
    #[arg(long, short)]
    input: PathBuf,
    /// Output JSON path (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    flags: EstimatorFlags,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config JSON.
    #[arg(long, short)]
    config: PathBuf,
    /// Summary CSV path (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write per-replication estimates (n,rep,r_hat,beta_hat,h_hat).
    #[arg(long)]
    per_rep: Option<PathBuf>,
    /// Override the config's replication count.
    #[arg(long)]
    reps: Option<usize>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct InterpolateArgs {
    /// Input CSV with `t,x` rows.
    #[arg(long, short)]
    input: PathBuf,
    /// Output CSV path (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Number of equally spaced evaluation points on [0, T].
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Force this interpolation order instead of the plug-in choice.
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    flags: EstimatorFlags,
}

#[derive(Args)]
struct LimitsArgs {
    /// Offset of the second-step order, 1 or 2.
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// True differentiability order.
    #[arg(long, default_value_t = 0)]
    r0: usize,
    /// True fractional exponent in (0,1).
    #[arg(long)]
    beta: f64,
    /// Sampling density: "uniform" or "affine:c0,c1".
    #[arg(long, default_value = "uniform")]
    density: String,
    /// Right end of the observation window [0, T].
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Constant local-variance function d0 (the limit is linear in it).
    #[arg(long, default_value_t = 1.0)]
    d0_scale: f64,
}

#[derive(Args)]
struct IngestArgs {
    /// Input CSV with `t,x` rows.
    #[arg(long, short)]
    input: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OrderNotFound { .. } => 3,
        Error::Io(_) | Error::Parse { .. } => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Experiment(args) => cmd_experiment(args, cli.threads),
        Command::Interpolate(args) => cmd_interpolate(args),
        Command::Limits(args) => cmd_limits(args, cli.json),
        Command::Ingest(args) => cmd_ingest(args, cli.json),
    }
}

/// Sink for a CSV/JSON artifact: a file or stdout.
fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_header<W: Write>(out: &mut W, hash: u64, seed: Option<u64>) -> Result<()> {
    writeln!(out, "# quadvar {VERSION}")?;
    writeln!(out, "# config_hash: {hash:016x}")?;
    match seed {
        Some(s) => writeln!(out, "# seed: {s}")?,
        None => writeln!(out, "# seed: none")?,
    }
    Ok(())
}

fn hash_doc(doc: &serde_json::Value) -> u64 {
    util::fnv1a_64(doc.to_string().as_bytes())
}

fn parse_density(spec: &str, horizon: f64) -> Result<DensitySpec<f64>> {
    if spec == "uniform" {
        return DensitySpec::uniform(horizon);
    }
    if let Some(rest) = spec.strip_prefix("affine:") {
        if let Some((c0, c1)) = rest.split_once(',') {
            if let (Ok(c0), Ok(c1)) = (c0.trim().parse(), c1.trim().parse()) {
                return DensitySpec::affine(c0, c1, horizon);
            }
        }
        return Err(Error::InvalidConfig(format!("bad affine density: {spec}")));
    }
    Err(Error::InvalidConfig(format!(
        "unknown density '{spec}' (expected uniform or affine:c0,c1)"
    )))
}

fn kernel_from_flags(args: &SimulateArgs) -> Result<KernelSpec> {
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| {
            Error::InvalidConfig(format!("model '{}' requires --{name}", args.model))
        })
    };
    match args.model.as_str() {
        "wiener" => Ok(KernelSpec::Wiener),
        "fbm" => Ok(KernelSpec::Fbm {
            beta: need("beta", args.beta)?,
        }),
        "integrated_fbm" | "ifbm" => Ok(KernelSpec::IntegratedFbm {
            beta: need("beta", args.beta)?,
        }),
        "integrated_wiener" => Ok(KernelSpec::IntegratedWiener),
        "ou" => Ok(KernelSpec::Ou {
            theta: need("theta", args.theta)?,
            sigma: need("sigma", args.sigma)?,
        }),
        "matern" => Ok(KernelSpec::Matern {
            nu: need("nu", args.nu)?,
            alpha: need("alpha", args.alpha)?,
            phi: need("phi", args.phi)?,
        }),
        other => Err(Error::InvalidConfig(format!(
            "unknown model '{other}' (expected wiener, fbm, integrated_fbm, \
             integrated_wiener, ou, or matern)"
        ))),
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let spec = ModelSpec::new(kernel_from_flags(args)?);
    let model = spec.build()?;
    let density = parse_density(&args.density, args.horizon)?;
    let design = Arc::new(build_design(&density, args.n)?);
    let path = sample_path(&model, design, args.seed)?;

    let doc = json!({
        "model": spec,
        "n": args.n,
        "horizon": args.horizon,
        "density": args.density,
        "seed": args.seed,
    });
    let mut out = open_output(&args.output)?;
    write_header(&mut out, hash_doc(&doc), Some(args.seed))?;
    path.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn read_path(input: &PathBuf) -> Result<quadvar::Path> {
    ingest_csv(BufReader::new(File::open(input)?))
}

fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let path = read_path(&args.input)?;
    let config = args.flags.to_config()?;
    let estimate = estimate_h(&path, &config)?;

    let doc = args.flags.describe();
    let r_hat = match estimate.r_hat {
        OrderEstimate::Found(r) => r,
        // estimate_h never returns a sentinel-bearing estimate; the scan
        // ending at the sentinel surfaces as an error (exit code 3).
        OrderEstimate::Sentinel => unreachable!("estimate_h errors on sentinel"),
    };
    let (qu, qv) = &estimate.qv_dilated;
    let qv_dilated = json!({
        "order": qu.r,
        "u": { "dilation": qu.u, "terms": qu.n_r, "value": qu.value },
        "v": { "dilation": qv.u, "terms": qv.n_r, "value": qv.value },
    });
    let report = json!({
        "version": VERSION,
        "config_hash": format!("{:016x}", hash_doc(&doc)),
        "seed": serde_json::Value::Null,
        "n": path.n(),
        "config": doc,
        "m_n": config.m_n(path.n()),
        "r_hat": r_hat,
        "beta_hat": estimate.beta_hat,
        "h_hat": estimate.h_hat,
        "qv_by_order": estimate.qv_by_order.iter().map(|row| json!({
            "r": row.r,
            "qv": row.qv,
            "threshold": row.threshold,
            "crossed": row.crossed,
        })).collect::<Vec<_>>(),
        "qv_dilated": qv_dilated,
    });
    let mut out = open_output(&args.output)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs, threads: Option<usize>) -> Result<()> {
    let mut config: ExperimentConfig =
        serde_json::from_reader(BufReader::new(File::open(&args.config)?))?;
    if let Some(reps) = args.reps {
        config.replications = reps;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let summary = run_experiment(&config, threads)?;
    let mut out = open_output(&args.output)?;
    summary.write_summary_csv(&mut out)?;
    out.flush()?;
    if let Some(path) = &args.per_rep {
        let mut out = BufWriter::new(File::create(path)?);
        summary.write_reps_csv(&mut out)?;
        out.flush()?;
    }
    if !summary.flagged.is_empty() {
        eprintln!("warning: flagged cells: {}", summary.flagged.join("; "));
    }
    Ok(())
}

fn cmd_interpolate(args: &InterpolateArgs) -> Result<()> {
    let path = read_path(&args.input)?;
    let config = args.flags.to_config()?;
    let m_n = config.m_n(path.n());
    let r = match args.order {
        Some(r) => {
            if r < 1 {
                return Err(Error::InvalidConfig("--order must be >= 1".into()));
            }
            r
        }
        None => {
            let (order, _) = estimate_r0(&path, &config)?;
            plugin_order(order, m_n)
        }
    };
    let approx = PiecewiseLagrange::new(&path, r)?;

    let doc = json!({
        "flags": args.flags.describe(),
        "order": r,
        "samples": args.samples,
    });
    let mut out = open_output(&args.output)?;
    write_header(&mut out, hash_doc(&doc), None)?;
    writeln!(out, "# order: {r}")?;
    approx.write_csv(&mut out, args.samples)?;
    out.flush()?;
    Ok(())
}

fn cmd_limits(args: &LimitsArgs, as_json: bool) -> Result<()> {
    let density = parse_density(&args.density, args.horizon)?;
    let scale = args.d0_scale;
    // Negated so that a NaN flag value is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(scale > 0.0) {
        return Err(Error::InvalidConfig("--d0-scale must be > 0".into()));
    }
    let d0: TimeFn<f64> = Arc::new(move |_| scale);
    let value = theoretical_limit(args.p, args.r0, args.beta, &d0, &density)?;
    let mut out = BufWriter::new(io::stdout());
    if as_json {
        let report = json!({
            "version": VERSION,
            "p": args.p,
            "r0": args.r0,
            "beta": args.beta,
            "density": args.density,
            "horizon": args.horizon,
            "d0_scale": scale,
            "limit": value,
        });
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{}", util::fmt_g17(value))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_ingest(args: &IngestArgs, as_json: bool) -> Result<()> {
    let path = read_path(&args.input)?;
    let design = path.design();
    let (x_min, x_max) = path
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let mut out = BufWriter::new(io::stdout());
    if as_json {
        let report = json!({
            "version": VERSION,
            "n": path.n(),
            "points": path.n() + 1,
            "horizon": design.horizon(),
            "equidistant": design.is_equidistant(),
            "delta_n": design.delta_n(),
            "x_min": x_min,
            "x_max": x_max,
        });
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        writeln!(out, "points:      {}", path.n() + 1)?;
        writeln!(out, "n:           {}", path.n())?;
        writeln!(out, "horizon:     {}", util::fmt_g17(design.horizon()))?;
        writeln!(out, "equidistant: {}", design.is_equidistant())?;
        writeln!(out, "delta_n:     {}", util::fmt_g17(design.delta_n()))?;
        writeln!(out, "x range:     [{}, {}]", util::fmt_g17(x_min), util::fmt_g17(x_max))?;
    }
    out.flush()?;
    Ok(())
}
