//! Seed-driven replication harness for the estimator's sampling statistics.
//!
//! An experiment is a JSON-friendly config: a model, a design density, a
//! grid of sample sizes, a replication count, a master seed, estimator
//! settings, and a set of metrics. Every replication draws its own seed from
//! (master_seed, n, j), so the summary is bit-reproducible and independent
//! of how replications are scheduled across worker threads: workers fill an
//! ordered table and aggregation is a sequential fold over it.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{build_design, DensitySpec, SamplingDesign};
use crate::error::{Error, Result};
use crate::estimators::{
    estimate_beta, estimate_r0, h_statistic_at_order, BnRule, EstimatorConfig, OrderEstimate,
};
use crate::gp::circulant::simulate_fbm_circulant_on;
use crate::gp::exact::ExactSimulator;
use crate::gp::spec::ModelSpec;
use crate::gp::{GaussianModel, Kernel, SamplePath};
use crate::interp::{exact_imse, WeightFn};
use crate::scalar::Scalar;
use crate::util;

/// Sampling density choices exposed to config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
#[derive(Default)]
pub enum DensityConfig {
    #[default]
    Uniform,
    Affine { c0: f64, c1: f64 },
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

impl DensityConfig {
    pub fn build(&self, horizon: f64) -> Result<DensitySpec<f64>> {
        match self {
            DensityConfig::Uniform => DensitySpec::uniform(horizon),
            DensityConfig::Affine { c0, c1 } => DensitySpec::affine(*c0, *c1, horizon),
            DensityConfig::Tabulated { grid, values } => {
                DensitySpec::tabulated(grid.clone(), values.clone(), horizon)
            }
        }
    }
}


/// Serializable estimator settings; the threshold rule is a compact string
/// ("inv_log", "const:<c>", or "power_log:<alpha>").
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSettings {
    #[serde(default = "default_bn_spec")]
    pub bn: String,
    #[serde(default)]
    pub mn: Option<usize>,
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default = "default_u")]
    pub u: usize,
    #[serde(default = "default_v")]
    pub v: usize,
    #[serde(default)]
    pub clamp_epsilon: Option<f64>,
}

fn default_bn_spec() -> String {
    "inv_log".into()
}
fn default_p() -> usize {
    1
}
fn default_u() -> usize {
    1
}
fn default_v() -> usize {
    4
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        Self {
            bn: default_bn_spec(),
            mn: None,
            p: default_p(),
            u: default_u(),
            v: default_v(),
            clamp_epsilon: None,
        }
    }
}

impl EstimatorSettings {
    pub fn to_config(&self) -> Result<EstimatorConfig<f64>> {
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
}

/// Parse a threshold-rule string: "inv_log", "const:<c>", "power_log:<a>".
pub fn parse_bn_spec(spec: &str) -> Result<BnRule<f64>> {
    if spec == "inv_log" {
        return Ok(BnRule::InvLog);
    }
    if let Some(arg) = spec.strip_prefix("const:") {
        let c: f64 = arg
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad const threshold: {spec}")))?;
        if !(c > 0.0) {
            return Err(Error::InvalidConfig("const threshold must be > 0".into()));
        }
        return Ok(BnRule::Const(c));
    }
    if let Some(arg) = spec.strip_prefix("power_log:") {
        let a: f64 = arg
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad power_log exponent: {spec}")))?;
        return Ok(BnRule::PowerLog(a));
    }
    Err(Error::InvalidConfig(format!(
        "unknown threshold rule '{spec}' (expected inv_log, const:<c>, power_log:<a>)"
    )))
}

/// What the experiment reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric")]
pub enum MetricSpec {
    /// Empirical probabilities of r̂₀ hitting the truth (and truth+1).
    #[serde(rename = "prob_r_hat")]
    ProbRHat,
    /// Mean of Ĥ − H (plus the sampling SD of Ĥ).
    #[serde(rename = "bias_H")]
    BiasH,
    /// Mean of (Ĥ − H)².
    #[serde(rename = "mse_H")]
    MseH,
    /// OLS slope of ln mean|Ĥ − H| on ln n across the grid.
    #[serde(rename = "rate_slope")]
    RateSlope,
    /// OLS slope of ln exact IMSE on ln n (deterministic, no replications).
    #[serde(rename = "imse_slope")]
    ImseSlope,
    /// Mean/SD of the order-forced smoothness statistic.
    #[serde(rename = "misspec_order")]
    MisspecOrder { r: usize },
}

/// A full experiment: the JSON document the CLI consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: ModelSpec,
    #[serde(default)]
    pub density: DensityConfig,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub estimator: EstimatorSettings,
    pub metrics: Vec<MetricSpec>,
}

fn default_horizon() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::InvalidConfig("replications must be >= 1".into()));
        }
        if self.n_grid.is_empty() {
            return Err(Error::InvalidConfig("n_grid must be non-empty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "n_grid must be strictly increasing".into(),
            ));
        }
        if self.metrics.is_empty() {
            return Err(Error::InvalidConfig("metrics must be non-empty".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidConfig("horizon must be > 0".into()));
        }
        self.estimator.to_config()?;
        self.model.build()?;
        self.density.build(self.horizon)?;
        Ok(())
    }

    /// FNV-1a hash of the canonical JSON form, recorded in output headers.
    pub fn hash(&self) -> u64 {
        let doc = serde_json::to_string(self).expect("config serializes");
        util::fnv1a_64(doc.as_bytes())
    }
}

/// One summary line: a statistic for one sample size (or "all" for the
/// cross-n regression rows).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: Option<usize>,
    pub metric: String,
    pub value: f64,
    pub stderr: f64,
    pub failures: usize,
}

/// Per-replication estimates, for boxplot-style exports.
#[derive(Debug, Clone, PartialEq)]
pub struct PerRepRow {
    pub n: usize,
    pub rep: usize,
    /// Display form of r̂₀ ("0", "1", …, "l0"), or "err" on a failed cell.
    pub r_hat: String,
    pub beta_hat: f64,
    pub h_hat: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub name: String,
    pub master_seed: u64,
    pub config_hash: u64,
    pub rows: Vec<SummaryRow>,
    pub per_rep: Vec<PerRepRow>,
    /// Regression over the grid when rate_slope was requested: (slope, R²).
    pub rate_regression: Option<(f64, f64)>,
    /// Regression over the grid when imse_slope was requested: (slope, R²).
    pub imse_regression: Option<(f64, f64)>,
    /// Cells whose failure count exceeded 1% of replications.
    pub flagged: Vec<String>,
}

impl ExperimentSummary {
    fn header<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# quadvar {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# experiment: {}", self.name)?;
        writeln!(out, "# config_hash: {:016x}", self.config_hash)?;
        writeln!(out, "# master_seed: {}", self.master_seed)?;
        if self.flagged.is_empty() {
            writeln!(out, "# flagged: none")?;
        } else {
            writeln!(out, "# flagged: {}", self.flagged.join("; "))?;
        }
        Ok(())
    }

    /// Summary CSV: `n,metric,value,stderr,failures` under a comment header.
    pub fn write_summary_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        self.header(&mut out)?;
        writeln!(out, "n,metric,value,stderr,failures")?;
        for row in &self.rows {
            let n = row
                .n
                .map(|n| n.to_string())
                .unwrap_or_else(|| "all".into());
            writeln!(
                out,
                "{},{},{},{},{}",
                n,
                row.metric,
                util::fmt_g17(row.value),
                util::fmt_g17(row.stderr),
                row.failures
            )?;
        }
        Ok(())
    }

    /// Replication-level CSV: `n,rep,r_hat,beta_hat,h_hat`.
    pub fn write_reps_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        self.header(&mut out)?;
        writeln!(out, "n,rep,r_hat,beta_hat,h_hat")?;
        for row in &self.per_rep {
            writeln!(
                out,
                "{},{},{},{},{}",
                row.n,
                row.rep,
                row.r_hat,
                util::fmt_g17(row.beta_hat),
                util::fmt_g17(row.h_hat)
            )?;
        }
        Ok(())
    }
}

/// Replication seed: a stable mix of (master_seed, n, j).
fn rep_seed(master: u64, n: usize, j: usize) -> u64 {
    let bytes = util::substream_seed(master, &[n as u64, j as u64]);
    u64::from_le_bytes(bytes[..8].try_into().expect("seed has 32 bytes"))
}

/// Path generator for one (model, design) cell: circulant embedding for
/// (transformed) Brownian-family kernels on equidistant designs, dense exact
/// simulation otherwise. Deterministic affine layers (scale, trend) are
/// applied on top of the base draw.
enum Engine {
    Circulant {
        design: Arc<SamplingDesign<f64>>,
        beta: f64,
        /// Pointwise (a(t_k), E X(t_k)) when the model carries a transform
        /// or a trend; identity when both are absent.
        layer: Option<(Vec<f64>, Vec<f64>)>,
    },
    Exact(Box<ExactSimulator<f64>>),
}

impl Engine {
    fn new(model: &GaussianModel<f64>, design: Arc<SamplingDesign<f64>>) -> Result<Self> {
        let beta = match model.kernel() {
            Kernel::Wiener => Some(0.5),
            Kernel::Fbm { beta } => Some(*beta),
            _ => None,
        };
        if let Some(beta) = beta {
            if design.is_equidistant() {
                let has_trend = design
                    .points()
                    .iter()
                    .any(|&t| model.mean_at(t) != 0.0);
                let has_scale = model.transform().is_some();
                let layer = if has_trend || has_scale {
                    let a: Vec<f64> = design
                        .points()
                        .iter()
                        .map(|&t| model.transform().map_or(1.0, |(a, _)| a(t)))
                        .collect();
                    let mu: Vec<f64> =
                        design.points().iter().map(|&t| model.mean_at(t)).collect();
                    Some((a, mu))
                } else {
                    None
                };
                return Ok(Engine::Circulant {
                    design,
                    beta,
                    layer,
                });
            }
        }
        Ok(Engine::Exact(Box::new(ExactSimulator::new(model, design)?)))
    }

    fn sample(&self, seed: u64) -> Result<SamplePath<f64>> {
        match self {
            Engine::Circulant {
                design,
                beta,
                layer,
            } => {
                let base = simulate_fbm_circulant_on(design.clone(), *beta, seed)?;
                match layer {
                    None => Ok(base),
                    Some((a, mu)) => {
                        let values: Vec<f64> = base
                            .values()
                            .iter()
                            .zip(a.iter().zip(mu.iter()))
                            .map(|(&y, (&ak, &mk))| ak * y + mk)
                            .collect();
                        SamplePath::new(design.clone(), values, "circulant+layer")
                    }
                }
            }
            Engine::Exact(sim) => sim.sample(seed),
        }
    }
}

/// One replication's estimates; NaN marks anything that could not be formed.
#[derive(Debug, Clone)]
struct RepOutcome {
    r_hat: Option<OrderEstimate>,
    beta_hat: f64,
    h_hat: f64,
    misspec: Vec<(usize, f64)>,
    error: Option<String>,
}

fn run_one_rep(
    engine: &Engine,
    config: &EstimatorConfig<f64>,
    misspec_orders: &[usize],
    seed: u64,
) -> RepOutcome {
    let mut out = RepOutcome {
        r_hat: None,
        beta_hat: f64::NAN,
        h_hat: f64::NAN,
        misspec: Vec::new(),
        error: None,
    };
    let path = match engine.sample(seed) {
        Ok(path) => path,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    match estimate_r0(&path, config) {
        Ok((order, _)) => {
            out.r_hat = Some(order);
            if let Some(r0) = order.found() {
                match estimate_beta(&path, r0, config) {
                    Ok(beta) => {
                        out.beta_hat = beta;
                        out.h_hat = 2.0 * (r0 as f64 + beta);
                    }
                    Err(e) => out.error = Some(e.to_string()),
                }
            }
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    for &r in misspec_orders {
        let value = h_statistic_at_order(&path, r, config.u, config.v)
            .map(|x| x.as_f64())
            .unwrap_or(f64::NAN);
        out.misspec.push((r, value));
    }
    out
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (mean, var.sqrt())
}

/// OLS of ln(error) on ln(n); rows with non-positive errors are dropped and
/// at least three must survive.
pub fn rate_regression(ns: &[usize], errors: &[f64]) -> Result<(f64, f64)> {
    if ns.len() != errors.len() {
        return Err(Error::InvalidConfig(
            "rate regression needs one error per n".into(),
        ));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &e) in ns.iter().zip(errors) {
        if e > 0.0 && e.is_finite() {
            xs.push((n as f64).ln());
            ys.push(e.ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "rate regression needs >= 3 positive errors, got {} (of {})",
            xs.len(),
            ns.len()
        )));
    }
    let (slope, _, r2) = util::ols(&xs, &ys);
    Ok((slope, r2))
}

/// Run the full experiment. `threads` caps the worker pool (None uses the
/// default); the output is identical whatever the cap, because replication
/// j of sample size n always uses the seed derived from (master_seed, n, j)
/// and aggregation folds the ordered table sequentially.
pub fn run_experiment(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentSummary> {
    config.validate()?;
    let model = config.model.build()?;
    let density = config.density.build(config.horizon)?;
    let est_config = config.estimator.to_config()?;
    let truth = model.truth().cloned();

    let needs_truth = config
        .metrics
        .iter()
        .any(|m| matches!(m, MetricSpec::ProbRHat | MetricSpec::BiasH | MetricSpec::MseH | MetricSpec::RateSlope));
    if needs_truth && truth.is_none() {
        return Err(Error::InvalidConfig(
            "requested metrics compare against the model truth, which is unknown here".into(),
        ));
    }
    let needs_reps = config
        .metrics
        .iter()
        .any(|m| !matches!(m, MetricSpec::ImseSlope));
    let misspec_orders: Vec<usize> = config
        .metrics
        .iter()
        .filter_map(|m| match m {
            MetricSpec::MisspecOrder { r } => Some(*r),
            _ => None,
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let reps = config.replications;
    let mut rows = Vec::new();
    let mut per_rep = Vec::new();
    let mut flagged = Vec::new();
    let mut mae_by_n: Vec<f64> = Vec::new();
    let mut imse_by_n: Vec<f64> = Vec::new();

    for &n in &config.n_grid {
        let design = Arc::new(build_design(&density, n)?);

        let outcomes: Vec<RepOutcome> = if needs_reps {
            let engine = Engine::new(&model, design.clone())?;
            pool.install(|| {
                (0..reps)
                    .into_par_iter()
                    .map(|j| {
                        run_one_rep(
                            &engine,
                            &est_config,
                            &misspec_orders,
                            rep_seed(config.master_seed, n, j),
                        )
                    })
                    .collect()
            })
        } else {
            Vec::new()
        };

        for (j, o) in outcomes.iter().enumerate() {
            per_rep.push(PerRepRow {
                n,
                rep: j,
                r_hat: match &o.r_hat {
                    Some(order) => format!("{order}"),
                    None => "err".into(),
                },
                beta_hat: o.beta_hat,
                h_hat: o.h_hat,
            });
        }

        let hard_failures = outcomes.iter().filter(|o| o.error.is_some()).count();
        let h_values: Vec<f64> = outcomes
            .iter()
            .map(|o| o.h_hat)
            .filter(|h| h.is_finite())
            .collect();
        let h_failures = reps - h_values.len();

        let mut flag = |metric: &str, failures: usize| {
            if needs_reps && failures * 100 > reps {
                flagged.push(format!("n={n} {metric}: {failures}/{reps} failed"));
            }
        };

        let mut sd_emitted = false;
        for metric in &config.metrics {
            match metric {
                MetricSpec::ProbRHat => {
                    let r0 = truth.as_ref().expect("checked above").r0;
                    let hits = |target: OrderEstimate| {
                        outcomes.iter().filter(|o| o.r_hat == Some(target)).count()
                    };
                    let p0 = hits(OrderEstimate::Found(r0)) as f64 / reps as f64;
                    let p1 = hits(OrderEstimate::Found(r0 + 1)) as f64 / reps as f64;
                    let ps = hits(OrderEstimate::Sentinel) as f64 / reps as f64;
                    let se = |p: f64| (p * (1.0 - p) / reps as f64).sqrt();
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "prob_r_hat_eq_r0".into(),
                        value: p0,
                        stderr: se(p0),
                        failures: hard_failures,
                    });
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "prob_r_hat_eq_r0_plus_1".into(),
                        value: p1,
                        stderr: se(p1),
                        failures: hard_failures,
                    });
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "prob_r_hat_sentinel".into(),
                        value: ps,
                        stderr: se(ps),
                        failures: hard_failures,
                    });
                    flag("prob_r_hat", hard_failures);
                }
                MetricSpec::BiasH => {
                    let h_true = truth.as_ref().expect("checked above").h();
                    let (mean, sd) = mean_and_sd(&h_values);
                    let se = sd / (h_values.len().max(1) as f64).sqrt();
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "bias_H".into(),
                        value: mean - h_true,
                        stderr: se,
                        failures: h_failures,
                    });
                    if !sd_emitted {
                        rows.push(SummaryRow {
                            n: Some(n),
                            metric: "sd_H".into(),
                            value: sd,
                            stderr: f64::NAN,
                            failures: h_failures,
                        });
                        sd_emitted = true;
                    }
                    flag("bias_H", h_failures);
                }
                MetricSpec::MseH => {
                    let h_true = truth.as_ref().expect("checked above").h();
                    let sq: Vec<f64> =
                        h_values.iter().map(|h| (h - h_true).powi(2)).collect();
                    let (mean, sd) = mean_and_sd(&sq);
                    let se = sd / (sq.len().max(1) as f64).sqrt();
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "mse_H".into(),
                        value: mean,
                        stderr: se,
                        failures: h_failures,
                    });
                    flag("mse_H", h_failures);
                }
                MetricSpec::RateSlope => {
                    let h_true = truth.as_ref().expect("checked above").h();
                    let abs: Vec<f64> =
                        h_values.iter().map(|h| (h - h_true).abs()).collect();
                    let (mean, sd) = mean_and_sd(&abs);
                    let se = sd / (abs.len().max(1) as f64).sqrt();
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "mean_abs_err_H".into(),
                        value: mean,
                        stderr: se,
                        failures: h_failures,
                    });
                    flag("mean_abs_err_H", h_failures);
                }
                MetricSpec::ImseSlope => {
                    let r = truth.as_ref().map_or(1, |t| t.r0.max(1));
                    let imse = exact_imse(&model, &design, r, &WeightFn::One)?;
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: "exact_imse".into(),
                        value: imse,
                        stderr: f64::NAN,
                        failures: 0,
                    });
                }
                MetricSpec::MisspecOrder { r } => {
                    let vals: Vec<f64> = outcomes
                        .iter()
                        .flat_map(|o| {
                            o.misspec
                                .iter()
                                .filter(|(order, _)| order == r)
                                .map(|(_, v)| *v)
                        })
                        .filter(|v| v.is_finite())
                        .collect();
                    let fails = reps - vals.len();
                    let (mean, sd) = mean_and_sd(&vals);
                    let se = sd / (vals.len().max(1) as f64).sqrt();
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: format!("misspec_mean_r{r}"),
                        value: mean,
                        stderr: se,
                        failures: fails,
                    });
                    rows.push(SummaryRow {
                        n: Some(n),
                        metric: format!("misspec_sd_r{r}"),
                        value: sd,
                        stderr: f64::NAN,
                        failures: fails,
                    });
                    flag(&format!("misspec_r{r}"), fails);
                }
            }
        }

        if config.metrics.contains(&MetricSpec::RateSlope) {
            let h_true = truth.as_ref().expect("checked above").h();
            let abs: Vec<f64> = h_values.iter().map(|h| (h - h_true).abs()).collect();
            mae_by_n.push(mean_and_sd(&abs).0);
        }
        if config.metrics.contains(&MetricSpec::ImseSlope) {
            let r = truth.as_ref().map_or(1, |t| t.r0.max(1));
            imse_by_n.push(exact_imse(&model, &design, r, &WeightFn::One)?);
        }
    }

    let mut rate_reg = None;
    if config.metrics.contains(&MetricSpec::RateSlope) {
        let (slope, r2) = rate_regression(&config.n_grid, &mae_by_n)?;
        rate_reg = Some((slope, r2));
        rows.push(SummaryRow {
            n: None,
            metric: "rate_slope".into(),
            value: slope,
            stderr: f64::NAN,
            failures: 0,
        });
        rows.push(SummaryRow {
            n: None,
            metric: "rate_r2".into(),
            value: r2,
            stderr: f64::NAN,
            failures: 0,
        });
    }
    let mut imse_reg = None;
    if config.metrics.contains(&MetricSpec::ImseSlope) {
        let (slope, r2) = rate_regression(&config.n_grid, &imse_by_n)?;
        imse_reg = Some((slope, r2));
        rows.push(SummaryRow {
            n: None,
            metric: "imse_slope".into(),
            value: slope,
            stderr: f64::NAN,
            failures: 0,
        });
        rows.push(SummaryRow {
            n: None,
            metric: "imse_r2".into(),
            value: r2,
            stderr: f64::NAN,
            failures: 0,
        });
    }

    Ok(ExperimentSummary {
        name: config.name.clone(),
        master_seed: config.master_seed,
        config_hash: config.hash(),
        rows,
        per_rep,
        rate_regression: rate_reg,
        imse_regression: imse_reg,
        flagged,
    })
}

/// Draw one path from the model on the given design, with the same engine
/// selection as the experiment harness: circulant embedding when the kernel
/// and design admit it, dense exact simulation otherwise.
pub fn sample_path(
    model: &GaussianModel<f64>,
    design: Arc<SamplingDesign<f64>>,
    seed: u64,
) -> Result<SamplePath<f64>> {
    Engine::new(model, design)?.sample(seed)
}

/// Mean and SD of the smoothness statistic at a forced order, over fresh
/// replications: the misspecification read-off in isolation.
#[allow(clippy::too_many_arguments)] // one scalar knob per study dimension
pub fn misspecification_study(
    model: &GaussianModel<f64>,
    density: &DensitySpec<f64>,
    n: usize,
    r_forced: usize,
    reps: usize,
    master_seed: u64,
    u: usize,
    v: usize,
) -> Result<(f64, f64)> {
    if r_forced < 1 {
        return Err(Error::InvalidConfig("forced order must be >= 1".into()));
    }
    let design = Arc::new(build_design(density, n)?);
    let engine = Engine::new(model, design)?;
    let mut values = Vec::with_capacity(reps);
    for j in 0..reps {
        let path = engine.sample(rep_seed(master_seed, n, j))?;
        values.push(h_statistic_at_order(&path, r_forced, u, v)?.as_f64());
    }
    Ok(mean_and_sd(&values))
}
