//! Gaussian process models and sample-path plumbing: closed-form kernels,
//! ground-truth regularity metadata, path transforms, and CSV ingest/export.
//!
//! Simulation lives in the submodules: [`exact`] factors the Gram matrix once
//! and draws exact Gaussian vectors on any design; [`circulant`] embeds the
//! stationary increments of fractional Brownian motion in a circulant matrix
//! for fast exact sampling on equidistant designs.

pub mod circulant;
pub mod exact;
pub mod spec;

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::design::SamplingDesign;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::util::fmt_g17;

pub use circulant::simulate_fbm_circulant;
pub use exact::{simulate_exact, ExactSimulator};

/// Shared positive/real function of time, e.g. a scale a(t) or a trend m(t).
pub type TimeFn<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

/// Covariance kernels. All closed forms are exact; `Custom` wraps any
/// user-supplied covariance function.
#[derive(Clone)]
pub enum Kernel<S> {
    /// K(s,t) = min(s,t).
    Wiener,
    /// Fractional Brownian motion: K(s,t) = ½(s^{2β} + t^{2β} − |s−t|^{2β}).
    Fbm { beta: S },
    /// Integral of fBm: the fBm kernel integrated once in each argument.
    IntegratedFbm { beta: S },
    /// K(s,t) = min²·max/2 − min³/6.
    IntegratedWiener,
    /// Ornstein-Uhlenbeck: K(s,t) = σ²·exp(−θ|s−t|).
    Ou { theta: S, sigma: S },
    /// Matérn: K(s,t) = √π·φ/(2^{ν−1}Γ(ν+½))·(α|s−t|)^ν·K_ν(α|s−t|).
    Matern { nu: S, alpha: S, phi: S },
    /// Arbitrary covariance function; symmetry and finiteness are checked at
    /// simulation time.
    Custom {
        name: String,
        f: Arc<dyn Fn(S, S) -> S + Send + Sync>,
    },
}

impl<S: Scalar> Kernel<S> {
    /// Evaluate K(s, t).
    pub fn eval(&self, s: S, t: S) -> S {
        match self {
            Kernel::Wiener => s.min(t),
            Kernel::Fbm { beta } => {
                let g = S::of(2.0) * *beta;
                (s.powf(g) + t.powf(g) - (s - t).abs().powf(g)) / S::of(2.0)
            }
            Kernel::IntegratedFbm { beta } => integrated_fbm_kernel(*beta, s, t),
            Kernel::IntegratedWiener => {
                let (lo, hi) = (s.min(t), s.max(t));
                lo * lo * hi / S::of(2.0) - lo * lo * lo / S::of(6.0)
            }
            Kernel::Ou { theta, sigma } => {
                *sigma * *sigma * (-*theta * (s - t).abs()).exp()
            }
            Kernel::Matern { nu, alpha, phi } => matern_kernel(*nu, *alpha, *phi, (s - t).abs()),
            Kernel::Custom { f, .. } => f(s, t),
        }
    }

    /// Short display name used in provenance strings.
    pub fn name(&self) -> String {
        match self {
            Kernel::Wiener => "wiener".into(),
            Kernel::Fbm { beta } => format!("fbm({})", beta.as_f64()),
            Kernel::IntegratedFbm { beta } => format!("integrated_fbm({})", beta.as_f64()),
            Kernel::IntegratedWiener => "integrated_wiener".into(),
            Kernel::Ou { theta, sigma } => {
                format!("ou(theta={},sigma={})", theta.as_f64(), sigma.as_f64())
            }
            Kernel::Matern { nu, alpha, phi } => format!(
                "matern(nu={},alpha={},phi={})",
                nu.as_f64(),
                alpha.as_f64(),
                phi.as_f64()
            ),
            Kernel::Custom { name, .. } => format!("custom({name})"),
        }
    }
}

impl<S: Scalar> fmt::Debug for Kernel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel({})", self.name())
    }
}

/// Closed form of ∫₀^s∫₀^t ½(u^γ + v^γ − |u−v|^γ) dv du with γ = 2β.
fn integrated_fbm_kernel<S: Scalar>(beta: S, s: S, t: S) -> S {
    let g = S::of(2.0) * beta;
    let g1 = g + S::one();
    let g2 = g + S::of(2.0);
    let cross = (t * s.powf(g1) + s * t.powf(g1)) / g1;
    let tail = (s.powf(g2) + t.powf(g2) - (s - t).abs().powf(g2)) / (g1 * g2);
    (cross - tail) / S::of(2.0)
}

/// Matérn covariance at lag h ≥ 0 in the normalization
/// C(h) = √π·φ/(2^{ν−1}Γ(ν+½))·(αh)^ν·K_ν(αh), so C(0) = √π·φ·Γ(ν)/Γ(ν+½).
fn matern_kernel<S: Scalar>(nu: S, alpha: S, phi: S, h: S) -> S {
    let nu_f = nu.as_f64();
    let x = (alpha * h).as_f64();
    let pref = f64::sqrt(std::f64::consts::PI) * phi.as_f64()
        / (f64::powf(2.0, nu_f - 1.0) * puruspe::gamma(nu_f + 0.5));
    let val = if x == 0.0 {
        f64::powf(2.0, nu_f - 1.0) * puruspe::gamma(nu_f)
    } else if x < 1e-8 {
        // Series limit of x^ν K_ν(x); the x^{2ν} correction matters only for
        // non-integer ν (integer orders pick up x²·log terms, negligible here).
        let lead = f64::powf(2.0, nu_f - 1.0) * puruspe::gamma(nu_f);
        if (nu_f - nu_f.round()).abs() > 1e-9 {
            let corr = std::f64::consts::PI * x.powf(2.0 * nu_f)
                / (f64::powf(2.0, nu_f + 1.0)
                    * (std::f64::consts::PI * nu_f).sin()
                    * puruspe::gamma(1.0 + nu_f));
            lead - corr
        } else {
            lead
        }
    } else {
        let (_, knu) = puruspe::Inu_Knu(nu_f, x);
        x.powf(nu_f) * knu
    };
    S::of(pref * val)
}

/// Ground-truth regularity of a model: the process has r₀ derivatives, the
/// r₀-th derivative is locally like fBm with exponent β₀, and d₀(t) is the
/// local scale of its increment variance.
#[derive(Clone)]
pub struct Truth<S> {
    pub r0: usize,
    pub beta0: S,
    pub d0: TimeFn<S>,
}

impl<S: Scalar> Truth<S> {
    pub fn new(r0: usize, beta0: S, d0: TimeFn<S>) -> Self {
        Self { r0, beta0, d0 }
    }

    /// Truth with a constant d₀.
    pub fn constant(r0: usize, beta0: S, d0: S) -> Self {
        Self::new(r0, beta0, Arc::new(move |_| d0))
    }

    /// Global smoothness H = 2(r₀ + β₀) in the quadratic-variation scale.
    pub fn h(&self) -> S {
        S::of(2.0) * (S::of_usize(self.r0) + self.beta0)
    }
}

impl<S: Scalar> fmt::Debug for Truth<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Truth(r0={}, beta0={})", self.r0, self.beta0.as_f64())
    }
}

/// A Gaussian process model: kernel, mean function, optional path transform
/// X(t) = a(t)·Y(t) + m(t), and optional ground-truth regularity.
#[derive(Clone)]
pub struct GaussianModel<S> {
    kernel: Kernel<S>,
    mean: Option<TimeFn<S>>,
    transform: Option<(TimeFn<S>, TimeFn<S>)>,
    truth: Option<Truth<S>>,
}

impl<S: Scalar> fmt::Debug for GaussianModel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaussianModel")
            .field("kernel", &self.kernel)
            .field("has_mean", &self.mean.is_some())
            .field("has_transform", &self.transform.is_some())
            .field("truth", &self.truth)
            .finish()
    }
}

impl<S: Scalar> fmt::Display for GaussianModel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kernel.name())?;
        if self.transform.is_some() {
            write!(f, "+transform")?;
        }
        Ok(())
    }
}

impl<S: Scalar> GaussianModel<S> {
    /// Model with zero mean, no transform, and the kernel's natural truth
    /// metadata (when it has one).
    pub fn new(kernel: Kernel<S>) -> Self {
        let truth = natural_truth(&kernel);
        Self {
            kernel,
            mean: None,
            transform: None,
            truth,
        }
    }

    /// Replace the mean function μ(t).
    pub fn with_mean(mut self, mean: TimeFn<S>) -> Self {
        self.mean = Some(mean);
        self
    }

    /// Wrap the process as X(t) = a(t)·Y(t) + m(t). Requires a > 0 on [0,T]
    /// (checked at simulation time on the design points). The truth scale
    /// updates to d₀(t)·a²(t); (r₀, β₀) are unchanged.
    pub fn with_transform(mut self, a: TimeFn<S>, m: TimeFn<S>) -> Self {
        if let Some(truth) = &self.truth {
            let d0 = truth.d0.clone();
            let a2 = a.clone();
            self.truth = Some(Truth::new(
                truth.r0,
                truth.beta0,
                Arc::new(move |t| {
                    let s = a2(t);
                    s * s * d0(t)
                }),
            ));
        }
        self.transform = Some((a, m));
        self
    }

    /// Override the truth metadata (for custom kernels).
    pub fn with_truth(mut self, truth: Truth<S>) -> Self {
        self.truth = Some(truth);
        self
    }

    pub fn kernel(&self) -> &Kernel<S> {
        &self.kernel
    }

    pub fn truth(&self) -> Option<&Truth<S>> {
        self.truth.as_ref()
    }

    pub fn transform(&self) -> Option<(&TimeFn<S>, &TimeFn<S>)> {
        self.transform.as_ref().map(|(a, m)| (a, m))
    }

    /// Covariance of the observed process, including the transform scale.
    pub fn covariance(&self, s: S, t: S) -> S {
        let base = self.kernel.eval(s, t);
        match &self.transform {
            Some((a, _)) => a(s) * a(t) * base,
            None => base,
        }
    }

    /// Mean of the observed process, including the transform.
    pub fn mean_at(&self, t: S) -> S {
        let mu = self.mean.as_ref().map_or(S::zero(), |f| f(t));
        match &self.transform {
            Some((a, m)) => a(t) * mu + m(t),
            None => mu,
        }
    }
}

/// Truth metadata implied by a kernel, when the regularity is known.
fn natural_truth<S: Scalar>(kernel: &Kernel<S>) -> Option<Truth<S>> {
    let half = S::of(0.5);
    match kernel {
        Kernel::Wiener => Some(Truth::constant(0, half, S::one())),
        Kernel::Fbm { beta } => Some(Truth::constant(0, *beta, S::one())),
        Kernel::IntegratedFbm { beta } => Some(Truth::constant(1, *beta, S::one())),
        Kernel::IntegratedWiener => Some(Truth::constant(1, half, S::one())),
        Kernel::Ou { theta, sigma } => Some(Truth::constant(
            0,
            half,
            S::of(2.0) * *sigma * *sigma * *theta,
        )),
        Kernel::Matern { nu, alpha, phi } => {
            let nu_f = nu.as_f64();
            let r0 = nu_f.floor();
            let beta0 = nu_f - r0;
            if beta0 <= 1e-12 || beta0 >= 1.0 - 1e-12 {
                return None; // integer order sits on the boundary beta0 = 0
            }
            if r0 == 0.0 {
                // Var(X(t+h)−X(t)) ~ d0·h^{2ν} with the constant from the
                // small-lag expansion of x^ν·K_ν(x).
                let d0 = f64::sqrt(std::f64::consts::PI) * phi.as_f64()
                    * puruspe::gamma(1.0 - nu_f)
                    * alpha.as_f64().powf(2.0 * nu_f)
                    / (f64::powf(2.0, 2.0 * nu_f - 1.0)
                        * nu_f
                        * puruspe::gamma(nu_f + 0.5));
                Some(Truth::constant(0, S::of(beta0), S::of(d0)))
            } else {
                // The scale of the r0-th derivative's increments is not
                // tracked; only (r0, beta0) is asserted.
                Some(Truth::constant(r0 as usize, S::of(beta0), S::one()))
            }
        }
        Kernel::Custom { .. } => None,
    }
}

/// A realized path on a design: the values X(t₀), …, X(tₙ).
#[derive(Clone, Debug)]
pub struct SamplePath<S> {
    design: Arc<SamplingDesign<S>>,
    values: Vec<S>,
    provenance: String,
}

impl<S: Scalar> SamplePath<S> {
    /// Bind values to a design; lengths must match and values be finite.
    pub fn new(
        design: Arc<SamplingDesign<S>>,
        values: Vec<S>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if values.len() != design.points().len() {
            return Err(Error::InvalidDesign(format!(
                "{} values on a design with {} points",
                values.len(),
                design.points().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDesign("non-finite path value".into()));
        }
        Ok(Self {
            design,
            values,
            provenance: provenance.into(),
        })
    }

    pub fn design(&self) -> &SamplingDesign<S> {
        &self.design
    }

    pub fn design_arc(&self) -> Arc<SamplingDesign<S>> {
        self.design.clone()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Number of steps n (the path has n+1 values).
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Write as CSV with header `t,x` in full double precision.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x")?;
        for (t, x) in self.design.points().iter().zip(&self.values) {
            writeln!(out, "{},{}", fmt_g17(t.as_f64()), fmt_g17(x.as_f64()))?;
        }
        Ok(())
    }
}

/// Pointwise transform of a realized path: x ↦ a(t)·x + m(t).
/// Exactly invertible given (a, m) with a bounded away from zero.
pub fn transform_path<S: Scalar>(
    path: &SamplePath<S>,
    a: &TimeFn<S>,
    m: &TimeFn<S>,
) -> Result<SamplePath<S>> {
    let values: Vec<S> = path
        .design()
        .points()
        .iter()
        .zip(path.values())
        .map(|(&t, &x)| a(t) * x + m(t))
        .collect();
    SamplePath::new(
        path.design_arc(),
        values,
        format!("{}+transform", path.provenance()),
    )
}

/// Read a path from CSV: either two columns `t,x` (times strictly increasing,
/// bound to a custom design) or one column `x` (equidistant design on [0,1]
/// with n = rows − 1). A non-numeric first row is treated as a header.
pub fn ingest_csv<S: Scalar, R: BufRead>(input: R) -> Result<SamplePath<S>> {
    let mut times: Vec<S> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    let mut cols: Option<usize> = None;
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() > 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                detail: format!("{} columns, expected 1 or 2", fields.len()),
            });
        }
        let parsed: Vec<std::result::Result<f64, _>> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        if parsed.iter().any(|p| p.is_err()) {
            if cols.is_none() {
                continue; // header row
            }
            return Err(Error::Parse {
                line: lineno + 1,
                detail: "non-numeric cell".into(),
            });
        }
        match cols {
            None => cols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    detail: format!("{} columns, expected {c}", fields.len()),
                })
            }
            _ => {}
        }
        let nums: Vec<f64> = parsed.into_iter().map(|p| p.unwrap()).collect();
        if nums.len() == 2 {
            times.push(S::of(nums[0]));
            values.push(S::of(nums[1]));
        } else {
            values.push(S::of(nums[0]));
        }
    }
    if values.len() < 3 {
        return Err(Error::Parse {
            line: 0,
            detail: format!("{} data rows, need at least 3", values.len()),
        });
    }
    let design = if times.is_empty() {
        let density = crate::design::DensitySpec::uniform(S::one())?;
        crate::design::build_design(&density, values.len() - 1)?
    } else {
        SamplingDesign::from_points(times)?
    };
    SamplePath::new(Arc::new(design), values, "ingested")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{build_design, DensitySpec};
    use crate::util::adaptive_simpson;

    #[test]
    fn wiener_kernel_is_min() {
        let k = Kernel::<f64>::Wiener;
        assert_eq!(k.eval(0.3, 0.7), 0.3);
        assert_eq!(k.eval(0.7, 0.3), 0.3);
    }

    #[test]
    fn fbm_half_reduces_to_wiener() {
        let k = Kernel::Fbm { beta: 0.5f64 };
        for (s, t) in [(0.1, 0.9), (0.4, 0.4), (0.0, 0.6), (0.77, 0.13)] {
            assert!((k.eval(s, t) - s.min(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn integrated_fbm_half_matches_integrated_wiener() {
        let ki = Kernel::IntegratedFbm { beta: 0.5f64 };
        let kw = Kernel::<f64>::IntegratedWiener;
        for (s, t) in [(1.0, 1.0), (0.3, 0.8), (0.5, 0.5), (0.9, 0.2)] {
            let a = ki.eval(s, t);
            let b = kw.eval(s, t);
            assert!((a - b).abs() < 1e-14, "({s},{t}): {a} vs {b}");
        }
        assert!((ki.eval(1.0, 1.0) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn integrated_fbm_matches_double_quadrature_oracle() {
        // Nested adaptive Simpson of the fBm kernel is the oracle; the closed
        // form must agree to 1e-8.
        for beta in [0.3f64, 0.5, 0.8] {
            let base = Kernel::Fbm { beta };
            let closed = Kernel::IntegratedFbm { beta };
            for (s, t) in [(1.0, 1.0), (0.4, 0.9), (0.7, 0.2)] {
                let oracle = adaptive_simpson(
                    &|u: f64| adaptive_simpson(&|v: f64| base.eval(u, v), 0.0, t, 1e-11),
                    0.0,
                    s,
                    1e-11,
                );
                let got = closed.eval(s, t);
                assert!(
                    (got - oracle).abs() < 1e-8,
                    "beta={beta} ({s},{t}): closed {got} vs quadrature {oracle}"
                );
            }
        }
    }

    #[test]
    fn matern_half_equals_ou() {
        // nu = 1/2 collapses to the exponential kernel with sigma^2 = phi*pi,
        // theta = alpha.
        let alpha = 1.7f64;
        let phi = 0.4f64;
        let matern = Kernel::Matern {
            nu: 0.5,
            alpha,
            phi,
        };
        let ou = Kernel::Ou {
            theta: alpha,
            sigma: (phi * std::f64::consts::PI).sqrt(),
        };
        for h in [0.0f64, 1e-9, 1e-4, 0.1, 0.5, 2.0] {
            let a = matern.eval(h, 0.0);
            let b = ou.eval(h, 0.0);
            assert!(
                (a - b).abs() <= 1e-10 * b.abs().max(1.0),
                "h={h}: matern {a} vs ou {b}"
            );
        }
    }

    #[test]
    fn matern_truth_follows_floor_and_fraction() {
        let k = Kernel::Matern {
            nu: 1.75f64,
            alpha: 1.0,
            phi: 1.0,
        };
        let truth = natural_truth(&k).unwrap();
        assert_eq!(truth.r0, 1);
        assert!((truth.beta0 - 0.75).abs() < 1e-12);
        let int = Kernel::Matern {
            nu: 2.0f64,
            alpha: 1.0,
            phi: 1.0,
        };
        assert!(natural_truth(&int).is_none());
    }

    #[test]
    fn matern_small_nu_d0_matches_increment_variance() {
        // d0 is defined by Var(X(t+h)-X(t)) ~ d0*h^(2nu); compare against the
        // kernel itself at a small lag. The remainder is O(h^(2-2nu)), so the
        // tolerance must cover it.
        for nu in [0.3f64, 0.5, 0.8] {
            let k = Kernel::Matern {
                nu,
                alpha: 2.0,
                phi: 0.7,
            };
            let truth = natural_truth(&k).unwrap();
            let d0 = (truth.d0)(0.0);
            let h = 1e-6f64;
            let incr_var = 2.0 * (k.eval(0.0, 0.0) - k.eval(h, 0.0));
            let ratio = incr_var / (d0 * h.powf(2.0 * nu));
            let tol = 10.0 * (2.0 * h).powf(2.0 - 2.0 * nu) + 1e-6;
            assert!(
                (ratio - 1.0).abs() < tol,
                "nu={nu}: ratio {ratio} (d0={d0}, tol={tol})"
            );
        }
        // nu = 1/2 is the OU case, where d0 = 2*sigma^2*theta = 2*pi*phi*alpha.
        let half = natural_truth(&Kernel::Matern {
            nu: 0.5f64,
            alpha: 2.0,
            phi: 0.7,
        })
        .unwrap();
        let want = 2.0 * std::f64::consts::PI * 0.7 * 2.0;
        assert!(((half.d0)(0.3) - want).abs() < 1e-10 * want);
    }

    #[test]
    fn transform_updates_d0_and_round_trips() {
        let model = GaussianModel::new(Kernel::<f64>::Wiener);
        let a: TimeFn<f64> = Arc::new(|t| t.powf(0.7) + 1.0);
        let m: TimeFn<f64> = Arc::new(|_| 0.0);
        let wrapped = model.with_transform(a.clone(), m.clone());
        let truth = wrapped.truth().unwrap();
        assert_eq!(truth.r0, 0);
        assert!((truth.beta0 - 0.5).abs() < 1e-15);
        let t = 0.6f64;
        let want = (t.powf(0.7) + 1.0).powi(2);
        assert!(((truth.d0)(t) - want).abs() < 1e-12);

        // Path-level transform round-trip.
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = Arc::new(build_design(&density, 16).unwrap());
        let values: Vec<f64> = (0..=16).map(|k| (k as f64 * 0.37).sin()).collect();
        let path = SamplePath::new(design, values.clone(), "test").unwrap();
        let a2: TimeFn<f64> = Arc::new(|t| 1.0 + t * t);
        let m2: TimeFn<f64> = Arc::new(|t| (1.0 + t).powi(2));
        let fwd = transform_path(&path, &a2, &m2).unwrap();
        let inv_a: TimeFn<f64> = Arc::new(|t| 1.0 / (1.0 + t * t));
        let inv_m: TimeFn<f64> = Arc::new(|t| -(1.0 + t).powi(2) / (1.0 + t * t));
        let back = transform_path(&fwd, &inv_a, &inv_m).unwrap();
        let scale = values.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for (orig, rt) in values.iter().zip(back.values()) {
            assert!((orig - rt).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn path_csv_uses_t_x_header() {
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = Arc::new(build_design(&density, 4).unwrap());
        let path = SamplePath::new(design, vec![0.0, 1.0, -2.0, 0.5, 0.25], "test").unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x");
        assert_eq!(lines[1], "0,0");
        // t_1 = 0.2 is not binary-exact; just check the full-precision shape.
        assert!(lines[2].starts_with("0.2000000000000000") && lines[2].ends_with(",1"));
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn ingest_two_column_binds_custom_design() {
        let csv = "t,x\n0.0,1.0\n0.5,2.0\n1.5,0.0\n2.0,-1.0\n";
        let path = ingest_csv::<f64, _>(csv.as_bytes()).unwrap();
        assert_eq!(path.n(), 3);
        assert_eq!(path.design().points(), &[0.0, 0.5, 1.5, 2.0]);
        assert_eq!(path.values(), &[1.0, 2.0, 0.0, -1.0]);
        assert!(path.design().density().is_none());
    }

    #[test]
    fn ingest_single_column_assumes_equidistant_unit_interval() {
        let rows: Vec<String> = (0..=10).map(|k| format!("{}", k as f64 * 0.1)).collect();
        let csv = format!("x\n{}\n", rows.join("\n"));
        let path = ingest_csv::<f64, _>(csv.as_bytes()).unwrap();
        assert_eq!(path.n(), 10);
        let pts = path.design().points();
        assert!((pts[1] - 1.0 / 11.0).abs() < 1e-15);
        assert!(path.design().is_equidistant());
    }

    #[test]
    fn ingest_rejects_bad_input() {
        assert!(ingest_csv::<f64, _>("".as_bytes()).is_err());
        assert!(ingest_csv::<f64, _>("t,x\n0,1\n0,2\n1,3\n".as_bytes()).is_err()); // non-monotone
        assert!(ingest_csv::<f64, _>("x\n1\n2\nabc\n4\n".as_bytes()).is_err());
    }
}
