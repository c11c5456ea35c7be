//! Sampling designs: observation points defined as quantiles of a positive
//! continuous density ψ on [0, T], so that ∫₀^{t_k} ψ = k·δₙ/T.
//!
//! The uniform density recovers the equidistant grid; non-constant densities
//! produce irregular but "regular sequence" designs whose spacings obey the
//! sandwich C₁·i·δₙ ≤ t_{k+i} − t_k ≤ C₂·i·δₙ with C₁ = 1/(T·sup ψ),
//! C₂ = 1/(T·inf ψ).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::util::fmt_g17;

/// Functional form of the sampling density.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityKind<S> {
    /// ψ(t) = 1/T on [0, T].
    Uniform,
    /// ψ(t) = c₀ + c₁·t; must stay positive on [0, T] and integrate to 1.
    Affine { c0: S, c1: S },
    /// Piecewise-linear interpolation of `values` on `grid`; renormalized to
    /// unit mass on construction. Grid must start at 0 and end at T.
    Tabulated { grid: Vec<S>, values: Vec<S> },
}

/// A positive continuous density on [0, T] together with the declared
/// regularity constants used by the sampling assumptions: a Hölder exponent
/// for ψ and a positive lower bound inf ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec<S> {
    kind: DensityKind<S>,
    horizon: S,
    holder_exponent: S,
    lower_bound: S,
}

impl<S: Scalar> DensitySpec<S> {
    /// Uniform density on [0, T].
    pub fn uniform(horizon: S) -> Result<Self> {
        if !(horizon > S::zero()) {
            return Err(Error::InvalidDensity("horizon must be positive".into()));
        }
        Ok(Self {
            kind: DensityKind::Uniform,
            horizon,
            holder_exponent: S::one(),
            lower_bound: S::one() / horizon,
        })
    }

    /// Affine density ψ(t) = c₀ + c₁·t on [0, T]. Fails unless ψ is positive
    /// on the whole interval and has unit mass.
    pub fn affine(c0: S, c1: S, horizon: S) -> Result<Self> {
        if !(horizon > S::zero()) {
            return Err(Error::InvalidDensity("horizon must be positive".into()));
        }
        let end = c0 + c1 * horizon;
        if !(c0 > S::zero()) || !(end > S::zero()) {
            return Err(Error::InvalidDensity(
                "affine density must be positive on [0, T]".into(),
            ));
        }
        let spec = Self {
            kind: DensityKind::Affine { c0, c1 },
            horizon,
            holder_exponent: S::one(),
            lower_bound: c0.min(end),
        };
        spec.check_mass()?;
        Ok(spec)
    }

    /// Piecewise-linear density tabulated on a strictly increasing grid that
    /// spans [0, T]. Values are renormalized to unit mass.
    pub fn tabulated(grid: Vec<S>, values: Vec<S>, horizon: S) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidDensity(
                "tabulated density needs matching grid/values of length >= 2".into(),
            ));
        }
        if !(horizon > S::zero()) {
            return Err(Error::InvalidDensity("horizon must be positive".into()));
        }
        if grid[0] != S::zero() || (grid[grid.len() - 1] - horizon).abs() > S::of(1e-12) * horizon {
            return Err(Error::InvalidDensity(
                "tabulated grid must start at 0 and end at T".into(),
            ));
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidDensity(
                    "tabulated grid must be strictly increasing".into(),
                ));
            }
        }
        if values.iter().any(|v| !(*v > S::zero()) || !v.is_finite()) {
            return Err(Error::InvalidDensity(
                "tabulated values must be finite and positive".into(),
            ));
        }
        // Exact piecewise-linear mass, then renormalize.
        let mut mass = S::zero();
        for i in 0..grid.len() - 1 {
            mass = mass + (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]) / S::of(2.0);
        }
        let values: Vec<S> = values.into_iter().map(|v| v / mass).collect();
        let lower = values.iter().cloned().fold(S::infinity(), S::min);
        Ok(Self {
            kind: DensityKind::Tabulated { grid, values },
            horizon,
            holder_exponent: S::one(),
            lower_bound: lower,
        })
    }

    /// Time horizon T.
    pub fn horizon(&self) -> S {
        self.horizon
    }

    /// Declared Hölder exponent of ψ.
    pub fn holder_exponent(&self) -> S {
        self.holder_exponent
    }

    /// Declared positive lower bound of ψ on [0, T].
    pub fn lower_bound(&self) -> S {
        self.lower_bound
    }

    /// The functional form.
    pub fn kind(&self) -> &DensityKind<S> {
        &self.kind
    }

    /// ψ(t).
    pub fn eval(&self, t: S) -> S {
        match &self.kind {
            DensityKind::Uniform => S::one() / self.horizon,
            DensityKind::Affine { c0, c1 } => *c0 + *c1 * t,
            DensityKind::Tabulated { grid, values } => {
                let t = t.max(grid[0]).min(grid[grid.len() - 1]);
                let j = segment_index(grid, t);
                let w = (t - grid[j]) / (grid[j + 1] - grid[j]);
                values[j] * (S::one() - w) + values[j + 1] * w
            }
        }
    }

    /// ∫₀^t ψ(s) ds, exact for each functional form.
    pub fn cdf(&self, t: S) -> S {
        match &self.kind {
            DensityKind::Uniform => t / self.horizon,
            DensityKind::Affine { c0, c1 } => *c0 * t + *c1 * t * t / S::of(2.0),
            DensityKind::Tabulated { grid, values } => {
                let t = t.max(grid[0]).min(grid[grid.len() - 1]);
                let mut acc = S::zero();
                for j in 0..grid.len() - 1 {
                    if t >= grid[j + 1] {
                        acc = acc
                            + (grid[j + 1] - grid[j]) * (values[j] + values[j + 1]) / S::of(2.0);
                    } else {
                        let h = t - grid[j];
                        if h > S::zero() {
                            let vt = self.eval(t);
                            acc = acc + h * (values[j] + vt) / S::of(2.0);
                        }
                        break;
                    }
                }
                acc
            }
        }
    }

    /// (inf ψ, sup ψ) over [0, T].
    pub fn inf_sup(&self) -> (S, S) {
        match &self.kind {
            DensityKind::Uniform => {
                let v = S::one() / self.horizon;
                (v, v)
            }
            DensityKind::Affine { c0, c1 } => {
                let end = *c0 + *c1 * self.horizon;
                (c0.min(end), c0.max(end))
            }
            DensityKind::Tabulated { values, .. } => {
                let lo = values.iter().cloned().fold(S::infinity(), S::min);
                let hi = values.iter().cloned().fold(S::neg_infinity(), S::max);
                (lo, hi)
            }
        }
    }

    /// Check positivity on a fine grid and unit mass by composite quadrature.
    pub fn validate(&self) -> Result<()> {
        let m = 1024usize;
        let h = self.horizon / S::of_usize(m);
        for i in 0..=m {
            let v = self.eval(S::of_usize(i) * h);
            if !(v >= self.lower_bound * (S::one() - S::of(1e-12))) {
                return Err(Error::InvalidDensity(format!(
                    "density drops below its declared lower bound near t={}",
                    (S::of_usize(i) * h).as_f64()
                )));
            }
        }
        self.check_mass()
    }

    /// Composite Simpson mass check, segment-aware for tabulated densities so
    /// kinks do not pollute the quadrature error.
    fn check_mass(&self) -> Result<()> {
        let breaks: Vec<S> = match &self.kind {
            DensityKind::Tabulated { grid, .. } => grid.clone(),
            _ => vec![S::zero(), self.horizon],
        };
        let mut mass = S::zero();
        for w in breaks.windows(2) {
            mass = mass + composite_simpson(|t| self.eval(t), w[0], w[1], 64);
        }
        if (mass - S::one()).abs() > S::of(1e-10) {
            return Err(Error::InvalidDensity(format!(
                "density mass {} differs from 1 beyond 1e-10",
                mass.as_f64()
            )));
        }
        Ok(())
    }
}

fn composite_simpson<S: Scalar, F: Fn(S) -> S>(f: F, a: S, b: S, panels: usize) -> S {
    let h = (b - a) / S::of_usize(panels);
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { S::of(4.0) } else { S::of(2.0) };
        acc = acc + w * f(a + S::of_usize(i) * h);
    }
    acc * h / S::of(3.0)
}

/// Binary search for the segment containing t: largest j with grid[j] <= t.
fn segment_index<S: Scalar>(grid: &[S], t: S) -> usize {
    let mut lo = 0usize;
    let mut hi = grid.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if grid[mid] <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Observation grid t₀ < t₁ < … < tₙ on [0, T] together with the step δₙ and
/// (when built from one) the generating density.
#[derive(Debug, Clone)]
pub struct SamplingDesign<S> {
    horizon: S,
    delta_n: S,
    points: Vec<S>,
    density: Option<DensitySpec<S>>,
}

/// min/max of (t_{k+i} − t_k)/(i·δₙ) over the checked (k, i) grid, plus the
/// analytic sandwich constants C₁ = 1/(T·sup ψ) and C₂ = 1/(T·inf ψ).
#[derive(Debug, Clone, Copy)]
pub struct SpacingReport<S> {
    pub min_ratio: S,
    pub max_ratio: S,
    pub c1: S,
    pub c2: S,
}

/// Build the quantile design for `density` with the default step
/// δₙ = T/(n+1), so n·δₙ = T·n/(n+1) < T.
pub fn build_design<S: Scalar>(density: &DensitySpec<S>, n: usize) -> Result<SamplingDesign<S>> {
    let delta = density.horizon() / S::of_usize(n + 1);
    build_design_with_delta(density, n, delta)
}

/// Build the quantile design with an explicit step; requires n·δₙ ≤ T.
pub fn build_design_with_delta<S: Scalar>(
    density: &DensitySpec<S>,
    n: usize,
    delta_n: S,
) -> Result<SamplingDesign<S>> {
    if n < 2 {
        return Err(Error::InvalidDesign(format!("n = {n}, need n >= 2")));
    }
    density.validate()?;
    let t_max = density.horizon();
    if !(delta_n > S::zero()) || S::of_usize(n) * delta_n > t_max * (S::one() + S::of(1e-12)) {
        return Err(Error::InvalidDesign(format!(
            "step delta = {} violates 0 < n*delta <= T",
            delta_n.as_f64()
        )));
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(S::zero());
    for k in 1..=n {
        let target = S::of_usize(k) * delta_n / t_max;
        points.push(solve_quantile(density, target, k)?);
    }
    for k in 0..n {
        if !(points[k + 1] > points[k]) {
            return Err(Error::InvalidDesign(format!(
                "solved points not strictly increasing at k = {k}"
            )));
        }
    }
    Ok(SamplingDesign {
        horizon: t_max,
        delta_n,
        points,
        density: Some(density.clone()),
    })
}

/// Solve ∫₀^t ψ = target by bisection to bracket width 1e-12·T, then two
/// Newton polish steps (monotone CDF guarantees the bracket).
fn solve_quantile<S: Scalar>(density: &DensitySpec<S>, target: S, k: usize) -> Result<S> {
    let t_max = density.horizon();
    let tol = S::of(1e-12) * t_max;
    let mut lo = S::zero();
    let mut hi = t_max;
    let mut iter = 0;
    while hi - lo > tol {
        iter += 1;
        if iter > 200 {
            return Err(Error::QuantileSolver {
                k,
                detail: format!(
                    "bisection did not reach width {:.3e} in 200 iterations",
                    tol.as_f64()
                ),
            });
        }
        let mid = (lo + hi) / S::of(2.0);
        if density.cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = (lo + hi) / S::of(2.0);
    for _ in 0..2 {
        let f = density.cdf(t) - target;
        let d = density.eval(t);
        t = (t - f / d).max(S::zero()).min(t_max);
    }
    Ok(t)
}

impl<S: Scalar> SamplingDesign<S> {
    /// Adopt an externally supplied grid: strictly increasing, finite, length
    /// ≥ 3. Points are shifted so t₀ = 0; the design carries no density and
    /// uses T = tₙ, δₙ = T/n.
    pub fn from_points(points: Vec<S>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidDesign(format!(
                "{} points supplied, need at least 3",
                points.len()
            )));
        }
        if points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidDesign("non-finite observation time".into()));
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidDesign(
                    "observation times must be strictly increasing".into(),
                ));
            }
        }
        let t0 = points[0];
        let points: Vec<S> = points.into_iter().map(|t| t - t0).collect();
        let n = points.len() - 1;
        let horizon = points[n];
        Ok(Self {
            horizon,
            delta_n: horizon / S::of_usize(n),
            points,
            density: None,
        })
    }

    /// Number of steps n (the design has n+1 points).
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// Time horizon T.
    pub fn horizon(&self) -> S {
        self.horizon
    }

    /// The step δₙ.
    pub fn delta_n(&self) -> S {
        self.delta_n
    }

    /// Observation times t₀, …, tₙ.
    pub fn points(&self) -> &[S] {
        &self.points
    }

    /// The generating density, when the design was built from one.
    pub fn density(&self) -> Option<&DensitySpec<S>> {
        self.density.as_ref()
    }

    /// True when consecutive spacings agree with t₁ − t₀ to 1e-12·T.
    pub fn is_equidistant(&self) -> bool {
        let h = self.points[1] - self.points[0];
        let tol = S::of(1e-12) * self.horizon;
        self.points.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= tol)
    }

    /// Scan (t_{k+i} − t_k)/(i·δₙ) over a (k, i) grid: every i when n ≤ 512,
    /// otherwise i ∈ {1..8} plus doubling strides. Sandwich constants come
    /// from the generating density (1 when absent, i.e. ratios only).
    pub fn spacing_report(&self) -> SpacingReport<S> {
        let n = self.n();
        let mut min_ratio = S::infinity();
        let mut max_ratio = S::neg_infinity();
        for k in 0..n {
            let mut i = 1usize;
            while k + i <= n {
                let ratio =
                    (self.points[k + i] - self.points[k]) / (S::of_usize(i) * self.delta_n);
                min_ratio = min_ratio.min(ratio);
                max_ratio = max_ratio.max(ratio);
                i = if n <= 512 || i < 8 { i + 1 } else { i * 2 };
            }
        }
        let (c1, c2) = match &self.density {
            Some(d) => {
                let (inf, sup) = d.inf_sup();
                (
                    S::one() / (self.horizon * sup),
                    S::one() / (self.horizon * inf),
                )
            }
            None => (S::one(), S::one()),
        };
        SpacingReport {
            min_ratio,
            max_ratio,
            c1,
            c2,
        }
    }

    /// Write the design as CSV with header `k,t` in full double precision.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,t")?;
        for (k, t) in self.points.iter().enumerate() {
            writeln!(out, "{},{}", k, fmt_g17(t.as_f64()))?;
        }
        Ok(())
    }

    /// Read a design written by [`write_csv`](Self::write_csv). Lines starting
    /// with `#` and the header row are skipped; k must be consecutive from 0.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut points = Vec::new();
        let mut expect_k = 0usize;
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("k,") {
                continue;
            }
            let (ks, ts) = trimmed.split_once(',').ok_or(Error::Parse {
                line: lineno + 1,
                detail: "expected two comma-separated fields".into(),
            })?;
            let k: usize = ks.trim().parse().map_err(|e| Error::Parse {
                line: lineno + 1,
                detail: format!("bad index: {e}"),
            })?;
            if k != expect_k {
                return Err(Error::Parse {
                    line: lineno + 1,
                    detail: format!("index {k} out of order, expected {expect_k}"),
                });
            }
            expect_k += 1;
            let t: f64 = ts.trim().parse().map_err(|e| Error::Parse {
                line: lineno + 1,
                detail: format!("bad time: {e}"),
            })?;
            points.push(S::of(t));
        }
        Self::from_points(points)
    }
}
