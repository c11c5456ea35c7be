//! Piecewise Lagrange reconstruction of a sampled path and its plug-in uses.
//!
//! The design is cut into non-overlapping blocks of r+1 consecutive knots
//! (stride r), 𝓘_k = [t_{kr}, t_{kr+r}], with the last block extended to the
//! horizon; inside each block the path is replaced by its degree-r Lagrange
//! interpolant. On top of that sit the plug-in approximation (order
//! max(r̂₀, 1)), the plug-in weighted quadrature (order r̂₀ + 1), and the
//! exact integrated mean-square error of the reconstruction, computed from a
//! model's covariance with no Monte Carlo.

use std::io::Write as IoWrite;
use std::sync::Arc;

use crate::design::SamplingDesign;
use crate::error::{Error, Result};
use crate::estimators::OrderEstimate;
use crate::gp::{GaussianModel, SamplePath, TimeFn};
use crate::scalar::Scalar;
use crate::util;

/// Integration weight ρ: a named built-in or any positive evaluable function.
#[derive(Clone)]
pub enum WeightFn<S> {
    /// ρ ≡ 1.
    One,
    /// ρ(t) = c₀ + c₁·t.
    Affine { c0: S, c1: S },
    /// Arbitrary positive weight.
    Custom { name: String, f: TimeFn<S> },
}

impl<S: Scalar> WeightFn<S> {
    pub fn eval(&self, t: S) -> S {
        match self {
            WeightFn::One => S::one(),
            WeightFn::Affine { c0, c1 } => *c0 + *c1 * t,
            WeightFn::Custom { f, .. } => f(t),
        }
    }

    /// ∫₀ᵀ ρ, used to scale quadrature tolerances.
    pub fn l1_norm(&self, horizon: S) -> S {
        match self {
            WeightFn::One => horizon,
            WeightFn::Affine { c0, c1 } => {
                *c0 * horizon + *c1 * horizon * horizon / S::of(2.0)
            }
            WeightFn::Custom { f, .. } => {
                let mid = f(horizon / S::of(2.0)).abs();
                let tol = S::of(1e-8) * horizon * (S::one() + mid);
                util::adaptive_simpson(&|t| f(t).abs(), S::zero(), horizon, tol)
            }
        }
    }

    /// Positivity and finiteness on [0, T] (a grid check for custom weights).
    pub fn validate(&self, horizon: S) -> Result<()> {
        let positive = |x: S| x.is_finite() && x > S::zero();
        let ok = match self {
            WeightFn::One => true,
            // An affine function is positive on [0, T] iff it is at the ends.
            WeightFn::Affine { c0, c1 } => positive(*c0) && positive(*c0 + *c1 * horizon),
            WeightFn::Custom { f, .. } => (0..=128)
                .all(|i| positive(f(horizon * S::of_usize(i) / S::of(128.0)))),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(
                "weight function must be positive and finite on [0, T]".into(),
            ))
        }
    }
}

impl<S: Scalar> std::fmt::Debug for WeightFn<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightFn::One => write!(f, "one"),
            WeightFn::Affine { c0, c1 } => {
                write!(f, "affine({}, {})", c0.as_f64(), c1.as_f64())
            }
            WeightFn::Custom { name, .. } => write!(f, "custom({name})"),
        }
    }
}

/// Block geometry of an order-r piecewise interpolant on n+1 points:
/// ⌊n/r⌋ blocks of r+1 knots at stride r, the last one reaching the horizon.
#[derive(Debug, Clone, Copy)]
struct BlockLayout {
    r: usize,
    num_blocks: usize,
}

impl BlockLayout {
    fn new(n: usize, r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidConfig(
                "interpolation order r must be >= 1".into(),
            ));
        }
        if n < r {
            return Err(Error::OrderTooLarge {
                n,
                r,
                u: 1,
                max_r: n,
            });
        }
        Ok(Self {
            r,
            num_blocks: n / r,
        })
    }

    /// [a_k, b_k]; the last right end is the horizon itself.
    fn interval<S: Scalar>(&self, pts: &[S], horizon: S, k: usize) -> (S, S) {
        let a = pts[k * self.r];
        let b = if k + 1 == self.num_blocks {
            horizon
        } else {
            pts[k * self.r + self.r]
        };
        (a, b)
    }

    /// Block containing t; shared boundaries resolve to the left block.
    fn block_of<S: Scalar>(&self, pts: &[S], horizon: S, t: S) -> Result<usize> {
        let eps = horizon.abs() * S::of(1e-12);
        if t < pts[0] - eps {
            return Err(Error::OutsideBlock {
                block: 0,
                t: t.as_f64(),
            });
        }
        if t > horizon + eps {
            return Err(Error::OutsideBlock {
                block: self.num_blocks - 1,
                t: t.as_f64(),
            });
        }
        // Largest k with t_{kr} < t (so a left edge maps to the block on its
        // left); t at or below t₀ lands in block 0.
        let (mut lo, mut hi) = (0usize, self.num_blocks);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if pts[mid * self.r] < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Lagrange basis values L₀,…,L_r at t, for the knots starting at index k0.
fn weights_at<S: Scalar>(pts: &[S], k0: usize, r: usize, t: S) -> Vec<S> {
    (0..=r)
        .map(|i| {
            let ti = pts[k0 + i];
            let mut w = S::one();
            for j in 0..=r {
                if j != i {
                    w = w * (t - pts[k0 + j]) / (ti - pts[k0 + j]);
                }
            }
            w
        })
        .collect()
}

/// Basis weights of block k at time t. t must lie in 𝓘_k (the last block
/// extends to the horizon); anything else is the caller's block-resolution
/// bug and is rejected.
pub fn lagrange_weights<S: Scalar>(
    design: &SamplingDesign<S>,
    k: usize,
    r: usize,
    t: S,
) -> Result<Vec<S>> {
    let layout = BlockLayout::new(design.n(), r)?;
    if k >= layout.num_blocks {
        return Err(Error::InvalidConfig(format!(
            "block {k} out of range: order {r} on n = {} has {} blocks",
            design.n(),
            layout.num_blocks
        )));
    }
    let pts = design.points();
    let horizon = design.horizon();
    let (a, b) = layout.interval(pts, horizon, k);
    let eps = horizon.abs() * S::of(1e-12);
    if t < a - eps || t > b + eps {
        return Err(Error::OutsideBlock {
            block: k,
            t: t.as_f64(),
        });
    }
    Ok(weights_at(pts, k * r, r, t))
}

/// Order-r piecewise Lagrange interpolant of a sample path.
#[derive(Debug, Clone)]
pub struct PiecewiseLagrange<S> {
    design: Arc<SamplingDesign<S>>,
    values: Vec<S>,
    layout: BlockLayout,
}

impl<S: Scalar> PiecewiseLagrange<S> {
    pub fn new(path: &SamplePath<S>, r: usize) -> Result<Self> {
        let layout = BlockLayout::new(path.n(), r)?;
        Ok(Self {
            design: path.design_arc(),
            values: path.values().to_vec(),
            layout,
        })
    }

    pub fn order(&self) -> usize {
        self.layout.r
    }

    pub fn num_blocks(&self) -> usize {
        self.layout.num_blocks
    }

    /// [a_k, b_k] of block k.
    pub fn block_interval(&self, k: usize) -> Result<(S, S)> {
        if k >= self.layout.num_blocks {
            return Err(Error::InvalidConfig(format!("block {k} out of range")));
        }
        Ok(self
            .layout
            .interval(self.design.points(), self.design.horizon(), k))
    }

    /// Block containing t (boundaries resolve left).
    pub fn block_of(&self, t: S) -> Result<usize> {
        self.layout
            .block_of(self.design.points(), self.design.horizon(), t)
    }

    /// X̃(t).
    pub fn evaluate(&self, t: S) -> Result<S> {
        let k = self.block_of(t)?;
        let k0 = k * self.layout.r;
        let w = weights_at(self.design.points(), k0, self.layout.r, t);
        let mut acc = S::zero();
        for (i, wi) in w.iter().enumerate() {
            acc = acc + *wi * self.values[k0 + i];
        }
        Ok(acc)
    }

    /// Evaluate on a uniform grid of `samples`+1 points spanning [0, T].
    pub fn evaluate_grid(&self, samples: usize) -> Result<Vec<(S, S)>> {
        let horizon = self.design.horizon();
        (0..=samples)
            .map(|i| {
                let t = horizon * S::of_usize(i) / S::of_usize(samples.max(1));
                Ok((t, self.evaluate(t)?))
            })
            .collect()
    }

    /// CSV export `t,xhat` of a uniform evaluation grid.
    pub fn write_csv<W: IoWrite>(&self, mut out: W, samples: usize) -> Result<()> {
        writeln!(out, "t,xhat")?;
        for (t, x) in self.evaluate_grid(samples)? {
            writeln!(
                out,
                "{},{}",
                util::fmt_g17(t.as_f64()),
                util::fmt_g17(x.as_f64())
            )?;
        }
        Ok(())
    }
}

/// Interpolation order of the plug-in approximation: max(r̂₀, 1), with the
/// sentinel mapped to m_n − 1.
pub fn plugin_order(order: OrderEstimate, m_n: usize) -> usize {
    match order {
        OrderEstimate::Found(r0) => r0.max(1),
        OrderEstimate::Sentinel => (m_n - 1).max(1),
    }
}

/// The plug-in reconstruction X̃ at order max(r̂₀, 1).
pub fn plugin_approximation<S: Scalar>(
    path: &SamplePath<S>,
    order: OrderEstimate,
    m_n: usize,
) -> Result<PiecewiseLagrange<S>> {
    PiecewiseLagrange::new(path, plugin_order(order, m_n))
}

/// Outcome of the plug-in quadrature ∫ X̃·ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<S> {
    pub value: S,
    /// Interpolation order actually used (r̂₀ + 1, or m_n on sentinel).
    pub order: usize,
    /// True when the order came from the sentinel fallback.
    pub sentinel_fallback: bool,
}

/// ∫₀ᵀ X̃_{r̂₀+1}(t)·ρ(t) dt by blockwise Gauss–Legendre quadrature,
/// refined by interval halving until |Δ| ≤ 1e-10·‖ρ‖₁·max|X| per block
/// share. A sentinel order falls back to m_n and is flagged.
pub fn plugin_quadrature<S: Scalar>(
    path: &SamplePath<S>,
    order: OrderEstimate,
    m_n: usize,
    rho: &WeightFn<S>,
) -> Result<QuadratureResult<S>> {
    let horizon = path.design().horizon();
    rho.validate(horizon)?;
    let (r, sentinel_fallback) = match order {
        OrderEstimate::Found(r0) => (r0 + 1, false),
        OrderEstimate::Sentinel => (m_n, true),
    };
    let interp = PiecewiseLagrange::new(path, r)?;
    let max_abs = path
        .values()
        .iter()
        .fold(S::zero(), |m, &x| m.max(x.abs()));
    let scale = rho.l1_norm(horizon) * max_abs;
    let tol_total = S::of(1e-10) * if scale > S::zero() { scale } else { S::one() };
    let nodes = util::gauss_legendre::<S>(16);

    let mut value = S::zero();
    for k in 0..interp.num_blocks() {
        let (a, b) = interp.block_interval(k)?;
        let k0 = k * r;
        let f = |t: S| {
            let w = weights_at(interp.design.points(), k0, r, t);
            let mut acc = S::zero();
            for (i, wi) in w.iter().enumerate() {
                acc = acc + *wi * interp.values[k0 + i];
            }
            acc * rho.eval(t)
        };
        let tol_k = tol_total * (b - a) / horizon;
        value = value + gl_refine(&f, a, b, &nodes, tol_k);
    }
    Ok(QuadratureResult {
        value,
        order: r,
        sentinel_fallback,
    })
}

/// Gauss–Legendre on [a, b] over 2^j equal subintervals, halving until two
/// successive refinements agree within tol.
fn gl_refine<S: Scalar, F: Fn(S) -> S>(f: &F, a: S, b: S, nodes: &[(S, S)], tol: S) -> S {
    let mut prev = gl_pass(f, a, b, nodes, 1);
    let mut parts = 2usize;
    loop {
        let cur = gl_pass(f, a, b, nodes, parts);
        if (cur - prev).abs() <= tol || parts >= 256 {
            return cur;
        }
        prev = cur;
        parts *= 2;
    }
}

fn gl_pass<S: Scalar, F: Fn(S) -> S>(f: &F, a: S, b: S, nodes: &[(S, S)], parts: usize) -> S {
    let h = (b - a) / S::of_usize(parts);
    let half = h / S::of(2.0);
    let mut acc = S::zero();
    for p in 0..parts {
        let mid = a + h * S::of_usize(p) + half;
        for &(x, w) in nodes {
            acc = acc + w * f(mid + half * x);
        }
    }
    acc * half
}

/// Pointwise reconstruction error variance at t for block k of an order-r
/// layout: E|X(t) − X̃_r(t)|², including the mean mismatch when the model
/// has a trend.
fn mse_at<S: Scalar>(
    model: &GaussianModel<S>,
    pts: &[S],
    k0: usize,
    r: usize,
    t: S,
) -> S {
    let w = weights_at(pts, k0, r, t);
    let two = S::of(2.0);
    let mut e = model.covariance(t, t);
    let mut mean_err = model.mean_at(t);
    for (i, wi) in w.iter().enumerate() {
        let ti = pts[k0 + i];
        e = e - two * *wi * model.covariance(t, ti);
        mean_err = mean_err - *wi * model.mean_at(ti);
        for (j, wj) in w.iter().enumerate() {
            let tj = pts[k0 + j];
            e = e + *wi * *wj * model.covariance(ti, tj);
        }
    }
    // The variance is nonnegative by construction; clip rounding residue.
    (e + mean_err * mean_err).max(S::zero())
}

/// Exact integrated mean-square error ∫₀ᵀ E|X(t) − X̃_r(t)|²·ρ(t) dt of the
/// order-r reconstruction under the model, by blockwise adaptive quadrature
/// split at every knot (relative tolerance 1e-9).
pub fn exact_imse<S: Scalar>(
    model: &GaussianModel<S>,
    design: &SamplingDesign<S>,
    r: usize,
    rho: &WeightFn<S>,
) -> Result<S> {
    let horizon = design.horizon();
    rho.validate(horizon)?;
    let layout = BlockLayout::new(design.n(), r)?;
    let pts = design.points();
    let eps = horizon.abs() * S::of(1e-12);

    // Integration pieces: every knot subinterval, plus the extension of the
    // last block up to the horizon when the design stops short of it.
    let mut pieces: Vec<(usize, S, S)> = Vec::new();
    for k in 0..layout.num_blocks {
        let k0 = k * r;
        for j in 0..r {
            pieces.push((k0, pts[k0 + j], pts[k0 + j + 1]));
        }
        if k + 1 == layout.num_blocks && horizon > pts[k0 + r] + eps {
            pieces.push((k0, pts[k0 + r], horizon));
        }
    }

    // First pass sets the absolute budget for the 1e-9 relative target.
    let mut crude_total = S::zero();
    let mut crude = Vec::with_capacity(pieces.len());
    for &(k0, lo, hi) in &pieces {
        let f = |t: S| mse_at(model, pts, k0, r, t) * rho.eval(t);
        let mid = (lo + hi) / S::of(2.0);
        let est = (hi - lo) / S::of(6.0) * (f(lo) + S::of(4.0) * f(mid) + f(hi));
        crude_total = crude_total + est.abs();
        crude.push(est);
    }
    let budget = S::of(1e-9) * crude_total.max(S::of(1e-30));

    let span = horizon - pts[0];
    let mut acc = S::zero();
    for &(k0, lo, hi) in &pieces {
        let f = |t: S| mse_at(model, pts, k0, r, t) * rho.eval(t);
        let tol = budget * (hi - lo) / span;
        acc = acc + util::adaptive_simpson(&f, lo, hi, tol);
    }
    Ok(acc)
}
