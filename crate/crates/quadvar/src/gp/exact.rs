//! Exact Gaussian sampling on arbitrary designs by Gram-matrix factorization.
//!
//! The Gram matrix of the base kernel is Cholesky-factored once (with a
//! diagonal jitter ladder for nearly singular cases); each draw is then one
//! triangular matrix-vector product, so replications are cheap.

use std::sync::Arc;

use crate::design::SamplingDesign;
use crate::error::{Error, Result};
use crate::gp::{GaussianModel, Kernel, SamplePath};
use crate::scalar::Scalar;
use crate::util::substream_rng;

/// Largest supported number of observation points for exact simulation.
pub const MAX_EXACT_POINTS: usize = 5000;

/// A factored Gaussian model on a fixed design, ready to draw sample paths.
pub struct ExactSimulator<S> {
    design: Arc<SamplingDesign<S>>,
    /// Packed row-major lower-triangular Cholesky factor of the base Gram.
    chol: Vec<S>,
    /// Base mean μ(t_k), before the transform.
    mean: Vec<S>,
    /// Transform scale a(t_k) and shift m(t_k); identity when absent.
    scale: Option<(Vec<S>, Vec<S>)>,
    provenance: String,
    jitter: f64,
}

impl<S: Scalar> std::fmt::Debug for ExactSimulator<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ExactSimulator({}, n={}, jitter={})",
            self.provenance,
            self.design.n(),
            self.jitter
        )
    }
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

impl<S: Scalar> ExactSimulator<S> {
    /// Build the Gram matrix of `model`'s kernel on `design` and factor it.
    pub fn new(model: &GaussianModel<S>, design: Arc<SamplingDesign<S>>) -> Result<Self> {
        let pts = design.points();
        let size = pts.len();
        if size > MAX_EXACT_POINTS {
            return Err(Error::SimulationCostGuard {
                n: size - 1,
                max: MAX_EXACT_POINTS - 1,
            });
        }

        let mut gram = vec![S::zero(); size * (size + 1) / 2];
        for i in 0..size {
            for j in 0..=i {
                let v = model.kernel().eval(pts[i], pts[j]);
                if !v.is_finite() {
                    return Err(Error::KernelNonFinite {
                        s: pts[i].as_f64(),
                        t: pts[j].as_f64(),
                    });
                }
                gram[tri(i, j)] = v;
            }
        }
        if let Kernel::Custom { name, f } = model.kernel() {
            // Spot-check symmetry on a deterministic stride of pairs.
            let stride = (size / 16).max(1);
            for i in (0..size).step_by(stride) {
                for j in (0..=i).step_by(stride) {
                    let (a, b) = (f(pts[i], pts[j]), f(pts[j], pts[i]));
                    if (a - b).abs() > S::of(1e-12) * S::one().max(a.abs()) {
                        return Err(Error::InvalidConfig(format!(
                            "custom kernel {name} is asymmetric at ({}, {})",
                            pts[i].as_f64(),
                            pts[j].as_f64()
                        )));
                    }
                }
            }
        }

        let mean_diag = {
            let mut tr = S::zero();
            for i in 0..size {
                tr = tr + gram[tri(i, i)];
            }
            (tr / S::of_usize(size)).abs().max(S::of(f64::MIN_POSITIVE))
        };
        let mut chol = None;
        let mut jitter_used = 0.0f64;
        let mut rung = 0i32;
        loop {
            let tau = if rung == 0 {
                S::zero()
            } else {
                S::of(1e-12) * S::of(10f64.powi(rung - 1)) * mean_diag
            };
            match cholesky_packed(&gram, size, tau) {
                Some(l) => {
                    chol = Some(l);
                    jitter_used = tau.as_f64();
                    break;
                }
                None => {
                    rung += 1;
                    if rung > 7 {
                        break; // ladder exhausted at 1e-6 * mean diagonal
                    }
                }
            }
        }
        let chol = chol.ok_or(Error::DegenerateGram)?;

        // Sampling composes as a*(mu + Lz) + m with mu the base mean.
        let mean: Vec<S> = pts
            .iter()
            .map(|&t| model.mean.as_ref().map_or(S::zero(), |f| f(t)))
            .collect();
        let scale = match model.transform() {
            Some((a, m)) => {
                let av: Vec<S> = pts.iter().map(|&t| a(t)).collect();
                if av.iter().any(|&x| !(x > S::zero())) {
                    return Err(Error::InvalidConfig(
                        "transform scale a(t) must be positive on the design".into(),
                    ));
                }
                let mv: Vec<S> = pts.iter().map(|&t| m(t)).collect();
                Some((av, mv))
            }
            None => None,
        };

        Ok(Self {
            design,
            chol,
            mean,
            scale,
            provenance: format!("{model}"),
            jitter: jitter_used,
        })
    }

    /// Diagonal jitter that was needed to factor the Gram matrix (0 for a
    /// cleanly positive definite kernel).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn design(&self) -> &SamplingDesign<S> {
        &self.design
    }

    /// Draw the path for `seed`: X = a·(μ + Lz) + m with z standard normal
    /// from the seeded substream. Deterministic in `seed`.
    pub fn sample(&self, seed: u64) -> Result<SamplePath<S>> {
        let size = self.mean.len();
        let mut rng = substream_rng(seed, &[]);
        let z: Vec<S> = (0..size).map(|_| S::standard_normal(&mut rng)).collect();
        let mut values = Vec::with_capacity(size);
        for i in 0..size {
            let mut acc = self.mean[i];
            // Row i of the packed factor is contiguous: [tri(i,0), tri(i,i)].
            let row = &self.chol[tri(i, 0)..=tri(i, i)];
            for (&l, &zj) in row.iter().zip(&z) {
                acc = acc + l * zj;
            }
            values.push(acc);
        }
        if let Some((av, mv)) = &self.scale {
            for i in 0..size {
                values[i] = av[i] * values[i] + mv[i];
            }
        }
        SamplePath::new(
            self.design.clone(),
            values,
            format!("{} seed={seed}", self.provenance),
        )
    }
}

/// One-shot exact simulation; prefer [`ExactSimulator`] for repeated draws.
pub fn simulate_exact<S: Scalar>(
    model: &GaussianModel<S>,
    design: Arc<SamplingDesign<S>>,
    seed: u64,
) -> Result<SamplePath<S>> {
    ExactSimulator::new(model, design)?.sample(seed)
}

/// Packed lower-triangular Cholesky of (G + τI); None on a non-positive pivot.
fn cholesky_packed<S: Scalar>(gram: &[S], size: usize, tau: S) -> Option<Vec<S>> {
    let mut l = vec![S::zero(); gram.len()];
    for i in 0..size {
        for j in 0..=i {
            let mut sum = gram[tri(i, j)];
            if i == j {
                sum = sum + tau;
            }
            for k in 0..j {
                sum = sum - l[tri(i, k)] * l[tri(j, k)];
            }
            if i == j {
                if !(sum > S::zero()) || !sum.is_finite() {
                    return None;
                }
                l[tri(i, j)] = sum.sqrt();
            } else {
                l[tri(i, j)] = sum / l[tri(j, j)];
            }
        }
    }
    Some(l)
}
