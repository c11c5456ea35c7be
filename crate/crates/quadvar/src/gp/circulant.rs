//! Fast exact simulation of fractional Brownian motion on equidistant
//! designs by circulant embedding of the stationary increment covariance.
//!
//! The n increment autocovariances γ(0), …, γ(n−1) are embedded in the first
//! row of a 2m-circulant (m a power of two ≥ n); its eigenvalues come from
//! one FFT, a complex Gaussian vector is shaped by √λ, and a second FFT
//! yields increments with exactly the fBm increment law. The path is their
//! cumulative sum from X(0) = 0.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::design::{build_design, DensitySpec, SamplingDesign};
use crate::error::{Error, Result};
use crate::gp::SamplePath;
use crate::scalar::Scalar;
use crate::util::substream_rng;

/// Increment autocovariance of fBm on step δ:
/// γ(j) = ½δ^{2β}(|j+1|^{2β} − 2|j|^{2β} + |j−1|^{2β}).
fn increment_autocov<S: Scalar>(beta: S, delta: S, j: usize) -> S {
    let g = S::of(2.0) * beta;
    let jf = S::of_usize(j);
    let prev = if j == 0 { S::one() } else { (jf - S::one()).powf(g) };
    delta.powf(g) * ((jf + S::one()).powf(g) - S::of(2.0) * jf.powf(g) + prev) / S::of(2.0)
}

/// Simulate fBm with exponent β on the default equidistant design with n
/// steps on [0, T] (spacing T/(n+1)).
pub fn simulate_fbm_circulant<S: Scalar>(
    beta: S,
    n: usize,
    horizon: S,
    seed: u64,
) -> Result<SamplePath<S>> {
    let density = DensitySpec::uniform(horizon)?;
    let design = Arc::new(build_design(&density, n)?);
    simulate_fbm_circulant_on(design, beta, seed)
}

/// Simulate fBm on a given equidistant design. The increment step is read
/// from the design spacing, so δ overrides are honored.
pub fn simulate_fbm_circulant_on<S: Scalar>(
    design: Arc<SamplingDesign<S>>,
    beta: S,
    seed: u64,
) -> Result<SamplePath<S>> {
    if !(beta > S::zero()) || !(beta < S::one()) {
        return Err(Error::InvalidConfig(format!(
            "fbm exponent beta = {} outside (0,1)",
            beta.as_f64()
        )));
    }
    if !design.is_equidistant() {
        return Err(Error::NonEquidistant);
    }
    let n = design.n();
    let delta = design.points()[1] - design.points()[0];

    let mut m = n.next_power_of_two().max(2);
    let max_m = n
        .checked_mul(1 << 16)
        .ok_or(Error::EmbeddingFailed { max_size: usize::MAX })?;
    let lambda = loop {
        let big = 2 * m;
        let mut row: Vec<Complex<S>> = vec![Complex::new(S::zero(), S::zero()); big];
        for j in 0..=m {
            let g = increment_autocov(beta, delta, j);
            row[j].re = g;
            if j > 0 && j < m {
                row[big - j].re = g;
            }
        }
        let mut planner = FftPlanner::<S>::new();
        planner.plan_fft_forward(big).process(&mut row);
        let eig: Vec<S> = row.iter().map(|c| c.re).collect();
        let max_e = eig.iter().cloned().fold(S::neg_infinity(), S::max);
        let min_e = eig.iter().cloned().fold(S::infinity(), S::min);
        if min_e >= -S::of(1e-9) * max_e {
            // Clamp roundoff-negative eigenvalues to zero.
            break eig.into_iter().map(|e| e.max(S::zero())).collect::<Vec<S>>();
        }
        if m >= max_m {
            return Err(Error::EmbeddingFailed { max_size: max_m });
        }
        m *= 2;
    };

    let big = 2 * m;
    let big_f = S::of_usize(big);
    let mut rng = substream_rng(seed, &[]);
    let mut v: Vec<Complex<S>> = vec![Complex::new(S::zero(), S::zero()); big];
    v[0].re = (lambda[0] / big_f).sqrt() * S::standard_normal(&mut rng);
    for j in 1..m {
        let sd = (lambda[j] / (S::of(2.0) * big_f)).sqrt();
        let re = sd * S::standard_normal(&mut rng);
        let im = sd * S::standard_normal(&mut rng);
        v[j] = Complex::new(re, im);
        v[big - j] = Complex::new(re, -im);
    }
    v[m].re = (lambda[m] / big_f).sqrt() * S::standard_normal(&mut rng);

    let mut planner = FftPlanner::<S>::new();
    planner.plan_fft_forward(big).process(&mut v);

    let mut values = Vec::with_capacity(n + 1);
    values.push(S::zero());
    let mut acc = S::zero();
    for z in v.iter().take(n) {
        acc = acc + z.re;
        values.push(acc);
    }
    SamplePath::new(
        design,
        values,
        format!("fbm_circulant(beta={}) seed={seed}", beta.as_f64()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::exact::ExactSimulator;
    use crate::gp::{GaussianModel, Kernel};

    #[test]
    fn fixed_seed_reproduces_bitwise() {
        let a = simulate_fbm_circulant(0.8f64, 128, 1.0, 13).unwrap();
        let b = simulate_fbm_circulant(0.8f64, 128, 1.0, 13).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let c = simulate_fbm_circulant(0.8f64, 128, 1.0, 14).unwrap();
        assert_ne!(a.values()[128].to_bits(), c.values()[128].to_bits());
    }

    #[test]
    fn wiener_case_gives_iid_increments() {
        let n = 100_000usize;
        let path = simulate_fbm_circulant(0.5f64, n, 1.0, 4242).unwrap();
        let delta = 1.0 / (n as f64 + 1.0);
        let incs: Vec<f64> = path.values().windows(2).map(|w| w[1] - w[0]).collect();
        let var = incs.iter().map(|x| x * x).sum::<f64>() / n as f64;
        let se = delta * (2.0 / n as f64).sqrt();
        assert!(
            (var - delta).abs() <= 5.0 * se,
            "increment variance {var} vs delta {delta} (se {se})"
        );
        let lag1: f64 = incs.windows(2).map(|w| w[0] * w[1]).sum::<f64>()
            / ((n - 1) as f64 * delta);
        assert!(lag1.abs() <= 5.0 / (n as f64).sqrt(), "lag-1 corr {lag1}");
    }

    #[test]
    fn lag_one_increment_correlation_matches_formula() {
        // For fBm, corr(inc_k, inc_{k+1}) = 2^{2b-1} - 1 independent of delta.
        let beta = 0.8f64;
        let want = 2f64.powf(2.0 * beta - 1.0) - 1.0;
        let n = 512usize;
        let reps = 200usize;
        let mut corrs = Vec::with_capacity(reps);
        for rep in 0..reps {
            let path = simulate_fbm_circulant(beta, n, 1.0, 9_000 + rep as u64).unwrap();
            let incs: Vec<f64> = path.values().windows(2).map(|w| w[1] - w[0]).collect();
            let v = incs.iter().map(|x| x * x).sum::<f64>() / n as f64;
            let c = incs.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / (n - 1) as f64;
            corrs.push(c / v);
        }
        let mean = corrs.iter().sum::<f64>() / reps as f64;
        let sd = (corrs.iter().map(|c| (c - mean).powi(2)).sum::<f64>()
            / (reps - 1) as f64)
            .sqrt();
        let se = sd / (reps as f64).sqrt();
        assert!(
            (mean - want).abs() <= 5.0 * se,
            "lag-1 correlation {mean} vs {want} (se {se})"
        );
    }

    #[test]
    fn marginal_covariance_matches_fbm_kernel() {
        let beta = 0.7f64;
        let n = 64usize;
        let reps = 2000usize;
        let kernel = Kernel::Fbm { beta };
        let mut sums = vec![0.0f64; (n + 1) * (n + 2) / 2];
        let tri = |i: usize, j: usize| i * (i + 1) / 2 + j;
        let mut design_pts: Vec<f64> = Vec::new();
        for rep in 0..reps {
            let path = simulate_fbm_circulant(beta, n, 1.0, 30_000 + rep as u64).unwrap();
            if design_pts.is_empty() {
                design_pts = path.design().points().to_vec();
            }
            let v = path.values();
            for i in 0..=n {
                for j in 0..=i {
                    sums[tri(i, j)] += v[i] * v[j];
                }
            }
        }
        let mut worst = 0.0f64;
        for i in 0..=n {
            for j in 0..=i {
                let want = kernel.eval(design_pts[i], design_pts[j]);
                let got = sums[tri(i, j)] / reps as f64;
                let var = kernel.eval(design_pts[i], design_pts[i])
                    * kernel.eval(design_pts[j], design_pts[j])
                    + want * want;
                let se = (var / reps as f64).sqrt();
                if se > 0.0 {
                    worst = worst.max((got - want).abs() / se);
                }
            }
        }
        assert!(worst <= 5.0, "worst covariance deviation {worst} SEs");
    }

    #[test]
    fn circulant_and_exact_agree_in_distribution_at_half() {
        // Two-sample Kolmogorov-Smirnov on X(T), 2000 draws each, 0.1% level.
        let n = 64usize;
        let reps = 2000usize;
        let mut a: Vec<f64> = (0..reps)
            .map(|r| {
                *simulate_fbm_circulant(0.5f64, n, 1.0, 50_000 + r as u64)
                    .unwrap()
                    .values()
                    .last()
                    .unwrap()
            })
            .collect();
        let model = GaussianModel::new(Kernel::<f64>::Wiener);
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = Arc::new(build_design(&density, n).unwrap());
        let sim = ExactSimulator::new(&model, design).unwrap();
        let mut b: Vec<f64> = (0..reps)
            .map(|r| *sim.sample(90_000 + r as u64).unwrap().values().last().unwrap())
            .collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            let fa = i as f64 / a.len() as f64;
            let fb = j as f64 / b.len() as f64;
            d = d.max((fa - fb).abs());
        }
        // c(0.001) = sqrt(-ln(0.0005)/2)
        let crit = 1.9494745531 * ((a.len() + b.len()) as f64
            / (a.len() as f64 * b.len() as f64))
            .sqrt();
        assert!(d <= crit, "KS statistic {d} exceeds 0.1% critical value {crit}");
    }

    #[test]
    fn rejects_non_equidistant_designs() {
        let density = DensitySpec::affine(0.5, 1.0, 1.0).unwrap();
        let design = Arc::new(build_design(&density, 32).unwrap());
        match simulate_fbm_circulant_on(design, 0.5f64, 1) {
            Err(Error::NonEquidistant) => {}
            other => panic!("expected NonEquidistant, got {other:?}"),
        }
    }
}
