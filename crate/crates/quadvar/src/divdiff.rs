//! Divided differences on arbitrary designs and their quadratic variations.
//!
//! The order-r divided difference over the dilated window
//! (t_k, t_{k+u}, …, t_{k+ru}) annihilates polynomials of degree < r and
//! normalizes the degree-r coefficient to 1; its square, averaged over k,
//! is the u-dilated quadratic variation that drives the smoothness
//! estimators. `expected_qv` computes the exact expectation of that average
//! from a model's covariance, with no Monte Carlo error.

use crate::design::SamplingDesign;
use crate::error::{Error, Result};
use crate::gp::{GaussianModel, SamplePath};
use crate::scalar::Scalar;

/// Divided-difference coefficients b₀,…,b_r for one window.
#[derive(Debug, Clone)]
pub struct DividedDiffCoeffs<S> {
    pub k: usize,
    pub r: usize,
    pub u: usize,
    pub b: Vec<S>,
    /// True when the log-magnitude compensated path was used (large order or
    /// very small step, where the direct product risks overflow).
    pub compensated: bool,
}

/// The averaged squared divided differences of one (r, u) sweep.
#[derive(Debug, Clone)]
pub struct QuadraticVariationTrace<S> {
    pub r: usize,
    pub u: usize,
    /// n_r = n − u·r; the sweep averages over k = 0,…,n_r.
    pub n_r: usize,
    /// Mean of D²_{r,k} over the sweep.
    pub value: S,
    /// Per-window squares, retained on request.
    pub per_k: Option<Vec<S>>,
}

fn check_window<S: Scalar>(
    design: &SamplingDesign<S>,
    k: usize,
    r: usize,
    u: usize,
) -> Result<()> {
    let n = design.n();
    if r < 1 || u < 1 {
        return Err(Error::InvalidConfig(format!(
            "order r = {r} and dilation u = {u} must both be >= 1"
        )));
    }
    if k + u * r > n {
        return Err(Error::WindowOutOfRange { k, r, u, n });
    }
    Ok(())
}

/// Coefficients bᵢ = 1/∏_{m≠i}(t_{k+iu} − t_{k+mu}) of the window at k.
pub fn coeffs<S: Scalar>(
    design: &SamplingDesign<S>,
    k: usize,
    r: usize,
    u: usize,
) -> Result<DividedDiffCoeffs<S>> {
    check_window(design, k, r, u)?;
    let pts = design.points();
    let knots: Vec<S> = (0..=r).map(|i| pts[k + i * u]).collect();
    let compensated = r >= 8 || design.delta_n() <= S::of(1e-6);
    let mut b = Vec::with_capacity(r + 1);
    for i in 0..=r {
        if compensated {
            // Accumulate ln|∏| to avoid overflow; the sign of the product is
            // (−1)^{r−i} since exactly r−i factors are negative.
            let mut log_abs = S::zero();
            for m in 0..=r {
                if m == i {
                    continue;
                }
                let d = knots[i] - knots[m];
                if d == S::zero() {
                    return Err(Error::InvalidDesign(format!(
                        "coincident knots in window k={k}, r={r}, u={u}"
                    )));
                }
                log_abs = log_abs + d.abs().ln();
            }
            let sign = if (r - i).is_multiple_of(2) { S::one() } else { -S::one() };
            b.push(sign * (-log_abs).exp());
        } else {
            let mut prod = S::one();
            for m in 0..=r {
                if m == i {
                    continue;
                }
                let d = knots[i] - knots[m];
                if d == S::zero() {
                    return Err(Error::InvalidDesign(format!(
                        "coincident knots in window k={k}, r={r}, u={u}"
                    )));
                }
                prod = prod * d;
            }
            b.push(S::one() / prod);
        }
    }
    Ok(DividedDiffCoeffs {
        k,
        r,
        u,
        b,
        compensated,
    })
}

/// D_{r,k}^{(u)} X = Σᵢ bᵢ·x_{k+iu}.
pub fn divided_difference<S: Scalar>(
    path: &SamplePath<S>,
    k: usize,
    r: usize,
    u: usize,
) -> Result<S> {
    let c = coeffs(path.design(), k, r, u)?;
    let x = path.values();
    let mut acc = S::zero();
    for (i, &bi) in c.b.iter().enumerate() {
        acc = acc + bi * x[k + i * u];
    }
    Ok(acc)
}

/// Mean of squared divided differences over k = 0,…,n−u·r.
pub fn quadratic_variation<S: Scalar>(
    path: &SamplePath<S>,
    r: usize,
    u: usize,
) -> Result<QuadraticVariationTrace<S>> {
    quadratic_variation_detailed(path, r, u, false)
}

/// As [`quadratic_variation`], optionally retaining the per-window squares.
pub fn quadratic_variation_detailed<S: Scalar>(
    path: &SamplePath<S>,
    r: usize,
    u: usize,
    keep_per_k: bool,
) -> Result<QuadraticVariationTrace<S>> {
    let n = path.n();
    if r < 1 || u < 1 || n < u * r {
        return Err(Error::OrderTooLarge {
            n,
            r,
            u,
            max_r: if u >= 1 { n / u.max(1) } else { 0 },
        });
    }
    let n_r = n - u * r;
    let mut per_k = if keep_per_k {
        Some(Vec::with_capacity(n_r + 1))
    } else {
        None
    };
    let mut sum = S::zero();
    for k in 0..=n_r {
        let d = divided_difference(path, k, r, u)?;
        let sq = d * d;
        sum = sum + sq;
        if let Some(v) = per_k.as_mut() {
            v.push(sq);
        }
    }
    let value = sum / S::of_usize(n_r + 1);
    if !value.is_finite() {
        return Err(Error::NonFiniteVariation { order: r });
    }
    Ok(QuadraticVariationTrace {
        r,
        u,
        n_r,
        value,
        per_k,
    })
}

/// Exact E[mean of D²] under the model:
/// (1/(n_r+1))·Σ_k Σ_{i,j} bᵢbⱼ·[K(t_{k+iu}, t_{k+ju}) + μ(t_{k+iu})·μ(t_{k+ju})]
/// with K and μ the covariance and mean of the observed process.
pub fn expected_qv<S: Scalar>(
    model: &GaussianModel<S>,
    design: &SamplingDesign<S>,
    r: usize,
    u: usize,
) -> Result<S> {
    let n = design.n();
    if r < 1 || u < 1 || n < u * r {
        return Err(Error::OrderTooLarge {
            n,
            r,
            u,
            max_r: n / u.max(1),
        });
    }
    let pts = design.points();
    let n_r = n - u * r;
    let mut sum = S::zero();
    for k in 0..=n_r {
        let c = coeffs(design, k, r, u)?;
        let mut acc = S::zero();
        for i in 0..=r {
            let ti = pts[k + i * u];
            let mi = model.mean_at(ti);
            for j in 0..=r {
                let tj = pts[k + j * u];
                let kij = model.covariance(ti, tj) + mi * model.mean_at(tj);
                if !kij.is_finite() {
                    return Err(Error::KernelNonFinite {
                        s: ti.as_f64(),
                        t: tj.as_f64(),
                    });
                }
                acc = acc + c.b[i] * c.b[j] * kij;
            }
        }
        sum = sum + acc;
    }
    Ok(sum / S::of_usize(n_r + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{build_design, build_design_with_delta, DensitySpec};
    use crate::gp::{simulate_fbm_circulant, ExactSimulator, GaussianModel, Kernel};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn equidistant(step: f64, n: usize) -> Arc<SamplingDesign<f64>> {
        let horizon = step * (n as f64 + 1.0);
        let d = DensitySpec::uniform(horizon).unwrap();
        Arc::new(build_design(&d, n).unwrap())
    }

    fn poly_path(design: &Arc<SamplingDesign<f64>>, f: impl Fn(f64) -> f64) -> SamplePath<f64> {
        let values = design.points().iter().map(|&t| f(t)).collect();
        SamplePath::new(design.clone(), values, "poly").unwrap()
    }

    /// Newton-form divided-difference table; independent oracle for the
    /// product-formula coefficients.
    fn newton_dd(knots: &[f64], values: &[f64]) -> f64 {
        let mut table = values.to_vec();
        let r = knots.len() - 1;
        for level in 1..=r {
            for i in 0..=(r - level) {
                table[i] = (table[i + 1] - table[i]) / (knots[i + level] - knots[i]);
            }
        }
        table[0]
    }

    #[test]
    fn equidistant_order2_coefficients() {
        let design = equidistant(1.0, 6);
        let c = coeffs(&design, 1, 2, 1).unwrap();
        let want = [0.5, -1.0, 0.5];
        for (got, want) in c.b.iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(!c.compensated);
    }

    #[test]
    fn two_knot_coefficients_are_reciprocal_spacing() {
        let design =
            Arc::new(SamplingDesign::from_points(vec![0.0f64, 0.5, 1.0]).unwrap());
        let c = coeffs(&design, 0, 1, 1).unwrap();
        assert!((c.b[0] + 2.0).abs() < 1e-14);
        assert!((c.b[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dilated_order3_matches_binomial_identity() {
        // On an equidistant design, b_i = a_{i,r}/(r!(u*delta)^r) with
        // a_{i,r} = C(r,i)(-1)^{r-i}.
        let design = equidistant(0.1, 10);
        let c = coeffs(&design, 0, 3, 2).unwrap();
        let denom = 6.0 * 0.2f64.powi(3); // r!(u*delta)^r = 0.048
        let a = [-1.0, 3.0, -3.0, 1.0];
        for (got, ai) in c.b.iter().zip(a) {
            let want = ai / denom;
            assert!(
                (got - want).abs() < 1e-9 * want.abs(),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn moment_annihilation_and_normalization_on_irregular_design() {
        let density = DensitySpec::<f64>::affine(2.0 / 3.0, 2.0 / 3.0, 1.0).unwrap();
        let design = Arc::new(build_design(&density, 60).unwrap());
        let pts = design.points();
        for (k, r, u) in [(0usize, 1usize, 1usize), (3, 2, 1), (10, 3, 2), (5, 4, 3)] {
            let c = coeffs(&design, k, r, u).unwrap();
            let bmax = c.b.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for p in 0..r {
                let mut s = 0.0;
                for (i, &bi) in c.b.iter().enumerate() {
                    s += bi * (pts[k + i * u] - pts[k]).powi(p as i32);
                }
                let scale = bmax * (pts[k + r * u] - pts[k]).powi(p as i32);
                assert!(
                    s.abs() <= 1e-8 * scale.max(1e-300),
                    "k={k} r={r} u={u} p={p}: moment {s}"
                );
            }
            let mut s = 0.0;
            for (i, &bi) in c.b.iter().enumerate() {
                s += bi * (pts[k + i * u] - pts[k]).powi(r as i32);
            }
            assert!((s - 1.0).abs() <= 1e-8, "k={k} r={r} u={u}: norm {s}");
        }
    }

    #[test]
    fn coefficient_bound_holds_on_affine_design() {
        let density = DensitySpec::<f64>::affine(2.0 / 3.0, 2.0 / 3.0, 1.0).unwrap();
        let design = Arc::new(build_design(&density, 100).unwrap());
        let c1 = 0.75; // 1/(T sup psi)
        let delta = design.delta_n();
        for (k, r, u) in [(0usize, 2usize, 1usize), (20, 3, 2), (50, 4, 1), (10, 1, 3)] {
            let c = coeffs(&design, k, r, u).unwrap();
            for (i, &bi) in c.b.iter().enumerate() {
                let mut denom = 1.0f64;
                for m in 0..=r {
                    if m != i {
                        denom *= (i as f64 - m as f64).abs();
                    }
                }
                let bound = (c1 * u as f64 * delta).powi(-(r as i32)) / denom;
                assert!(
                    bi.abs() <= bound * (1.0 + 1e-12),
                    "k={k} r={r} u={u} i={i}: |b| = {} > {bound}",
                    bi.abs()
                );
            }
        }
    }

    #[test]
    fn compensated_path_matches_direct_products() {
        // Tiny step triggers the log-compensated branch; the direct product
        // is still representable here, so both must agree.
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = Arc::new(build_design_with_delta(&density, 100, 1e-7).unwrap());
        let c = coeffs(&design, 3, 2, 1).unwrap();
        assert!(c.compensated);
        let pts = design.points();
        for (i, &bi) in c.b.iter().enumerate() {
            let mut prod = 1.0f64;
            for m in 0..=2 {
                if m != i {
                    prod *= pts[3 + i] - pts[3 + m];
                }
            }
            let direct = 1.0 / prod;
            assert!(
                (bi - direct).abs() <= 1e-12 * direct.abs(),
                "i={i}: {bi} vs {direct}"
            );
        }

        // Order 8 on a unit-step design: compare against the binomial form.
        let design = equidistant(1.0, 20);
        let c = coeffs(&design, 0, 8, 1).unwrap();
        assert!(c.compensated);
        let fact8 = 40320.0f64;
        for (i, &bi) in c.b.iter().enumerate() {
            let binom = (0..8).fold(1.0f64, |acc, j| acc * (8 - j) as f64 / (j + 1) as f64);
            let _ = binom;
            let choose = |n: usize, k: usize| -> f64 {
                (1..=k).fold(1.0f64, |acc, j| acc * (n - k + j) as f64 / j as f64)
            };
            let sign = if (8 - i) % 2 == 0 { 1.0 } else { -1.0 };
            let want = choose(8, i) * sign / fact8;
            assert!(
                (bi - want).abs() <= 1e-10 * want.abs(),
                "i={i}: {bi} vs {want}"
            );
        }
    }

    #[test]
    fn window_bounds_are_enforced() {
        let design = equidistant(0.1, 10);
        assert!(coeffs(&design, 9, 1, 1).is_ok());
        assert!(matches!(
            coeffs(&design, 10, 1, 1),
            Err(Error::WindowOutOfRange { .. })
        ));
        assert!(matches!(
            coeffs(&design, 0, 4, 3),
            Err(Error::WindowOutOfRange { .. })
        ));
    }

    #[test]
    fn quadratic_path_has_unit_divided_difference_everywhere() {
        let density = DensitySpec::<f64>::affine(0.5, 1.0, 1.0).unwrap();
        let design = Arc::new(build_design(&density, 40).unwrap());
        let path = poly_path(&design, |t| t * t);
        for k in [0usize, 7, 19] {
            let d = divided_difference(&path, k, 2, 1).unwrap();
            assert!((d - 1.0).abs() < 1e-9, "k={k}: {d}");
        }
        let qv = quadratic_variation(&path, 2, 1).unwrap();
        assert!((qv.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constant_and_linear_paths_are_annihilated() {
        let design = equidistant(0.25, 12);
        let constant = poly_path(&design, |_| 3.25);
        let linear = poly_path(&design, |t| 2.0 - 5.0 * t);
        for r in 1..=3usize {
            let qv = quadratic_variation(&constant, r, 1).unwrap().value;
            assert!(qv.abs() < 1e-18, "constant r={r}: {qv}");
        }
        for r in 2..=3usize {
            let qv = quadratic_variation(&linear, r, 1).unwrap().value;
            assert!(qv.abs() < 1e-18, "linear r={r}: {qv}");
        }
    }

    #[test]
    fn cubic_path_divided_difference_is_sum_of_knots() {
        let design = equidistant(0.25, 3);
        let path = poly_path(&design, |t| t * t * t);
        let d = divided_difference(&path, 0, 2, 1).unwrap();
        assert!((d - 0.75).abs() < 1e-12, "{d}");
    }

    #[test]
    fn product_formula_matches_newton_oracle_on_random_grids() {
        let mut rng = crate::util::substream_rng(7, &[77]);
        use rand::Rng;
        for case in 0..200 {
            let n = 12usize;
            let mut pts = vec![0.0f64];
            let mut t = 0.0;
            for _ in 0..n {
                t += rng.gen::<f64>() + 0.05;
                pts.push(t);
            }
            let design = Arc::new(SamplingDesign::from_points(pts).unwrap());
            let values: Vec<f64> = (0..=n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let path = SamplePath::new(design.clone(), values.clone(), "rand").unwrap();
            let r = 1 + case % 5;
            let u = 1 + case % 2;
            if r * u > n {
                continue;
            }
            let k = case % (n - r * u + 1);
            let got = divided_difference(&path, k, r, u).unwrap();
            let knots: Vec<f64> = (0..=r).map(|i| design.points()[k + i * u]).collect();
            let vals: Vec<f64> = (0..=r).map(|i| values[k + i * u]).collect();
            let want = newton_dd(&knots, &vals);
            let scale = want.abs().max(1.0);
            assert!(
                (got - want).abs() <= 1e-8 * scale,
                "case {case} (k={k},r={r},u={u}): {got} vs {want}"
            );
        }
    }

    proptest! {
        #[test]
        fn annihilation_and_normalization_hold_on_random_tuples(
            seed in 0u64..500,
            r in 1usize..=6,
            u in 1usize..=4,
        ) {
            use rand::Rng;
            let mut rng = crate::util::substream_rng(seed, &[42]);
            let n = 30usize;
            let mut pts = vec![0.0f64];
            let mut t = 0.0;
            for _ in 0..n {
                t += rng.gen::<f64>() * 0.05 + 0.005;
                pts.push(t);
            }
            let design = SamplingDesign::from_points(pts).unwrap();
            let k = rng.gen_range(0..=(n - r * u));
            let c = coeffs(&design, k, r, u).unwrap();
            let pts = design.points();
            let bmax = c.b.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for p in 0..r {
                let mut s = 0.0;
                for (i, &bi) in c.b.iter().enumerate() {
                    s += bi * (pts[k + i * u] - pts[k]).powi(p as i32);
                }
                let scale = bmax * (pts[k + r * u] - pts[k]).powi(p as i32);
                prop_assert!(s.abs() <= 1e-8 * scale.max(1e-300));
            }
            let mut s = 0.0;
            for (i, &bi) in c.b.iter().enumerate() {
                s += bi * (pts[k + i * u] - pts[k]).powi(r as i32);
            }
            prop_assert!((s - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn equidistant_reduction_to_finite_differences() {
        // D = (u*delta)^{-r}/r! * sum a_{i,r} x_{k+iu} on uniform designs.
        let design = equidistant(0.01, 40);
        let mut rng = crate::util::substream_rng(3, &[1]);
        use rand::Rng;
        let values: Vec<f64> = (0..=40).map(|_| rng.gen::<f64>()).collect();
        let path = SamplePath::new(design.clone(), values.clone(), "rand").unwrap();
        let choose = |n: usize, k: usize| -> f64 {
            (1..=k).fold(1.0f64, |acc, j| acc * (n - k + j) as f64 / j as f64)
        };
        for (k, r, u) in [(0usize, 1usize, 1usize), (2, 2, 1), (5, 3, 2), (1, 4, 3)] {
            let got = divided_difference(&path, k, r, u).unwrap();
            let fact: f64 = (1..=r).product::<usize>() as f64;
            let mut delta_sum = 0.0;
            for i in 0..=r {
                let sign = if (r - i) % 2 == 0 { 1.0 } else { -1.0 };
                delta_sum += choose(r, i) * sign * values[k + i * u];
            }
            let want = (u as f64 * 0.01).powi(-(r as i32)) / fact * delta_sum;
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1e-10),
                "k={k} r={r} u={u}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn wiener_qv_mean_matches_n_over_replications() {
        // With delta = 1/n the first-order QV has mean exactly n.
        let n = 128usize;
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = Arc::new(build_design_with_delta(&density, n, 1.0 / n as f64).unwrap());
        let model = GaussianModel::new(Kernel::<f64>::Wiener);
        let sim = ExactSimulator::new(&model, design).unwrap();
        let reps = 500usize;
        let mut vals = Vec::with_capacity(reps);
        for j in 0..reps {
            let path = sim.sample(600 + j as u64).unwrap();
            vals.push(quadratic_variation(&path, 1, 1).unwrap().value);
        }
        let mean = vals.iter().sum::<f64>() / reps as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64)
            .sqrt();
        let se = sd / (reps as f64).sqrt();
        assert!(
            (mean - n as f64).abs() <= 5.0 * se,
            "QV mean {mean} vs {n} (se {se})"
        );
    }

    #[test]
    fn expected_qv_wiener_closed_forms() {
        let n = 1000usize;
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = build_design_with_delta(&density, n, 1.0 / n as f64).unwrap();
        let model = GaussianModel::new(Kernel::<f64>::Wiener);
        let e1 = expected_qv(&model, &design, 1, 1).unwrap();
        assert!((e1 - n as f64).abs() <= 1e-9 * n as f64, "order 1: {e1}");
        // Second differences of Wiener have variance 2*delta, so
        // E D^2 = 2*delta/(2! delta^2)^2 ... i.e. E QV * n^{-3} -> 1/2.
        let e2 = expected_qv(&model, &design, 2, 1).unwrap();
        let scaled = e2 / (n as f64).powi(3);
        assert!((scaled - 0.5).abs() <= 0.01 * 0.5, "order 2 scaled: {scaled}");
    }

    #[test]
    fn expected_qv_fbm_first_order_limit_is_one() {
        let n = 4000usize;
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = build_design(&density, n).unwrap();
        for beta in [0.3f64, 0.5, 0.8] {
            let model = GaussianModel::new(Kernel::Fbm { beta });
            let e = expected_qv(&model, &design, 1, 1).unwrap();
            let scaled = e * (n as f64).powf(-2.0 * (1.0 - beta));
            assert!(
                (scaled - 1.0).abs() <= 0.02,
                "beta={beta}: scaled expected QV {scaled}"
            );
        }
    }

    #[test]
    fn expected_qv_matches_monte_carlo_mean() {
        let n = 256usize;
        let reps = 500usize;
        let density = DensitySpec::uniform(1.0).unwrap();
        let design = Arc::new(build_design(&density, n).unwrap());
        let cases: Vec<(GaussianModel<f64>, &str)> = vec![
            (GaussianModel::new(Kernel::Wiener), "wiener"),
            (GaussianModel::new(Kernel::Fbm { beta: 0.3 }), "fbm(0.3)"),
            (GaussianModel::new(Kernel::Fbm { beta: 0.8 }), "fbm(0.8)"),
        ];
        for (model, label) in cases {
            for (r, u) in [(1usize, 1usize), (2, 2)] {
                let want = expected_qv(&model, &design, r, u).unwrap();
                let mut vals = Vec::with_capacity(reps);
                for j in 0..reps {
                    let path = match model.kernel() {
                        Kernel::Fbm { beta } => {
                            simulate_fbm_circulant(*beta, n, 1.0, 40_000 + j as u64).unwrap()
                        }
                        _ => simulate_exact(&model, design.clone(), 40_000 + j as u64).unwrap(),
                    };
                    vals.push(quadratic_variation(&path, r, u).unwrap().value);
                }
                let mean = vals.iter().sum::<f64>() / reps as f64;
                let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                    / (reps - 1) as f64)
                    .sqrt();
                let se = sd / (reps as f64).sqrt();
                assert!(
                    (mean - want).abs() <= 5.0 * se,
                    "{label} r={r} u={u}: MC mean {mean} vs exact {want} (se {se})"
                );
            }
        }
    }

    #[test]
    fn qv_value_equals_mean_of_per_k() {
        let path = simulate_fbm_circulant(0.6f64, 200, 1.0, 5).unwrap();
        let t = quadratic_variation_detailed(&path, 2, 2, true).unwrap();
        let per = t.per_k.as_ref().unwrap();
        assert_eq!(per.len(), t.n_r + 1);
        let mean = per.iter().sum::<f64>() / per.len() as f64;
        assert!(t.value >= 0.0);
        assert!((t.value - mean).abs() <= 1e-12 * mean.max(1e-300));
    }

    use crate::gp::simulate_exact;
}
