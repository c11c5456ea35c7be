//! JSON-expressible model specifications. The numeric core is generic and
//! closure-based; this layer is the concrete `f64` schema used by config
//! files and the command line, and it builds [`GaussianModel`] values.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{GaussianModel, Kernel, TimeFn};

/// Kernel selector with numeric parameters, internally tagged as `kernel`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum KernelSpec {
    Wiener,
    Fbm { beta: f64 },
    IntegratedFbm { beta: f64 },
    IntegratedWiener,
    Ou { theta: f64, sigma: f64 },
    Matern { nu: f64, alpha: f64, phi: f64 },
}

/// A scalar function of time in closed, serializable form.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum FuncSpec {
    /// f(t) = value.
    Constant { value: f64 },
    /// f(t) = t^exponent + 1 (positive on [0, ∞) for any exponent > 0).
    PowerPlusOne { exponent: f64 },
    /// f(t) = Σ coeffs[i]·t^i.
    Polynomial { coeffs: Vec<f64> },
}

impl FuncSpec {
    /// Materialize as a closure.
    pub fn to_fn(&self) -> TimeFn<f64> {
        match self {
            FuncSpec::Constant { value } => {
                let v = *value;
                Arc::new(move |_| v)
            }
            FuncSpec::PowerPlusOne { exponent } => {
                let e = *exponent;
                Arc::new(move |t: f64| t.powf(e) + 1.0)
            }
            FuncSpec::Polynomial { coeffs } => {
                let c = coeffs.clone();
                Arc::new(move |t: f64| c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci))
            }
        }
    }
}

/// A full model document: kernel plus optional multiplicative scale a(t)
/// and additive trend m(t), i.e. X(t) = a(t)·Y(t) + m(t).
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub kernel: KernelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<FuncSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<FuncSpec>,
}

impl ModelSpec {
    pub fn new(kernel: KernelSpec) -> Self {
        Self {
            kernel,
            scale: None,
            trend: None,
        }
    }

    /// Validate parameters and build the model.
    pub fn build(&self) -> Result<GaussianModel<f64>> {
        let kernel = match self.kernel {
            KernelSpec::Wiener => Kernel::Wiener,
            KernelSpec::Fbm { beta } => {
                check_unit_interval("beta", beta)?;
                Kernel::Fbm { beta }
            }
            KernelSpec::IntegratedFbm { beta } => {
                check_unit_interval("beta", beta)?;
                Kernel::IntegratedFbm { beta }
            }
            KernelSpec::IntegratedWiener => Kernel::IntegratedWiener,
            KernelSpec::Ou { theta, sigma } => {
                check_positive("theta", theta)?;
                check_positive("sigma", sigma)?;
                Kernel::Ou { theta, sigma }
            }
            KernelSpec::Matern { nu, alpha, phi } => {
                check_positive("nu", nu)?;
                check_positive("alpha", alpha)?;
                check_positive("phi", phi)?;
                Kernel::Matern { nu, alpha, phi }
            }
        };
        let mut model = GaussianModel::new(kernel);
        if self.scale.is_some() || self.trend.is_some() {
            let a = self
                .scale
                .as_ref()
                .map_or_else(|| FuncSpec::Constant { value: 1.0 }.to_fn(), FuncSpec::to_fn);
            let m = self
                .trend
                .as_ref()
                .map_or_else(|| FuncSpec::Constant { value: 0.0 }.to_fn(), FuncSpec::to_fn);
            model = model.with_transform(a, m);
        }
        Ok(model)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} = {v} must be positive")))
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{name} = {v} must lie in (0, 1)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let spec = ModelSpec {
            kernel: KernelSpec::Fbm { beta: 0.5 },
            scale: None,
            trend: Some(FuncSpec::Polynomial {
                coeffs: vec![1.0, 2.0, 1.0],
            }),
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kernel\":\"fbm\""));
        let back: ModelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn parses_flat_kernel_documents() {
        let spec: ModelSpec =
            serde_json::from_str(r#"{"kernel":"matern","nu":1.75,"alpha":2.0,"phi":1.0}"#)
                .unwrap();
        let model = spec.build().unwrap();
        let truth = model.truth().unwrap();
        assert_eq!(truth.r0, 1);
        assert!((truth.beta0 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn polynomial_trend_evaluates_like_horner() {
        let f = FuncSpec::Polynomial {
            coeffs: vec![1.0, 2.0, 1.0],
        }
        .to_fn();
        for t in [0.0f64, 0.3, 1.0, 2.0] {
            assert!((f(t) - (1.0 + t) * (1.0 + t)).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let bad: ModelSpec = serde_json::from_str(r#"{"kernel":"fbm","beta":1.5}"#).unwrap();
        assert!(bad.build().is_err());
        let bad: ModelSpec =
            serde_json::from_str(r#"{"kernel":"ou","theta":-1.0,"sigma":1.0}"#).unwrap();
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<ModelSpec>(r#"{"kernel":"nope"}"#).is_err());
    }

    #[test]
    fn transform_spec_builds_wrapped_model() {
        let spec: ModelSpec = serde_json::from_str(
            r#"{"kernel":"wiener","scale":{"form":"power_plus_one","exponent":0.7}}"#,
        )
        .unwrap();
        let model = spec.build().unwrap();
        let truth = model.truth().unwrap();
        let t = 0.5f64;
        let want = (t.powf(0.7) + 1.0) * (t.powf(0.7) + 1.0);
        assert!(((truth.d0)(t) - want).abs() < 1e-12);
    }
}
