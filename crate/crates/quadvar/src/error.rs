//! Crate-wide error type.
//!
//! Numeric payloads are carried as `f64` regardless of the scalar the caller
//! instantiated, so the error type stays non-generic.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("quantile solver failed for point k={k}: {detail}")]
    QuantileSolver { k: usize, detail: String },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("kernel returned a non-finite value at (s={s}, t={t})")]
    KernelNonFinite { s: f64, t: f64 },

    #[error("Gram matrix is numerically degenerate on this design (factorization failed at maximum jitter)")]
    DegenerateGram,

    #[error("circulant embedding failed: eigenvalues stay negative up to size {max_size}")]
    EmbeddingFailed { max_size: usize },

    #[error("design has n={n} but exact simulation is guarded at n+1 <= {max}")]
    SimulationCostGuard { n: usize, max: usize },

    #[error("index window k={k} with order r={r}, dilation u={u} exceeds n={n} (need k + u*r <= n)")]
    WindowOutOfRange { k: usize, r: usize, u: usize, n: usize },

    #[error("n={n} too small for order r={r} at dilation u={u}; max admissible order is {max_r}")]
    OrderTooLarge { n: usize, r: usize, u: usize, max_r: usize },

    #[error("quadratic variation at order r={order} is not finite")]
    NonFiniteVariation { order: usize },

    #[error("n={n} too small for the order scan (need n > m_n + 1 with m_n = {m_n})")]
    TooFewPoints { n: usize, m_n: usize },

    #[error("order not found below m_n={m_n}: no quadratic-variation crossing; raise m_n (trace: {})",
            format_trace(.trace))]
    OrderNotFound {
        m_n: usize,
        /// (order, quadratic variation, threshold) for every scanned order.
        trace: Vec<(usize, f64, f64)>,
    },

    #[error("quadratic variation is zero at order r={order}, dilation u={dilation}: estimate undefined on a deterministic path")]
    ZeroVariation { order: usize, dilation: usize },

    #[error("operation requires an equidistant design")]
    NonEquidistant,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("evaluation point t={t} lies outside block {block}")]
    OutsideBlock { block: usize, t: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

fn format_trace(trace: &[(usize, f64, f64)]) -> String {
    trace
        .iter()
        .map(|(r, qv, thr)| format!("r={r}: qv={qv:.6e} vs {thr:.6e}"))
        .collect::<Vec<_>>()
        .join(", ")
}
