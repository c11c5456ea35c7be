//! Shared numeric and formatting utilities: C-style `%.17g` float formatting,
//! deterministic seed derivation, FNV-1a hashing, OLS, adaptive Simpson
//! quadrature, and Gauss-Legendre nodes.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

/// Format an `f64` like C's `%.17g`: 17 significant digits, fixed or
/// scientific notation by the usual `%g` exponent rule, trailing zeros
/// stripped. 17 digits guarantee the value round-trips exactly.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf" } else { "inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }

    // Correctly rounded 17 significant digits: "d.dddddddddddddddde[+-]k".
    let s = format!("{:.16e}", x);
    let neg = s.starts_with('-');
    let body = if neg { &s[1..] } else { &s[..] };
    let (mantissa, exp) = body.split_once('e').expect("{:e} output contains 'e'");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 17);

    let sign = if neg { "-" } else { "" };
    let out = if !(-4..17).contains(&exp) {
        let trimmed = digits.trim_end_matches('0');
        let m = if trimmed.len() == 1 {
            trimmed.to_string()
        } else {
            format!("{}.{}", &trimmed[..1], &trimmed[1..])
        };
        let (es, ea) = if exp < 0 { ('-', -exp) } else { ('+', exp) };
        format!("{m}e{es}{ea:02}")
    } else if exp >= 0 {
        let split = (exp + 1) as usize;
        let int_part = &digits[..split];
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let frac = digits.trim_end_matches('0');
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), frac)
    };
    format!("{sign}{out}")
}

/// FNV-1a over raw bytes; used to fingerprint configurations in output headers.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// splitmix64 finalizer; the building block of substream seed derivation.
fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a 256-bit ChaCha seed from a master seed and a tag path
/// (e.g. `[n, replication]`). Stable across platforms and runs, and
/// distinct tag paths give independent streams.
pub fn substream_seed(master: u64, tags: &[u64]) -> [u8; 32] {
    let mut acc = mix(master);
    for &t in tags {
        acc = mix(acc ^ mix(t));
    }
    let mut out = [0u8; 32];
    let mut s = acc;
    for chunk in out.chunks_mut(8) {
        s = mix(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    out
}

/// Seeded generator for the substream identified by `tags` under `master`.
pub fn substream_rng(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(substream_seed(master, tags))
}

/// Unweighted OLS of `ys` on `xs`. Returns (slope, intercept, R²).
pub fn ols<S: Scalar>(xs: &[S], ys: &[S]) -> (S, S, S) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "OLS needs at least two points");
    let n = S::of_usize(xs.len());
    let mean = |v: &[S]| v.iter().fold(S::zero(), |a, &b| a + b) / n;
    let (xm, ym) = (mean(xs), mean(ys));
    let mut sxy = S::zero();
    let mut sxx = S::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - xm) * (y - ym);
        sxx = sxx + (x - xm) * (x - xm);
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let mut ss_res = S::zero();
    let mut ss_tot = S::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let e = y - (slope * x + intercept);
        ss_res = ss_res + e * e;
        ss_tot = ss_tot + (y - ym) * (y - ym);
    }
    let r2 = if ss_tot > S::zero() {
        S::one() - ss_res / ss_tot
    } else {
        S::one()
    };
    (slope, intercept, r2)
}

/// Adaptive Simpson quadrature of `f` on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<S: Scalar, F: Fn(S) -> S>(f: &F, a: S, b: S, tol: S) -> S {
    let two = S::of(2.0);
    let m = (a + b) / two;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson_rule(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson_rule<S: Scalar>(a: S, b: S, fa: S, fm: S, fb: S) -> S {
    (b - a) / S::of(6.0) * (fa + S::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<S: Scalar, F: Fn(S) -> S>(
    f: &F,
    a: S,
    b: S,
    fa: S,
    fm: S,
    fb: S,
    whole: S,
    tol: S,
    depth: u32,
) -> S {
    let two = S::of(2.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= S::of(15.0) * tol {
        left + right + delta / S::of(15.0)
    } else {
        let half_tol = tol / two;
        simpson_rec(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], ascending by node.
/// Computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre<S: Scalar>(n: usize) -> Vec<(S, S)> {
    assert!(n >= 1);
    let mut pairs = vec![(S::zero(), S::zero()); n];
    let nf = S::of_usize(n);
    let eps = S::epsilon() * S::of(16.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root (descending order).
        let mut x = (S::of(std::f64::consts::PI) * (S::of_usize(i) + S::of(0.75))
            / (nf + S::of(0.5)))
        .cos();
        let mut dp = S::one();
        for _ in 0..64 {
            let (p, pm1) = legendre(n, x);
            dp = nf * (x * p - pm1) / (x * x - S::one());
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= eps {
                break;
            }
        }
        let w = S::of(2.0) / ((S::one() - x * x) * dp * dp);
        pairs[n - 1 - i] = (x, w);
        pairs[i] = (-x, w);
    }
    if n % 2 == 1 {
        // Middle node is exactly zero; recompute its weight cleanly.
        let (_, pm1) = legendre(n, S::zero());
        let dp = nf * (-pm1) / (-S::one());
        pairs[n / 2] = (S::zero(), S::of(2.0) / (dp * dp));
    }
    pairs
}

/// Evaluate (P_n(x), P_{n-1}(x)) by the three-term recurrence.
fn legendre<S: Scalar>(n: usize, x: S) -> (S, S) {
    let mut p0 = S::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, S::zero());
    }
    for k in 2..=n {
        let kf = S::of_usize(k);
        let p2 = ((S::of(2.0) * kf - S::one()) * x * p1 - (kf - S::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}
