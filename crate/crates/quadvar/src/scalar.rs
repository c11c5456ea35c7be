//! Scalar abstraction: the numeric core is generic over the floating type.
//!
//! `Scalar` bundles everything the library needs from a float: `num_traits::Float`
//! arithmetic, FFT support (for circulant embedding), display formatting, and a
//! way to draw standard normals. It is implemented for `f32` and `f64`; `f64` is
//! the default used by the CLI and the type aliases at the crate root.

use std::fmt::{Display, LowerExp};

use num_traits::Float;
use rand::Rng;
use rustfft::FftNum;

pub trait Scalar: Float + FftNum + Display + LowerExp {
    /// Draw one standard normal deviate from `rng`.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from f64; exact whenever the literal is representable.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("finite f64 converts to Scalar")
    }

    /// Conversion from a (small) index; exact below 2^53.
    #[inline]
    fn of_usize(k: usize) -> Self {
        Self::of(k as f64)
    }

    /// Widening conversion to f64 for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("Scalar converts to f64")
    }
}

macro_rules! impl_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.sample(rand_distr::StandardNormal)
            }
        }
    )*};
}

impl_scalar!(f32, f64);
