use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the geometry is computed over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; `f32` instantiations need correspondingly looser settings.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Largest absolute entry-wise difference of two equally sized slices.
pub fn max_abs_diff<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |m, (x, y)| m.max((*x - *y).abs()))
}

pub(crate) fn euclid_norm<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + *x * *x).sqrt()
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + *x * *y)
}
