//! Floating-point abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar usable by the solvers: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Maps a tolerance written for `f64` onto this type's precision.
    ///
    /// A tolerance `base = eps64^a` becomes `eps^a`, so `f64` keeps `base`
    /// exactly and `f32` gets a proportionally looser bound.
    fn scaled_tol(base: f64) -> Self {
        let eps64 = f64::EPSILON;
        let eps = Self::epsilon().to_f64_lossy();
        if eps <= eps64 {
            return Self::lit(base);
        }
        let a = base.ln() / eps64.ln();
        Self::lit(eps.powf(a))
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}
