//! Scalar abstraction shared by the closed-form models.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `10·log10(x)`.
pub fn db<T: Real>(x: T) -> T {
    T::lit(10.0) * x.log10()
}

/// Inverse of [`db`].
pub fn from_db<T: Real>(x: T) -> T {
    T::lit(10.0).powf(x / T::lit(10.0))
}
