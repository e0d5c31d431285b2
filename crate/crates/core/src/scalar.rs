//! Floating-point scalar abstraction.
//!
//! All physics in this crate is written against [`Scalar`] so the same code
//! runs in `f32` or `f64`; the crate root exports `f64` aliases for the
//! common types.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type the solvers and integrators are generic over.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for lossy conversion of an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Shorthand for converting a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
