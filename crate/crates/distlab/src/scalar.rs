//! Floating-point scalar abstraction for the linear-algebra boundary.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use std::fmt::Debug;

/// Real scalar types the dense linear algebra can run on.
///
/// All exact bookkeeping (field tables, character exponents, rational angles)
/// is integer/rational; floats only appear when ranks and nullspaces are
/// computed. `rank_tol` is the pivot threshold used on matrices whose entries
/// are sums of roots of unity with small rational weights.
pub trait Scalar: Float + FromPrimitive + Debug + Send + Sync + 'static {
    fn rank_tol() -> Self;

    fn from_f64c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Scalar for f64 {
    fn rank_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn rank_tol() -> Self {
        1e-4
    }
}

/// Complex number over a [`Scalar`].
pub type C<F> = Complex<F>;
