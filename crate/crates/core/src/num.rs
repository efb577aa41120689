//! Scalar abstraction shared by the LP engine and the learning code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar with the solver tolerances appropriate for its
/// precision.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Primal feasibility and phase-1 infeasibility threshold.
    const FEASIBILITY_TOL: Self;
    /// Smallest admissible pivot element in the ratio test.
    const PIVOT_TOL: Self;
    /// Reduced-cost threshold for optimality.
    const OPTIMALITY_TOL: Self;
    /// Pivot magnitude below which a basis is treated as singular.
    const SINGULAR_TOL: Self;

    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    /// Positive part `max(self, 0)`.
    fn pos(self) -> Self {
        if self > Self::zero() {
            self
        } else {
            Self::zero()
        }
    }
}

impl Scalar for f64 {
    const FEASIBILITY_TOL: f64 = 1e-7;
    const PIVOT_TOL: f64 = 1e-9;
    const OPTIMALITY_TOL: f64 = 1e-9;
    const SINGULAR_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const FEASIBILITY_TOL: f32 = 1e-4;
    const PIVOT_TOL: f32 = 1e-5;
    const OPTIMALITY_TOL: f32 = 1e-5;
    const SINGULAR_TOL: f32 = 1e-7;
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}
