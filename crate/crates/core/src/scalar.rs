use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating-point type the numeric layer (generators, solvers, product
/// forms) is written against. Implemented for `f32` and `f64`.
pub trait Scalar: Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static {
    fn of(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("finite f64 converts to any float type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("floats convert to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
