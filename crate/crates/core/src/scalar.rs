use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the clustering math runs on.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossless widening used by the writers.
    fn to_f64_lossless(self) -> f64 {
        self.to_f64().expect("float widens to f64")
    }

    /// Conversion from an `f64` literal or parameter.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 converts to scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
