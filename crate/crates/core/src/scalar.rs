//! Floating-point scalar abstraction for amplitudes and entropies.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Real scalar usable for amplitudes: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Tolerance for norm, orthogonality and probability-sum checks.
    const TOLERANCE: Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 is representable")
    }
}

impl Real for f32 {
    const TOLERANCE: Self = 1e-5;
}

impl Real for f64 {
    const TOLERANCE: Self = 1e-12;
}
