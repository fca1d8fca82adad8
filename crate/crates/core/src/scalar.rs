//! Floating-point scalar abstraction shared by every kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

use crate::distance::WeightCache;

/// Real scalar the distance kernels are generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Process-wide WDTW weight cache for this scalar type.
    fn weight_cache() -> &'static WeightCache<Self>;

    /// Lossless-enough conversion used for configuration values given as `f64`.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar always converts to f64")
    }
}

impl Scalar for f32 {
    fn weight_cache() -> &'static WeightCache<Self> {
        static CACHE: std::sync::OnceLock<WeightCache<f32>> = std::sync::OnceLock::new();
        CACHE.get_or_init(WeightCache::new)
    }
}

impl Scalar for f64 {
    fn weight_cache() -> &'static WeightCache<Self> {
        static CACHE: std::sync::OnceLock<WeightCache<f64>> = std::sync::OnceLock::new();
        CACHE.get_or_init(WeightCache::new)
    }
}
