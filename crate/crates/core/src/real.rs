//! Scalar abstraction: everything numeric in this crate is generic over
//! [`Real`], implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};
use std::sync::OnceLock;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::Rng;

use crate::scoring::EsKernelCache;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Draw a uniform variate on the open interval (0, 1).
    ///
    /// Endpoints are excluded by construction so inverse transforms never
    /// produce infinities.
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Per-type cache of energy-score kernels, keyed by (gamma, beta).
    fn es_kernel_cache() -> &'static EsKernelCache<Self>;

    /// Convert a compile-time `f64` constant. Panics only if the target type
    /// cannot represent any finite `f64`, which cannot happen for f32/f64.
    #[inline]
    fn cst(v: f64) -> Self {
        Self::from_f64(v).expect("constant conversion")
    }

    /// Lossless-enough conversion of a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count conversion")
    }

    /// Bit pattern of the `f64` image of this value, for cache keys.
    #[inline]
    fn key_bits(self) -> u64 {
        self.to_f64().unwrap_or(f64::NAN).to_bits()
    }
}

static ES_CACHE_F64: OnceLock<EsKernelCache<f64>> = OnceLock::new();
static ES_CACHE_F32: OnceLock<EsKernelCache<f32>> = OnceLock::new();

impl Real for f64 {
    #[inline]
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(rand::distr::Open01)
    }

    fn es_kernel_cache() -> &'static EsKernelCache<Self> {
        ES_CACHE_F64.get_or_init(EsKernelCache::new)
    }
}

impl Real for f32 {
    #[inline]
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(rand::distr::Open01)
    }

    fn es_kernel_cache() -> &'static EsKernelCache<Self> {
        ES_CACHE_F32.get_or_init(EsKernelCache::new)
    }
}
