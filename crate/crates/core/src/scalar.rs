//! Scalar bounds shared by every algorithm.
//!
//! All selection and sorting logic is order-based, so the algorithms only
//! need `PartialOrd`. Generators additionally need exact construction of
//! fractions `i/n` ([`Field`]), and the additive noise model needs a float
//! ([`Real`]).

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num};

/// Anything the comparison-based algorithms can consume.
pub trait Scalar: Copy + PartialOrd + Debug + Send + Sync + 'static {}

impl<T: Copy + PartialOrd + Debug + Send + Sync + 'static> Scalar for T {}

/// Scalars that can represent the fractions `i/n` emitted by the generators.
/// Covers `f32`, `f64` and `Ratio<i64>`.
pub trait Field: Scalar + Num + FromPrimitive {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer is representable")
    }

    fn frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl<T: Scalar + Num + FromPrimitive> Field for T {}

/// Floating point scalars accepted by the additive noise model.
pub trait Real: Field + Float {
    fn from_f64_lossy(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("finite float converts")
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as num_traits::NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl<T: Field + Float> Real for T {}

/// Lexicographic (value, position) order. Callers guarantee the values are
/// comparable, so `None` from `partial_cmp` never occurs in practice and is
/// folded into the position tie-break.
#[inline]
pub(crate) fn key_cmp<T: PartialOrd>(a: &T, pa: usize, b: &T, pb: usize) -> Ordering {
    match a.partial_cmp(b) {
        Some(Ordering::Less) => Ordering::Less,
        Some(Ordering::Greater) => Ordering::Greater,
        _ => pa.cmp(&pb),
    }
}
