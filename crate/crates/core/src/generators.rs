//! Adversarial inputs from the lower-bound constructions, plus sorted and
//! uniformly random baselines.
//!
//! Every fractional length is rounded and clamped to a valid range; see the
//! individual functions for which rounding each one uses.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::sequence::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorFamily {
    GeneralLower,
    MedianLowerSmallD,
    MedianLowerD2,
    ScanLower,
    M3Lower,
    PpLower,
    Sorted,
    UniformRandom,
}

impl GeneratorFamily {
    pub const ALL: [GeneratorFamily; 8] = [
        GeneratorFamily::GeneralLower,
        GeneratorFamily::MedianLowerSmallD,
        GeneratorFamily::MedianLowerD2,
        GeneratorFamily::ScanLower,
        GeneratorFamily::M3Lower,
        GeneratorFamily::PpLower,
        GeneratorFamily::Sorted,
        GeneratorFamily::UniformRandom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorFamily::GeneralLower => "general-lower",
            GeneratorFamily::MedianLowerSmallD => "median-lower-small-d",
            GeneratorFamily::MedianLowerD2 => "median-lower-d2",
            GeneratorFamily::ScanLower => "scan-lower",
            GeneratorFamily::M3Lower => "m3-lower",
            GeneratorFamily::PpLower => "pp-lower",
            GeneratorFamily::Sorted => "sorted",
            GeneratorFamily::UniformRandom => "uniform-random",
        }
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorFamily::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::param("experiment", s, "unknown generator family"))
    }
}

/// A fully parameterised generator invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    pub n: usize,
    /// Noise magnitude, used by `median-lower-small-d`.
    pub d: Option<f64>,
    /// Marking probability, used by `pp-lower`.
    pub p: Option<f64>,
}

impl GeneratorSpec {
    pub fn new(family: GeneratorFamily, n: usize) -> Self {
        GeneratorSpec {
            family,
            n,
            d: None,
            p: None,
        }
    }

    /// Only `uniform-random` draws from `rng`.
    pub fn generate<T: Field, R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Sequence<T>> {
        let n = self.n;
        match self.family {
            GeneratorFamily::GeneralLower => gen_general_lower(n),
            GeneratorFamily::MedianLowerSmallD => {
                let d = self.d.ok_or(Error::Config(
                    "median-lower-small-d needs a noise magnitude d".into(),
                ))?;
                gen_median_lower_small_d(n, d)
            }
            GeneratorFamily::MedianLowerD2 => gen_median_lower_d2(n),
            GeneratorFamily::ScanLower => gen_scan_lower(n),
            GeneratorFamily::M3Lower => gen_m3_lower(n),
            GeneratorFamily::PpLower => {
                let p = self
                    .p
                    .ok_or(Error::Config("pp-lower needs a marking probability p".into()))?;
                gen_pp_lower(n, p)
            }
            GeneratorFamily::Sorted => gen_sorted(n),
            GeneratorFamily::UniformRandom => gen_uniform_random(n, rng),
        }
    }
}

fn need(cond: bool, name: &'static str, value: impl ToString, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::param(name, value, reason))
    }
}

fn ramp_then_ones<T: Field>(n: usize, a: usize) -> Sequence<T> {
    let n_i = n as i64;
    let values = (1..=n)
        .map(|i| {
            if i <= a {
                T::frac(i as i64, n_i)
            } else {
                T::one()
            }
        })
        .collect();
    Sequence::from_trusted(values)
}

/// `(1/n, 2/n, ..., h/n, 1, ..., 1)` with `h = ceil(n/2)`.
pub fn gen_general_lower<T: Field>(n: usize) -> Result<Sequence<T>> {
    need(n >= 2, "n", n, "general-lower needs n >= 2")?;
    Ok(ramp_then_ones(n, n.div_ceil(2)))
}

/// `a` ascending small elements `i/n` followed by `b = ceil(n sqrt(d/2))` ones.
///
/// Accepts `1/2 <= d < 2`.
pub fn gen_median_lower_small_d<T: Field>(n: usize, d: f64) -> Result<Sequence<T>> {
    need(n >= 1, "n", n, "need n >= 1")?;
    need((0.5..2.0).contains(&d), "d", d, "median-lower-small-d needs 1/2 <= d < 2")?;
    let b = ((n as f64) * (d / 2.0).sqrt()).ceil() as usize;
    let b = b.clamp(1, n);
    Ok(ramp_then_ones(n, n - b))
}

/// Smallest integer `r` with `r^4 >= n`.
fn ceil_fourth_root(n: usize) -> usize {
    let mut r = (n as f64).powf(0.25).floor() as usize;
    while r.pow(4) < n {
        r += 1;
    }
    while r > 0 && (r - 1).pow(4) >= n {
        r -= 1;
    }
    r
}

/// `min(ceil(n^{1/4}), n-1)` zeros followed by ones.
pub fn gen_median_lower_d2<T: Field>(n: usize) -> Result<Sequence<T>> {
    need(n >= 2, "n", n, "median-lower-d2 needs n >= 2")?;
    let zeros = ceil_fourth_root(n).min(n - 1);
    let values = (0..n)
        .map(|i| if i < zeros { T::zero() } else { T::one() })
        .collect();
    Ok(Sequence::from_trusted(values))
}

/// Palindromic tent `(1/n, ..., (n/2-1)/n, 1/2, 1/2, (n/2-1)/n, ..., 1/n)`.
pub fn gen_scan_lower<T: Field>(n: usize) -> Result<Sequence<T>> {
    need(n >= 4 && n.is_multiple_of(2), "n", n, "scan-lower needs an even n >= 4")?;
    let h = n / 2;
    let n_i = n as i64;
    let values = (0..n)
        .map(|i| {
            let j = if i < h { i + 1 } else { n - i };
            T::frac(j as i64, n_i)
        })
        .collect();
    Ok(Sequence::from_trusted(values))
}

/// Outer thirds hold `min(i, n-1-i)/n` at 0-based index `i`, the middle
/// third holds ones. The third is `round(n/3)`, applied symmetrically.
pub fn gen_m3_lower<T: Field>(n: usize) -> Result<Sequence<T>> {
    need(n >= 3, "n", n, "m3-lower needs n >= 3")?;
    let third = ((n as f64) / 3.0).round() as usize;
    let n_i = n as i64;
    let values = (0..n)
        .map(|i| {
            if i < third || i >= n - third {
                T::frac(i.min(n - 1 - i) as i64, n_i)
            } else {
                T::one()
            }
        })
        .collect();
    Ok(Sequence::from_trusted(values))
}

/// `Q = clamp(round((m/p)^{1/4}), 1, m)` for `n = 2m+1`.
pub fn pp_lower_prefix(n: usize, p: f64) -> usize {
    let m = (n - 1) / 2;
    let q = ((m as f64) / p).powf(0.25).round() as usize;
    q.clamp(1, m.max(1))
}

/// `(-Q, ..., -1, -m, ..., -Q-1, 1, ..., m, 0)` for odd `n = 2m+1`.
pub fn gen_pp_lower<T: Field>(n: usize, p: f64) -> Result<Sequence<T>> {
    need(n >= 3 && n % 2 == 1, "n", n, "pp-lower needs an odd n >= 3")?;
    need(p > 0.0 && p <= 1.0, "p", p, "pp-lower needs 0 < p <= 1")?;
    let m = ((n - 1) / 2) as i64;
    let q = pp_lower_prefix(n, p) as i64;
    let values = (-q..=-1)
        .chain(-m..=-q - 1)
        .chain(1..=m)
        .chain(std::iter::once(0))
        .map(T::from_int)
        .collect();
    Ok(Sequence::from_trusted(values))
}

/// `(1/n, 2/n, ..., 1)`.
pub fn gen_sorted<T: Field>(n: usize) -> Result<Sequence<T>> {
    need(n >= 1, "n", n, "need n >= 1")?;
    Ok(ramp_then_ones(n, n))
}

/// `n` independent uniform draws from `[0, 1)`.
pub fn gen_uniform_random<T: Field, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Sequence<T>> {
    need(n >= 1, "n", n, "need n >= 1")?;
    let values = (0..n)
        .map(|_| T::from_f64(rng.random::<f64>()).expect("uniform draw is representable"))
        .collect();
    Ok(Sequence::from_trusted(values))
}
