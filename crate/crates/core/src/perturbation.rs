//! Additive uniform noise, partial permutations and the seeded RNG streams
//! every randomized component draws from.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::sequence::Sequence;

/// A deterministic random stream keyed by `(master_seed, stream_index)`.
///
/// Backed by ChaCha8 with the master seed as key and the index as the
/// cipher's stream id, so distinct indices never overlap.
#[derive(Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform draw from `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl fmt::Debug for RngStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RngStream")
            .field("master_seed", &self.master_seed)
            .field("stream_index", &self.stream_index)
            .finish_non_exhaustive()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

pub fn derive_stream(master_seed: u64, stream_index: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_index);
    RngStream {
        master_seed,
        stream_index,
        rng,
    }
}

/// Noise magnitude as a function of the input length: `d(n) = c * n^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DLaw {
    pub c: f64,
    pub alpha: f64,
}

impl DLaw {
    pub fn constant(d: f64) -> Self {
        DLaw { c: d, alpha: 0.0 }
    }

    pub fn eval(&self, n: usize) -> f64 {
        if self.alpha == 0.0 {
            self.c
        } else {
            self.c * (n as f64).powf(self.alpha)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PerturbationModel {
    /// No perturbation; the adversarial input is used as is.
    None,
    /// Add independent uniform noise from `[0, d(n)]` to every element.
    Additive { d: DLaw },
    /// Mark each position with probability `p`, then permute the marked
    /// values uniformly at random.
    Partial { p: f64 },
}

impl PerturbationModel {
    pub fn name(&self) -> &'static str {
        match self {
            PerturbationModel::None => "none",
            PerturbationModel::Additive { .. } => "additive",
            PerturbationModel::Partial { .. } => "partial",
        }
    }

    /// The model parameter at length `n`: `d(n)`, `p`, or 0 for no model.
    pub fn param(&self, n: usize) -> f64 {
        match self {
            PerturbationModel::None => 0.0,
            PerturbationModel::Additive { d } => d.eval(n),
            PerturbationModel::Partial { p } => *p,
        }
    }

    /// Check the model is usable at every length in `grid`.
    pub fn validate(&self, grid: &[usize]) -> Result<()> {
        match *self {
            PerturbationModel::None => Ok(()),
            PerturbationModel::Additive { d } => {
                for &n in grid {
                    let dn = d.eval(n);
                    if !(dn > 0.0 && dn.is_finite()) {
                        return Err(Error::param("d", dn, "noise magnitude must be positive"));
                    }
                }
                Ok(())
            }
            PerturbationModel::Partial { p } => check_probability(p),
        }
    }

    pub fn apply<T: Real, R: Rng + ?Sized>(
        &self,
        seq: &Sequence<T>,
        rng: &mut R,
    ) -> Result<Sequence<T>> {
        match *self {
            PerturbationModel::None => Ok(seq.clone()),
            PerturbationModel::Additive { d } => perturb_additive(seq, d.eval(seq.len()), rng),
            PerturbationModel::Partial { p } => perturb_partial(seq, p, rng),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param("p", p, "probability must lie in [0, 1]"))
    }
}

/// `n` independent noise values uniform on `[0, d]`.
pub fn additive_noise<R: Rng + ?Sized>(n: usize, d: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::param("d", d, "noise magnitude must be positive"));
    }
    Ok((0..n).map(|_| rng.random::<f64>() * d).collect())
}

/// Add the given noise vector element-wise.
pub fn apply_noise<T: Real>(seq: &Sequence<T>, noise: &[f64]) -> Result<Sequence<T>> {
    if noise.len() != seq.len() {
        return Err(Error::param("noise", noise.len(), "noise length must match the sequence"));
    }
    let out = seq
        .values()
        .iter()
        .zip(noise)
        .map(|(&v, &nu)| v + T::from_f64_lossy(nu))
        .collect();
    Sequence::new(out)
}

pub fn perturb_additive<T: Real, R: Rng + ?Sized>(
    seq: &Sequence<T>,
    d: f64,
    rng: &mut R,
) -> Result<Sequence<T>> {
    let noise = additive_noise(seq.len(), d, rng)?;
    let (lo, hi) = (T::zero(), T::one());
    if seq.values().iter().any(|&v| v < lo || v > hi) {
        log::warn!("additive noise applied to values outside [0, 1]");
    }
    apply_noise(seq, &noise)
}

/// Independently mark each 1-based position with probability `p`.
pub fn mark_positions<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<usize>> {
    check_probability(p)?;
    Ok((1..=n).filter(|_| rng.random::<f64>() < p).collect())
}

/// Rearrange the values at `marked` (1-based, increasing) so that the
/// `j`-th marked slot receives the value from marked slot `perm[j]`.
pub fn apply_marked_permutation<T: Scalar>(
    seq: &Sequence<T>,
    marked: &[usize],
    perm: &[usize],
) -> Result<Sequence<T>> {
    if perm.len() != marked.len() {
        return Err(Error::param("perm", perm.len(), "must have one entry per marked position"));
    }
    let mut seen = vec![false; perm.len()];
    for &j in perm {
        if j >= perm.len() || std::mem::replace(&mut seen[j], true) {
            return Err(Error::param("perm", j, "not a permutation of the marked slots"));
        }
    }
    let src = seq.values();
    if let Some(&bad) = marked.iter().find(|&&m| m == 0 || m > src.len()) {
        return Err(Error::PositionOutOfRange {
            position: bad,
            len: src.len(),
        });
    }
    let mut out = src.to_vec();
    for (slot, &from) in marked.iter().zip(perm) {
        out[slot - 1] = src[marked[from] - 1];
    }
    Ok(Sequence::from_trusted(out))
}

pub fn perturb_partial<T: Scalar, R: Rng + ?Sized>(
    seq: &Sequence<T>,
    p: f64,
    rng: &mut R,
) -> Result<Sequence<T>> {
    let marked = mark_positions(seq.len(), p, rng)?;
    let mut perm: Vec<usize> = (0..marked.len()).collect();
    perm.shuffle(rng);
    apply_marked_permutation(seq, &marked, &perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Always yields zero bits, so uniform draws are exactly 0.
    struct Zeros;

    impl RngCore for Zeros {
        fn next_u32(&mut self) -> u32 {
            0
        }
        fn next_u64(&mut self) -> u64 {
            0
        }
        fn fill_bytes(&mut self, dst: &mut [u8]) {
            dst.fill(0)
        }
    }

    fn seq(v: &[f64]) -> Sequence<f64> {
        Sequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_noise_is_identity() {
        let s = seq(&[0.1, 0.7, 0.3]);
        assert_eq!(perturb_additive(&s, 2.0, &mut Zeros).unwrap(), s);
    }

    #[test]
    fn additive_stays_in_range() {
        let mut rng = derive_stream(7, 0);
        for _ in 0..1000 {
            let out = perturb_additive(&seq(&[0.5]), 1.0, &mut rng).unwrap();
            let v = out.values()[0];
            assert!((0.5..=1.5).contains(&v));
        }
    }

    #[test]
    fn additive_is_deterministic_per_stream() {
        let s = seq(&[0.0, 0.25, 0.5, 1.0]);
        let a = perturb_additive(&s, 0.3, &mut derive_stream(42, 0)).unwrap();
        let b = perturb_additive(&s, 0.3, &mut derive_stream(42, 0)).unwrap();
        let bits = |x: &Sequence<f64>| x.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn additive_rejects_nonpositive_d() {
        let s = seq(&[0.5]);
        assert!(perturb_additive(&s, 0.0, &mut derive_stream(1, 1)).is_err());
        assert!(perturb_additive(&s, -1.0, &mut derive_stream(1, 1)).is_err());
    }

    #[test]
    fn partial_extremes() {
        let s = seq(&[4.0, 3.0, 2.0, 1.0, 0.0]);
        let mut rng = derive_stream(3, 9);
        assert_eq!(perturb_partial(&s, 0.0, &mut rng).unwrap(), s);
        let out = perturb_partial(&s, 1.0, &mut rng).unwrap();
        let mut v = out.into_values();
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn partial_rejects_bad_probability() {
        let s = seq(&[1.0]);
        assert!(perturb_partial(&s, -0.1, &mut derive_stream(0, 0)).is_err());
        assert!(perturb_partial(&s, 1.1, &mut derive_stream(0, 0)).is_err());
    }

    #[test]
    fn injected_marks_and_swap() {
        let s = seq(&[1.0, 2.0, 3.0, 4.0]);
        let out = apply_marked_permutation(&s, &[2, 4], &[1, 0]).unwrap();
        assert_eq!(out.values(), &[1.0, 4.0, 3.0, 2.0]);
        assert!(apply_marked_permutation(&s, &[2, 4], &[0, 0]).is_err());
        assert!(apply_marked_permutation(&s, &[2, 5], &[0, 1]).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_separated() {
        let mut a = derive_stream(11, 0);
        let mut b = derive_stream(11, 0);
        let xs: Vec<u64> = (0..1000).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..1000).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(derive_stream(11, 0).next_u64(), derive_stream(11, 1).next_u64());
    }

    #[test]
    fn d_law_evaluates() {
        assert_eq!(DLaw::constant(2.0).eval(1 << 20), 2.0);
        let law = DLaw { c: 3.0, alpha: 0.5 };
        assert!((law.eval(16) - 12.0).abs() < 1e-12);
        let model = PerturbationModel::Additive { d: DLaw { c: 1.0, alpha: -1.0 } };
        assert!(model.validate(&[2, 4, 8]).is_ok());
        let model = PerturbationModel::Additive { d: DLaw::constant(0.0) };
        assert!(model.validate(&[2]).is_err());
    }
}
