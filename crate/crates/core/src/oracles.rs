//! Brute-force references, kept independent of the instrumented algorithms
//! they check wherever possible.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algorithms::{hoare_find, hoare_find_observed, quicksort_count, scan_maxima};
use crate::error::{Error, Result};
use crate::pivot::PivotRule;
use crate::scalar::{key_cmp, Scalar};
use crate::sequence::Sequence;

/// Largest `n` accepted by [`exhaustive_average_comparisons`].
pub const EXHAUSTIVE_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    HoareFind,
    Quicksort,
    ScanMaxima,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::HoareFind => "hoare-find",
            Algorithm::Quicksort => "quicksort",
            Algorithm::ScanMaxima => "scan-maxima",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hoare-find" => Ok(Algorithm::HoareFind),
            "quicksort" => Ok(Algorithm::Quicksort),
            "scan-maxima" => Ok(Algorithm::ScanMaxima),
            _ => Err(Error::param(
                "algorithm",
                s,
                "expected hoare-find, quicksort or scan-maxima",
            )),
        }
    }
}

/// The `k`-th smallest element by full sort, with its 1-based position.
pub fn kth_smallest_oracle<T: Scalar>(seq: &Sequence<T>, k: usize) -> Result<(T, usize)> {
    let n = seq.len();
    if k == 0 || k > n {
        return Err(Error::RankOutOfRange { k, n });
    }
    let pos = seq.sorted_positions()[k - 1];
    Ok((seq.values()[pos - 1], pos))
}

/// Worst rank for Hoare's find: `(k*, r_search(seq, k*))`, preferring the
/// largest maximizing rank.
pub fn rsearch_max<T: Scalar>(seq: &Sequence<T>, rule: PivotRule) -> Result<(usize, u64)> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut best = (0, 0);
    for k in 1..=seq.len() {
        let c = hoare_find(seq, k, rule)?.comparisons;
        if c >= best.1 {
            best = (k, c);
        }
    }
    Ok(best)
}

/// Count of left-to-right maxima: elements greater than everything before
/// them, by a direct running-maximum scan. Equal values count as greater
/// when they come later, matching the (value, position) order.
pub fn ltr_maxima_count<T: Scalar>(seq: &Sequence<T>) -> usize {
    let mut best: Option<T> = None;
    let mut count = 0;
    for &v in seq.values() {
        // Later position wins ties, so only a strictly smaller value fails.
        if best.is_none_or(|b| v >= b) {
            best = Some(v);
            count += 1;
        }
    }
    count
}

/// Count of right-to-left maxima: elements greater than everything after
/// them in (value, position) order.
pub fn rtl_maxima_count<T: Scalar>(seq: &Sequence<T>) -> usize {
    let mut best: Option<T> = None;
    let mut count = 0;
    for &v in seq.values().iter().rev() {
        // An earlier equal value loses the tie to the later one seen already.
        if best.is_none_or(|b| v > b) {
            best = Some(v);
            count += 1;
        }
    }
    count
}

/// Scan maxima by literally filtering survivors after every pivot.
/// Quadratic; the reference for the Fenwick-based implementation.
pub fn scan_maxima_naive<T: Scalar>(seq: &Sequence<T>, rule: PivotRule) -> usize {
    let mut cur: Vec<(T, usize)> = seq
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i + 1))
        .collect();
    let mut count = 0;
    while !cur.is_empty() {
        let vals: Vec<T> = cur.iter().map(|x| x.0).collect();
        // Positions inside `cur` are relative; map back for the tie-break.
        let local = Sequence::from_trusted(vals);
        let ties_by_origin = |a: usize, b: usize| {
            key_cmp(&cur[a - 1].0, cur[a - 1].1, &cur[b - 1].0, cur[b - 1].1)
        };
        let pick = naive_pick(&local, rule, ties_by_origin);
        let (pv, pp) = cur[pick - 1];
        count += 1;
        cur.retain(|&(v, p)| key_cmp(&v, p, &pv, pp).is_gt());
    }
    count
}

fn naive_pick<T: Scalar>(
    seq: &Sequence<T>,
    rule: PivotRule,
    cmp: impl Fn(usize, usize) -> std::cmp::Ordering,
) -> usize {
    let n = seq.len();
    match rule {
        PivotRule::Classic => 1,
        PivotRule::MaxOfTwo => [1, n].into_iter().max_by(|&a, &b| cmp(a, b)).unwrap(),
        PivotRule::MinOfTwo => [1, n].into_iter().min_by(|&a, &b| cmp(a, b)).unwrap(),
        PivotRule::MedianOfThree => {
            let mut three = [1, n.div_ceil(2), n];
            three.sort_by(|&a, &b| cmp(a, b));
            three[1]
        }
    }
}

/// Exact mean over all `n!` permutations of `(1, ..., n)`.
///
/// For Hoare's find, `k = None` averages the worst rank (`r_search`);
/// quicksort ignores `k`; scan maxima averages the maxima count.
pub fn exhaustive_average_comparisons(
    n: usize,
    algorithm: Algorithm,
    rule: PivotRule,
    k: Option<usize>,
) -> Result<Ratio<u64>> {
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if let Some(k) = k {
        if k == 0 || k > n {
            return Err(Error::RankOutOfRange { k, n });
        }
    }
    let mut total: u64 = 0;
    let mut count: u64 = 0;
    for perm in (1..=n as u32).permutations(n) {
        let seq = Sequence::from_trusted(perm);
        total += match algorithm {
            Algorithm::Quicksort => quicksort_count(&seq, rule).comparisons,
            Algorithm::ScanMaxima => scan_maxima(&seq, rule) as u64,
            Algorithm::HoareFind => match k {
                Some(k) => hoare_find(&seq, k, rule)?.comparisons,
                None => rsearch_max(&seq, rule)?.1,
            },
        };
        count += 1;
    }
    Ok(Ratio::new(total, count))
}

/// A sequence, a target rank and a covering of its positions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringInstance<T> {
    pub seq: Sequence<T>,
    pub k: usize,
    /// 1-based position sets `U_1, ..., U_m`.
    pub cover: Vec<Vec<usize>>,
}

/// Both sides of the covering inequality for the classic rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringTerms {
    pub lhs: u64,
    /// `r_search(seq_U, k_U)` for every set, in cover order.
    pub per_set: Vec<u64>,
    /// Counted comparisons whose two positions share no cover set.
    pub cross: u64,
}

impl CoveringTerms {
    pub fn rhs(&self) -> u64 {
        self.per_set.iter().sum::<u64>() + self.cross
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs()
    }
}

impl<T: Scalar> CoveringInstance<T> {
    /// 1-based position of the `k`-th smallest element.
    pub fn target_position(&self) -> Result<usize> {
        Ok(kth_smallest_oracle(&self.seq, self.k)?.1)
    }

    fn validate(&self) -> Result<usize> {
        let n = self.seq.len();
        let j = self.target_position()?;
        if self.cover.is_empty() {
            return Err(Error::MalformedCovering("no sets".into()));
        }
        let mut covered = vec![false; n];
        for (i, set) in self.cover.iter().enumerate() {
            for &p in set {
                if p == 0 || p > n {
                    return Err(Error::MalformedCovering(format!(
                        "set {} holds position {p} outside 1..={n}",
                        i + 1
                    )));
                }
                covered[p - 1] = true;
            }
            if !set.contains(&j) {
                return Err(Error::MalformedCovering(format!(
                    "set {} misses the target position {j}",
                    i + 1
                )));
            }
        }
        if let Some(p) = covered.iter().position(|c| !c) {
            return Err(Error::MalformedCovering(format!(
                "position {} is not covered",
                p + 1
            )));
        }
        Ok(j)
    }
}

/// Evaluate both sides of the covering inequality by simulation.
pub fn covering_terms<T: Scalar>(inst: &CoveringInstance<T>) -> Result<CoveringTerms> {
    let j = inst.validate()?;
    let n = inst.seq.len();
    // membership[p] = bitset of sets containing p (cover sizes are small).
    let words = inst.cover.len().div_ceil(64);
    let mut membership = vec![0u64; (n + 1) * words];
    for (i, set) in inst.cover.iter().enumerate() {
        for &p in set {
            membership[p * words + i / 64] |= 1 << (i % 64);
        }
    }
    let share = |a: usize, b: usize| {
        (0..words).any(|w| membership[a * words + w] & membership[b * words + w] != 0)
    };
    let mut cross = 0u64;
    let lhs = hoare_find_observed(&inst.seq, inst.k, PivotRule::Classic, |a, b| {
        if !share(a, b) {
            cross += 1;
        }
    })?
    .comparisons;

    let mut per_set = Vec::with_capacity(inst.cover.len());
    for set in &inst.cover {
        let mut positions = set.clone();
        positions.sort_unstable();
        positions.dedup();
        let sub = inst.seq.subsequence(&positions)?;
        // Rank of the target inside the subsequence.
        let tv = inst.seq.values()[j - 1];
        let k_sub = positions
            .iter()
            .filter(|&&p| key_cmp(&inst.seq.values()[p - 1], p, &tv, j).is_le())
            .count();
        per_set.push(hoare_find(&sub, k_sub, PivotRule::Classic)?.comparisons);
    }
    Ok(CoveringTerms {
        lhs,
        per_set,
        cross,
    })
}

pub fn covering_inequality_check<T: Scalar>(inst: &CoveringInstance<T>) -> Result<bool> {
    Ok(covering_terms(inst)?.holds())
}

/// The three-set covering from the additive-noise upper bound: positions with
/// noise at most 3, positions whose perturbed value lies in `[1, d]`, and
/// positions with noise at least `d - 3`; the target joins every set.
pub fn frb_covering(noise: &[f64], perturbed: &[f64], d: f64, target: usize) -> Vec<Vec<usize>> {
    let pick = |f: &dyn Fn(usize) -> bool| -> Vec<usize> {
        let mut v: Vec<usize> = (1..=noise.len()).filter(|&p| p == target || f(p)).collect();
        v.dedup();
        v
    };
    vec![
        pick(&|p| noise[p - 1] <= 3.0),
        pick(&|p| (1.0..=d).contains(&perturbed[p - 1])),
        pick(&|p| noise[p - 1] >= d - 3.0),
    ]
}

/// `r_search(seq') - r_search(seq) - n` where `seq'` is `seq` with `t`
/// inserted before 1-based position `at` (`at = n + 1` appends).
pub fn insertion_excess<T: Scalar>(
    seq: &Sequence<T>,
    t: T,
    at: usize,
    rule: PivotRule,
) -> Result<i64> {
    let n = seq.len();
    if at == 0 || at > n + 1 {
        return Err(Error::PositionOutOfRange {
            position: at,
            len: n + 1,
        });
    }
    let mut values = seq.values().to_vec();
    values.insert(at - 1, t);
    let extended = Sequence::new(values)?;
    let before = rsearch_max(seq, rule)?.1 as i64;
    let after = rsearch_max(&extended, rule)?.1 as i64;
    Ok(after - before - n as i64)
}
