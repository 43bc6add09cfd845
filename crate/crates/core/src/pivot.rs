use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithms::Item;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::Sequence;

/// Deterministic rule choosing the partition element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotRule {
    /// First element.
    Classic,
    /// Median of the first, the `ceil(n/2)`-th and the last element.
    MedianOfThree,
    /// Larger of the first and last element.
    MaxOfTwo,
    /// Smaller of the first and last element.
    MinOfTwo,
}

impl PivotRule {
    pub const ALL: [PivotRule; 4] = [
        PivotRule::Classic,
        PivotRule::MedianOfThree,
        PivotRule::MaxOfTwo,
        PivotRule::MinOfTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PivotRule::Classic => "classic",
            PivotRule::MedianOfThree => "m3",
            PivotRule::MaxOfTwo => "max2",
            PivotRule::MinOfTwo => "min2",
        }
    }

    /// 0-based index of the pivot within a nonempty slice of items.
    #[inline]
    pub(crate) fn pick<T: Scalar>(self, items: &[Item<T>]) -> usize {
        let n = items.len();
        debug_assert!(n > 0);
        pick_among(self, n, |a, b| items[a].lt(&items[b]))
    }
}

/// Shared pivot logic over 0-based indices, given a strict "less than" on
/// the (value, position) keys.
#[inline]
pub(crate) fn pick_among(rule: PivotRule, n: usize, lt: impl Fn(usize, usize) -> bool) -> usize {
    let last = n - 1;
    match rule {
        PivotRule::Classic => 0,
        PivotRule::MaxOfTwo => {
            if lt(0, last) {
                last
            } else {
                0
            }
        }
        PivotRule::MinOfTwo => {
            if lt(last, 0) {
                last
            } else {
                0
            }
        }
        PivotRule::MedianOfThree => {
            let mid = n.div_ceil(2) - 1;
            median_of_three(0, mid, last, lt)
        }
    }
}

/// Median of three indices under `lt`. Repeated indices (n <= 2) behave as a
/// multiset, so the result is always one of the inputs.
#[inline]
fn median_of_three(a: usize, b: usize, c: usize, lt: impl Fn(usize, usize) -> bool) -> usize {
    let (lo, hi) = if lt(b, a) { (b, a) } else { (a, b) };
    if lt(c, lo) {
        lo
    } else if lt(hi, c) {
        hi
    } else {
        c
    }
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PivotRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" | "c" => Ok(PivotRule::Classic),
            "m3" | "median-of-three" => Ok(PivotRule::MedianOfThree),
            "max2" | "max-of-two" => Ok(PivotRule::MaxOfTwo),
            "min2" | "min-of-two" => Ok(PivotRule::MinOfTwo),
            _ => Err(Error::param("rule", s, "expected classic, m3, max2 or min2")),
        }
    }
}

/// 1-based position of the pivot `rule` selects from `seq`.
pub fn select_pivot<T: Scalar>(seq: &Sequence<T>, rule: PivotRule) -> Result<usize> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let v = seq.values();
    Ok(1 + pick_among(rule, v.len(), |a, b| {
        crate::scalar::key_cmp(&v[a], a, &v[b], b).is_lt()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> Sequence<f64> {
        Sequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn singleton_is_its_own_pivot() {
        for rule in PivotRule::ALL {
            assert_eq!(select_pivot(&seq(&[7.0]), rule), Ok(1));
        }
    }

    #[test]
    fn three_element_examples() {
        let s = seq(&[2.0, 3.0, 1.0]);
        assert_eq!(select_pivot(&s, PivotRule::Classic), Ok(1));
        assert_eq!(select_pivot(&s, PivotRule::MedianOfThree), Ok(1));
        assert_eq!(select_pivot(&s, PivotRule::MaxOfTwo), Ok(1));
        assert_eq!(select_pivot(&s, PivotRule::MinOfTwo), Ok(3));
    }

    #[test]
    fn median_of_three_on_two_elements_takes_first() {
        assert_eq!(select_pivot(&seq(&[5.0, 1.0]), PivotRule::MedianOfThree), Ok(1));
        assert_eq!(select_pivot(&seq(&[1.0, 5.0]), PivotRule::MedianOfThree), Ok(1));
    }

    #[test]
    fn median_of_three_uses_ceil_middle() {
        // n = 4: middle is position 2.
        let s = seq(&[1.0, 3.0, 9.0, 5.0]);
        assert_eq!(select_pivot(&s, PivotRule::MedianOfThree), Ok(2));
        // n = 5: middle is position 3.
        let s = seq(&[1.0, 9.0, 4.0, 8.0, 7.0]);
        assert_eq!(select_pivot(&s, PivotRule::MedianOfThree), Ok(3));
    }

    #[test]
    fn ties_break_by_position() {
        let s = seq(&[1.0, 1.0]);
        assert_eq!(select_pivot(&s, PivotRule::MaxOfTwo), Ok(2));
        assert_eq!(select_pivot(&s, PivotRule::MinOfTwo), Ok(1));
        let s = seq(&[1.0, 1.0, 1.0]);
        assert_eq!(select_pivot(&s, PivotRule::MedianOfThree), Ok(2));
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(
            select_pivot(&Sequence::<f64>::empty(), PivotRule::Classic),
            Err(Error::EmptySequence)
        );
    }

    #[test]
    fn parse_round_trip() {
        for rule in PivotRule::ALL {
            assert_eq!(rule.name().parse::<PivotRule>(), Ok(rule));
        }
        assert!("median".parse::<PivotRule>().is_err());
    }
}
