use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{key_cmp, Scalar};

/// An ordered list of values with positional identity.
///
/// Construction rejects values that are not comparable with themselves
/// (floating point NaN), so every pair of elements is totally ordered by
/// (value, position).
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence<T> {
    values: Vec<T>,
}

impl<T: Scalar> Sequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| v.partial_cmp(v).is_none()) {
            return Err(Error::Incomparable { position: i + 1 });
        }
        Ok(Sequence { values })
    }

    pub fn empty() -> Self {
        Sequence { values: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value at a 1-based position.
    pub fn get(&self, position: usize) -> Option<T> {
        position
            .checked_sub(1)
            .and_then(|i| self.values.get(i))
            .copied()
    }

    /// Subsequence at the given 1-based positions, kept in increasing
    /// position order regardless of the order they are listed in.
    pub fn subsequence(&self, positions: &[usize]) -> Result<Self> {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut values = Vec::with_capacity(sorted.len());
        for &p in &sorted {
            values.push(self.get(p).ok_or(Error::PositionOutOfRange {
                position: p,
                len: self.len(),
            })?);
        }
        Ok(Sequence { values })
    }

    /// Compare the elements at two 1-based positions in (value, position) order.
    pub fn cmp_positions(&self, a: usize, b: usize) -> Ordering {
        key_cmp(&self.values[a - 1], a, &self.values[b - 1], b)
    }

    /// Copy of the sequence with positions listed in (value, position) order.
    pub fn sorted_positions(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (1..=self.len()).collect();
        idx.sort_by(|&a, &b| self.cmp_positions(a, b));
        idx
    }

    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Sequence { values }
    }

    pub(crate) fn from_trusted(values: Vec<T>) -> Self {
        debug_assert!(values.iter().all(|v| v.partial_cmp(v).is_some()));
        Sequence { values }
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for Sequence<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Sequence::new(values)
    }
}

impl<T: Scalar> AsRef<[T]> for Sequence<T> {
    fn as_ref(&self) -> &[T] {
        &self.values
    }
}
