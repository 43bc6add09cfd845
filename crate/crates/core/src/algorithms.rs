//! Instrumented quicksort, Hoare's find and scan maxima.
//!
//! Only pivot-versus-element comparisons are counted: a partition of `n`
//! elements costs exactly `n - 1`. The handful of comparisons a rule spends
//! choosing its pivot is not counted.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::pivot::PivotRule;
use crate::scalar::{key_cmp, Scalar};
use crate::sequence::Sequence;

/// An element together with its original 1-based position.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Item<T> {
    pub value: T,
    pub pos: usize,
}

impl<T: PartialOrd> Item<T> {
    #[inline]
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        key_cmp(&self.value, self.pos, &other.value, other.pos)
    }

    #[inline]
    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_key(other).is_lt()
    }
}

pub(crate) fn items_of<T: Scalar>(seq: &Sequence<T>) -> Vec<Item<T>> {
    seq.values()
        .iter()
        .enumerate()
        .map(|(i, &value)| Item { value, pos: i + 1 })
        .collect()
}

/// What a run produced besides its counters.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    /// Hoare's find: the selected element and its 1-based position.
    Selected { value: T, position: usize },
    /// Quicksort: the input positions in output order.
    Sorted { order: Vec<usize> },
    /// Empty input; nothing was produced.
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub comparisons: u64,
    pub pivots: u64,
    /// Deepest recursion level that partitioned a nonempty sequence.
    pub depth: u64,
    pub outcome: Outcome<T>,
}

impl<T: Scalar> RunResult<T> {
    pub fn selected(&self) -> Option<(T, usize)> {
        match self.outcome {
            Outcome::Selected { value, position } => Some((value, position)),
            _ => None,
        }
    }

    /// True when a quicksort outcome lists every position of `seq` exactly
    /// once in nondecreasing (value, position) order.
    pub fn certifies_sorted(&self, seq: &Sequence<T>) -> bool {
        let order = match &self.outcome {
            Outcome::Sorted { order } => order,
            Outcome::Empty => return seq.is_empty(),
            Outcome::Selected { .. } => return false,
        };
        if order.len() != seq.len() {
            return false;
        }
        let mut seen = vec![false; seq.len()];
        for &p in order {
            if p == 0 || p > seq.len() || std::mem::replace(&mut seen[p - 1], true) {
                return false;
            }
        }
        order
            .windows(2)
            .all(|w| seq.cmp_positions(w[0], w[1]).is_lt())
    }
}

/// Split `seq` around the element at `pivot_pos` (1-based). Returns the
/// elements below and above the pivot in their original relative order, and
/// the number of comparisons (always `n - 1`).
pub fn partition_count<T: Scalar>(
    seq: &Sequence<T>,
    pivot_pos: usize,
) -> Result<(Sequence<T>, Sequence<T>, u64)> {
    let n = seq.len();
    if pivot_pos == 0 || pivot_pos > n {
        return Err(Error::PositionOutOfRange {
            position: pivot_pos,
            len: n,
        });
    }
    let items = items_of(seq);
    let pivot = items[pivot_pos - 1];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for it in &items {
        match it.cmp_key(&pivot) {
            Ordering::Less => left.push(it.value),
            Ordering::Greater => right.push(it.value),
            Ordering::Equal => {}
        }
    }
    Ok((
        Sequence::from_trusted(left),
        Sequence::from_trusted(right),
        (n - 1) as u64,
    ))
}

/// Stable split of `items` around `items[pivot]` into `left`/`right`.
#[inline]
fn split<T: Scalar>(
    items: &[Item<T>],
    pivot: usize,
    left: &mut Vec<Item<T>>,
    right: &mut Vec<Item<T>>,
    mut observe: impl FnMut(usize, usize),
) -> Item<T> {
    let p = items[pivot];
    left.clear();
    right.clear();
    for (i, it) in items.iter().enumerate() {
        if i == pivot {
            continue;
        }
        observe(p.pos, it.pos);
        if it.lt(&p) {
            left.push(*it);
        } else {
            right.push(*it);
        }
    }
    p
}

/// Quicksort with comparison counting.
pub fn quicksort_count<T: Scalar>(seq: &Sequence<T>, rule: PivotRule) -> RunResult<T> {
    enum Frame<T> {
        Sort(Vec<Item<T>>, u64),
        Emit(usize),
    }

    let mut res = RunResult {
        comparisons: 0,
        pivots: 0,
        depth: 0,
        outcome: Outcome::Empty,
    };
    if seq.is_empty() {
        return res;
    }
    let mut order = Vec::with_capacity(seq.len());
    let mut stack = vec![Frame::Sort(items_of(seq), 1)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Emit(pos) => order.push(pos),
            Frame::Sort(items, depth) => {
                if items.is_empty() {
                    continue;
                }
                res.comparisons += (items.len() - 1) as u64;
                res.pivots += 1;
                res.depth = res.depth.max(depth);
                let mut left = Vec::new();
                let mut right = Vec::new();
                let p = split(&items, rule.pick(&items), &mut left, &mut right, |_, _| {});
                drop(items);
                stack.push(Frame::Sort(right, depth + 1));
                stack.push(Frame::Emit(p.pos));
                stack.push(Frame::Sort(left, depth + 1));
            }
        }
    }
    res.outcome = Outcome::Sorted { order };
    res
}

/// Hoare's find for the `k`-th smallest element (1-based) under
/// (value, position) order.
pub fn hoare_find<T: Scalar>(seq: &Sequence<T>, k: usize, rule: PivotRule) -> Result<RunResult<T>> {
    hoare_find_observed(seq, k, rule, |_, _| {})
}

/// Hoare's find reporting every counted comparison as
/// `(pivot position, other position)`.
pub fn hoare_find_observed<T: Scalar>(
    seq: &Sequence<T>,
    k: usize,
    rule: PivotRule,
    mut observe: impl FnMut(usize, usize),
) -> Result<RunResult<T>> {
    let n = seq.len();
    if k == 0 || k > n {
        return Err(Error::RankOutOfRange { k, n });
    }
    let mut cur = items_of(seq);
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut k = k;
    let mut res = RunResult {
        comparisons: 0,
        pivots: 0,
        depth: 0,
        outcome: Outcome::Empty,
    };
    loop {
        res.comparisons += (cur.len() - 1) as u64;
        res.pivots += 1;
        res.depth += 1;
        let p = split(&cur, rule.pick(&cur), &mut left, &mut right, &mut observe);
        let l = left.len();
        if l + 1 == k {
            res.outcome = Outcome::Selected {
                value: p.value,
                position: p.pos,
            };
            return Ok(res);
        }
        if l >= k {
            std::mem::swap(&mut cur, &mut left);
        } else {
            std::mem::swap(&mut cur, &mut right);
            // The pivot itself is discarded along with the left side.
            k -= l + 1;
        }
    }
}

/// Number of scan maxima: pivots taken while repeatedly discarding every
/// element not greater than the current pivot.
pub fn scan_maxima<T: Scalar>(seq: &Sequence<T>, rule: PivotRule) -> usize {
    scan_maxima_run(seq, rule).pivots as usize
}

/// Scan maxima with counters; `comparisons` counts each pivot against the
/// other survivors, `pivots` and `depth` both equal the number of scan maxima.
///
/// Survivors are always the elements ranked above the last pivot, so they are
/// removed in rank order from a Fenwick tree over positions; the first,
/// middle and last survivors are found by order-statistic descent. This runs
/// in `O(n log n)` regardless of how many maxima there are.
pub fn scan_maxima_run<T: Scalar>(seq: &Sequence<T>, rule: PivotRule) -> RunResult<T> {
    let n = seq.len();
    let mut res = RunResult {
        comparisons: 0,
        pivots: 0,
        depth: 0,
        outcome: Outcome::Empty,
    };
    if n == 0 {
        return res;
    }
    let by_rank = seq.sorted_positions();
    let mut rank_of = vec![0usize; n + 1];
    for (r, &p) in by_rank.iter().enumerate() {
        rank_of[p] = r;
    }
    let mut alive = Fenwick::full(n);
    let mut remaining = n;
    let mut next_rank = 0;
    while remaining > 0 {
        let first = alive.kth(1);
        let last = alive.kth(remaining);
        let pivot = match rule {
            PivotRule::Classic => first,
            PivotRule::MaxOfTwo | PivotRule::MinOfTwo => {
                let idx = [first, last];
                idx[crate::pivot::pick_among(rule, 2, |a, b| rank_of[idx[a]] < rank_of[idx[b]])]
            }
            PivotRule::MedianOfThree => {
                let mid = alive.kth(remaining.div_ceil(2));
                let idx = [first, mid, last];
                // Map the three survivors onto a 3-element view so the shared
                // rule logic sees first/middle/last at 0, 1, 2.
                idx[crate::pivot::pick_among(rule, 3, |a, b| rank_of[idx[a]] < rank_of[idx[b]])]
            }
        };
        res.comparisons += (remaining - 1) as u64;
        res.pivots += 1;
        let pr = rank_of[pivot];
        while next_rank <= pr {
            alive.add(by_rank[next_rank], -1);
            next_rank += 1;
            remaining -= 1;
        }
    }
    res.depth = res.pivots;
    res
}

/// Fenwick tree over positions `1..=n` holding 0/1 membership.
struct Fenwick {
    tree: Vec<i64>,
    log: usize,
}

impl Fenwick {
    fn full(n: usize) -> Self {
        let mut tree = vec![0i64; n + 1];
        for i in 1..=n {
            tree[i] += 1;
            let j = i + (i & i.wrapping_neg());
            if j <= n {
                tree[j] += tree[i];
            }
        }
        let log = usize::BITS as usize - n.leading_zeros() as usize;
        Fenwick { tree, log }
    }

    fn add(&mut self, mut i: usize, delta: i64) {
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest position whose prefix count reaches `k` (1-based).
    fn kth(&self, mut k: usize) -> usize {
        let mut pos = 0;
        for b in (0..=self.log).rev() {
            let next = pos + (1 << b);
            if next < self.tree.len() && (self.tree[next] as usize) < k {
                pos = next;
                k -= self.tree[next] as usize;
            }
        }
        pos + 1
    }
}
