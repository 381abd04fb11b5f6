//! Cyclic intervals and cyclic orders on the ground set `[n] = {1, ..., n}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer lift of a ground-set element. Residues are taken in `[1, n]`.
pub type Lift = i64;

/// Reduce an integer lift to its representative in `[1, n]`.
pub fn residue(n: usize, x: Lift) -> usize {
    (x - 1).rem_euclid(n as Lift) as usize + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("ground set size must be positive")]
    EmptyGroundSet,
    #[error("interval start {start} outside [1, {n}]")]
    StartOutOfRange { n: usize, start: usize },
    #[error("interval length {len} outside [1, {n}]")]
    LengthOutOfRange { n: usize, len: usize },
}

/// The cyclic interval `[start, start + len - 1]` of `[n]`.
///
/// Stored as a start plus a length so that the full set is representable and
/// the empty interval is not. Full intervals are normalized to `start = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicInterval {
    n: usize,
    start: usize,
    len: usize,
}

impl CyclicInterval {
    pub fn new(n: usize, start: usize, len: usize) -> Result<Self, IntervalError> {
        if n == 0 {
            return Err(IntervalError::EmptyGroundSet);
        }
        if start == 0 || start > n {
            return Err(IntervalError::StartOutOfRange { n, start });
        }
        if len == 0 || len > n {
            return Err(IntervalError::LengthOutOfRange { n, len });
        }
        let start = if len == n { 1 } else { start };
        Ok(Self { n, start, len })
    }

    /// The whole ground set.
    pub fn full(n: usize) -> Self {
        assert!(n > 0, "ground set size must be positive");
        Self {
            n,
            start: 1,
            len: n,
        }
    }

    /// The interval starting at the residue of `start` with the given length.
    /// Lengths of `n` or more give the full interval.
    pub fn from_lift(n: usize, start: Lift, len: usize) -> Result<Self, IntervalError> {
        Self::new(n, residue(n, start), len.min(n))
    }

    /// The interval `[i, j]` given by two lifts with `i <= j < i + n`.
    pub fn from_endpoints(n: usize, i: Lift, j: Lift) -> Result<Self, IntervalError> {
        let len = j - i + 1;
        if len < 1 || len > n as Lift {
            return Err(IntervalError::LengthOutOfRange {
                n,
                len: len.max(0) as usize,
            });
        }
        Self::from_lift(n, i, len as usize)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: the empty set is not a cyclic interval.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_full(&self) -> bool {
        self.len == self.n
    }

    /// Last element as an integer lift `start + len - 1` (may exceed `n`).
    pub fn end_lift(&self) -> Lift {
        (self.start + self.len - 1) as Lift
    }

    /// Last element reduced to `[1, n]`.
    pub fn end(&self) -> usize {
        residue(self.n, self.end_lift())
    }

    /// Position of `x` counted from `start` in the cyclic order.
    fn offset(&self, x: Lift) -> usize {
        (x - self.start as Lift).rem_euclid(self.n as Lift) as usize
    }

    pub fn contains(&self, x: Lift) -> bool {
        self.offset(x) < self.len
    }

    /// Elements in cyclic order starting from `start`, as residues.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |t| residue(self.n, (self.start + t) as Lift))
    }

    /// Elements as consecutive integer lifts `start, ..., start + len - 1`.
    pub fn lifts(&self) -> std::ops::RangeInclusive<Lift> {
        self.start as Lift..=self.end_lift()
    }

    pub fn is_subset(&self, other: &CyclicInterval) -> bool {
        debug_assert_eq!(self.n, other.n);
        if other.is_full() {
            return true;
        }
        if self.is_full() {
            return false;
        }
        other.offset(self.start as Lift) + self.len <= other.len
    }

    pub fn is_proper_subset(&self, other: &CyclicInterval) -> bool {
        self != other && self.is_subset(other)
    }

    /// `|self \ other|`.
    pub fn difference_len(&self, other: &CyclicInterval) -> usize {
        self.len - self.intersection_len(other)
    }

    /// `|self ∩ other|`.
    pub fn intersection_len(&self, other: &CyclicInterval) -> usize {
        self.members()
            .filter(|&x| other.contains(x as Lift))
            .count()
    }

    pub fn is_disjoint(&self, other: &CyclicInterval) -> bool {
        self.intersection_len(other) == 0
    }

    /// Indicator bitmask (bit `x - 1` for element `x`); requires `n <= 64`.
    pub fn mask(&self) -> u64 {
        assert!(self.n <= 64, "bitmask needs n <= 64");
        self.members().fold(0u64, |m, x| m | (1u64 << (x - 1)))
    }

    /// Every cyclic interval of `[n]`, full interval last.
    pub fn all(n: usize) -> impl Iterator<Item = CyclicInterval> {
        (1..n)
            .flat_map(move |len| (1..=n).map(move |start| CyclicInterval { n, start, len }))
            .chain(std::iter::once(CyclicInterval::full(n)))
    }
}

impl PartialOrd for CyclicInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by `(start, len)`.
impl Ord for CyclicInterval {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.start, self.len).cmp(&(other.n, other.start, other.len))
    }
}

impl fmt::Display for CyclicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end())
    }
}

/// The order `<_i` on `[n]`: `i < i+1 < ... < n < 1 < ... < i-1`, extended to
/// all integers through residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicOrder {
    n: usize,
    base: usize,
}

impl CyclicOrder {
    pub fn new(n: usize, base: usize) -> Self {
        assert!(n > 0 && (1..=n).contains(&base), "base must lie in [1, n]");
        Self { n, base }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Rank of `x` in the order, `0` for the base.
    pub fn position(&self, x: Lift) -> usize {
        (x - self.base as Lift).rem_euclid(self.n as Lift) as usize
    }

    pub fn compare(&self, a: Lift, b: Lift) -> Ordering {
        self.position(a).cmp(&self.position(b))
    }

    pub fn less(&self, a: Lift, b: Lift) -> bool {
        self.position(a) < self.position(b)
    }

    /// The elements of `[n]` in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).map(move |t| residue(self.n, (self.base + t) as Lift))
    }
}
