//! The periodic `n × (n+1)` dotted array of a bounded affine permutation, its
//! shading, corners and ranked essential family.
//!
//! Rows live on integer lifts with period `n`; row `i` holds the dot
//! `(i, π(i) − i + 1)`. A square `(i, m)` corresponds to the cyclic interval
//! `[i, i + m − 1]`, so the column of a square is the length of its interval.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::essential::{Entry, RankedEssentialFamily};
use crate::interval::{residue, CyclicInterval, Lift};
use crate::perm::BoundedAffinePermutation;

/// A square of the infinite strip. `col` lies in `[1, n + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub row: Lift,
    pub col: usize,
}

impl Square {
    pub fn new(row: Lift, col: usize) -> Self {
        Self { row, col }
    }

    /// The square `(start, len)` of a cyclic interval.
    pub fn of_interval(interval: &CyclicInterval) -> Self {
        Self {
            row: interval.start() as Lift,
            col: interval.len(),
        }
    }

    /// The cyclic interval `[row, row + col − 1]`, when `col ≤ n`.
    pub fn interval(&self, n: usize) -> Option<CyclicInterval> {
        (1..=n).contains(&self.col).then(|| {
            CyclicInterval::from_lift(n, self.row, self.col).expect("column checked against n")
        })
    }

    /// Antidiagonal label `row + col`; properness compares it mod `n`.
    pub fn antidiagonal(&self) -> Lift {
        self.row + self.col as Lift
    }
}

/// Anything that places at most one dot in each row residue: a permutation or
/// a partial dotting.
pub trait DotSource {
    fn size(&self) -> usize;
    /// Column of the dot in row residue `row ∈ [1, n]`, if any.
    fn dot_col(&self, row: usize) -> Option<usize>;
}

impl DotSource for BoundedAffinePermutation {
    fn size(&self) -> usize {
        self.n()
    }

    fn dot_col(&self, row: usize) -> Option<usize> {
        Some((self.window()[row - 1] - row as Lift + 1) as usize)
    }
}

/// `P_(i,m) = {(i+t, c) : 0 ≤ t ≤ m−1, m−t < c ≤ n+1}`.
pub fn region_p(n: usize, sq: Square, probe: Square) -> bool {
    let t = probe.row - sq.row;
    (0..sq.col as Lift).contains(&t) && probe.col as Lift > sq.col as Lift - t && probe.col <= n + 1
}

/// `T_(i,m) = {(i+t, c) : 0 ≤ t ≤ m−1, 1 ≤ c ≤ m−t}`. Contains the square
/// itself and its sub-antidiagonal, so `T` and `P` partition the row band.
pub fn region_t(n: usize, sq: Square, probe: Square) -> bool {
    let t = probe.row - sq.row;
    let _ = n;
    (0..sq.col as Lift).contains(&t) && probe.col >= 1 && probe.col as Lift <= sq.col as Lift - t
}

/// `Δ_(i,m) = {(i+ℓ, m−ℓ) : 0 < ℓ < m}`.
pub fn sub_antidiagonal(sq: Square) -> Vec<Square> {
    (1..sq.col)
        .map(|l| Square::new(sq.row + l as Lift, sq.col - l))
        .collect()
}

/// Dots in `P_(i,m)` counted over row lifts `i..i+m−1` (periodic copies count).
pub fn dots_in_p<D: DotSource + ?Sized>(dots: &D, sq: Square) -> usize {
    band(dots, sq).filter(|&(t, c)| c > sq.col - t).count()
}

/// Dots in `T_(i,m)`.
pub fn dots_in_t<D: DotSource + ?Sized>(dots: &D, sq: Square) -> usize {
    band(dots, sq).filter(|&(t, c)| c <= sq.col - t).count()
}

// (offset, dot column) for each dotted row of the band below `sq`.
fn band<D: DotSource + ?Sized>(dots: &D, sq: Square) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = dots.size();
    (0..sq.col).filter_map(move |t| dots.dot_col(residue(n, sq.row + t as Lift)).map(|c| (t, c)))
}

/// The dotted array `D(π)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DottedArray {
    n: usize,
    cols: Vec<usize>,
}

impl DottedArray {
    pub fn new(p: &BoundedAffinePermutation) -> Self {
        let n = p.n();
        Self {
            n,
            cols: (1..=n)
                .map(|i| p.dot_col(i).expect("every row dotted"))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `D(π) = {(i, π(i) − i + 1) : i ∈ [n]}`.
    pub fn dots(&self) -> Vec<Square> {
        self.cols
            .iter()
            .enumerate()
            .map(|(r, &c)| Square::new(r as Lift + 1, c))
            .collect()
    }

    /// One dot per row residue and per antidiagonal residue.
    pub fn is_proper(&self) -> bool {
        let mut seen = vec![false; self.n];
        self.dots().iter().all(|d| {
            let a = residue(self.n, d.antidiagonal()) - 1;
            !std::mem::replace(&mut seen[a], true)
        })
    }
}

/// Shading of the diagram: a square is shaded when it lies strictly left of
/// the dot in its row, or on the sub-antidiagonal of some dot.
///
/// On lifts the second clause reads `π⁻¹(row + col − 1) < row`.
pub fn is_shaded(p: &BoundedAffinePermutation, sq: Square) -> bool {
    let j = sq.row + sq.col as Lift - 1;
    p.eval(sq.row) > j || p.inverse_at(j) < sq.row
}

/// White squares of the diagram; squares outside the column range are not.
pub fn is_white(p: &BoundedAffinePermutation, sq: Square) -> bool {
    (1..=p.n() + 1).contains(&sq.col) && !is_shaded(p, sq)
}

/// Corners from the shading: white squares whose top-right corner is shared
/// with no other white square.
pub fn geometric_corners(p: &BoundedAffinePermutation) -> Vec<Square> {
    let n = p.n();
    let mut out = Vec::new();
    for row in 1..=n as Lift {
        for col in 1..=n + 1 {
            let sq = Square::new(row, col);
            if is_white(p, sq)
                && !is_white(p, Square::new(row - 1, col))
                && !is_white(p, Square::new(row, col + 1))
                && !is_white(p, Square::new(row - 1, col + 1))
            {
                out.push(sq);
            }
        }
    }
    out
}

/// Corners `(i, j − i + 1)` characterized arithmetically: `π(i) ≤ j`,
/// `π⁻¹(j) ≥ i`, `π(i − 1) > j` and `π⁻¹(j + 1) < i`, for `i ≤ j ≤ i + n`.
///
/// The cyclic comparisons are taken on integer lifts; reading them on residues
/// loses corners at loops.
pub fn corners(p: &BoundedAffinePermutation) -> Vec<Square> {
    let n = p.n() as Lift;
    let mut out = Vec::new();
    for i in 1..=n {
        let prev = p.eval(i - 1);
        for j in i..=i + n {
            if p.eval(i) <= j && p.inverse_at(j) >= i && prev > j && p.inverse_at(j + 1) < i {
                out.push(Square::new(i, (j - i + 1) as usize));
            }
        }
    }
    out
}

/// Essential sets with their ranks, plus `(k, [1, n])`.
pub fn ranked_essential_family(p: &BoundedAffinePermutation) -> RankedEssentialFamily {
    let n = p.n();
    let entries = corners(p)
        .into_iter()
        .filter_map(|sq| sq.interval(n))
        .map(|interval| Entry::new(dots_in_p(p, Square::of_interval(&interval)), interval));
    RankedEssentialFamily::new(n, p.rank(), entries)
        .expect("corners of a permutation give distinct intervals")
}

/// Text rendering: `o` dot, `#` shaded, `.` white, one line per row.
pub fn render(p: &BoundedAffinePermutation) -> String {
    let n = p.n();
    let w = (n + 1).to_string().len();
    let mut s = String::new();
    let _ = write!(s, "{:>w$}", "");
    for col in 1..=n + 1 {
        let _ = write!(s, " {col:>w$}");
    }
    s.push('\n');
    for row in 1..=n {
        let _ = write!(s, "{row:>w$}");
        let dot = p.dot_col(row).expect("every row dotted");
        for col in 1..=n + 1 {
            let sq = Square::new(row as Lift, col);
            let ch = if col == dot {
                'o'
            } else if is_shaded(p, sq) {
                '#'
            } else {
                '.'
            };
            let _ = write!(s, " {ch:>w$}");
        }
        s.push('\n');
    }
    s
}
