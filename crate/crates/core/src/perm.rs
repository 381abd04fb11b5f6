//! Bounded affine permutations and the rank function they induce on cyclic
//! intervals.

use std::fmt;

use thiserror::Error;

use crate::interval::{residue, CyclicInterval, Lift};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("window is empty")]
    Empty,
    #[error("π({index}) = {value} violates {index} ≤ π({index}) ≤ {index} + n")]
    BoundViolation { index: usize, value: Lift },
    #[error("π({first}) and π({second}) have the same residue mod n")]
    NotBijective { first: usize, second: usize },
}

/// A bijection `π: Z → Z` with `π(i + n) = π(i) + n` and `i ≤ π(i) ≤ i + n`,
/// stored through its window `π(1), ..., π(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundedAffinePermutation {
    window: Vec<Lift>,
    // inverse[r - 1] = the index i in [1, n] whose value has residue r
    inverse: Vec<usize>,
}

impl BoundedAffinePermutation {
    pub fn from_window(values: Vec<Lift>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        let mut inverse = vec![0usize; n];
        for (pos, &value) in values.iter().enumerate() {
            let index = pos + 1;
            if value < index as Lift || value > (index + n) as Lift {
                return Err(PermError::BoundViolation { index, value });
            }
            let slot = &mut inverse[residue(n, value) - 1];
            if *slot != 0 {
                return Err(PermError::NotBijective {
                    first: *slot,
                    second: index,
                });
            }
            *slot = index;
        }
        Ok(Self {
            window: values,
            inverse,
        })
    }

    /// `π(i) = i`: every element a loop, rank 0.
    pub fn identity(n: usize) -> Self {
        Self::uniform(0, n)
    }

    /// `π_{k,n}(i) = i + k`, the permutation of the uniform matroid `U_{k,n}`.
    pub fn uniform(k: usize, n: usize) -> Self {
        assert!(
            k <= n && n > 0,
            "uniform permutation needs 0 ≤ k ≤ n, n > 0"
        );
        Self::from_window((1..=n).map(|i| (i + k) as Lift).collect())
            .expect("uniform window is a bounded affine permutation")
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[Lift] {
        &self.window
    }

    /// `π(i)` for any integer `i`.
    pub fn eval(&self, i: Lift) -> Lift {
        let r = residue(self.n(), i) as Lift;
        self.window[(r - 1) as usize] + (i - r)
    }

    /// The unique `i` with `π(i) = j`.
    pub fn inverse_at(&self, j: Lift) -> Lift {
        let i0 = self.inverse[residue(self.n(), j) - 1];
        i0 as Lift + (j - self.window[i0 - 1])
    }

    /// Rank of a cyclic interval: the number of `ℓ ∈ [i, j]` with `π(ℓ) > j`,
    /// counted on integer lifts.
    pub fn rank_interval(&self, interval: &CyclicInterval) -> usize {
        assert_eq!(
            interval.n(),
            self.n(),
            "interval and permutation sizes differ"
        );
        let end = interval.end_lift();
        interval.lifts().filter(|&l| self.eval(l) > end).count()
    }

    /// Rank of the positroid: `#{i ∈ [n] : π(i) > n}`.
    pub fn rank(&self) -> usize {
        self.rank_interval(&CyclicInterval::full(self.n()))
    }

    pub fn is_loop(&self, i: usize) -> bool {
        self.window[i - 1] == i as Lift
    }

    pub fn is_coloop(&self, i: usize) -> bool {
        self.window[i - 1] == (i + self.n()) as Lift
    }

    pub fn loops(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.is_loop(i)).collect()
    }

    pub fn coloops(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.is_coloop(i)).collect()
    }
}

impl fmt::Display for BoundedAffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (pos, v) in self.window.iter().enumerate() {
            if pos > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}
