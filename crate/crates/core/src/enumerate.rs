//! Exhaustive enumeration of bounded affine permutations of a given size.

use crate::interval::{residue, Lift};
use crate::perm::BoundedAffinePermutation;

/// Every bounded affine permutation of size `n`, windows in lexicographic order.
///
/// Any partial window with distinct residues extends to a full one, so the
/// search never dead-ends: each step is a single backtrack plus a greedy fill.
#[derive(Debug, Clone)]
pub struct BoundedAffinePermutations {
    n: usize,
    window: Vec<Lift>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl BoundedAffinePermutations {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            window: Vec::with_capacity(n),
            used: vec![false; n],
            started: false,
            done: n == 0,
        }
    }

    /// Only the permutations whose positroid has rank `k`.
    pub fn with_rank(n: usize, k: usize) -> impl Iterator<Item = BoundedAffinePermutation> {
        Self::new(n).filter(move |p| p.rank() == k)
    }

    /// Permutations whose window starts with `first`, in order. Used to shard
    /// the enumeration.
    pub fn with_first(n: usize, first: Lift) -> impl Iterator<Item = BoundedAffinePermutation> {
        let mut it = Self::new(n);
        it.done = !(1..=(1 + n as Lift)).contains(&first);
        if !it.done {
            it.window.push(first);
            it.used[residue(n, first) - 1] = true;
            it.fill();
        }
        it.take_while(move |p| p.window()[0] == first)
    }

    fn fill(&mut self) {
        while self.window.len() < self.n {
            let i = self.window.len() + 1;
            let v = (i..=i + self.n)
                .map(|v| v as Lift)
                .find(|&v| !self.used[residue(self.n, v) - 1])
                .expect("a free residue always exists");
            self.used[residue(self.n, v) - 1] = true;
            self.window.push(v);
        }
    }

    fn advance(&mut self) -> bool {
        while let Some(v) = self.window.pop() {
            self.used[residue(self.n, v) - 1] = false;
            let i = self.window.len() + 1;
            let upper = (i + self.n) as Lift;
            if let Some(next) = (v + 1..=upper).find(|&w| !self.used[residue(self.n, w) - 1]) {
                self.used[residue(self.n, next) - 1] = true;
                self.window.push(next);
                self.fill();
                return true;
            }
        }
        false
    }
}

impl Iterator for BoundedAffinePermutations {
    type Item = BoundedAffinePermutation;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(
            BoundedAffinePermutation::from_window(self.window.clone())
                .expect("enumerator only builds valid windows"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| BoundedAffinePermutations::new(n).count())
            .collect();
        assert_eq!(counts, vec![2, 5, 16, 65, 326, 1957]);
    }

    #[test]
    fn lexicographic_and_distinct() {
        let all: Vec<_> = BoundedAffinePermutations::new(4).collect();
        assert!(all.windows(2).all(|w| w[0].window() < w[1].window()));
    }

    #[test]
    fn shards_cover_everything() {
        let n = 5;
        let sharded: usize = (1..=1 + n as Lift)
            .map(|f| BoundedAffinePermutations::with_first(n, f).count())
            .sum();
        assert_eq!(sharded, BoundedAffinePermutations::new(n).count());
    }

    #[test]
    fn rank_filter() {
        let by_rank: Vec<usize> = (0..=4)
            .map(|k| BoundedAffinePermutations::with_rank(4, k).count())
            .collect();
        assert_eq!(by_rank.iter().sum::<usize>(), 65);
        assert_eq!(by_rank[0], 1);
        assert_eq!(by_rank[4], 1);
    }
}
