//! Cell codimension, polytope facets, bases, variety conditions and
//! codimension-one boundaries.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::enumerate::BoundedAffinePermutations;
use crate::essential::{connected_entries, core, excess, rank_from_family, RankedEssentialFamily};
use crate::interval::{CyclicInterval, Lift};
use crate::perm::BoundedAffinePermutation;

/// Default size limit for basis enumeration.
pub const BASES_BOUND: usize = 16;
/// Default size limit for the boundary search.
pub const BOUNDARY_BOUND: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    TooLarge { n: usize, bound: usize },
}

/// `ℓ(π) = #{(i, j) : i ∈ [n], i < j ≤ i + n, π(i) > π(j)}`.
pub fn length(p: &BoundedAffinePermutation) -> usize {
    let n = p.n() as Lift;
    (1..=n)
        .map(|i| (i + 1..=i + n).filter(|&j| p.eval(i) > p.eval(j)).count())
        .sum()
}

/// `Σ (k − r) e_I` over all entries.
pub fn codim_from_family(family: &RankedEssentialFamily) -> i64 {
    let table = excess(family);
    family
        .entries()
        .iter()
        .map(|e| (family.k() as i64 - e.rank as i64) * table.get(&e.interval).unwrap_or(0))
        .sum()
}

/// `Σ (k − r) e_I` over core entries only.
pub fn codim_from_core(family: &RankedEssentialFamily) -> i64 {
    let table = excess(family);
    core(family)
        .iter()
        .map(|e| (family.k() as i64 - e.rank as i64) * table.get(&e.interval).unwrap_or(0))
        .sum()
}

/// `Σ_{ℓ ∈ I} x_ℓ ≤ rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetInequality {
    pub interval: CyclicInterval,
    pub rank: usize,
}

/// `0 ≤ x_i ≤ 1`, `Σ x_i = k`, and one inequality per connected non-full entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetSystem {
    pub n: usize,
    pub k: usize,
    pub inequalities: Vec<FacetInequality>,
}

impl FacetSystem {
    /// Whether a 0/1 vector lies in the polytope.
    pub fn contains(&self, point: &[u8]) -> bool {
        point.len() == self.n
            && point.iter().all(|&x| x <= 1)
            && point.iter().map(|&x| x as usize).sum::<usize>() == self.k
            && self.inequalities.iter().all(|ineq| {
                ineq.interval
                    .members()
                    .map(|x| point[x - 1] as usize)
                    .sum::<usize>()
                    <= ineq.rank
            })
    }

    /// Lattice points as element masks (bit `i − 1` for element `i`),
    /// sorted like [`bases`].
    pub fn lattice_points(&self) -> Result<Vec<u64>, GeometryError> {
        check_bound(self.n, BASES_BOUND)?;
        let ineqs: Vec<(u64, u32)> = self
            .inequalities
            .iter()
            .map(|q| (q.interval.mask(), q.rank as u32))
            .collect();
        let mut out: Vec<u64> = k_subsets(self.n, self.k)
            .filter(|&b| ineqs.iter().all(|&(m, r)| (b & m).count_ones() <= r))
            .collect();
        sort_lex(&mut out);
        Ok(out)
    }

    /// Plain-text H-representation: one row per constraint with the
    /// coefficients, the relation and the right-hand side.
    pub fn to_h_rep(&self) -> String {
        let n = self.n;
        let mut s = String::new();
        let row = |s: &mut String, coeffs: &[i64], rel: &str, rhs: i64| {
            let cs: Vec<String> = coeffs.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "{} {rel} {rhs}", cs.join(" "));
        };
        let _ = writeln!(
            s,
            "# n={} k={} rows={}",
            n,
            self.k,
            2 * n + 1 + self.inequalities.len()
        );
        for i in 0..n {
            let mut c = vec![0; n];
            c[i] = -1;
            row(&mut s, &c, "<=", 0);
            c[i] = 1;
            row(&mut s, &c, "<=", 1);
        }
        row(&mut s, &vec![1; n], "=", self.k as i64);
        for q in &self.inequalities {
            let mut c = vec![0; n];
            for x in q.interval.members() {
                c[x - 1] = 1;
            }
            row(&mut s, &c, "<=", q.rank as i64);
        }
        s
    }
}

pub fn facet_system(family: &RankedEssentialFamily) -> FacetSystem {
    FacetSystem {
        n: family.n(),
        k: family.k(),
        inequalities: variety_conditions(family)
            .into_iter()
            .filter(|q| q.rank < q.interval.len())
            .collect(),
    }
}

/// Rank conditions `rank(I) ≤ r` for the connected non-full entries.
pub fn variety_conditions(family: &RankedEssentialFamily) -> Vec<FacetInequality> {
    connected_entries(family)
        .into_iter()
        .filter(|e| !e.interval.is_full())
        .map(|e| FacetInequality {
            interval: e.interval,
            rank: e.rank,
        })
        .collect()
}

fn check_bound(n: usize, bound: usize) -> Result<(), GeometryError> {
    if n > bound.min(63) {
        Err(GeometryError::TooLarge { n, bound })
    } else {
        Ok(())
    }
}

/// All `k`-subsets of `[n]` as masks, in increasing mask order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let first = if k > n { limit } else { (1u64 << k) - 1 };
    let mut cur = Some(first).filter(|&m| m < limit);
    std::iter::from_fn(move || {
        let m = cur?;
        cur = if m == 0 {
            None
        } else {
            // next mask with the same popcount
            let low = m & m.wrapping_neg();
            let ripple = m + low;
            let next = (((ripple ^ m) >> 2) / low) | ripple;
            Some(next).filter(|&x| x < limit)
        };
        Some(m)
    })
}

/// Elements of a mask, ascending.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

/// Sorts masks lexicographically by their ascending element lists.
pub fn sort_lex(masks: &mut [u64]) {
    masks.sort_by_cached_key(|&m| mask_elements(m));
}

/// Bases `B` with `|B ∩ I| ≤ rank(I)` for every cyclic interval `I`, using the
/// default bound.
pub fn bases(family: &RankedEssentialFamily) -> Result<Vec<u64>, GeometryError> {
    bases_bounded(family, BASES_BOUND)
}

pub fn bases_bounded(
    family: &RankedEssentialFamily,
    bound: usize,
) -> Result<Vec<u64>, GeometryError> {
    let n = family.n();
    check_bound(n, bound)?;
    let limits: Vec<(u64, u32)> = CyclicInterval::all(n)
        .map(|iv| (iv.mask(), rank_from_family(family, &iv) as u32))
        .collect();
    let candidates: Vec<u64> = k_subsets(n, family.k()).collect();
    let mut out: Vec<u64> = candidates
        .into_par_iter()
        .filter(|&b| limits.iter().all(|&(m, r)| (b & m).count_ones() <= r))
        .collect();
    sort_lex(&mut out);
    Ok(out)
}

/// Basis exchange: for `A, B` and `a ∈ A \ B` there is `b ∈ B \ A` with
/// `A − a + b` a basis.
pub fn satisfies_exchange(bases: &[u64]) -> bool {
    let set: HashSet<u64> = bases.iter().copied().collect();
    bases.par_iter().all(|&a| {
        bases.iter().all(|&b| {
            let (only_a, only_b) = (a & !b, b & !a);
            mask_elements(only_a).into_iter().all(|x| {
                mask_elements(only_b)
                    .into_iter()
                    .any(|y| set.contains(&((a & !(1 << (x - 1))) | 1 << (y - 1))))
            })
        })
    })
}

/// Which candidates count as codimension-one boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryFilter {
    /// Same rank, length one more, interval ranks dominated, same loops.
    #[default]
    PreserveLoops,
    /// Same rank, length one more, interval ranks dominated.
    All,
}

/// Permutations `q` with `rank(q) = rank(p)`, `ℓ(q) = ℓ(p) + 1` and
/// `rank_q(I) ≤ rank_p(I)` on every cyclic interval, in lexicographic order.
pub fn codim1_boundaries(
    p: &BoundedAffinePermutation,
    filter: BoundaryFilter,
    bound: usize,
) -> Result<Vec<BoundedAffinePermutation>, GeometryError> {
    let n = p.n();
    if n > bound {
        return Err(GeometryError::TooLarge { n, bound });
    }
    let (k, len) = (p.rank(), length(p));
    let intervals: Vec<CyclicInterval> = CyclicInterval::all(n).collect();
    let ranks: Vec<usize> = intervals.iter().map(|iv| p.rank_interval(iv)).collect();
    let loops = p.loops();
    let shards: Vec<Vec<BoundedAffinePermutation>> = (1..=1 + n as Lift)
        .into_par_iter()
        .map(|first| {
            BoundedAffinePermutations::with_first(n, first)
                .filter(|q| q.rank() == k && length(q) == len + 1)
                .filter(|q| filter == BoundaryFilter::All || q.loops() == loops)
                .filter(|q| {
                    intervals
                        .iter()
                        .zip(&ranks)
                        .all(|(iv, &r)| q.rank_interval(iv) <= r)
                })
                .collect()
        })
        .collect();
    Ok(shards.into_iter().flatten().collect())
}

pub fn codim1_boundary_count(p: &BoundedAffinePermutation) -> Result<usize, GeometryError> {
    codim1_boundaries(p, BoundaryFilter::default(), BOUNDARY_BOUND).map(|v| v.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::ranked_essential_family;

    fn example() -> BoundedAffinePermutation {
        BoundedAffinePermutation::from_window(vec![3, 4, 8, 7, 6, 9, 10, 13]).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(length(&example()), 5);
        assert_eq!(length(&BoundedAffinePermutation::identity(6)), 0);
        for k in 0..=6 {
            assert_eq!(length(&BoundedAffinePermutation::uniform(k, 6)), 0);
        }
    }

    #[test]
    fn codims() {
        let f = ranked_essential_family(&example());
        assert_eq!(codim_from_family(&f), 5);
        assert_eq!(codim_from_core(&f), 5);
        assert_eq!(codim_from_family(&RankedEssentialFamily::uniform(2, 5)), 0);
    }

    #[test]
    fn subsets() {
        assert_eq!(k_subsets(5, 2).count(), 10);
        assert_eq!(k_subsets(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(k_subsets(4, 4).collect::<Vec<_>>(), vec![15]);
        assert_eq!(k_subsets(3, 4).count(), 0);
        let mut v: Vec<u64> = k_subsets(4, 2).collect();
        sort_lex(&mut v);
        assert_eq!(mask_elements(v[0]), vec![1, 2]);
        assert_eq!(mask_elements(v[5]), vec![3, 4]);
    }

    #[test]
    fn example_bases() {
        let f = ranked_essential_family(&example());
        let b = bases(&f).unwrap();
        assert!(!b.is_empty());
        assert!(b.iter().all(|&m| m & 0b110000 != 0b110000));
        assert!(satisfies_exchange(&b));
        assert_eq!(facet_system(&f).lattice_points().unwrap(), b);
        assert_eq!(
            bases(&RankedEssentialFamily::uniform(2, 4)).unwrap().len(),
            6
        );
        assert!(matches!(
            bases(&RankedEssentialFamily::uniform(2, 17)),
            Err(GeometryError::TooLarge { .. })
        ));
    }

    #[test]
    fn facets() {
        let f = ranked_essential_family(&example());
        let fs = facet_system(&f);
        assert_eq!(fs.inequalities.len(), 3);
        assert_eq!(variety_conditions(&f).len(), 3);
        assert!(facet_system(&RankedEssentialFamily::uniform(2, 5))
            .inequalities
            .is_empty());
        let h = fs.to_h_rep();
        assert_eq!(h.lines().count(), 1 + 2 * 8 + 1 + 3);
        assert!(h.contains("0 0 0 0 1 1 0 0 <= 1"));
    }

    #[test]
    fn exchange_detects_failure() {
        // {1,2} and {3,4} alone violate exchange
        assert!(!satisfies_exchange(&[0b0011, 0b1100]));
    }

    #[test]
    fn point_cells_have_no_boundary() {
        // element 1 a loop, element 2 a coloop: codimension k(n − k)
        let p = BoundedAffinePermutation::from_window(vec![1, 4]).unwrap();
        assert_eq!(length(&p), 1);
        assert_eq!(
            codim1_boundaries(&p, BoundaryFilter::All, 9).unwrap().len(),
            0
        );
    }
}
