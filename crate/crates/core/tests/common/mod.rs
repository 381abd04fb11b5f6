#![allow(dead_code)]

use positroid::essential::Entry;
use positroid::{
    BoundedAffinePermutation, BoundedAffinePermutations, CyclicInterval, RankedEssentialFamily,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn iv(n: usize, start: usize, len: usize) -> CyclicInterval {
    CyclicInterval::new(n, start, len).unwrap()
}

pub fn fam(n: usize, k: usize, sets: &[(usize, usize, usize)]) -> RankedEssentialFamily {
    RankedEssentialFamily::new(
        n,
        k,
        sets.iter().map(|&(r, s, l)| Entry::new(r, iv(n, s, l))),
    )
    .unwrap()
}

pub fn perm(window: &[i64]) -> BoundedAffinePermutation {
    BoundedAffinePermutation::from_window(window.to_vec()).unwrap()
}

pub fn all_perms(n: usize) -> Vec<BoundedAffinePermutation> {
    BoundedAffinePermutations::new(n).collect()
}

/// Number of bounded affine permutations of `[n]`: fixed points of a
/// permutation are two-coloured.
pub fn count_oracle(n: usize) -> u64 {
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    let mut derange = vec![1u64, 0];
    for m in 2..=n as u64 {
        let next = (m - 1) * (derange[m as usize - 1] + derange[m as usize - 2]);
        derange.push(next);
    }
    (0..=n as u64)
        .map(|f| binom(n as u64, f) * derange[(n as u64 - f) as usize] * (1 << f))
        .sum()
}

/// A uniformly random permutation of `[n]`, fixed points sent to loops or
/// coloops at random.
pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> BoundedAffinePermutation {
    let mut sigma: Vec<usize> = (1..=n).collect();
    sigma.shuffle(rng);
    let window = (1..=n)
        .map(|i| {
            let s = sigma[i - 1];
            let shift = if s == i {
                if rng.gen_bool(0.5) {
                    n
                } else {
                    0
                }
            } else {
                (s + n - i) % n
            };
            (i + shift) as i64
        })
        .collect();
    BoundedAffinePermutation::from_window(window).unwrap()
}

pub fn members(i: &CyclicInterval) -> Vec<usize> {
    i.members().collect()
}

/// `min(|I|, min over entries (r + |I \ J|))`, by explicit set difference.
pub fn brute_rank(f: &RankedEssentialFamily, i: &CyclicInterval) -> usize {
    let set = members(i);
    f.entries()
        .iter()
        .map(|e| {
            let other = members(&e.interval);
            e.rank + set.iter().filter(|x| !other.contains(x)).count()
        })
        .fold(set.len(), usize::min)
}

/// Whether some nonempty pairwise-disjoint family of entries strictly inside
/// `e` reproduces its rank additively.
pub fn brute_decomposable(f: &RankedEssentialFamily, e: &Entry) -> bool {
    let inside: Vec<&Entry> = f
        .entries()
        .iter()
        .filter(|j| {
            j.interval != e.interval
                && members(&j.interval)
                    .iter()
                    .all(|x| e.interval.contains(*x as i64))
        })
        .collect();
    (1u32..1 << inside.len()).any(|pick| {
        let chosen: Vec<&Entry> = (0..inside.len())
            .filter(|b| pick >> b & 1 == 1)
            .map(|b| inside[b])
            .collect();
        let mut covered: Vec<usize> = chosen.iter().flat_map(|j| members(&j.interval)).collect();
        let total = covered.len();
        covered.sort_unstable();
        covered.dedup();
        if covered.len() != total {
            return false;
        }
        let ranks: usize = chosen.iter().map(|j| j.rank).sum();
        e.rank == ranks + e.interval.len() - covered.len()
    })
}

/// Bases of the positroid as bitmasks: `k`-sets meeting every cyclic interval
/// in at most its rank.
pub fn brute_bases(p: &BoundedAffinePermutation) -> Vec<u64> {
    let n = p.n();
    let k = p.rank();
    let caps: Vec<(u64, usize)> = CyclicInterval::all(n)
        .map(|i| (i.mask(), p.rank_interval(&i)))
        .collect();
    let mut out: Vec<u64> = (0u64..1 << n)
        .filter(|b| b.count_ones() as usize == k)
        .filter(|b| {
            caps.iter()
                .all(|&(m, r)| (b & m).count_ones() as usize <= r)
        })
        .collect();
    out.sort_by_key(|b| {
        let mut v: Vec<u32> = (0..n as u32).filter(|x| b >> x & 1 == 1).collect();
        v.resize(n, u32::MAX);
        v
    });
    out
}

pub fn family_key(f: &RankedEssentialFamily) -> (usize, Vec<(usize, usize, usize)>) {
    let mut v: Vec<_> = f
        .entries()
        .iter()
        .map(|e| (e.rank, e.interval.start(), e.interval.len()))
        .collect();
    v.sort_unstable();
    (f.k(), v)
}
