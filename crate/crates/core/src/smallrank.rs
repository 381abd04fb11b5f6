//! Deficient flats and the rank-2 positroid criterion.

use serde::Serialize;
use thiserror::Error;

use crate::essential::RankedEssentialFamily;
use crate::geometry::{bases_bounded, mask_elements, GeometryError, BASES_BOUND};
use crate::interval::CyclicInterval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmallRankError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("matroid does not have rank 2")]
    NotRank2,
    #[error("matroid has loops")]
    HasLoop,
    #[error("classes and loops do not partition [1, {n}]: {reason}")]
    MalformedPartition { n: usize, reason: String },
}

/// Hard cap for the flat search, which tabulates every subset of `[n]`.
pub const FLATS_MAX: usize = 24;

/// A flat `F` with `rank(F) < |F|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DeficientFlat {
    pub rank: usize,
    pub set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficientFlatFamily {
    pub n: usize,
    pub entries: Vec<DeficientFlat>,
}

impl DeficientFlatFamily {
    /// Whether every flat in the family is a cyclic interval.
    pub fn all_cyclic_intervals(&self) -> bool {
        self.entries
            .iter()
            .all(|f| as_cyclic_interval(self.n, &f.set).is_some())
    }
}

/// The cyclic interval with exactly these elements, if there is one.
pub fn as_cyclic_interval(n: usize, set: &[usize]) -> Option<CyclicInterval> {
    if set.is_empty() {
        return None;
    }
    if set.len() == n {
        return Some(CyclicInterval::full(n));
    }
    let mut member = vec![false; n + 1];
    for &x in set {
        member[x] = true;
    }
    // the start is the unique member whose predecessor is missing
    let pred = |x: usize| if x == 1 { n } else { x - 1 };
    let mut starts = set.iter().filter(|&&x| !member[pred(x)]);
    let start = *starts.next()?;
    starts
        .next()
        .is_none()
        .then(|| CyclicInterval::new(n, start, set.len()).ok())
        .flatten()
}

/// Flats of rank below their size, from the bases of the family, using the
/// default bound.
pub fn deficient_flats(
    family: &RankedEssentialFamily,
) -> Result<DeficientFlatFamily, SmallRankError> {
    deficient_flats_bounded(family, BASES_BOUND)
}

pub fn deficient_flats_bounded(
    family: &RankedEssentialFamily,
    bound: usize,
) -> Result<DeficientFlatFamily, SmallRankError> {
    let n = family.n();
    let bound = bound.min(FLATS_MAX);
    if n > bound {
        return Err(GeometryError::TooLarge { n, bound }.into());
    }
    let bases = bases_bounded(family, bound)?;
    let size = 1usize << n;
    let mut independent = vec![false; size];
    for &b in &bases {
        independent[b as usize] = true;
    }
    // subsets of independent sets are independent
    for m in (0..size).rev() {
        if independent[m] {
            for x in 0..n {
                if m >> x & 1 == 1 {
                    independent[m & !(1 << x)] = true;
                }
            }
        }
    }
    let mut rank = vec![0u8; size];
    for m in 1..size {
        rank[m] = if independent[m] {
            m.count_ones() as u8
        } else {
            (0..n)
                .filter(|x| m >> x & 1 == 1)
                .map(|x| rank[m & !(1 << x)])
                .max()
                .unwrap_or(0)
        };
    }
    let mut entries: Vec<DeficientFlat> = (0..size)
        .filter(|&m| (rank[m] as u32) < m.count_ones())
        .filter(|&m| (0..n).all(|x| m >> x & 1 == 1 || rank[m | 1 << x] > rank[m]))
        .map(|m| DeficientFlat {
            rank: rank[m] as usize,
            set: mask_elements(m as u64),
        })
        .collect();
    entries.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
    Ok(DeficientFlatFamily { n, entries })
}

/// A rank-2 matroid given by its parallel classes and loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Matroid {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl Rank2Matroid {
    /// Requires a partition of `[n]` into at least two parallel classes and no
    /// loops.
    pub fn new(
        n: usize,
        classes: Vec<Vec<usize>>,
        loops: Vec<usize>,
    ) -> Result<Self, SmallRankError> {
        let mut seen = vec![false; n + 1];
        for &x in classes.iter().flatten().chain(&loops) {
            if !(1..=n).contains(&x) {
                return Err(SmallRankError::MalformedPartition {
                    n,
                    reason: format!("element {x} out of range"),
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(SmallRankError::MalformedPartition {
                    n,
                    reason: format!("element {x} repeated"),
                });
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(SmallRankError::MalformedPartition {
                n,
                reason: format!("element {x} missing"),
            });
        }
        if classes.iter().any(Vec::is_empty) {
            return Err(SmallRankError::MalformedPartition {
                n,
                reason: "empty class".into(),
            });
        }
        if !loops.is_empty() {
            return Err(SmallRankError::HasLoop);
        }
        if classes.len() < 2 {
            return Err(SmallRankError::NotRank2);
        }
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort();
        Ok(Self { n, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Parallel classes of size at least two (rank 1) and the whole ground
    /// set when it has more than two elements (rank 2).
    pub fn deficient_flats(&self) -> DeficientFlatFamily {
        let mut entries: Vec<DeficientFlat> = self
            .classes
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| DeficientFlat {
                rank: 1,
                set: c.clone(),
            })
            .collect();
        if self.n > 2 {
            entries.push(DeficientFlat {
                rank: 2,
                set: (1..=self.n).collect(),
            });
        }
        entries.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
        DeficientFlatFamily { n: self.n, entries }
    }
}

/// A loopless rank-2 matroid is a positroid exactly when its deficient flats
/// are cyclic intervals.
pub fn is_positroid_rank2(flats: &DeficientFlatFamily) -> Result<bool, SmallRankError> {
    if flats.entries.iter().any(|f| f.rank == 0) {
        return Err(SmallRankError::HasLoop);
    }
    if flats.entries.iter().any(|f| f.rank > 2)
        || (flats.n > 2
            && !flats
                .entries
                .iter()
                .any(|f| f.rank == 2 && f.set.len() == flats.n))
    {
        return Err(SmallRankError::NotRank2);
    }
    Ok(flats.all_cyclic_intervals())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::essential::Entry;

    fn fam(n: usize, k: usize, sets: &[(usize, usize, usize)]) -> RankedEssentialFamily {
        RankedEssentialFamily::new(
            n,
            k,
            sets.iter()
                .map(|&(r, s, l)| Entry::new(r, CyclicInterval::new(n, s, l).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn cyclic_interval_detection() {
        assert_eq!(
            as_cyclic_interval(8, &[7, 8, 1]),
            Some(CyclicInterval::new(8, 7, 3).unwrap())
        );
        assert_eq!(as_cyclic_interval(8, &[1, 3]), None);
        assert_eq!(
            as_cyclic_interval(4, &[1, 2, 3, 4]),
            Some(CyclicInterval::full(4))
        );
        assert_eq!(as_cyclic_interval(4, &[]), None);
    }

    #[test]
    fn rank3_flat_outside_family() {
        let f = fam(7, 3, &[(1, 1, 2), (2, 1, 5), (2, 5, 5)]);
        let flats = deficient_flats(&f).unwrap();
        assert!(flats.entries.contains(&DeficientFlat {
            rank: 1,
            set: vec![1, 2, 5]
        }));
        assert!(!flats.entries.iter().any(|d| d.set == vec![1, 2]));
    }

    #[test]
    fn uniform_rank2() {
        let flats = deficient_flats(&RankedEssentialFamily::uniform(2, 5)).unwrap();
        assert_eq!(
            flats.entries,
            vec![DeficientFlat {
                rank: 2,
                set: vec![1, 2, 3, 4, 5]
            }]
        );
    }

    #[test]
    fn rank2_criterion() {
        let m = Rank2Matroid::new(5, vec![vec![1, 2], vec![3], vec![4, 5]], vec![]).unwrap();
        assert_eq!(is_positroid_rank2(&m.deficient_flats()), Ok(true));
        let m = Rank2Matroid::new(4, vec![vec![1, 3], vec![2], vec![4]], vec![]).unwrap();
        assert_eq!(is_positroid_rank2(&m.deficient_flats()), Ok(false));
        assert_eq!(
            Rank2Matroid::new(4, vec![vec![1, 2, 3, 4]], vec![]),
            Err(SmallRankError::NotRank2)
        );
        assert_eq!(
            Rank2Matroid::new(3, vec![vec![1], vec![2]], vec![3]),
            Err(SmallRankError::HasLoop)
        );
        assert!(matches!(
            Rank2Matroid::new(3, vec![vec![1], vec![2]], vec![]),
            Err(SmallRankError::MalformedPartition { .. })
        ));
    }
}
