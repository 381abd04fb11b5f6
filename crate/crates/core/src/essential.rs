//! Ranked essential families: rank reconstruction, connectedness, excess,
//! core, axiomatic validation and the family → permutation map.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::interval::{CyclicInterval, Lift};
use crate::perm::BoundedAffinePermutation;

/// A ranked cyclic interval `(r, I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub rank: usize,
    pub interval: CyclicInterval,
}

impl Entry {
    pub fn new(rank: usize, interval: CyclicInterval) -> Self {
        Self { rank, interval }
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by interval `(start, len)`, then rank.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.interval, self.rank).cmp(&(other.interval, other.rank))
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.interval)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("entry {entry} lives on a ground set of size {found}, expected {expected}")]
    SizeMismatch {
        entry: String,
        expected: usize,
        found: usize,
    },
    #[error("interval {0} appears more than once")]
    DuplicateInterval(String),
    #[error("full-set entry has rank {found} but k = {k}")]
    FullRankMismatch { k: usize, found: usize },
    #[error("family does not satisfy the axioms: {0} violation(s)")]
    NotValidated(usize),
}

/// A set of `(r, I)` with pairwise distinct intervals that always contains
/// `(k, [1, n])`. Nothing else is assumed until [`validate_chess`] passes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankedEssentialFamily {
    n: usize,
    k: usize,
    entries: Vec<Entry>,
}

impl RankedEssentialFamily {
    /// Builds a family, adding `(k, [1, n])` when absent.
    pub fn new<E>(n: usize, k: usize, entries: E) -> Result<Self, FamilyError>
    where
        E: IntoIterator<Item = Entry>,
    {
        let mut by_interval = BTreeMap::new();
        for e in entries {
            if e.interval.n() != n {
                return Err(FamilyError::SizeMismatch {
                    entry: e.to_string(),
                    expected: n,
                    found: e.interval.n(),
                });
            }
            if e.interval.is_full() && e.rank != k {
                return Err(FamilyError::FullRankMismatch { k, found: e.rank });
            }
            if by_interval.insert(e.interval, e).is_some() {
                return Err(FamilyError::DuplicateInterval(e.interval.to_string()));
            }
        }
        let full = CyclicInterval::full(n);
        by_interval.entry(full).or_insert(Entry::new(k, full));
        Ok(Self {
            n,
            k,
            entries: by_interval.into_values().collect(),
        })
    }

    /// The family `{(k, [1, n])}` of the uniform matroid.
    pub fn uniform(k: usize, n: usize) -> Self {
        Self::new(n, k, []).expect("single entry is well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Entries in canonical interval order.
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn full_entry(&self) -> Entry {
        Entry::new(self.k, CyclicInterval::full(self.n))
    }

    pub fn non_full(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.interval.is_full())
    }

    pub fn get(&self, interval: &CyclicInterval) -> Option<usize> {
        self.entries
            .binary_search_by(|e| e.interval.cmp(interval))
            .ok()
            .map(|pos| self.entries[pos].rank)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The sub-family on the given entries (the full entry is kept).
    pub fn restrict<'a, E>(&self, entries: E) -> Self
    where
        E: IntoIterator<Item = &'a Entry>,
    {
        Self::new(self.n, self.k, entries.into_iter().copied())
            .expect("subset of a well-formed family")
    }
}

impl fmt::Display for RankedEssentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, e) in self.entries.iter().enumerate() {
            if pos > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// `min{ r + |I \ J| : (r, J) ∈ F ∪ {(0, ∅)} }`.
pub fn rank_from_family(family: &RankedEssentialFamily, interval: &CyclicInterval) -> usize {
    family
        .entries
        .iter()
        .map(|e| e.rank + interval.difference_len(&e.interval))
        .fold(interval.len(), usize::min)
}

/// Maximum total weight of pairwise disjoint items on a line of positions
/// `0..len`. Items are `(first, last, weight)` with `first ≤ last < len`.
/// With `nonempty`, at least one item must be chosen (`None` if impossible).
fn max_disjoint(len: usize, items: &[(usize, usize, i64)], nonempty: bool) -> Option<i64> {
    let mut by_end: Vec<Vec<(usize, i64)>> = vec![Vec::new(); len + 1];
    for &(first, last, w) in items {
        by_end[last + 1].push((first, w));
    }
    // any[p]: best over positions < p; some[p]: same with at least one item
    let mut any = vec![0i64; len + 1];
    let mut some: Vec<Option<i64>> = vec![None; len + 1];
    for p in 1..=len {
        any[p] = any[p - 1];
        some[p] = some[p - 1];
        for &(first, w) in &by_end[p] {
            any[p] = any[p].max(any[first] + w);
            let cand = any[first] + w;
            some[p] = Some(some[p].map_or(cand, |s| s.max(cand)));
        }
    }
    if nonempty {
        some[len]
    } else {
        Some(any[len])
    }
}

/// Best disjoint selection of non-full entries around the whole cycle.
/// `weight` gives each entry's value; the full entry is handled by callers.
fn max_disjoint_cyclic<W>(n: usize, entries: &[&Entry], weight: W, nonempty: bool) -> Option<i64>
where
    W: Fn(&Entry) -> i64,
{
    // Any non-empty disjoint selection has a member starting at some c whose
    // predecessor is not covered together with c, so cutting the cycle right
    // before c loses nothing.
    let mut best: Option<i64> = if nonempty { None } else { Some(0) };
    for c in 1..=n {
        let items: Vec<(usize, usize, i64)> = entries
            .iter()
            .filter_map(|e| {
                let first = (e.interval.start() as Lift - c as Lift).rem_euclid(n as Lift) as usize;
                let last = first + e.interval.len() - 1;
                (last < n).then(|| (first, last, weight(e)))
            })
            .collect();
        if let Some(v) = max_disjoint(n, &items, nonempty) {
            best = Some(best.map_or(v, |b| b.max(v)));
        }
    }
    best
}

/// Rank of `I` from connected entries only: the minimum of
/// `Σ r_a + |I \ ∪ I_a|` over pairwise disjoint connected entries.
pub fn rank_from_connected(family: &RankedEssentialFamily, interval: &CyclicInterval) -> usize {
    let connected = connected_entries(family);
    rank_from_entries(family.n, &connected, interval)
}

/// Disjoint-subfamily rank formula over an explicit list of entries.
pub fn rank_from_entries(n: usize, entries: &[Entry], interval: &CyclicInterval) -> usize {
    let size = interval.len() as i64;
    let saving = |e: &Entry| e.interval.intersection_len(interval) as i64 - e.rank as i64;
    let parts: Vec<&Entry> = entries.iter().filter(|e| !e.interval.is_full()).collect();
    let mut best = max_disjoint_cyclic(n, &parts, saving, false).unwrap_or(0);
    if let Some(full) = entries.iter().find(|e| e.interval.is_full()) {
        best = best.max(saving(full));
    }
    (size - best.max(0)) as usize
}

/// Smallest value of `Σ r_a + |I \ ∪ I_a|` over non-empty pairwise disjoint
/// sub-families of entries strictly inside `I`.
fn best_decomposition(family: &RankedEssentialFamily, target: &Entry) -> Option<i64> {
    let iv = &target.interval;
    let inside: Vec<&Entry> = family
        .entries
        .iter()
        .filter(|e| e.interval.is_proper_subset(iv))
        .collect();
    let saving = |e: &Entry| e.interval.len() as i64 - e.rank as i64;
    let best = if iv.is_full() {
        max_disjoint_cyclic(family.n, &inside, saving, true)
    } else {
        let items: Vec<(usize, usize, i64)> = inside
            .iter()
            .map(|e| {
                let first = (e.interval.start() as Lift - iv.start() as Lift)
                    .rem_euclid(family.n as Lift) as usize;
                (first, first + e.interval.len() - 1, saving(e))
            })
            .collect();
        max_disjoint(iv.len(), &items, true)
    };
    best.map(|s| iv.len() as i64 - s)
}

/// Whether an entry admits no decomposition into pairwise disjoint smaller
/// entries `I_a ⊆ I` with `r = Σ r_a + |I \ ∪ I_a|`. The full entry carries
/// the ambient condition `Σ x = k` and always counts as connected.
pub fn is_connected(family: &RankedEssentialFamily, entry: &Entry) -> bool {
    entry.interval.is_full() || best_decomposition(family, entry) != Some(entry.rank as i64)
}

/// Whether a decomposition into disjoint smaller entries reproduces the
/// entry's rank; for the full entry this is the literal test.
pub fn is_decomposable(family: &RankedEssentialFamily, entry: &Entry) -> bool {
    best_decomposition(family, entry) == Some(entry.rank as i64)
}

/// The connected entries, in canonical order.
pub fn connected_entries(family: &RankedEssentialFamily) -> Vec<Entry> {
    family
        .entries
        .iter()
        .filter(|e| is_connected(family, e))
        .copied()
        .collect()
}

/// Excess `e_I = |I| − r − Σ_{J ⊊ I} e_J` for every entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcessTable {
    values: BTreeMap<CyclicInterval, i64>,
}

impl ExcessTable {
    pub fn get(&self, interval: &CyclicInterval) -> Option<i64> {
        self.values.get(interval).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CyclicInterval, &i64)> {
        self.values.iter()
    }
}

pub fn excess(family: &RankedEssentialFamily) -> ExcessTable {
    let mut order: Vec<&Entry> = family.entries.iter().collect();
    order.sort_by_key(|e| (e.interval.len(), e.interval));
    let mut values: BTreeMap<CyclicInterval, i64> = BTreeMap::new();
    for e in order {
        let below: i64 = values
            .iter()
            .filter(|(j, _)| j.is_proper_subset(&e.interval))
            .map(|(_, v)| v)
            .sum();
        values.insert(e.interval, e.interval.len() as i64 - e.rank as i64 - below);
    }
    ExcessTable { values }
}

/// Entries with positive excess, together with the full entry, which anchors
/// every retrieval.
pub fn core(family: &RankedEssentialFamily) -> Vec<Entry> {
    let table = excess(family);
    family
        .entries
        .iter()
        .filter(|e| e.interval.is_full() || table.get(&e.interval).is_some_and(|v| v > 0))
        .copied()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    E1,
    E2,
    E3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    /// `0 ≤ k ≤ n` fails.
    FullRankOutOfRange,
    /// `|I| > r` fails.
    RankNotBelowSize,
    /// `|[n] \ I| ≥ k − r > 0` fails.
    ComplementBound,
    /// `0 < r2 − r1 < |I2 \ I1|` fails for nested entries.
    NestedRankGap,
    /// No entry contains the union of the pair.
    NoContainingEntry,
    /// `r1 + r2 ≥ r3 − r4 − |gap \ I4|` fails for a disjoint pair.
    DisjointPair,
    /// `r1 + r2 ≥ r3 + r4 + |I1 ∩ I2 \ I4|` fails for an overlapping pair.
    OverlappingPair,
    /// `r1 + r2 ≥ k + r4 + |X \ I4|` fails for a piece `X` of an intersection
    /// of two entries covering `[n]` that meet in two arcs.
    TwoPieceIntersection,
}

/// A failed axiom with the entries involved (in the order of the inequality;
/// the empty fallback entry is omitted).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub rule: Rule,
    pub kind: ViolationKind,
    pub entries: Vec<Entry>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?}:", self.rule, self.kind)?;
        for e in &self.entries {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

/// Checks the axioms E1–E3 and returns every violation, sorted.
pub fn validate_chess(family: &RankedEssentialFamily) -> Vec<Violation> {
    let n = family.n;
    let k = family.k;
    let full = family.full_entry();
    let mut out = Vec::new();
    let mut push = |rule, kind, entries: Vec<Entry>| {
        out.push(Violation {
            rule,
            kind,
            entries,
        })
    };

    if k > n {
        push(Rule::E1, ViolationKind::FullRankOutOfRange, vec![full]);
    }
    let parts: Vec<Entry> = family.non_full().copied().collect();
    for e in &parts {
        if e.interval.len() <= e.rank {
            push(Rule::E1, ViolationKind::RankNotBelowSize, vec![*e]);
        }
        let co = n - e.interval.len();
        if !(k > e.rank && co >= k - e.rank) {
            push(Rule::E1, ViolationKind::ComplementBound, vec![*e]);
        }
    }

    for a in &parts {
        for b in &family.entries {
            if !a.interval.is_proper_subset(&b.interval) {
                continue;
            }
            // against the full entry only positivity is required here; the
            // upper bound is the non-strict complement bound of E1
            let ok = b.rank > a.rank
                && (b.interval.is_full()
                    || b.rank - a.rank < b.interval.difference_len(&a.interval));
            if !ok {
                push(Rule::E2, ViolationKind::NestedRankGap, vec![*a, *b]);
            }
        }
    }

    let minimal_containing = |s: &CyclicInterval| -> Vec<Entry> {
        let cands: Vec<&Entry> = family
            .entries
            .iter()
            .filter(|e| s.is_subset(&e.interval))
            .collect();
        cands
            .iter()
            .filter(|a| {
                !cands
                    .iter()
                    .any(|b| b.interval.is_proper_subset(&a.interval))
            })
            .map(|a| **a)
            .collect()
    };
    // maximal entries inside a region; `None` stands for the empty fallback
    let maximal_contained = |s: Option<&CyclicInterval>| -> Vec<Option<Entry>> {
        let Some(s) = s else { return vec![None] };
        let cands: Vec<&Entry> = family
            .entries
            .iter()
            .filter(|e| e.interval.is_subset(s))
            .collect();
        let max: Vec<Option<Entry>> = cands
            .iter()
            .filter(|a| {
                !cands
                    .iter()
                    .any(|b| a.interval.is_proper_subset(&b.interval))
            })
            .map(|a| Some(**a))
            .collect();
        if max.is_empty() {
            vec![None]
        } else {
            max
        }
    };
    let outside = |s: Option<&CyclicInterval>, e: &Option<Entry>| -> usize {
        match (s, e) {
            (None, _) => 0,
            (Some(s), None) => s.len(),
            (Some(s), Some(e)) => s.difference_len(&e.interval),
        }
    };

    for e1 in &parts {
        let (i1, len1) = (e1.interval.start() as Lift, e1.interval.len());
        let pos = |x: Lift| (x - i1).rem_euclid(n as Lift) as usize;
        for e2 in &parts {
            if e1 == e2 {
                continue;
            }
            let i2 = e2.interval.start() as Lift;
            let (p_i2, p_j1) = (pos(i2), len1 - 1);
            let p_j2 = p_i2 + e2.interval.len() - 1;
            if p_i2 == 0 || p_j2 >= n || p_j1 >= p_j2 {
                continue;
            }
            let span = CyclicInterval::from_lift(n, i1, p_j2 + 1).expect("span length in range");
            let containing = minimal_containing(&span);
            if containing.is_empty() {
                push(Rule::E3, ViolationKind::NoContainingEntry, vec![*e1, *e2]);
                continue;
            }
            let (r1, r2) = (e1.rank as i64, e2.rank as i64);
            if p_j1 < p_i2 {
                let gap_len = p_i2 - p_j1 - 1;
                let gap = (gap_len > 0).then(|| {
                    CyclicInterval::from_lift(n, i1 + len1 as Lift, gap_len).expect("gap in range")
                });
                for e3 in &containing {
                    for e4 in maximal_contained(gap.as_ref()) {
                        let r4 = e4.map_or(0, |e| e.rank) as i64;
                        let rhs = e3.rank as i64 - r4 - outside(gap.as_ref(), &e4) as i64;
                        if r1 + r2 < rhs {
                            let mut es = vec![*e1, *e2, *e3];
                            es.extend(e4);
                            push(Rule::E3, ViolationKind::DisjointPair, es);
                        }
                    }
                }
            } else {
                let inter = CyclicInterval::from_lift(n, i2, p_j1 - p_i2 + 1)
                    .expect("intersection in range");
                for e3 in &containing {
                    for e4 in maximal_contained(Some(&inter)) {
                        let r4 = e4.map_or(0, |e| e.rank) as i64;
                        let rhs = e3.rank as i64 + r4 + outside(Some(&inter), &e4) as i64;
                        if r1 + r2 < rhs {
                            let mut es = vec![*e1, *e2, *e3];
                            es.extend(e4);
                            push(Rule::E3, ViolationKind::OverlappingPair, es);
                        }
                    }
                }
            }
        }
    }

    for (pos, e1) in parts.iter().enumerate() {
        for e2 in &parts[pos + 1..] {
            let (a, b) = (&e1.interval, &e2.interval);
            if a.len() + b.len() - a.intersection_len(b) != n {
                continue;
            }
            let pieces = intersection_runs(a, b);
            if pieces.len() != 2 {
                continue;
            }
            let (r1, r2) = (e1.rank as i64, e2.rank as i64);
            for x in &pieces {
                for e4 in maximal_contained(Some(x)) {
                    let r4 = e4.map_or(0, |e| e.rank) as i64;
                    if r1 + r2 < k as i64 + r4 + outside(Some(x), &e4) as i64 {
                        let mut es = vec![*e1, *e2];
                        es.extend(e4);
                        push(Rule::E3, ViolationKind::TwoPieceIntersection, es);
                    }
                }
            }
        }
    }

    out.sort();
    out.dedup();
    out
}

// Maximal runs of `a ∩ b`, read along `a`.
fn intersection_runs(a: &CyclicInterval, b: &CyclicInterval) -> Vec<CyclicInterval> {
    let n = a.n();
    let mut runs = Vec::new();
    let mut current: Option<(Lift, usize)> = None;
    for x in a.lifts() {
        if b.contains(x) {
            current = Some(current.map_or((x, 1), |(s, l)| (s, l + 1)));
        } else if let Some((s, l)) = current.take() {
            runs.push((s, l));
        }
    }
    runs.extend(current);
    runs.into_iter()
        .map(|(s, l)| CyclicInterval::from_lift(n, s, l).expect("run inside an interval"))
        .collect()
}

/// The rank function `r([i, j]) = min{ |[i, j]|, r + |[i, j] \ I| }` of a
/// validated family, extended to lengths `0..=n` on integer lifts.
#[derive(Debug, Clone)]
pub struct AxiomRank<'a> {
    family: &'a RankedEssentialFamily,
}

impl AxiomRank<'_> {
    /// Rank of the interval starting at lift `start` with `len` elements;
    /// lengths beyond `n` are clipped and length `0` has rank `0`.
    pub fn rank(&self, start: Lift, len: usize) -> usize {
        if len == 0 {
            return 0;
        }
        let iv = CyclicInterval::from_lift(self.family.n, start, len).expect("clipped length");
        rank_from_family(self.family, &iv)
    }
}

pub fn rank_function_from_axioms(
    family: &RankedEssentialFamily,
) -> Result<AxiomRank<'_>, FamilyError> {
    let violations = validate_chess(family);
    if violations.is_empty() {
        Ok(AxiomRank { family })
    } else {
        Err(FamilyError::NotValidated(violations.len()))
    }
}

/// `π(i) = min{ j ≥ i : r([i, j]) = r([i + 1, j]) }` for the axiom rank function.
pub fn permutation_from_family(
    family: &RankedEssentialFamily,
) -> Result<BoundedAffinePermutation, FamilyError> {
    let r = rank_function_from_axioms(family)?;
    let n = family.n as Lift;
    let window = (1..=n)
        .map(|i| {
            (i..=i + n)
                .find(|&j| {
                    let len = (j - i + 1) as usize;
                    r.rank(i, len) == r.rank(i + 1, len - 1)
                })
                .expect("j = i + n always qualifies")
        })
        .collect();
    BoundedAffinePermutation::from_window(window).map_err(|_| FamilyError::NotValidated(0))
}
