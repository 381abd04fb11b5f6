//! Reconstruction of a bounded affine permutation from rank conditions on
//! cyclic intervals, by placing dots on the periodic array one row at a time.
//!
//! Each run is sequential. With `m` conditions a run places at most `n` dots;
//! every `d_D` query scans one band of rows (`O(n)`), and every column search
//! makes up to `n + 1` queries, so a run costs `O(n³ + m·n)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{dots_in_p, dots_in_t, DotSource, Square};
use crate::essential::{Entry, RankedEssentialFamily};
use crate::interval::{residue, CyclicInterval, CyclicOrder, Lift};
use crate::perm::BoundedAffinePermutation;

/// `rank([row, row + col − 1]) = rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankCondition {
    pub rank: usize,
    pub square: Square,
}

impl RankCondition {
    pub fn interval(&self, n: usize) -> CyclicInterval {
        self.square
            .interval(n)
            .expect("conditions have columns in [1, n]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("ground set size must be positive")]
    EmptyGroundSet,
    #[error("condition square ({row},{col}) outside [1,{n}] × [1,{n}]")]
    OutOfRange { n: usize, row: Lift, col: usize },
}

/// A set of rank conditions; the full interval is the square `(1, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankConditionSet {
    n: usize,
    conditions: Vec<RankCondition>,
}

impl RankConditionSet {
    pub fn new<C>(n: usize, conditions: C) -> Result<Self, ConditionError>
    where
        C: IntoIterator<Item = RankCondition>,
    {
        if n == 0 {
            return Err(ConditionError::EmptyGroundSet);
        }
        let mut out = Vec::new();
        for c in conditions {
            let Square { row, col } = c.square;
            if !(1..=n as Lift).contains(&row) || !(1..=n).contains(&col) {
                return Err(ConditionError::OutOfRange { n, row, col });
            }
            // the full interval always sits on (1, n)
            let square = if col == n {
                Square::new(1, n)
            } else {
                c.square
            };
            out.push(RankCondition {
                rank: c.rank,
                square,
            });
        }
        out.sort_by_key(|c| (c.rank, c.square));
        out.dedup();
        Ok(Self { n, conditions: out })
    }

    /// One condition per interval, with the interval's square.
    pub fn from_intervals<I>(n: usize, items: I) -> Result<Self, ConditionError>
    where
        I: IntoIterator<Item = (usize, CyclicInterval)>,
    {
        Self::new(
            n,
            items.into_iter().map(|(rank, iv)| RankCondition {
                rank,
                square: Square::of_interval(&iv),
            }),
        )
    }

    pub fn from_entries<'a, E>(n: usize, entries: E) -> Self
    where
        E: IntoIterator<Item = &'a Entry>,
    {
        Self::from_intervals(n, entries.into_iter().map(|e| (e.rank, e.interval)))
            .expect("family intervals give valid squares")
    }

    pub fn from_family(family: &RankedEssentialFamily) -> Self {
        Self::from_entries(family.n(), family.entries())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Conditions in processing order: by rank, then start, then length.
    pub fn conditions(&self) -> &[RankCondition] {
        &self.conditions
    }
}

/// Dots on the periodic array: at most one per row and per antidiagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperDotting {
    n: usize,
    cols: Vec<Option<usize>>,
    antidiagonals: Vec<bool>,
}

impl ProperDotting {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            cols: vec![None; n],
            antidiagonals: vec![false; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_dotted(&self, row: usize) -> bool {
        self.cols[row - 1].is_some()
    }

    pub fn dots(&self) -> Vec<Square> {
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| Square::new(r as Lift + 1, c)))
            .collect()
    }

    /// Places a dot, refusing a second dot in a row or antidiagonal.
    pub fn place(&mut self, row: usize, col: usize) -> Result<(), RetrievalError> {
        let diag = residue(self.n, (row + col) as Lift) - 1;
        if self.cols[row - 1].is_some() || self.antidiagonals[diag] {
            return Err(RetrievalError::NotProper { row, col });
        }
        self.cols[row - 1] = Some(col);
        self.antidiagonals[diag] = true;
        Ok(())
    }

    pub fn is_maximal(&self) -> bool {
        self.cols.iter().all(Option::is_some)
    }

    /// `r_D(sq) = |D ∩ P_sq|`.
    pub fn r_d(&self, sq: Square) -> usize {
        dots_in_p(self, sq)
    }

    /// `d_D(sq) = |D ∩ T_sq|`.
    pub fn d_d(&self, sq: Square) -> usize {
        dots_in_t(self, sq)
    }

    /// `π(h) = h + ℓ − 1` for a maximal dotting.
    pub fn permutation(&self) -> Option<BoundedAffinePermutation> {
        let window = self
            .cols
            .iter()
            .enumerate()
            .map(|(r, c)| c.map(|c| (r + c) as Lift))
            .collect::<Option<Vec<_>>>()?;
        BoundedAffinePermutation::from_window(window).ok()
    }
}

impl DotSource for ProperDotting {
    fn size(&self) -> usize {
        self.n
    }

    fn dot_col(&self, row: usize) -> Option<usize> {
        self.cols[row - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind")]
pub enum RetrievalError {
    #[error("no condition labels the square (1,n)")]
    MissingFullLabel,
    #[error("label {label} exceeds the full-set label {k}")]
    NonMaximalLabel { label: usize, k: usize },
    #[error("condition {rank} on ({row},{col}) stopped making progress")]
    NoProgress { rank: usize, row: Lift, col: usize },
    #[error("row {row} has no admissible column")]
    RowOverflow { row: usize },
    #[error("dot ({row},{col}) repeats a row or antidiagonal")]
    NotProper { row: usize, col: usize },
    #[error("condition {rank} on ({row},{col}) ends with rank {found}")]
    RankMismatch {
        rank: usize,
        row: Lift,
        col: usize,
        found: usize,
    },
}

impl RetrievalError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::MissingFullLabel => "MissingFullLabel",
            Self::NonMaximalLabel { .. } => "NonMaximalLabel",
            Self::NoProgress { .. } => "NoProgress",
            Self::RowOverflow { .. } => "RowOverflow",
            Self::NotProper { .. } => "NotProper",
            Self::RankMismatch { .. } => "RankMismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event")]
pub enum TraceEvent {
    ConditionStart { rank: usize, row: Lift, col: usize },
    ExcessComputed { a: i64 },
    DotPlaced { row: usize, col: usize },
    RowFilled { row: usize, col: usize },
    Error { kind: String, context: String },
}

/// Rebuilds the dotting recorded by a trace.
pub fn replay(n: usize, events: &[TraceEvent]) -> Result<ProperDotting, RetrievalError> {
    let mut d = ProperDotting::new(n);
    for e in events {
        if let TraceEvent::DotPlaced { row, col } | TraceEvent::RowFilled { row, col } = *e {
            d.place(row, col)?;
        }
    }
    Ok(d)
}

/// Runs the reconstruction. On success the result is the rank-maximal
/// positroid satisfying every condition; it exists exactly when some
/// positroid satisfies the conditions and they include its core.
pub fn retrieve(c: &RankConditionSet) -> Result<BoundedAffinePermutation, RetrievalError> {
    run(c, &mut None)
}

/// As [`retrieve`], also returning the step trace.
pub fn retrieve_traced(
    c: &RankConditionSet,
) -> (
    Result<BoundedAffinePermutation, RetrievalError>,
    Vec<TraceEvent>,
) {
    let mut trace = Some(Vec::new());
    let result = run(c, &mut trace);
    let mut events = trace.unwrap_or_default();
    if let Err(e) = &result {
        events.push(TraceEvent::Error {
            kind: e.kind().to_string(),
            context: e.to_string(),
        });
    }
    (result, events)
}

fn run(
    c: &RankConditionSet,
    trace: &mut Option<Vec<TraceEvent>>,
) -> Result<BoundedAffinePermutation, RetrievalError> {
    let n = c.n;
    let mut log = |e: TraceEvent| {
        if let Some(t) = trace.as_mut() {
            t.push(e);
        }
    };
    let k = c
        .conditions
        .iter()
        .find(|x| x.square == Square::new(1, n))
        .map(|x| x.rank)
        .ok_or(RetrievalError::MissingFullLabel)?;
    if let Some(x) = c.conditions.iter().find(|x| x.rank > k) {
        return Err(RetrievalError::NonMaximalLabel { label: x.rank, k });
    }

    let mut d = ProperDotting::new(n);
    // first column β with β − 1 − d_D(h, β) = target
    let column = |d: &ProperDotting, h: usize, target: usize| {
        (1..=n + 1)
            .find(|&b| b as i64 - 1 - d.d_d(Square::new(h as Lift, b)) as i64 == target as i64)
    };

    for cond in &c.conditions {
        let (r, sq) = (cond.rank, cond.square);
        log(TraceEvent::ConditionStart {
            rank: r,
            row: sq.row,
            col: sq.col,
        });
        let excess = |d: &ProperDotting| sq.col as i64 - r as i64 - d.d_d(sq) as i64;
        let mut a = excess(&d);
        log(TraceEvent::ExcessComputed { a });
        let no_progress = RetrievalError::NoProgress {
            rank: r,
            row: sq.row,
            col: sq.col,
        };
        while a > 0 {
            let order = CyclicOrder::new(n, sq.row as usize);
            let h = order
                .elements()
                .find(|&h| !d.is_dotted(h))
                .ok_or(no_progress.clone())?;
            let l = column(&d, h, r).ok_or(no_progress.clone())?;
            d.place(h, l)?;
            log(TraceEvent::DotPlaced { row: h, col: l });
            let b = excess(&d);
            log(TraceEvent::ExcessComputed { a: b });
            if b >= a {
                return Err(no_progress);
            }
            a = b;
        }
    }

    for h in 1..=n {
        if d.is_dotted(h) {
            continue;
        }
        let l = column(&d, h, k).ok_or(RetrievalError::RowOverflow { row: h })?;
        d.place(h, l)?;
        log(TraceEvent::RowFilled { row: h, col: l });
    }

    for cond in &c.conditions {
        let found = d.r_d(cond.square);
        if found != cond.rank {
            return Err(RetrievalError::RankMismatch {
                rank: cond.rank,
                row: cond.square.row,
                col: cond.square.col,
                found,
            });
        }
    }
    Ok(d.permutation()
        .expect("a maximal proper dotting is a permutation"))
}

/// Whether `p` satisfies every condition exactly.
pub fn verify_conditions(p: &BoundedAffinePermutation, c: &RankConditionSet) -> bool {
    p.n() == c.n
        && c.conditions
            .iter()
            .all(|x| p.rank_interval(&x.interval(c.n)) == x.rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cond(rank: usize, row: Lift, col: usize) -> RankCondition {
        RankCondition {
            rank,
            square: Square::new(row, col),
        }
    }

    fn example() -> RankConditionSet {
        RankConditionSet::new(5, [cond(1, 3, 2), cond(3, 1, 5)]).unwrap()
    }

    #[test]
    fn five_element_example() {
        let p = retrieve(&example()).unwrap();
        assert_eq!(p.window(), &[5, 6, 4, 7, 8]);
        assert!(verify_conditions(&p, &example()));
    }

    #[test]
    fn trace_replays() {
        let (res, trace) = retrieve_traced(&example());
        let p = res.unwrap();
        assert_eq!(replay(5, &trace).unwrap().permutation().unwrap(), p);
        assert_eq!(
            trace[0],
            TraceEvent::ConditionStart {
                rank: 1,
                row: 3,
                col: 2
            }
        );
        assert!(trace.contains(&TraceEvent::DotPlaced { row: 3, col: 2 }));
    }

    #[test]
    fn counters() {
        let mut d = ProperDotting::new(5);
        assert_eq!(d.r_d(Square::new(1, 5)), 0);
        assert_eq!(d.d_d(Square::new(2, 3)), 0);
        d.place(3, 2).unwrap();
        assert_eq!(d.d_d(Square::new(1, 5)), 1);
        let p = retrieve(&example()).unwrap();
        let full = ProperDotting {
            n: 5,
            cols: (1..=5).map(|i| p.dot_col(i)).collect(),
            antidiagonals: vec![true; 5],
        };
        assert_eq!(full.r_d(Square::new(1, 5)), 3);
        assert_eq!(full.d_d(Square::new(1, 5)), 2);
    }

    #[test]
    fn rank_zero() {
        let c = RankConditionSet::new(4, [cond(0, 1, 4)]).unwrap();
        assert_eq!(retrieve(&c).unwrap(), BoundedAffinePermutation::identity(4));
        let c = RankConditionSet::new(4, [cond(0, 1, 1), cond(0, 1, 4)]).unwrap();
        assert_eq!(retrieve(&c).unwrap(), BoundedAffinePermutation::identity(4));
    }

    #[test]
    fn errors() {
        let c = RankConditionSet::new(4, [cond(1, 2, 2)]).unwrap();
        assert_eq!(retrieve(&c), Err(RetrievalError::MissingFullLabel));
        let c = RankConditionSet::new(4, [cond(1, 1, 1), cond(0, 1, 4)]).unwrap();
        assert_eq!(
            retrieve(&c),
            Err(RetrievalError::NonMaximalLabel { label: 1, k: 0 })
        );
        let c = RankConditionSet::new(4, [cond(2, 1, 1), cond(2, 1, 4)]).unwrap();
        assert!(retrieve(&c).is_err());
        assert!(matches!(
            RankConditionSet::new(4, [cond(1, 5, 1)]),
            Err(ConditionError::OutOfRange { .. })
        ));
        let (res, trace) = retrieve_traced(&RankConditionSet::new(3, [cond(1, 2, 2)]).unwrap());
        assert!(res.is_err());
        assert!(matches!(trace.last(), Some(TraceEvent::Error { .. })));
    }

    #[test]
    fn properness_enforced() {
        let mut d = ProperDotting::new(4);
        d.place(1, 2).unwrap();
        assert!(matches!(
            d.place(2, 1),
            Err(RetrievalError::NotProper { .. })
        ));
        assert!(matches!(
            d.place(1, 3),
            Err(RetrievalError::NotProper { .. })
        ));
    }
}
