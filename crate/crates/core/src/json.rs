//! JSON wire formats shared by the CLI and the C interface.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::diagram::Square;
use crate::essential::{
    connected_entries, core, excess, Entry, FamilyError, RankedEssentialFamily, Violation,
};
use crate::geometry::{mask_elements, FacetSystem};
use crate::interval::{CyclicInterval, IntervalError, Lift};
use crate::perm::{BoundedAffinePermutation, PermError};
use crate::realize::{RationalMatrix, RealizeError};
use crate::retrieval::{ConditionError, RankCondition, RankConditionSet};
use crate::smallrank::{Rank2Matroid, SmallRankError};

#[derive(Debug, Error)]
pub enum WireError {
    #[error("invalid JSON: {0}")]
    Json(serde_json::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    SmallRank(#[from] SmallRankError),
    #[error("declared n = {declared} but found {found}")]
    SizeMismatch { declared: usize, found: usize },
    #[error("family needs \"k\" or a full-set entry")]
    MissingRank,
    #[error("matrix entry {0} is neither a string nor a number")]
    BadEntry(String),
    #[error("input is neither a permutation nor a family")]
    UnknownShape,
}

impl From<serde_json::Error> for WireError {
    fn from(e: serde_json::Error) -> Self {
        Self::Json(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermJson {
    pub n: usize,
    pub window: Vec<Lift>,
}

impl PermJson {
    pub fn to_perm(&self) -> Result<BoundedAffinePermutation, WireError> {
        if self.window.len() != self.n {
            return Err(WireError::SizeMismatch {
                declared: self.n,
                found: self.window.len(),
            });
        }
        Ok(BoundedAffinePermutation::from_window(self.window.clone())?)
    }
}

impl From<&BoundedAffinePermutation> for PermJson {
    fn from(p: &BoundedAffinePermutation) -> Self {
        Self {
            n: p.n(),
            window: p.window().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub start: usize,
    pub len: usize,
}

impl IntervalJson {
    pub fn to_interval(self, n: usize) -> Result<CyclicInterval, WireError> {
        Ok(CyclicInterval::new(n, self.start, self.len)?)
    }
}

impl From<&CyclicInterval> for IntervalJson {
    fn from(i: &CyclicInterval) -> Self {
        Self {
            start: i.start(),
            len: i.len(),
        }
    }
}

/// One ranked interval, with optional annotations on output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetJson {
    pub rank: usize,
    pub start: usize,
    pub len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excess: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<bool>,
}

impl From<&Entry> for SetJson {
    fn from(e: &Entry) -> Self {
        Self {
            rank: e.rank,
            start: e.interval.start(),
            len: e.interval.len(),
            excess: None,
            connected: None,
            core: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    #[serde(default)]
    pub k: Option<usize>,
    pub sets: Vec<SetJson>,
}

/// Which derived annotations to attach to each set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Annotations {
    pub excess: bool,
    pub connected: bool,
    pub core: bool,
}

impl FamilyJson {
    pub fn from_family(f: &RankedEssentialFamily, ann: Annotations) -> Self {
        let table = ann.excess.then(|| excess(f));
        let connected = ann.connected.then(|| connected_entries(f));
        let core = ann.core.then(|| core(f));
        let sets = f
            .entries()
            .iter()
            .map(|e| SetJson {
                excess: table.as_ref().and_then(|t| t.get(&e.interval)),
                connected: connected.as_ref().map(|c| c.contains(e)),
                core: core.as_ref().map(|c| c.contains(e)),
                ..SetJson::from(e)
            })
            .collect();
        Self {
            n: f.n(),
            k: Some(f.k()),
            sets,
        }
    }

    pub fn to_family(&self) -> Result<RankedEssentialFamily, WireError> {
        let entries = self
            .sets
            .iter()
            .map(|s| {
                Ok(Entry::new(
                    s.rank,
                    CyclicInterval::new(self.n, s.start, s.len)?,
                ))
            })
            .collect::<Result<Vec<_>, WireError>>()?;
        let k = match self.k {
            Some(k) => k,
            None => entries
                .iter()
                .find(|e| e.interval.is_full())
                .map(|e| e.rank)
                .ok_or(WireError::MissingRank)?,
        };
        Ok(RankedEssentialFamily::new(self.n, k, entries)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionJson {
    pub rank: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionsJson {
    pub n: usize,
    pub conditions: Vec<ConditionJson>,
}

impl ConditionsJson {
    pub fn to_conditions(&self) -> Result<RankConditionSet, WireError> {
        let n = self.n;
        if n == 0 {
            return Err(ConditionError::EmptyGroundSet.into());
        }
        let conds = self
            .conditions
            .iter()
            .map(|c| {
                let iv = CyclicInterval::new(n, c.start, c.len)?;
                Ok(RankCondition {
                    rank: c.rank,
                    square: Square::of_interval(&iv),
                })
            })
            .collect::<Result<Vec<_>, WireError>>()?;
        Ok(RankConditionSet::new(n, conds)?)
    }

    pub fn from_conditions(c: &RankConditionSet) -> Self {
        Self {
            n: c.n(),
            conditions: c
                .conditions()
                .iter()
                .map(|x| ConditionJson {
                    rank: x.rank,
                    start: x.square.row as usize,
                    len: x.square.col,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MatrixJson {
    pub k: usize,
    pub n: usize,
    pub entries: Vec<Vec<Value>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<RationalMatrix, WireError> {
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(x) => Ok(x.to_string()),
                        other => Err(WireError::BadEntry(other.to_string())),
                    })
                    .collect::<Result<Vec<String>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = RationalMatrix::parse(&rows)?;
        if m.k() != self.k {
            return Err(WireError::SizeMismatch {
                declared: self.k,
                found: m.k(),
            });
        }
        if m.n() != self.n {
            return Err(WireError::SizeMismatch {
                declared: self.n,
                found: m.n(),
            });
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesJson {
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
    #[serde(default)]
    pub loops: Vec<usize>,
}

impl ClassesJson {
    pub fn to_matroid(&self) -> Result<Rank2Matroid, WireError> {
        Ok(Rank2Matroid::new(
            self.n,
            self.classes.clone(),
            self.loops.clone(),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxJson {
    pub lower: i64,
    pub upper: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityJson {
    pub coefficients: Vec<i64>,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityJson {
    pub start: usize,
    pub len: usize,
    pub rank: usize,
    pub coefficients: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetSystemJson {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "box")]
    pub bounds: BoxJson,
    pub equality: EqualityJson,
    pub inequalities: Vec<InequalityJson>,
}

impl From<&FacetSystem> for FacetSystemJson {
    fn from(f: &FacetSystem) -> Self {
        Self {
            n: f.n,
            k: f.k,
            bounds: BoxJson { lower: 0, upper: 1 },
            equality: EqualityJson {
                coefficients: vec![1; f.n],
                rhs: f.k,
            },
            inequalities: f
                .inequalities
                .iter()
                .map(|q| {
                    let mut c = vec![0; f.n];
                    for x in q.interval.members() {
                        c[x - 1] = 1;
                    }
                    InequalityJson {
                        start: q.interval.start(),
                        len: q.interval.len(),
                        rank: q.rank,
                        coefficients: c,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasesJson {
    pub n: usize,
    pub k: usize,
    pub bases: Vec<Vec<usize>>,
}

impl BasesJson {
    pub fn new(n: usize, k: usize, masks: &[u64]) -> Self {
        Self {
            n,
            k,
            bases: masks.iter().map(|&m| mask_elements(m)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationJson {
    pub rule: String,
    pub kind: String,
    pub entries: Vec<SetJson>,
}

impl From<&Violation> for ViolationJson {
    fn from(v: &Violation) -> Self {
        Self {
            rule: format!("{:?}", v.rule),
            kind: format!("{:?}", v.kind),
            entries: v.entries.iter().map(SetJson::from).collect(),
        }
    }
}

/// A document that is either a permutation or a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermOrFamily {
    Perm(BoundedAffinePermutation),
    Family(RankedEssentialFamily),
}

pub fn parse_perm_or_family(text: &str) -> Result<PermOrFamily, WireError> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("window").is_some() {
        Ok(PermOrFamily::Perm(
            serde_json::from_value::<PermJson>(v)?.to_perm()?,
        ))
    } else if v.get("sets").is_some() {
        Ok(PermOrFamily::Family(
            serde_json::from_value::<FamilyJson>(v)?.to_family()?,
        ))
    } else {
        Err(WireError::UnknownShape)
    }
}

pub fn parse_perm(text: &str) -> Result<BoundedAffinePermutation, WireError> {
    serde_json::from_str::<PermJson>(text)?.to_perm()
}

pub fn parse_family(text: &str) -> Result<RankedEssentialFamily, WireError> {
    serde_json::from_str::<FamilyJson>(text)?.to_family()
}

pub fn parse_conditions(text: &str) -> Result<RankConditionSet, WireError> {
    serde_json::from_str::<ConditionsJson>(text)?.to_conditions()
}

pub fn parse_matrix(text: &str) -> Result<RationalMatrix, WireError> {
    serde_json::from_str::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_classes(text: &str) -> Result<Rank2Matroid, WireError> {
    serde_json::from_str::<ClassesJson>(text)?.to_matroid()
}
