//! Exact-rational matrices: their matroids, positivity of maximal minors and
//! the bounded affine permutation of a positive realization.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::{k_subsets, mask_elements, sort_lex};
use crate::interval::Lift;
use crate::perm::BoundedAffinePermutation;

/// Default size limit for basis enumeration.
pub const MATRIX_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("matrix needs at least one row and one column")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("k = {k} rows exceed n = {n} columns")]
    TooManyRows { k: usize, n: usize },
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
    #[error("matrix does not have full row rank")]
    NotFullRank,
    #[error("some maximal minor is negative")]
    NotNonNegative,
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    TooLarge { n: usize, bound: usize },
}

/// Parses an integer, a fraction `p/q` or a decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<BigRational, RealizeError> {
    let t = s.trim();
    let err = || RealizeError::Parse(s.to_string());
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || (digits.is_empty() && frac.is_empty()) {
            return Err(err());
        }
        let whole = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let part = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| err())?
        };
        let value = BigRational::new(whole * &scale + part, scale);
        return Ok(if neg { -value } else { value });
    }
    let value = BigRational::from_str(t).map_err(|_| err())?;
    if value.denom().is_zero() {
        return Err(err());
    }
    Ok(value)
}

/// A `k × n` matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    k: usize,
    n: usize,
    rows: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self, RealizeError> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if k == 0 || n == 0 {
            return Err(RealizeError::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(RealizeError::Ragged {
                row: row + 1,
                expected: n,
                found: r.len(),
            });
        }
        if k > n {
            return Err(RealizeError::TooManyRows { k, n });
        }
        Ok(Self { k, n, rows })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, RealizeError> {
        Self::new(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn parse<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, RealizeError> {
        Self::new(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| parse_rational(x.as_ref()))
                        .collect::<Result<_, _>>()
                })
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        &self.rows[row][col]
    }

    /// Column `j ∈ [1, n]`.
    pub fn column(&self, j: usize) -> Vec<BigRational> {
        self.rows.iter().map(|r| r[j - 1].clone()).collect()
    }

    /// Columns scaled by the positive lcm of their denominators. Scaling a
    /// column by a positive factor keeps the sign of every minor.
    fn integer_columns(&self) -> Vec<Vec<BigInt>> {
        (1..=self.n)
            .map(|j| {
                let col = self.column(j);
                let l = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                col.iter()
                    .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.k);
        (1..=self.n)
            .filter(|&j| basis.insert(self.column(j)))
            .count()
    }

    fn require_full_rank(&self) -> Result<(), RealizeError> {
        if self.rank() == self.k {
            Ok(())
        } else {
            Err(RealizeError::NotFullRank)
        }
    }

    /// Every maximal minor as `(column mask, sign)`, masks in increasing order.
    fn minor_signs(&self) -> Vec<(u64, i8)> {
        let cols = self.integer_columns();
        k_subsets(self.n, self.k)
            .map(|m| {
                let chosen: Vec<&Vec<BigInt>> =
                    mask_elements(m).into_iter().map(|j| &cols[j - 1]).collect();
                let sq: Vec<Vec<BigInt>> = (0..self.k)
                    .map(|r| chosen.iter().map(|c| c[r].clone()).collect())
                    .collect();
                let d = bareiss_determinant(sq);
                (
                    m,
                    if d.is_zero() {
                        0
                    } else if d.is_positive() {
                        1
                    } else {
                        -1
                    },
                )
            })
            .collect()
    }
}

/// Determinant by fraction-free elimination.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let k = a.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..k {
        if a[p][p].is_zero() {
            match (p + 1..k).find(|&r| !a[r][p].is_zero()) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[p][p].clone();
    }
    sign * &a[k - 1][k - 1]
}

// Row-reduced basis of a growing column span.
struct EchelonBasis {
    dim: usize,
    vectors: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
        }
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (pivot, b) in &self.vectors {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    fn insert(&mut self, v: Vec<BigRational>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].recip();
        let r: Vec<BigRational> = r.iter().map(|x| x * &inv).collect();
        for (_, b) in &mut self.vectors {
            if !b[pivot].is_zero() {
                let f = b[pivot].clone();
                for (x, y) in b.iter_mut().zip(&r) {
                    *x -= &f * y;
                }
            }
        }
        self.vectors.push((pivot, r));
        true
    }
}

/// Column sets with non-zero maximal minor, lexicographically sorted, using
/// the default bound.
pub fn matroid_bases(m: &RationalMatrix) -> Result<Vec<u64>, RealizeError> {
    matroid_bases_bounded(m, MATRIX_BOUND)
}

pub fn matroid_bases_bounded(m: &RationalMatrix, bound: usize) -> Result<Vec<u64>, RealizeError> {
    if m.n > bound.min(63) {
        return Err(RealizeError::TooLarge { n: m.n, bound });
    }
    m.require_full_rank()?;
    let mut out: Vec<u64> = m
        .minor_signs()
        .into_iter()
        .filter(|&(_, s)| s != 0)
        .map(|(b, _)| b)
        .collect();
    sort_lex(&mut out);
    Ok(out)
}

/// Whether every maximal minor is non-negative.
pub fn is_positively_realizing(m: &RationalMatrix) -> bool {
    m.minor_signs().iter().all(|&(_, s)| s >= 0)
}

/// `π(i) = min{ j ≥ i : column i ∈ span(columns i+1, …, j) }`, indices mod n.
/// Requires full row rank and non-negative maximal minors.
pub fn permutation_from_matrix(
    m: &RationalMatrix,
) -> Result<BoundedAffinePermutation, RealizeError> {
    m.require_full_rank()?;
    if !is_positively_realizing(m) {
        return Err(RealizeError::NotNonNegative);
    }
    permutation_from_matrix_unchecked(m)
}

/// As [`permutation_from_matrix`] without the positivity check; for other
/// realizations the result is still a bounded affine permutation.
pub fn permutation_from_matrix_unchecked(
    m: &RationalMatrix,
) -> Result<BoundedAffinePermutation, RealizeError> {
    m.require_full_rank()?;
    let n = m.n as Lift;
    let col = |j: Lift| m.column(crate::interval::residue(m.n, j));
    let window = (1..=n)
        .map(|i| {
            let target = col(i);
            let mut span = EchelonBasis::new(m.k);
            let mut j = i;
            while !span.contains(&target) {
                j += 1;
                span.insert(col(j));
            }
            j
        })
        .collect();
    BoundedAffinePermutation::from_window(window).map_err(|_| RealizeError::NotNonNegative)
}
