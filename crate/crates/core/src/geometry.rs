//! Integer line geometry, judging matrices and rank decoding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Line `a·x + b·y + c = 0` with integer coefficients in canonical form:
/// `gcd(|a|, |b|, |c|) = 1` and the leading nonzero coefficient positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Line {
    a: i64,
    b: i64,
    c: i64,
}

impl Line {
    /// Canonicalizes the coefficients. Fails when `a = b = 0`.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::DegenerateLine);
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / g, b / g, c / g);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Self { a, b, c })
    }

    /// Accepts only coefficients already in canonical form.
    pub fn from_canonical(a: i64, b: i64, c: i64) -> Result<Self> {
        let line = Self::new(a, b, c)?;
        if (line.a, line.b, line.c) != (a, b, c) {
            return Err(Error::NonCanonicalLine { a, b, c });
        }
        Ok(line)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Normal direction `(a, b)` reduced by its own gcd, sign-normalized.
    pub fn direction(&self) -> (i64, i64) {
        let g = self.a.gcd(&self.b);
        (self.a / g, self.b / g)
    }

    pub fn relation(&self, other: &Line) -> LineRelation {
        relation(self, other)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y + {} = 0", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineRelation {
    /// Includes coincident lines.
    Parallel,
    Intersecting,
}

/// Parallel iff the cross product `a₁b₂ − a₂b₁` vanishes.
pub fn relation(l1: &Line, l2: &Line) -> LineRelation {
    let cross = l1.a as i128 * l2.b as i128 - l2.a as i128 * l1.b as i128;
    if cross == 0 {
        LineRelation::Parallel
    } else {
        LineRelation::Intersecting
    }
}

/// Symmetric 0/1 matrix with zero diagonal: entry `(i, j)` is 1 when lines
/// `i` and `j` intersect.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct JudgingMatrix {
    n: usize,
    entries: Vec<Vec<u8>>,
}

impl JudgingMatrix {
    pub fn from_entries(entries: Vec<Vec<u8>>) -> Result<Self> {
        let n = entries.len();
        if n < 2 {
            return Err(Error::MatrixTooSmall(n));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries", row.len())));
            }
            if row[i] != 0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) = {v}")));
                }
                if entries[j][i] != v {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_entries(vec![vec![0; n]; n])
    }

    /// `J − I`: every pair intersects.
    pub fn all_intersecting(n: usize) -> Result<Self> {
        Self::from_entries(
            (0..n).map(|i| (0..n).map(|j| u8::from(i != j)).collect()).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn decode(&self) -> DecodeVerdict {
        decode(self)
    }
}

impl fmt::Display for JudgingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodeVerdict {
    M0,
    M1,
    Inconclusive,
}

pub fn judging_matrix(lines: &[Line]) -> Result<JudgingMatrix> {
    let n = lines.len();
    if n < 2 {
        return Err(Error::MatrixTooSmall(n));
    }
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    u8::from(i != j && relation(&lines[i], &lines[j]) == LineRelation::Intersecting)
                })
                .collect()
        })
        .collect();
    Ok(JudgingMatrix { n, entries })
}

/// Rank over the rationals by fraction-free (Bareiss) elimination in the
/// integer type `I`. Returns `None` if an intermediate overflows.
pub fn rank_exact<I>(rows: &[Vec<I>]) -> Option<usize>
where
    I: Integer + Signed + Clone + CheckedMul + CheckedSub,
{
    let mut m: Vec<Vec<I>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = I::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let lhs = m[rank][col].checked_mul(&m[i][j])?;
                let rhs = m[i][col].checked_mul(&m[rank][j])?;
                // exact by Sylvester's identity
                m[i][j] = lhs.checked_sub(&rhs)? / prev.clone();
            }
            m[i][col] = I::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    Some(rank)
}

/// Exact rank of the judging matrix over the rationals.
pub fn rank(m: &JudgingMatrix) -> usize {
    let small: Vec<Vec<i128>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&v| i128::from(v)).collect())
        .collect();
    rank_exact(&small).unwrap_or_else(|| {
        let big: Vec<Vec<BigInt>> = m
            .entries
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        rank_exact(&big).expect("big integers do not overflow")
    })
}

/// Rank 0 decodes to `M0`, full rank to `M1`, anything else is inconclusive.
pub fn decode(m: &JudgingMatrix) -> DecodeVerdict {
    match rank(m) {
        0 => DecodeVerdict::M0,
        r if r == m.n => DecodeVerdict::M1,
        _ => DecodeVerdict::Inconclusive,
    }
}
