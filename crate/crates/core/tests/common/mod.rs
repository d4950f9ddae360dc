//! Test-only oracles, independent of the library's decode and rank code.

#![allow(dead_code)]

use geoqss::tables::{lookup, FamilyLabel, TableSet};
use geoqss::GhzIndex;
use num_rational::Ratio;

/// Cross-product parallel test written out independently.
pub fn intersects(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128 != 0
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    M0,
    M1,
    Abort,
}

/// Decode rule from first principles: zero matrix, nonsingular matrix, or abort.
pub fn oracle_decode(indices: &[GhzIndex], ts: &TableSet) -> OracleVerdict {
    let dirs: Vec<(i64, i64)> = indices
        .iter()
        .zip(ts.tables())
        .map(|(&i, t)| {
            let l = lookup(t, i);
            (l.a(), l.b())
        })
        .collect();
    let n = dirs.len();
    let m: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (i != j && intersects(dirs[i], dirs[j])) as i128).collect())
        .collect();
    if m.iter().all(|r| r.iter().all(|&v| v == 0)) {
        OracleVerdict::M0
    } else if det(&m) != 0 {
        OracleVerdict::M1
    } else {
        OracleVerdict::Abort
    }
}

/// Exact outcome probabilities of a round under computational-basis
/// measure-resend on every channel: the dealer's bit is uniform, each index
/// is uniform within the bit's family, and each participant then sees the
/// sent index or its sign partner with probability 1/2.
pub struct ExactComputational {
    pub abort: Ratio<i64>,
    pub wrong: Ratio<i64>,
    pub correct: Ratio<i64>,
}

pub fn exact_computational_resend(ts: &TableSet) -> ExactComputational {
    let n = ts.n();
    let mut abort = Ratio::from_integer(0);
    let mut wrong = Ratio::from_integer(0);
    let mut correct = Ratio::from_integer(0);
    for (bit, family) in [(OracleVerdict::M0, FamilyLabel::ParallelFamily), (OracleVerdict::M1, FamilyLabel::IntersectFamily)] {
        let families: Vec<Vec<GhzIndex>> = ts.tables().iter().map(|t| t.family(family)).collect();
        for sel in 0..4usize.pow(n as u32) {
            let sent: Vec<GhzIndex> = (0..n).map(|p| families[p][(sel / 4usize.pow(p as u32)) % 4]).collect();
            for flips in 0..1usize << n {
                let seen: Vec<GhzIndex> = (0..n)
                    .map(|p| if flips & (1 << p) != 0 { sent[p].sign_partner() } else { sent[p] })
                    .collect();
                let weight = Ratio::new(1, 2 * 4i64.pow(n as u32) * (1i64 << n));
                match oracle_decode(&seen, ts) {
                    OracleVerdict::Abort => abort += weight,
                    v if v == bit => correct += weight,
                    _ => wrong += weight,
                }
            }
        }
    }
    ExactComputational { abort, wrong, correct }
}

pub fn within_3_sigma(hits: u64, total: u64, p: f64) -> bool {
    let rate = hits as f64 / total as f64;
    let sigma = (p * (1.0 - p) / total as f64).sqrt();
    (rate - p).abs() <= 3.0 * sigma
}
