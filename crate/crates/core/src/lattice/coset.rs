use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::matrix::IntMatrix;
use super::norm::{vector_norm, MatrixNorm, VectorNorm};
use crate::error::{Error, Result};

/// Canonical representative of a coset in `W_n \ GL_n(Z)`: rows strictly
/// decreasing in norm, each with positive first nonzero entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoseCoset {
    matrix: IntMatrix,
}

/// Flip `v` so that its first nonzero entry is positive.
pub fn sign_normalize(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in v.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}

pub fn standard_representative(m: &IntMatrix) -> Result<RoseCoset> {
    if !m.is_square() {
        return Err(Error::InvalidMatrix(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    if !m.determinant().abs().is_one() {
        return Err(Error::InvalidMatrix(format!("determinant of {m} is not ±1")));
    }
    let mut rows = m.to_rows();
    for r in rows.iter_mut() {
        sign_normalize(r);
    }
    rows.sort_by_cached_key(|r| std::cmp::Reverse(vector_norm(r)));
    for w in rows.windows(2) {
        if vector_norm(&w[0]) == vector_norm(&w[1]) {
            return Err(Error::ImpossibleState(format!("two rows of {m} have the same norm")));
        }
    }
    Ok(RoseCoset { matrix: IntMatrix::from_rows(rows)? })
}

pub fn matrix_norm(rho: &RoseCoset) -> MatrixNorm {
    MatrixNorm(rho.matrix.rows().rev().map(vector_norm).collect())
}

pub fn right_action(rho: &RoseCoset, a: &IntMatrix) -> Result<RoseCoset> {
    if !a.is_unimodular() {
        return Err(Error::InvalidMatrix(format!("{a} is not in GL_n(Z)")));
    }
    standard_representative(&rho.matrix.mul(a)?)
}

impl RoseCoset {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        standard_representative(m)
    }

    pub fn identity(n: usize) -> Self {
        standard_representative(&IntMatrix::identity(n)).expect("identity is unimodular")
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        standard_representative(&IntMatrix::from_i64(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// Row `v_{i+1}` (0-based index).
    pub fn row(&self, i: usize) -> &[BigInt] {
        self.matrix.row(i)
    }

    pub fn norm(&self) -> MatrixNorm {
        matrix_norm(self)
    }

    pub fn row_norm(&self, i: usize) -> VectorNorm {
        vector_norm(self.row(i))
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Coset obtained by replacing row `i` with `v`.
    pub fn replace_row(&self, i: usize, v: &[BigInt]) -> Result<RoseCoset> {
        let mut rows = self.matrix.to_rows();
        rows[i] = v.to_vec();
        standard_representative(&IntMatrix::from_rows(rows)?)
    }
}

impl fmt::Display for RoseCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl Serialize for RoseCoset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

fn canonical_rows(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    let side = (2 * bound + 1) as usize;
    let total = side.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % side) as i64 - bound;
                c /= side;
                d
            })
            .collect();
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            rows.push(v);
        }
    }
    rows.sort_by(|a, b| {
        let na: Vec<i64> = a.iter().map(|x| x.abs()).collect();
        let nb: Vec<i64> = b.iter().map(|x| x.abs()).collect();
        nb.cmp(&na).then_with(|| a.cmp(b))
    });
    rows
}

fn abs_vec(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| x.abs()).collect()
}

/// Rank of a set of integer rows, by fraction-free elimination.
fn int_rank(rows: &[&Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][col] != 0 {
                let (x, y) = (a[rank][col], a[r][col]);
                let g = gcd_i128(x, y);
                let (fx, fy) = (y / g, x / g);
                let pivot = a[rank].clone();
                for (v, &p) in a[r][col..ncols].iter_mut().zip(&pivot[col..ncols]) {
                    *v = *v * fy - p * fx;
                }
                let g = a[r].iter().fold(0, |acc, &v| gcd_i128(acc, v));
                if g > 1 {
                    for v in a[r].iter_mut() {
                        *v /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn search(cands: &[Vec<i64>], start: usize, chosen: &mut Vec<usize>, n: usize, out: &mut Vec<RoseCoset>) {
    if chosen.len() == n {
        let m =
            IntMatrix::from_rows(chosen.iter().map(|&i| cands[i].iter().map(|&x| BigInt::from(x)).collect()).collect())
                .expect("square");
        if m.determinant().abs().is_one() {
            out.push(RoseCoset { matrix: m });
        }
        return;
    }
    for idx in start..cands.len() {
        if let Some(&last) = chosen.last() {
            if abs_vec(&cands[last]) == abs_vec(&cands[idx]) {
                continue;
            }
        }
        chosen.push(idx);
        let sel: Vec<&Vec<i64>> = chosen.iter().map(|&i| &cands[i]).collect();
        if int_rank(&sel) == chosen.len() {
            search(cands, idx + 1, chosen, n, out);
        }
        chosen.pop();
    }
}

/// All cosets with a representative whose entries lie in `[-bound, bound]`,
/// ordered by matrix norm (ties broken by the matrix itself).
pub fn enumerate_roses(n: usize, bound: i64) -> Vec<RoseCoset> {
    if n == 0 || bound < 1 {
        return Vec::new();
    }
    let cands = canonical_rows(n, bound);
    let found: BTreeSet<(MatrixNorm, RoseCoset)> = (0..cands.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut chosen = vec![first];
            search(&cands, first + 1, &mut chosen, n, &mut out);
            out
        })
        .map(|r| (matrix_norm(&r), r))
        .collect();
    found.into_iter().map(|(_, r)| r).collect()
}
