use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u · a · v = d` with `d` diagonal, `d_1 | d_2 | …`, and `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.nrows());
    let mut v = IntMatrix::identity(a.ncols());
    let diagonal = reduce(&mut d, Some((&mut u, &mut v)));
    SmithForm { diagonal, u, v, d }
}

/// Invariant factors only (nonzero diagonal entries of the Smith form).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut d = a.clone();
    reduce(&mut d, None).into_iter().filter(|x| !x.is_zero()).collect()
}

fn min_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.nrows() {
        for j in t..d.ncols() {
            let x = d.get(i, j);
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn reduce(d: &mut IntMatrix, mut tr: Option<(&mut IntMatrix, &mut IntMatrix)>) -> Vec<BigInt> {
    let (rows, cols) = (d.nrows(), d.ncols());
    let steps = rows.min(cols);
    for t in 0..steps {
        let Some((pi, pj)) = min_nonzero(d, t) else { break };
        swap_rows(d, &mut tr, t, pi);
        swap_cols(d, &mut tr, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                add_row(d, &mut tr, i, t, &-q);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                add_col(d, &mut tr, j, t, &-q);
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_nonzero_cross(d, t);
                swap_rows(d, &mut tr, t, pi);
                swap_cols(d, &mut tr, t, pj);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(d.get(t, t))));
            match bad {
                Some(i) => add_row(d, &mut tr, t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            if let Some((u, _)) = tr.as_mut() {
                u.negate_row(t);
            }
        }
    }
    (0..steps).map(|i| d.get(i, i).clone()).collect()
}

/// Smallest nonzero entry in row `t` or column `t` at or beyond the pivot.
fn min_nonzero_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut val: Option<BigInt> = None;
    let cands = (t..d.nrows()).map(|i| (i, t)).chain((t..d.ncols()).map(|j| (t, j)));
    for (i, j) in cands {
        let x = d.get(i, j).abs();
        if !x.is_zero() && val.as_ref().is_none_or(|v| x < *v) {
            val = Some(x);
            best = (i, j);
        }
    }
    best
}

fn swap_rows(d: &mut IntMatrix, tr: &mut Option<(&mut IntMatrix, &mut IntMatrix)>, a: usize, b: usize) {
    d.swap_rows(a, b);
    if let Some((u, _)) = tr.as_mut() {
        u.swap_rows(a, b);
    }
}

fn swap_cols(d: &mut IntMatrix, tr: &mut Option<(&mut IntMatrix, &mut IntMatrix)>, a: usize, b: usize) {
    d.swap_cols(a, b);
    if let Some((_, v)) = tr.as_mut() {
        v.swap_cols(a, b);
    }
}

fn add_row(d: &mut IntMatrix, tr: &mut Option<(&mut IntMatrix, &mut IntMatrix)>, dst: usize, src: usize, f: &BigInt) {
    d.add_row_multiple(dst, src, f);
    if let Some((u, _)) = tr.as_mut() {
        u.add_row_multiple(dst, src, f);
    }
}

fn add_col(d: &mut IntMatrix, tr: &mut Option<(&mut IntMatrix, &mut IntMatrix)>, dst: usize, src: usize, f: &BigInt) {
    d.add_col_multiple(dst, src, f);
    if let Some((_, v)) = tr.as_mut() {
        v.add_col_multiple(dst, src, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.diagonal.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn examples() {
        let s = check(&IntMatrix::from_i64(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, vec![BigInt::from(1); 3]);
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.diagonal.iter().all(Zero::is_zero));
    }

    #[test]
    fn rectangular() {
        let s = check(&IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = check(&IntMatrix::from_i64(&[[1, 1, 0, 0], [0, 1, 1, 0]]));
        assert_eq!(s.rank(), 2);
        assert_eq!(invariant_factors(&IntMatrix::from_i64(&[[0, 4], [6, 0]])), vec![BigInt::from(2), BigInt::from(12)]);
    }
}
