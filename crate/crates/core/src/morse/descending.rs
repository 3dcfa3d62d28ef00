use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::IdealEdge;
use crate::lattice::{vector_norm, RoseCoset};

/// Fast test: the norm of `Σ k_i v_i` against the norm of the
/// largest-norm participating row.
pub fn is_descending(rho: &RoseCoset, iota: &IdealEdge) -> Result<bool> {
    let s = iota.sum(rho)?;
    let top = iota.support()[0];
    Ok(vector_norm(&s) < rho.row_norm(top))
}

/// Ground truth: some participating row, replaced by `Σ k_i v_i`, gives a
/// rose of smaller norm.
pub fn is_descending_oracle(rho: &RoseCoset, iota: &IdealEdge) -> Result<bool> {
    let s = iota.sum(rho)?;
    let base = rho.norm();
    for j in iota.support() {
        if rho.replace_row(j, &s)?.norm() < base {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn descending_edges(rho: &RoseCoset) -> Result<Vec<IdealEdge>> {
    let mut out = Vec::new();
    for iota in IdealEdge::all(rho.rank()) {
        if is_descending(rho, &iota)? {
            out.push(iota);
        }
    }
    Ok(out)
}

pub fn opposite(iota: &IdealEdge, position: usize) -> Result<IdealEdge> {
    iota.opposite(position)
}

#[derive(Debug, Clone, Serialize)]
pub struct ForbiddenPairReport {
    /// Descending edges whose top-coefficient opposite is also descending.
    pub violations: Vec<(IdealEdge, IdealEdge)>,
    /// Pairs differing in a non-top coefficient that are both descending.
    pub other_position_pairs: usize,
    pub descending: usize,
}

/// Flip the coefficient of the top participating row of every descending
/// ideal edge and test the result.
pub fn forbidden_pair_check(rho: &RoseCoset) -> Result<ForbiddenPairReport> {
    let desc = descending_edges(rho)?;
    let mut violations = Vec::new();
    let mut other = 0;
    for iota in &desc {
        let supp = iota.support();
        let flipped = iota.opposite(supp[0] + 1)?;
        if is_descending(rho, &flipped)? {
            violations.push((iota.clone(), flipped));
        }
        for &p in &supp[1..] {
            if is_descending(rho, &iota.opposite(p + 1)?)? {
                other += 1;
            }
        }
    }
    Ok(ForbiddenPairReport { violations, other_position_pairs: other, descending: desc.len() })
}

fn is_coordinate_column(rho: &RoseCoset, col: usize) -> bool {
    let nz: Vec<&BigInt> = (0..rho.rank()).map(|r| &rho.row(r)[col]).filter(|x| **x != BigInt::from(0)).collect();
    nz.len() == 1 && (*nz[0] == BigInt::from(1) || *nz[0] == BigInt::from(-1))
}

fn two_letter(n: usize, a: usize, ea: i8, b: usize, eb: i8) -> Result<IdealEdge> {
    let mut k = vec![0i8; n];
    k[a] = ea;
    k[b] = eb;
    IdealEdge::new(&k)
}

fn descending_sign(rho: &RoseCoset, a: usize, b: usize) -> Result<Option<IdealEdge>> {
    for e in [1i8, -1] {
        let iota = two_letter(rho.rank(), a, 1, b, e)?;
        if is_descending(rho, &iota)? {
            return Ok(Some(iota));
        }
    }
    Ok(None)
}

/// A descending 2-letter ideal edge found by scanning for the first
/// column of `M` that is not a coordinate vector; `None` exactly when no
/// such column exists.
pub fn descending_witness(rho: &RoseCoset) -> Result<Option<IdealEdge>> {
    let n = rho.rank();
    let Some(k) = (0..n).find(|&c| !is_coordinate_column(rho, c)) else {
        return Ok(None);
    };
    let zero = BigInt::from(0);
    let below = (k + 1..n).find(|&j| rho.row(j)[k] != zero);
    let pair = match below {
        Some(j) => (k, j),
        None => match (0..k).find(|&j| rho.row(j)[k] != zero) {
            Some(j) => (j, k),
            None => return Err(Error::ImpossibleState(format!("column {} of {rho} has no off-diagonal entry", k + 1))),
        },
    };
    match descending_sign(rho, pair.0, pair.1)? {
        Some(iota) => Ok(Some(iota)),
        None => Err(Error::ImpossibleState(format!(
            "column scan on {rho} gave a{}±a{}, neither descending",
            pair.0 + 1,
            pair.1 + 1
        ))),
    }
}

/// Exhaustive search for any descending ideal edge.
pub fn descending_witness_oracle(rho: &RoseCoset) -> Result<Option<IdealEdge>> {
    for iota in IdealEdge::all(rho.rank()) {
        if is_descending_oracle(rho, &iota)? {
            return Ok(Some(iota));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessSource {
    ColumnScan,
    Oracle,
}

fn signed_sub(iota: &IdealEdge, a: usize, b: usize) -> Result<IdealEdge> {
    let k = iota.coeffs();
    two_letter(iota.rank(), a, k[a], b, k[b])
}

/// Two-case column analysis on the signed rows `k_j v_j` of the support.
fn column_analysis(rho: &RoseCoset, iota: &IdealEdge) -> Result<Option<IdealEdge>> {
    let supp = iota.support();
    let n = rho.rank();
    let zero = BigInt::from(0);
    let w: Vec<Vec<BigInt>> =
        supp.iter().map(|&j| rho.row(j).iter().map(|x| x * BigInt::from(iota.coeffs()[j])).collect()).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| w.iter().any(|r| r[c] != zero)).collect();
    let m = w.len();
    let c1 = cols[0];
    let nonzero_first = w.iter().filter(|r| r[c1] != zero).count();
    if nonzero_first >= 2 {
        if w[0][c1] == zero {
            return Ok(None);
        }
        let s = if w[0][c1] > zero { 1 } else { -1 };
        let k = (1..m).find(|&k| (&w[k][c1] * BigInt::from(s)) < zero);
        return match k {
            Some(k) => Ok(Some(signed_sub(iota, supp[0], supp[k])?)),
            None => Ok(None),
        };
    }
    let Some(&c2) = cols.get(1) else { return Ok(None) };
    if m < 2 || w[1][c2] == zero {
        return Ok(None);
    }
    let s = BigInt::from(if w[1][c2] > zero { 1 } else { -1 });
    let rest: Vec<usize> = (2..m).collect();
    if rest.iter().all(|&k| w[k][c2] == zero) {
        return Ok(Some(signed_sub(iota, supp[0], supp[1])?));
    }
    if let Some(&k) = rest.iter().find(|&&k| &w[k][c2] * &s < zero) {
        return Ok(Some(signed_sub(iota, supp[1], supp[k])?));
    }
    match rest.iter().find(|&&k| &w[k][c2] * &s > zero) {
        Some(&k) => Ok(Some(signed_sub(iota, supp[0], supp[k])?)),
        None => Ok(None),
    }
}

/// A descending 2-letter ideal edge subordinate to the descending `ι`.
/// The column analysis is tried first; its answer is checked, and an
/// exhaustive scan of subordinate pairs is the fallback.
pub fn subordinate_2letter(rho: &RoseCoset, iota: &IdealEdge) -> Result<(IdealEdge, WitnessSource)> {
    if !is_descending(rho, iota)? {
        return Err(Error::Precondition(format!("{iota} is not descending for {rho}")));
    }
    if iota.letters() == 2 {
        return Ok((iota.clone(), WitnessSource::ColumnScan));
    }
    if let Some(c) = column_analysis(rho, iota)? {
        if is_descending(rho, &c)? {
            return Ok((c, WitnessSource::ColumnScan));
        }
    }
    let supp = iota.support();
    for (x, &a) in supp.iter().enumerate() {
        for &b in &supp[x + 1..] {
            let c = signed_sub(iota, a, b)?;
            if is_descending(rho, &c)? {
                return Ok((c, WitnessSource::Oracle));
            }
        }
    }
    Err(Error::ImpossibleState(format!("no descending 2-letter edge subordinate to {iota} for {rho}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> RoseCoset {
        RoseCoset::from_i64(&[[2, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap()
    }

    #[test]
    fn criterion_examples() {
        let r = rho();
        let minus = IdealEdge::parse(3, "a1-a2").unwrap();
        let plus = IdealEdge::parse(3, "a1+a2").unwrap();
        assert!(is_descending(&r, &minus).unwrap());
        assert!(is_descending_oracle(&r, &minus).unwrap());
        assert!(!is_descending(&r, &plus).unwrap());
        assert!(!is_descending_oracle(&r, &plus).unwrap());
        assert!(descending_edges(&RoseCoset::identity(3)).unwrap().is_empty());
    }

    #[test]
    fn forbidden_examples() {
        let rep = forbidden_pair_check(&rho()).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.descending > 0);
        let e = IdealEdge::parse(2, "a1+a2").unwrap();
        assert_eq!(opposite(&e, 2).unwrap(), IdealEdge::parse(2, "a1-a2").unwrap());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(descending_witness(&RoseCoset::identity(3)).unwrap(), None);
        let w = descending_witness(&rho()).unwrap().unwrap();
        assert_eq!(w.letters(), 2);
        assert!(is_descending_oracle(&rho(), &w).unwrap());
        assert_eq!(w, IdealEdge::parse(3, "a1-a2").unwrap());
        let r2 = RoseCoset::from_i64(&[[1, 1], [1, 0]]).unwrap();
        assert_eq!(descending_witness(&r2).unwrap(), Some(IdealEdge::parse(2, "a1-a2").unwrap()));
    }

    #[test]
    fn subordinate_examples() {
        let r = rho();
        let (e, _) = subordinate_2letter(&r, &IdealEdge::parse(3, "a1-a2").unwrap()).unwrap();
        assert_eq!(e, IdealEdge::parse(3, "a1-a2").unwrap());
        assert!(subordinate_2letter(&r, &IdealEdge::parse(3, "a1+a2").unwrap()).is_err());
    }
}
