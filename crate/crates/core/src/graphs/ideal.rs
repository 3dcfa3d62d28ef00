use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::RoseCoset;

/// Sign vector `Σ k_i a_i` with at least two nonzero coefficients, stored
/// with its first nonzero coefficient equal to `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealEdge {
    coeffs: Vec<i8>,
}

impl IdealEdge {
    pub fn new(coeffs: &[i8]) -> Result<Self> {
        if coeffs.iter().any(|&k| !(-1..=1).contains(&k)) {
            return Err(Error::InvalidInput(format!("coefficients {coeffs:?} not in {{-1,0,1}}")));
        }
        if coeffs.iter().filter(|&&k| k != 0).count() < 2 {
            return Err(Error::InvalidInput(format!("{coeffs:?} has fewer than two nonzero coefficients")));
        }
        let flip = coeffs.iter().find(|&&k| k != 0) == Some(&-1);
        let coeffs = coeffs.iter().map(|&k| if flip { -k } else { k }).collect();
        Ok(IdealEdge { coeffs })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    /// 0-based indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect()
    }

    pub fn letters(&self) -> usize {
        self.coeffs.iter().filter(|&&k| k != 0).count()
    }

    /// Every ideal edge of rank `n`, in coefficient order.
    pub fn all(n: usize) -> Vec<IdealEdge> {
        let total = 3usize.pow(n as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let k: Vec<i8> = (0..n)
                .map(|_| {
                    let d = (c % 3) as i8 - 1;
                    c /= 3;
                    d
                })
                .collect();
            if k.iter().find(|&&x| x != 0) == Some(&1) && k.iter().filter(|&&x| x != 0).count() >= 2 {
                out.push(IdealEdge { coeffs: k });
            }
        }
        out.sort();
        out
    }

    /// `Σ k_i v_i` for the rows of `ρ`.
    pub fn sum(&self, rho: &RoseCoset) -> Result<Vec<BigInt>> {
        if rho.rank() != self.rank() {
            return Err(Error::RankMismatch { left: rho.rank(), right: self.rank() });
        }
        let mut s = vec![BigInt::from(0); self.rank()];
        for (i, &k) in self.coeffs.iter().enumerate() {
            if k != 0 {
                for (acc, x) in s.iter_mut().zip(rho.row(i)) {
                    *acc += x * BigInt::from(k);
                }
            }
        }
        Ok(s)
    }

    /// Flip the coefficient at 1-based `position`.
    pub fn opposite(&self, position: usize) -> Result<IdealEdge> {
        if position == 0 || position > self.rank() || self.coeffs[position - 1] == 0 {
            return Err(Error::InvalidInput(format!("position {position} has zero coefficient in {self}")));
        }
        let mut k = self.coeffs.clone();
        k[position - 1] = -k[position - 1];
        IdealEdge::new(&k)
    }

    /// Same support and exactly one coefficient differs, up to overall sign.
    pub fn is_opposite(&self, other: &IdealEdge) -> bool {
        if self.support() != other.support() {
            return false;
        }
        [1i8, -1].iter().any(|&s| self.coeffs.iter().zip(&other.coeffs).filter(|(a, b)| **a != s * **b).count() == 1)
    }

    /// `self` is obtained from `other` by zeroing at least one coefficient,
    /// up to overall sign.
    pub fn is_subordinate_to(&self, other: &IdealEdge) -> bool {
        if self.rank() != other.rank() || self.letters() >= other.letters() {
            return false;
        }
        [1i8, -1].iter().any(|&s| self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| *a == 0 || *a == s * *b))
    }

    /// Half-edges on the new vertex: `t_i` (bit `2i`) for `k_i = +1`,
    /// `h_i` (bit `2i+1`) for `k_i = −1`.
    pub fn half_edges(&self) -> u64 {
        let mut m = 0u64;
        for (i, &k) in self.coeffs.iter().enumerate() {
            match k {
                1 => m |= 1 << (2 * i),
                -1 => m |= 1 << (2 * i + 1),
                _ => {}
            }
        }
        m
    }

    pub fn negated_half_edges(&self) -> u64 {
        let mut m = 0u64;
        for (i, &k) in self.coeffs.iter().enumerate() {
            match k {
                1 => m |= 1 << (2 * i + 1),
                -1 => m |= 1 << (2 * i),
                _ => {}
            }
        }
        m
    }
}

impl fmt::Display for IdealEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &k) in self.coeffs.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let sign = if k < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            write!(f, "{sign}a{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for IdealEdge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl IdealEdge {
    /// Parse `a1-a3+a4` (letters `a` or `v`) in rank `n`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad ideal edge `{s}`"));
        let mut k = vec![0i8; n];
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, r) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let r = r.strip_prefix('a').or_else(|| r.strip_prefix('v')).ok_or_else(bad)?;
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            let idx: usize = r[..end].parse().map_err(|_| bad())?;
            if idx == 0 || idx > n || k[idx - 1] != 0 {
                return Err(bad());
            }
            k[idx - 1] = sign;
            rest = &r[end..];
        }
        IdealEdge::new(&k)
    }
}

impl FromStr for IdealEdge {
    type Err = Error;

    /// Rank is the largest index mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.split(|c: char| !c.is_ascii_digit()).filter_map(|t| t.parse::<usize>().ok()).max().unwrap_or(0);
        IdealEdge::parse(n, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sign() {
        let e = IdealEdge::new(&[-1, 1, 0]).unwrap();
        assert_eq!(e.coeffs(), &[1, -1, 0]);
        assert!(IdealEdge::new(&[1, 0, 0]).is_err());
        assert!(IdealEdge::new(&[2, 1, 0]).is_err());
    }

    #[test]
    fn opposite_examples() {
        let e = IdealEdge::parse(2, "a1+a2").unwrap();
        assert_eq!(e.opposite(2).unwrap(), IdealEdge::parse(2, "a1-a2").unwrap());
        assert!(e.is_opposite(&e.opposite(1).unwrap()));
        assert!(!e.is_opposite(&e));
        assert!(IdealEdge::parse(3, "a1+a2").unwrap().opposite(3).is_err());
    }

    #[test]
    fn subordinate_examples() {
        let big = IdealEdge::parse(4, "a1+a2+a3+a4").unwrap();
        let small = IdealEdge::parse(4, "a1+a2").unwrap();
        assert!(small.is_subordinate_to(&big));
        assert!(IdealEdge::parse(4, "-a1-a2").unwrap().is_subordinate_to(&big));
        assert!(!IdealEdge::parse(4, "a1-a2").unwrap().is_subordinate_to(&big));
        assert!(!big.is_subordinate_to(&small));
    }

    #[test]
    fn parse_display() {
        let e: IdealEdge = "a1-a3+a4".parse().unwrap();
        assert_eq!(e.rank(), 4);
        assert_eq!(e.to_string(), "a1-a3+a4");
        assert_eq!(IdealEdge::parse(5, "v1-v3+v4").unwrap().rank(), 5);
        assert!(IdealEdge::parse(3, "a1+a1").is_err());
    }

    #[test]
    fn count_all() {
        assert_eq!(IdealEdge::all(2).len(), 2);
        assert_eq!(IdealEdge::all(3).len(), (27 - 1 - 6) / 2);
    }
}
