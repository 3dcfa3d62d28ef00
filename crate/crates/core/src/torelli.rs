//! Magnus generators of the Torelli group, the `Out(F_n)` generators used to
//! conjugate them, and exact checks of the identities relating them.
//!
//! Products written as lists are read left to right: the first factor is
//! applied first (see [`MarkedAutomorphism::product`]).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{FreeWord, GeneratorName, MarkedAutomorphism};

pub fn magnus_k(i: usize, k: usize, n: usize) -> Result<MarkedAutomorphism> {
    MarkedAutomorphism::from_generator(GeneratorName::K2 { i, k }, 1, n)
}

pub fn magnus_k3(i: usize, k: usize, l: usize, n: usize) -> Result<MarkedAutomorphism> {
    MarkedAutomorphism::from_generator(GeneratorName::K3 { i, k, l }, 1, n)
}

pub fn out_generator(name: GeneratorName, n: usize) -> Result<MarkedAutomorphism> {
    MarkedAutomorphism::from_generator(name, 1, n)
}

pub fn torelli_membership(phi: &MarkedAutomorphism) -> bool {
    phi.abelianize().is_identity()
}

/// All `K_ik` and the `K_ikl` with `k < l` (the others are inverses).
pub fn magnus_generators(n: usize) -> Vec<GeneratorName> {
    let mut out = Vec::new();
    for i in 1..=n {
        for k in (1..=n).filter(|&k| k != i) {
            out.push(GeneratorName::K2 { i, k });
        }
    }
    for i in 1..=n {
        for k in (1..=n).filter(|&k| k != i) {
            for l in (k + 1..=n).filter(|&l| l != i) {
                out.push(GeneratorName::K3 { i, k, l });
            }
        }
    }
    out
}

/// `δ12`, `Ω1` and every `Π_i`.
pub fn out_generators(n: usize) -> Vec<GeneratorName> {
    let mut out = Vec::new();
    if n >= 2 {
        out.push(GeneratorName::Delta12);
    }
    out.push(GeneratorName::Omega1);
    out.extend((1..n).map(|i| GeneratorName::Pi { i }));
    out
}

fn k2(i: usize, k: usize, e: i8, n: usize) -> Result<MarkedAutomorphism> {
    MarkedAutomorphism::from_generator(GeneratorName::K2 { i, k }, e, n)
}

fn k3(i: usize, k: usize, l: usize, e: i8, n: usize) -> Result<MarkedAutomorphism> {
    MarkedAutomorphism::from_generator(GeneratorName::K3 { i, k, l }, e, n)
}

fn check_appendix_args(l: usize, n: usize) -> Result<()> {
    if n < 3 || l < 3 || l > n {
        return Err(Error::InvalidInput(format!("need 3 ≤ l ≤ n, got l={l}, n={n}")));
    }
    Ok(())
}

/// Both sides of `δ12 K_2l1 δ12⁻¹ = K_l2 K_l1⁻¹ K_1l K_l1 K_2l1 K_12l K_l2⁻¹ K_2l⁻¹`.
pub fn appendix_identity_sides(l: usize, n: usize) -> Result<(MarkedAutomorphism, MarkedAutomorphism)> {
    check_appendix_args(l, n)?;
    let d = MarkedAutomorphism::from_generator(GeneratorName::Delta12, 1, n)?;
    let lhs = MarkedAutomorphism::product(n, &[d.clone(), k3(2, l, 1, 1, n)?, d.invert()?])?;
    let rhs = MarkedAutomorphism::product(
        n,
        &[
            k2(l, 2, 1, n)?,
            k2(l, 1, -1, n)?,
            k2(1, l, 1, n)?,
            k2(l, 1, 1, n)?,
            k3(2, l, 1, 1, n)?,
            k3(1, 2, l, 1, n)?,
            k2(l, 2, -1, n)?,
            k2(2, l, -1, n)?,
        ],
    )?;
    Ok((lhs, rhs))
}

/// The conjugation identity, as equality in `Out(F_n)`.
pub fn verify_appendix_identity(l: usize, n: usize) -> Result<bool> {
    let (lhs, rhs) = appendix_identity_sides(l, n)?;
    lhs.out_equal(&rhs)
}

/// `Q_m`: conjugate every `x_j` with `j ∉ {i, m}` by `x_m^e`.
fn conjugate_all_but(i: usize, m: usize, e: i8, n: usize) -> Result<MarkedAutomorphism> {
    let factors = (1..=n).filter(|&j| j != i && j != m).map(|j| k2(j, m, e, n)).collect::<Result<Vec<_>>>()?;
    MarkedAutomorphism::product(n, &factors)
}

/// `ψ : x_i ↦ x_i [h x_k h⁻¹, h x_l h⁻¹]`.
pub fn conjugated_commutator(i: usize, k: usize, l: usize, h: &FreeWord) -> Result<MarkedAutomorphism> {
    let n = h.rank();
    GeneratorName::K3 { i, k, l }.validate(n)?;
    let xk = h.conjugate(&FreeWord::generator(n, k)?)?;
    let xl = h.conjugate(&FreeWord::generator(n, l)?)?;
    let mut images: Vec<FreeWord> = (1..=n).map(|j| FreeWord::generator(n, j)).collect::<Result<_>>()?;
    images[i - 1] = images[i - 1].concat(&FreeWord::commutator(&xk, &xl)?)?;
    MarkedAutomorphism::from_images(n, images)
}

/// `P⁻¹ K_ikl P` with `P = Q_{i_p} ⋯ Q_{i_1}` for `h = x_{i_1} ⋯ x_{i_p}`.
pub fn conjugation_formula_rhs(i: usize, k: usize, l: usize, h: &[i32], n: usize) -> Result<MarkedAutomorphism> {
    GeneratorName::K3 { i, k, l }.validate(n)?;
    for &m in h {
        let idx = m.unsigned_abs() as usize;
        if m == 0 || idx > n || idx == i {
            return Err(Error::InvalidInput(format!("letter {m} of h invalid for i={i}, n={n}")));
        }
    }
    let p_factors = h
        .iter()
        .rev()
        .map(|&m| conjugate_all_but(i, m.unsigned_abs() as usize, m.signum() as i8, n))
        .collect::<Result<Vec<_>>>()?;
    let p = MarkedAutomorphism::product(n, &p_factors)?;
    MarkedAutomorphism::product(n, &[p.invert()?, k3(i, k, l, 1, n)?, p])
}

pub fn verify_conjugation_formula(i: usize, k: usize, l: usize, h: &[i32], n: usize) -> Result<bool> {
    let rhs = conjugation_formula_rhs(i, k, l, h, n)?;
    let hw = crate::freegroup::reduce(n, h)?;
    let psi = conjugated_commutator(i, k, l, &hw)?;
    psi.out_equal(&rhs)
}

/// `x_i ↦ x_i^w` for one index `i`, where `w` avoids `x_i`.
fn conjugate_one(i: usize, w: &FreeWord) -> Result<MarkedAutomorphism> {
    let n = w.rank();
    let mut acc = MarkedAutomorphism::identity(n);
    for &x in w.letters() {
        let j = x.unsigned_abs() as usize;
        if j == i {
            return Err(Error::InvalidInput(format!("conjugator {w} involves x{i}")));
        }
        acc = k2(i, j, x.signum() as i8, n)?.compose(&acc)?;
    }
    Ok(acc)
}

/// `x_i ↦ [x1,x2]^{p_i} x_i [x1,x2]^{q_i}` for `i = 3..n`.
pub fn g_subgroup_element(p: &[i64], q: &[i64], n: usize) -> Result<MarkedAutomorphism> {
    if n < 3 || p.len() != n - 2 || q.len() != n - 2 {
        return Err(Error::InvalidInput(format!(
            "need n ≥ 3 and n−2 parameters each, got n={n}, |p|={}, |q|={}",
            p.len(),
            q.len()
        )));
    }
    let c = FreeWord::commutator(&FreeWord::generator(n, 1)?, &FreeWord::generator(n, 2)?)?;
    let mut acc = MarkedAutomorphism::identity(n);
    for (idx, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        let i = idx + 3;
        let s = pi + qi;
        let e = if s < 0 { -1 } else { 1 };
        for _ in 0..s.unsigned_abs() {
            acc = acc.compose(&k3(i, 1, 2, e, n)?)?;
        }
        acc = conjugate_one(i, &c.pow(pi))?.compose(&acc)?;
    }
    Ok(acc)
}

/// Outcome of conjugating one Magnus generator by one `Out(F_n)` generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConjugateEvidence {
    /// Out-equal to a single Magnus generator or its inverse.
    Single(String),
    /// Out-equal to a product of two Magnus generators or inverses.
    Pair(String, String),
    /// Covered by the long identity for `δ12 K_2l1 δ12⁻¹`.
    Formula,
    /// Only the abelianization condition was checked.
    KernelOnly,
    /// Not in the Torelli group: a genuine failure.
    NotTorelli,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugateCase {
    pub conjugator: String,
    pub generator: String,
    pub evidence: ConjugateEvidence,
}

impl ConjugateCase {
    pub fn passed(&self) -> bool {
        self.evidence != ConjugateEvidence::NotTorelli
    }
}

fn step_string(name: GeneratorName, e: i8) -> String {
    if e < 0 {
        format!("{name}^-1")
    } else {
        name.to_string()
    }
}

/// For every `Out(F_n)` generator `c` and Magnus generator `K`, classify
/// `c K c⁻¹`.
pub fn verify_magnus_conjugates(n: usize) -> Result<Vec<ConjugateCase>> {
    let gens = magnus_generators(n);
    let mut words: Vec<(String, MarkedAutomorphism)> = Vec::new();
    for &g in &gens {
        for e in [1i8, -1] {
            words.push((step_string(g, e), MarkedAutomorphism::from_generator(g, e, n)?));
        }
    }
    let cases: Vec<(GeneratorName, GeneratorName)> =
        out_generators(n).into_iter().flat_map(|c| gens.iter().map(move |&g| (c, g))).collect();
    cases
        .par_iter()
        .map(|&(c, g)| {
            let cm = out_generator(c, n)?;
            let x = MarkedAutomorphism::product(n, &[cm.clone(), out_generator(g, n)?, cm.invert()?])?;
            let evidence = classify(&x, c, g, n, &words)?;
            Ok(ConjugateCase { conjugator: c.to_string(), generator: g.to_string(), evidence })
        })
        .collect()
}

fn classify(
    x: &MarkedAutomorphism,
    c: GeneratorName,
    g: GeneratorName,
    n: usize,
    words: &[(String, MarkedAutomorphism)],
) -> Result<ConjugateEvidence> {
    if !torelli_membership(x) {
        return Ok(ConjugateEvidence::NotTorelli);
    }
    for (name, w) in words {
        if x.out_equal(w)? {
            return Ok(ConjugateEvidence::Single(name.clone()));
        }
    }
    if let (GeneratorName::Delta12, GeneratorName::K3 { i: 2, k: 1, l }) = (c, g) {
        let (_, rhs) = appendix_identity_sides(l, n)?;
        if x.out_equal(&rhs.invert()?)? {
            return Ok(ConjugateEvidence::Formula);
        }
    }
    for (a, wa) in words {
        let rest = x.compose(&wa.invert()?)?;
        if !torelli_membership(&rest) {
            continue;
        }
        for (b, wb) in words {
            if rest.out_equal(wb)? {
                return Ok(ConjugateEvidence::Pair(b.clone(), a.clone()));
            }
        }
    }
    Ok(ConjugateEvidence::KernelOnly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, raw: &[i32]) -> FreeWord {
        crate::freegroup::reduce(n, raw).unwrap()
    }

    #[test]
    fn magnus_examples() {
        let k = magnus_k(2, 3, 3).unwrap();
        assert_eq!(k.images()[1], w(3, &[3, 2, -3]));
        assert!(torelli_membership(&magnus_k(1, 2, 3).unwrap()));
        let kk = magnus_k(1, 2, 3).unwrap().compose(&magnus_k(1, 2, 3).unwrap()).unwrap();
        assert_eq!(kk.images()[0], w(3, &[2, 2, 1, -2, -2]));
        assert!(magnus_k(2, 2, 3).is_err());
        assert!(magnus_k(1, 4, 3).is_err());
    }

    #[test]
    fn magnus_k3_examples() {
        let k = magnus_k3(1, 2, 3, 3).unwrap();
        assert_eq!(k.images()[0], w(3, &[1, 2, 3, -2, -3]));
        let prod = k.compose(&magnus_k3(1, 3, 2, 3).unwrap()).unwrap();
        assert_eq!(prod.images(), MarkedAutomorphism::identity(3).images());
        assert!(torelli_membership(&magnus_k3(1, 2, 3, 4).unwrap()));
        assert!(magnus_k3(1, 1, 3, 3).is_err());
        assert!(magnus_k3(1, 2, 3, 2).is_err());
    }

    #[test]
    fn out_generator_examples() {
        let p = out_generator(GeneratorName::Pi { i: 1 }, 3).unwrap();
        assert_eq!(p.images()[0], w(3, &[2]));
        assert_eq!(p.images()[1], w(3, &[1]));
        let o = out_generator(GeneratorName::Omega1, 3).unwrap();
        assert_eq!(o.compose(&o).unwrap().images(), MarkedAutomorphism::identity(3).images());
        let x = MarkedAutomorphism::product(3, &[p.clone(), o, p]).unwrap();
        let d = out_generator(GeneratorName::Delta12, 3).unwrap();
        let conj = MarkedAutomorphism::product(3, &[x.clone(), d.clone(), x.invert().unwrap()]).unwrap();
        assert_eq!(conj.images(), d.invert().unwrap().images());
        assert!(out_generator(GeneratorName::Pi { i: 3 }, 3).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(!torelli_membership(&out_generator(GeneratorName::Delta12, 3).unwrap()));
        let c = magnus_k(1, 2, 3).unwrap().compose(&magnus_k(2, 1, 3).unwrap()).unwrap();
        assert!(torelli_membership(&c));
    }

    #[test]
    fn appendix_identity_small() {
        assert!(verify_appendix_identity(3, 3).unwrap());
        let (lhs, rhs) = appendix_identity_sides(3, 3).unwrap();
        assert_eq!(lhs.images(), rhs.images());
        assert!(verify_appendix_identity(2, 3).is_err());
        assert!(verify_appendix_identity(4, 3).is_err());
    }

    #[test]
    fn conjugation_formula_small() {
        assert!(verify_conjugation_formula(1, 2, 3, &[], 3).unwrap());
        assert!(verify_conjugation_formula(1, 2, 3, &[2], 3).unwrap());
        assert!(verify_conjugation_formula(1, 2, 3, &[2, 3], 4).unwrap());
        assert!(verify_conjugation_formula(1, 2, 3, &[1], 3).is_err());
        let psi = conjugated_commutator(1, 2, 3, &FreeWord::empty(3)).unwrap();
        assert_eq!(psi.images(), magnus_k3(1, 2, 3, 3).unwrap().images());
    }

    #[test]
    fn g_subgroup_examples() {
        let id = g_subgroup_element(&[0], &[0], 3).unwrap();
        assert_eq!(id.images(), MarkedAutomorphism::identity(3).images());
        let g = g_subgroup_element(&[1], &[0], 3).unwrap();
        assert_eq!(g.images()[2], w(3, &[1, 2, -1, -2, 3]));
        let g = g_subgroup_element(&[-1, 1], &[1, 0], 4).unwrap();
        assert_eq!(g.images()[2], w(4, &[2, 1, -2, -1, 3, 1, 2, -1, -2]));
        assert_eq!(g.images()[3], w(4, &[1, 2, -1, -2, 4]));
        let re = MarkedAutomorphism::from_recipe(4, g.recipe().unwrap()).unwrap();
        assert_eq!(re.images(), g.images());
        assert!(torelli_membership(&g));
        assert!(g_subgroup_element(&[1], &[0, 0], 3).is_err());
    }

    #[test]
    fn conjugates_rank3_are_torelli() {
        let cases = verify_magnus_conjugates(3).unwrap();
        assert_eq!(cases.len(), 4 * magnus_generators(3).len());
        assert!(cases.iter().all(ConjugateCase::passed));
        assert!(cases.iter().any(|c| c.evidence == ConjugateEvidence::Formula
            || matches!(c.evidence, ConjugateEvidence::Pair(..) | ConjugateEvidence::Single(_))));
    }
}
