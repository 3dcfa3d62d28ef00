//! Reduced words in a free group of finite rank and automorphisms given by
//! generator images together with a recipe over the named generating set.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

/// Freely reduce a raw letter sequence. Letters are signed 1-based
/// generator indices; the sign is the exponent.
pub fn reduce(rank: usize, raw: &[i32]) -> Result<FreeWord> {
    let mut out: Vec<i32> = Vec::with_capacity(raw.len());
    for &x in raw {
        let idx = x.unsigned_abs() as usize;
        if x == 0 || idx > rank {
            return Err(Error::InvalidInput(format!("letter {x} out of range for rank {rank}")));
        }
        push_reduced(&mut out, x);
    }
    Ok(FreeWord { rank, letters: out })
}

fn push_reduced(stack: &mut Vec<i32>, x: i32) {
    if stack.last() == Some(&-x) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

/// A freely reduced word in `x_1, ..., x_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn empty(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        reduce(rank, &[index as i32])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|x| -x).collect() }
    }

    pub fn concat(&self, other: &FreeWord) -> Result<Self> {
        check_rank(self.rank, other.rank)?;
        let mut out = self.letters.clone();
        for &x in &other.letters {
            push_reduced(&mut out, x);
        }
        Ok(FreeWord { rank: self.rank, letters: out })
    }

    /// Product of a sequence of words of the same rank.
    pub fn product<'a>(rank: usize, words: impl IntoIterator<Item = &'a FreeWord>) -> Result<Self> {
        let mut acc = FreeWord::empty(rank);
        for w in words {
            acc = acc.concat(w)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &x in &base.letters {
                push_reduced(&mut out, x);
            }
        }
        FreeWord { rank: self.rank, letters: out }
    }

    /// `a b a^-1 b^-1`
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> Result<Self> {
        FreeWord::product(a.rank, [a, b, &a.inverse(), &b.inverse()])
    }

    /// `self · w · self^-1`
    pub fn conjugate(&self, w: &FreeWord) -> Result<Self> {
        FreeWord::product(self.rank, [self, w, &self.inverse()])
    }

    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters.iter().filter(|x| x.unsigned_abs() as usize == index).map(|&x| x.signum() as i64).sum()
    }

    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" || s == "e" {
            return Ok(FreeWord::empty(rank));
        }
        let mut raw = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == '·').filter(|t| !t.is_empty()) {
            let tok = tok.strip_prefix('x').ok_or_else(|| Error::Parse(format!("bad letter `{tok}`")))?;
            let (idx, exp) = match tok.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?),
                None => (tok, 1),
            };
            let idx: i32 = idx.parse().map_err(|_| Error::Parse(format!("bad index `{idx}`")))?;
            if idx <= 0 {
                return Err(Error::Parse(format!("bad index `{idx}`")));
            }
            let letter = if exp < 0 { -idx } else { idx };
            for _ in 0..exp.unsigned_abs() {
                raw.push(letter);
            }
        }
        reduce(rank, &raw)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.letters.iter().map(|&x| if x > 0 { format!("x{x}") } else { format!("x{}^-1", -x) }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::RankMismatch { left: a, right: b });
    }
    Ok(())
}

/// Names in the closed generating alphabet used by recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorName {
    /// `x_i ↦ x_k x_i x_k^-1`
    K2 {
        i: usize,
        k: usize,
    },
    /// `x_i ↦ x_i [x_k, x_l]`
    K3 {
        i: usize,
        k: usize,
        l: usize,
    },
    /// `x_1 ↦ x_1 x_2`
    Delta12,
    /// `x_1 ↦ x_1^-1`
    Omega1,
    /// swaps `x_i` and `x_{i+1}`
    Pi {
        i: usize,
    },
    Identity,
}

impl GeneratorName {
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        match *self {
            GeneratorName::K2 { i, k } => {
                if n < 2 || i == k || !(1..=n).contains(&i) || !(1..=n).contains(&k) {
                    return bad(format!("K_{i}{k} invalid in rank {n}"));
                }
            }
            GeneratorName::K3 { i, k, l } => {
                let ok = n >= 3 && [i, k, l].iter().all(|x| (1..=n).contains(x)) && i != k && i != l && k != l;
                if !ok {
                    return bad(format!("K_{i}{k}{l} invalid in rank {n}"));
                }
            }
            GeneratorName::Delta12 => {
                if n < 2 {
                    return bad("δ12 needs rank ≥ 2".into());
                }
            }
            GeneratorName::Omega1 => {
                if n < 1 {
                    return bad("Ω1 needs rank ≥ 1".into());
                }
            }
            GeneratorName::Pi { i } => {
                if i == 0 || i >= n {
                    return bad(format!("Π_{i} invalid in rank {n}"));
                }
            }
            GeneratorName::Identity => {}
        }
        Ok(())
    }

    /// Images of the generators under this generator raised to `exp = ±1`.
    pub fn images(&self, exp: i8, n: usize) -> Result<Vec<FreeWord>> {
        self.validate(n)?;
        let x = |i: usize| FreeWord { rank: n, letters: vec![i as i32] };
        let mut images: Vec<FreeWord> = (1..=n).map(x).collect();
        match *self {
            GeneratorName::K2 { i, k } => {
                let c = if exp > 0 { x(k) } else { x(k).inverse() };
                images[i - 1] = c.conjugate(&x(i))?;
            }
            GeneratorName::K3 { i, k, l } => {
                let c = FreeWord::commutator(&x(k), &x(l))?;
                let c = if exp > 0 { c } else { c.inverse() };
                images[i - 1] = x(i).concat(&c)?;
            }
            GeneratorName::Delta12 => {
                let t = if exp > 0 { x(2) } else { x(2).inverse() };
                images[0] = x(1).concat(&t)?;
            }
            GeneratorName::Omega1 => {
                images[0] = x(1).inverse();
            }
            GeneratorName::Pi { i } => {
                images.swap(i - 1, i);
            }
            GeneratorName::Identity => {}
        }
        Ok(images)
    }

    pub fn is_involution(&self) -> bool {
        matches!(self, GeneratorName::Omega1 | GeneratorName::Pi { .. } | GeneratorName::Identity)
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorName::K2 { i, k } => write!(f, "K_{i},{k}"),
            GeneratorName::K3 { i, k, l } => write!(f, "K_{i},{k},{l}"),
            GeneratorName::Delta12 => write!(f, "δ12"),
            GeneratorName::Omega1 => write!(f, "Ω1"),
            GeneratorName::Pi { i } => write!(f, "Π_{i}"),
            GeneratorName::Identity => write!(f, "id"),
        }
    }
}

/// One factor `name^exp` of a recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecipeStep {
    pub name: GeneratorName,
    pub exp: i8,
}

impl RecipeStep {
    pub fn new(name: GeneratorName, exp: i8) -> Self {
        RecipeStep { name, exp: if exp < 0 { -1 } else { 1 } }
    }

    fn inverse(self) -> Self {
        if self.name.is_involution() {
            self
        } else {
            RecipeStep { name: self.name, exp: -self.exp }
        }
    }

    pub fn to_json(&self) -> Value {
        let e = self.exp as i64;
        match self.name {
            GeneratorName::K2 { i, k } => json!(["K", i, k, e]),
            GeneratorName::K3 { i, k, l } => json!(["K3", i, k, l, e]),
            GeneratorName::Delta12 => json!(["Delta12", e]),
            GeneratorName::Omega1 => json!(["Omega1", e]),
            GeneratorName::Pi { i } => json!(["Pi", i, e]),
            GeneratorName::Identity => json!(["Id", e]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad recipe step {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let tag = arr.first().and_then(Value::as_str).ok_or_else(bad)?;
        let ints: Vec<i64> = arr[1..].iter().map(|x| x.as_i64().ok_or_else(bad)).collect::<Result<_>>()?;
        let idx = |k: usize| -> Result<usize> {
            let x = *ints.get(k).ok_or_else(bad)?;
            usize::try_from(x).map_err(|_| bad())
        };
        let (name, nargs) = match tag {
            "K" => (GeneratorName::K2 { i: idx(0)?, k: idx(1)? }, 2),
            "K3" => (GeneratorName::K3 { i: idx(0)?, k: idx(1)?, l: idx(2)? }, 3),
            "Delta12" => (GeneratorName::Delta12, 0),
            "Omega1" => (GeneratorName::Omega1, 0),
            "Pi" => (GeneratorName::Pi { i: idx(0)? }, 1),
            "Id" => (GeneratorName::Identity, 0),
            _ => return Err(bad()),
        };
        let exp = *ints.get(nargs).ok_or_else(bad)?;
        if ints.len() != nargs + 1 || (exp != 1 && exp != -1) {
            return Err(bad());
        }
        Ok(RecipeStep::new(name, exp as i8))
    }
}

/// An endomorphism of `F_n` given by the images of the generators. When a
/// recipe is present it is a word in the named generators whose evaluation
/// (`recipe[0] ∘ recipe[1] ∘ …`) equals `images`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedAutomorphism {
    rank: usize,
    images: Vec<FreeWord>,
    recipe: Option<Vec<RecipeStep>>,
}

impl MarkedAutomorphism {
    pub fn identity(rank: usize) -> Self {
        MarkedAutomorphism {
            rank,
            images: (1..=rank).map(|i| FreeWord { rank, letters: vec![i as i32] }).collect(),
            recipe: Some(Vec::new()),
        }
    }

    pub fn from_generator(name: GeneratorName, exp: i8, rank: usize) -> Result<Self> {
        let step = RecipeStep::new(name, exp);
        Ok(MarkedAutomorphism { rank, images: name.images(step.exp, rank)?, recipe: Some(vec![step]) })
    }

    /// Evaluate a recipe.
    pub fn from_recipe(rank: usize, recipe: &[RecipeStep]) -> Result<Self> {
        let mut acc = MarkedAutomorphism::identity(rank);
        for step in recipe {
            acc = acc.compose(&MarkedAutomorphism::from_generator(step.name, step.exp, rank)?)?;
        }
        Ok(acc)
    }

    /// An automorphism known only by its images. Abelianization must be
    /// invertible over the integers; no recipe is attached, so it cannot be
    /// inverted.
    pub fn from_images(rank: usize, images: Vec<FreeWord>) -> Result<Self> {
        if images.len() != rank {
            return Err(Error::InvalidInput(format!("{} images for rank {rank}", images.len())));
        }
        for w in &images {
            check_rank(rank, w.rank)?;
        }
        let phi = MarkedAutomorphism { rank, images, recipe: None };
        let det = phi.abelianize().determinant();
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(Error::InvalidInput(format!("abelianization has determinant {det}")));
        }
        Ok(phi)
    }

    /// Conjugation `x ↦ w x w^-1`, carrying the recipe `∏_{i≠j} K_ij^±`.
    pub fn inner(w: &FreeWord) -> Result<Self> {
        let n = w.rank;
        let mut recipe = Vec::new();
        for &x in w.letters() {
            let j = x.unsigned_abs() as usize;
            for i in (1..=n).filter(|&i| i != j) {
                recipe.push(RecipeStep::new(GeneratorName::K2 { i, k: j }, x.signum() as i8));
            }
        }
        let mut phi = MarkedAutomorphism::from_recipe(n, &recipe)?;
        phi.images =
            (1..=n).map(|i| w.conjugate(&FreeWord { rank: n, letters: vec![i as i32] })).collect::<Result<_>>()?;
        Ok(phi)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn recipe(&self) -> Option<&[RecipeStep]> {
        self.recipe.as_deref()
    }

    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord> {
        check_rank(self.rank, w.rank)?;
        let mut out = Vec::new();
        for &x in &w.letters {
            let img = &self.images[x.unsigned_abs() as usize - 1];
            if x > 0 {
                for &y in &img.letters {
                    push_reduced(&mut out, y);
                }
            } else {
                for &y in img.letters.iter().rev() {
                    push_reduced(&mut out, -y);
                }
            }
        }
        Ok(FreeWord { rank: self.rank, letters: out })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MarkedAutomorphism) -> Result<Self> {
        check_rank(self.rank, other.rank)?;
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<_>>()?;
        let recipe = match (&self.recipe, &other.recipe) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(MarkedAutomorphism { rank: self.rank, images, recipe })
    }

    /// Left-to-right product `a·b·c…`: the first factor is applied first.
    pub fn product<'a>(rank: usize, factors: impl IntoIterator<Item = &'a MarkedAutomorphism>) -> Result<Self> {
        let mut acc = MarkedAutomorphism::identity(rank);
        for f in factors {
            acc = f.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn invert(&self) -> Result<Self> {
        let recipe = self
            .recipe
            .as_ref()
            .ok_or_else(|| Error::Unsupported("inverting an automorphism without a recipe".into()))?;
        let inv: Vec<RecipeStep> = recipe.iter().rev().map(|s| s.inverse()).collect();
        MarkedAutomorphism::from_recipe(self.rank, &inv)
    }

    /// Row `j` holds the exponent sums of `φ(x_j)`.
    pub fn abelianize(&self) -> IntMatrix {
        let n = self.rank;
        let rows = self.images.iter().map(|w| (1..=n).map(|k| BigInt::from(w.exponent_sum(k))).collect()).collect();
        IntMatrix::from_rows(rows).expect("square abelianization")
    }

    /// A word `g` with `φ(x_i) = g x_i g^-1` for every `i`, if one exists.
    pub fn is_inner(&self) -> Option<FreeWord> {
        let n = self.rank;
        let first = &self.images[0];
        let len = first.len();
        if len.is_multiple_of(2) || first.letters[len / 2] != 1 {
            return None;
        }
        let half = FreeWord { rank: n, letters: first.letters[..len / 2].to_vec() };
        let x1 = FreeWord { rank: n, letters: vec![1] };
        if half.conjugate(&x1).ok()? != *first {
            return None;
        }
        let bound = self.images.iter().map(FreeWord::len).max().unwrap_or(0) as i64 + 1;
        (-bound..=bound).find_map(|k| {
            let g = half.concat(&x1.pow(k)).ok()?;
            let ok = (1..=n).all(|i| {
                let xi = FreeWord { rank: n, letters: vec![i as i32] };
                g.conjugate(&xi).map(|c| c == self.images[i - 1]).unwrap_or(false)
            });
            ok.then_some(g)
        })
    }

    /// Equality in `Out(F_n)`.
    pub fn out_equal(&self, other: &MarkedAutomorphism) -> Result<bool> {
        Ok(self.compose(&other.invert()?)?.is_inner().is_some())
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "rank": self.rank,
            "images": self.images.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        });
        if let Some(r) = &self.recipe {
            obj["recipe"] = Value::Array(r.iter().map(RecipeStep::to_json).collect());
        }
        obj
    }

    /// Parse the JSON form. A recipe, when present, must evaluate to the
    /// listed images.
    pub fn from_json(v: &Value) -> Result<Self> {
        let rank = v["rank"].as_u64().ok_or_else(|| Error::Parse("missing rank".into()))? as usize;
        let images = v["images"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing images".into()))?
            .iter()
            .map(|w| {
                w.as_str()
                    .ok_or_else(|| Error::Parse("image must be a string".into()))
                    .and_then(|s| FreeWord::parse(rank, s))
            })
            .collect::<Result<Vec<_>>>()?;
        match v.get("recipe") {
            Some(Value::Array(steps)) => {
                let recipe = steps.iter().map(RecipeStep::from_json).collect::<Result<Vec<_>>>()?;
                let phi = MarkedAutomorphism::from_recipe(rank, &recipe)?;
                if phi.images != images {
                    return Err(Error::InvalidInput("recipe does not reproduce images".into()));
                }
                Ok(phi)
            }
            Some(Value::Null) | None => MarkedAutomorphism::from_images(rank, images),
            Some(_) => Err(Error::Parse("recipe must be an array".into())),
        }
    }
}

impl fmt::Display for MarkedAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for MarkedAutomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkedAutomorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        MarkedAutomorphism::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Parses words of unspecified rank; the rank is the largest index seen.
impl FromStr for FreeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rank = s
            .split_whitespace()
            .filter_map(|t| t.trim_start_matches('x').split('^').next()?.parse::<usize>().ok())
            .max()
            .unwrap_or(1);
        FreeWord::parse(rank, s)
    }
}
