//! Sparse multivariate polynomials with complex coefficients.
//!
//! Terms live in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! graded lexicographic, so iteration and serialization order are fixed.
//! After every arithmetic operation coefficients whose modulus falls below
//! `1e-14` times the largest coefficient modulus are dropped.

pub(crate) mod roots;
mod stability;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::json::ComplexJson;
use crate::{Error, Result, C64};

pub use roots::{roots_1d, ROOT_RECONSTRUCTION_TOL};
pub use stability::{is_stable, is_stable_with, StabilityGrid, StabilityReport};

/// Relative threshold for dropping coefficients after arithmetic.
pub const PRUNE_REL: f64 = 1e-14;

/// Exponent vector `(α₁, …, αₙ)` of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// `e_i`, the exponent of the `i`-th coordinate function.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≤ bound`.
    pub fn dominated_by(&self, bound: &MultiIndex) -> bool {
        self.0.len() == bound.0.len() && self.0.iter().zip(&bound.0).all(|(a, b)| a <= b)
    }

    fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic: total degree first, then exponent vectors
/// lexicographically.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

/// A polynomial in `nvars` complex variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, C64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C64::new(1.0, 0.0))
    }

    pub fn monomial(exp: MultiIndex, c: C64) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if c != C64::new(0.0, 0.0) {
            terms.insert(exp, c);
        }
        MultiPoly { nvars, terms }
    }

    /// The coordinate function `z_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, i), C64::new(1.0, 0.0))
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed.
    pub fn from_terms<I, E>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, C64)>,
        E: Into<MultiIndex>,
    {
        let mut map: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (exp, c) in terms {
            let exp = exp.into();
            if exp.len() != nvars {
                return Err(Error::Dimension { expected: nvars, got: exp.len() });
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::arg(format!("non-finite coefficient at {:?}", exp.0)));
            }
            *map.entry(exp).or_insert(C64::new(0.0, 0.0)) += c;
        }
        Ok(MultiPoly { nvars, terms: map }.pruned())
    }

    /// One-variable polynomial from ascending coefficients `c₀ + c₁z + …`.
    pub fn univariate(coeffs: &[C64]) -> Self {
        let terms = coeffs.iter().enumerate().map(|(k, &c)| (vec![k as u32], c));
        Self::from_terms(1, terms).expect("univariate terms are well formed")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> C64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> C64 {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    /// Componentwise maximum exponent, all zeros for the zero polynomial.
    pub fn multidegree(&self) -> MultiIndex {
        let mut d = vec![0; self.nvars];
        for exp in self.terms.keys() {
            for (m, e) in d.iter_mut().zip(&exp.0) {
                *m = (*m).max(*e);
            }
        }
        MultiIndex(d)
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn pruned(mut self) -> Self {
        let max = self.max_coeff_norm();
        let cut = PRUNE_REL * max;
        self.terms.retain(|_, c| c.norm() > cut && c.norm() > 0.0);
        self
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: z.len() });
        }
        Ok(())
    }

    /// `Σ c_α z^α` over the stored terms.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(exp, c)| {
                exp.0.iter().zip(z).fold(*c, |acc, (&e, &zi)| if e == 0 { acc } else { acc * zi.powu(e) })
            })
            .sum()
    }

    /// Evaluates all variables but the last, returning the ascending
    /// coefficients of the remaining polynomial in the last variable.
    pub(crate) fn partial_eval_last(&self, prefix: &[C64]) -> Vec<C64> {
        debug_assert_eq!(prefix.len() + 1, self.nvars);
        let last = self.nvars - 1;
        let deg = self.multidegree().0[last] as usize;
        let mut out = vec![C64::new(0.0, 0.0); deg + 1];
        for (exp, c) in &self.terms {
            let v = exp.0[..last]
                .iter()
                .zip(prefix)
                .fold(*c, |acc, (&e, &zi)| if e == 0 { acc } else { acc * zi.powu(e) });
            out[exp.0[last] as usize] += v;
        }
        out
    }

    /// Ascending coefficients of a one-variable polynomial.
    pub fn coeffs_1d(&self) -> Result<Vec<C64>> {
        if self.nvars != 1 {
            return Err(Error::Dimension { expected: 1, got: self.nvars });
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![C64::new(0.0, 0.0); deg + 1];
        for (exp, c) in &self.terms {
            out[exp.0[0] as usize] = *c;
        }
        Ok(out)
    }

    fn check_same(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (exp, c) in &other.terms {
            *terms.entry(exp.clone()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        Ok(MultiPoly { nvars: self.nvars, terms }.pruned())
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        MultiPoly { nvars: self.nvars, terms }.pruned()
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        let mut terms: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *terms.entry(ea.add(eb)).or_insert(C64::new(0.0, 0.0)) += ca * cb;
            }
        }
        Ok(MultiPoly { nvars: self.nvars, terms }.pruned())
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// Multiplies by the monomial `z^d`.
    pub fn shift(&self, d: &MultiIndex) -> Result<MultiPoly> {
        if d.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: d.len() });
        }
        let terms = self.terms.iter().map(|(e, c)| (e.add(d), *c)).collect();
        Ok(MultiPoly { nvars: self.nvars, terms })
    }

    /// Substitutes `z_r ↦ images[r]`, where every image is a polynomial in
    /// the same number of variables `m`. The result lives in `m` variables.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: images.len() });
        }
        let m = match images.first() {
            Some(p) => p.nvars,
            None => return Ok(self.clone()),
        };
        if let Some(bad) = images.iter().find(|p| p.nvars != m) {
            return Err(Error::Dimension { expected: m, got: bad.nvars });
        }
        let degs = self.multidegree();
        // powers[r][k] = images[r]^k
        let powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .zip(&degs.0)
            .map(|(img, &d)| {
                let mut v = vec![MultiPoly::one(m)];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(img).expect("same dimension");
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (exp, c) in &self.terms {
            let mut term = MultiPoly::constant(m, *c);
            for (r, &e) in exp.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[r][e as usize])?;
                }
            }
            for (e, v) in term.terms {
                *acc.entry(e).or_insert(C64::new(0.0, 0.0)) += v;
            }
        }
        Ok(MultiPoly { nvars: m, terms: acc }.pruned())
    }

    /// One-variable composition `p(g(z))`.
    pub fn compose_univariate(&self, g: &MultiPoly) -> Result<MultiPoly> {
        if self.nvars != 1 {
            return Err(Error::Dimension { expected: 1, got: self.nvars });
        }
        self.compose(std::slice::from_ref(g))
    }

    /// The reflection `z^d · conj(p)(1/z̄₁, …, 1/z̄ₙ)`: each term `c z^α`
    /// becomes `conj(c) z^{d−α}`.
    pub fn reflect(&self, d: &MultiIndex) -> Result<MultiPoly> {
        if d.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: d.len() });
        }
        let mut terms = BTreeMap::new();
        for (exp, c) in &self.terms {
            if !exp.dominated_by(d) {
                return Err(Error::Domination { exponent: exp.0.clone(), bound: d.0.clone() });
            }
            let rev = MultiIndex(d.0.iter().zip(&exp.0).map(|(a, b)| a - b).collect());
            terms.insert(rev, c.conj());
        }
        Ok(MultiPoly { nvars: self.nvars, terms })
    }

    /// Largest coefficientwise difference `max |a_α − b_α|`.
    pub fn max_coeff_diff(&self, other: &MultiPoly) -> Result<f64> {
        self.check_same(other)?;
        let mut m = 0.0_f64;
        for (e, c) in &self.terms {
            m = m.max((c - other.coeff(e)).norm());
        }
        for (e, c) in &other.terms {
            if !self.terms.contains_key(e) {
                m = m.max(c.norm());
            }
        }
        Ok(m)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (r, &e) in exp.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·z{}", r + 1)?,
                    _ => write!(f, "·z{}^{}", r + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: e.0.clone(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        if raw.nvars == 0 {
            return Err(serde::de::Error::custom("nvars must be positive"));
        }
        let mut terms = BTreeMap::new();
        for (i, t) in raw.terms.into_iter().enumerate() {
            if t.exp.len() != raw.nvars {
                return Err(serde::de::Error::custom(format!(
                    "terms[{i}].exp has length {}, expected {}",
                    t.exp.len(),
                    raw.nvars
                )));
            }
            let c = C64::from(ComplexJson { re: t.re, im: t.im });
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(serde::de::Error::custom(format!("terms[{i}] is not finite")));
            }
            if terms.insert(MultiIndex(t.exp), c).is_some() {
                return Err(serde::de::Error::custom(format!("terms[{i}] repeats an exponent")));
            }
        }
        // Stored values are taken verbatim so that files round-trip bit-exactly.
        terms.retain(|_, c: &mut C64| c.norm() > 0.0);
        Ok(MultiPoly { nvars: raw.nvars, terms })
    }
}
