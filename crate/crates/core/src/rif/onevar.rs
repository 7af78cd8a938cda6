use serde::{Deserialize, Serialize};

use crate::polynomial::roots::{deflate, roots_of_coeffs};
use crate::polynomial::MultiPoly;
use crate::{unimodular, Error, Result, C64};

/// Numerator and denominator roots closer than
/// `PAIR_TOL · max(1, |root|)` are treated as one common factor.
pub const PAIR_TOL: f64 = 1e-8;
/// Roots within this distance of the unit circle are boundary roots.
pub const BOUNDARY_TOL: f64 = 1e-7;
/// Torus defect allowed by the inner check, relative to the coefficient scale.
pub const INNER_TOL: f64 = 1e-8;
/// Denominator moduli below this make evaluation fail.
pub const DIVISION_TOL: f64 = 1e-12;

const INNER_SAMPLES: usize = 64;

/// A reduced one-variable rational function `num / den`.
///
/// Construction cancels common root pairs and normalizes the denominator so
/// that its constant term is one (or its leading coefficient, if the constant
/// term is negligible). `inner` records whether the result passed the inner
/// check: no denominator zero in the open disc and `|num| = |den|` on the
/// sampled circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneVarRational {
    num: MultiPoly,
    den: MultiPoly,
    inner: bool,
}

fn as_univariate(p: &MultiPoly, what: &str) -> Result<Vec<C64>> {
    p.coeffs_1d().map_err(|_| Error::arg(format!("{what} must be a one-variable polynomial")))
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

impl OneVarRational {
    /// Reduces `num / den` and runs the inner check.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        let n = as_univariate(&num, "numerator")?;
        let d = as_univariate(&den, "denominator")?;
        if den.is_zero() {
            return Err(Error::arg("denominator is the zero polynomial"));
        }
        let (n, d) = if num.is_zero() { (vec![C64::new(0.0, 0.0)], vec![C64::new(1.0, 0.0)]) } else { cancel_common(&n, &d)? };
        let (n, d) = normalize(n, d);
        let mut out = OneVarRational { num: MultiPoly::univariate(&n), den: MultiPoly::univariate(&d), inner: false };
        out.inner = out.check_inner();
        Ok(out)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_inner(&self) -> bool {
        self.inner
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().unwrap_or(0).max(self.den.total_degree().unwrap_or(0))
    }

    /// Number of numerator roots strictly inside the disc (modulus below
    /// `1 − BOUNDARY_TOL`), counted with multiplicity.
    pub fn zeros_in_disc(&self) -> usize {
        if self.num.is_zero() {
            return 0;
        }
        let c = self.num.coeffs_1d().expect("univariate");
        roots_of_coeffs(&c).iter().filter(|r| r.norm() < 1.0 - BOUNDARY_TOL).count()
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let den = self.den.eval_unchecked(&[z]);
        if den.norm() < DIVISION_TOL {
            return Err(Error::SingularPoint { modulus: den.norm(), threshold: DIVISION_TOL });
        }
        Ok(self.num.eval_unchecked(&[z]) / den)
    }

    /// Coefficientwise distance to another reduced function, after both are
    /// in normal form.
    pub fn max_coeff_diff(&self, other: &OneVarRational) -> f64 {
        let a = self.num.max_coeff_diff(&other.num).expect("univariate");
        let b = self.den.max_coeff_diff(&other.den).expect("univariate");
        a.max(b)
    }

    fn check_inner(&self) -> bool {
        let d = self.den.coeffs_1d().expect("univariate");
        let n = self.num.coeffs_1d().expect("univariate");
        if roots_of_coeffs(&d).iter().any(|r| r.norm() < 1.0 - BOUNDARY_TOL) {
            return false;
        }
        let scale = d.iter().chain(&n).map(|c| c.norm()).sum::<f64>().max(1.0);
        (0..INNER_SAMPLES).all(|k| {
            let z = unimodular(std::f64::consts::TAU * (k as f64 + 0.5) / INNER_SAMPLES as f64);
            (horner(&n, z).norm() - horner(&d, z).norm()).abs() <= INNER_TOL * scale
        })
    }
}

/// Greedily pairs numerator and denominator roots by distance and divides out
/// every pair within tolerance.
fn cancel_common(num: &[C64], den: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    let rn = roots_of_coeffs(num);
    let rd = roots_of_coeffs(den);
    let mut cands: Vec<(f64, usize, usize)> = Vec::with_capacity(rn.len() * rd.len());
    for (i, a) in rn.iter().enumerate() {
        for (j, b) in rd.iter().enumerate() {
            cands.push(((a - b).norm(), i, j));
        }
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    let tol = |r: C64| PAIR_TOL * r.norm().max(1.0);
    let mut used_n = vec![false; rn.len()];
    let mut used_d = vec![false; rd.len()];
    let mut common = Vec::new();
    for &(dist, i, j) in &cands {
        if used_n[i] || used_d[j] || dist > tol(rn[i]) {
            continue;
        }
        used_n[i] = true;
        used_d[j] = true;
        common.push((rn[i] + rd[j]) * 0.5);
    }
    for &(dist, i, j) in &cands {
        if !used_n[i] && !used_d[j] && dist > tol(rn[i]) && dist <= 10.0 * tol(rn[i]) {
            return Err(Error::ReductionUnstable { distance: dist, tolerance: tol(rn[i]) });
        }
    }
    let mut n = trim(num.to_vec());
    let mut d = trim(den.to_vec());
    for r in common {
        n = deflate(&n, r);
        d = deflate(&d, r);
    }
    Ok((n, d))
}

fn trim(mut c: Vec<C64>) -> Vec<C64> {
    while c.len() > 1 && *c.last().unwrap() == C64::new(0.0, 0.0) {
        c.pop();
    }
    c
}

fn normalize(num: Vec<C64>, den: Vec<C64>) -> (Vec<C64>, Vec<C64>) {
    let max = den.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let s = if den[0].norm() > 1e-8 * max { den[0] } else { *den.iter().rev().find(|c| c.norm() > 0.0).unwrap() };
    (num.iter().map(|c| c / s).collect(), den.iter().map(|c| c / s).collect())
}
