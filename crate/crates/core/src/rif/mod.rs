//! Rational inner functions on the polydisc in Rudin normal form
//!
//! ```text
//! f(z) = τ · q̃(z) / q(z),    q̃(z) = z^d · conj(q)(1/z̄₁, …, 1/z̄ₙ)
//! ```
//!
//! with `|τ| = 1`, `d` dominating the multidegree of `q`, and `q` free of
//! zeros on the open polydisc.

mod onevar;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use onevar::{OneVarRational, BOUNDARY_TOL, DIVISION_TOL, INNER_TOL, PAIR_TOL};

use crate::exec::Execution;
use crate::geometry::AnalyticDisc;
use crate::json::ComplexJson;
use crate::polynomial::{is_stable_with, MultiIndex, MultiPoly, StabilityGrid};
use crate::{unimodular, Error, Result, C64};

const TAU_TOL: f64 = 1e-12;
const CLOSED_POLYDISC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalInnerFunction {
    tau: C64,
    d: MultiIndex,
    q: MultiPoly,
    numerator: MultiPoly,
}

/// Builds `τ q̃ / q` after checking `|τ| = 1`, domination and stability of `q`
/// on the default grid for its dimension.
pub fn make_rif(tau: C64, d: MultiIndex, q: MultiPoly) -> Result<RationalInnerFunction> {
    let grid = StabilityGrid::for_nvars(q.nvars());
    make_rif_with(tau, d, q, &grid, Execution::default())
}

pub fn make_rif_with(
    tau: C64,
    d: MultiIndex,
    q: MultiPoly,
    grid: &StabilityGrid,
    exec: Execution,
) -> Result<RationalInnerFunction> {
    if (tau.norm() - 1.0).abs() > TAU_TOL {
        return Err(Error::arg(format!("τ must be unimodular, got |τ| = {}", tau.norm())));
    }
    if d.len() != q.nvars() {
        return Err(Error::Dimension { expected: q.nvars(), got: d.len() });
    }
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let tau = crate::float::inward(tau);
    let numerator = q.reflect(&d)?.scale(tau);
    let report = is_stable_with(&q, grid, exec)?;
    if !report.stable {
        return Err(Error::Unstable {
            min_modulus: report.min_modulus,
            witness: report.witness.iter().map(|z| (z.re, z.im)).collect(),
        });
    }
    Ok(RationalInnerFunction { tau, d, q, numerator })
}

/// Accepts an arbitrary fraction `p / q` only if it is already in Rudin form,
/// `p = τ q̃` with `d` the multidegree of `p`, up to `rel_tol` relative to
/// the largest coefficient of `p`.
pub fn from_fraction(p: &MultiPoly, q: &MultiPoly, rel_tol: f64) -> Result<RationalInnerFunction> {
    if p.nvars() != q.nvars() {
        return Err(Error::Dimension { expected: q.nvars(), got: p.nvars() });
    }
    let d = p.multidegree();
    let q0 = q.constant_term();
    if q0.norm() == 0.0 {
        return Err(Error::arg("denominator vanishes at the origin"));
    }
    let tau = p.coeff(&d) / q0.conj();
    if (tau.norm() - 1.0).abs() > rel_tol.max(TAU_TOL) {
        return Err(Error::arg(format!("fraction is not in Rudin form: |τ| = {}", tau.norm())));
    }
    let tau = tau / tau.norm();
    let candidate = q.reflect(&d)?.scale(tau);
    let diff = candidate.max_coeff_diff(p)?;
    if diff > rel_tol * p.max_coeff_norm() {
        return Err(Error::arg(format!("fraction is not in Rudin form: coefficient mismatch {diff:e}")));
    }
    make_rif(tau, d, q.clone())
}

impl RationalInnerFunction {
    /// Skips the stability check; for pullbacks along maps of the polydisc
    /// into itself, which preserve stability.
    fn from_stable_parts(tau: C64, d: MultiIndex, q: MultiPoly) -> Result<Self> {
        let tau = crate::float::inward(tau);
        let numerator = q.reflect(&d)?.scale(tau);
        Ok(RationalInnerFunction { tau, d, q, numerator })
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn d(&self) -> &MultiIndex {
        &self.d
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn nvars(&self) -> usize {
        self.q.nvars()
    }

    /// `d₁ + … + dₙ`.
    pub fn degree(&self) -> u32 {
        self.d.total()
    }

    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.nvars() {
            return Err(Error::Dimension { expected: self.nvars(), got: z.len() });
        }
        if let Some(w) = z.iter().find(|w| w.norm() > 1.0 + CLOSED_POLYDISC_TOL) {
            return Err(Error::arg(format!("|z| = {} is outside the closed disc", w.norm())));
        }
        let den = self.q.eval_unchecked(z);
        if den.norm() < DIVISION_TOL {
            return Err(Error::SingularPoint { modulus: den.norm(), threshold: DIVISION_TOL });
        }
        Ok(self.numerator.eval_unchecked(z) / den)
    }

    /// `f ∘ D` for a one-dimensional disc, reduced to lowest terms.
    pub fn restrict(&self, disc: &AnalyticDisc) -> Result<OneVarRational> {
        disc.validate()?;
        if disc.ambient_dim() != self.nvars() {
            return Err(Error::Dimension { expected: self.nvars(), got: disc.ambient_dim() });
        }
        if disc.base_dim() != 1 {
            return Err(Error::arg("restriction needs a one-dimensional disc; use pullback for slices"));
        }
        let (num, den) = match disc {
            AnalyticDisc::MobiusGraph { map } => {
                let t = map.t();
                let a = map.a();
                let power = self.numerator.multidegree().exponents()[1].max(self.q.multidegree().exponents()[1]);
                let lin = MultiPoly::univariate(&[-t * a, t]);
                let clear = MultiPoly::univariate(&[C64::new(1.0, 0.0), -a.conj()]);
                (graph_compose(&self.numerator, &lin, &clear, power)?, graph_compose(&self.q, &lin, &clear, power)?)
            }
            _ => {
                let images = linear_images(disc, 1);
                (self.numerator.compose(&images)?, self.q.compose(&images)?)
            }
        };
        OneVarRational::new(num, den)
    }

    /// Number of zeros of `f ∘ D` inside the disc.
    pub fn disc_degree(&self, disc: &AnalyticDisc) -> Result<usize> {
        Ok(self.restrict(disc)?.zeros_in_disc())
    }

    /// `f ∘ S` for a linear slice `S` (flat disc, coordinate pairing or first
    /// coordinate lift), again in Rudin form.
    pub fn pullback(&self, slice: &AnalyticDisc) -> Result<RationalInnerFunction> {
        slice.validate()?;
        if slice.ambient_dim() != self.nvars() {
            return Err(Error::Dimension { expected: self.nvars(), got: slice.ambient_dim() });
        }
        let images_spec = slice
            .linear_images()
            .ok_or_else(|| Error::arg("pullback needs a linear slice"))?;
        let m = slice.base_dim();
        let images = linear_images(slice, m);
        let q = self.q.compose(&images)?;
        let mut tau = self.tau;
        let mut d = vec![0u32; m];
        for ((src, mult), &e) in images_spec.iter().zip(self.d.exponents()) {
            tau *= mult.powu(e);
            d[*src] += e;
        }
        RationalInnerFunction::from_stable_parts(tau, MultiIndex::new(d), q)
    }

    /// Samples `||f| − 1|` on the torus and `|f|` inside the polydisc.
    pub fn validate_inner(&self, sample: &InnerSample) -> InnerValidationReport {
        self.validate_inner_with(sample, Execution::default())
    }

    pub fn validate_inner_with(&self, sample: &InnerSample, exec: Execution) -> InnerValidationReport {
        let n = self.nvars();
        let a = sample.torus_angles.max(1);
        let angles: Vec<C64> = (0..a).map(|k| unimodular(std::f64::consts::TAU * k as f64 / a as f64)).collect();
        let exclusion = sample.exclusion * self.q.max_coeff_norm();
        let total = a.pow(n as u32);
        let per_point = exec.map_range(total, |mut k| {
            let mut z = vec![C64::new(0.0, 0.0); n];
            for slot in z.iter_mut().rev() {
                *slot = angles[k % a];
                k /= a;
            }
            let den = self.q.eval_unchecked(&z);
            if den.norm() < exclusion {
                (None, Some(z))
            } else {
                let v = self.numerator.eval_unchecked(&z) / den;
                (Some((v.norm() - 1.0).abs()), None)
            }
        });
        let mut max_torus_defect = 0.0_f64;
        let mut singular_suspects = Vec::new();
        for (defect, suspect) in per_point {
            if let Some(x) = defect {
                max_torus_defect = max_torus_defect.max(x);
            }
            if let Some(z) = suspect {
                if singular_suspects.len() < MAX_SUSPECTS {
                    singular_suspects.push(z);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
        let interior: Vec<Vec<C64>> = (0..sample.interior_points)
            .map(|_| (0..n).map(|_| random_disc_point(&mut rng, 1.0)).collect())
            .collect();
        let max_interior_modulus = interior
            .iter()
            .filter_map(|z| self.eval(z).ok())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        InnerValidationReport { max_torus_defect, max_interior_modulus, singular_suspects, sample: sample.clone() }
    }
}

const MAX_SUSPECTS: usize = 64;

/// Uniform (by area) point of the open disc of the given radius.
pub(crate) fn random_disc_point<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    unimodular(rng.random_range(0.0..std::f64::consts::TAU)) * r
}

fn linear_images(slice: &AnalyticDisc, m: usize) -> Vec<MultiPoly> {
    slice
        .linear_images()
        .expect("linear kind")
        .into_iter()
        .map(|(src, mult)| MultiPoly::variable(m, src).scale(mult))
        .collect()
}

/// `Σ c z^i (t(z − a))^j (1 − āz)^{power − j}`, the bivariate polynomial on
/// the Möbius graph with the denominators `(1 − āz)^j` cleared.
fn graph_compose(p: &MultiPoly, lin: &MultiPoly, clear: &MultiPoly, power: u32) -> Result<MultiPoly> {
    let lin_pows: Vec<MultiPoly> = (0..=power).map(|k| lin.pow(k)).collect();
    let clear_pows: Vec<MultiPoly> = (0..=power).map(|k| clear.pow(k)).collect();
    let mut acc = MultiPoly::zero(1);
    for (exp, c) in p.terms() {
        let (i, j) = (exp.exponents()[0], exp.exponents()[1]);
        let term = MultiPoly::monomial(MultiIndex::new(vec![i]), *c)
            .mul(&lin_pows[j as usize])?
            .mul(&clear_pows[(power - j) as usize])?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerSample {
    pub torus_angles: usize,
    pub interior_points: usize,
    pub seed: u64,
    /// Torus points where `|q|` is below this (relative to the largest
    /// coefficient of `q`) are excluded and reported as singular suspects.
    pub exclusion: f64,
}

impl Default for InnerSample {
    fn default() -> Self {
        InnerSample { torus_angles: 64, interior_points: 100, seed: 0, exclusion: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerValidationReport {
    pub max_torus_defect: f64,
    pub max_interior_modulus: f64,
    #[serde(with = "crate::json::complex_vec_vec")]
    pub singular_suspects: Vec<Vec<C64>>,
    pub sample: InnerSample,
}

#[derive(Serialize, Deserialize)]
struct RifJson {
    tau: ComplexJson,
    d: Vec<u32>,
    q: MultiPoly,
}

impl Serialize for RationalInnerFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RifJson { tau: self.tau.into(), d: self.d.exponents().to_vec(), q: self.q.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalInnerFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RifJson::deserialize(d)?;
        make_rif(raw.tau.into(), MultiIndex::new(raw.d), raw.q).map_err(serde::de::Error::custom)
    }
}
