//! The one-variable Pick problem.
//!
//! For nodes `λᵢ` in the disc and targets `ωᵢ` in the closed disc, the
//! matrix `Pᵢⱼ = (1 − ωᵢω̄ⱼ)/(1 − λᵢλ̄ⱼ)` is positive semidefinite exactly when
//! a Schur-class interpolant exists, and positive semidefinite and singular
//! exactly when that interpolant is unique (a Blaschke product of degree
//! `rank P`).
//!
//! A null vector `ν` of `P` gives the interpolant directly: with
//! `A(z) = Σⱼ νⱼ/(1 − λ̄ⱼz)` and `B(z) = Σⱼ νⱼω̄ⱼ/(1 − λ̄ⱼz)`, the relation
//! `Pν = 0` says `A(λᵢ) = ωᵢ B(λᵢ)`, and `f = A / B`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::float::one_minus_conj_product;
use crate::json::ComplexJson;
use crate::linalg::{hermitian_eigen, HermitianEigen};
use crate::polynomial::MultiPoly;
use crate::rif::OneVarRational;
use crate::{Error, Result, C64};

/// Interpolation error accepted for reconstructed solutions.
pub const INTERPOLATION_TOL: f64 = 1e-8;
/// Value-disc radii below this make [`two_solutions`] refuse.
pub const NEAR_UNIQUE_RADIUS: f64 = 1e-10;
const NODE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PickTolerances {
    /// `λ_min ≥ −psd · max(1, λ_max)` counts as positive semidefinite.
    pub psd: f64,
    /// `λ_min ≤ rank · λ_max` counts as singular (see [`PickMatrix::scale`]);
    /// also the rank threshold.
    pub rank: f64,
}

impl Default for PickTolerances {
    fn default() -> Self {
        PickTolerances { psd: 1e-9, rank: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PickProblem {
    nodes: Vec<C64>,
    targets: Vec<C64>,
}

impl PickProblem {
    pub fn new(nodes: Vec<C64>, targets: Vec<C64>) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(Error::Dimension { expected: nodes.len(), got: targets.len() });
        }
        for (i, z) in nodes.iter().enumerate() {
            if !(z.norm() < 1.0) {
                return Err(Error::arg(format!("node {i} is not in the open disc")));
            }
            for (j, w) in nodes[..i].iter().enumerate() {
                if (z - w).norm() < NODE_TOL {
                    return Err(Error::arg(format!("nodes {j} and {i} coincide")));
                }
            }
        }
        if let Some(i) = targets.iter().position(|w| !(w.norm() <= 1.0 + 1e-12)) {
            return Err(Error::arg(format!("target {i} is outside the closed disc")));
        }
        Ok(PickProblem { nodes, targets })
    }

    pub fn empty() -> Self {
        PickProblem { nodes: Vec::new(), targets: Vec::new() }
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn targets(&self) -> &[C64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The same problem with one more data point.
    pub fn extended(&self, node: C64, target: C64) -> Result<Self> {
        let mut nodes = self.nodes.clone();
        let mut targets = self.targets.clone();
        nodes.push(node);
        targets.push(target);
        PickProblem::new(nodes, targets)
    }

    /// The first `k` data points.
    pub fn truncated(&self, k: usize) -> Self {
        PickProblem { nodes: self.nodes[..k].to_vec(), targets: self.targets[..k].to_vec() }
    }

    /// Largest `|g(λᵢ) − ωᵢ|`.
    pub fn interpolation_error(&self, g: &OneVarRational) -> f64 {
        self.nodes
            .iter()
            .zip(&self.targets)
            .map(|(z, w)| g.eval(*z).map(|v| (v - w).norm()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    nodes: Vec<ComplexJson>,
    targets: Vec<ComplexJson>,
}

impl Serialize for PickProblem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProblemJson {
            nodes: self.nodes.iter().map(|&z| z.into()).collect(),
            targets: self.targets.iter().map(|&z| z.into()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PickProblem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ProblemJson::deserialize(d)?;
        PickProblem::new(raw.nodes.into_iter().map(Into::into).collect(), raw.targets.into_iter().map(Into::into).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Hermitian matrix with its ascending spectrum.
#[derive(Debug, Clone)]
pub struct PickMatrix {
    entries: DMatrix<C64>,
    eigen: HermitianEigen,
}

impl PickMatrix {
    /// Decomposes an arbitrary Hermitian matrix.
    pub fn from_entries(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::Dimension { expected: entries.nrows(), got: entries.ncols() });
        }
        let scale = entries.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let n = entries.nrows();
        for i in 0..n {
            for j in 0..i {
                if (entries[(i, j)] - entries[(j, i)].conj()).norm() > 1e-13 * scale.max(1.0) {
                    return Err(Error::arg(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        let eigen = hermitian_eigen(&entries);
        Ok(PickMatrix { entries, eigen })
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn largest_eigenvalue(&self) -> f64 {
        self.eigen.values.last().copied().unwrap_or(0.0)
    }

    /// Eigenvalue scale `max(λ_max, psd / rank)`, so that the zero threshold
    /// `rank · scale` never drops below the absolute floor `psd`. Without the
    /// floor, rounding noise from unimodular constant targets would count as
    /// rank.
    pub fn scale(&self, tol: &PickTolerances) -> f64 {
        self.largest_eigenvalue().max(tol.psd / tol.rank)
    }

    /// Number of eigenvalues above `tol.rank` times the scale.
    pub fn rank_estimate(&self, tol: &PickTolerances) -> usize {
        let cut = tol.rank * self.scale(tol);
        self.eigen.values.iter().filter(|&&v| v > cut).count()
    }

    /// Unit eigenvector of the smallest eigenvalue.
    pub fn null_vector(&self) -> Option<DVector<C64>> {
        (self.dim() > 0).then(|| self.eigen.vectors.column(0).into_owned())
    }

    /// Leading principal `k × k` block.
    fn leading_block(&self, k: usize) -> Result<PickMatrix> {
        PickMatrix::from_entries(self.entries.view((0, 0), (k, k)).into_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessVerdict {
    pub solvable: bool,
    pub unique: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `λ_min` over [`PickMatrix::scale`].
    pub smallest_relative_eigenvalue: f64,
    pub rank_estimate: usize,
    pub spectrum: Vec<f64>,
    pub tolerances: PickTolerances,
}

/// The Pick matrix of a problem.
pub fn build_pick_matrix(p: &PickProblem) -> Result<PickMatrix> {
    let n = p.len();
    let (l, w) = (&p.nodes, &p.targets);
    let entries = DMatrix::from_fn(n, n, |i, j| one_minus_conj_product(w[i], w[j]) / one_minus_conj_product(l[i], l[j]));
    PickMatrix::from_entries(entries)
}

/// Solvable means positive semidefinite; unique means solvable and singular.
pub fn classify(m: &PickMatrix, tol: &PickTolerances) -> UniquenessVerdict {
    let spectrum = m.spectrum().to_vec();
    if spectrum.is_empty() {
        return UniquenessVerdict {
            solvable: true,
            unique: false,
            min_eigenvalue: 0.0,
            max_eigenvalue: 0.0,
            smallest_relative_eigenvalue: 1.0,
            rank_estimate: 0,
            spectrum,
            tolerances: *tol,
        };
    }
    let min = spectrum[0];
    let max = *spectrum.last().unwrap();
    let solvable = min >= -tol.psd * max.max(1.0);
    let rel = min / m.scale(tol);
    let unique = solvable && rel <= tol.rank;
    UniquenessVerdict {
        solvable,
        unique,
        min_eigenvalue: min,
        max_eigenvalue: max,
        smallest_relative_eigenvalue: rel,
        rank_estimate: m.rank_estimate(tol),
        spectrum,
        tolerances: *tol,
    }
}

/// Convenience: build and classify.
pub fn classify_problem(p: &PickProblem, tol: &PickTolerances) -> Result<(PickMatrix, UniquenessVerdict)> {
    let m = build_pick_matrix(p)?;
    let v = classify(&m, tol);
    Ok((m, v))
}

/// `A` and `B` with the common denominator `∏(1 − λ̄ⱼz)` cleared.
fn null_vector_fraction(nodes: &[C64], targets: &[C64], nu: &DVector<C64>) -> (MultiPoly, MultiPoly) {
    let one = C64::new(1.0, 0.0);
    let factors: Vec<MultiPoly> = nodes.iter().map(|l| MultiPoly::univariate(&[one, -l.conj()])).collect();
    let mut a = MultiPoly::zero(1);
    let mut b = MultiPoly::zero(1);
    for j in 0..nodes.len() {
        let mut prod = MultiPoly::one(1);
        for (l, f) in factors.iter().enumerate() {
            if l != j {
                prod = prod.mul(f).expect("univariate");
            }
        }
        a = a.add(&prod.scale(nu[j])).expect("univariate");
        b = b.add(&prod.scale(nu[j] * targets[j].conj())).expect("univariate");
    }
    (a, b)
}

/// Recovers the unique solution of a singular, positive semidefinite
/// problem.
///
/// With `k` the estimated rank, the null vector of the leading
/// `(k+1) × (k+1)` block determines `A / B` without common factors. The
/// result must interpolate every node, be inner and have `k` zeros; on
/// failure `k` is raised (an underestimated rank) until the block is the
/// whole matrix.
pub fn reconstruct_unique(p: &PickProblem, m: &PickMatrix, tol: &PickTolerances) -> Result<OneVarRational> {
    let verdict = classify(m, tol);
    if !verdict.unique {
        return Err(Error::Precondition(format!(
            "Pick matrix is not singular positive semidefinite (relative λ_min = {:e})",
            verdict.smallest_relative_eigenvalue
        )));
    }
    let n = p.len();
    let mut last_error = String::new();
    for k in verdict.rank_estimate..n {
        if k == 0 {
            // rank zero: every target is the same unimodular constant
            let g = OneVarRational::new(MultiPoly::constant(1, p.targets[0]), MultiPoly::one(1))?;
            if p.interpolation_error(&g) <= INTERPOLATION_TOL {
                return Ok(g);
            }
            last_error = "rank 0: targets are not constant".into();
            continue;
        }
        let block = m.leading_block(k + 1)?;
        let nu = block.null_vector().expect("non-empty block");
        let (a, b) = null_vector_fraction(&p.nodes[..k + 1], &p.targets[..k + 1], &nu);
        if b.is_zero() {
            last_error = format!("rank {k}: denominator vanished");
            continue;
        }
        let g = match OneVarRational::new(a, b) {
            Ok(g) => g,
            Err(e) => {
                last_error = format!("rank {k}: {e}");
                continue;
            }
        };
        let err = p.interpolation_error(&g);
        if g.is_inner() && err <= INTERPOLATION_TOL && g.zeros_in_disc() == k {
            return Ok(g);
        }
        last_error = format!("rank {k}: inner = {}, interpolation error {err:e}, zeros {}", g.is_inner(), g.zeros_in_disc());
    }
    Err(Error::ReconstructionFailure(last_error))
}

/// Closed disc of attainable values `g(z*)` over all Schur-class solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueDisc {
    #[serde(with = "crate::json::complex")]
    pub center: C64,
    pub radius: f64,
}

impl ValueDisc {
    pub fn contains(&self, w: C64, slack: f64) -> bool {
        (w - self.center).norm() <= self.radius + slack
    }
}

/// Value disc at `z*` from the Schur complement of the extended Pick matrix.
///
/// Writing the new column as `u − w̄v` with `uᵢ = 1/(1 − λᵢz̄*)`,
/// `vᵢ = ωᵢ uᵢ` and `κ = 1/(1 − |z*|²)`, the complement is
/// `κ − α + 2 Re(w̄β) − |w|²(κ + γ)` where `α = u*P⁻¹u`, `β = u*P⁻¹v`,
/// `γ = v*P⁻¹v`; it is non-negative on the disc with centre `β/(κ+γ)` and
/// squared radius `((κ − α)(κ + γ) + |β|²)/(κ + γ)²`.
pub fn value_disc(p: &PickProblem, z_star: C64, tol: &PickTolerances) -> Result<ValueDisc> {
    if !(z_star.norm() < 1.0) {
        return Err(Error::arg("z* must lie in the open disc"));
    }
    if let Some(i) = p.nodes.iter().position(|l| (l - z_star).norm() < NODE_TOL) {
        return Ok(ValueDisc { center: p.targets[i], radius: 0.0 });
    }
    if p.is_empty() {
        return Ok(ValueDisc { center: C64::new(0.0, 0.0), radius: 1.0 });
    }
    let (m, verdict) = classify_problem(p, tol)?;
    if !verdict.solvable {
        return Err(Error::Precondition("base problem is not solvable".into()));
    }
    if verdict.unique {
        let g = reconstruct_unique(p, &m, tol)?;
        return Ok(ValueDisc { center: g.eval(z_star)?, radius: 0.0 });
    }
    let one = C64::new(1.0, 0.0);
    let u = DVector::from_iterator(p.len(), p.nodes.iter().map(|l| one / (one - l * z_star.conj())));
    let v = DVector::from_iterator(p.len(), p.targets.iter().zip(u.iter()).map(|(w, ui)| w * ui));
    let vecs = &m.eigen.vectors;
    let vals = &m.eigen.values;
    // P⁻¹ x = V diag(1/λ) V* x
    let solve = |x: &DVector<C64>| -> DVector<C64> {
        let mut y = vecs.adjoint() * x;
        for (yi, &l) in y.iter_mut().zip(vals) {
            *yi /= l;
        }
        vecs * y
    };
    let pu = solve(&u);
    let pv = solve(&v);
    let alpha = u.dotc(&pu).re;
    let beta = u.dotc(&pv);
    let gamma = v.dotc(&pv).re;
    let kappa = 1.0 / (1.0 - z_star.norm_sqr());
    let denom = kappa + gamma;
    let center = beta / denom;
    let r2 = ((kappa - alpha) * denom + beta.norm_sqr()) / (denom * denom);
    Ok(ValueDisc { center, radius: r2.max(0.0).sqrt() })
}

/// Two extremal solutions of a non-unique problem, attaining
/// `centre ± radius` at `z*`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSolutions {
    pub first: OneVarRational,
    pub second: OneVarRational,
    pub value_disc: ValueDisc,
    pub extended_verdicts: [UniquenessVerdict; 2],
}

impl TwoSolutions {
    /// `|g₁(z*) − g₂(z*)|`.
    pub fn disagreement(&self, z_star: C64) -> Result<f64> {
        Ok((self.first.eval(z_star)? - self.second.eval(z_star)?).norm())
    }
}

pub fn two_solutions(p: &PickProblem, z_star: C64, tol: &PickTolerances) -> Result<TwoSolutions> {
    if p.nodes.iter().any(|l| (l - z_star).norm() < NODE_TOL) {
        return Err(Error::Precondition("z* coincides with a node".into()));
    }
    if !p.is_empty() {
        let (_, verdict) = classify_problem(p, tol)?;
        if !verdict.solvable || verdict.unique {
            return Err(Error::Precondition("problem must be solvable and non-unique".into()));
        }
    }
    let vd = value_disc(p, z_star, tol)?;
    if vd.radius < NEAR_UNIQUE_RADIUS {
        return Err(Error::NearUnique { radius: vd.radius, threshold: NEAR_UNIQUE_RADIUS });
    }
    let solve = |w: C64| -> Result<(OneVarRational, UniquenessVerdict)> {
        let w = if w.norm() > 1.0 { w / w.norm() } else { w };
        let ext = p.extended(z_star, w)?;
        let (m, verdict) = classify_problem(&ext, tol)?;
        let g = reconstruct_unique(&ext, &m, tol)?;
        Ok((g, verdict))
    };
    let (first, v1) = solve(vd.center + vd.radius)?;
    let (second, v2) = solve(vd.center - vd.radius)?;
    Ok(TwoSolutions { first, second, value_disc: vd, extended_verdicts: [v1, v2] })
}
