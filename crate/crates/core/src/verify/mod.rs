//! Executable uniqueness certificates.
//!
//! A certificate replays the uniqueness argument on the data of one rational
//! inner function `f`. Every flat disc of the grid must carry a restriction
//! of degree below its node count, a singular positive semidefinite Pick
//! matrix, and a reconstruction matching `f` on the disc. In two variables
//! the flat reconstructions are then transported to Möbius-graph discs
//! through their intersection points and checked again; in three variables
//! the same two-variable chain runs on the slices `z₃ = τ z₁` and on sampled
//! coordinate-pairing slices `z₃ = ρ̄ z₂`.
//!
//! Failure is reported inside the certificate, never as an error.

mod sharpness;
mod sweep;

pub use sharpness::{sharpness_demo, SharpnessReport};
pub use sweep::{equality_sweep, ChainInterpolant, GraphFunction, Pointwise, SweepParams, SweepPoint, SweepReport};

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{choose_mobius, generate_nodes, intersect_mobius_with_flat, refined_node_counts, GridConfig};
use crate::json::ComplexJson;
use crate::pick::{classify_problem, reconstruct_unique, PickTolerances};
use crate::rif::{random_disc_point, OneVarRational, RationalInnerFunction};
use crate::{unimodular, AnalyticDisc, Error, Execution, MobiusMap, NodeGrid, PickProblem, Result, UniquenessVerdict, C64};

pub const CERTIFICATE_FORMAT: &str = "polypick-certificate";
pub const CERTIFICATE_VERSION: u32 = 1;

const SEMANTICS: &str = "Checks, in floating point and on the data of f alone, each hypothesis of the uniqueness argument: \
restrictions to the grid discs have degree below the node count, the one-variable Pick matrices are singular and positive \
semidefinite, and the reconstructed interpolants agree with f on every disc checked. It does not search the Schur class for \
a competing interpolant g.";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub pick: PickTolerances,
    /// Largest accepted `|h − f∘D|` at fresh points.
    pub residual: f64,
    /// Largest accepted gap between Möbius and flat reconstructions at the
    /// intersection points.
    pub consistency: f64,
    pub fresh_points: usize,
    pub fresh_radius: f64,
    pub seed: u64,
    /// Möbius maps per cross-check (seeds `seed, seed + 1, …`).
    pub mobius_maps: usize,
    /// Number of `ρ` values (eighth roots of unity) for three variables.
    pub rho_samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pick: PickTolerances::default(),
            residual: 1e-7,
            consistency: 1e-7,
            fresh_points: 50,
            fresh_radius: 0.9,
            seed: 0,
            mobius_maps: 3,
            rho_samples: 5,
        }
    }
}

impl Tolerances {
    pub const PROFILES: [&'static str; 3] = ["default", "strict", "loose"];

    /// Named presets: `default`, `strict` (tighter residuals, more samples)
    /// and `loose` (for badly conditioned grids).
    pub fn profile(name: &str) -> Result<Self> {
        let base = Tolerances::default();
        match name {
            "default" => Ok(base),
            "strict" => Ok(Tolerances {
                pick: PickTolerances { psd: 1e-10, rank: 1e-8 },
                residual: 1e-9,
                consistency: 1e-9,
                fresh_points: 100,
                mobius_maps: 5,
                rho_samples: 8,
                ..base
            }),
            "loose" => Ok(Tolerances {
                pick: PickTolerances { psd: 1e-8, rank: 1e-6 },
                residual: 1e-6,
                consistency: 1e-6,
                ..base
            }),
            other => Err(Error::Configuration(format!(
                "unknown tolerance profile {other:?}; expected one of {:?}",
                Self::PROFILES
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.pick.psd, self.pick.rank, self.residual, self.consistency, self.fresh_radius];
        if positive.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::Configuration("tolerances must be positive and finite".into()));
        }
        if !(self.fresh_radius < 1.0) {
            return Err(Error::Configuration("fresh_radius must be below 1".into()));
        }
        if self.fresh_points == 0 || self.mobius_maps == 0 || self.rho_samples == 0 {
            return Err(Error::Configuration("sample counts must be positive".into()));
        }
        if self.rho_samples > 8 {
            return Err(Error::Configuration("at most 8 values of ρ are available".into()));
        }
        Ok(())
    }
}

/// Evidence for one flat disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscEvidence {
    pub disc: usize,
    pub embedding: AnalyticDisc,
    pub restricted_degree: Option<usize>,
    pub node_count: usize,
    pub verdict: Option<UniquenessVerdict>,
    pub reconstruction_residual: Option<f64>,
    pub passed: bool,
    pub failure: Option<String>,
}

/// Evidence for one Möbius-graph disc `z ↦ (z, m(z))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobiusEvidence {
    pub map: Option<MobiusMap>,
    pub eps: Option<f64>,
    /// Parameters `rₖ` where the graph meets flat disc `k`.
    pub intersections: Vec<ComplexJson>,
    pub min_gap: Option<f64>,
    pub intersection_residual: Option<f64>,
    pub restricted_degree: Option<usize>,
    pub verdict: Option<UniquenessVerdict>,
    pub reconstruction_residual: Option<f64>,
    pub consistency_residual: Option<f64>,
    pub passed: bool,
    pub failure: Option<String>,
}

/// Möbius checks on the slice `(z₁, z₂) ↦ (z₁, z₂, τ z₁)` using the flat
/// reconstructions of the discs lying in it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberEvidence {
    #[serde(with = "crate::json::complex")]
    pub tau: C64,
    pub mobius: Vec<MobiusEvidence>,
    pub passed: bool,
}

/// The two-variable chain on the slice `(z₁, z₂) ↦ (z₁, z₂, ρ̄ z₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoEvidence {
    #[serde(with = "crate::json::complex")]
    pub rho: C64,
    pub slice_degree: Option<u32>,
    pub per_disc: Vec<DiscEvidence>,
    pub mobius: Vec<MobiusEvidence>,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    Full,
    Refined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    pub format: String,
    pub version: u32,
    pub semantics: String,
    pub caveats: Vec<String>,
    pub mode: CertificateMode,
    pub function: RationalInnerFunction,
    pub function_degree: u32,
    pub grid: NodeGrid,
    pub tolerances: Tolerances,
    pub node_counts: Vec<usize>,
    pub node_savings: usize,
    /// `true` when the sampled targets were not computed from `function`.
    pub external_values: bool,
    pub per_disc: Vec<DiscEvidence>,
    pub mobius: Vec<MobiusEvidence>,
    pub fibers: Vec<FiberEvidence>,
    pub rho_sweep: Vec<RhoEvidence>,
    pub overall: bool,
    pub failing_stage: Option<String>,
}

impl UniquenessCertificate {
    /// Largest flat or Möbius reconstruction residual anywhere in the chain;
    /// infinite if some stage produced no reconstruction.
    pub fn max_residual(&self) -> f64 {
        let flat = |d: &DiscEvidence| d.reconstruction_residual.unwrap_or(f64::INFINITY);
        let mob = |m: &MobiusEvidence| m.reconstruction_residual.unwrap_or(f64::INFINITY);
        let mut out = self.per_disc.iter().map(flat).chain(self.mobius.iter().map(mob)).fold(0.0, f64::max);
        for f in &self.fibers {
            out = f.mobius.iter().map(mob).fold(out, f64::max);
        }
        for r in &self.rho_sweep {
            out = r.per_disc.iter().map(flat).chain(r.mobius.iter().map(mob)).fold(out, f64::max);
        }
        out
    }

    /// Every flat-disc evidence item, including those of the `ρ` sweep.
    pub fn all_disc_evidence(&self) -> impl Iterator<Item = &DiscEvidence> {
        self.per_disc.iter().chain(self.rho_sweep.iter().flat_map(|r| r.per_disc.iter()))
    }

    /// Every Möbius evidence item.
    pub fn all_mobius_evidence(&self) -> impl Iterator<Item = &MobiusEvidence> {
        self.mobius
            .iter()
            .chain(self.fibers.iter().flat_map(|f| f.mobius.iter()))
            .chain(self.rho_sweep.iter().flat_map(|r| r.mobius.iter()))
    }
}

/// Runs the full chain with `N` nodes on every disc.
pub fn certify_uniqueness(f: &RationalInnerFunction, grid: &NodeGrid, tol: &Tolerances) -> Result<UniquenessCertificate> {
    certify_uniqueness_with(f, grid, tol, Execution::default())
}

pub fn certify_uniqueness_with(
    f: &RationalInnerFunction,
    grid: &NodeGrid,
    tol: &Tolerances,
    exec: Execution,
) -> Result<UniquenessCertificate> {
    let values = sample_nodes(f, grid)?;
    run(f, grid, &values, tol, exec, CertificateMode::Full, false)
}

/// Like [`certify_uniqueness`], but each disc uses only its first
/// `deg_{D_k}(f) + 1` nodes.
pub fn refined_certify(f: &RationalInnerFunction, grid: &NodeGrid, tol: &Tolerances) -> Result<UniquenessCertificate> {
    refined_certify_with(f, grid, tol, Execution::default())
}

pub fn refined_certify_with(
    f: &RationalInnerFunction,
    grid: &NodeGrid,
    tol: &Tolerances,
    exec: Execution,
) -> Result<UniquenessCertificate> {
    let values = sample_nodes(f, grid)?;
    run(f, grid, &values, tol, exec, CertificateMode::Refined, false)
}

/// Runs the chain with externally supplied node values (one per grid node,
/// in grid order) in place of `f`'s own samples. Residuals are still taken
/// against `f`.
pub fn certify_with_values(
    f: &RationalInnerFunction,
    grid: &NodeGrid,
    values: &[C64],
    tol: &Tolerances,
    exec: Execution,
) -> Result<UniquenessCertificate> {
    run(f, grid, values, tol, exec, CertificateMode::Full, true)
}

/// `f` at every grid node, in grid order.
pub fn sample_nodes(f: &RationalInnerFunction, grid: &NodeGrid) -> Result<Vec<C64>> {
    check_preconditions(f, grid)?;
    grid.nodes().iter().map(|z| f.eval(z)).collect()
}

fn check_preconditions(f: &RationalInnerFunction, grid: &NodeGrid) -> Result<()> {
    if f.nvars() != grid.dim() {
        return Err(Error::Dimension { expected: grid.dim(), got: f.nvars() });
    }
    if f.degree() as usize >= grid.degree_bound() {
        return Err(Error::Precondition(format!(
            "deg f = {} must be below N = {}",
            f.degree(),
            grid.degree_bound()
        )));
    }
    if grid.dim() > 3 {
        return Err(Error::Precondition("the certification chain is implemented for n ≤ 3".into()));
    }
    Ok(())
}

fn run(
    f: &RationalInnerFunction,
    grid: &NodeGrid,
    values: &[C64],
    tol: &Tolerances,
    exec: Execution,
    mode: CertificateMode,
    external_values: bool,
) -> Result<UniquenessCertificate> {
    check_preconditions(f, grid)?;
    tol.validate()?;
    if values.len() != grid.nodes().len() {
        return Err(Error::Dimension { expected: grid.nodes().len(), got: values.len() });
    }
    let big_n = grid.degree_bound();
    let n = grid.dim();
    let refined = mode == CertificateMode::Refined;
    let node_counts = if refined { refined_node_counts(f, grid)? } else { vec![big_n; grid.discs().len()] };
    let node_savings = node_counts.iter().map(|&c| big_n - c.min(big_n)).sum();

    let chain = Chain { f, tol, exec };
    let flats = chain.flat_stage(grid, values, &node_counts, 0);
    let (per_disc, recon): (Vec<_>, Vec<_>) = flats.into_iter().unzip();

    let mut mobius = Vec::new();
    let mut fibers = Vec::new();
    let mut rho_sweep = Vec::new();
    let mut caveats = vec![format!("Möbius-graph family sampled at {} maps per cross-check", tol.mobius_maps)];
    match n {
        2 => mobius = chain.mobius_stage(f, &grid.tau_table()[0], &recon, 1 << 40),
        3 => {
            fibers = chain.fiber_stage(grid, &recon);
            rho_sweep = chain.rho_stage(grid, refined);
            caveats.push(format!(
                "the union of coordinate-pairing slices is sampled at {} values of ρ (eighth roots of unity)",
                tol.rho_samples
            ));
        }
        _ => {}
    }
    if external_values {
        caveats.push("node values were supplied externally; residuals compare against function".into());
    }

    let failing_stage = first_failure(&per_disc, &mobius, &fibers, &rho_sweep);
    Ok(UniquenessCertificate {
        format: CERTIFICATE_FORMAT.into(),
        version: CERTIFICATE_VERSION,
        semantics: SEMANTICS.into(),
        caveats,
        mode,
        function: f.clone(),
        function_degree: f.degree(),
        grid: grid.clone(),
        tolerances: *tol,
        node_counts,
        node_savings,
        external_values,
        per_disc,
        mobius,
        fibers,
        rho_sweep,
        overall: failing_stage.is_none(),
        failing_stage,
    })
}

fn first_failure(
    per_disc: &[DiscEvidence],
    mobius: &[MobiusEvidence],
    fibers: &[FiberEvidence],
    rho: &[RhoEvidence],
) -> Option<String> {
    if let Some(d) = per_disc.iter().find(|d| !d.passed) {
        return Some(format!("flat disc {}: {}", d.disc, d.failure.as_deref().unwrap_or("failed")));
    }
    if let Some((j, m)) = mobius.iter().enumerate().find(|(_, m)| !m.passed) {
        return Some(format!("möbius map {j}: {}", m.failure.as_deref().unwrap_or("failed")));
    }
    for (k, fib) in fibers.iter().enumerate() {
        if let Some((j, m)) = fib.mobius.iter().enumerate().find(|(_, m)| !m.passed) {
            return Some(format!("slice z3 = τ z1 ({k}), möbius map {j}: {}", m.failure.as_deref().unwrap_or("failed")));
        }
    }
    for (k, r) in rho.iter().enumerate() {
        if !r.passed {
            let inner = r
                .failure
                .clone()
                .or_else(|| first_failure(&r.per_disc, &r.mobius, &[], &[]))
                .unwrap_or_else(|| "failed".into());
            return Some(format!("ρ sample {k}: {inner}"));
        }
    }
    None
}

/// Seeded points of modulus at most `radius`, one stream per stage item.
fn fresh_points(seed: u64, stream: u64, count: usize, radius: f64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count).map(|_| random_disc_point(&mut rng, radius)).collect()
}

fn max_deviation(points: &[C64], h: impl Fn(C64) -> Result<C64>, reference: impl Fn(C64) -> Result<C64>) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &z in points {
        worst = worst.max((h(z)? - reference(z)?).norm());
    }
    Ok(worst)
}

struct Chain<'a> {
    f: &'a RationalInnerFunction,
    tol: &'a Tolerances,
    exec: Execution,
}

impl Chain<'_> {
    /// Per-disc evidence and reconstructions, in disc order.
    fn flat_stage(
        &self,
        grid: &NodeGrid,
        values: &[C64],
        counts: &[usize],
        stream_base: u64,
    ) -> Vec<(DiscEvidence, Option<OneVarRational>)> {
        let big_n = grid.degree_bound();
        self.exec.map_range(grid.discs().len(), |k| {
            let count = counts[k];
            let nodes = grid.base_points()[k][..count].to_vec();
            let targets = values[k * big_n..k * big_n + count].to_vec();
            flat_evidence(self.f, k, &grid.discs()[k], nodes, targets, self.tol, stream_base + k as u64)
        })
    }

    fn mobius_stage(
        &self,
        f: &RationalInnerFunction,
        taus: &[C64],
        recon: &[Option<OneVarRational>],
        stream_base: u64,
    ) -> Vec<MobiusEvidence> {
        self.exec.map_range(self.tol.mobius_maps, |j| {
            mobius_evidence(f, taus, recon, self.tol, self.tol.seed + j as u64, stream_base + j as u64)
        })
    }

    /// For each last-coordinate multiplier `τ`, the Möbius cross-check of
    /// `f(z₁, z₂, τ z₁)` fed by the flat discs lying in that slice.
    fn fiber_stage(&self, grid: &NodeGrid, recon: &[Option<OneVarRational>]) -> Vec<FiberEvidence> {
        let big_n = grid.degree_bound();
        let row2 = &grid.tau_table()[0];
        let row3 = &grid.tau_table()[1];
        (0..big_n)
            .map(|k3| {
                let tau = row3[k3];
                let mut local: Vec<Option<OneVarRational>> = vec![None; big_n];
                for (k, r) in recon.iter().enumerate() {
                    let combo = grid.combo(k);
                    if combo[1] == k3 {
                        local[combo[0]] = r.clone();
                    }
                }
                let mobius = match AnalyticDisc::first_coordinate_lift(3, tau).and_then(|s| self.f.pullback(&s)) {
                    Ok(sliced) => self.mobius_stage(&sliced, row2, &local, (2 << 40) + ((k3 as u64) << 20)),
                    Err(e) => vec![MobiusEvidence::failed(format!("slice pullback: {e}"))],
                };
                let passed = mobius.iter().all(|m| m.passed);
                FiberEvidence { tau, mobius, passed }
            })
            .collect()
    }

    /// The two-variable chain on `f(z₁, z₂, ρ̄ z₂)` with flat discs of
    /// multipliers `ρ τ` for the grid's last-coordinate multipliers `τ`.
    fn rho_stage(&self, grid: &NodeGrid, refined: bool) -> Vec<RhoEvidence> {
        let big_n = grid.degree_bound();
        (0..self.tol.rho_samples)
            .map(|j| {
                let rho = unimodular(TAU * j as f64 / 8.0);
                let fail = |msg: String| RhoEvidence {
                    rho,
                    slice_degree: None,
                    per_disc: Vec::new(),
                    mobius: Vec::new(),
                    passed: false,
                    failure: Some(msg),
                };
                let sliced = match AnalyticDisc::coordinate_pairing(3, rho).and_then(|s| self.f.pullback(&s)) {
                    Ok(s) => s,
                    Err(e) => return fail(format!("slice pullback: {e}")),
                };
                let row: Vec<C64> = grid.tau_table()[1].iter().map(|t| rho * t).collect();
                let config = GridConfig { multipliers: Some(vec![row.clone()]), ..GridConfig::default() };
                let sub = match generate_nodes(big_n, 2, &config) {
                    Ok(g) => g,
                    Err(e) => return fail(format!("slice grid: {e}")),
                };
                let values = match sample_nodes(&sliced, &sub) {
                    Ok(v) => v,
                    Err(e) => return fail(format!("slice samples: {e}")),
                };
                let counts = if refined {
                    match refined_node_counts(&sliced, &sub) {
                        Ok(c) => c,
                        Err(e) => return fail(format!("slice refined counts: {e}")),
                    }
                } else {
                    vec![big_n; sub.discs().len()]
                };
                let inner = Chain { f: &sliced, tol: self.tol, exec: self.exec };
                let base = (3 + j as u64) << 40;
                let (per_disc, recon): (Vec<_>, Vec<_>) = inner.flat_stage(&sub, &values, &counts, base).into_iter().unzip();
                let mobius = inner.mobius_stage(&sliced, &row, &recon, base + (1 << 30));
                let passed = per_disc.iter().all(|d| d.passed) && mobius.iter().all(|m| m.passed);
                RhoEvidence { rho, slice_degree: Some(sliced.degree()), per_disc, mobius, passed, failure: None }
            })
            .collect()
    }
}

fn flat_evidence(
    f: &RationalInnerFunction,
    k: usize,
    disc: &AnalyticDisc,
    nodes: Vec<C64>,
    targets: Vec<C64>,
    tol: &Tolerances,
    stream: u64,
) -> (DiscEvidence, Option<OneVarRational>) {
    let mut ev = DiscEvidence {
        disc: k,
        embedding: disc.clone(),
        restricted_degree: None,
        node_count: nodes.len(),
        verdict: None,
        reconstruction_residual: None,
        passed: false,
        failure: None,
    };
    let fail = |mut ev: DiscEvidence, msg: String| {
        ev.failure = Some(msg);
        (ev, None)
    };
    match f.disc_degree(disc) {
        Ok(deg) => ev.restricted_degree = Some(deg),
        Err(e) => return fail(ev, format!("restriction: {e}")),
    }
    let problem = match PickProblem::new(nodes, targets) {
        Ok(p) => p,
        Err(e) => return fail(ev, format!("Pick data: {e}")),
    };
    let (matrix, verdict) = match classify_problem(&problem, &tol.pick) {
        Ok(x) => x,
        Err(e) => return fail(ev, format!("Pick matrix: {e}")),
    };
    ev.verdict = Some(verdict.clone());
    if !verdict.unique {
        let what = if verdict.solvable { "positive definite" } else { "not positive semidefinite" };
        return fail(ev, format!("Pick matrix is {what}"));
    }
    let h = match reconstruct_unique(&problem, &matrix, &tol.pick) {
        Ok(h) => h,
        Err(e) => return fail(ev, format!("reconstruction: {e}")),
    };
    let points = fresh_points(tol.seed, stream, tol.fresh_points, tol.fresh_radius);
    match max_deviation(&points, |z| h.eval(z), |z| f.eval(&disc.at(z))) {
        Ok(r) => ev.reconstruction_residual = Some(r),
        Err(e) => return fail(ev, format!("residual: {e}")),
    }
    let residual = ev.reconstruction_residual.unwrap();
    let deg = ev.restricted_degree.unwrap();
    ev.failure = if deg >= ev.node_count {
        Some(format!("restricted degree {deg} is not below the node count {}", ev.node_count))
    } else if !(residual <= tol.residual) {
        Some(format!("reconstruction residual {residual:e} exceeds {:e}", tol.residual))
    } else {
        None
    };
    ev.passed = ev.failure.is_none();
    (ev, Some(h))
}

impl MobiusEvidence {
    fn failed(msg: String) -> Self {
        MobiusEvidence {
            map: None,
            eps: None,
            intersections: Vec::new(),
            min_gap: None,
            intersection_residual: None,
            restricted_degree: None,
            verdict: None,
            reconstruction_residual: None,
            consistency_residual: None,
            passed: false,
            failure: Some(msg),
        }
    }
}

/// The flat reconstructions `hₖ` fix the values at the points where the
/// graph of `m` crosses each flat disc; those values must single out a
/// unique interpolant on the graph, and it must equal `f` there.
fn mobius_evidence(
    f: &RationalInnerFunction,
    taus: &[C64],
    recon: &[Option<OneVarRational>],
    tol: &Tolerances,
    seed: u64,
    stream: u64,
) -> MobiusEvidence {
    let (map, eps) = match choose_mobius(taus, seed) {
        Ok(x) => x,
        Err(e) => return MobiusEvidence::failed(format!("choose_mobius: {e}")),
    };
    let mut ev = MobiusEvidence::failed(String::new());
    ev.map = Some(map);
    ev.eps = Some(eps);
    let fail = |mut ev: MobiusEvidence, msg: String| {
        ev.failure = Some(msg);
        ev
    };
    let inter = match intersect_mobius_with_flat(taus, &map) {
        Ok(i) => i,
        Err(e) => return fail(ev, format!("intersections: {e}")),
    };
    let points = inter.points();
    ev.intersections = points.iter().map(|&z| z.into()).collect();
    ev.min_gap = Some(inter.min_gap);
    ev.intersection_residual = Some(inter.max_residual());
    let graph = AnalyticDisc::mobius_graph(map);
    match f.disc_degree(&graph) {
        Ok(d) => ev.restricted_degree = Some(d),
        Err(e) => return fail(ev, format!("restriction to the graph: {e}")),
    }
    let mut targets = Vec::with_capacity(points.len());
    for (k, (h, &r)) in recon.iter().zip(&points).enumerate() {
        let Some(h) = h else {
            return fail(ev, format!("flat disc {k} has no reconstruction"));
        };
        match h.eval(r) {
            Ok(v) => targets.push(v),
            Err(e) => return fail(ev, format!("flat reconstruction {k} at the intersection: {e}")),
        }
    }
    let problem = match PickProblem::new(points.clone(), targets.clone()) {
        Ok(p) => p,
        Err(e) => return fail(ev, format!("Pick data: {e}")),
    };
    let (matrix, verdict) = match classify_problem(&problem, &tol.pick) {
        Ok(x) => x,
        Err(e) => return fail(ev, format!("Pick matrix: {e}")),
    };
    ev.verdict = Some(verdict.clone());
    if !verdict.unique {
        let what = if verdict.solvable { "positive definite" } else { "not positive semidefinite" };
        return fail(ev, format!("Pick matrix on the graph is {what}"));
    }
    let g = match reconstruct_unique(&problem, &matrix, &tol.pick) {
        Ok(g) => g,
        Err(e) => return fail(ev, format!("reconstruction: {e}")),
    };
    ev.consistency_residual = Some(problem.interpolation_error(&g));
    let fresh = fresh_points(tol.seed, stream, tol.fresh_points, tol.fresh_radius);
    match max_deviation(&fresh, |z| g.eval(z), |z| f.eval(&graph.at(z))) {
        Ok(r) => ev.reconstruction_residual = Some(r),
        Err(e) => return fail(ev, format!("residual: {e}")),
    }
    let deg = ev.restricted_degree.unwrap();
    let residual = ev.reconstruction_residual.unwrap();
    let consistency = ev.consistency_residual.unwrap();
    ev.failure = if deg >= taus.len() {
        Some(format!("degree {deg} on the graph is not below N = {}", taus.len()))
    } else if !(residual <= tol.residual) {
        Some(format!("reconstruction residual {residual:e} exceeds {:e}", tol.residual))
    } else if !(consistency <= tol.consistency) {
        Some(format!("consistency residual {consistency:e} exceeds {:e}", tol.consistency))
    } else {
        None
    };
    ev.passed = ev.failure.is_none();
    ev
}

#[cfg(test)]
mod tests;
