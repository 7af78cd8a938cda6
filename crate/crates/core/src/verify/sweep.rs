use serde::{Deserialize, Serialize};

use super::fresh_points;
use crate::geometry::{choose_mobius, intersect_mobius_with_flat};
use crate::pick::{classify_problem, reconstruct_unique, PickTolerances};
use crate::rif::{OneVarRational, RationalInnerFunction};
use crate::{unimodular, Error, Execution, MobiusMap, NodeGrid, PickProblem, Result, C64};

/// A function on the bidisc that can at least be evaluated along Möbius
/// graphs `z ↦ (z, m(z))`.
pub trait GraphFunction: Sync {
    fn eval_graph(&self, m: &MobiusMap, zs: &[C64]) -> Result<Vec<C64>>;
}

impl GraphFunction for RationalInnerFunction {
    fn eval_graph(&self, m: &MobiusMap, zs: &[C64]) -> Result<Vec<C64>> {
        zs.iter().map(|&z| self.eval(&[z, m.eval(z)?])).collect()
    }
}

/// A closure `(z₁, z₂) ↦ value`.
pub struct Pointwise<F>(pub F);

impl<F> GraphFunction for Pointwise<F>
where
    F: Fn(C64, C64) -> Result<C64> + Sync,
{
    fn eval_graph(&self, m: &MobiusMap, zs: &[C64]) -> Result<Vec<C64>> {
        zs.iter().map(|&z| (self.0)(z, m.eval(z)?)).collect()
    }
}

/// The interpolant determined by node data alone: flat-disc reconstructions
/// fix the values where a Möbius graph crosses the flat discs, and a second
/// Pick reconstruction on the graph gives the values along it.
#[derive(Debug, Clone)]
pub struct ChainInterpolant {
    taus: Vec<C64>,
    flats: Vec<OneVarRational>,
    tol: PickTolerances,
}

impl ChainInterpolant {
    /// `values` holds one target per grid node, in grid order.
    pub fn from_values(grid: &NodeGrid, values: &[C64], tol: &PickTolerances) -> Result<Self> {
        if grid.dim() != 2 {
            return Err(Error::Precondition("the chain interpolant is defined on the bidisc".into()));
        }
        if values.len() != grid.nodes().len() {
            return Err(Error::Dimension { expected: grid.nodes().len(), got: values.len() });
        }
        let big_n = grid.degree_bound();
        let flats = (0..grid.discs().len())
            .map(|k| {
                let p = PickProblem::new(grid.base_points()[k].clone(), values[k * big_n..(k + 1) * big_n].to_vec())?;
                let (m, _) = classify_problem(&p, tol)?;
                reconstruct_unique(&p, &m, tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainInterpolant { taus: grid.tau_table()[0].clone(), flats, tol: *tol })
    }

    /// The reconstruction on the graph of `m`.
    pub fn on_graph(&self, m: &MobiusMap) -> Result<OneVarRational> {
        let inter = intersect_mobius_with_flat(&self.taus, m)?;
        let points = inter.points();
        let targets = self.flats.iter().zip(&points).map(|(h, &r)| h.eval(r)).collect::<Result<Vec<_>>>()?;
        let p = PickProblem::new(points, targets)?;
        let (matrix, _) = classify_problem(&p, &self.tol)?;
        reconstruct_unique(&p, &matrix, &self.tol)
    }
}

impl GraphFunction for ChainInterpolant {
    fn eval_graph(&self, m: &MobiusMap, zs: &[C64]) -> Result<Vec<C64>> {
        let g = self.on_graph(m)?;
        zs.iter().map(|&z| g.eval(z)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    /// Rotations of `t` spread over `[−0.9ε, 0.9ε]`.
    pub t_steps: usize,
    /// `|a|` as fractions of `ε`.
    pub a_radii: Vec<f64>,
    pub a_angles: usize,
    pub points_per_map: usize,
    pub point_radius: f64,
    pub seed: u64,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { t_steps: 3, a_radii: vec![0.5, 0.75, 0.95], a_angles: 6, points_per_map: 8, point_radius: 0.9, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub map: MobiusMap,
    #[serde(with = "crate::json::complex")]
    pub z: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub center: MobiusMap,
    pub eps: f64,
    pub maps: usize,
    pub points_per_map: usize,
    pub max_deviation: f64,
    pub worst: Option<SweepPoint>,
    /// Maps on which either function could not be evaluated.
    pub failed_maps: usize,
    pub first_failure: Option<String>,
}

/// Largest `|f − g|` over sampled points of the graphs of `m_{t,a}` for
/// `(t, a)` in the validated `ε`-ball around the map chosen for `taus`.
pub fn equality_sweep(
    f: &dyn GraphFunction,
    g: &dyn GraphFunction,
    taus: &[C64],
    params: &SweepParams,
    exec: Execution,
) -> Result<SweepReport> {
    if params.t_steps == 0 || params.a_angles == 0 || params.a_radii.is_empty() || params.points_per_map == 0 {
        return Err(Error::Configuration("sweep sizes must be positive".into()));
    }
    if params.a_radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) || !(params.point_radius > 0.0 && params.point_radius < 1.0) {
        return Err(Error::Configuration("sweep radii must lie in (0, 1)".into()));
    }
    let (center, eps) = choose_mobius(taus, params.seed)?;
    let mut maps = Vec::new();
    for i in 0..params.t_steps {
        let off = if params.t_steps == 1 { 0.0 } else { -0.9 + 1.8 * i as f64 / (params.t_steps - 1) as f64 };
        let t = center.t() * unimodular(off * eps);
        for &r in &params.a_radii {
            for k in 0..params.a_angles {
                let a = unimodular(std::f64::consts::TAU * k as f64 / params.a_angles as f64) * (r * eps);
                maps.push(MobiusMap::new(t, a)?);
            }
        }
    }
    let zs = fresh_points(params.seed, 7 << 40, params.points_per_map, params.point_radius);
    let per_map = exec.map_slice(&maps, |m| -> Result<(f64, usize)> {
        let fv = f.eval_graph(m, &zs)?;
        let gv = g.eval_graph(m, &zs)?;
        Ok(fv
            .iter()
            .zip(&gv)
            .enumerate()
            .map(|(i, (a, b))| ((a - b).norm(), i))
            .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc }))
    });
    let mut report = SweepReport {
        center,
        eps,
        maps: maps.len(),
        points_per_map: zs.len(),
        max_deviation: 0.0,
        worst: None,
        failed_maps: 0,
        first_failure: None,
    };
    for (m, res) in maps.iter().zip(per_map) {
        match res {
            Ok((dev, i)) => {
                if report.worst.is_none() || dev > report.max_deviation {
                    report.max_deviation = dev;
                    report.worst = Some(SweepPoint { map: *m, z: zs[i] });
                }
            }
            Err(e) => {
                report.failed_maps += 1;
                report.first_failure.get_or_insert_with(|| e.to_string());
            }
        }
    }
    Ok(report)
}
