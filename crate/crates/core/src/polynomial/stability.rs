//! Numerical non-vanishing checks on the open polydisc.
//!
//! In one variable the verdict is exact up to root-finding error. In two or
//! more variables it is a sampling heuristic: a polar grid of radius `< 1`
//! plus, for every grid prefix in the first `n − 1` coordinates, the roots
//! of the fiber polynomial in the last coordinate. The torus is sampled too
//! and reported separately, since zeros on `Tⁿ` are allowed.

use serde::{Deserialize, Serialize};

use super::roots::roots_of_coeffs;
use super::MultiPoly;
use crate::exec::Execution;
use crate::{unimodular, Error, Result, C64};

/// Sampling parameters for [`is_stable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityGrid {
    pub radial_levels: Vec<f64>,
    pub angles: usize,
    /// Verdict requires the interior minimum modulus to exceed this.
    pub threshold: f64,
    /// Roots with modulus `≥ 1 − boundary_tol` count as boundary roots.
    pub boundary_tol: f64,
}

impl Default for StabilityGrid {
    fn default() -> Self {
        StabilityGrid {
            radial_levels: vec![0.0, 0.25, 0.5, 0.75, 0.9, 0.99],
            angles: 64,
            threshold: 1e-9,
            boundary_tol: 1e-7,
        }
    }
}

impl StabilityGrid {
    /// Default grid for `nvars` variables. Three or more variables use 32
    /// angles per coordinate to keep the product grid near 10⁷ points.
    pub fn for_nvars(nvars: usize) -> Self {
        let mut g = StabilityGrid::default();
        if nvars >= 3 {
            g.angles = 32;
        }
        g
    }

    fn interior_values(&self) -> Vec<C64> {
        let mut v = Vec::new();
        for &r in &self.radial_levels {
            if r == 0.0 {
                v.push(C64::new(0.0, 0.0));
                continue;
            }
            for k in 0..self.angles {
                v.push(unimodular(std::f64::consts::TAU * k as f64 / self.angles as f64) * r);
            }
        }
        v
    }

    fn torus_values(&self) -> Vec<C64> {
        (0..self.angles).map(|k| unimodular(std::f64::consts::TAU * k as f64 / self.angles as f64)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// Minimum sampled modulus over the open polydisc grid (and over interior
    /// fiber roots, which pull it to ≈0 when present).
    pub min_modulus: f64,
    #[serde(with = "crate::json::complex_vec")]
    pub witness: Vec<C64>,
    /// Minimum sampled modulus on the distinguished boundary.
    pub torus_min_modulus: f64,
    /// True for one variable, where the verdict comes from the roots.
    pub exact: bool,
    pub grid: StabilityGrid,
}

fn cartesian_index(mut k: usize, base: usize, dims: usize) -> Vec<usize> {
    let mut out = vec![0; dims];
    for slot in out.iter_mut().rev() {
        *slot = k % base;
        k /= base;
    }
    out
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

#[derive(Clone)]
struct Minimum {
    modulus: f64,
    point: Vec<C64>,
}

fn min_of(a: Minimum, b: Minimum) -> Minimum {
    if b.modulus < a.modulus {
        b
    } else {
        a
    }
}

/// Minimum of `|p|` over `values^n` together with, when `fiber_roots` is set,
/// any interior root of the last-coordinate fibers.
fn sample_product(p: &MultiPoly, values: &[C64], boundary_tol: f64, fiber_roots: bool, exec: Execution) -> Minimum {
    let n = p.nvars();
    let prefixes = values.len().pow((n - 1) as u32);
    let per_prefix = exec.map_range(prefixes, |k| {
        let idx = cartesian_index(k, values.len(), n - 1);
        let prefix: Vec<C64> = idx.iter().map(|&i| values[i]).collect();
        let fiber = p.partial_eval_last(&prefix);
        let mut best = Minimum { modulus: f64::INFINITY, point: Vec::new() };
        for &z in values {
            let m = horner(&fiber, z).norm();
            if m < best.modulus {
                let mut pt = prefix.clone();
                pt.push(z);
                best = Minimum { modulus: m, point: pt };
            }
        }
        if fiber_roots && fiber.iter().any(|c| c.norm() > 0.0) {
            for r in roots_of_coeffs(&fiber) {
                if r.norm() < 1.0 - boundary_tol {
                    let m = horner(&fiber, r).norm();
                    let mut pt = prefix.clone();
                    pt.push(r);
                    best = min_of(best, Minimum { modulus: m, point: pt });
                }
            }
        }
        best
    });
    per_prefix
        .into_iter()
        .fold(Minimum { modulus: f64::INFINITY, point: Vec::new() }, min_of)
}

/// Checks that `p` does not vanish on the open polydisc.
pub fn is_stable(p: &MultiPoly, grid: &StabilityGrid) -> Result<StabilityReport> {
    is_stable_with(p, grid, Execution::default())
}

pub fn is_stable_with(p: &MultiPoly, grid: &StabilityGrid, exec: Execution) -> Result<StabilityReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if grid.angles == 0 || grid.radial_levels.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(Error::arg("stability grid needs angles > 0 and radial levels in [0, 1)"));
    }
    let interior = grid.interior_values();
    let torus = grid.torus_values();
    let n = p.nvars();

    if n == 1 {
        let coeffs = p.coeffs_1d()?;
        let roots = roots_of_coeffs(&coeffs);
        let inside = roots.iter().copied().find(|r| r.norm() < 1.0 - grid.boundary_tol);
        let mut min = sample_product(p, &interior, grid.boundary_tol, false, Execution::Sequential);
        if let Some(r) = inside {
            min = Minimum { modulus: horner(&coeffs, r).norm(), point: vec![r] };
        }
        let tmin = sample_product(p, &torus, grid.boundary_tol, false, Execution::Sequential);
        return Ok(StabilityReport {
            stable: inside.is_none(),
            min_modulus: min.modulus,
            witness: min.point,
            torus_min_modulus: tmin.modulus,
            exact: true,
            grid: grid.clone(),
        });
    }

    let min = sample_product(p, &interior, grid.boundary_tol, true, exec);
    let tmin = sample_product(p, &torus, grid.boundary_tol, false, exec);
    Ok(StabilityReport {
        stable: min.modulus > grid.threshold,
        min_modulus: min.modulus,
        witness: min.point,
        torus_min_modulus: tmin.modulus,
        exact: false,
        grid: grid.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_is_stable() {
        let r = is_stable(&MultiPoly::one(2), &StabilityGrid::default()).unwrap();
        assert!(r.stable);
        assert_eq!(r.min_modulus, 1.0);
        let r = is_stable(&MultiPoly::one(1), &StabilityGrid::default()).unwrap();
        assert!(r.stable && r.exact);
        assert_eq!(r.min_modulus, 1.0);
    }

    #[test]
    fn interior_zero_is_unstable() {
        let p = MultiPoly::univariate(&[c64(-0.5, 0.0), c64(1.0, 0.0)]);
        let r = is_stable(&p, &StabilityGrid::default()).unwrap();
        assert!(!r.stable);
        assert!((r.witness[0] - c64(0.5, 0.0)).norm() < 1e-14);

        // same factor in a bivariate polynomial
        let p = MultiPoly::from_terms(2, [(vec![0, 0], c64(-0.5, 0.0)), (vec![1, 0], c64(1.0, 0.0))]).unwrap();
        assert!(!is_stable(&p, &StabilityGrid::default()).unwrap().stable);
    }

    #[test]
    fn two_minus_sum_is_stable_with_boundary_zero() {
        let p = MultiPoly::from_terms(
            2,
            [(vec![0, 0], c64(2.0, 0.0)), (vec![1, 0], c64(-1.0, 0.0)), (vec![0, 1], c64(-1.0, 0.0))],
        )
        .unwrap();
        let r = is_stable(&p, &StabilityGrid::default()).unwrap();
        assert!(r.stable);
        // brute-force oracle: minimum over the same polar grid
        let g = StabilityGrid::default();
        let vals = g.interior_values();
        let mut brute = f64::INFINITY;
        for a in &vals {
            for b in &vals {
                brute = brute.min(p.eval(&[*a, *b]).unwrap().norm());
            }
        }
        assert!((r.min_modulus - brute).abs() < 1e-15);
        assert!((brute - 0.02).abs() < 1e-12);
        assert!(r.torus_min_modulus < 1e-15);
        assert!(r.witness.iter().all(|z| z.norm() <= 1.0));
    }

    #[test]
    fn off_grid_interior_zero_is_found_by_fibers() {
        // 1 - 3 z1 z2 vanishes at z1 = z2 = 1/sqrt(3) e^{iθ}, off the grid angles
        let p = MultiPoly::from_terms(2, [(vec![0, 0], c64(1.0, 0.0)), (vec![1, 1], c64(-3.0, 0.1))]).unwrap();
        assert!(!is_stable(&p, &StabilityGrid::default()).unwrap().stable);
    }

    #[test]
    fn one_variable_agrees_with_root_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = StabilityGrid::default();
        for _ in 0..100 {
            let deg = rng.random_range(1..=6);
            // roots scattered around the unit circle so both verdicts occur
            let roots: Vec<C64> = (0..deg)
                .map(|_| crate::unimodular(rng.random_range(0.0..6.3)) * rng.random_range(0.3..1.8))
                .collect();
            let coeffs = super::super::roots::poly_from_roots(c64(1.0, 0.0), &roots);
            let p = MultiPoly::univariate(&coeffs);
            let expected = roots.iter().all(|r| r.norm() >= 1.0 - grid.boundary_tol);
            assert_eq!(is_stable(&p, &grid).unwrap().stable, expected);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let p = MultiPoly::from_terms(
            2,
            [(vec![0, 0], c64(3.0, 0.0)), (vec![1, 1], c64(-1.0, 0.5)), (vec![0, 2], c64(0.5, 0.0))],
        )
        .unwrap();
        let g = StabilityGrid::default();
        let a = is_stable_with(&p, &g, Execution::Sequential).unwrap();
        let b = is_stable_with(&p, &g, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
