//! Where a Möbius graph `z ↦ (z, m_{t,a}(z))` meets the flat discs
//! `z ↦ (z, τᵢ z)` of the bidisc.
//!
//! The meeting points solve `τᵢ z = m_{t,a}(z)`, that is
//! `−τᵢ ā z² + (τᵢ − t) z + t a = 0`. The two roots multiply to a number of
//! modulus one, so away from the circle exactly one of them is in the disc.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mobius::{check_unimodular, MobiusMap};
use crate::linalg;
use crate::{unimodular, Error, Result, C64};

pub const INTERSECTION_RESIDUAL_TOL: f64 = 1e-10;
/// Minimum separation of the selected roots accepted by [`choose_mobius`].
pub const MIN_ROOT_GAP: f64 = 1e-6;
/// [`choose_mobius`] keeps every selected root inside this radius.
pub const MAX_ROOT_MODULUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscIntersection {
    #[serde(with = "crate::json::complex")]
    pub tau: C64,
    /// Both roots of the quadratic; `None` stands for the root at infinity
    /// when `a = 0`.
    #[serde(with = "crate::json::complex")]
    pub r: C64,
    pub s: Option<crate::json::ComplexJson>,
    #[serde(with = "crate::json::complex")]
    pub selected: C64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionResult {
    pub map: MobiusMap,
    pub per_disc: Vec<DiscIntersection>,
    pub min_gap: f64,
}

impl IntersectionResult {
    pub fn points(&self) -> Vec<C64> {
        self.per_disc.iter().map(|d| d.selected).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.per_disc.iter().map(|d| d.residual).fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.per_disc.iter().map(|d| d.selected.norm()).fold(0.0, f64::max)
    }
}

fn check_distinct(taus: &[C64]) -> Result<()> {
    for (i, t) in taus.iter().enumerate() {
        check_unimodular(*t, "τ")?;
        for u in &taus[..i] {
            if (t - u).norm() < 1e-12 {
                return Err(Error::arg("multipliers must be pairwise distinct"));
            }
        }
    }
    Ok(())
}

/// Solves `τᵢ z = m(z)` for every `τᵢ`, selecting the root inside the disc.
pub fn intersect_mobius_with_flat(taus: &[C64], m: &MobiusMap) -> Result<IntersectionResult> {
    check_distinct(taus)?;
    let (t, a) = (m.t(), m.a());
    let zero = C64::new(0.0, 0.0);
    let mut per_disc = Vec::with_capacity(taus.len());
    for &tau in taus {
        let qa = -tau * a.conj();
        let qb = tau - t;
        let qc = t * a;
        let (r, s) = if a == zero {
            if qb.norm() < 1e-15 {
                return Err(Error::DegenerateConfiguration(format!(
                    "t = τ = {tau} with a = 0: the graph coincides with the flat disc"
                )));
            }
            (zero, None)
        } else {
            let disc = (qb * qb - qa * qc * 4.0).sqrt();
            let big = if (qb + disc).norm() >= (qb - disc).norm() { qb + disc } else { qb - disc };
            let w = big * -0.5;
            if w.norm() == 0.0 {
                return Err(Error::DegenerateConfiguration("double root at the origin".into()));
            }
            (w / qa, Some(qc / w))
        };
        let inside: Vec<C64> = std::iter::once(r).chain(s).filter(|z| z.norm() < 1.0).collect();
        let selected = match inside.as_slice() {
            [one] => *one,
            [] => return Err(Error::Configuration(format!("no intersection with the flat disc τ = {tau}"))),
            _ => return Err(Error::Configuration(format!("two in-disc roots for τ = {tau}; use a smaller |a|"))),
        };
        let residual = (tau * selected - m.apply(selected)).norm();
        if residual > INTERSECTION_RESIDUAL_TOL {
            return Err(Error::Configuration(format!("intersection residual {residual:e} for τ = {tau}")));
        }
        per_disc.push(DiscIntersection { tau, r, s: s.map(Into::into), selected, residual });
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..per_disc.len() {
        for j in 0..i {
            min_gap = min_gap.min((per_disc[i].selected - per_disc[j].selected).norm());
        }
    }
    Ok(IntersectionResult { map: *m, per_disc, min_gap })
}

fn angle(z: C64) -> f64 {
    z.im.atan2(z.re).rem_euclid(TAU)
}

/// Point of the circle furthest (in arc length) from every `τᵢ`, and that
/// distance.
fn farthest_point(taus: &[C64]) -> (C64, f64) {
    let mut angles: Vec<f64> = taus.iter().map(|&t| angle(t)).collect();
    angles.sort_by(f64::total_cmp);
    // largest half-gap wins, first one on ties
    let mut best = (0.0, -1.0);
    for i in 0..angles.len() {
        let next = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + TAU };
        let half = (next - angles[i]) / 2.0;
        if half > best.1 {
            best = (angles[i] + half, half);
        }
    }
    (unimodular(best.0), best.1)
}

fn acceptable(taus: &[C64], m: &MobiusMap) -> bool {
    match intersect_mobius_with_flat(taus, m) {
        Ok(res) => res.max_modulus() < MAX_ROOT_MODULUS && res.min_gap > MIN_ROOT_GAP,
        Err(_) => false,
    }
}

/// Picks `t` on the circle as far as possible from every `τᵢ` and a centre
/// `a` with `|a| = ε/2`, halving `ε` (from an eighth of the arc distance)
/// until the intersections are valid for the chosen map and for probe maps
/// on the edge of the `ε`-ball. Seed 0 gives a real positive `a`; other
/// seeds rotate it.
pub fn choose_mobius(taus: &[C64], seed: u64) -> Result<(MobiusMap, f64)> {
    if taus.is_empty() {
        return Err(Error::arg("need at least one multiplier"));
    }
    check_distinct(taus)?;
    let (t, arc) = farthest_point(taus);
    let phase = if seed == 0 { 0.0 } else { ChaCha8Rng::seed_from_u64(seed).random_range(0.0..TAU) };
    let mut eps = arc / 8.0;
    for _ in 0..48 {
        let m = MobiusMap::new(t, unimodular(phase) * (eps / 2.0))?;
        let probes_ok = (0..8).all(|k| {
            let a = unimodular(phase + TAU * k as f64 / 8.0) * (eps * 0.999);
            [-1.0, 1.0].iter().all(|&sign| {
                MobiusMap::new(t * unimodular(sign * eps * 0.999), a).is_ok_and(|p| acceptable(taus, &p))
            })
        });
        if acceptable(taus, &m) && probes_ok {
            return Ok((m, eps));
        }
        eps /= 2.0;
    }
    Err(Error::Configuration("no valid Möbius map found after bisection".into()))
}

/// Rank of the evaluation matrix of all bivariate monomials of total degree
/// `≤ degree` at the points `(z, m(z))`, for every map and base point. Full
/// column rank means only the zero polynomial vanishes on the sample.
pub fn sampled_uniqueness_rank(degree: u32, maps: &[MobiusMap], base_points: &[C64]) -> (usize, usize) {
    let monomials: Vec<(u32, u32)> =
        (0..=degree).flat_map(|tot| (0..=tot).map(move |i| (i, tot - i))).collect();
    let points: Vec<(C64, C64)> =
        maps.iter().flat_map(|m| base_points.iter().map(move |&z| (z, m.apply(z)))).collect();
    let mat = DMatrix::from_fn(points.len(), monomials.len(), |r, c| {
        let (z1, z2) = points[r];
        let (i, j) = monomials[c];
        z1.powu(i) * z2.powu(j)
    });
    (linalg::rank(&mat, 1e-10), monomials.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn zero_centre_gives_origin() {
        let taus: Vec<C64> = (0..5).map(|k| unimodular(TAU * k as f64 / 5.0)).collect();
        let m = MobiusMap::new(unimodular(0.3), c64(0.0, 0.0)).unwrap();
        let res = intersect_mobius_with_flat(&taus, &m).unwrap();
        for d in &res.per_disc {
            assert_eq!(d.selected, c64(0.0, 0.0));
            assert!(d.s.is_none());
        }
    }

    #[test]
    fn antipodal_quadratic_example() {
        // τ = −1, t = 1, a = 0.1: 0.1 z² − 2 z + 0.1 = 0, i.e. z² − 20z + 1 = 0
        let m = MobiusMap::new(c64(1.0, 0.0), c64(0.1, 0.0)).unwrap();
        let res = intersect_mobius_with_flat(&[c64(-1.0, 0.0)], &m).unwrap();
        let d = &res.per_disc[0];
        let expected = 10.0 - 99f64.sqrt();
        assert!((d.selected - c64(expected, 0.0)).norm() < 1e-15);
        assert!((d.r * d.s.map(C64::from).unwrap()).norm() - 1.0 < 1e-14);
        assert!(d.residual <= INTERSECTION_RESIDUAL_TOL);
    }

    #[test]
    fn coincident_disc_is_degenerate() {
        let m = MobiusMap::new(c64(1.0, 0.0), c64(0.0, 0.0)).unwrap();
        assert!(matches!(
            intersect_mobius_with_flat(&[c64(1.0, 0.0)], &m),
            Err(Error::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn single_multiplier_gets_antipode() {
        let (m, eps) = choose_mobius(&[c64(1.0, 0.0)], 0).unwrap();
        assert!((m.t() - c64(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(m.a().im, 0.0);
        assert!(m.a().re > 0.0 && (m.a().re - eps / 2.0).abs() < 1e-16);
        let res = intersect_mobius_with_flat(&[c64(1.0, 0.0)], &m).unwrap();
        assert!(res.per_disc[0].selected.norm() < 1.0);
    }

    #[test]
    fn fifth_roots_of_unity() {
        let taus: Vec<C64> = (0..5).map(|k| unimodular(TAU * k as f64 / 5.0)).collect();
        let (m, _) = choose_mobius(&taus, 3).unwrap();
        // t sits at the midpoint of an arc between neighbours
        let t_angle = angle(m.t());
        let offset = (t_angle / (TAU / 5.0)).fract();
        assert!((offset - 0.5).abs() < 1e-12);
        let res = intersect_mobius_with_flat(&taus, &m).unwrap();
        assert!(res.min_gap > MIN_ROOT_GAP);
        for d in &res.per_disc {
            // substitute back into the defining equation
            let lhs = d.tau * d.selected;
            let rhs = m.eval(d.selected).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10);
            assert!(d.selected.norm() < 0.5);
        }
    }

    #[test]
    fn seeded_choice_is_deterministic() {
        let taus = vec![unimodular(0.2), unimodular(2.0), unimodular(4.0)];
        assert_eq!(choose_mobius(&taus, 9).unwrap(), choose_mobius(&taus, 9).unwrap());
        assert_ne!(choose_mobius(&taus, 9).unwrap().0, choose_mobius(&taus, 10).unwrap().0);
    }

    #[test]
    fn duplicate_multipliers_are_rejected() {
        assert!(choose_mobius(&[c64(1.0, 0.0), c64(1.0, 0.0)], 0).is_err());
    }

    #[test]
    fn mobius_family_sample_has_full_rank() {
        let maps: Vec<MobiusMap> = (0..8)
            .map(|k| MobiusMap::new(unimodular(0.1 * k as f64 + 2.0), unimodular(k as f64) * 0.1).unwrap())
            .collect();
        let base: Vec<C64> = (1..=5).map(|j| unimodular(j as f64 * 1.3) * (j as f64 / 6.0)).collect();
        let (rank, cols) = sampled_uniqueness_rank(3, &maps, &base);
        assert_eq!(cols, 10);
        assert_eq!(rank, 10);
        // a single graph cannot separate the monomials from its defining relation
        let (rank_one, _) = sampled_uniqueness_rank(3, &maps[..1], &[c64(0.1, 0.0); 1]);
        assert_eq!(rank_one, 1);
    }
}
