//! Seeded random test objects: rational inner functions built from affine
//! stable factors, and finite Blaschke products.

use std::f64::consts::TAU;

use rand::Rng;

use crate::polynomial::{MultiIndex, MultiPoly};
use crate::rif::{make_rif, OneVarRational, RationalInnerFunction};
use crate::{unimodular, C64};

const MAX_FACTORS: usize = 4;

fn random_unimodular<R: Rng>(rng: &mut R) -> C64 {
    unimodular(rng.random_range(0.0..TAU))
}

/// `1 − Σ_{r∈S} c_r z_r` with `Σ |c_r| = s`.
fn affine_factor<R: Rng>(rng: &mut R, n: usize, support: &[usize], s: f64) -> MultiPoly {
    let weights: Vec<f64> = support.iter().map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut terms = vec![(vec![0u32; n], C64::new(1.0, 0.0))];
    for (&r, w) in support.iter().zip(&weights) {
        let mut e = vec![0u32; n];
        e[r] = 1;
        terms.push((e, -random_unimodular(rng) * (s * w / total)));
    }
    MultiPoly::from_terms(n, terms).expect("well formed")
}

fn build<R: Rng>(rng: &mut R, n: usize, max_degree: u32, boundary_prob: f64) -> RationalInnerFunction {
    let budget = rng.random_range(0..=max_degree);
    let mut remaining = budget;
    let mut d = vec![0u32; n];
    let mut q = MultiPoly::one(n);
    let mut factors = 0;
    while remaining > 0 {
        if factors >= MAX_FACTORS || rng.random_bool(0.15) {
            // bare monomial factor
            d[rng.random_range(0..n)] += 1;
            remaining -= 1;
            continue;
        }
        let size = rng.random_range(1..=(remaining as usize).min(n));
        let mut vars: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = rng.random_range(i..n);
            vars.swap(i, j);
        }
        let support = &vars[..size];
        let s = if size > 1 && rng.random_bool(boundary_prob) { 1.0 } else { rng.random_range(0.3..0.95) };
        q = q.mul(&affine_factor(rng, n, support, s)).expect("same dimension");
        for &r in support {
            d[r] += 1;
        }
        remaining -= size as u32;
        factors += 1;
    }
    make_rif(random_unimodular(rng), MultiIndex::new(d), q).expect("affine factors are stable")
}

/// Random RIF of degree `≤ max_degree` on `Dⁿ`: `q` is a product of at most
/// four affine factors, a fifth of the multi-variable ones touching the torus.
pub fn random_rif<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> RationalInnerFunction {
    build(rng, n, max_degree, 0.2)
}

/// Like [`random_rif`] but every factor has coefficient sum `< 0.95`, so `q`
/// has no zeros on the closed polydisc.
pub fn random_strict_rif<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> RationalInnerFunction {
    build(rng, n, max_degree, 0.0)
}

/// `c ∏ (z − aᵢ) / (1 − āᵢ z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blaschke {
    pub constant: C64,
    pub zeros: Vec<C64>,
}

impl Blaschke {
    pub fn random<R: Rng>(rng: &mut R, degree: usize, max_zero_modulus: f64) -> Self {
        let zeros = (0..degree).map(|_| crate::rif::random_disc_point(rng, max_zero_modulus)).collect();
        Blaschke { constant: crate::float::inward(random_unimodular(rng)), zeros }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros
            .iter()
            .fold(self.constant, |acc, a| acc * (z - a) / (C64::new(1.0, 0.0) - a.conj() * z))
    }

    pub fn to_rational(&self) -> OneVarRational {
        let mut num = MultiPoly::constant(1, self.constant);
        let mut den = MultiPoly::one(1);
        for a in &self.zeros {
            num = num.mul(&MultiPoly::univariate(&[-a, C64::new(1.0, 0.0)])).expect("univariate");
            den = den.mul(&MultiPoly::univariate(&[C64::new(1.0, 0.0), -a.conj()])).expect("univariate");
        }
        OneVarRational::new(num, den).expect("Blaschke products reduce")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_rifs_respect_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3 {
            for _ in 0..20 {
                let f = random_rif(&mut rng, n, 3);
                assert!(f.degree() <= 3);
                assert!(f.q().multidegree().dominated_by(f.d()));
            }
        }
    }

    #[test]
    fn blaschke_is_inner() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = Blaschke::random(&mut rng, 3, 0.9);
        let r = b.to_rational();
        assert!(r.is_inner());
        assert_eq!(r.zeros_in_disc(), 3);
        let z = C64::new(0.2, -0.3);
        assert!((r.eval(z).unwrap() - b.eval(z)).norm() < 1e-13);
    }
}
