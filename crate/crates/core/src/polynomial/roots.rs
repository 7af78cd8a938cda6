use nalgebra::DMatrix;

use super::MultiPoly;
use crate::linalg::complex_eigenvalues;
use crate::{Error, Result, C64};

/// Coefficient error allowed when rebuilding a polynomial from its roots.
pub const ROOT_RECONSTRUCTION_TOL: f64 = 1e-8;

/// All roots of a one-variable polynomial, repeated by multiplicity.
///
/// Exact zero roots are split off first; the rest come from the eigenvalues
/// of the companion matrix, each followed by one Newton step that is kept
/// only if it lowers `|p|`.
pub fn roots_1d(p: &MultiPoly) -> Result<Vec<C64>> {
    let coeffs = p.coeffs_1d()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(roots_of_coeffs(&coeffs))
}

/// Roots from ascending coefficients. The slice must not be all zero.
pub(crate) fn roots_of_coeffs(coeffs: &[C64]) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let top = match coeffs.iter().rposition(|c| *c != zero) {
        Some(t) => t,
        None => return Vec::new(),
    };
    let low = coeffs.iter().position(|c| *c != zero).unwrap_or(0);
    let mut roots = vec![zero; low];
    let core = &coeffs[low..=top];
    let deg = core.len() - 1;
    match deg {
        0 => {}
        1 => roots.push(-core[0] / core[1]),
        _ => {
            let lead = core[deg];
            let mut comp = DMatrix::<C64>::zeros(deg, deg);
            for i in 1..deg {
                comp[(i, i - 1)] = C64::new(1.0, 0.0);
            }
            for i in 0..deg {
                comp[(i, deg - 1)] = -core[i] / lead;
            }
            let eig = complex_eigenvalues(comp).unwrap_or_else(|| durand_kerner(core));
            roots.extend(eig.into_iter().map(|r| newton_polish(core, r)));
        }
    }
    roots
}

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn newton_polish(coeffs: &[C64], r: C64) -> C64 {
    let (p, dp) = horner(coeffs, r);
    if dp.norm() == 0.0 || !dp.norm().is_finite() {
        return r;
    }
    let cand = r - p / dp;
    let (pc, _) = horner(coeffs, cand);
    if cand.re.is_finite() && cand.im.is_finite() && pc.norm() < p.norm() {
        cand
    } else {
        r
    }
}

// Fallback when the Schur iteration does not converge.
fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..deg).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..deg {
            let (p, _) = horner(&monic, z[i]);
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            let step = p / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// `lead · ∏ (z − rᵢ)` as ascending coefficients.
#[cfg(test)]
pub(crate) fn poly_from_roots(lead: C64, roots: &[C64]) -> Vec<C64> {
    let mut c = vec![lead];
    for r in roots {
        let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c
}

/// Divides by `(z − r)`, discarding the remainder.
pub(crate) fn deflate(coeffs: &[C64], r: C64) -> Vec<C64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    let mut out = vec![C64::new(0.0, 0.0); n - 1];
    let mut acc = C64::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc = acc * r + coeffs[k];
        out[k - 1] = acc;
    }
    out
}
