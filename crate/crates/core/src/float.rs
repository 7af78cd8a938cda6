// Error-free transformations for `1 − w v̄`, which cancels catastrophically
// when both factors are close to the unit circle.

use crate::C64;

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `1 − Re(w v̄)` with nearly full relative accuracy.
pub(crate) fn one_minus_re_conj_product(w: C64, v: C64) -> f64 {
    let (p1, e1) = two_prod(w.re, v.re);
    let (p2, e2) = two_prod(w.im, v.im);
    let (s, e3) = two_sum(p1, p2);
    let (d, e4) = two_sum(1.0, -s);
    d + (e4 - (e1 + e2 + e3))
}

/// `1 − w v̄`.
pub(crate) fn one_minus_conj_product(w: C64, v: C64) -> C64 {
    C64::new(one_minus_re_conj_product(w, v), w.re * v.im - w.im * v.re)
}

/// Shrinks a (nearly) unimodular `z` by ulps until `re² + im² ≤ 1` holds in
/// exact arithmetic, so that `1 − |z|²` is never negative.
pub(crate) fn inward(z: C64) -> C64 {
    let mut z = z;
    while one_minus_re_conj_product(z, z) < 0.0 {
        z *= 1.0 - f64::EPSILON;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn inward_points_have_nonnegative_defect(theta in 0.0..std::f64::consts::TAU) {
            let z = inward(C64::new(theta.cos(), theta.sin()));
            prop_assert!(one_minus_re_conj_product(z, z) >= 0.0);
            prop_assert!((z.norm() - 1.0).abs() < 1e-15);
        }

        #[test]
        fn matches_naive_away_from_cancellation(a in -0.7..0.7f64, b in -0.7..0.7f64, c in -0.7..0.7f64, d in -0.7..0.7f64) {
            let (w, v) = (C64::new(a, b), C64::new(c, d));
            let naive = C64::new(1.0, 0.0) - w * v.conj();
            prop_assert!((one_minus_conj_product(w, v) - naive).norm() < 1e-15);
        }
    }

    #[test]
    fn exact_on_representable_cases() {
        let w = C64::new(0.6, 0.8);
        // 0.36 + 0.64 rounds to 1 naively; the compensated value is the true defect
        let exact = one_minus_re_conj_product(w, w);
        assert!(exact.abs() < 1e-16);
        assert_eq!(one_minus_re_conj_product(C64::new(0.5, 0.0), C64::new(0.5, 0.0)), 0.75);
    }
}
