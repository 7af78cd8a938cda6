use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub(crate) const UNIMODULAR_TOL: f64 = 1e-12;
const POLE_TOL: f64 = 1e-14;

/// The disc automorphism `m_{t,a}(z) = t (z − a) / (1 − ā z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MobiusJson", into = "MobiusJson")]
pub struct MobiusMap {
    t: C64,
    a: C64,
}

#[derive(Serialize, Deserialize)]
struct MobiusJson {
    #[serde(with = "crate::json::complex")]
    t: C64,
    #[serde(with = "crate::json::complex")]
    a: C64,
}

impl TryFrom<MobiusJson> for MobiusMap {
    type Error = Error;
    fn try_from(j: MobiusJson) -> Result<Self> {
        MobiusMap::new(j.t, j.a)
    }
}

impl From<MobiusMap> for MobiusJson {
    fn from(m: MobiusMap) -> Self {
        MobiusJson { t: m.t, a: m.a }
    }
}

pub(crate) fn check_unimodular(z: C64, what: &str) -> Result<()> {
    if (z.norm() - 1.0).abs() > UNIMODULAR_TOL || !z.norm().is_finite() {
        return Err(Error::arg(format!("{what} must be unimodular, got modulus {}", z.norm())));
    }
    Ok(())
}

impl MobiusMap {
    pub fn new(t: C64, a: C64) -> Result<Self> {
        check_unimodular(t, "rotation t")?;
        if !(a.norm() < 1.0) {
            return Err(Error::arg(format!("centre a must lie in the open disc, got |a| = {}", a.norm())));
        }
        Ok(MobiusMap { t, a })
    }

    pub fn identity() -> Self {
        MobiusMap { t: C64::new(1.0, 0.0), a: C64::new(0.0, 0.0) }
    }

    pub fn t(&self) -> C64 {
        self.t
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if z.norm() > 1.0 + UNIMODULAR_TOL {
            return Err(Error::arg(format!("|z| = {} exceeds 1", z.norm())));
        }
        let den = C64::new(1.0, 0.0) - self.a.conj() * z;
        if den.norm() < POLE_TOL {
            return Err(Error::SingularPoint { modulus: den.norm(), threshold: POLE_TOL });
        }
        Ok(self.t * (z - self.a) / den)
    }

    /// Same formula without the domain checks, for callers that already
    /// guarantee `|z| ≤ 1`.
    pub(crate) fn apply(&self, z: C64) -> C64 {
        self.t * (z - self.a) / (C64::new(1.0, 0.0) - self.a.conj() * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c64, unimodular};

    #[test]
    fn identity_map() {
        let m = MobiusMap::new(c64(1.0, 0.0), c64(0.0, 0.0)).unwrap();
        for z in [c64(0.3, -0.2), c64(0.0, 0.0), c64(-0.9, 0.1)] {
            assert_eq!(m.eval(z).unwrap(), z);
        }
    }

    #[test]
    fn centre_maps_to_origin() {
        let a = c64(0.3, 0.2);
        let m = MobiusMap::new(unimodular(1.1), a).unwrap();
        assert!(m.eval(a).unwrap().norm() < 1e-16);
    }

    #[test]
    fn circle_maps_to_circle() {
        let m = MobiusMap::new(c64(1.0, 0.0), c64(0.3, 0.2)).unwrap();
        for k in 0..16 {
            let zeta = unimodular(std::f64::consts::TAU * k as f64 / 16.0);
            assert!((m.eval(zeta).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MobiusMap::new(c64(2.0, 0.0), c64(0.0, 0.0)).is_err());
        assert!(MobiusMap::new(c64(1.0, 0.0), c64(1.0, 0.0)).is_err());
        let m = MobiusMap::identity();
        assert!(m.eval(c64(1.5, 0.0)).is_err());
    }
}
