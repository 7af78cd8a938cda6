use serde::{Deserialize, Serialize};

use super::mobius::{check_unimodular, MobiusMap};
use crate::{Error, Result, C64};

/// Holomorphic embeddings of a disc (or an `(n−1)`-polydisc) into `Dⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDisc {
    /// `z ↦ (z, τ₂z, …, τₙz)`; `multipliers` holds `τ₂, …, τₙ`.
    Flat {
        #[serde(with = "crate::json::complex_vec")]
        multipliers: Vec<C64>,
    },
    /// `z ↦ (z, m(z))` in the bidisc.
    MobiusGraph { map: MobiusMap },
    /// `(z₁, …, zₙ₋₁) ↦ (z₁, …, zₙ₋₁, ρ̄ zₙ₋₁)`.
    CoordinatePairing {
        n: usize,
        #[serde(with = "crate::json::complex")]
        rho: C64,
    },
    /// `(z₁, …, zₙ₋₁) ↦ (z₁, …, zₙ₋₁, τ z₁)`.
    FirstCoordinateLift {
        n: usize,
        #[serde(with = "crate::json::complex")]
        tau: C64,
    },
}

impl AnalyticDisc {
    pub fn flat(multipliers: Vec<C64>) -> Result<Self> {
        for (i, t) in multipliers.iter().enumerate() {
            check_unimodular(*t, &format!("multiplier τ{}", i + 2))?;
        }
        Ok(AnalyticDisc::Flat { multipliers })
    }

    /// The diagonal `z ↦ (z, …, z)` in `Dⁿ`.
    pub fn diagonal(n: usize) -> Self {
        AnalyticDisc::Flat { multipliers: vec![C64::new(1.0, 0.0); n.saturating_sub(1)] }
    }

    pub fn mobius_graph(map: MobiusMap) -> Self {
        AnalyticDisc::MobiusGraph { map }
    }

    pub fn coordinate_pairing(n: usize, rho: C64) -> Result<Self> {
        check_unimodular(rho, "ρ")?;
        if n < 2 {
            return Err(Error::arg("coordinate pairing needs n ≥ 2"));
        }
        Ok(AnalyticDisc::CoordinatePairing { n, rho })
    }

    pub fn first_coordinate_lift(n: usize, tau: C64) -> Result<Self> {
        check_unimodular(tau, "τ")?;
        if n < 2 {
            return Err(Error::arg("lift needs n ≥ 2"));
        }
        Ok(AnalyticDisc::FirstCoordinateLift { n, tau })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticDisc::Flat { multipliers } => {
                for t in multipliers {
                    check_unimodular(*t, "multiplier")?;
                }
                Ok(())
            }
            AnalyticDisc::MobiusGraph { map } => MobiusMap::new(map.t(), map.a()).map(|_| ()),
            AnalyticDisc::CoordinatePairing { n, rho } => Self::coordinate_pairing(*n, *rho).map(|_| ()),
            AnalyticDisc::FirstCoordinateLift { n, tau } => Self::first_coordinate_lift(*n, *tau).map(|_| ()),
        }
    }

    /// Dimension of the target polydisc.
    pub fn ambient_dim(&self) -> usize {
        match self {
            AnalyticDisc::Flat { multipliers } => multipliers.len() + 1,
            AnalyticDisc::MobiusGraph { .. } => 2,
            AnalyticDisc::CoordinatePairing { n, .. } | AnalyticDisc::FirstCoordinateLift { n, .. } => *n,
        }
    }

    /// Dimension of the parameter polydisc.
    pub fn base_dim(&self) -> usize {
        match self {
            AnalyticDisc::Flat { .. } | AnalyticDisc::MobiusGraph { .. } => 1,
            AnalyticDisc::CoordinatePairing { n, .. } | AnalyticDisc::FirstCoordinateLift { n, .. } => n - 1,
        }
    }

    /// For the linear kinds, each target coordinate as `mult · z_source`.
    pub fn linear_images(&self) -> Option<Vec<(usize, C64)>> {
        let one = C64::new(1.0, 0.0);
        match self {
            AnalyticDisc::Flat { multipliers } => {
                Some(std::iter::once((0, one)).chain(multipliers.iter().map(|&t| (0, t))).collect())
            }
            AnalyticDisc::MobiusGraph { .. } => None,
            AnalyticDisc::CoordinatePairing { n, rho } => {
                let mut v: Vec<(usize, C64)> = (0..n - 1).map(|i| (i, one)).collect();
                v.push((n - 2, rho.conj()));
                Some(v)
            }
            AnalyticDisc::FirstCoordinateLift { n, tau } => {
                let mut v: Vec<(usize, C64)> = (0..n - 1).map(|i| (i, one)).collect();
                v.push((0, *tau));
                Some(v)
            }
        }
    }

    /// Image of a base point, which must lie in the open (poly)disc.
    pub fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        if z.len() != self.base_dim() {
            return Err(Error::Dimension { expected: self.base_dim(), got: z.len() });
        }
        if let Some(bad) = z.iter().find(|w| !(w.norm() < 1.0)) {
            return Err(Error::arg(format!("base point modulus {} is not below 1", bad.norm())));
        }
        Ok(self.apply(z))
    }

    /// [`eval`](Self::eval) without the domain checks; also used on the
    /// closed disc.
    pub(crate) fn apply(&self, z: &[C64]) -> Vec<C64> {
        match self {
            AnalyticDisc::MobiusGraph { map } => vec![z[0], map.apply(z[0])],
            _ => self
                .linear_images()
                .expect("linear kind")
                .into_iter()
                .map(|(src, mult)| mult * z[src])
                .collect(),
        }
    }

    /// Shorthand for one-dimensional discs.
    pub(crate) fn at(&self, z: C64) -> Vec<C64> {
        self.apply(&[z])
    }
}
