//! Uniqueness sets for the Pick interpolation problem on the polydisc.
//!
//! The crate builds rational inner functions in Rudin normal form, generates
//! the `N^n`-point node lattices carried by flat analytic discs, and checks
//! uniqueness numerically by restricting to discs and classifying the
//! one-variable Pick matrices that result.
//!
//! Module map:
//!
//! * [`polynomial`]: sparse multivariate complex polynomials, reflection,
//!   univariate roots and stability sampling.
//! * [`rif`]: rational inner functions and their restrictions to discs.
//! * [`geometry`]: Möbius maps, analytic discs, intersections and node grids.
//! * [`pick`]: one-variable Pick matrices, classification and reconstruction.
//! * [`verify`]: certificates chaining the above together.

// `!(x < bound)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
mod float;
pub mod geometry;
pub mod json;
mod linalg;
pub mod pick;
pub mod polynomial;
pub mod report;
pub mod rif;
pub mod sample;
pub mod verify;

pub use nalgebra::Complex;

/// Double precision complex number used throughout the crate.
pub type C64 = Complex<f64>;

pub use error::{Error, Result};
pub use exec::Execution;
pub use geometry::{AnalyticDisc, GridConfig, MobiusMap, NodeGrid};
pub use pick::{PickMatrix, PickProblem, UniquenessVerdict};
pub use polynomial::{MultiIndex, MultiPoly};
pub use rif::{OneVarRational, RationalInnerFunction};
pub use verify::{Tolerances, UniquenessCertificate};

#[cfg(test)]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn unimodular(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}
