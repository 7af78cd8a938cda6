use serde::{Deserialize, Serialize};

use crate::json::ComplexJson;
use crate::pick::{classify_problem, two_solutions, PickTolerances, ValueDisc};
use crate::rif::{OneVarRational, RationalInnerFunction};
use crate::{AnalyticDisc, Error, NodeGrid, PickProblem, Result, UniquenessVerdict, C64};

/// Two interpolants that agree with `f` at all but one node of a disc yet
/// differ at `z*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub disc: usize,
    pub embedding: AnalyticDisc,
    pub restricted_degree: usize,
    #[serde(with = "crate::json::complex")]
    pub dropped_node: C64,
    #[serde(with = "crate::json::complex_vec")]
    pub remaining_nodes: Vec<C64>,
    pub verdict: UniquenessVerdict,
    #[serde(with = "crate::json::complex")]
    pub z_star: C64,
    pub value_disc: ValueDisc,
    pub first: OneVarRational,
    pub second: OneVarRational,
    pub values_at_z_star: [ComplexJson; 2],
    /// `|g₁(z*) − g₂(z*)|`, which should equal `2 · radius`.
    pub disagreement: f64,
    /// Largest `|gᵢ(λ) − f(D(λ))|` over the remaining nodes.
    pub max_interpolation_error: f64,
    #[serde(with = "crate::json::complex")]
    pub f_at_z_star: C64,
    pub f_in_value_disc: bool,
}

/// Drops the last node of disc `disc_index` and builds two distinct
/// interpolants of `f ∘ D` on the remaining ones.
///
/// Only meaningful when `f ∘ D` has degree exactly `N − 1`: with lower
/// degree the remaining nodes may still determine the restriction.
pub fn sharpness_demo(
    f: &RationalInnerFunction,
    grid: &NodeGrid,
    disc_index: usize,
    z_star: C64,
    tol: &PickTolerances,
) -> Result<SharpnessReport> {
    if f.nvars() != grid.dim() {
        return Err(Error::Dimension { expected: grid.dim(), got: f.nvars() });
    }
    let disc = grid
        .discs()
        .get(disc_index)
        .ok_or_else(|| Error::arg(format!("disc index {disc_index} out of range (grid has {})", grid.discs().len())))?;
    let big_n = grid.degree_bound();
    let h = f.restrict(disc)?;
    let deg = h.zeros_in_disc();
    if deg + 1 != big_n {
        return Err(Error::Inapplicable(format!(
            "restriction to disc {disc_index} has degree {deg}; removing a node only breaks uniqueness \
             when the degree is N − 1 = {}, otherwise {} nodes already determine it",
            big_n - 1,
            deg + 1
        )));
    }
    let base = &grid.base_points()[disc_index];
    let remaining = base[..big_n - 1].to_vec();
    let targets = remaining.iter().map(|&z| f.eval(&disc.at(z))).collect::<Result<Vec<_>>>()?;
    let problem = PickProblem::new(remaining.clone(), targets.clone())?;
    let (_, verdict) = classify_problem(&problem, tol)?;
    let two = two_solutions(&problem, z_star, tol)?;
    let first_val = two.first.eval(z_star)?;
    let second_val = two.second.eval(z_star)?;
    let max_interpolation_error = problem.interpolation_error(&two.first).max(problem.interpolation_error(&two.second));
    let f_at_z_star = f.eval(&disc.eval(&[z_star])?)?;
    Ok(SharpnessReport {
        disc: disc_index,
        embedding: disc.clone(),
        restricted_degree: deg,
        dropped_node: base[big_n - 1],
        remaining_nodes: remaining,
        verdict,
        z_star,
        value_disc: two.value_disc,
        disagreement: (first_val - second_val).norm(),
        values_at_z_star: [first_val.into(), second_val.into()],
        first: two.first,
        second: two.second,
        max_interpolation_error,
        f_at_z_star,
        f_in_value_disc: two.value_disc.contains(f_at_z_star, 1e-9),
    })
}
