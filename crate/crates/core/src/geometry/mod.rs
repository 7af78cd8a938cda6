//! Möbius maps, analytic discs, Möbius/flat disc intersections and the node
//! lattices built on flat discs.

mod disc;
mod grid;
mod intersect;
mod mobius;

pub use disc::AnalyticDisc;
pub use grid::{default_multipliers, generate_nodes, refined_node_counts, BasePoints, GridConfig, NodeGrid};
pub use intersect::{
    choose_mobius, intersect_mobius_with_flat, sampled_uniqueness_rank, DiscIntersection, IntersectionResult,
    INTERSECTION_RESIDUAL_TOL, MAX_ROOT_MODULUS, MIN_ROOT_GAP,
};
pub use mobius::MobiusMap;
