//! Exact crossing minimization for upward layered drawings of rooted forests
//! whose leaves have a fixed order on the bottom layer.
//!
//! Two exact solvers are provided:
//!
//! - [`dp::solve_two_trees`]: two trees on any number of layers, in
//!   `O(n1² · n2)` time, by inserting the second tree into the fixed embedding
//!   of the first.
//! - [`grid::solve_three_layer`]: any number `k` of trees on at most three
//!   layers, by a lightest path through a `k`-dimensional grid of partial
//!   layer-2 orders, for every arrangement of the layer-3 roots.
//!
//! [`oracle::brute_force_min`] enumerates every admissible drawing and is the
//! reference both solvers are tested against.

pub mod forest;

pub use forest::{
    check_drawing, count_crossings, crossing_matrix, derive_layer_orders, subdivide_long_edges,
    validate_forest, Drawing, DrawingError, ForestError, LayerOrders, LayeredForest, RawForest,
    RawTree, Tree, Vertex, VertexId,
};

pub mod dp;

pub use dp::{solve_two_trees, DpError, TwoTreeDp};

pub mod constraint;
pub mod generator;
pub mod grid;
pub mod io;
pub mod oracle;

pub use constraint::{Constraint, ConstraintError};
pub use generator::{gen_instance, gen_raw_instance, GenError, GenParams};
pub use grid::{solve_fixed_orders, solve_three_layer, GridError, GridOptions};
pub use oracle::{brute_force_min, enumerate_layer_extensions, OracleError};

/// A drawing together with its number of crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub drawing: Drawing,
    pub crossings: u64,
}
