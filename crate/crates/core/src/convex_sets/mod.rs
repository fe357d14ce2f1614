//! Closed subsets of `R^d`, `d ≤ 3`, as finite unions of `base ⊕ cone` cells.
//!
//! The free functions at this level are thin wrappers over the methods of
//! [`SetUnion`] and [`ConvexCell`].

mod cell;
mod cone;
mod hausdorff;
mod hull;
pub mod polygon;
mod recession;
mod text;
mod union;
mod vector;

use thiserror::Error;

pub use cell::{Base, ConvexCell};
pub use cone::{Cone, ConeShape};
pub use hausdorff::{clip_to_window, excess_windowed, hausdorff, hausdorff_via_support, hausdorff_windowed};
pub use hull::extreme_points;
pub use recession::{
    hull_membership_via_support, recession_cone, HullMembership, RecessionCone, RecessionRule,
    MEMBERSHIP_TOL,
};
pub use text::cell_to_line;
pub use union::{SetUnion, DEFAULT_CELL_BUDGET};
pub use vector::{spread_directions, DualDirection, Vector};

/// Canonicalization tolerance for vertices and cone generators.
pub const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("direction of norm {0} lies outside the dual unit ball")]
    DirectionOutsideDualBall(f64),
    #[error("zero direction")]
    ZeroDirection,
    #[error("invalid radius {0}")]
    NegativeRadius(f64),
    #[error("polytope with no vertices")]
    EmptyPolytope,
    #[error("a set union needs at least one cell")]
    EmptyUnion,
    #[error("unsupported cell combination: {0}")]
    UnsupportedCellCombination(&'static str),
    #[error("result needs {needed} cells, budget is {budget}")]
    CellBudgetExceeded { needed: usize, budget: usize },
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),
    #[error("operand has a nontrivial recession cone; use the windowed distance")]
    UnboundedOperand,
    #[error("a set is empty inside the window")]
    EmptyAfterWindow,
    #[error("window radius must be positive and finite, got {0}")]
    InvalidWindow(f64),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("Hausdorff refinement exceeded its piece budget")]
    HausdorffBudgetExceeded,
    #[error("no directions given")]
    EmptyDirections,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub fn minkowski_sum(a: &SetUnion, b: &SetUnion) -> Result<SetUnion, GeometryError> {
    a.minkowski_sum(b)
}

pub fn minkowski_sum_with_budget(
    a: &SetUnion,
    b: &SetUnion,
    budget: usize,
) -> Result<SetUnion, GeometryError> {
    a.minkowski_sum_counted(b, budget).map(|(u, _)| u)
}

pub fn scale(lambda: f64, a: &SetUnion) -> Result<SetUnion, GeometryError> {
    a.scale(lambda)
}

pub fn convex_hull(a: &SetUnion) -> Result<ConvexCell, GeometryError> {
    a.convex_hull()
}

/// `s(x*, a)`, possibly `+∞`.
pub fn support(x_star: &DualDirection, a: &SetUnion) -> f64 {
    a.support(x_star.vector())
}
