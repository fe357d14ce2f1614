use super::cell::{Base, ConvexCell};
use super::cone::Cone;
use super::{DualDirection, GeometryError, SetUnion, Vector};

/// How a recession cone of a union was established.
#[derive(Clone, Debug, PartialEq)]
pub enum RecessionRule {
    /// Every cell carries the same cone.
    Uniform,
    /// Cell `cell` lies in the union and the union lies in
    /// `cells[cell] ⊕ B(0, radius)`.
    Sandwich { cell: usize, radius: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RecessionCone {
    Known { cone: Cone, rule: RecessionRule },
    Unknown,
}

impl RecessionCone {
    pub fn cone(&self) -> Option<&Cone> {
        match self {
            RecessionCone::Known { cone, .. } => Some(cone),
            RecessionCone::Unknown => None,
        }
    }
}

/// Recession cone of a union of cells.
///
/// Returns the common cone when all cells agree; otherwise looks for a cell
/// whose cone contains every other cone and that absorbs the rest of the
/// union within a finite radius.
pub fn recession_cone(a: &SetUnion) -> RecessionCone {
    let cells = a.cells();
    let first = cells[0].cone();
    if cells.iter().all(|c| c.cone().approx_eq(first, super::EPS)) {
        return RecessionCone::Known {
            cone: first.clone(),
            rule: RecessionRule::Uniform,
        };
    }
    for (i, c0) in cells.iter().enumerate() {
        if !cells.iter().all(|c| c0.cone().contains_cone(c.cone())) {
            continue;
        }
        if let Ok(radius) = absorption_radius(c0, cells) {
            return RecessionCone::Known {
                cone: c0.cone().clone(),
                rule: RecessionRule::Sandwich { cell: i, radius },
            };
        }
    }
    RecessionCone::Unknown
}

/// Smallest `R` with every cell inside `c0 ⊕ B(0, R)`, given that `c0`'s cone
/// contains all other cones (so only the bases need checking).
fn absorption_radius(c0: &ConvexCell, cells: &[ConvexCell]) -> Result<f64, GeometryError> {
    let mut r = 0.0_f64;
    for c in cells {
        match c.base() {
            Base::Polytope(v) => {
                for p in v {
                    r = r.max(c0.distance_to(p)?);
                }
            }
            Base::Ball { center, radius } => r = r.max(c0.distance_to(center)? + radius),
        }
    }
    Ok(r)
}

/// Outcome of a sampled hull-membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum HullMembership {
    Inside,
    Separated(DualDirection),
}

/// Violation tolerance of [`hull_membership_via_support`].
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Tests `<x*, x> <= s(x*, a)` over the given directions and reports the most
/// violated one. `Inside` is only a necessary condition for membership in the
/// closed convex hull.
pub fn hull_membership_via_support(
    x: &Vector,
    a: &SetUnion,
    directions: &[DualDirection],
) -> Result<HullMembership, GeometryError> {
    if directions.is_empty() {
        return Err(GeometryError::EmptyDirections);
    }
    if x.dim() != a.dim() {
        return Err(GeometryError::DimensionMismatch(a.dim(), x.dim()));
    }
    let mut worst: Option<(f64, DualDirection)> = None;
    for u in directions {
        if u.dim() != a.dim() {
            return Err(GeometryError::DimensionMismatch(a.dim(), u.dim()));
        }
        let gap = u.vector().dot(x) - a.support(u.vector());
        if gap > MEMBERSHIP_TOL && worst.as_ref().is_none_or(|w| gap > w.0) {
            worst = Some((gap, *u));
        }
    }
    Ok(match worst {
        Some((_, u)) => HullMembership::Separated(u),
        None => HullMembership::Inside,
    })
}
