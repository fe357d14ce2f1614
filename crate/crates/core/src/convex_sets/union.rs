use super::cell::{cmp_keys, Base, ConvexCell};
use super::cone::Cone;
use super::{GeometryError, Vector, EPS};

/// Default maximal number of cells a Minkowski sum may produce.
pub const DEFAULT_CELL_BUDGET: usize = 1_000_000;

/// Finite union of convex cells of one dimension.
///
/// Cells are kept sorted by a canonical key with duplicates (at `1e-12`)
/// removed, so two unions describing the same cell list compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct SetUnion {
    dim: usize,
    cells: Vec<ConvexCell>,
}

impl SetUnion {
    pub fn new(cells: Vec<ConvexCell>) -> Result<SetUnion, GeometryError> {
        let dim = cells.first().ok_or(GeometryError::EmptyUnion)?.dim();
        if let Some(c) = cells.iter().find(|c| c.dim() != dim) {
            return Err(GeometryError::DimensionMismatch(dim, c.dim()));
        }
        Ok(SetUnion {
            dim,
            cells: canonical_cells(cells),
        })
    }

    pub fn single(cell: ConvexCell) -> SetUnion {
        SetUnion {
            dim: cell.dim(),
            cells: vec![cell],
        }
    }

    /// Finite point set.
    pub fn points(points: &[Vector]) -> Result<SetUnion, GeometryError> {
        SetUnion::new(points.iter().copied().map(ConvexCell::point).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[ConvexCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.cells.iter().all(ConvexCell::is_bounded)
    }

    pub fn into_cells(self) -> Vec<ConvexCell> {
        self.cells
    }

    /// Support function of the union: the largest cell support.
    pub fn support(&self, x: &Vector) -> f64 {
        self.cells
            .iter()
            .map(|c| c.support(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distance from `p` to the union.
    pub fn distance_to(&self, p: &Vector) -> Result<f64, GeometryError> {
        let mut best = f64::INFINITY;
        for c in &self.cells {
            best = best.min(c.distance_to(p)?);
        }
        Ok(best)
    }

    pub fn minkowski_sum(&self, other: &SetUnion) -> Result<SetUnion, GeometryError> {
        self.minkowski_sum_counted(other, DEFAULT_CELL_BUDGET).map(|(u, _)| u)
    }

    /// Minkowski sum distributed over the cells. Also returns the cell count
    /// before duplicate removal, `|self| * |other|`.
    pub fn minkowski_sum_counted(
        &self,
        other: &SetUnion,
        budget: usize,
    ) -> Result<(SetUnion, usize), GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch(self.dim, other.dim));
        }
        let raw = self.cells.len().saturating_mul(other.cells.len());
        if raw > budget {
            return Err(GeometryError::CellBudgetExceeded { needed: raw, budget });
        }
        let mut cells = Vec::with_capacity(raw);
        for a in &self.cells {
            for b in &other.cells {
                cells.push(a.minkowski(b)?);
            }
        }
        Ok((
            SetUnion {
                dim: self.dim,
                cells: canonical_cells(cells),
            },
            raw,
        ))
    }

    /// `λ A` for `λ >= 0`; `0 A = {0}`.
    pub fn scale(&self, lambda: f64) -> Result<SetUnion, GeometryError> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(GeometryError::NegativeScale(lambda));
        }
        if !lambda.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if lambda == 0.0 {
            return Ok(SetUnion::single(ConvexCell::point(Vector::zero(self.dim))));
        }
        // Positive scaling preserves the canonical order.
        Ok(SetUnion {
            dim: self.dim,
            cells: self.cells.iter().map(|c| c.scaled(lambda)).collect(),
        })
    }

    pub fn translate(&self, t: &Vector) -> SetUnion {
        SetUnion {
            dim: self.dim,
            cells: canonical_cells(self.cells.iter().map(|c| c.translated(t)).collect()),
        }
    }

    /// Closed convex hull. Needs polytope bases throughout, or a single ball cell.
    pub fn convex_hull(&self) -> Result<ConvexCell, GeometryError> {
        if self.cells.len() == 1 {
            return Ok(self.cells[0].clone());
        }
        let mut vertices = Vec::new();
        let mut cone = Cone::trivial(self.dim);
        for c in &self.cells {
            match c.base() {
                Base::Polytope(v) => vertices.extend_from_slice(v),
                Base::Ball { .. } => {
                    return Err(GeometryError::UnsupportedCellCombination(
                        "convex hull of a union containing a ball and other cells",
                    ))
                }
            }
            cone = cone.merge(c.cone());
        }
        ConvexCell::new(Base::Polytope(vertices), cone)
    }

    pub fn approx_eq(&self, other: &SetUnion, tol: f64) -> bool {
        self.dim == other.dim
            && self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| a.approx_eq(b, tol))
    }
}

fn canonical_cells(cells: Vec<ConvexCell>) -> Vec<ConvexCell> {
    let mut keyed: Vec<(Vec<f64>, ConvexCell)> =
        cells.into_iter().map(|c| (c.cmp_key(), c)).collect();
    keyed.sort_by(|a, b| cmp_keys(&a.0, &b.0));
    keyed.dedup_by(|a, b| a.1.approx_eq(&b.1, EPS));
    keyed.into_iter().map(|(_, c)| c).collect()
}
