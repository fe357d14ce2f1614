//! Hausdorff distances between bounded unions, plus the windowed and
//! support-function variants.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::cell::{truncated_polygon, Base, ConvexCell};
use super::cone::ConeShape;
use super::{polygon, spread_directions, GeometryError, SetUnion, Vector};

/// Pieces the planar branch-and-bound may create before giving up.
const PIECE_BUDGET: usize = 1 << 20;

/// Exact Hausdorff distance between two bounded unions.
///
/// Exact in d = 1, for finite point sets, against a single convex cell, and
/// for ball pairs. Planar polytope cells measured against a multi-cell union
/// go through a branch-and-bound whose error is below `1e-10 · scale`.
pub fn hausdorff(a: &SetUnion, b: &SetUnion) -> Result<f64, GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch(a.dim(), b.dim()));
    }
    if !a.is_bounded() || !b.is_bounded() {
        return Err(GeometryError::UnboundedOperand);
    }
    if a.approx_eq(b, 0.0) {
        return Ok(0.0);
    }
    if a.dim() == 1 {
        let ia = intervals(a);
        let ib = intervals(b);
        return Ok(directed_1d(&ia, &ib).max(directed_1d(&ib, &ia)));
    }
    Ok(directed(a.cells(), b.cells())?.max(directed(b.cells(), a.cells())?))
}

/// Hausdorff distance between `a ∩ W` and `b ∩ W` for the box
/// `W = [-R, R]^d`.
pub fn hausdorff_windowed(
    a: &SetUnion,
    b: &SetUnion,
    window_radius: f64,
) -> Result<f64, GeometryError> {
    if !(window_radius > 0.0) || !window_radius.is_finite() {
        return Err(GeometryError::InvalidWindow(window_radius));
    }
    let wa = clip_to_window(a, window_radius)?.ok_or(GeometryError::EmptyAfterWindow)?;
    let wb = clip_to_window(b, window_radius)?.ok_or(GeometryError::EmptyAfterWindow)?;
    hausdorff(&wa, &wb)
}

/// `sup_{x ∈ a ∩ W} d(x, d)` for the box `W = [-R, R]^d`; `d` is not clipped
/// and may be unbounded.
pub fn excess_windowed(a: &SetUnion, d: &SetUnion, window_radius: f64) -> Result<f64, GeometryError> {
    if !(window_radius > 0.0) || !window_radius.is_finite() {
        return Err(GeometryError::InvalidWindow(window_radius));
    }
    if a.dim() != d.dim() {
        return Err(GeometryError::DimensionMismatch(a.dim(), d.dim()));
    }
    let wa = clip_to_window(a, window_radius)?.ok_or(GeometryError::EmptyAfterWindow)?;
    if a.dim() == 1 && d.is_bounded() {
        return Ok(directed_1d(&intervals(&wa), &intervals(d)));
    }
    directed(wa.cells(), d.cells())
}

/// `a ∩ [-R, R]^d` as a bounded union, `None` when empty.
pub fn clip_to_window(a: &SetUnion, r: f64) -> Result<Option<SetUnion>, GeometryError> {
    let mut cells = Vec::new();
    for cell in a.cells() {
        if let Some(c) = clip_cell(cell, r)? {
            cells.push(c);
        }
    }
    if cells.is_empty() {
        Ok(None)
    } else {
        SetUnion::new(cells).map(Some)
    }
}

fn clip_cell(cell: &ConvexCell, r: f64) -> Result<Option<ConvexCell>, GeometryError> {
    let dim = cell.dim();
    if dim == 1 {
        let (lo, hi) = cell.interval_bounds();
        let (lo, hi) = (lo.max(-r), hi.min(r));
        return if lo > hi {
            Ok(None)
        } else {
            ConvexCell::interval(lo, hi).map(Some)
        };
    }
    if let Base::Ball { center, radius } = cell.base() {
        if !cell.is_bounded() {
            return Err(GeometryError::Unsupported("windowing a ball cell with a cone"));
        }
        let out = center.coords().iter().map(|c| (c.abs() - r).max(0.0)).map(|e| e * e).sum::<f64>();
        if out.sqrt() > *radius {
            return Ok(None);
        }
        if center.coords().iter().all(|c| c.abs() + radius <= r) {
            return Ok(Some(cell.clone()));
        }
        return Err(GeometryError::Unsupported("ball cell crossing the window boundary"));
    }
    let verts = cell.vertices().expect("polytope base");
    if dim == 3 {
        if let Some(p) = cell.as_point() {
            return Ok(p.coords().iter().all(|c| c.abs() <= r).then_some(cell.clone()));
        }
        return Err(GeometryError::Unsupported("windowing 3-d cells other than points"));
    }
    let body = match cell.cone().shape() {
        ConeShape::Trivial => verts.to_vec(),
        _ => truncated_polygon(verts, cell.cone(), std::f64::consts::SQRT_2 * r + 1.0),
    };
    let clipped = polygon::clip_to_box(&body, r);
    if clipped.is_empty() {
        Ok(None)
    } else {
        ConvexCell::polytope(&clipped).map(Some)
    }
}

/// `max_u |s(u, a) - s(u, b)|` over `n` spread unit directions.
///
/// Never exceeds the true distance; nondecreasing in `n` because the
/// direction sets are nested.
pub fn hausdorff_via_support(
    a: &ConvexCell,
    b: &ConvexCell,
    n_directions: usize,
) -> Result<f64, GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch(a.dim(), b.dim()));
    }
    if !a.is_bounded() || !b.is_bounded() {
        return Err(GeometryError::UnboundedOperand);
    }
    if n_directions == 0 {
        return Err(GeometryError::EmptyDirections);
    }
    Ok(spread_directions(a.dim(), n_directions)
        .iter()
        .map(|u| (a.support(u.vector()) - b.support(u.vector())).abs())
        .fold(0.0, f64::max))
}

fn intervals(u: &SetUnion) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = u.cells().iter().map(ConvexCell::interval_bounds).collect();
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (lo, hi) in iv {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn dist_1d(merged: &[(f64, f64)], x: f64) -> f64 {
    let k = merged.partition_point(|iv| iv.0 <= x);
    let mut best = f64::INFINITY;
    if k > 0 {
        best = best.min((x - merged[k - 1].1).max(0.0));
    }
    if k < merged.len() {
        best = best.min(merged[k].0 - x);
    }
    best
}

/// `sup_{x ∈ A} d(x, B)` for merged interval lists: the distance is piecewise
/// linear, so endpoints and gap midpoints suffice.
fn directed_1d(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut best = 0.0_f64;
    for &(lo, hi) in a {
        best = best.max(dist_1d(b, lo)).max(dist_1d(b, hi));
        let first = b.partition_point(|iv| iv.1 < lo);
        for w in b[first.saturating_sub(1)..].windows(2) {
            let mid = 0.5 * (w[0].1 + w[1].0);
            if mid > hi {
                break;
            }
            if mid >= lo {
                best = best.max(dist_1d(b, mid));
            }
        }
    }
    best
}

/// Signed distance from `p` to a bounded convex cell (negative inside).
fn signed_distance(cell: &ConvexCell, p: &Vector) -> Result<f64, GeometryError> {
    if !cell.is_bounded() {
        return Err(GeometryError::Unsupported("signed distance to an unbounded cell"));
    }
    match cell.base() {
        Base::Ball { center, radius } => Ok(p.dist(center) - radius),
        Base::Polytope(v) if v.len() == 1 => Ok(p.dist(&v[0])),
        Base::Polytope(v) => match cell.dim() {
            1 => {
                let (lo, hi) = cell.interval_bounds();
                Ok((lo - p.x()).max(p.x() - hi))
            }
            2 => Ok(polygon::signed_distance(v, p)),
            _ => Err(GeometryError::Unsupported("signed distance to a 3-d polytope")),
        },
    }
}

fn union_distance(b: &[ConvexCell], p: &Vector) -> Result<f64, GeometryError> {
    let mut best = f64::INFINITY;
    for c in b {
        best = best.min(c.distance_to(p)?);
    }
    Ok(best)
}

/// `sup_{x ∈ A} d(x, B)` for d ≥ 2.
fn directed(a: &[ConvexCell], b: &[ConvexCell]) -> Result<f64, GeometryError> {
    let scale = a
        .iter()
        .chain(b)
        .map(ConvexCell::base_norm)
        .fold(1.0, f64::max);
    let mut best = 0.0_f64;
    for cell in a {
        let value = match cell.base() {
            Base::Ball { center, radius } => {
                if b.len() != 1 {
                    return Err(GeometryError::Unsupported(
                        "ball cell measured against a multi-cell union",
                    ));
                }
                (radius + signed_distance(&b[0], center)?).max(0.0)
            }
            Base::Polytope(v) if v.len() == 1 || b.len() == 1 => {
                let mut m = 0.0_f64;
                for p in v {
                    m = m.max(union_distance(b, p)?);
                }
                m
            }
            Base::Polytope(v) => {
                if cell.dim() != 2 {
                    return Err(GeometryError::Unsupported(
                        "3-d polytope measured against a multi-cell union",
                    ));
                }
                branch_and_bound(v, b, best, 1e-10 * scale)?
            }
        };
        best = best.max(value);
    }
    Ok(best)
}

struct Piece {
    verts: Vec<Vector>,
    upper: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

/// Bounds of `sup_{x ∈ piece} d(x, B)`: the vertices give a lower bound and,
/// since each cell distance is convex, `min_j max_v d(v, C_j)` an upper one.
fn bounds(verts: &[Vector], b: &[ConvexCell]) -> Result<(f64, f64), GeometryError> {
    let mut per_vertex = vec![f64::INFINITY; verts.len()];
    let mut upper = f64::INFINITY;
    for c in b {
        let mut worst = 0.0_f64;
        for (k, v) in verts.iter().enumerate() {
            let d = c.distance_to(v)?;
            per_vertex[k] = per_vertex[k].min(d);
            worst = worst.max(d);
        }
        upper = upper.min(worst);
    }
    let lower = per_vertex.into_iter().fold(0.0, f64::max);
    Ok((lower, upper))
}

fn branch_and_bound(
    poly: &[Vector],
    b: &[ConvexCell],
    floor: f64,
    tol: f64,
) -> Result<f64, GeometryError> {
    let mut best = floor;
    let mut heap = BinaryHeap::new();
    let mut created = 0usize;
    let initial: Vec<Vec<Vector>> = if poly.len() == 2 {
        vec![poly.to_vec()]
    } else {
        (1..poly.len() - 1)
            .map(|i| vec![poly[0], poly[i], poly[i + 1]])
            .collect()
    };
    let mut push = |verts: Vec<Vector>,
                    heap: &mut BinaryHeap<Piece>,
                    best: &mut f64|
     -> Result<(), GeometryError> {
        created += 1;
        if created > PIECE_BUDGET {
            return Err(GeometryError::HausdorffBudgetExceeded);
        }
        let (lo, up) = bounds(&verts, b)?;
        *best = best.max(lo);
        if up > *best + tol {
            heap.push(Piece { verts, upper: up });
        }
        Ok(())
    };
    for verts in initial {
        push(verts, &mut heap, &mut best)?;
    }
    while let Some(piece) = heap.pop() {
        if piece.upper <= best + tol {
            break;
        }
        let v = &piece.verts;
        if v.len() == 2 {
            let m = (v[0] + v[1]) * 0.5;
            push(vec![v[0], m], &mut heap, &mut best)?;
            push(vec![m, v[1]], &mut heap, &mut best)?;
        } else {
            // Split the longest edge.
            let k = (0..3)
                .max_by(|&i, &j| {
                    v[i].dist(&v[(i + 1) % 3]).total_cmp(&v[j].dist(&v[(j + 1) % 3]))
                })
                .expect("three edges");
            let (p, q, r) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
            let m = (p + q) * 0.5;
            push(vec![p, m, r], &mut heap, &mut best)?;
            push(vec![m, q, r], &mut heap, &mut best)?;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> SetUnion {
        SetUnion::single(ConvexCell::interval(lo, hi).unwrap())
    }

    #[test]
    fn intervals_take_endpoint_gaps() {
        assert_eq!(hausdorff(&iv(0.0, 1.0), &iv(0.25, 1.5)).unwrap(), 0.5);
        assert_eq!(hausdorff(&iv(0.0, 1.0), &iv(0.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn gap_midpoint_in_one_dimension() {
        let pts = SetUnion::points(&[Vector::d1(0.0), Vector::d1(1.0)]).unwrap();
        assert_eq!(hausdorff(&iv(0.0, 1.0), &pts).unwrap(), 0.5);
    }

    #[test]
    fn balls() {
        let a = SetUnion::single(ConvexCell::ball(Vector::d2(0.0, 0.0), 1.0).unwrap());
        let b = SetUnion::single(ConvexCell::ball(Vector::d2(0.0, 0.0), 1.25).unwrap());
        assert!((hausdorff(&a, &b).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn segment_against_two_points() {
        let seg = SetUnion::single(
            ConvexCell::segment(Vector::d2(0.0, 0.0), Vector::d2(2.0, 0.0)).unwrap(),
        );
        let pts = SetUnion::points(&[Vector::d2(0.0, 0.0), Vector::d2(2.0, 0.0)]).unwrap();
        assert!((hausdorff(&seg, &pts).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn windowed_parallel_rays() {
        let eps = 0.125;
        let a = SetUnion::single(ConvexCell::ray(Vector::d2(1.0, 0.0)).unwrap());
        let b = a.translate(&Vector::d2(0.0, eps));
        assert_eq!(hausdorff_windowed(&a, &b, 10.0).unwrap(), eps);
        assert_eq!(hausdorff_windowed(&a, &a, 10.0).unwrap(), 0.0);
        assert!(matches!(hausdorff(&a, &b), Err(GeometryError::UnboundedOperand)));
    }

    #[test]
    fn window_errors() {
        let far = SetUnion::points(&[Vector::d2(20.0, 0.0)]).unwrap();
        let near = SetUnion::points(&[Vector::d2(0.0, 0.0)]).unwrap();
        assert_eq!(
            hausdorff_windowed(&far, &near, 5.0),
            Err(GeometryError::EmptyAfterWindow)
        );
        assert!(matches!(
            hausdorff_windowed(&near, &near, 0.0),
            Err(GeometryError::InvalidWindow(_))
        ));
    }

    #[test]
    fn support_estimate_of_translation() {
        let a = ConvexCell::segment(Vector::d2(0.0, 0.0), Vector::d2(1.0, 0.0)).unwrap();
        let b = a.translated(&Vector::d2(0.3, 0.0));
        let h = hausdorff_via_support(&a, &b, 64).unwrap();
        assert!((h - 0.3).abs() < 1e-12);
    }
}
