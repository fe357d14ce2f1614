//! Extreme points of finite point sets.

use super::{Vector, EPS};

/// Extreme points of the convex hull of `points`.
///
/// Output order: d = 1 ascending; d = 2 counter-clockwise starting at the
/// lexicographically smallest vertex (two endpoints in lexicographic order
/// for collinear input); d = 3 lexicographic. Points closer than `1e-12` are
/// merged.
///
/// The 3-d path enumerates supporting planes through point triples, so it is
/// `O(n^4)`; it is meant for the small vertex sets that appear in cell sums.
pub fn extreme_points(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup_by(|a, b| a.approx_eq(b, EPS));
    if pts.len() <= 1 {
        return pts;
    }
    match pts[0].dim() {
        1 => vec![pts[0], pts[pts.len() - 1]],
        2 => planar_hull(&pts),
        _ => spatial_extremes(&pts),
    }
}

fn scale_of(pts: &[Vector]) -> f64 {
    pts.iter().map(Vector::norm).fold(1.0, f64::max)
}

/// Andrew's monotone chain on lexicographically sorted, deduplicated input.
/// Collinear boundary points are dropped.
fn planar_hull(pts: &[Vector]) -> Vec<Vector> {
    let tol = EPS * scale_of(pts);
    let turn = |o: &Vector, a: &Vector, b: &Vector| (*a - *o).cross2(&(*b - *o));
    let mut lower: Vec<Vector> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0].approx_eq(&lower[1], EPS) {
        lower.truncate(1);
    }
    lower
}

fn spatial_extremes(pts: &[Vector]) -> Vec<Vector> {
    let tol = EPS * scale_of(pts) * 10.0;
    let p0 = pts[0];
    let far = *pts
        .iter()
        .max_by(|a, b| a.dist(&p0).total_cmp(&b.dist(&p0)))
        .expect("nonempty");
    let axis = (far - p0).normalized().expect("distinct points");
    let off_line = pts
        .iter()
        .map(|p| ((*p - p0).cross3(&axis).norm(), *p))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty");
    if off_line.0 <= tol {
        let mut ends = vec![p0, far];
        ends.sort_by(|a, b| a.lex_cmp(b));
        return ends;
    }
    let normal = axis.cross3(&(off_line.1 - p0)).normalized().expect("non-collinear");
    if pts.iter().all(|p| normal.dot(&(*p - p0)).abs() <= tol) {
        let mut out = hull_in_plane(pts, &p0, &normal);
        out.sort_by(|a, b| a.lex_cmp(b));
        return out;
    }
    let n = pts.len();
    let mut extreme = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(nrm) = (pts[j] - pts[i]).cross3(&(pts[k] - pts[i])).normalized() else {
                    continue;
                };
                let mut above = false;
                let mut below = false;
                for p in pts {
                    let s = nrm.dot(&(*p - pts[i]));
                    above |= s > tol;
                    below |= s < -tol;
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                let face: Vec<usize> = (0..n)
                    .filter(|&q| nrm.dot(&(pts[q] - pts[i])).abs() <= tol)
                    .collect();
                let face_pts: Vec<Vector> = face.iter().map(|&q| pts[q]).collect();
                for v in hull_in_plane(&face_pts, &pts[i], &nrm) {
                    for &q in &face {
                        if pts[q].approx_eq(&v, 0.0) {
                            extreme[q] = true;
                        }
                    }
                }
            }
        }
    }
    pts.iter()
        .zip(extreme)
        .filter_map(|(p, e)| e.then_some(*p))
        .collect()
}

/// Planar hull of points lying on the plane through `origin` with unit `normal`,
/// returned as the original 3-d points.
fn hull_in_plane(pts: &[Vector], origin: &Vector, normal: &Vector) -> Vec<Vector> {
    let helper = if normal.x().abs() < 0.9 {
        Vector::d3(1.0, 0.0, 0.0)
    } else {
        Vector::d3(0.0, 1.0, 0.0)
    };
    let e1 = normal.cross3(&helper).normalized().expect("independent");
    let e2 = normal.cross3(&e1);
    let mut flat: Vec<(Vector, Vector)> = pts
        .iter()
        .map(|p| {
            let d = *p - *origin;
            (Vector::d2(d.dot(&e1), d.dot(&e2)), *p)
        })
        .collect();
    flat.sort_by(|a, b| a.0.lex_cmp(&b.0));
    flat.dedup_by(|a, b| a.0.approx_eq(&b.0, EPS));
    let projected: Vec<Vector> = flat.iter().map(|f| f.0).collect();
    let hull = if projected.len() <= 1 {
        projected.clone()
    } else {
        planar_hull(&projected)
    };
    hull.iter()
        .filter_map(|h| flat.iter().find(|f| f.0.approx_eq(h, 0.0)).map(|f| f.1))
        .collect()
}
