//! Planar convex-polygon primitives. Polygons are counter-clockwise vertex
//! lists as produced by [`extreme_points`](super::hull::extreme_points); one
//! vertex is a point and two vertices a segment.

use super::{Vector, EPS};

pub fn segment_distance(p: &Vector, a: &Vector, b: &Vector) -> f64 {
    let ab = *b - *a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((*p - *a).dot(&ab) / len2).clamp(0.0, 1.0);
    p.dist(&(*a + ab * t))
}

fn edges(poly: &[Vector]) -> impl Iterator<Item = (&Vector, &Vector)> {
    poly.iter().zip(poly.iter().cycle().skip(1)).take(poly.len())
}

fn contains(poly: &[Vector], p: &Vector) -> bool {
    edges(poly).all(|(a, b)| {
        let e = *b - *a;
        e.cross2(&(*p - *a)) >= -EPS * e.norm().max(1.0)
    })
}

fn boundary_distance(poly: &[Vector], p: &Vector) -> f64 {
    match poly.len() {
        1 => p.dist(&poly[0]),
        2 => segment_distance(p, &poly[0], &poly[1]),
        _ => edges(poly)
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Euclidean distance from `p` to the filled polygon.
pub fn distance(poly: &[Vector], p: &Vector) -> f64 {
    if poly.len() >= 3 && contains(poly, p) {
        0.0
    } else {
        boundary_distance(poly, p)
    }
}

/// Distance outside the polygon, minus the depth inside it.
pub fn signed_distance(poly: &[Vector], p: &Vector) -> f64 {
    if poly.len() >= 3 && contains(poly, p) {
        -boundary_distance(poly, p)
    } else {
        boundary_distance(poly, p)
    }
}

/// Intersection of a convex polygon (or segment, or point) with the box
/// `[-r, r]^2`. Returns the vertices of the clipped piece, empty if disjoint.
pub fn clip_to_box(poly: &[Vector], r: f64) -> Vec<Vector> {
    let tol = EPS * r.max(1.0);
    let inside = |p: &Vector| p.x().abs() <= r + tol && p.y().abs() <= r + tol;
    match poly.len() {
        0 => Vec::new(),
        1 => {
            if inside(&poly[0]) {
                poly.to_vec()
            } else {
                Vec::new()
            }
        }
        2 => clip_segment(&poly[0], &poly[1], r, tol),
        _ => {
            // Sutherland-Hodgman against the four box half-planes.
            let planes = [
                (Vector::d2(1.0, 0.0), r),
                (Vector::d2(-1.0, 0.0), r),
                (Vector::d2(0.0, 1.0), r),
                (Vector::d2(0.0, -1.0), r),
            ];
            let mut out = poly.to_vec();
            for (n, c) in planes {
                if out.is_empty() {
                    break;
                }
                let input = std::mem::take(&mut out);
                for i in 0..input.len() {
                    let cur = input[i];
                    let prev = input[(i + input.len() - 1) % input.len()];
                    let (sc, sp) = (n.dot(&cur) - c, n.dot(&prev) - c);
                    if sc <= tol {
                        if sp > tol {
                            out.push(prev + (cur - prev) * (sp / (sp - sc)));
                        }
                        out.push(cur);
                    } else if sp <= tol {
                        out.push(prev + (cur - prev) * (sp / (sp - sc)));
                    }
                }
            }
            out
        }
    }
}

/// Liang-Barsky clipping of segment `ab` to `[-r, r]^2`.
fn clip_segment(a: &Vector, b: &Vector, r: f64, tol: f64) -> Vec<Vector> {
    let d = *b - *a;
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    for (p, q) in [
        (-d.x(), a.x() + r + tol),
        (d.x(), r + tol - a.x()),
        (-d.y(), a.y() + r + tol),
        (d.y(), r + tol - a.y()),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return Vec::new();
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 > t1 {
        return Vec::new();
    }
    let clamp = |v: Vector| Vector::d2(v.x().clamp(-r, r), v.y().clamp(-r, r));
    vec![clamp(*a + d * t0), clamp(*a + d * t1)]
}
