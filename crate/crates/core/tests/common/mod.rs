//! Independent oracles and random instance builders shared by the test targets.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use randset::convex_sets::{ConvexCell, SetUnion, Vector};

pub fn rng(seed: u64) -> StdRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random points in the unit square, at least `k` of them.
pub fn random_points(r: &mut StdRng, k: usize) -> Vec<Vector> {
    (0..k).map(|_| Vector::d2(r.random::<f64>(), r.random::<f64>())).collect()
}

/// Random convex polygon from 3–6 random points (hull taken by the library,
/// the oracle only reads the vertices back).
pub fn random_polygon(r: &mut StdRng) -> ConvexCell {
    let k = r.random_range(3..=6);
    ConvexCell::polytope(&random_points(r, k)).unwrap()
}

pub fn random_interval(r: &mut StdRng) -> ConvexCell {
    let a: f64 = r.random_range(-1.0..1.0);
    let b: f64 = r.random_range(-1.0..1.0);
    ConvexCell::interval(a.min(b), a.max(b)).unwrap()
}

/// Random bounded union in dimension 1 or 2: intervals, polygons, points, or
/// balls (ball-only unions, since ball ⊕ polytope is not supported).
pub fn random_union(r: &mut StdRng, dim: usize, balls: bool) -> SetUnion {
    let k = r.random_range(1..=3);
    let cells: Vec<ConvexCell> = (0..k)
        .map(|_| match (dim, balls) {
            (1, _) => random_interval(r),
            (_, true) => ConvexCell::ball(
                Vector::d2(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
                r.random_range(0.0..0.5),
            )
            .unwrap(),
            _ => {
                if r.random_bool(0.3) {
                    ConvexCell::point(random_points(r, 1)[0])
                } else {
                    random_polygon(r)
                }
            }
        })
        .collect();
    SetUnion::new(cells).unwrap()
}

/// Distance from `p` to segment `[a, b]`, written out by hand.
pub fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

/// Distance from `p` to the convex polygon with counter-clockwise vertices `v`.
pub fn poly_dist(p: (f64, f64), v: &[(f64, f64)]) -> f64 {
    if v.len() == 1 {
        return ((p.0 - v[0].0).powi(2) + (p.1 - v[0].1).powi(2)).sqrt();
    }
    let inside = v.len() >= 3
        && (0..v.len()).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0
        });
    if inside {
        return 0.0;
    }
    (0..v.len())
        .map(|i| seg_dist(p, v[i], v[(i + 1) % v.len()]))
        .fold(f64::INFINITY, f64::min)
}

pub fn verts(c: &ConvexCell) -> Vec<(f64, f64)> {
    c.vertices().unwrap().iter().map(|v| (v.x(), v.y())).collect()
}

fn in_poly(p: (f64, f64), v: &[(f64, f64)]) -> bool {
    poly_dist(p, v) == 0.0
}

/// Sup over `a` of the distance to `b`, for unions of convex polygons/points:
/// a coarse grid over each cell, then three rounds of local refinement around
/// the best candidates.
pub fn dense_directed(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>]) -> f64 {
    let dist = |p: (f64, f64)| b.iter().map(|c| poly_dist(p, c)).fold(f64::INFINITY, f64::min);
    let mut best = 0.0_f64;
    for cell in a {
        let mut cands: Vec<(f64, (f64, f64))> = Vec::new();
        let push = |p: (f64, f64), cands: &mut Vec<(f64, (f64, f64))>| cands.push((dist(p), p));
        for &p in cell {
            push(p, &mut cands);
        }
        let per_edge = if cell.len() == 2 { 40_000 } else { 200 };
        for i in 0..cell.len() {
            let (s, t) = (cell[i], cell[(i + 1) % cell.len()]);
            for k in 0..=per_edge {
                let u = k as f64 / per_edge as f64;
                push((s.0 + u * (t.0 - s.0), s.1 + u * (t.1 - s.1)), &mut cands);
            }
        }
        if cell.len() >= 3 {
            let (x0, x1) = cell.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |m, p| (m.0.min(p.0), m.1.max(p.0)));
            let (y0, y1) = cell.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |m, p| (m.0.min(p.1), m.1.max(p.1)));
            for i in 0..=60 {
                for j in 0..=60 {
                    let p = (x0 + (x1 - x0) * i as f64 / 60.0, y0 + (y1 - y0) * j as f64 / 60.0);
                    if in_poly(p, cell) {
                        push(p, &mut cands);
                    }
                }
            }
        }
        cands.sort_by(|x, y| y.0.total_cmp(&x.0));
        cands.truncate(12);
        for (mut d, mut p) in cands {
            let mut h = 0.02;
            for _ in 0..4 {
                let center = p;
                for i in -10..=10 {
                    for j in -10..=10 {
                        let q = (center.0 + i as f64 * h / 10.0, center.1 + j as f64 * h / 10.0);
                        if cell.len() >= 3 && in_poly(q, cell) {
                            let dq = dist(q);
                            if dq > d {
                                d = dq;
                                p = q;
                            }
                        }
                    }
                }
                h /= 10.0;
            }
            best = best.max(d);
        }
    }
    best
}

pub fn dense_hausdorff(a: &SetUnion, b: &SetUnion) -> f64 {
    let a: Vec<_> = a.cells().iter().map(verts).collect();
    let b: Vec<_> = b.cells().iter().map(verts).collect();
    dense_directed(&a, &b).max(dense_directed(&b, &a))
}

/// Hausdorff distance between unions of intervals by sampling at `step`.
pub fn dense_hausdorff_1d(a: &[(f64, f64)], b: &[(f64, f64)], step: f64) -> f64 {
    let dist = |x: f64, s: &[(f64, f64)]| s.iter().map(|(l, h)| (l - x).max(x - h).max(0.0)).fold(f64::INFINITY, f64::min);
    let directed = |a: &[(f64, f64)], b: &[(f64, f64)]| {
        let mut best = 0.0_f64;
        for &(l, h) in a {
            let k = ((h - l) / step).ceil() as usize;
            for i in 0..=k {
                best = best.max(dist((l + i as f64 * step).min(h), b));
            }
        }
        best
    };
    directed(a, b).max(directed(b, a))
}

/// Stationary law of a row-stochastic matrix by repeated squaring.
pub fn stationary(p: &[Vec<f64>]) -> Vec<f64> {
    let s = p.len();
    let mut m = p.to_vec();
    for _ in 0..60 {
        let mut next = vec![vec![0.0; s]; s];
        for i in 0..s {
            for j in 0..s {
                next[i][j] = (0..s).map(|k| m[i][k] * m[k][j]).sum();
            }
        }
        m = next;
    }
    let pi: Vec<f64> = (0..s).map(|j| (0..s).map(|i| m[i][j]).sum::<f64>() / s as f64).collect();
    let total: f64 = pi.iter().sum();
    pi.iter().map(|x| x / total).collect()
}

/// Random reversible chain with `s` states: `P_ij ∝ W_ij` for symmetric `W`.
pub fn random_chain(r: &mut StdRng, s: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut w = vec![vec![0.0; s]; s];
    for i in 0..s {
        for j in i..s {
            let x = r.random_range(0.05..1.0);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    let rows: Vec<f64> = w.iter().map(|row| row.iter().sum()).collect();
    let total: f64 = rows.iter().sum();
    let p = (0..s).map(|i| (0..s).map(|j| w[i][j] / rows[i]).collect()).collect();
    let pi = rows.iter().map(|x| x / total).collect();
    (p, pi)
}

/// Textbook total-variation φ for a chain: `max_i ½ Σ_j |Pⁿ(i,j) − π_j|`.
pub fn tv_phi(p: &[Vec<f64>], pi: &[f64], n: usize) -> f64 {
    let s = p.len();
    let mut m: Vec<Vec<f64>> = (0..s).map(|i| (0..s).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..n {
        m = (0..s)
            .map(|i| (0..s).map(|j| (0..s).map(|k| m[i][k] * p[k][j]).sum()).collect())
            .collect();
    }
    (0..s)
        .map(|i| 0.5 * (0..s).map(|j| (m[i][j] - pi[j]).abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
