use std::cmp::Ordering;

use super::cone::{Cone, ConeShape};
use super::hull::extreme_points;
use super::{polygon, GeometryError, Vector, EPS};

/// Bounded part of a cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Base {
    /// Extreme points; counter-clockwise in the plane.
    Polytope(Vec<Vector>),
    Ball { center: Vector, radius: f64 },
}

/// A closed convex set `base ⊕ cone`.
///
/// Cells are canonical on construction: polytope vertices are the extreme
/// points of the cell itself (vertices swallowed by the cone are removed in
/// d ≤ 2), one-dimensional balls become intervals and zero-radius balls
/// become points.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCell {
    base: Base,
    cone: Cone,
}

impl ConvexCell {
    pub fn point(v: Vector) -> ConvexCell {
        ConvexCell {
            base: Base::Polytope(vec![v]),
            cone: Cone::trivial(v.dim()),
        }
    }

    pub fn polytope(vertices: &[Vector]) -> Result<ConvexCell, GeometryError> {
        let dim = vertices.first().ok_or(GeometryError::EmptyPolytope)?.dim();
        ConvexCell::new(Base::Polytope(vertices.to_vec()), Cone::trivial(dim))
    }

    /// The interval `[lo, hi]` of the real line.
    pub fn interval(lo: f64, hi: f64) -> Result<ConvexCell, GeometryError> {
        if lo > hi {
            return Err(GeometryError::EmptyPolytope);
        }
        ConvexCell::polytope(&[Vector::new(&[lo])?, Vector::new(&[hi])?])
    }

    pub fn segment(a: Vector, b: Vector) -> Result<ConvexCell, GeometryError> {
        ConvexCell::polytope(&[a, b])
    }

    pub fn ball(center: Vector, radius: f64) -> Result<ConvexCell, GeometryError> {
        ConvexCell::new(Base::Ball { center, radius }, Cone::trivial(center.dim()))
    }

    /// The closed ray `{t d : t >= 0}` from the origin.
    pub fn ray(direction: Vector) -> Result<ConvexCell, GeometryError> {
        let cone = Cone::ray(direction)?;
        if cone.is_trivial() {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(ConvexCell::from_cone(cone))
    }

    /// The cone itself as a cell (apex at the origin).
    pub fn from_cone(cone: Cone) -> ConvexCell {
        let origin = Vector::zero(cone.dim());
        ConvexCell::new(Base::Polytope(vec![origin]), cone).expect("a cone is a valid cell")
    }

    pub fn new(base: Base, cone: Cone) -> Result<ConvexCell, GeometryError> {
        let dim = cone.dim();
        match &base {
            Base::Polytope(vs) => {
                if vs.is_empty() {
                    return Err(GeometryError::EmptyPolytope);
                }
                if let Some(v) = vs.iter().find(|v| v.dim() != dim) {
                    return Err(GeometryError::DimensionMismatch(dim, v.dim()));
                }
            }
            Base::Ball { center, radius } => {
                if center.dim() != dim {
                    return Err(GeometryError::DimensionMismatch(dim, center.dim()));
                }
                if !radius.is_finite() || *radius < 0.0 {
                    return Err(GeometryError::NegativeRadius(*radius));
                }
            }
        }
        Ok(canonicalize(base, cone))
    }

    pub fn with_cone(&self, cone: Cone) -> Result<ConvexCell, GeometryError> {
        ConvexCell::new(self.base.clone(), cone)
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn vertices(&self) -> Option<&[Vector]> {
        match &self.base {
            Base::Polytope(v) => Some(v),
            Base::Ball { .. } => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.cone.is_trivial()
    }

    pub fn as_point(&self) -> Option<Vector> {
        match &self.base {
            Base::Polytope(v) if v.len() == 1 && self.cone.is_trivial() => Some(v[0]),
            _ => None,
        }
    }

    /// Largest norm over the base.
    pub fn base_norm(&self) -> f64 {
        match &self.base {
            Base::Polytope(v) => v.iter().map(Vector::norm).fold(0.0, f64::max),
            Base::Ball { center, radius } => center.norm() + radius,
        }
    }

    /// `s(x*, C) = sup_{c ∈ C} <x*, c>`, `+∞` when some cone generator has
    /// positive pairing with `x*`.
    pub fn support(&self, x: &Vector) -> f64 {
        if self.cone.is_full() && x.norm() > 0.0 {
            return f64::INFINITY;
        }
        if self.cone.generators().iter().any(|g| g.dot(x) > EPS) {
            return f64::INFINITY;
        }
        match &self.base {
            Base::Polytope(vs) => vs.iter().map(|v| v.dot(x)).fold(f64::NEG_INFINITY, f64::max),
            Base::Ball { center, radius } => center.dot(x) + radius * x.norm(),
        }
    }

    /// Euclidean distance from `p` to the cell.
    ///
    /// Supported for every cell in d ≤ 2; in d = 3 for points, bounded balls
    /// and cells whose cone is a single ray over a point.
    pub fn distance_to(&self, p: &Vector) -> Result<f64, GeometryError> {
        if p.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch(self.dim(), p.dim()));
        }
        if let Base::Ball { center, radius } = &self.base {
            return Ok((self.cone.distance_to(&(*p - *center))? - radius).max(0.0));
        }
        let verts = self.vertices().expect("polytope base");
        match self.dim() {
            1 => {
                let (lo, hi) = self.interval_bounds();
                Ok((lo - p.x()).max(p.x() - hi).max(0.0))
            }
            2 => Ok(self.planar_distance(verts, p)),
            _ => {
                if verts.len() == 1 {
                    self.cone.distance_to(&(*p - verts[0]))
                } else {
                    Err(GeometryError::Unsupported("distance to a 3-d polytope"))
                }
            }
        }
    }

    fn planar_distance(&self, verts: &[Vector], p: &Vector) -> f64 {
        match self.cone.shape() {
            ConeShape::Trivial => polygon::distance(verts, p),
            ConeShape::Full => 0.0,
            ConeShape::Line(u) => {
                let n = Vector::d2(-u.y(), u.x());
                let (lo, hi) = min_max(verts.iter().map(|v| v.dot(&n)));
                let t = p.dot(&n);
                (lo - t).max(t - hi).max(0.0)
            }
            ConeShape::HalfPlane(n) => {
                let lo = verts.iter().map(|v| v.dot(&n)).fold(f64::INFINITY, f64::min);
                (lo - p.dot(&n)).max(0.0)
            }
            _ => {
                let reach = 2.0 * p.norm() + self.base_norm();
                polygon::distance(&truncated_polygon(verts, &self.cone, reach), p)
            }
        }
    }

    /// Endpoints of a 1-d cell, infinite on cone sides.
    pub fn interval_bounds(&self) -> (f64, f64) {
        debug_assert_eq!(self.dim(), 1);
        let (mut lo, mut hi) = match &self.base {
            Base::Polytope(v) => min_max(v.iter().map(|x| x.x())),
            Base::Ball { center, radius } => (center.x() - radius, center.x() + radius),
        };
        if self.cone.is_full() {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        for g in self.cone.generators() {
            if g.x() > 0.0 {
                hi = f64::INFINITY;
            } else {
                lo = f64::NEG_INFINITY;
            }
        }
        (lo, hi)
    }

    /// Minkowski sum of two cells.
    pub fn minkowski(&self, other: &ConvexCell) -> Result<ConvexCell, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch(self.dim(), other.dim()));
        }
        let cone = self.cone.merge(&other.cone);
        let base = match (&self.base, &other.base) {
            (Base::Polytope(a), Base::Polytope(b)) => {
                let mut sums = Vec::with_capacity(a.len() * b.len());
                for u in a {
                    for v in b {
                        sums.push(*u + *v);
                    }
                }
                Base::Polytope(sums)
            }
            (
                Base::Ball { center: c1, radius: r1 },
                Base::Ball { center: c2, radius: r2 },
            ) => Base::Ball {
                center: *c1 + *c2,
                radius: r1 + r2,
            },
            (Base::Polytope(p), Base::Ball { center, radius })
            | (Base::Ball { center, radius }, Base::Polytope(p))
                if p.len() == 1 =>
            {
                Base::Ball {
                    center: *center + p[0],
                    radius: *radius,
                }
            }
            _ => {
                return Err(GeometryError::UnsupportedCellCombination(
                    "polytope base with two or more vertices plus a ball base",
                ))
            }
        };
        Ok(canonicalize(base, cone))
    }

    /// `λ C` for `λ >= 0`; `0 C = {0}`.
    pub fn scaled(&self, lambda: f64) -> ConvexCell {
        debug_assert!(lambda >= 0.0);
        if lambda == 0.0 {
            return ConvexCell::point(Vector::zero(self.dim()));
        }
        let base = match &self.base {
            Base::Polytope(v) => Base::Polytope(v.iter().map(|x| *x * lambda).collect()),
            Base::Ball { center, radius } => Base::Ball {
                center: *center * lambda,
                radius: radius * lambda,
            },
        };
        ConvexCell {
            base,
            cone: self.cone.clone(),
        }
    }

    pub fn translated(&self, t: &Vector) -> ConvexCell {
        let base = match &self.base {
            Base::Polytope(v) => Base::Polytope(v.iter().map(|x| *x + *t).collect()),
            Base::Ball { center, radius } => Base::Ball {
                center: *center + *t,
                radius: *radius,
            },
        };
        ConvexCell {
            base,
            cone: self.cone.clone(),
        }
    }

    pub fn approx_eq(&self, other: &ConvexCell, tol: f64) -> bool {
        let bases = match (&self.base, &other.base) {
            (Base::Polytope(a), Base::Polytope(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(u, v)| u.approx_eq(v, tol))
            }
            (
                Base::Ball { center: c1, radius: r1 },
                Base::Ball { center: c2, radius: r2 },
            ) => c1.approx_eq(c2, tol) && (r1 - r2).abs() <= tol,
            _ => false,
        };
        bases && self.cone.approx_eq(&other.cone, tol)
    }

    pub(crate) fn cmp_key(&self) -> Vec<f64> {
        let mut key = Vec::with_capacity(8);
        match &self.base {
            Base::Polytope(v) => {
                key.push(0.0);
                key.push(v.len() as f64);
                for x in v {
                    key.extend_from_slice(x.coords());
                }
            }
            Base::Ball { center, radius } => {
                key.push(1.0);
                key.extend_from_slice(center.coords());
                key.push(*radius);
            }
        }
        self.cone.cmp_key(&mut key);
        key
    }
}

pub(crate) fn cmp_keys(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

fn min_max(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    })
}

/// Convex polygon `T` with `T ⊆ conv(verts) ⊕ K` and
/// `T ⊇ (conv(verts) ⊕ K) ∩ B(0, reach)` (planar cells only).
pub(crate) fn truncated_polygon(verts: &[Vector], cone: &Cone, reach: f64) -> Vec<Vector> {
    let wnorm = verts.iter().map(Vector::norm).fold(0.0, f64::max);
    let span = reach + wnorm + 1.0;
    let mut pts: Vec<Vector> = verts.to_vec();
    match cone.shape() {
        ConeShape::Trivial => {}
        ConeShape::Ray(g) => pts.extend(verts.iter().map(|v| *v + g * span)),
        ConeShape::Sector(a, b) => {
            let w = (a + b).normalized().expect("pointed sector");
            let len = span / w.dot(&a) + 1.0;
            for v in verts {
                pts.push(*v + a * len);
                pts.push(*v + b * len);
            }
        }
        ConeShape::Line(u) => {
            for v in verts {
                pts.push(*v + u * span);
                pts.push(*v - u * span);
            }
        }
        ConeShape::HalfPlane(n) => {
            let b = Vector::d2(n.y(), -n.x());
            for v in verts {
                for s in [-1.0, 1.0] {
                    pts.push(*v + b * (s * span));
                    pts.push(*v + b * (s * span) + n * span);
                }
            }
        }
        ConeShape::Full => {
            let l = reach + 1.0;
            pts = vec![
                Vector::d2(-l, -l),
                Vector::d2(l, -l),
                Vector::d2(l, l),
                Vector::d2(-l, l),
            ];
        }
        ConeShape::Spatial => unreachable!("planar cells only"),
    }
    extreme_points(&pts)
}

fn canonicalize(base: Base, cone: Cone) -> ConvexCell {
    let dim = cone.dim();
    if cone.is_full() {
        return ConvexCell {
            base: Base::Polytope(vec![Vector::zero(dim)]),
            cone,
        };
    }
    let base = match base {
        Base::Ball { center, radius } if radius == 0.0 => Base::Polytope(vec![center]),
        Base::Ball { center, radius } if dim == 1 => Base::Polytope(vec![
            Vector::d1(center.x() - radius),
            Vector::d1(center.x() + radius),
        ]),
        Base::Ball { center, radius } if dim == 2 => match cone.shape() {
            ConeShape::Line(u) => {
                let n = Vector::d2(-u.y(), u.x());
                Base::Ball {
                    center: n * center.dot(&n),
                    radius,
                }
            }
            ConeShape::HalfPlane(n) => Base::Polytope(vec![n * (center.dot(&n) - radius)]),
            _ => Base::Ball { center, radius },
        },
        other => other,
    };
    let base = match base {
        Base::Polytope(vs) => Base::Polytope(reduce_vertices(&vs, &cone)),
        ball => ball,
    };
    ConvexCell { base, cone }
}

fn reduce_vertices(vs: &[Vector], cone: &Cone) -> Vec<Vector> {
    let ext = extreme_points(vs);
    if cone.is_trivial() || ext.len() == 1 {
        return ext;
    }
    match (cone.dim(), cone.shape()) {
        (1, ConeShape::Ray(g)) => {
            if g.x() > 0.0 {
                vec![ext[0]]
            } else {
                vec![ext[ext.len() - 1]]
            }
        }
        (2, ConeShape::Line(u)) => {
            let n = Vector::d2(-u.y(), u.x());
            let proj: Vec<Vector> = ext.iter().map(|v| n * v.dot(&n)).collect();
            extreme_points(&proj)
        }
        (2, ConeShape::HalfPlane(n)) => {
            let lo = ext.iter().map(|v| v.dot(&n)).fold(f64::INFINITY, f64::min);
            vec![n * lo]
        }
        (2, _) => {
            let mut keep = ext;
            let mut i = 0;
            while keep.len() > 1 && i < keep.len() {
                let v = keep[i];
                let others: Vec<Vector> = keep
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, w)| *w)
                    .collect();
                let reach = 2.0 * v.norm() + others.iter().map(Vector::norm).fold(0.0, f64::max);
                let t = truncated_polygon(&others, cone, reach);
                if polygon::distance(&t, &v) <= EPS * v.norm().max(1.0) {
                    keep.remove(i);
                } else {
                    i += 1;
                }
            }
            keep
        }
        _ => ext,
    }
}
