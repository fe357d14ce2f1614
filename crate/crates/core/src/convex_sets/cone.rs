use std::cmp::Ordering;
use std::f64::consts::PI;

use super::{GeometryError, Vector, EPS};

/// Geometric shape of a canonical cone. Planar shapes list their rays in
/// counter-clockwise order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConeShape {
    Trivial,
    Ray(Vector),
    /// Pointed sector from `first` counter-clockwise to `second`, opening `< π`.
    Sector(Vector, Vector),
    /// Full line through the origin, stored by its lexicographically larger direction.
    Line(Vector),
    /// `{x : <x, inward> >= 0}`.
    HalfPlane(Vector),
    Full,
    /// Three-dimensional cone given by its (reduced) generator list.
    Spatial,
}

/// Finitely generated convex cone, stored in canonical form.
///
/// Generators are unit vectors, deduplicated at tolerance `1e-12` and sorted
/// lexicographically. In the plane the list is reduced to the extreme rays of
/// a pointed cone, the pair `±u` of a line, `{±b, n}` for a half-plane, and is
/// empty for the full space (which is flagged instead).
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    dim: usize,
    generators: Vec<Vector>,
    full: bool,
    shape: ConeShape,
}

fn perp(v: &Vector) -> Vector {
    Vector::d2(-v.y(), v.x())
}

impl Cone {
    pub fn trivial(dim: usize) -> Cone {
        Cone {
            dim,
            generators: Vec::new(),
            full: false,
            shape: ConeShape::Trivial,
        }
    }

    pub fn full(dim: usize) -> Cone {
        Cone {
            dim,
            generators: Vec::new(),
            full: true,
            shape: ConeShape::Full,
        }
    }

    pub fn ray(direction: Vector) -> Result<Cone, GeometryError> {
        Cone::generated_by(direction.dim(), &[direction])
    }

    /// Canonical cone generated by `gens`. Zero generators are ignored.
    pub fn generated_by(dim: usize, gens: &[Vector]) -> Result<Cone, GeometryError> {
        if !(1..=3).contains(&dim) {
            return Err(GeometryError::BadDimension(dim));
        }
        let mut units = Vec::with_capacity(gens.len());
        for g in gens {
            if g.dim() != dim {
                return Err(GeometryError::DimensionMismatch(dim, g.dim()));
            }
            if let Some(u) = g.normalized() {
                units.push(u);
            }
        }
        Ok(Self::canonical(dim, units))
    }

    fn canonical(dim: usize, mut units: Vec<Vector>) -> Cone {
        units.sort_by(|a, b| a.lex_cmp(b));
        units.dedup_by(|a, b| a.approx_eq(b, EPS));
        if units.is_empty() {
            return Cone::trivial(dim);
        }
        match dim {
            1 => {
                let pos = units.iter().any(|u| u.x() > 0.0);
                let neg = units.iter().any(|u| u.x() < 0.0);
                match (pos, neg) {
                    (true, true) => Cone::full(1),
                    (true, false) => Self::with_shape(1, vec![Vector::d1(1.0)], ConeShape::Ray(Vector::d1(1.0))),
                    _ => Self::with_shape(1, vec![Vector::d1(-1.0)], ConeShape::Ray(Vector::d1(-1.0))),
                }
            }
            2 => Self::canonical_planar(units),
            _ => Self::canonical_spatial(units),
        }
    }

    fn with_shape(dim: usize, mut generators: Vec<Vector>, shape: ConeShape) -> Cone {
        generators.sort_by(|a, b| a.lex_cmp(b));
        Cone {
            dim,
            generators,
            full: false,
            shape,
        }
    }

    fn canonical_planar(units: Vec<Vector>) -> Cone {
        if units.len() == 1 {
            return Self::with_shape(2, units.clone(), ConeShape::Ray(units[0]));
        }
        let mut angled: Vec<(f64, Vector)> = units
            .into_iter()
            .map(|u| (u.angle().rem_euclid(2.0 * PI), u))
            .collect();
        angled.sort_by(|a, b| a.0.total_cmp(&b.0));
        let m = angled.len();
        let (mut gap, mut at) = (f64::NEG_INFINITY, 0);
        for k in 0..m {
            let next = if k + 1 < m {
                angled[k + 1].0
            } else {
                angled[0].0 + 2.0 * PI
            };
            if next - angled[k].0 > gap {
                gap = next - angled[k].0;
                at = k;
            }
        }
        let first = angled[(at + 1) % m].1;
        let last = angled[at].1;
        if gap > PI + EPS {
            if 2.0 * PI - gap <= EPS {
                return Self::with_shape(2, vec![first], ConeShape::Ray(first));
            }
            Self::with_shape(2, vec![first, last], ConeShape::Sector(first, last))
        } else if gap >= PI - EPS {
            // Two opposite boundary rays; anything else lies on one side.
            if m > 2 {
                let inward = perp(&first);
                let b = Vector::d2(inward.y(), -inward.x());
                Self::with_shape(2, vec![b, -b, inward], ConeShape::HalfPlane(inward))
            } else {
                let u = if first.lex_cmp(&(-first)) == Ordering::Greater {
                    first
                } else {
                    -first
                };
                Self::with_shape(2, vec![u, -u], ConeShape::Line(u))
            }
        } else {
            Cone::full(2)
        }
    }

    fn canonical_spatial(units: Vec<Vector>) -> Cone {
        // Drop generators already spanned by the others.
        let mut keep = units;
        let mut i = 0;
        while i < keep.len() {
            let others: Vec<Vector> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| *g)
                .collect();
            if !others.is_empty() && spatial_contains(&others, &keep[i]) {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        Self::with_shape(3, keep, ConeShape::Spatial)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn shape(&self) -> ConeShape {
        self.shape
    }

    pub fn is_trivial(&self) -> bool {
        !self.full && self.generators.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Cone generated by the union of both generator sets.
    pub fn merge(&self, other: &Cone) -> Cone {
        debug_assert_eq!(self.dim, other.dim);
        if self.full || other.full {
            return Cone::full(self.dim);
        }
        let mut gens = self.generators.clone();
        gens.extend_from_slice(&other.generators);
        Self::canonical(self.dim, gens)
    }

    /// Whether `v` lies in the cone, at relative tolerance `1e-12`.
    pub fn contains(&self, v: &Vector) -> bool {
        let tol = EPS * v.norm().max(1.0);
        match self.shape {
            ConeShape::Full => true,
            ConeShape::Trivial => v.norm() <= tol,
            ConeShape::Ray(g) => match self.dim {
                1 => v.x() * g.x() >= -tol,
                2 => g.cross2(v).abs() <= tol && g.dot(v) >= -tol,
                _ => g.cross3(v).norm() <= tol && g.dot(v) >= -tol,
            },
            ConeShape::Sector(a, b) => a.cross2(v) >= -tol && v.cross2(&b) >= -tol,
            ConeShape::Line(u) => u.cross2(v).abs() <= tol,
            ConeShape::HalfPlane(n) => n.dot(v) >= -tol,
            ConeShape::Spatial => spatial_contains(&self.generators, v),
        }
    }

    /// `K ⊆ self` for another cone `K`.
    pub fn contains_cone(&self, other: &Cone) -> bool {
        if other.full {
            return self.full;
        }
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Membership of `x*` in the polar cone `{x* : <x*, c> <= 0 for all c}`.
    pub fn polar_contains(&self, x_star: &Vector) -> bool {
        if self.full {
            return x_star.norm() <= EPS;
        }
        self.generators.iter().all(|g| g.dot(x_star) <= EPS)
    }

    /// Euclidean distance from `v` to the cone (dimensions 1 and 2, or 3-d rays).
    pub fn distance_to(&self, v: &Vector) -> Result<f64, GeometryError> {
        let to_ray = |g: &Vector| {
            let t = g.dot(v);
            if t <= 0.0 {
                v.norm()
            } else {
                (*v - *g * t).norm()
            }
        };
        Ok(match self.shape {
            ConeShape::Full => 0.0,
            ConeShape::Trivial => v.norm(),
            ConeShape::Ray(g) => to_ray(&g),
            ConeShape::Sector(a, b) => {
                if self.contains(v) {
                    0.0
                } else {
                    to_ray(&a).min(to_ray(&b))
                }
            }
            ConeShape::Line(u) => u.cross2(v).abs(),
            ConeShape::HalfPlane(n) => (-n.dot(v)).max(0.0),
            ConeShape::Spatial => {
                if self.contains(v) {
                    0.0
                } else if self.generators.len() == 1 {
                    to_ray(&self.generators[0])
                } else {
                    return Err(GeometryError::Unsupported(
                        "distance to a multi-generator cone in 3-d",
                    ));
                }
            }
        })
    }

    pub fn approx_eq(&self, other: &Cone, tol: f64) -> bool {
        self.dim == other.dim
            && self.full == other.full
            && self.generators.len() == other.generators.len()
            && self
                .generators
                .iter()
                .zip(&other.generators)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub(crate) fn cmp_key(&self, key: &mut Vec<f64>) {
        key.push(if self.full { 1.0 } else { 0.0 });
        key.push(self.generators.len() as f64);
        for g in &self.generators {
            key.extend_from_slice(g.coords());
        }
    }
}

/// Carathéodory test: `v` is in `cone(gens)` iff it is a nonnegative
/// combination of at most three linearly independent generators.
fn spatial_contains(gens: &[Vector], v: &Vector) -> bool {
    let tol = EPS * v.norm().max(1.0);
    if v.norm() <= tol {
        return true;
    }
    let n = gens.len();
    for i in 0..n {
        let g = &gens[i];
        if g.cross3(v).norm() <= tol && g.dot(v) >= 0.0 {
            return true;
        }
        for j in i + 1..n {
            let h = &gens[j];
            let normal = g.cross3(h);
            if normal.norm() > EPS && normal.dot(v).abs() <= tol {
                // Solve v = a g + b h inside the plane spanned by g, h.
                let (gg, gh, hh) = (g.dot(g), g.dot(h), h.dot(h));
                let (vg, vh) = (v.dot(g), v.dot(h));
                let det = gg * hh - gh * gh;
                let a = (vg * hh - vh * gh) / det;
                let b = (vh * gg - vg * gh) / det;
                if a >= -tol && b >= -tol {
                    return true;
                }
            }
            for k in j + 1..n {
                let w = &gens[k];
                let det = g.dot(&h.cross3(w));
                if det.abs() <= EPS {
                    continue;
                }
                let a = v.dot(&h.cross3(w)) / det;
                let b = g.dot(&v.cross3(w)) / det;
                let c = g.dot(&h.cross3(v)) / det;
                if a >= -tol && b >= -tol && c >= -tol {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(theta: f64) -> Vector {
        Vector::from_angle(theta)
    }

    #[test]
    fn two_rays_give_a_sector() {
        let c = Cone::generated_by(2, &[unit(0.0), unit(0.3)]).unwrap();
        match c.shape() {
            ConeShape::Sector(a, b) => {
                assert!(a.approx_eq(&unit(0.0), 1e-15));
                assert!(b.approx_eq(&unit(0.3), 1e-15));
            }
            s => panic!("unexpected {s:?}"),
        }
        assert!(c.contains(&unit(0.1)));
        assert!(!c.contains(&unit(-0.1)));
    }

    #[test]
    fn interior_generators_are_dropped() {
        let c = Cone::generated_by(2, &[unit(-0.5), unit(0.1), unit(0.2), unit(1.0)]).unwrap();
        assert_eq!(c.generators().len(), 2);
        let d = Cone::generated_by(2, &[unit(-0.5), unit(1.0)]).unwrap();
        assert!(c.approx_eq(&d, 1e-12));
    }

    #[test]
    fn planar_degenerate_shapes() {
        let line = Cone::generated_by(2, &[unit(0.2), unit(0.2 + PI)]).unwrap();
        assert!(matches!(line.shape(), ConeShape::Line(_)));
        let half = Cone::generated_by(2, &[unit(0.0), unit(PI), unit(1.0)]).unwrap();
        match half.shape() {
            ConeShape::HalfPlane(n) => assert!(n.approx_eq(&Vector::d2(0.0, 1.0), 1e-12)),
            s => panic!("unexpected {s:?}"),
        }
        let full = Cone::generated_by(2, &[unit(0.0), unit(2.0), unit(4.0)]).unwrap();
        assert!(full.is_full());
    }

    #[test]
    fn one_dimensional_cones() {
        let both = Cone::generated_by(1, &[Vector::d1(2.0), Vector::d1(-0.5)]).unwrap();
        assert!(both.is_full());
        let pos = Cone::generated_by(1, &[Vector::d1(3.0)]).unwrap();
        assert_eq!(pos.generators(), &[Vector::d1(1.0)]);
    }

    #[test]
    fn merging_is_generator_union() {
        let a = Cone::ray(unit(0.0)).unwrap();
        let b = Cone::ray(unit(0.7)).unwrap();
        let ab = Cone::generated_by(2, &[unit(0.0), unit(0.7)]).unwrap();
        assert!(a.merge(&b).approx_eq(&ab, 1e-12));
        assert!(a.merge(&a).approx_eq(&a, 0.0));
    }

    #[test]
    fn spatial_membership_and_reduction() {
        let e = [Vector::d3(1.0, 0.0, 0.0), Vector::d3(0.0, 1.0, 0.0), Vector::d3(0.0, 0.0, 1.0)];
        let mut gens = e.to_vec();
        gens.push(Vector::d3(1.0, 1.0, 1.0));
        let c = Cone::generated_by(3, &gens).unwrap();
        assert_eq!(c.generators().len(), 3);
        assert!(c.contains(&Vector::d3(0.2, 0.0, 3.0)));
        assert!(!c.contains(&Vector::d3(-0.2, 0.0, 3.0)));
    }

    #[test]
    fn distances_to_planar_cones() {
        let ray = Cone::ray(Vector::d2(1.0, 0.0)).unwrap();
        assert!((ray.distance_to(&Vector::d2(3.0, 2.0)).unwrap() - 2.0).abs() < 1e-15);
        assert!((ray.distance_to(&Vector::d2(-3.0, 4.0)).unwrap() - 5.0).abs() < 1e-15);
        let sector = Cone::generated_by(2, &[unit(0.0), unit(PI / 2.0)]).unwrap();
        assert_eq!(sector.distance_to(&Vector::d2(1.0, 1.0)).unwrap(), 0.0);
        assert!((sector.distance_to(&Vector::d2(-1.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polar_of_a_ray() {
        let ray = Cone::ray(Vector::d2(1.0, 0.0)).unwrap();
        assert!(ray.polar_contains(&Vector::d2(0.0, 1.0)));
        assert!(ray.polar_contains(&Vector::d2(-0.6, 0.8)));
        assert!(!ray.polar_contains(&Vector::d2(0.6, 0.8)));
    }
}
