use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GeometryError, EPS};

/// A point of `R^d`, `d ∈ {1, 2, 3}`. Unused trailing coordinates are zero.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: u8,
    c: [f64; 3],
}

impl Vector {
    pub fn new(coords: &[f64]) -> Result<Self, GeometryError> {
        if coords.is_empty() || coords.len() > 3 {
            return Err(GeometryError::BadDimension(coords.len()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Vector {
            dim: coords.len() as u8,
            c,
        })
    }

    /// # Panics
    /// If `x` is not finite.
    pub fn d1(x: f64) -> Self {
        Self::new(&[x]).expect("finite coordinate")
    }

    /// # Panics
    /// If a coordinate is not finite.
    pub fn d2(x: f64, y: f64) -> Self {
        Self::new(&[x, y]).expect("finite coordinates")
    }

    /// # Panics
    /// If a coordinate is not finite.
    pub fn d3(x: f64, y: f64, z: f64) -> Self {
        Self::new(&[x, y, z]).expect("finite coordinates")
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "dimension must be 1, 2 or 3");
        Vector {
            dim: dim as u8,
            c: [0.0; 3],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim as usize]
    }

    pub fn x(&self) -> f64 {
        self.c[0]
    }

    pub fn y(&self) -> f64 {
        self.c[1]
    }

    pub fn z(&self) -> f64 {
        self.c[2]
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    /// z-component of the 2-d cross product.
    pub fn cross2(&self, other: &Vector) -> f64 {
        self.c[0] * other.c[1] - self.c[1] * other.c[0]
    }

    pub fn cross3(&self, other: &Vector) -> Vector {
        let (a, b) = (&self.c, &other.c);
        Vector {
            dim: 3,
            c: [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ],
        }
    }

    /// Unit vector in the same direction, `None` for (near) zero vectors.
    /// Vectors already unit to rounding are returned unchanged, which keeps
    /// normalization idempotent.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n <= EPS {
            None
        } else if (self.norm_sq() - 1.0).abs() <= 8.0 * f64::EPSILON {
            Some(*self)
        } else {
            Some(*self * (1.0 / n))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    pub fn approx_eq(&self, other: &Vector, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .coords()
                .iter()
                .zip(other.coords())
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Lexicographic total order on coordinates.
    pub fn lex_cmp(&self, other: &Vector) -> Ordering {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    }

    /// Counter-clockwise angle in `(-π, π]` (2-d only).
    pub fn angle(&self) -> f64 {
        self.c[1].atan2(self.c[0])
    }

    pub fn from_angle(theta: f64) -> Vector {
        Vector::d2(theta.cos(), theta.sin())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        Vector {
            dim: self.dim,
            c: [self.c[0] + rhs.c[0], self.c[1] + rhs.c[1], self.c[2] + rhs.c[2]],
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        Vector {
            dim: self.dim,
            c: [self.c[0] - rhs.c[0], self.c[1] - rhs.c[1], self.c[2] - rhs.c[2]],
        }
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, k: f64) -> Vector {
        Vector {
            dim: self.dim,
            c: [self.c[0] * k, self.c[1] * k, self.c[2] * k],
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self * -1.0
    }
}

/// An element of the dual unit ball `S*`: Euclidean norm at most `1 + 1e-12`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualDirection(Vector);

impl DualDirection {
    pub fn new(v: Vector) -> Result<Self, GeometryError> {
        let n = v.norm();
        if n > 1.0 + EPS {
            return Err(GeometryError::DirectionOutsideDualBall(n));
        }
        Ok(DualDirection(v))
    }

    /// Normalizes `v` onto the unit sphere.
    pub fn unit(v: Vector) -> Result<Self, GeometryError> {
        v.normalized()
            .map(DualDirection)
            .ok_or(GeometryError::ZeroDirection)
    }

    pub fn from_angle(theta: f64) -> Self {
        DualDirection(Vector::from_angle(theta))
    }

    pub fn vector(&self) -> &Vector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Deterministic nested sequence of unit directions: the first `n` entries of
/// one infinite sequence, so maxima over them are nondecreasing in `n`.
///
/// d = 1 alternates `+1, -1`; d = 2 uses van der Corput angles (an exact
/// uniform grid whenever `n` is a power of two); d = 3 maps a Halton pair
/// through the equal-area cylinder projection.
pub fn spread_directions(dim: usize, n: usize) -> Vec<DualDirection> {
    (0..n)
        .map(|k| match dim {
            1 => DualDirection(Vector::d1(if k % 2 == 0 { 1.0 } else { -1.0 })),
            2 => DualDirection::from_angle(2.0 * std::f64::consts::PI * radical_inverse(k, 2)),
            _ => {
                let z = 1.0 - 2.0 * radical_inverse(k, 2);
                let phi = 2.0 * std::f64::consts::PI * radical_inverse(k, 3);
                let r = (1.0 - z * z).max(0.0).sqrt();
                DualDirection(Vector::d3(r * phi.cos(), r * phi.sin(), z))
            }
        })
        .collect()
}

fn radical_inverse(mut k: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(Vector::new(&[]).is_err());
        assert!(Vector::new(&[1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(Vector::new(&[f64::NAN]).is_err());
        assert!(DualDirection::new(Vector::d2(1.0, 1.0)).is_err());
        assert!(DualDirection::unit(Vector::d2(0.0, 0.0)).is_err());
    }

    #[test]
    fn power_of_two_directions_form_a_grid() {
        let dirs = spread_directions(2, 8);
        let mut angles: Vec<f64> = dirs
            .iter()
            .map(|d| d.vector().angle().rem_euclid(2.0 * std::f64::consts::PI))
            .collect();
        angles.sort_by(f64::total_cmp);
        for (k, a) in angles.iter().enumerate() {
            assert!((a - k as f64 * std::f64::consts::PI / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn directions_are_unit_in_every_dimension() {
        for dim in 1..=3 {
            for d in spread_directions(dim, 50) {
                assert!((d.norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
