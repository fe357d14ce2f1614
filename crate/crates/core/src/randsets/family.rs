use std::f64::consts::PI;

use rand::Rng;

use crate::convex_sets::{Cone, ConvexCell, DualDirection, SetUnion, Vector};
use crate::mixing::{CounterRng, DriverFamily, Law, ScalarDriver};

use super::RandsetError;

const STREAM_HALO: u64 = 17;

/// The five set-valued sequence families.
#[derive(Clone, Debug, PartialEq)]
pub enum SetProcessSpec {
    /// `X_n = [x_n, x_n + 1]` in `R`.
    Segment(ScalarDriver),
    /// `X_n = {x_n, x_n + 1}` in `R`.
    TwoPoint(ScalarDriver),
    /// `X_n = B(0, max(r_n, 0))` in `R^2`.
    RandomBall(ScalarDriver),
    /// `X_n = A ∪ {ε_n / n}` with `A` the nonnegative x-axis and `ε_n` iid
    /// uniform on the closed unit disk.
    NeedleHalo,
    /// `X_n = cone{(cos θ_n, sin θ_n)}`, `θ_n = ±1/n` with the sign taken from
    /// a driver emitting `±1` with mean zero.
    RandomRay(ScalarDriver),
}

/// Family names as used in configs and reports.
pub const FAMILY_NAMES: [&str; 5] = ["segment", "two_point", "random_ball", "needle_halo", "random_ray"];

impl SetProcessSpec {
    /// Random ray with iid fair signs.
    pub fn random_ray_fair() -> SetProcessSpec {
        SetProcessSpec::RandomRay(fair_signs())
    }

    /// Validates a spec; random-ray sign drivers must emit `±1` with mean 0.
    pub fn validated(self) -> Result<SetProcessSpec, RandsetError> {
        if let SetProcessSpec::RandomRay(d) = &self {
            let ok_values = |vs: &[f64]| vs.iter().all(|v| *v == 1.0 || *v == -1.0);
            let values_ok = match d.family() {
                DriverFamily::Iid { law: Law::Discrete { values, .. } } => ok_values(values),
                DriverFamily::FiniteMarkov { emissions, .. } => ok_values(emissions),
                _ => false,
            };
            if !values_ok || d.mean().abs() > 1e-12 {
                return Err(RandsetError::InvalidSignDriver);
            }
        }
        Ok(self)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SetProcessSpec::Segment(_) => FAMILY_NAMES[0],
            SetProcessSpec::TwoPoint(_) => FAMILY_NAMES[1],
            SetProcessSpec::RandomBall(_) => FAMILY_NAMES[2],
            SetProcessSpec::NeedleHalo => FAMILY_NAMES[3],
            SetProcessSpec::RandomRay(_) => FAMILY_NAMES[4],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SetProcessSpec::Segment(_) | SetProcessSpec::TwoPoint(_) => 1,
            _ => 2,
        }
    }

    pub fn driver(&self) -> Option<&ScalarDriver> {
        match self {
            SetProcessSpec::Segment(d)
            | SetProcessSpec::TwoPoint(d)
            | SetProcessSpec::RandomBall(d)
            | SetProcessSpec::RandomRay(d) => Some(d),
            SetProcessSpec::NeedleHalo => None,
        }
    }

    /// Sets with a nontrivial recession cone.
    pub fn is_unbounded(&self) -> bool {
        matches!(self, SetProcessSpec::NeedleHalo | SetProcessSpec::RandomRay(_))
    }

    /// Driver values `x_1..x_n` (signs for random rays) under `seed`.
    pub fn scalar_draws(&self, seed: u64, n: usize) -> Vec<f64> {
        match self.driver() {
            Some(d) => d.with_seed(seed).draw_sequence(n),
            None => Vec::new(),
        }
    }

    /// `X_1, …, X_n` under `seed`.
    pub fn sets(&self, seed: u64, n: usize) -> Vec<SetUnion> {
        let draws = self.scalar_draws(seed, n);
        (1..=n)
            .map(|k| build_set(self, k, draws.get(k - 1).copied().unwrap_or(0.0), seed))
            .collect()
    }
}

pub(crate) fn fair_signs() -> ScalarDriver {
    ScalarDriver::iid(
        Law::Discrete {
            values: vec![-1.0, 1.0],
            probs: vec![0.5, 0.5],
        },
        0,
    )
    .expect("valid law")
}

/// The target `A = {(t, 0) : t ≥ 0}` of the unbounded families.
pub fn needle() -> ConvexCell {
    ConvexCell::ray(Vector::d2(1.0, 0.0)).expect("nonzero direction")
}

/// `ε_n`, uniform on the closed unit disk, by rejection on a dedicated stream.
pub fn halo_epsilon(seed: u64, n: usize) -> Vector {
    let mut rng = CounterRng::new(seed, STREAM_HALO, n as u64);
    loop {
        let x: f64 = rng.random_range(-1.0..=1.0);
        let y: f64 = rng.random_range(-1.0..=1.0);
        if x * x + y * y <= 1.0 {
            return Vector::d2(x, y);
        }
    }
}

/// `z_n = ε_n / n`.
pub fn halo_point(seed: u64, n: usize) -> Vector {
    halo_epsilon(seed, n) * (1.0 / n as f64)
}

/// `θ_n = sign / n`.
pub fn ray_angle(sign: f64, n: usize) -> f64 {
    if sign >= 0.0 {
        1.0 / n as f64
    } else {
        -1.0 / n as f64
    }
}

/// The set `X_n` from its parameter: a driver value, or nothing for halos.
pub(crate) fn build_set(spec: &SetProcessSpec, n: usize, x: f64, seed: u64) -> SetUnion {
    match spec {
        SetProcessSpec::Segment(_) => {
            SetUnion::single(ConvexCell::interval(x, x + 1.0).expect("finite driver value"))
        }
        SetProcessSpec::TwoPoint(_) => {
            SetUnion::points(&[Vector::d1(x), Vector::d1(x + 1.0)]).expect("finite driver value")
        }
        SetProcessSpec::RandomBall(_) => SetUnion::single(
            ConvexCell::ball(Vector::d2(0.0, 0.0), x.max(0.0)).expect("finite radius"),
        ),
        SetProcessSpec::NeedleHalo => {
            SetUnion::new(vec![needle(), ConvexCell::point(halo_point(seed, n))]).expect("same dimension")
        }
        SetProcessSpec::RandomRay(_) => SetUnion::single(ConvexCell::from_cone(
            Cone::ray(Vector::from_angle(ray_angle(x, n))).expect("unit direction"),
        )),
    }
}

/// `X_n` for one seed. Markov drivers are replayed from index 1.
pub fn sample_set(spec: &SetProcessSpec, n: usize, seed: u64) -> SetUnion {
    assert!(n >= 1, "indices start at 1");
    let x = spec.scalar_draws(seed, n).last().copied().unwrap_or(0.0);
    build_set(spec, n, x, seed)
}

/// `s(x*, X_k)` for `k` in `range`; entries may be `+∞`.
pub fn support_process(
    spec: &SetProcessSpec,
    x_star: &DualDirection,
    range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Vec<f64> {
    let end = *range.end();
    let draws = spec.scalar_draws(seed, end);
    range
        .map(|k| {
            let x = draws.get(k - 1).copied().unwrap_or(0.0);
            build_set(spec, k, x, seed).support(x_star.vector())
        })
        .collect()
}

/// Mean of `max(ε_x, 0)` for `ε` uniform on the unit disk.
pub const HALO_POSITIVE_PART_MEAN: f64 = 2.0 / (3.0 * PI);
