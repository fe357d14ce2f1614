use serde::Serialize;

use crate::convex_sets::{Cone, ConvexCell, DualDirection, SetUnion, Vector};
use crate::mixing::{DriverFamily, Law};

use super::family::{halo_point, needle, ray_angle, HALO_POSITIVE_PART_MEAN};
use super::{RandsetError, SetProcessSpec};

/// Aumann expectation of `X_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AumannExpectation {
    /// Closed convex Aumann integral (a single cell).
    pub convexified: SetUnion,
    /// The set taken as `A = E[X_n]` by the family's setup.
    pub claimed: SetUnion,
    /// Whether `convexified` is the same for every `n`.
    pub family_constant: bool,
}

/// Expectation at `n = 1`; see [`expectation_at`].
pub fn expectation(spec: &SetProcessSpec) -> Result<AumannExpectation, RandsetError> {
    expectation_at(spec, 1)
}

/// Aumann expectation of `X_n`.
///
/// For the unbounded families the convexified integral depends on `n`
/// (needle-halo: `B(0, 2/(3πn)) ⊕ cone{(1,0)}`; random ray: the sector
/// `cone{v_+, v_-}`), while `claimed` is the needle `A`.
pub fn expectation_at(spec: &SetProcessSpec, n: usize) -> Result<AumannExpectation, RandsetError> {
    let interval = |mu: f64| SetUnion::single(ConvexCell::interval(mu, mu + 1.0).expect("finite mean"));
    Ok(match spec {
        SetProcessSpec::Segment(d) => AumannExpectation {
            convexified: interval(d.mean()),
            claimed: interval(d.mean()),
            family_constant: true,
        },
        SetProcessSpec::TwoPoint(d) => AumannExpectation {
            convexified: interval(d.mean()),
            claimed: SetUnion::points(&[Vector::d1(d.mean()), Vector::d1(d.mean() + 1.0)])
                .expect("finite mean"),
            family_constant: true,
        },
        SetProcessSpec::RandomBall(d) => {
            if !radius_is_nonnegative(d.family()) {
                return Err(RandsetError::UnknownMoments);
            }
            let ball = SetUnion::single(
                ConvexCell::ball(Vector::d2(0.0, 0.0), d.mean()).map_err(|_| RandsetError::UnknownMoments)?,
            );
            AumannExpectation {
                convexified: ball.clone(),
                claimed: ball,
                family_constant: true,
            }
        }
        SetProcessSpec::NeedleHalo => {
            let radius = HALO_POSITIVE_PART_MEAN / n as f64;
            let cell = ConvexCell::ball(Vector::d2(0.0, 0.0), radius)
                .and_then(|b| b.with_cone(Cone::ray(Vector::d2(1.0, 0.0))?))
                .expect("valid cell");
            AumannExpectation {
                convexified: SetUnion::single(cell),
                claimed: SetUnion::single(needle()),
                family_constant: false,
            }
        }
        SetProcessSpec::RandomRay(_) => {
            let t = 1.0 / n as f64;
            let cone = Cone::generated_by(2, &[Vector::from_angle(t), Vector::from_angle(-t)])
                .expect("two unit directions");
            AumannExpectation {
                convexified: SetUnion::single(ConvexCell::from_cone(cone)),
                claimed: SetUnion::single(needle()),
                family_constant: false,
            }
        }
    })
}

/// Radii are clamped at zero; the analytic mean is only exact when a negative
/// radius has (numerically) no mass.
fn radius_is_nonnegative(f: &DriverFamily) -> bool {
    let law_ok = |l: &Law| match l {
        Law::Constant { value } => *value >= 0.0,
        Law::Uniform { low, .. } => *low >= 0.0,
        Law::Normal { mean, sd } => (*sd == 0.0 && *mean >= 0.0) || *mean >= 8.0 * sd,
        Law::Discrete { values, .. } => values.iter().all(|v| *v >= 0.0),
    };
    match f {
        DriverFamily::Iid { law } | DriverFamily::MDependent { law, .. } => law_ok(law),
        DriverFamily::FiniteMarkov { emissions, .. } => emissions.iter().all(|e| *e >= 0.0),
        DriverFamily::Alternating { even, odd } => law_ok(even) && law_ok(odd),
    }
}

/// Selection rules `x_n ∈ X_n` with `E[x_n] = a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// `x_n ≡ a`, for `a` in the needle (which every needle-halo sample contains).
    Constant,
    /// `x_n = z_n`, the halo point itself; only for `a = 0`.
    Halo,
    /// `x_n = (a / cos(1/n)) v_n` on a random ray.
    Ray,
    /// `x_n = x'_n + (a - μ)` for segments and two-point sets.
    Shift,
}

impl SelectionRule {
    pub fn default_for(spec: &SetProcessSpec) -> Result<SelectionRule, RandsetError> {
        match spec {
            SetProcessSpec::Segment(_) | SetProcessSpec::TwoPoint(_) => Ok(SelectionRule::Shift),
            SetProcessSpec::NeedleHalo => Ok(SelectionRule::Constant),
            SetProcessSpec::RandomRay(_) => Ok(SelectionRule::Ray),
            SetProcessSpec::RandomBall(_) => Err(RandsetError::SelectionUnavailable),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SelectionRule::Constant => "constant",
            SelectionRule::Halo => "halo",
            SelectionRule::Ray => "ray",
            SelectionRule::Shift => "shift",
        }
    }
}

fn check_rule(spec: &SetProcessSpec, rule: SelectionRule, target: &Vector) -> Result<(), RandsetError> {
    if target.dim() != spec.dim() {
        return Err(RandsetError::TargetNotInA);
    }
    let on_needle = target.y() == 0.0 && target.x() >= 0.0;
    let ok = match (spec, rule) {
        (SetProcessSpec::Segment(d), SelectionRule::Shift) => {
            (d.mean()..=d.mean() + 1.0).contains(&target.x())
        }
        (SetProcessSpec::TwoPoint(d), SelectionRule::Shift) => {
            target.x() == d.mean() || target.x() == d.mean() + 1.0
        }
        (SetProcessSpec::NeedleHalo, SelectionRule::Constant) => on_needle,
        (SetProcessSpec::NeedleHalo, SelectionRule::Halo) => target.is_zero(),
        (SetProcessSpec::RandomRay(_), SelectionRule::Ray) => on_needle,
        _ => return Err(RandsetError::SelectionUnavailable),
    };
    if ok {
        Ok(())
    } else {
        Err(RandsetError::TargetNotInA)
    }
}

/// Selection for `target` with the family's default rule.
pub fn selection(spec: &SetProcessSpec, target: &Vector, n: usize, seed: u64) -> Result<Vector, RandsetError> {
    selection_with(spec, SelectionRule::default_for(spec)?, target, n, seed)
}

pub fn selection_with(
    spec: &SetProcessSpec,
    rule: SelectionRule,
    target: &Vector,
    n: usize,
    seed: u64,
) -> Result<Vector, RandsetError> {
    check_rule(spec, rule, target)?;
    let x = || spec.scalar_draws(seed, n).last().copied().unwrap_or(0.0);
    Ok(match rule {
        SelectionRule::Constant => *target,
        SelectionRule::Halo => halo_point(seed, n),
        SelectionRule::Shift => {
            let mu = spec.driver().expect("scalar family").mean();
            Vector::d1(x() + (target.x() - mu))
        }
        SelectionRule::Ray => ray_selection(target.x(), ray_angle(x(), n)),
    })
}

/// `(a / cos θ) (cos θ, sin θ) = (a, a tan θ)`.
pub fn ray_selection(a: f64, theta: f64) -> Vector {
    Vector::d2(a, a * theta.tan())
}

/// Condition (ii) partial sum `Σ_{n ≤ N} E‖x_n - a‖² / n²` with analytic terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    pub partial_sum: f64,
    pub formula: String,
    pub terms: Vec<f64>,
}

impl SeriesReport {
    /// CSV with header `n,term,partial_sum`.
    pub fn to_csv(&self) -> String {
        series_csv(&self.terms)
    }
}

pub fn series_csv(terms: &[f64]) -> String {
    let mut out = String::from("n,term,partial_sum\n");
    let mut acc = 0.0;
    for (k, t) in terms.iter().enumerate() {
        acc += t;
        out.push_str(&format!("{},{:e},{:e}\n", k + 1, t, acc));
    }
    out
}

pub fn condition_ii_series(
    spec: &SetProcessSpec,
    rule: SelectionRule,
    target: &Vector,
    n_max: usize,
) -> Result<SeriesReport, RandsetError> {
    check_rule(spec, rule, target)?;
    let (formula, term): (&str, Box<dyn Fn(f64) -> f64>) = match rule {
        SelectionRule::Constant => ("0", Box::new(|_| 0.0)),
        SelectionRule::Halo => ("E|z_n|^2 / n^2 = 1 / (2 n^4)", Box::new(|n| 0.5 / n.powi(4))),
        SelectionRule::Ray => {
            let a = target.x();
            ("a^2 tan^2(1/n) / n^2", Box::new(move |n| (a * (1.0 / n).tan()).powi(2) / (n * n)))
        }
        SelectionRule::Shift => {
            let d = spec.driver().expect("scalar family").clone();
            ("Var(x_n) / n^2", Box::new(move |n| d.variance_at(n as usize) / (n * n)))
        }
    };
    let terms: Vec<f64> = (1..=n_max).map(|n| term(n as f64)).collect();
    Ok(SeriesReport {
        partial_sum: terms.iter().sum(),
        formula: formula.to_string(),
        terms,
    })
}

/// Condition (iii) partial sum `Σ_{n ≤ N} E|s(x*, X_n) - s(x*, A)|² / n²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionIII {
    /// `s(x*, A) = +∞`: `x*` lies outside the polar of the recession cone.
    Vacuous,
    Finite { partial_sum: f64, terms: Vec<f64> },
    Infinite { first_index: usize },
}

pub fn condition_iii_series(spec: &SetProcessSpec, x_star: &DualDirection, n_max: usize) -> ConditionIII {
    let u = *x_star.vector();
    let a = expectation(spec).map(|e| e.claimed);
    if let Ok(a) = &a {
        if !a.support(&u).is_finite() {
            return ConditionIII::Vacuous;
        }
    }
    let norm2 = u.norm_sq();
    let terms: Vec<f64> = match spec {
        SetProcessSpec::Segment(d) | SetProcessSpec::TwoPoint(d) | SetProcessSpec::RandomBall(d) => (1
            ..=n_max)
            .map(|n| norm2 * d.variance_at(n) / (n * n) as f64)
            .collect(),
        SetProcessSpec::NeedleHalo => (1..=n_max).map(|n| norm2 / (8.0 * (n as f64).powi(4))).collect(),
        SetProcessSpec::RandomRay(_) => {
            let mut terms = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                let t = 1.0 / n as f64;
                let unbounded = [t, -t].iter().any(|th| u.dot(&Vector::from_angle(*th)) > 0.0);
                if unbounded {
                    return ConditionIII::Infinite { first_index: n };
                }
                terms.push(0.0);
            }
            terms
        }
    };
    ConditionIII::Finite {
        partial_sum: terms.iter().sum(),
        terms,
    }
}
