use serde::Serialize;

use crate::convex_sets::{DualDirection, Vector};
use crate::mixing::{condition_i_report, ConditionIReport, DriverFamily, PhiMethod, PhiProfile, ScalarDriver};
use crate::randsets::{condition_ii_series, condition_iii_series, ConditionIII, SelectionRule, SetProcessSpec};

use super::LabError;

/// φ profile of the driver behind a family, `φ(1..=n_max)`.
///
/// Independent draws (iid, alternating laws, halos) mix instantly; m-dependent
/// windows vanish after lag `m`; Markov drivers use the exact chain profile,
/// which bounds the emitted sequence's coefficients.
pub fn driver_phi_profile(driver: Option<&ScalarDriver>, n_max: usize) -> Result<PhiProfile, LabError> {
    let family = match driver {
        None => return Ok(PhiProfile::identically_zero(0, n_max)?),
        Some(d) => d.family(),
    };
    Ok(match family {
        DriverFamily::Iid { .. } | DriverFamily::Alternating { .. } => PhiProfile::identically_zero(0, n_max)?,
        DriverFamily::MDependent { m, .. } => PhiProfile::identically_zero(*m, n_max)?,
        DriverFamily::FiniteMarkov { p, pi, .. } => PhiProfile::exact_markov(p, pi, n_max)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetSeries {
    pub target: Vec<f64>,
    pub rule: SelectionRule,
    pub formula: String,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionSeries {
    pub x_star: Vec<f64>,
    /// `vacuous`, `finite` or `infinite`.
    pub status: &'static str,
    pub partial_sum: Option<f64>,
    pub infinite_term_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConditionsVerdict {
    HypothesesHoldEvidence,
    HypothesisViolated {
        which: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        x_star: Option<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        infinite_term_at: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        target: Option<Vec<f64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionsReport {
    pub family: &'static str,
    pub horizon: usize,
    pub phi_method: PhiMethod,
    pub condition_i: ConditionIReport,
    pub condition_ii: Vec<TargetSeries>,
    pub condition_iii: Vec<DirectionSeries>,
    pub verdict: ConditionsVerdict,
}

/// Evaluates the three hypotheses of the convergence theorem up to `n_max`.
///
/// The first violated condition, in order (i), (ii), (iii), becomes the
/// verdict.
pub fn theorem_conditions_report(
    spec: &SetProcessSpec,
    targets: &[Vector],
    directions: &[DualDirection],
    n_max: usize,
) -> Result<ConditionsReport, LabError> {
    let profile = driver_phi_profile(spec.driver(), n_max)?;
    let condition_i = condition_i_report(&profile)?;
    let rule = SelectionRule::default_for(spec)?;
    let mut condition_ii = Vec::with_capacity(targets.len());
    for t in targets {
        let s = condition_ii_series(spec, rule, t, n_max)?;
        condition_ii.push(TargetSeries {
            target: t.coords().to_vec(),
            rule,
            formula: s.formula,
            partial_sum: s.partial_sum,
        });
    }
    let condition_iii: Vec<DirectionSeries> = directions
        .iter()
        .map(|x| {
            let x_star = x.vector().coords().to_vec();
            match condition_iii_series(spec, x, n_max) {
                ConditionIII::Vacuous => DirectionSeries {
                    x_star,
                    status: "vacuous",
                    partial_sum: None,
                    infinite_term_at: None,
                },
                ConditionIII::Finite { partial_sum, .. } => DirectionSeries {
                    x_star,
                    status: "finite",
                    partial_sum: Some(partial_sum),
                    infinite_term_at: None,
                },
                ConditionIII::Infinite { first_index } => DirectionSeries {
                    x_star,
                    status: "infinite",
                    partial_sum: None,
                    infinite_term_at: Some(first_index),
                },
            }
        })
        .collect();
    let violated = |which, x_star, infinite_term_at, target| ConditionsVerdict::HypothesisViolated {
        which,
        x_star,
        infinite_term_at,
        target,
    };
    let verdict = if condition_i.verdict == crate::mixing::ConditionIVerdict::Diverging {
        violated("i", None, None, None)
    } else if let Some(t) = condition_ii.iter().find(|t| !t.partial_sum.is_finite()) {
        violated("ii", None, None, Some(t.target.clone()))
    } else if let Some(d) = condition_iii.iter().find(|d| d.status == "infinite") {
        violated("iii", Some(d.x_star.clone()), d.infinite_term_at, None)
    } else {
        ConditionsVerdict::HypothesesHoldEvidence
    };
    Ok(ConditionsReport {
        family: spec.name(),
        horizon: n_max,
        phi_method: profile.method(),
        condition_i,
        condition_ii,
        condition_iii,
        verdict,
    })
}
