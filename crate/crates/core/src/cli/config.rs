use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convex_sets::{DualDirection, Vector};
use crate::mixing::{geometric_checkpoints, validate_checkpoints, DriverFamily, ScalarDriver};
use crate::randsets::{SetProcessSpec, FAMILY_NAMES};
use crate::slln_lab::Target;

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    HausdorffSlln,
    KmDiagnostics,
    ConeTracking,
    HaloCertificate,
    PhiProfile,
    ConditionsReport,
    CellExpansion,
    ScalarSlln,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::HausdorffSlln => "hausdorff_slln",
            Experiment::KmDiagnostics => "km_diagnostics",
            Experiment::ConeTracking => "cone_tracking",
            Experiment::HaloCertificate => "halo_certificate",
            Experiment::PhiProfile => "phi_profile",
            Experiment::ConditionsReport => "conditions_report",
            Experiment::CellExpansion => "cell_expansion",
            Experiment::ScalarSlln => "scalar_slln",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub driver: Option<DriverFamily>,
}

/// Explicit checkpoint list, or a geometric grid up to `n_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Checkpoints {
    List(Vec<usize>),
    Geometric { start: usize, per_decade: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyConfig>,
    /// Scalar driver for `phi_profile` and `scalar_slln`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub driver: Option<DriverFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Checkpoints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_passing_seeds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

const TOP_KEYS: [&str; 19] = [
    "experiment",
    "description",
    "family",
    "driver",
    "target",
    "n_max",
    "checkpoints",
    "seeds",
    "tolerance",
    "min_passing_seeds",
    "probes",
    "window_radius",
    "targets",
    "directions",
    "n_values",
    "horizon",
    "plot",
    "expect",
    "output_dir",
];

pub const DEFAULT_SEEDS: usize = 20;
pub const DEFAULT_TOLERANCE: f64 = 0.02;

fn unknown_keys(v: &Value, allowed: &[&str], prefix: &str, out: &mut Vec<String>) {
    if let Value::Object(map) = v {
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                out.push(format!("{prefix}{k}: unknown key"));
            }
        }
    }
}

/// Parses and validates a config, collecting every problem found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::ConfigInvalid(vec![format!("json: {e}")]))?;
    if !value.is_object() {
        return Err(CliError::ConfigInvalid(vec!["config must be a JSON object".into()]));
    }
    let mut issues = Vec::new();
    unknown_keys(&value, &TOP_KEYS, "", &mut issues);
    unknown_keys(&value["family"], &["name", "driver"], "family.", &mut issues);
    if value["checkpoints"].is_object() {
        unknown_keys(&value["checkpoints"], &["start", "per_decade"], "checkpoints.", &mut issues);
    }
    if !issues.is_empty() {
        return Err(CliError::ConfigInvalid(issues));
    }
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::ConfigInvalid(vec![format!("{path}: {}", e.inner())])
    })?;
    let issues = cfg.validate();
    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::ConfigInvalid(issues))
    }
}

impl ExperimentConfig {
    /// Canonical JSON form: defaults left implicit, keys in declaration order.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.seeds.clone().unwrap_or_else(|| (1..=DEFAULT_SEEDS as u64).collect())
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn min_passing_seeds(&self) -> usize {
        let n = self.seeds().len();
        self.min_passing_seeds.unwrap_or(n.saturating_sub(1).max(1))
    }

    pub fn checkpoint_list(&self) -> Vec<usize> {
        let n_max = self.n_max.unwrap_or(1);
        match &self.checkpoints {
            Some(Checkpoints::List(v)) => v.clone(),
            Some(Checkpoints::Geometric { start, per_decade }) => geometric_checkpoints(*start, n_max, *per_decade),
            None => geometric_checkpoints(1, n_max, 4),
        }
    }

    /// Builds the set process; `None` when the config names no family.
    pub fn process(&self) -> Option<Result<SetProcessSpec, String>> {
        let f = self.family.as_ref()?;
        Some(build_process(f))
    }

    pub fn scalar_driver(&self) -> Option<Result<ScalarDriver, String>> {
        let d = self.driver.as_ref()?;
        Some(ScalarDriver::new(d.clone(), 0).map_err(|e| e.to_string()))
    }

    fn needs(&self) -> &'static [&'static str] {
        match self.experiment {
            Experiment::HausdorffSlln => &["family", "n_max"],
            Experiment::KmDiagnostics => &["family", "n_max", "probes", "window_radius"],
            Experiment::ConeTracking => &["family", "n_max"],
            Experiment::HaloCertificate | Experiment::CellExpansion => &["family", "n_values"],
            Experiment::PhiProfile => &["driver", "horizon"],
            Experiment::ConditionsReport => &["family", "horizon"],
            Experiment::ScalarSlln => &["driver", "n_max"],
        }
    }

    fn has(&self, key: &str) -> bool {
        match key {
            "family" => self.family.is_some(),
            "driver" => self.driver.is_some(),
            "n_max" => self.n_max.is_some(),
            "probes" => self.probes.is_some(),
            "window_radius" => self.window_radius.is_some(),
            "n_values" => self.n_values.is_some(),
            "horizon" => self.horizon.is_some(),
            _ => true,
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let exp = self.experiment.name();
        for key in self.needs() {
            if !self.has(key) {
                issues.push(format!("{key}: required for {exp}"));
            }
        }
        if self.n_max == Some(0) {
            issues.push("n_max: must be at least 1".into());
        }
        if self.horizon.is_some_and(|h| h < 10) {
            issues.push("horizon: must be at least 10".into());
        }
        if let Some(n) = self.n_max.filter(|n| *n > 0) {
            let cps = self.checkpoint_list();
            if cps.is_empty() || validate_checkpoints(&cps, n).is_err() {
                issues.push("checkpoints: must be increasing, positive and at most n_max".into());
            }
        }
        let family = self.family.as_ref().map(|f| f.name.as_str());
        let wanted = match self.experiment {
            Experiment::ConeTracking => Some("random_ray"),
            Experiment::HaloCertificate => Some("needle_halo"),
            _ => None,
        };
        if let (Some(w), Some(f)) = (wanted, family) {
            if w != f {
                issues.push(format!("family.name: {exp} needs {w}, got {f}"));
            }
        }
        if self.experiment == Experiment::HausdorffSlln && matches!(family, Some("needle_halo" | "random_ray")) {
            issues.push("family.name: hausdorff_slln needs a bounded family".into());
        }
        if let Some(Checkpoints::Geometric { start, .. }) = &self.checkpoints {
            if *start == 0 {
                issues.push("checkpoints.start: must be at least 1".into());
            }
        }
        if self.seeds.as_ref().is_some_and(|s| s.is_empty()) {
            issues.push("seeds: must not be empty".into());
        }
        if self.tolerance.is_some_and(|t| !(t > 0.0) || !t.is_finite()) {
            issues.push("tolerance: must be positive".into());
        }
        if self.min_passing_seeds.is_some_and(|m| m == 0 || m > self.seeds().len()) {
            issues.push("min_passing_seeds: must be between 1 and the number of seeds".into());
        }
        if self.window_radius.is_some_and(|r| !(r > 0.0) || !r.is_finite()) {
            issues.push("window_radius: must be positive".into());
        }
        if self.n_values.as_ref().is_some_and(|v| v.is_empty() || v.contains(&0)) {
            issues.push("n_values: must be a nonempty list of positive integers".into());
        }
        if let Some(Err(e)) = self.process() {
            issues.push(format!("family: {e}"));
        }
        if let Some(Err(e)) = self.scalar_driver() {
            issues.push(format!("driver: {e}"));
        }
        let dim = self.family.as_ref().and_then(|f| family_dim(&f.name));
        for (key, list) in [("probes", &self.probes), ("targets", &self.targets), ("directions", &self.directions)] {
            let Some(list) = list else { continue };
            for (i, v) in list.iter().enumerate() {
                if Vector::new(v).is_err() || dim.is_some_and(|d| d != v.len()) {
                    issues.push(format!("{key}[{i}]: must be a finite vector of the family's dimension"));
                } else if key == "directions" && (Vector::new(v).unwrap().norm() - 1.0).abs() > 1e-9 {
                    issues.push(format!("{key}[{i}]: must have unit norm"));
                }
            }
        }
        if let Some(e) = &self.expect {
            if !KNOWN_VERDICTS.contains(&e.as_str()) {
                issues.push(format!("expect: unknown verdict {e:?}"));
            }
        }
        issues
    }

    pub fn vectors(list: &Option<Vec<Vec<f64>>>) -> Vec<Vector> {
        list.iter().flatten().map(|v| Vector::new(v).expect("validated")).collect()
    }

    pub fn dual_directions(&self) -> Vec<DualDirection> {
        Self::vectors(&self.directions)
            .into_iter()
            .map(|v| DualDirection::unit(v).expect("validated"))
            .collect()
    }
}

/// Verdict strings an `expect` field may name.
pub const KNOWN_VERDICTS: [&str; 13] = [
    "expanded",
    "converges_evidence",
    "not_converged",
    "fails_with_certificate",
    "inconclusive",
    "no_mixed_signs",
    "halo_sandwich_holds",
    "halo_sandwich_broken",
    "hypotheses_hold_evidence",
    "hypothesis_violated",
    "summable_evidence",
    "diverging",
    "exact_zero",
];

fn family_dim(name: &str) -> Option<usize> {
    match name {
        "segment" | "two_point" => Some(1),
        "random_ball" | "needle_halo" | "random_ray" => Some(2),
        _ => None,
    }
}

fn build_process(f: &FamilyConfig) -> Result<SetProcessSpec, String> {
    let driver = || -> Result<ScalarDriver, String> {
        let d = f.driver.clone().ok_or_else(|| format!("{} needs a driver", f.name))?;
        ScalarDriver::new(d, 0).map_err(|e| e.to_string())
    };
    let spec = match f.name.as_str() {
        "segment" => SetProcessSpec::Segment(driver()?),
        "two_point" => SetProcessSpec::TwoPoint(driver()?),
        "random_ball" => SetProcessSpec::RandomBall(driver()?),
        "needle_halo" => {
            if f.driver.is_some() {
                return Err("needle_halo takes no driver".into());
            }
            SetProcessSpec::NeedleHalo
        }
        "random_ray" => match f.driver {
            None => SetProcessSpec::random_ray_fair(),
            Some(_) => SetProcessSpec::RandomRay(driver()?),
        },
        other => return Err(format!("unknown family {other:?}, expected one of {FAMILY_NAMES:?}")),
    };
    spec.validated().map_err(|e| e.to_string())
}
