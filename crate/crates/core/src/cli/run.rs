use rayon::prelude::*;
use serde_json::{json, Value};

use crate::convex_sets::{cell_to_line, spread_directions};
use crate::mixing::{condition_i_report, scalar_slln_trajectory, ConditionIVerdict};
use crate::randsets::SetProcessSpec;
use crate::slln_lab::{
    cone_tracking, driver_phi_profile, exact_cell_expansion, halo_certificate, run_hausdorff_slln,
    run_km_diagnostics, theorem_conditions_report, trajectories_to_csv, ConditionsVerdict, KmOptions, KmVerdict,
    Target, Trajectory, DEFAULT_EXACT_LIMIT, DEFAULT_KM_TOLERANCE, METRIC_HAUSDORFF, METRIC_MEAN_ERROR,
};

use super::config::{Experiment, ExperimentConfig};
use super::plot::render_svg;
use super::CliError;

/// Files and verdict produced by one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub verdict: String,
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, String)>,
}

fn enum_name<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(Value::Object(m)) => m.get("verdict").and_then(Value::as_str).unwrap_or("unknown").to_string(),
        _ => "unknown".into(),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

/// Runs a validated config; output is a pure function of the config.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let spec = cfg.process().transpose().map_err(|e| CliError::ConfigInvalid(vec![format!("family: {e}")]))?;
    let (verdict, mut report, mut files, trajectory) = match cfg.experiment {
        Experiment::HausdorffSlln => hausdorff_slln(cfg, spec.as_ref().expect("validated"))?,
        Experiment::ScalarSlln => scalar_slln(cfg)?,
        Experiment::KmDiagnostics => km(cfg, spec.as_ref().expect("validated"))?,
        Experiment::ConeTracking => cones(cfg, spec.as_ref().expect("validated"))?,
        Experiment::HaloCertificate => halo(cfg, spec.as_ref().expect("validated"))?,
        Experiment::PhiProfile => phi(cfg)?,
        Experiment::ConditionsReport => conditions(cfg, spec.as_ref().expect("validated"))?,
        Experiment::CellExpansion => expansion(cfg, spec.as_ref().expect("validated"))?,
    };
    let obj = report.as_object_mut().expect("reports are objects");
    obj.insert("experiment".into(), json!(cfg.experiment.name()));
    obj.insert("verdict".into(), json!(verdict));
    if let Some(e) = &cfg.expect {
        obj.insert("expect".into(), json!(e));
    }
    let mut out = vec![("report.json".to_string(), pretty(&report))];
    if let Some(t) = trajectory {
        let csv = trajectories_to_csv(&t);
        if cfg.plot.unwrap_or(true) {
            files.push(("plot.svg".into(), render_svg(&csv)?));
        }
        out.insert(0, ("trajectory.csv".into(), csv));
    }
    out.extend(files);
    Ok(RunOutput { verdict, files: out })
}

type Produced = (String, Value, Vec<(String, String)>, Option<Vec<Trajectory>>);

fn passing_verdict(passing: usize, needed: usize) -> String {
    if passing >= needed { "converges_evidence" } else { "not_converged" }.to_string()
}

fn hausdorff_slln(cfg: &ExperimentConfig, spec: &SetProcessSpec) -> Result<Produced, CliError> {
    let target = cfg.target.unwrap_or(Target::CoA);
    let cps = cfg.checkpoint_list();
    let seeds = cfg.seeds();
    let trajs = run_hausdorff_slln(spec, target, cfg.n_max.expect("validated"), &cps, &seeds)?;
    let tol = cfg.tolerance();
    let mut finals = Vec::new();
    let mut passing = 0;
    for pair in trajs.chunks(2) {
        let h = pair[0].last().map(|p| p.1).unwrap_or(f64::NAN);
        let e = pair[1].last().map(|p| p.1).unwrap_or(f64::NAN);
        passing += usize::from(h <= tol);
        finals.push(json!({"seed": pair[0].seed, METRIC_HAUSDORFF: h, METRIC_MEAN_ERROR: e}));
    }
    let needed = cfg.min_passing_seeds();
    let report = json!({
        "family": spec.name(),
        "target": target,
        "n_max": cfg.n_max,
        "checkpoints": cps,
        "tolerance": tol,
        "min_passing_seeds": needed,
        "passing_seeds": passing,
        "finals": finals,
    });
    let hausdorff: Vec<Trajectory> = trajs.into_iter().filter(|t| t.metric == METRIC_HAUSDORFF).collect();
    Ok((passing_verdict(passing, needed), report, vec![], Some(hausdorff)))
}

fn scalar_slln(cfg: &ExperimentConfig) -> Result<Produced, CliError> {
    let driver = cfg
        .scalar_driver()
        .expect("validated")
        .map_err(|e| CliError::ConfigInvalid(vec![format!("driver: {e}")]))?;
    let cps = cfg.checkpoint_list();
    let n_max = cfg.n_max.expect("validated");
    let seeds = cfg.seeds();
    let runs: Vec<_> = seeds
        .par_iter()
        .map(|s| scalar_slln_trajectory(&driver.with_seed(*s), n_max, &cps))
        .collect::<Result<_, _>>()?;
    let tol = cfg.tolerance();
    let trajs: Vec<Trajectory> = seeds
        .iter()
        .zip(runs)
        .map(|(s, r)| Trajectory {
            metric: METRIC_MEAN_ERROR.into(),
            seed: *s,
            checkpoints: r.iter().map(|p| p.0).collect(),
            values: r.iter().map(|p| p.1).collect(),
        })
        .collect();
    let passing = trajs.iter().filter(|t| t.last().is_some_and(|p| p.1 <= tol)).count();
    let needed = cfg.min_passing_seeds();
    let finals: Vec<Value> = trajs
        .iter()
        .map(|t| json!({"seed": t.seed, METRIC_MEAN_ERROR: t.last().map(|p| p.1)}))
        .collect();
    let report = json!({
        "mean": driver.mean(),
        "n_max": n_max,
        "checkpoints": cps,
        "tolerance": tol,
        "min_passing_seeds": needed,
        "passing_seeds": passing,
        "finals": finals,
    });
    Ok((passing_verdict(passing, needed), report, vec![], Some(trajs)))
}

fn km(cfg: &ExperimentConfig, spec: &SetProcessSpec) -> Result<Produced, CliError> {
    let probes = ExperimentConfig::vectors(&cfg.probes);
    let cps = cfg.checkpoint_list();
    let seeds = cfg.seeds();
    let reports = seeds
        .par_iter()
        .map(|s| {
            let mut o = KmOptions::new(probes.clone(), cfg.window_radius.expect("validated"), cps.clone(), *s);
            o.n_max = cfg.n_max.expect("validated");
            o.tolerance = cfg.tolerance.unwrap_or(DEFAULT_KM_TOLERANCE);
            o.exact_limit = DEFAULT_EXACT_LIMIT;
            run_km_diagnostics(spec, &o)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let first = reports[0].verdict;
    let verdict = if reports.iter().all(|r| r.verdict == first) { first } else { KmVerdict::Inconclusive };
    let mut trajs = Vec::new();
    for r in &reports {
        for (metric, values) in [("excess", &r.excess), ("s_liminf_proxy", &r.s_liminf_proxy)] {
            trajs.push(Trajectory {
                metric: metric.into(),
                seed: r.seed,
                checkpoints: r.checkpoints.clone(),
                values: values.clone(),
            });
        }
    }
    let report = json!({"family": spec.name(), "reports": reports});
    Ok((enum_name(&verdict), report, vec![], Some(trajs)))
}

fn cones(cfg: &ExperimentConfig, spec: &SetProcessSpec) -> Result<Produced, CliError> {
    let n_max = cfg.n_max.expect("validated");
    let tracks = cfg
        .seeds()
        .par_iter()
        .map(|s| cone_tracking(spec, n_max, *s))
        .collect::<Result<Vec<_>, _>>()?;
    let all = tracks.iter().all(|t| t.certificate.as_ref().is_some_and(|c| c.verified_until == n_max));
    let verdict = if all { "fails_with_certificate" } else { "no_mixed_signs" };
    Ok((verdict.into(), json!({"family": spec.name(), "n_max": n_max, "tracks": tracks}), vec![], None))
}

fn halo(cfg: &ExperimentConfig, spec: &SetProcessSpec) -> Result<Produced, CliError> {
    let ns = cfg.n_values.clone().expect("validated");
    let seeds = cfg.seeds();
    let per_seed = seeds
        .par_iter()
        .map(|s| ns.iter().map(|n| halo_certificate(spec, *n, *s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let holds = per_seed
        .iter()
        .flatten()
        .all(|c| c.a_subset_sn && c.sn_in_halo && c.recession_is_needle);
    let mut trajs = Vec::new();
    for (seed, certs) in seeds.iter().zip(&per_seed) {
        trajs.push(Trajectory {
            metric: "max_offset".into(),
            seed: *seed,
            checkpoints: ns.clone(),
            values: certs.iter().map(|c| c.max_offset).collect(),
        });
    }
    let verdict = if holds { "halo_sandwich_holds" } else { "halo_sandwich_broken" };
    let report = json!({"family": spec.name(), "certificates": per_seed.concat()});
    Ok((verdict.into(), report, vec![], Some(trajs)))
}

fn phi(cfg: &ExperimentConfig) -> Result<Produced, CliError> {
    let driver = cfg
        .scalar_driver()
        .expect("validated")
        .map_err(|e| CliError::ConfigInvalid(vec![format!("driver: {e}")]))?;
    let profile = driver_phi_profile(Some(&driver), cfg.horizon.expect("validated"))?;
    let report = condition_i_report(&profile)?;
    let verdict = enum_name(&report.verdict);
    let value = json!({"method": profile.method(), "condition_i": report});
    Ok((verdict, value, vec![("phi.csv".into(), profile.to_csv())], None))
}

fn conditions(cfg: &ExperimentConfig, spec: &SetProcessSpec) -> Result<Produced, CliError> {
    let targets = ExperimentConfig::vectors(&cfg.targets);
    let directions = match &cfg.directions {
        Some(_) => cfg.dual_directions(),
        None => spread_directions(spec.dim(), 8),
    };
    let horizon = cfg.horizon.expect("validated");
    let r = theorem_conditions_report(spec, &targets, &directions, horizon)?;
    let verdict = match r.verdict {
        ConditionsVerdict::HypothesesHoldEvidence => "hypotheses_hold_evidence",
        ConditionsVerdict::HypothesisViolated { .. } => "hypothesis_violated",
    };
    let phi = driver_phi_profile(spec.driver(), horizon)?;
    let value = json!({"report": r, "condition_i_exact_zero": r.condition_i.verdict == ConditionIVerdict::ExactZero});
    Ok((verdict.into(), value, vec![("phi.csv".into(), phi.to_csv())], None))
}

fn expansion(cfg: &ExperimentConfig, spec: &SetProcessSpec) -> Result<Produced, CliError> {
    let ns = cfg.n_values.clone().expect("validated");
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for seed in cfg.seeds() {
        for &n in &ns {
            let ex = exact_cell_expansion(spec, n, seed)?;
            rows.push(json!({"n": n, "seed": seed, "cells": ex.sets.len(), "cells_before_dedup": ex.cells_before_dedup}));
            let mut text = format!("# S_n for n = {n}, seed = {seed}\n");
            for c in ex.sets.cells() {
                text.push_str(&cell_to_line(c));
                text.push('\n');
            }
            files.push((format!("cells_n{n}_seed{seed}.txt"), text));
        }
    }
    Ok(("expanded".into(), json!({"family": spec.name(), "expansions": rows}), files, None))
}
