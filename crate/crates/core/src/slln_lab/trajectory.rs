use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex_sets::{hausdorff, ConvexCell, SetUnion, Vector};
use crate::mixing::{validate_checkpoints, CompensatedSum};
use crate::randsets::SetProcessSpec;

use super::LabError;

/// Which set the averages are compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// The expectation as the family defines it.
    #[serde(rename = "A")]
    A,
    /// Its closed convex hull.
    #[serde(rename = "coA")]
    CoA,
}

/// One metric sampled at checkpoints for one seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub metric: String,
    pub seed: u64,
    pub checkpoints: Vec<usize>,
    pub values: Vec<f64>,
}

impl Trajectory {
    pub fn last(&self) -> Option<(usize, f64)> {
        Some((*self.checkpoints.last()?, *self.values.last()?))
    }
}

/// CSV with header `metric,seed,n,value`, rows sorted by metric, seed, n.
pub fn trajectories_to_csv(trajectories: &[Trajectory]) -> String {
    let mut rows: Vec<(&str, u64, usize, f64)> = trajectories
        .iter()
        .flat_map(|t| {
            t.checkpoints
                .iter()
                .zip(&t.values)
                .map(move |(n, v)| (t.metric.as_str(), t.seed, *n, *v))
        })
        .collect();
    rows.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    let mut out = String::from("metric,seed,n,value\n");
    for (m, s, n, v) in rows {
        out.push_str(&format!("{m},{s},{n},{v:e}\n"));
    }
    out
}

/// Metric name of the Hausdorff trajectories.
pub const METRIC_HAUSDORFF: &str = "hausdorff";
/// Metric name of `|m_n - μ|`, recorded alongside.
pub const METRIC_MEAN_ERROR: &str = "mean_error";

/// Hausdorff distance between `(1/n) Σ X_k` and the target, per seed.
///
/// Returns two trajectories per seed, `hausdorff` then `mean_error`, in seed
/// order. Seeds run in parallel on the current rayon pool.
pub fn run_hausdorff_slln(
    spec: &SetProcessSpec,
    target: Target,
    n_max: usize,
    checkpoints: &[usize],
    seeds: &[u64],
) -> Result<Vec<Trajectory>, LabError> {
    if spec.is_unbounded() {
        return Err(LabError::UnboundedFamily(spec.name()));
    }
    validate_checkpoints(checkpoints, n_max)?;
    let per_seed: Vec<Result<[Trajectory; 2], LabError>> =
        seeds.par_iter().map(|&s| one_seed(spec, target, checkpoints, s)).collect();
    let mut out = Vec::with_capacity(2 * seeds.len());
    for r in per_seed {
        out.extend(r?);
    }
    Ok(out)
}

fn one_seed(
    spec: &SetProcessSpec,
    target: Target,
    checkpoints: &[usize],
    seed: u64,
) -> Result<[Trajectory; 2], LabError> {
    let driver = spec.driver().expect("bounded families have drivers").with_seed(seed);
    let mu = driver.mean();
    let clamp = matches!(spec, SetProcessSpec::RandomBall(_));
    let mut acc = CompensatedSum::default();
    let mut h = Vec::with_capacity(checkpoints.len());
    let mut err = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    let last = checkpoints.last().copied().unwrap_or(0);
    for (k, x) in driver.iter().take(last).enumerate() {
        acc.add(if clamp { x.max(0.0) } else { x });
        let n = k + 1;
        if checkpoints[next] == n {
            let m = acc.value() / n as f64;
            h.push(average_distance(spec, target, m, mu, n)?);
            err.push((m - mu).abs());
            next += 1;
        }
    }
    let traj = |metric: &str, values| Trajectory {
        metric: metric.to_string(),
        seed,
        checkpoints: checkpoints.to_vec(),
        values,
    };
    Ok([traj(METRIC_HAUSDORFF, h), traj(METRIC_MEAN_ERROR, err)])
}

/// Distance from the exact average with running mean `m` to the target.
fn average_distance(spec: &SetProcessSpec, target: Target, m: f64, mu: f64, n: usize) -> Result<f64, LabError> {
    Ok(match spec {
        SetProcessSpec::Segment(_) => {
            let s = SetUnion::single(ConvexCell::interval(m, m + 1.0)?);
            let a = SetUnion::single(ConvexCell::interval(mu, mu + 1.0)?);
            hausdorff(&s, &a)?
        }
        SetProcessSpec::TwoPoint(_) => match target {
            Target::CoA => lattice_to_interval(m, n, mu, mu + 1.0),
            Target::A => lattice_to_pair(m, n, mu, mu + 1.0),
        },
        SetProcessSpec::RandomBall(_) => {
            let origin = Vector::d2(0.0, 0.0);
            let s = SetUnion::single(ConvexCell::ball(origin, m)?);
            let a = SetUnion::single(ConvexCell::ball(origin, mu.max(0.0))?);
            hausdorff(&s, &a)?
        }
        _ => unreachable!("unbounded families are rejected earlier"),
    })
}

/// The points `m + i/n`, `0 ≤ i ≤ n`: the exact average of `n` two-point sets.
pub fn two_point_lattice(m: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| m + i as f64 / n as f64).collect()
}

/// Distance from `x` to the lattice `{m + i/n}`.
pub fn lattice_distance(m: f64, n: usize, x: f64) -> f64 {
    lattice_distance_within(m, n, x, 0, n)
}

/// Distance from `x` to `{m + i/n : i_lo ≤ i ≤ i_hi}`.
pub fn lattice_distance_within(m: f64, n: usize, x: f64, i_lo: usize, i_hi: usize) -> f64 {
    let nf = n as f64;
    let i = ((x - m) * nf).round().clamp(i_lo as f64, i_hi as f64) as usize;
    let lo = i.saturating_sub(1).max(i_lo);
    let hi = (i + 1).min(i_hi);
    (lo..=hi).map(|j| (x - (m + j as f64 / nf)).abs()).fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance between the lattice `{m + i/n}` and `[lo, hi]`.
pub fn lattice_to_interval(m: f64, n: usize, lo: f64, hi: f64) -> f64 {
    let gap = |y: f64| (lo - y).max(y - hi).max(0.0);
    let forward = gap(m).max(gap(m + 1.0));
    let nf = n as f64;
    let mut backward = lattice_distance(m, n, lo).max(lattice_distance(m, n, hi));
    // Gap midpoints m + (i + 1/2)/n inside [lo, hi] sit 1/(2n) from the lattice.
    let first = ((lo - m) * nf - 0.5).ceil().max(0.0);
    let last = ((hi - m) * nf - 0.5).floor().min(nf - 1.0);
    if first <= last {
        backward = backward.max(0.5 / nf);
    }
    forward.max(backward)
}

/// Hausdorff distance between the lattice `{m + i/n}` and the pair `{p, q}`, `p < q`.
pub fn lattice_to_pair(m: f64, n: usize, p: f64, q: f64) -> f64 {
    let to_pair = |y: f64| (y - p).abs().min((y - q).abs());
    let nf = n as f64;
    let mid = 0.5 * (p + q);
    let i = ((mid - m) * nf).floor();
    let mut forward = to_pair(m).max(to_pair(m + 1.0));
    for j in [i, i + 1.0] {
        if (0.0..=nf).contains(&j) {
            forward = forward.max(to_pair(m + j / nf));
        }
    }
    forward.max(lattice_distance(m, n, p)).max(lattice_distance(m, n, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_matches_point_sets() {
        for (m, n) in [(0.013, 7), (-0.2, 3), (0.6, 10), (1.7, 4)] {
            let pts: Vec<Vector> = two_point_lattice(m, n).into_iter().map(Vector::d1).collect();
            let l = SetUnion::points(&pts).unwrap();
            let iv = SetUnion::single(ConvexCell::interval(0.0, 1.0).unwrap());
            let pair = SetUnion::points(&[Vector::d1(0.0), Vector::d1(1.0)]).unwrap();
            assert!((lattice_to_interval(m, n, 0.0, 1.0) - hausdorff(&l, &iv).unwrap()).abs() < 1e-12);
            assert!((lattice_to_pair(m, n, 0.0, 1.0) - hausdorff(&l, &pair).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_is_sorted() {
        let t = |seed| Trajectory {
            metric: "hausdorff".into(),
            seed,
            checkpoints: vec![1, 10],
            values: vec![0.5, 0.25],
        };
        let csv = trajectories_to_csv(&[t(2), t(1)]);
        assert_eq!(csv.lines().nth(1), Some("hausdorff,1,1,5e-1"));
        assert_eq!(csv.lines().count(), 5);
    }
}
