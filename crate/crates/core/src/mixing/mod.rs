//! φ-mixing scalar drivers, mixing coefficients and the scalar strong law.

mod driver;
mod phi;
pub mod rng;

use thiserror::Error;

pub use driver::{validate_chain, DriverFamily, DriverIter, Law, ScalarDriver};
pub use phi::{
    condition_i_report, m_dependent_window_chain, phi_brute_force, phi_exact_markov, PHI_NOISE_FLOOR,
    ConditionIReport, ConditionIVerdict, PhiMethod, PhiProfile, MAX_EVENTS,
};
pub use rng::CounterRng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixingError {
    #[error("invalid law: {0}")]
    InvalidLaw(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("pi is not stationary for P (max deviation {0:e})")]
    NotStationary(f64),
    #[error("alternating laws must share a mean, got {0} and {1}")]
    UnequalMeans(f64, f64),
    #[error("the gap n must be at least 1")]
    ZeroGap,
    #[error("horizons must be at least 1")]
    EmptyHorizon,
    #[error("{states} states over {len} steps exceed the event enumeration cap")]
    TooManyEvents { states: usize, len: usize },
    #[error("profile needs at least 10 values, got {0}")]
    ProfileTooShort(usize),
    #[error("phi values must lie in [0, 1]")]
    PhiOutOfRange,
    #[error("checkpoints must be sorted, positive and at most n_max")]
    BadCheckpoints,
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Checks that checkpoints are strictly increasing, positive and `≤ n_max`.
pub fn validate_checkpoints(checkpoints: &[usize], n_max: usize) -> Result<(), MixingError> {
    let sorted = checkpoints.windows(2).all(|w| w[0] < w[1]);
    let in_range = checkpoints.iter().all(|&c| c >= 1 && c <= n_max);
    if sorted && in_range {
        Ok(())
    } else {
        Err(MixingError::BadCheckpoints)
    }
}

/// `(n, |mean_n - μ|)` at each checkpoint, in one pass over the sequence.
pub fn scalar_slln_trajectory(
    driver: &ScalarDriver,
    n_max: usize,
    checkpoints: &[usize],
) -> Result<Vec<(usize, f64)>, MixingError> {
    validate_checkpoints(checkpoints, n_max)?;
    let mu = driver.mean();
    let mut acc = CompensatedSum::default();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for (k, x) in driver.iter().take(checkpoints.last().copied().unwrap_or(0)).enumerate() {
        acc.add(x - mu);
        let n = k + 1;
        if next.peek() == Some(&&n) {
            out.push((n, (acc.value() / n as f64).abs()));
            next.next();
        }
    }
    Ok(out)
}

/// Geometric checkpoints `start, start·10^(1/per_decade), … ≤ end`, deduplicated.
pub fn geometric_checkpoints(start: usize, end: usize, per_decade: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let v = (start as f64 * 10f64.powf(k as f64 / per_decade.max(1) as f64)).round() as usize;
        if v > end {
            break;
        }
        if out.last() != Some(&v) {
            out.push(v);
        }
        k += 1;
    }
    if out.last() != Some(&end) && end >= start {
        out.push(end);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_driver_has_zero_error() {
        let d = ScalarDriver::iid(Law::Constant { value: 0.7 }, 1).unwrap();
        let t = scalar_slln_trajectory(&d, 1000, &[1, 10, 1000]).unwrap();
        assert!(t.iter().all(|(_, v)| *v == 0.0));
        assert_eq!(t.iter().map(|p| p.0).collect::<Vec<_>>(), vec![1, 10, 1000]);
    }

    #[test]
    fn checkpoints() {
        assert_eq!(geometric_checkpoints(100, 1_000_000, 1), vec![100, 1000, 10_000, 100_000, 1_000_000]);
        assert!(scalar_slln_trajectory(
            &ScalarDriver::iid(Law::Constant { value: 0.0 }, 1).unwrap(),
            10,
            &[5, 3]
        )
        .is_err());
    }

    #[test]
    fn compensated_sum() {
        let mut s = CompensatedSum::default();
        for x in [1e16, 1.0, -1e16] {
            s.add(x);
        }
        assert_eq!(s.value(), 1.0);
    }
}
