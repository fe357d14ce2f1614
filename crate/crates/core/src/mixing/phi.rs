use nalgebra::DMatrix;
use serde::Serialize;

use super::driver::validate_chain;
use super::MixingError;

fn matrix(p: &[Vec<f64>]) -> DMatrix<f64> {
    let s = p.len();
    DMatrix::from_fn(s, s, |i, j| p[i][j])
}

/// `max_i (1/2) Σ_j |P^n(i,j) - π_j|` over states with `π_i > 0`.
fn tv_from_stationary(pn: &DMatrix<f64>, pi: &[f64]) -> f64 {
    (0..pi.len())
        .filter(|&i| pi[i] > 0.0)
        .map(|i| 0.5 * (0..pi.len()).map(|j| (pn[(i, j)] - pi[j]).abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .min(1.0)
}

/// Exact `φ(n)` of a stationary finite Markov chain.
pub fn phi_exact_markov(p: &[Vec<f64>], pi: &[f64], n: usize) -> Result<f64, MixingError> {
    validate_chain(p, pi)?;
    if n == 0 {
        return Err(MixingError::ZeroGap);
    }
    let m = matrix(p);
    let mut pn = m.clone();
    for _ in 1..n {
        pn = &pn * &m;
    }
    Ok(tv_from_stationary(&pn, pi))
}

/// Largest event count per side accepted by [`phi_brute_force`].
pub const MAX_EVENTS: usize = 4096;

/// Enumerates every event pair `A ∈ σ(X_1..X_past)`,
/// `B ∈ σ(X_{past+n}..X_{past+n+future-1})` of the stationary chain and
/// returns `max |P(B|A) - P(B)|`. A lower bound for `φ(n)`.
///
/// Each side may have at most [`MAX_EVENTS`] events, i.e. `2^(s^len) ≤ 4096`.
pub fn phi_brute_force(
    p: &[Vec<f64>],
    pi: &[f64],
    n: usize,
    past_len: usize,
    future_len: usize,
) -> Result<f64, MixingError> {
    validate_chain(p, pi)?;
    if n == 0 {
        return Err(MixingError::ZeroGap);
    }
    if past_len == 0 || future_len == 0 {
        return Err(MixingError::EmptyHorizon);
    }
    let s = pi.len();
    let outcomes = |len: usize| {
        s.checked_pow(len as u32)
            .filter(|&k| k < usize::BITS as usize && (1usize << k) <= MAX_EVENTS)
            .ok_or(MixingError::TooManyEvents { states: s, len })
    };
    let a_count = outcomes(past_len)?;
    let b_count = outcomes(future_len)?;

    let digits = |mut t: usize, len: usize| {
        let mut d = vec![0; len];
        for slot in d.iter_mut().rev() {
            *slot = t % s;
            t /= s;
        }
        d
    };
    let path_prob = |d: &[usize]| d.windows(2).map(|w| p[w[0]][w[1]]).product::<f64>();
    let m = matrix(p);
    let mut pn = m.clone();
    for _ in 1..n {
        pn = &pn * &m;
    }
    // joint[x][y] = P(past = x, future = y).
    let past: Vec<Vec<usize>> = (0..a_count).map(|t| digits(t, past_len)).collect();
    let future: Vec<Vec<usize>> = (0..b_count).map(|t| digits(t, future_len)).collect();
    let mut joint = vec![vec![0.0; b_count]; a_count];
    for (x, dx) in past.iter().enumerate() {
        let px = pi[dx[0]] * path_prob(dx);
        for (y, dy) in future.iter().enumerate() {
            joint[x][y] = px * pn[(dx[past_len - 1], dy[0])] * path_prob(dy);
        }
    }
    let marg_a: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let marg_b: Vec<f64> = (0..b_count).map(|y| joint.iter().map(|r| r[y]).sum()).collect();

    // Gray-code walks over both power sets.
    let mut in_a = vec![false; a_count];
    let mut pa = 0.0;
    let mut q = vec![0.0; b_count];
    let mut best = 0.0_f64;
    for k in 1..(1usize << a_count) {
        let t = k.trailing_zeros() as usize;
        let sign = if in_a[t] { -1.0 } else { 1.0 };
        in_a[t] = !in_a[t];
        pa += sign * marg_a[t];
        for y in 0..b_count {
            q[y] += sign * joint[t][y];
        }
        if pa <= 1e-300 {
            continue;
        }
        let mut in_b = vec![false; b_count];
        let (mut pb, mut pab) = (0.0, 0.0);
        for j in 1..(1usize << b_count) {
            let u = j.trailing_zeros() as usize;
            let sg = if in_b[u] { -1.0 } else { 1.0 };
            in_b[u] = !in_b[u];
            pb += sg * marg_b[u];
            pab += sg * q[u];
            best = best.max((pab / pa - pb).abs());
        }
    }
    Ok(best.min(1.0))
}

/// The window chain of an m-dependent moving average over a discrete base
/// law: states are tuples `(ξ_k, …, ξ_{k+m})`, emissions their means.
/// Returns `(P, π, emissions)`.
pub fn m_dependent_window_chain(
    m: usize,
    values: &[f64],
    probs: &[f64],
) -> Result<(Vec<Vec<f64>>, Vec<f64>, Vec<f64>), MixingError> {
    let s = values.len();
    if s == 0 || probs.len() != s {
        return Err(MixingError::InvalidLaw("window chain needs a discrete law".into()));
    }
    let count = s
        .checked_pow(m as u32 + 1)
        .filter(|&c| c <= 4096)
        .ok_or(MixingError::TooManyEvents { states: s, len: m + 1 })?;
    let digits = |mut t: usize| {
        let mut d = vec![0; m + 1];
        for slot in d.iter_mut().rev() {
            *slot = t % s;
            t /= s;
        }
        d
    };
    let mut p = vec![vec![0.0; count]; count];
    let mut pi = vec![0.0; count];
    let mut emissions = vec![0.0; count];
    for t in 0..count {
        let d = digits(t);
        pi[t] = d.iter().map(|&k| probs[k]).product();
        emissions[t] = d.iter().map(|&k| values[k]).sum::<f64>() / (m + 1) as f64;
        for (b, pb) in probs.iter().enumerate() {
            // Shift left, append b.
            let next = (t % (count / s)) * s + b;
            p[t][next] += pb;
        }
    }
    Ok((p, pi, emissions))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMethod {
    ExactMarkov,
    BruteForce,
    IdenticallyZero,
}

/// `φ(1..=N)` together with `Σ φ(n)^{1/2}`. Values are clamped to `[0, 1]` and
/// made nonincreasing on construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiProfile {
    values: Vec<f64>,
    sqrt_partial_sum: f64,
    method: PhiMethod,
}

impl PhiProfile {
    /// Builds a profile from supplied values. Exact values are smoothed by a
    /// running minimum; lower bounds by a suffix maximum, which keeps them
    /// lower bounds of a nonincreasing sequence.
    pub fn from_values(values: Vec<f64>, method: PhiMethod) -> Result<PhiProfile, MixingError> {
        if values.is_empty() {
            return Err(MixingError::ProfileTooShort(0));
        }
        if values.iter().any(|v| !(*v >= -1e-12 && *v <= 1.0 + 1e-12)) {
            return Err(MixingError::PhiOutOfRange);
        }
        let mut values: Vec<f64> = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        match method {
            PhiMethod::BruteForce => {
                for k in (0..values.len() - 1).rev() {
                    values[k] = values[k].max(values[k + 1]);
                }
            }
            _ => {
                for k in 1..values.len() {
                    values[k] = values[k].min(values[k - 1]);
                }
            }
        }
        let sqrt_partial_sum = values.iter().map(|v| v.sqrt()).sum();
        Ok(PhiProfile {
            values,
            sqrt_partial_sum,
            method,
        })
    }

    pub fn exact_markov(p: &[Vec<f64>], pi: &[f64], n_max: usize) -> Result<PhiProfile, MixingError> {
        validate_chain(p, pi)?;
        let m = matrix(p);
        let mut pn = m.clone();
        let mut values = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            values.push(tv_from_stationary(&pn, pi));
            pn = &pn * &m;
        }
        PhiProfile::from_values(values, PhiMethod::ExactMarkov)
    }

    pub fn brute_force(
        p: &[Vec<f64>],
        pi: &[f64],
        n_max: usize,
        past_len: usize,
        future_len: usize,
    ) -> Result<PhiProfile, MixingError> {
        let values = (1..=n_max)
            .map(|n| phi_brute_force(p, pi, n, past_len, future_len))
            .collect::<Result<Vec<f64>, MixingError>>()?;
        PhiProfile::from_values(values, PhiMethod::BruteForce)
    }

    /// Profile of an m-dependent (m = 0: independent) sequence: zero beyond
    /// lag `m`, and the trivial bound 1 up to it.
    pub fn identically_zero(m: usize, n_max: usize) -> Result<PhiProfile, MixingError> {
        let values = (1..=n_max).map(|n| if n <= m { 1.0 } else { 0.0 }).collect();
        PhiProfile::from_values(values, PhiMethod::IdenticallyZero)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn method(&self) -> PhiMethod {
        self.method
    }

    pub fn sqrt_partial_sum(&self) -> f64 {
        self.sqrt_partial_sum
    }

    /// `φ(n)`, with `φ(0) = 1`; `None` past the horizon.
    pub fn phi(&self, n: usize) -> Option<f64> {
        if n == 0 {
            Some(1.0)
        } else {
            self.values.get(n - 1).copied()
        }
    }

    /// `Σ_{b ≥ 1} φ(q (b - 1))^{1/2}` over the computed horizon.
    pub fn subsequence_sqrt_sum(&self, q: usize) -> f64 {
        assert!(q > 0, "stride must be positive");
        (0..)
            .map(|b| self.phi(q * b))
            .take_while(Option::is_some)
            .map(|v| v.expect("checked").sqrt())
            .sum()
    }

    /// CSV with header `n,phi,phi_sqrt_partial_sum`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,phi,phi_sqrt_partial_sum\n");
        let mut acc = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            acc += v.sqrt();
            out.push_str(&format!("{},{:e},{:e}\n", k + 1, v, acc));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionIVerdict {
    SummableEvidence,
    Diverging,
    ExactZero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionIReport {
    pub partial_sum: f64,
    pub verdict: ConditionIVerdict,
    /// Fitted geometric ratio of the tail, when one was fitted.
    pub ratio: Option<f64>,
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// φ values at or below this are treated as numerically zero by the rate fit.
pub const PHI_NOISE_FLOOR: f64 = 1e-13;

/// Evidence on `Σ φ(n)^{1/2} < ∞`.
///
/// A tail of exact zeros gives `ExactZero`. Otherwise `log φ` is regressed
/// on `n` over the second half of the values above [`PHI_NOISE_FLOOR`]; a
/// geometric envelope needs a ratio below one and matching slopes on the two
/// quarters of that half.
pub fn condition_i_report(profile: &PhiProfile) -> Result<ConditionIReport, MixingError> {
    let v = profile.values();
    if v.len() < 10 {
        return Err(MixingError::ProfileTooShort(v.len()));
    }
    let partial_sum = profile.sqrt_partial_sum();
    let tail = &v[v.len() / 2..];
    if profile.method() == PhiMethod::IdenticallyZero || tail.iter().all(|x| *x == 0.0) {
        return Ok(ConditionIReport {
            partial_sum,
            verdict: ConditionIVerdict::ExactZero,
            ratio: None,
        });
    }
    // Values near rounding noise carry no rate information.
    let above: Vec<(f64, f64)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| **x > PHI_NOISE_FLOOR)
        .map(|(k, x)| ((k + 1) as f64, x.ln()))
        .collect();
    let pts = &above[above.len() / 2..];
    if pts.len() < 4 {
        // Almost everything sits at the noise floor.
        return Ok(ConditionIReport {
            partial_sum,
            verdict: ConditionIVerdict::SummableEvidence,
            ratio: Some(0.0),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let b = slope(&xs, &ys);
    let h = xs.len() / 2;
    let (b1, b2) = (slope(&xs[..h], &ys[..h]), slope(&xs[h..], &ys[h..]));
    let ratio = b.exp();
    let steady = b1 < 0.0 && b2 < 0.0 && (b1 - b2).abs() <= 0.25 * b1.abs().max(b2.abs());
    let verdict = if ratio < 1.0 && steady {
        ConditionIVerdict::SummableEvidence
    } else {
        ConditionIVerdict::Diverging
    };
    Ok(ConditionIReport {
        partial_sum,
        verdict,
        ratio: Some(ratio),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sticky() -> (Vec<Vec<f64>>, Vec<f64>) {
        (vec![vec![0.9, 0.1], vec![0.1, 0.9]], vec![0.5, 0.5])
    }

    #[test]
    fn frozen_chain_is_one_half() {
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let pi = vec![0.5, 0.5];
        assert_eq!(phi_exact_markov(&id, &pi, 1).unwrap(), 0.5);
        assert!((phi_brute_force(&id, &pi, 1, 1, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn iid_chain_is_zero() {
        let p = vec![vec![0.3, 0.7], vec![0.3, 0.7]];
        let pi = vec![0.3, 0.7];
        for n in 1..5 {
            assert!(phi_exact_markov(&p, &pi, n).unwrap() < 1e-15);
            assert!(phi_brute_force(&p, &pi, n, 2, 2).unwrap() < 1e-15);
        }
    }

    #[test]
    fn sticky_chain_closed_form() {
        let (p, pi) = sticky();
        for n in 1..=6 {
            let exact = phi_exact_markov(&p, &pi, n).unwrap();
            assert!((exact - 0.5 * 0.8f64.powi(n as i32)).abs() < 1e-14);
            let bf = phi_brute_force(&p, &pi, n, 1, 1).unwrap();
            assert!((exact - bf).abs() < 1e-12);
        }
    }

    #[test]
    fn event_cap() {
        let (p, pi) = sticky();
        assert!(phi_brute_force(&p, &pi, 1, 3, 3).is_ok());
        assert!(matches!(
            phi_brute_force(&p, &pi, 1, 4, 1),
            Err(MixingError::TooManyEvents { .. })
        ));
    }

    #[test]
    fn window_chain_decorrelates_after_m() {
        let (p, pi, _) = m_dependent_window_chain(1, &[-1.0, 1.0], &[0.5, 0.5]).unwrap();
        assert!(phi_brute_force(&p, &pi, 1, 1, 1).unwrap() > 0.1);
        assert!(phi_brute_force(&p, &pi, 2, 1, 1).unwrap() < 1e-15);
    }

    #[test]
    fn verdicts() {
        let geo = PhiProfile::from_values((1..=60).map(|n| 0.8f64.powi(n)).collect(), PhiMethod::ExactMarkov).unwrap();
        let r = condition_i_report(&geo).unwrap();
        assert_eq!(r.verdict, ConditionIVerdict::SummableEvidence);
        assert!((r.ratio.unwrap() - 0.8).abs() < 1e-9);
        let poly = PhiProfile::from_values((1..=60).map(|n| 1.0 / (n * n) as f64).collect(), PhiMethod::ExactMarkov).unwrap();
        assert_eq!(condition_i_report(&poly).unwrap().verdict, ConditionIVerdict::Diverging);
        let zero = PhiProfile::identically_zero(0, 20).unwrap();
        let r = condition_i_report(&zero).unwrap();
        assert_eq!((r.verdict, r.partial_sum), (ConditionIVerdict::ExactZero, 0.0));
    }

    #[test]
    fn csv_header() {
        let prof = PhiProfile::identically_zero(1, 3).unwrap();
        assert_eq!(prof.to_csv(), "n,phi,phi_sqrt_partial_sum\n1,1e0,1e0\n2,0e0,1e0\n3,0e0,1e0\n");
    }
}
