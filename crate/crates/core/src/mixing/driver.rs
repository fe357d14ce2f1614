use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Normal, Uniform};
use serde::{Deserialize, Serialize};

use super::rng::CounterRng;
use super::MixingError;

/// Stream ids reserved by the drivers.
const STREAM_BASE: u64 = 1;
const STREAM_MARKOV: u64 = 2;

/// One-dimensional law with closed-form moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum Law {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
    /// `sd` is the standard deviation.
    Normal { mean: f64, sd: f64 },
    Discrete { values: Vec<f64>, probs: Vec<f64> },
}

impl Law {
    pub fn validate(&self) -> Result<(), MixingError> {
        let bad = |msg: &str| Err(MixingError::InvalidLaw(msg.to_string()));
        match self {
            Law::Constant { value } if !value.is_finite() => bad("constant must be finite"),
            Law::Uniform { low, high } if !(low.is_finite() && high.is_finite() && low <= high) => {
                bad("uniform needs finite low <= high")
            }
            Law::Normal { mean, sd } if !(mean.is_finite() && sd.is_finite() && *sd >= 0.0) => {
                bad("normal needs a finite mean and sd >= 0")
            }
            Law::Discrete { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return bad("discrete needs matching nonempty values and probs");
                }
                if values.iter().any(|v| !v.is_finite()) || probs.iter().any(|p| !(*p >= 0.0)) {
                    return bad("discrete values must be finite and probs nonnegative");
                }
                if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                    return bad("discrete probs must sum to 1");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Law::Constant { value } => *value,
            Law::Uniform { low, high } => 0.5 * (low + high),
            Law::Normal { mean, .. } => *mean,
            Law::Discrete { values, probs } => values.iter().zip(probs).map(|(v, p)| v * p).sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Law::Constant { .. } => 0.0,
            Law::Uniform { low, high } => (high - low).powi(2) / 12.0,
            Law::Normal { sd, .. } => sd * sd,
            Law::Discrete { values, probs } => {
                let m = self.mean();
                values.iter().zip(probs).map(|(v, p)| p * (v - m).powi(2)).sum()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Law::Constant { value } => *value,
            Law::Uniform { low, high } => {
                if low == high {
                    *low
                } else {
                    Uniform::new_inclusive(*low, *high).expect("validated").sample(rng)
                }
            }
            Law::Normal { mean, sd } => Normal::new(*mean, *sd).expect("validated").sample(rng),
            Law::Discrete { values, probs } => {
                values[WeightedIndex::new(probs).expect("validated").sample(rng)]
            }
        }
    }
}

/// Dependence structure of a scalar driver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriverFamily {
    Iid {
        law: Law,
    },
    /// `x_k = (ξ_k + … + ξ_{k+m}) / (m + 1)` over iid base draws `ξ`, so draws
    /// more than `m` apart are independent.
    MDependent {
        m: usize,
        law: Law,
    },
    /// Stationary chain started from `pi`, emitting `emissions[state]`.
    FiniteMarkov {
        p: Vec<Vec<f64>>,
        pi: Vec<f64>,
        emissions: Vec<f64>,
    },
    /// `odd` law at odd indices, `even` law at even ones; means must agree.
    Alternating {
        even: Law,
        odd: Law,
    },
}

/// Reproducible φ-mixing real sequence `x_1, x_2, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarDriver {
    family: DriverFamily,
    seed: u64,
}

/// Checks that `p` is row-stochastic and `pi` stationary for it.
pub fn validate_chain(p: &[Vec<f64>], pi: &[f64]) -> Result<(), MixingError> {
    let s = pi.len();
    if s == 0 || p.len() != s || p.iter().any(|row| row.len() != s) {
        return Err(MixingError::InvalidChain(format!(
            "transition matrix must be {s}x{s} and nonempty"
        )));
    }
    for (i, row) in p.iter().enumerate() {
        if row.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(MixingError::InvalidChain(format!("row {i} has a negative entry")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(MixingError::InvalidChain(format!("row {i} sums to {sum}")));
        }
    }
    if pi.iter().any(|x| !(*x >= 0.0)) || (pi.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(MixingError::InvalidChain("pi must be a probability vector".into()));
    }
    let worst = (0..s)
        .map(|j| ((0..s).map(|i| pi[i] * p[i][j]).sum::<f64>() - pi[j]).abs())
        .fold(0.0, f64::max);
    if worst > 1e-10 {
        return Err(MixingError::NotStationary(worst));
    }
    Ok(())
}

impl ScalarDriver {
    pub fn new(family: DriverFamily, seed: u64) -> Result<ScalarDriver, MixingError> {
        match &family {
            DriverFamily::Iid { law } | DriverFamily::MDependent { law, .. } => law.validate()?,
            DriverFamily::FiniteMarkov { p, pi, emissions } => {
                validate_chain(p, pi)?;
                if emissions.len() != pi.len() || emissions.iter().any(|e| !e.is_finite()) {
                    return Err(MixingError::InvalidChain(
                        "one finite emission per state is required".into(),
                    ));
                }
            }
            DriverFamily::Alternating { even, odd } => {
                even.validate()?;
                odd.validate()?;
                if (even.mean() - odd.mean()).abs() > 1e-12 {
                    return Err(MixingError::UnequalMeans(even.mean(), odd.mean()));
                }
            }
        }
        Ok(ScalarDriver { family, seed })
    }

    pub fn iid(law: Law, seed: u64) -> Result<ScalarDriver, MixingError> {
        ScalarDriver::new(DriverFamily::Iid { law }, seed)
    }

    /// Symmetric two-state chain `[[q, 1-q], [1-q, q]]` started uniformly.
    pub fn two_state_markov(stay: f64, emissions: [f64; 2], seed: u64) -> Result<ScalarDriver, MixingError> {
        ScalarDriver::new(
            DriverFamily::FiniteMarkov {
                p: vec![vec![stay, 1.0 - stay], vec![1.0 - stay, stay]],
                pi: vec![0.5, 0.5],
                emissions: emissions.to_vec(),
            },
            seed,
        )
    }

    pub fn family(&self) -> &DriverFamily {
        &self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> ScalarDriver {
        ScalarDriver {
            family: self.family.clone(),
            seed,
        }
    }

    /// `E[x_n]`, the same for every `n`.
    pub fn mean(&self) -> f64 {
        match &self.family {
            DriverFamily::Iid { law } | DriverFamily::MDependent { law, .. } => law.mean(),
            DriverFamily::FiniteMarkov { pi, emissions, .. } => {
                pi.iter().zip(emissions).map(|(p, e)| p * e).sum()
            }
            DriverFamily::Alternating { even, .. } => even.mean(),
        }
    }

    /// `Var[x_n]` (1-based `n`).
    pub fn variance_at(&self, n: usize) -> f64 {
        match &self.family {
            DriverFamily::Iid { law } => law.variance(),
            DriverFamily::MDependent { m, law } => law.variance() / (*m as f64 + 1.0),
            DriverFamily::FiniteMarkov { pi, emissions, .. } => {
                let mu = self.mean();
                pi.iter().zip(emissions).map(|(p, e)| p * (e - mu).powi(2)).sum()
            }
            DriverFamily::Alternating { even, odd } => {
                if n % 2 == 1 {
                    odd.variance()
                } else {
                    even.variance()
                }
            }
        }
    }

    /// Largest `|x_n|` the driver can emit, `None` when unbounded.
    pub fn bound(&self) -> Option<f64> {
        fn law_bound(l: &Law) -> Option<f64> {
            match l {
                Law::Constant { value } => Some(value.abs()),
                Law::Uniform { low, high } => Some(low.abs().max(high.abs())),
                Law::Normal { sd, mean } => (*sd == 0.0).then_some(mean.abs()),
                Law::Discrete { values, .. } => Some(values.iter().fold(0.0, |m, v| m.max(v.abs()))),
            }
        }
        match &self.family {
            DriverFamily::Iid { law } | DriverFamily::MDependent { law, .. } => law_bound(law),
            DriverFamily::FiniteMarkov { emissions, .. } => {
                Some(emissions.iter().fold(0.0, |m, v| m.max(v.abs())))
            }
            DriverFamily::Alternating { even, odd } => Some(law_bound(even)?.max(law_bound(odd)?)),
        }
    }

    /// Streaming iterator over `x_1, x_2, …`.
    pub fn iter(&self) -> DriverIter<'_> {
        let chain = match &self.family {
            DriverFamily::FiniteMarkov { p, pi, .. } => Some((
                WeightedIndex::new(pi).expect("validated"),
                p.iter()
                    .map(|row| WeightedIndex::new(row).expect("validated"))
                    .collect(),
            )),
            _ => None,
        };
        DriverIter {
            driver: self,
            next_index: 1,
            state: 0,
            chain,
        }
    }

    /// `x_1, …, x_n`.
    pub fn draw_sequence(&self, n: usize) -> Vec<f64> {
        self.iter().take(n).collect()
    }

    fn base_draw(&self, law: &Law, index: u64) -> f64 {
        law.sample(&mut CounterRng::new(self.seed, STREAM_BASE, index))
    }
}

type ChainSampler = (WeightedIndex<f64>, Vec<WeightedIndex<f64>>);

pub struct DriverIter<'a> {
    driver: &'a ScalarDriver,
    next_index: u64,
    state: usize,
    chain: Option<ChainSampler>,
}

impl Iterator for DriverIter<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let k = self.next_index;
        self.next_index += 1;
        let d = self.driver;
        Some(match &d.family {
            DriverFamily::Iid { law } => d.base_draw(law, k),
            DriverFamily::MDependent { m, law } => {
                let m = *m as u64;
                (k..=k + m).map(|b| d.base_draw(law, b)).sum::<f64>() / (m + 1) as f64
            }
            DriverFamily::FiniteMarkov { emissions, .. } => {
                let (init, rows) = self.chain.as_ref().expect("chain sampler");
                let mut rng = CounterRng::new(d.seed, STREAM_MARKOV, k);
                self.state = if k == 1 {
                    init.sample(&mut rng)
                } else {
                    rows[self.state].sample(&mut rng)
                };
                emissions[self.state]
            }
            DriverFamily::Alternating { even, odd } => {
                d.base_draw(if k % 2 == 1 { odd } else { even }, k)
            }
        })
    }
}
