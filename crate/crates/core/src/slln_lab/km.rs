use serde::Serialize;

use crate::convex_sets::{clip_to_window, excess_windowed, ConvexCell, GeometryError, SetUnion, Vector};
use crate::mixing::{validate_checkpoints, CompensatedSum};
use crate::randsets::{halo_epsilon, needle, ray_angle, SetProcessSpec};

use super::expansion::{exact_cell_expansion, halo_radius, zonotope_max};
use super::trajectory::lattice_distance_within;
use super::LabError;

/// A fixed sector inside every later `S_n`, with a point of it away from the
/// needle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeCertificate {
    pub k_plus: usize,
    pub k_minus: usize,
    /// `max(k_plus, k_minus)`: the certificate holds from here on.
    pub n0: usize,
    pub generator_plus: [f64; 2],
    pub generator_minus: [f64; 2],
    pub opening_angle: f64,
    pub witness_x: f64,
    pub witness_y: f64,
    pub witness_distance: f64,
    /// Last index at which the witness was checked to lie in `S_n`.
    pub verified_until: usize,
}

/// Extreme angles of `S_n = cone{v_1..v_n}` for a random-ray sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeTracking {
    pub seed: u64,
    pub n_max: usize,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub certificate: Option<ConeCertificate>,
}

impl ConeTracking {
    pub fn require_certificate(&self) -> Result<&ConeCertificate, LabError> {
        self.certificate.as_ref().ok_or(LabError::NoMixedSigns(self.n_max))
    }
}

/// Running `α_n^+ = max θ_k`, `α_n^- = min θ_k`.
struct Sector {
    plus: f64,
    minus: f64,
}

impl Sector {
    fn new() -> Sector {
        Sector {
            plus: f64::NEG_INFINITY,
            minus: f64::INFINITY,
        }
    }

    fn push(&mut self, theta: f64) {
        self.plus = self.plus.max(theta);
        self.minus = self.minus.min(theta);
    }

    fn contains_angle(&self, t: f64) -> bool {
        self.minus <= t && t <= self.plus
    }

    /// Distance from `(a, 0)`, `a ≥ 0`, to the sector; angles stay within one
    /// radian of the axis.
    fn axis_distance(&self, a: f64) -> f64 {
        if self.contains_angle(0.0) {
            0.0
        } else {
            let nearest = if self.minus > 0.0 { self.minus } else { self.plus };
            a * nearest.abs().sin()
        }
    }

    /// `sup_{x ∈ S ∩ [-R,R]^2} d(x, A)`: the largest `|y|` on an edge ray at
    /// the box boundary.
    fn excess(&self, r: f64) -> f64 {
        [self.plus, self.minus]
            .iter()
            .map(|a| r * a.sin().abs() / a.cos().abs().max(a.sin().abs()))
            .fold(0.0, f64::max)
    }
}

fn check_ray(spec: &SetProcessSpec) -> Result<(), LabError> {
    match spec {
        SetProcessSpec::RandomRay(_) => Ok(()),
        other => Err(LabError::WrongFamily {
            expected: "random_ray",
            got: other.name(),
        }),
    }
}

/// Tracks the sector spanned by the first `n_max` rays and, once both signs
/// have appeared, certifies a fixed sector that persists up to `n_max`.
pub fn cone_tracking(spec: &SetProcessSpec, n_max: usize, seed: u64) -> Result<ConeTracking, LabError> {
    check_ray(spec)?;
    if n_max < 2 {
        return Err(LabError::HorizonTooShort(n_max));
    }
    let signs = spec.scalar_draws(seed, n_max);
    let mut sector = Sector::new();
    let (mut k_plus, mut k_minus) = (None, None);
    let mut certificate: Option<ConeCertificate> = None;
    let mut persistent = true;
    for (k, s) in signs.iter().enumerate() {
        let n = k + 1;
        let theta = ray_angle(*s, n);
        sector.push(theta);
        if theta > 0.0 {
            k_plus.get_or_insert(n);
        } else {
            k_minus.get_or_insert(n);
        }
        if let Some(c) = certificate.as_mut() {
            let t = 1.0 / c.k_plus as f64;
            persistent &= sector.contains_angle(t) && sector.contains_angle(-1.0 / c.k_minus as f64);
            if persistent {
                c.verified_until = n;
            }
        } else if let (Some(kp), Some(km)) = (k_plus, k_minus) {
            let tp = 1.0 / kp as f64;
            let tm = 1.0 / km as f64;
            let w = Vector::from_angle(tp);
            certificate = Some(ConeCertificate {
                k_plus: kp,
                k_minus: km,
                n0: n,
                generator_plus: [tp.cos(), tp.sin()],
                generator_minus: [tm.cos(), -tm.sin()],
                opening_angle: tp + tm,
                witness_x: w.x(),
                witness_y: w.y(),
                witness_distance: tp.sin(),
                verified_until: n,
            });
        }
    }
    Ok(ConeTracking {
        seed,
        n_max,
        alpha_plus: sector.plus,
        alpha_minus: sector.minus,
        certificate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KmVerdict {
    ConvergesEvidence,
    FailsWithCertificate,
    /// Neither proxy settled below tolerance and no certificate exists.
    Inconclusive,
}

/// How a checkpoint's proxies were computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxyMethod {
    Cells,
    Parametric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KmOptions {
    pub probes: Vec<Vector>,
    pub window_radius: f64,
    pub n_max: usize,
    pub checkpoints: Vec<usize>,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest `n` at which cells are expanded exactly.
    pub exact_limit: usize,
}

impl KmOptions {
    pub fn new(probes: Vec<Vector>, window_radius: f64, checkpoints: Vec<usize>, seed: u64) -> KmOptions {
        KmOptions {
            probes,
            window_radius,
            n_max: checkpoints.last().copied().unwrap_or(1),
            checkpoints,
            seed,
            tolerance: DEFAULT_KM_TOLERANCE,
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

pub const DEFAULT_KM_TOLERANCE: f64 = 0.05;
pub const DEFAULT_EXACT_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmReport {
    pub family: &'static str,
    pub seed: u64,
    pub window_radius: f64,
    pub tolerance: f64,
    pub probes: Vec<Vec<f64>>,
    pub checkpoints: Vec<usize>,
    /// `probe_distances[j][i]`: distance from probe `j` to `S_n ∩ W` at checkpoint `i`.
    pub probe_distances: Vec<Vec<f64>>,
    pub s_liminf_proxy: Vec<f64>,
    pub excess: Vec<f64>,
    pub methods: Vec<ProxyMethod>,
    pub verdict: KmVerdict,
    pub certificate: Option<ConeCertificate>,
}

/// The set `D` the averages should approach: `co A`, or the needle.
fn limit_set(spec: &SetProcessSpec) -> Result<ConvexCell, LabError> {
    Ok(match spec {
        SetProcessSpec::Segment(d) | SetProcessSpec::TwoPoint(d) => ConvexCell::interval(d.mean(), d.mean() + 1.0)?,
        SetProcessSpec::RandomBall(d) => ConvexCell::ball(Vector::d2(0.0, 0.0), d.mean().max(0.0))?,
        SetProcessSpec::NeedleHalo | SetProcessSpec::RandomRay(_) => needle(),
    })
}

/// Per-checkpoint state of the parametric description of `S_n`.
enum Running {
    /// Running mean of the driver (radii clamped for balls).
    Mean(CompensatedSum),
    /// Halo generators `ε_i / i`.
    Halo(Vec<Vector>),
    Ray(Sector),
}

/// Distance-based Kuratowski–Mosco proxies along one sample path.
pub fn run_km_diagnostics(spec: &SetProcessSpec, opts: &KmOptions) -> Result<KmReport, LabError> {
    validate_checkpoints(&opts.checkpoints, opts.n_max)?;
    let d = limit_set(spec)?;
    let r = opts.window_radius;
    for p in &opts.probes {
        if p.dim() != spec.dim() || d.distance_to(p)? > 1e-12 {
            return Err(LabError::ProbeOutsideD(p.coords().to_vec()));
        }
    }
    let max_probe = opts.probes.iter().map(Vector::norm).fold(0.0, f64::max);
    if !(r > max_probe) || !r.is_finite() {
        return Err(LabError::WindowTooSmall { window: r, probe_norm: max_probe });
    }
    let d_union = SetUnion::single(d.clone());
    let draws = spec.scalar_draws(opts.seed, opts.n_max);
    let mut state = match spec {
        SetProcessSpec::NeedleHalo => Running::Halo(Vec::new()),
        SetProcessSpec::RandomRay(_) => Running::Ray(Sector::new()),
        _ => Running::Mean(CompensatedSum::default()),
    };
    let mut probe_distances = vec![Vec::with_capacity(opts.checkpoints.len()); opts.probes.len()];
    let (mut excess, mut methods) = (Vec::new(), Vec::new());
    let mut next = 0;
    for n in 1..=opts.n_max {
        match &mut state {
            Running::Mean(acc) => {
                let x = draws[n - 1];
                acc.add(if matches!(spec, SetProcessSpec::RandomBall(_)) { x.max(0.0) } else { x });
            }
            Running::Halo(g) => g.push(halo_epsilon(opts.seed, n) * (1.0 / n as f64)),
            Running::Ray(s) => s.push(ray_angle(draws[n - 1], n)),
        }
        if next >= opts.checkpoints.len() || opts.checkpoints[next] != n {
            continue;
        }
        next += 1;
        let cells = if n <= opts.exact_limit {
            cell_proxies(spec, n, opts, &d_union)?
        } else {
            None
        };
        let (dists, ex, method) = match cells {
            Some((dists, ex)) => (dists, ex, ProxyMethod::Cells),
            None => {
                let (dists, ex) = parametric_proxies(spec, &state, n, opts, &d)?;
                (dists, ex, ProxyMethod::Parametric)
            }
        };
        for (j, v) in dists.into_iter().enumerate() {
            probe_distances[j].push(v);
        }
        excess.push(ex);
        methods.push(method);
    }
    let s_liminf_proxy: Vec<f64> = (0..excess.len())
        .map(|i| probe_distances.iter().map(|p| p[i]).fold(0.0, f64::max))
        .collect();
    let certificate = match spec {
        SetProcessSpec::RandomRay(_) => {
            let mut c = cone_tracking(spec, opts.n_max.max(2), opts.seed)?.certificate;
            if let Some(c) = c.as_mut() {
                // Keep the witness inside the window.
                let s = (r / c.witness_x.abs().max(c.witness_y.abs())).min(1.0);
                c.witness_x *= s;
                c.witness_y *= s;
                c.witness_distance *= s;
            }
            c
        }
        _ => None,
    };
    let settled = |v: &[f64]| v.last().is_some_and(|x| *x <= opts.tolerance);
    let verdict = if certificate.is_some() {
        KmVerdict::FailsWithCertificate
    } else if settled(&s_liminf_proxy) && settled(&excess) {
        KmVerdict::ConvergesEvidence
    } else {
        KmVerdict::Inconclusive
    };
    Ok(KmReport {
        family: spec.name(),
        seed: opts.seed,
        window_radius: r,
        tolerance: opts.tolerance,
        probes: opts.probes.iter().map(|p| p.coords().to_vec()).collect(),
        checkpoints: opts.checkpoints.clone(),
        probe_distances,
        s_liminf_proxy,
        excess,
        methods,
        verdict,
        certificate,
    })
}

/// Proxies from the exact cell expansion; `None` when the cells cannot be
/// windowed exactly.
fn cell_proxies(
    spec: &SetProcessSpec,
    n: usize,
    opts: &KmOptions,
    d: &SetUnion,
) -> Result<Option<(Vec<f64>, f64)>, LabError> {
    let ex = exact_cell_expansion(spec, n, opts.seed)?;
    let windowed = match clip_to_window(&ex.sets, opts.window_radius) {
        Ok(Some(w)) => w,
        Ok(None) => return Err(GeometryError::EmptyAfterWindow.into()),
        Err(GeometryError::Unsupported(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let dists = opts
        .probes
        .iter()
        .map(|p| windowed.distance_to(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some((dists, excess_windowed(&ex.sets, d, opts.window_radius)?)))
}

fn parametric_proxies(
    spec: &SetProcessSpec,
    state: &Running,
    n: usize,
    opts: &KmOptions,
    d: &ConvexCell,
) -> Result<(Vec<f64>, f64), LabError> {
    let r = opts.window_radius;
    let nf = n as f64;
    Ok(match (spec, state) {
        (SetProcessSpec::NeedleHalo, Running::Halo(gens)) => {
            // Every offset has norm at most r_n; keep them inside the window.
            if halo_radius(n) >= r {
                return Err(GeometryError::Unsupported("halo offsets reach the window boundary").into());
            }
            // A ⊂ S_n, so probes on A are at distance 0; A + w contributes
            // d(w, A) to the excess.
            let ex = zonotope_max(gens, |w| d.distance_to(&(*w * (1.0 / nf))).unwrap_or(f64::INFINITY));
            (vec![0.0; opts.probes.len()], ex)
        }
        (SetProcessSpec::RandomRay(_), Running::Ray(s)) => {
            (opts.probes.iter().map(|p| s.axis_distance(p.x())).collect(), s.excess(r))
        }
        (SetProcessSpec::Segment(drv), Running::Mean(acc)) => {
            let m = acc.value() / nf;
            let (lo, hi) = (m.max(-r), (m + 1.0).min(r));
            if lo > hi {
                return Err(GeometryError::EmptyAfterWindow.into());
            }
            let mu = drv.mean();
            let gap = |y: f64| (mu - y).max(y - mu - 1.0).max(0.0);
            let dists = opts.probes.iter().map(|p| (lo - p.x()).max(p.x() - hi).max(0.0)).collect();
            (dists, gap(lo).max(gap(hi)))
        }
        (SetProcessSpec::TwoPoint(drv), Running::Mean(acc)) => {
            let m = acc.value() / nf;
            let i_lo = ((-r - m) * nf).ceil().max(0.0);
            let i_hi = ((r - m) * nf).floor().min(nf);
            if i_lo > i_hi {
                return Err(GeometryError::EmptyAfterWindow.into());
            }
            let (i_lo, i_hi) = (i_lo as usize, i_hi as usize);
            let mu = drv.mean();
            let gap = |y: f64| (mu - y).max(y - mu - 1.0).max(0.0);
            let ex = gap(m + i_lo as f64 / nf).max(gap(m + i_hi as f64 / nf));
            let dists = opts
                .probes
                .iter()
                .map(|p| lattice_distance_within(m, n, p.x(), i_lo, i_hi))
                .collect();
            (dists, ex)
        }
        (SetProcessSpec::RandomBall(drv), Running::Mean(acc)) => {
            let m = acc.value() / nf;
            let mu = drv.mean().max(0.0);
            let farthest = m.min(std::f64::consts::SQRT_2 * r);
            let dists = opts.probes.iter().map(|p| (p.norm() - m).max(0.0)).collect();
            (dists, (farthest - mu).max(0.0))
        }
        _ => unreachable!("state matches the family"),
    })
}
