use serde::Serialize;

use crate::convex_sets::{recession_cone, Cone, SetUnion, Vector, DEFAULT_CELL_BUDGET};
use crate::mixing::CompensatedSum;
use crate::randsets::{needle, SetProcessSpec};

use super::LabError;

/// `S_n = (1/n)(X_1 + … + X_n)` expanded cell by cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactExpansion {
    pub n: usize,
    pub sets: SetUnion,
    /// Cells of the full distributive expansion, `Π |cells(X_k)|`.
    pub cells_before_dedup: usize,
}

pub fn exact_cell_expansion(spec: &SetProcessSpec, n: usize, seed: u64) -> Result<ExactExpansion, LabError> {
    exact_cell_expansion_with_budget(spec, n, seed, DEFAULT_CELL_BUDGET)
}

pub fn exact_cell_expansion_with_budget(
    spec: &SetProcessSpec,
    n: usize,
    seed: u64,
    budget: usize,
) -> Result<ExactExpansion, LabError> {
    if n == 0 {
        return Err(LabError::ZeroIndex);
    }
    let xs = spec.sets(seed, n);
    let raw = xs.iter().try_fold(1usize, |acc, x| {
        let next = acc.saturating_mul(x.len());
        if next > budget {
            Err(crate::convex_sets::GeometryError::CellBudgetExceeded { needed: next, budget })
        } else {
            Ok(next)
        }
    })?;
    let mut iter = xs.into_iter();
    let mut sum = iter.next().expect("n >= 1");
    for x in iter {
        sum = sum.minkowski_sum_counted(&x, budget)?.0;
    }
    Ok(ExactExpansion {
        n,
        sets: sum.scale(1.0 / n as f64)?,
        cells_before_dedup: raw,
    })
}

/// `r_n = (1/n) Σ_{i ≤ n} 1/i`.
pub fn halo_radius(n: usize) -> f64 {
    let mut s = CompensatedSum::default();
    for i in 1..=n {
        s.add(1.0 / i as f64);
    }
    s.value() / n as f64
}

/// Containment checks for the needle-halo average `S_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaloCertificate {
    pub n: usize,
    pub seed: u64,
    #[serde(rename = "A_subset_Sn")]
    pub a_subset_sn: bool,
    #[serde(rename = "Sn_in_halo")]
    pub sn_in_halo: bool,
    pub r_n: f64,
    /// Largest distance from a cell of `S_n` to `A`.
    pub max_offset: f64,
    pub cells: usize,
    pub cells_before_dedup: usize,
    /// Whether the recession cone of `S_n` is `cone{(1,0)}`.
    pub recession_is_needle: bool,
}

/// Relative slack for the halo containment, covering the rounding of `Z_I / n`.
const HALO_GUARD: f64 = 1e-12;

pub fn halo_certificate(spec: &SetProcessSpec, n: usize, seed: u64) -> Result<HaloCertificate, LabError> {
    if !matches!(spec, SetProcessSpec::NeedleHalo) {
        return Err(LabError::WrongFamily {
            expected: "needle_halo",
            got: spec.name(),
        });
    }
    let ex = exact_cell_expansion(spec, n, seed)?;
    let a = needle();
    let r_n = halo_radius(n);
    let mut max_offset = 0.0_f64;
    let mut in_halo = true;
    for cell in ex.sets.cells() {
        let (dist, ok) = if let Some(p) = cell.as_point() {
            let d = a.distance_to(&p)?;
            (d, d <= r_n * (1.0 + HALO_GUARD))
        } else if cell.cone().approx_eq(a.cone(), 0.0) {
            // A + w with w the translated apex.
            let w = cell.vertices().map(|v| v[0]).ok_or(LabError::UnexpectedCell)?;
            let d = a.distance_to(&w)?;
            (d, cell.vertices().map(|v| v.len()) == Some(1) && w.norm() <= r_n * (1.0 + HALO_GUARD))
        } else {
            return Err(LabError::UnexpectedCell);
        };
        max_offset = max_offset.max(dist);
        in_halo &= ok;
    }
    let needle_cone = Cone::ray(Vector::d2(1.0, 0.0))?;
    let recession_is_needle = recession_cone(&ex.sets)
        .cone()
        .is_some_and(|c| c.approx_eq(&needle_cone, 0.0));
    Ok(HaloCertificate {
        n,
        seed,
        a_subset_sn: ex.sets.cells().contains(&a),
        sn_in_halo: in_halo,
        r_n,
        max_offset,
        cells: ex.sets.len(),
        cells_before_dedup: ex.cells_before_dedup,
        recession_is_needle,
    })
}

/// `max f(Z_I)` over all subset sums `Z_I = Σ_{i ∈ I} g_i` of planar
/// generators, for convex `f`.
///
/// A convex function peaks over the subset sums at a vertex of the zonotope
/// `Σ [0, g_i]`; the vertices are swept in angular order, toggling one
/// generator per critical direction.
pub fn zonotope_max<F: Fn(&Vector) -> f64>(gens: &[Vector], f: F) -> f64 {
    let gens: Vec<Vector> = gens.iter().copied().filter(|g| !g.is_zero()).collect();
    let mut best = f(&Vector::d2(0.0, 0.0));
    if gens.is_empty() {
        return best;
    }
    let tau = std::f64::consts::TAU;
    // (angle, generator index, entering?)
    let mut events: Vec<(f64, usize, bool)> = Vec::with_capacity(2 * gens.len());
    for (i, g) in gens.iter().enumerate() {
        let a = g.angle();
        events.push(((a - 0.5 * std::f64::consts::PI).rem_euclid(tau), i, true));
        events.push(((a + 0.5 * std::f64::consts::PI).rem_euclid(tau), i, false));
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let start = 0.5 * (events[events.len() - 1].0 - tau + events[0].0);
    let u = Vector::from_angle(start);
    let mut active: Vec<bool> = gens.iter().map(|g| g.dot(&u) > 0.0).collect();
    let mut sum = gens
        .iter()
        .zip(&active)
        .filter(|(_, a)| **a)
        .fold(Vector::d2(0.0, 0.0), |s, (g, _)| s + *g);
    best = best.max(f(&sum));
    for (_, i, enter) in events {
        if active[i] != enter {
            active[i] = enter;
            sum = if enter { sum + gens[i] } else { sum - gens[i] };
            best = best.max(f(&sum));
        }
    }
    best
}
