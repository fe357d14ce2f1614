//! Experiments on averages of random sets: Hausdorff trajectories, exact
//! expansions, containment certificates and Kuratowski–Mosco proxies.

mod conditions;
mod expansion;
mod km;
mod trajectory;

use thiserror::Error;

use crate::convex_sets::GeometryError;
use crate::mixing::MixingError;
use crate::randsets::RandsetError;

pub use conditions::{
    driver_phi_profile, theorem_conditions_report, ConditionsReport, ConditionsVerdict,
    DirectionSeries, TargetSeries,
};
pub use expansion::{
    exact_cell_expansion, exact_cell_expansion_with_budget, halo_certificate, halo_radius,
    zonotope_max, ExactExpansion, HaloCertificate,
};
pub use km::{
    cone_tracking, run_km_diagnostics, ConeCertificate, ConeTracking, KmOptions, KmReport,
    KmVerdict, ProxyMethod, DEFAULT_EXACT_LIMIT, DEFAULT_KM_TOLERANCE,
};
pub use trajectory::{
    lattice_distance, lattice_distance_within, lattice_to_interval, lattice_to_pair,
    run_hausdorff_slln, trajectories_to_csv, two_point_lattice, Target, Trajectory,
    METRIC_HAUSDORFF, METRIC_MEAN_ERROR,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mixing(#[from] MixingError),
    #[error(transparent)]
    Randset(#[from] RandsetError),
    #[error("family {0} is unbounded; use the Kuratowski-Mosco diagnostics")]
    UnboundedFamily(&'static str),
    #[error("expected family {expected}, got {got}")]
    WrongFamily { expected: &'static str, got: &'static str },
    #[error("no mixed signs among the first {0} rays")]
    NoMixedSigns(usize),
    #[error("horizon {0} is too short")]
    HorizonTooShort(usize),
    #[error("indices start at 1")]
    ZeroIndex,
    #[error("probe {0:?} is not in the limit set D")]
    ProbeOutsideD(Vec<f64>),
    #[error("window radius {window} must exceed the largest probe norm {probe_norm}")]
    WindowTooSmall { window: f64, probe_norm: f64 },
    #[error("unexpected cell shape in the expansion")]
    UnexpectedCell,
}

impl LabError {
    /// Stable variant name for reports and messages.
    pub fn name(&self) -> &'static str {
        match self {
            LabError::Geometry(_) => "GeometryError",
            LabError::Mixing(_) => "MixingError",
            LabError::Randset(_) => "RandsetError",
            LabError::UnboundedFamily(_) => "UnboundedFamily",
            LabError::WrongFamily { .. } => "WrongFamily",
            LabError::NoMixedSigns(_) => "NoMixedSigns",
            LabError::HorizonTooShort(_) => "HorizonTooShort",
            LabError::ZeroIndex => "ZeroIndex",
            LabError::ProbeOutsideD(_) => "ProbeOutsideD",
            LabError::WindowTooSmall { .. } => "WindowTooSmall",
            LabError::UnexpectedCell => "UnexpectedCell",
        }
    }
}
