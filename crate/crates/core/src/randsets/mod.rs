//! Set-valued sequence families driven by scalar φ-mixing drivers.

mod analysis;
mod family;

use thiserror::Error;

pub use analysis::{
    condition_ii_series, condition_iii_series, expectation, expectation_at, ray_selection,
    selection, selection_with, series_csv, AumannExpectation, ConditionIII, SelectionRule,
    SeriesReport,
};
pub use family::{
    halo_epsilon, halo_point, needle, ray_angle, sample_set, support_process, SetProcessSpec,
    FAMILY_NAMES, HALO_POSITIVE_PART_MEAN,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandsetError {
    #[error("the driver has no closed-form moments for this family")]
    UnknownMoments,
    #[error("target is not in the family's expectation A")]
    TargetNotInA,
    #[error("no selection rule of this kind for the family")]
    SelectionUnavailable,
    #[error("random-ray sign driver must emit -1/+1 with mean 0")]
    InvalidSignDriver,
}
