//! Set-valued strong laws of large numbers for φ-mixing sequences, at desk scale.

pub mod convex_sets;
pub mod mixing;
pub mod randsets;
pub mod slln_lab;

pub mod cli;
