//! Certification of the error-correction conditions, constant-excitation
//! immunity, fidelity, thresholds and rate comparisons.

pub mod ce;
pub mod fidelity;
pub mod overlap;
pub mod rates;
pub mod threshold;
pub mod trajectories;

pub use ce::{ce_certify, compare_cc_ad, CcComparison, CeReport};
pub use fidelity::{exact_fidelity, fidelity_sweep, fit_infidelity, probes, FidelityConfig, FidelityRecord, InfidelityFit};
pub use overlap::{overlap_matrix, residual_scaling, OverlapReport, ScalingFit};
pub use rates::{family_rows, rate_tables, RateRow};
pub use threshold::{threshold_rounds, ThresholdReport};
pub use trajectories::{sample_fidelity, TrajectoryEstimate};
