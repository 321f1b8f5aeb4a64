use serde::Serialize;

use crate::channels::{apply_cc, composite_cc_ad};
use crate::code::{codewords, excitation_number, CodeSpec, Excitation};
use crate::error::Result;
use crate::qla::{inner, StateVector};

use super::overlap::{residual_scaling, ScalingFit, DEFAULT_GRID};

/// Tolerance on eigenstate and common-phase checks.
pub const CE_TOL: f64 = 1e-10;

pub const DEFAULT_DT: [f64; 5] = [0.1, 0.7, 1.3, 2.9, std::f64::consts::PI];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRow {
    pub g: f64,
    pub dt: f64,
    /// `arg <c_i| U_CC |c_i>` per codeword.
    pub phases: Vec<f64>,
    /// `max_i ||<c_i|U|c_i>| - 1|`.
    pub modulus_defect: f64,
    /// Largest phase difference from codeword 0, wrapped to `(-pi, pi]`.
    pub phase_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CeReport {
    pub spec: CodeSpec,
    pub excitations: Vec<Excitation>,
    pub rows: Vec<PhaseRow>,
    pub modulus_defect: f64,
    pub phase_spread: f64,
    pub scaling: ScalingFit,
    pub pass: bool,
}

fn wrap(x: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = x.rem_euclid(t);
    if r > std::f64::consts::PI {
        r - t
    } else {
        r
    }
}

/// Checks that every codeword is a `U_CC` eigenstate with one shared phase
/// for each `g * dt`, and that the AQEC residual keeps exponent `w + 1`.
pub fn ce_certify(spec: &CodeSpec, g: f64, dts: &[f64]) -> Result<CeReport> {
    let words = codewords(spec)?;
    let excitations: Vec<Excitation> = words.iter().map(excitation_number).collect();
    let mut rows = Vec::with_capacity(dts.len());
    for &dt in dts {
        let overlaps = words
            .iter()
            .map(|c| inner(c, &apply_cc(c, g, dt)))
            .collect::<Result<Vec<_>>>()?;
        let phases: Vec<f64> = overlaps.iter().map(|z| z.arg()).collect();
        let modulus_defect = overlaps
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        let phase_spread = phases
            .iter()
            .map(|p| wrap(p - phases[0]).abs())
            .fold(0.0, f64::max);
        rows.push(PhaseRow {
            g,
            dt,
            phases,
            modulus_defect,
            phase_spread,
        });
    }
    let modulus_defect = rows.iter().map(|r| r.modulus_defect).fold(0.0, f64::max);
    let phase_spread = rows.iter().map(|r| r.phase_spread).fold(0.0, f64::max);
    let scaling = residual_scaling(spec, &DEFAULT_GRID)?;
    let constant = excitations
        .iter()
        .all(|e| matches!(e, Excitation::Constant(_)));
    let pass = constant
        && modulus_defect <= CE_TOL
        && phase_spread <= CE_TOL
        && scaling.meets((spec.w + 1) as f64, 0.15);
    Ok(CeReport {
        spec: *spec,
        excitations,
        rows,
        modulus_defect,
        phase_spread,
        scaling,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcComparison {
    pub gamma: f64,
    pub g: f64,
    pub dt: f64,
    /// `arg <psi| U_CC |psi>`.
    pub global_phase: f64,
    /// `max_a || A_a U psi - e^{i phi} A_a psi ||_inf`.
    pub max_branch_diff: f64,
    pub n_branches: usize,
}

/// Compares the composite CC-AD ensemble against AD alone on `state`.
pub fn compare_cc_ad(
    state: &StateVector,
    gamma: f64,
    g: f64,
    dt: f64,
    cutoff: Option<usize>,
) -> Result<CcComparison> {
    let phase = inner(state, &apply_cc(state, g, dt))?;
    let global_phase = phase.arg();
    let unit = crate::qla::C64::from_polar(1.0, global_phase);
    let composite = composite_cc_ad(state, gamma, g, dt, cutoff)?;
    let plain = composite_cc_ad(state, gamma, 0.0, 0.0, cutoff)?;
    // U_CC is a diagonal unitary, so both ensembles drop the same branches
    if composite.branches.len() != plain.branches.len() {
        return Err(crate::error::Error::DimensionMismatch {
            left: plain.branches.len(),
            right: composite.branches.len(),
        });
    }
    let mut max_branch_diff: f64 = 0.0;
    for (b, p) in composite.branches.iter().zip(&plain.branches) {
        let diff = if b.error == p.error {
            b.state.max_abs_diff(&p.state.scaled(unit))?
        } else {
            f64::INFINITY
        };
        max_branch_diff = max_branch_diff.max(diff);
    }
    let n_branches = composite.branches.len();
    Ok(CcComparison {
        gamma,
        g,
        dt,
        global_phase,
        max_branch_diff,
        n_branches,
    })
}
