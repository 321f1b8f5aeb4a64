use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub gamma: f64,
    /// `-ln 2 / (2 ln(1 - gamma))`.
    pub closed_form: f64,
    /// Crossing of the fidelity inequality found by bisection.
    pub numeric: f64,
    pub relative_gap: f64,
}

/// Encoded minus bare fidelity after `t` rounds, with `x = (1 - gamma)^t`:
/// `x^2 + 2 (1 - x) x^3 - x`.
pub fn fidelity_margin(gamma: f64, t: f64) -> f64 {
    let x = (1.0 - gamma).powf(t);
    x * x + 2.0 * (1.0 - x) * x.powi(3) - x
}

pub fn closed_form_threshold(gamma: f64) -> Result<f64> {
    check(gamma)?;
    Ok(-std::f64::consts::LN_2 / (2.0 * (1.0 - gamma).ln()))
}

fn check(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
        })
    }
}

pub fn threshold_rounds(gamma: f64) -> Result<ThresholdReport> {
    let closed_form = closed_form_threshold(gamma)?;
    let mut lo = 1e-9 / -(1.0 - gamma).ln();
    let mut hi = 2.0 * lo;
    while fidelity_margin(gamma, hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: gamma,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fidelity_margin(gamma, mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let numeric = 0.5 * (lo + hi);
    Ok(ThresholdReport {
        gamma,
        closed_form,
        numeric,
        relative_gap: (numeric - closed_form).abs() / closed_form,
    })
}
