use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::ErrorString;
use crate::code::{physical_support, CodeSpec};
use crate::error::{Error, Result};
use crate::qla::{C64, ZERO};

/// Residuals below this count as exact zeros when fitting.
pub const EXACT_FLOOR: f64 = 1e-13;

pub const DEFAULT_GRID: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapIndex {
    pub i: usize,
    pub j: usize,
    pub k: ErrorString,
    pub l: ErrorString,
}

/// `M[i,j,k,l] = <i| A_k^dag A_l |j>` over all strings with weight `<= w_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub spec: CodeSpec,
    pub gamma: f64,
    pub w_max: usize,
    pub n_errors: usize,
    /// `max |M[i,j,k,l] - delta_ij C[k,l]|` with `C[k,l] = M[0,0,k,l]`.
    pub residual: f64,
    pub residual_at: Option<OverlapIndex>,
    /// Largest `|M|` with `i != j`.
    pub step1_max: f64,
    /// Largest `|M|` with `i == j`, `k != l`.
    pub step2_max: f64,
    /// Largest spread of `M[i,i,k,k]` across `i`, over `k`.
    pub diag_spread: f64,
    /// Largest `|M[i,j,k,l] - conj(M[j,i,l,k])|`.
    pub hermiticity: f64,
    #[serde(skip)]
    errors: Vec<ErrorString>,
    #[serde(skip)]
    m: Vec<C64>,
}

impl OverlapReport {
    pub fn errors(&self) -> &[ErrorString] {
        &self.errors
    }

    fn at(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let (d, e) = (self.spec.logical_dim(), self.errors.len());
        ((i * d + j) * e + k) * e + l
    }

    /// Entry by error positions in [`Self::errors`].
    pub fn m(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.m[self.at(i, j, k, l)]
    }

    pub fn c(&self, k: usize, l: usize) -> C64 {
        self.m(0, 0, k, l)
    }

    pub fn error_position(&self, e: &ErrorString) -> Option<usize> {
        self.errors.iter().position(|x| x == e)
    }

    /// Number of `(k, l)` pairs with `k != l` whose overlap on `|i>` is at
    /// most `tol`, out of the total number of such pairs.
    pub fn off_diagonal_zeros(&self, i: usize, tol: f64) -> (usize, usize) {
        let e = self.errors.len();
        let mut zeros = 0;
        for k in 0..e {
            for l in 0..e {
                if k != l && self.m(i, i, k, l).norm() <= tol {
                    zeros += 1;
                }
            }
        }
        (zeros, e * (e - 1))
    }
}

pub(crate) fn sparse_inner(a: &[(usize, C64)], b: &[(usize, C64)]) -> C64 {
    let (mut i, mut j, mut acc) = (0, 0, ZERO);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn overlap_matrix(spec: &CodeSpec, gamma: f64, w_max: usize) -> Result<OverlapReport> {
    if w_max > spec.w {
        return Err(Error::InvalidConfig(format!(
            "w_max = {w_max} exceeds the correction weight {}",
            spec.w
        )));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
        });
    }
    let errors = ErrorString::up_to_weight(spec.n_qubits(), w_max);
    let d = spec.logical_dim();
    let e = errors.len();
    let codewords: Vec<_> = (0..d).map(|i| physical_support(spec, i)).collect();
    // states[i * e + k] = A_k |i>
    let states: Vec<Vec<(usize, C64)>> = (0..d)
        .flat_map(|i| errors.iter().map(move |k| (i, k)))
        .map(|(i, k)| k.apply_sparse(&codewords[i], gamma))
        .collect();
    let m: Vec<C64> = (0..d * d * e * e)
        .into_par_iter()
        .map(|x| {
            let l = x % e;
            let k = (x / e) % e;
            let j = (x / (e * e)) % d;
            let i = x / (e * e * d);
            sparse_inner(&states[i * e + k], &states[j * e + l])
        })
        .collect();

    let mut report = OverlapReport {
        spec: *spec,
        gamma,
        w_max,
        n_errors: e,
        residual: 0.0,
        residual_at: None,
        step1_max: 0.0,
        step2_max: 0.0,
        diag_spread: 0.0,
        hermiticity: 0.0,
        errors,
        m,
    };
    for i in 0..d {
        for j in 0..d {
            for k in 0..e {
                for l in 0..e {
                    let v = report.m(i, j, k, l);
                    let target = if i == j { report.c(k, l) } else { ZERO };
                    let r = (v - target).norm();
                    if r > report.residual {
                        report.residual = r;
                        report.residual_at = Some(OverlapIndex {
                            i,
                            j,
                            k: report.errors[k],
                            l: report.errors[l],
                        });
                    }
                    if i != j {
                        report.step1_max = report.step1_max.max(v.norm());
                    } else if k != l {
                        report.step2_max = report.step2_max.max(v.norm());
                    }
                    let h = (v - report.m(j, i, l, k).conj()).norm();
                    report.hermiticity = report.hermiticity.max(h);
                }
            }
        }
    }
    for k in 0..e {
        let diag: Vec<f64> = (0..d).map(|i| report.m(i, i, k, k).re).collect();
        let spread = diag.iter().cloned().fold(f64::MIN, f64::max)
            - diag.iter().cloned().fold(f64::MAX, f64::min);
        report.diag_spread = report.diag_spread.max(spread);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub spec: CodeSpec,
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Log-log least-squares slope; `None` when every residual is below
    /// [`EXACT_FLOOR`].
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// All residuals below [`EXACT_FLOOR`]: exact within precision.
    pub exact: bool,
}

impl ScalingFit {
    /// Slope within `tol` of `expected`, or exact.
    pub fn meets(&self, expected: f64, tol: f64) -> bool {
        self.exact || self.slope.is_some_and(|s| (s - expected).abs() <= tol)
    }
}

pub fn validate_grid(grid: &[f64], min_points: usize) -> Result<()> {
    if grid.len() < min_points {
        return Err(Error::InvalidGrid(format!(
            "need at least {min_points} points, got {}",
            grid.len()
        )));
    }
    if grid.iter().any(|g| !(*g > 0.0 && *g < 1.0)) {
        return Err(Error::InvalidGrid("every gamma must lie in (0, 1)".into()));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly decreasing".into()));
    }
    Ok(())
}

/// Ordinary least squares `y = a + b x`; returns `(b, a)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn residual_scaling(spec: &CodeSpec, grid: &[f64]) -> Result<ScalingFit> {
    validate_grid(grid, 4)?;
    let residuals = grid
        .par_iter()
        .map(|&g| overlap_matrix(spec, g, spec.w).map(|r| r.residual))
        .collect::<Result<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(&residuals)
        .filter(|(_, r)| **r > EXACT_FLOOR)
        .map(|(g, r)| (g.ln(), r.ln()))
        .unzip();
    let (slope, intercept, exact) = if x.len() >= 2 {
        let (s, a) = linear_fit(&x, &y);
        (Some(s), Some(a), false)
    } else {
        (None, None, x.is_empty())
    };
    Ok(ScalingFit {
        spec: *spec,
        grid: grid.to_vec(),
        residuals,
        slope,
        intercept,
        exact,
    })
}
