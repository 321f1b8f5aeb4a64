use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{apply_cc, truncation_bound, ErrorString};
use crate::code::{embed, encode, CodeSpec};
use crate::decoder::{circuit_recovery, Backend, CircuitOptions, ProjectorRecovery, RecoveryMode};
use crate::error::{Error, Result};
use crate::qla::{inner, StateVector, C64, ONE, ZERO};

use super::overlap::linear_fit;

/// Grid used for infidelity-coefficient fits.
pub const FIT_GRID: [f64; 3] = [1e-2, 3e-3, 1e-3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityConfig {
    pub backend: Backend,
    pub rounds: usize,
    /// Largest error weight enumerated per round; `None` enumerates all.
    pub cutoff: Option<usize>,
    pub seed: u64,
    /// Haar-random probes added for `K >= 2`.
    pub n_haar: usize,
    /// Largest tolerated missing probability mass over all rounds.
    pub truncation_tolerance: f64,
    pub circuit: CircuitOptions,
    pub g: f64,
    pub dt: f64,
    /// Upper limit on live branches per probe.
    pub max_branches: usize,
}

impl Default for FidelityConfig {
    fn default() -> Self {
        Self {
            backend: Backend::Projector,
            rounds: 1,
            cutoff: None,
            seed: 0,
            n_haar: 20,
            truncation_tolerance: 1e-10,
            circuit: CircuitOptions::default(),
            g: -1.0,
            dt: 0.0,
            max_branches: 1 << 18,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityRecord {
    pub gamma: f64,
    /// Sum over correctable paths of the per-path minimum over probes.
    pub termwise: f64,
    /// Minimum over probes of the full fidelity.
    pub exact_worst: f64,
    /// Worst case with the uncompleted projector recovery.
    pub literal: Option<f64>,
    pub truncation_bound: f64,
    pub n_probes: usize,
}

/// Logical probe states: the six Bloch axes for `K = 1`, otherwise the
/// computational basis plus `n_haar` seeded Haar-random states.
pub fn probes(spec: &CodeSpec, n_haar: usize, seed: u64) -> Vec<Vec<C64>> {
    let d = spec.logical_dim();
    if spec.k == 1 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| C64::new(x, 0.0);
        return vec![
            vec![ONE, ZERO],
            vec![ZERO, ONE],
            vec![r(h), r(h)],
            vec![r(h), r(-h)],
            vec![r(h), C64::new(0.0, h)],
            vec![r(h), C64::new(0.0, -h)],
        ];
    }
    let mut out: Vec<Vec<C64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_haar {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|a| a / norm).collect());
    }
    out
}

#[derive(Debug, Clone)]
struct Path {
    label: String,
    correctable: bool,
    state: StateVector,
}

pub(crate) enum Recovery {
    Projector(ProjectorRecovery),
    Circuit(CircuitOptions),
}

impl Recovery {
    pub(crate) fn build(spec: &CodeSpec, gamma: f64, cfg: &FidelityConfig, mode: RecoveryMode) -> Result<Self> {
        Ok(match cfg.backend {
            Backend::Projector => Recovery::Projector(ProjectorRecovery::new(spec, gamma, mode)?),
            Backend::Circuit => Recovery::Circuit(cfg.circuit),
        })
    }

    /// Recovered branches with their labels; lost weight is dropped.
    pub(crate) fn apply(&self, spec: &CodeSpec, gamma: f64, phi: &StateVector) -> Result<Vec<(String, StateVector)>> {
        match self {
            Recovery::Projector(r) => Ok(r
                .apply(phi)?
                .into_iter()
                .map(|b| (format!("R{}", b.kraus), b.state))
                .collect()),
            Recovery::Circuit(opts) => circuit_recovery(spec, phi, gamma, *opts)?
                .outcomes
                .into_iter()
                .map(|o| {
                    let state = embed(spec, o.logical.amps())?;
                    Ok((format!("{}{}", o.syndrome, o.label), state))
                })
                .collect(),
        }
    }
}

fn run_probe(
    spec: &CodeSpec,
    gamma: f64,
    cfg: &FidelityConfig,
    recovery: &Recovery,
    logical: &[C64],
) -> Result<Vec<(String, bool, f64)>> {
    let target = encode(spec, logical)?;
    let n = spec.n_qubits();
    let errors = ErrorString::up_to_weight(n, cfg.cutoff.unwrap_or(n).min(n));
    let mut paths = vec![Path {
        label: String::new(),
        correctable: true,
        state: target.clone(),
    }];
    for _ in 0..cfg.rounds {
        let mut next = Vec::new();
        for p in &paths {
            let rotated = apply_cc(&p.state, cfg.g, cfg.dt);
            for e in &errors {
                let damped = e.apply(&rotated, gamma)?;
                if damped.norm_sqr() == 0.0 {
                    continue;
                }
                for (tag, state) in recovery.apply(spec, gamma, &damped)? {
                    if state.norm_sqr() == 0.0 {
                        continue;
                    }
                    next.push(Path {
                        label: format!("{}{e}:{tag};", p.label),
                        correctable: p.correctable && e.weight() <= spec.w,
                        state,
                    });
                }
            }
            if next.len() > cfg.max_branches {
                return Err(Error::InvalidConfig(format!(
                    "more than {} branches; lower the rounds or the cutoff",
                    cfg.max_branches
                )));
            }
        }
        paths = next;
    }
    paths
        .into_iter()
        .map(|p| Ok((p.label, p.correctable, inner(&target, &p.state)?.norm_sqr())))
        .collect()
}

/// Full fidelity of one logical state under the completed recovery.
pub fn exact_fidelity(spec: &CodeSpec, gamma: f64, cfg: &FidelityConfig, logical: &[C64]) -> Result<f64> {
    let recovery = Recovery::build(spec, gamma, cfg, RecoveryMode::Completed)?;
    Ok(run_probe(spec, gamma, cfg, &recovery, logical)?
        .iter()
        .map(|x| x.2)
        .sum())
}

fn worst_case(
    spec: &CodeSpec,
    gamma: f64,
    cfg: &FidelityConfig,
    recovery: &Recovery,
    states: &[Vec<C64>],
) -> Result<(f64, f64)> {
    let runs = states
        .par_iter()
        .map(|s| run_probe(spec, gamma, cfg, recovery, s))
        .collect::<Result<Vec<_>>>()?;
    let exact = runs
        .iter()
        .map(|r| r.iter().map(|x| x.2).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let mut per_path: std::collections::BTreeMap<&str, (usize, f64)> = Default::default();
    for r in &runs {
        for (label, correctable, f) in r {
            if *correctable {
                let e = per_path.entry(label.as_str()).or_insert((0, f64::INFINITY));
                e.0 += 1;
                e.1 = e.1.min(*f);
            }
        }
    }
    // a path missing from some probe contributes zero for that probe
    let termwise = per_path
        .values()
        .filter(|(count, _)| *count == runs.len())
        .map(|(_, f)| f)
        .sum();
    Ok((termwise, exact))
}

/// Fidelity after `cfg.rounds` rounds of `U_CC`, amplitude damping and
/// recovery, for every `gamma` in `grid`.
pub fn fidelity_sweep(spec: &CodeSpec, grid: &[f64], cfg: &FidelityConfig) -> Result<Vec<FidelityRecord>> {
    if cfg.rounds == 0 {
        return Err(Error::InvalidConfig("rounds must be at least 1".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty gamma grid".into()));
    }
    let states = probes(spec, cfg.n_haar, cfg.seed);
    let n = spec.n_qubits();
    grid.par_iter()
        .map(|&gamma| {
            if !(0.0..=1.0).contains(&gamma) {
                return Err(Error::OutOfRange {
                    name: "gamma",
                    value: gamma,
                });
            }
            let bound = cfg.rounds as f64 * truncation_bound(n, gamma, cfg.cutoff.unwrap_or(n));
            if bound > cfg.truncation_tolerance {
                return Err(Error::TruncationBound {
                    bound,
                    tolerance: cfg.truncation_tolerance,
                });
            }
            let recovery = Recovery::build(spec, gamma, cfg, RecoveryMode::Completed)?;
            let literal = match cfg.backend {
                Backend::Projector => {
                    let lit = Recovery::build(spec, gamma, cfg, RecoveryMode::Literal)?;
                    Some(worst_case(spec, gamma, cfg, &lit, &states)?.1)
                }
                Backend::Circuit => None,
            };
            let (termwise, exact_worst) = worst_case(spec, gamma, cfg, &recovery, &states)?;
            Ok(FidelityRecord {
                gamma,
                termwise,
                exact_worst,
                literal,
                truncation_bound: bound,
                n_probes: states.len(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfidelityFit {
    /// Least-squares `c` in `1 - F = c gamma^2`.
    pub coefficient: f64,
    /// `c` from the unconstrained fit `1 - F = c gamma^2 + b gamma`.
    pub quadratic: f64,
    pub linear: f64,
    /// `|b| / c`.
    pub linear_ratio: f64,
}

/// Fits `(gamma, 1 - F)` pairs; needs at least two points.
pub fn fit_infidelity(points: &[(f64, f64)]) -> Result<InfidelityFit> {
    if points.len() < 2 || points.iter().any(|(g, _)| *g <= 0.0) {
        return Err(Error::InvalidGrid("need two or more positive gamma values".into()));
    }
    let num: f64 = points.iter().map(|(g, y)| y * g * g).sum();
    let den: f64 = points.iter().map(|(g, _)| g.powi(4)).sum();
    let coefficient = num / den;
    // y / g^2 = c + b / g
    let x: Vec<f64> = points.iter().map(|(g, _)| 1.0 / g).collect();
    let y: Vec<f64> = points.iter().map(|(g, y)| y / (g * g)).collect();
    let (linear, quadratic) = linear_fit(&x, &y);
    Ok(InfidelityFit {
        coefficient,
        quadratic,
        linear,
        linear_ratio: linear.abs() / quadratic.abs(),
    })
}
