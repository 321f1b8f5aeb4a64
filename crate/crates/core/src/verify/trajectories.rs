use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::apply_cc;
use crate::code::{encode, CodeSpec};
use crate::decoder::RecoveryMode;
use crate::error::{Error, Result};
use crate::qla::{inner, qubit_mask, StateVector, C64, ZERO};

use super::fidelity::{exact_fidelity, FidelityConfig, Recovery};

/// Minimum sample count for a trajectory cross-check.
pub const MIN_SHOTS: usize = 100_000;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryEstimate {
    pub gamma: f64,
    pub shots: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_err: f64,
    pub exact: f64,
    /// `|mean - exact| / std_err`.
    pub z_score: f64,
    pub within_3sigma: bool,
}

/// Samples `A0` or `A1` on each qubit in turn and renormalizes.
fn damp_all(state: &mut [C64], n: usize, gamma: f64, rng: &mut ChaCha8Rng) {
    let s = (1.0 - gamma).sqrt();
    for q in 0..n {
        let m = qubit_mask(n, q);
        let excited: f64 = state
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let total: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        let p1 = gamma * excited / total;
        if rng.random::<f64>() < p1 {
            // i & !m < i, so each target is cleared before it is filled
            for i in 0..state.len() {
                if i & m != 0 {
                    state[i & !m] = state[i];
                    state[i] = ZERO;
                } else {
                    state[i] = ZERO;
                }
            }
        } else {
            for (i, a) in state.iter_mut().enumerate() {
                if i & m != 0 {
                    *a *= s;
                }
            }
        }
        let norm = state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        state.iter_mut().for_each(|a| *a /= norm);
    }
}

fn shot(
    spec: &CodeSpec,
    gamma: f64,
    cfg: &FidelityConfig,
    recovery: &Recovery,
    target: &StateVector,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let n = spec.n_qubits();
    let mut state = target.clone();
    for _ in 0..cfg.rounds {
        let mut amps = apply_cc(&state, cfg.g, cfg.dt).into_amps();
        damp_all(&mut amps, n, gamma, rng);
        let damped = StateVector::new(n, amps)?;
        let branches = recovery.apply(spec, gamma, &damped)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        for (_, b) in branches {
            acc += b.norm_sqr();
            if u < acc {
                chosen = Some(b);
                break;
            }
        }
        match chosen.and_then(|b| b.normalized()) {
            Some(b) => state = b,
            // weight the recovery discards
            None => return Ok(0.0),
        }
    }
    Ok(inner(target, &state)?.norm_sqr())
}

/// Monte Carlo estimate of the fidelity of `logical`, compared with the exact
/// enumeration at three standard errors.
pub fn sample_fidelity(
    spec: &CodeSpec,
    gamma: f64,
    cfg: &FidelityConfig,
    logical: &[C64],
    shots: usize,
    seed: u64,
) -> Result<TrajectoryEstimate> {
    if shots < 2 {
        return Err(Error::InvalidConfig("need at least two shots".into()));
    }
    let target = encode(spec, logical)?;
    let recovery = Recovery::build(spec, gamma, cfg, RecoveryMode::Completed)?;
    let chunks = shots.div_ceil(CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(shots - c * CHUNK);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                let f = shot(spec, gamma, cfg, &recovery, &target, &mut rng)?;
                s1 += f;
                s2 += f * f;
            }
            Ok((s1, s2))
        })
        .collect::<Result<Vec<_>>>()?;
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let k = shots as f64;
    let mean = s1 / k;
    let var = ((s2 - k * mean * mean) / (k - 1.0)).max(0.0);
    let std_err = (var / k).sqrt();
    let exact_cfg = FidelityConfig { cutoff: None, ..*cfg };
    let exact = exact_fidelity(spec, gamma, &exact_cfg, logical)?;
    let gap = (mean - exact).abs();
    let z_score = if std_err > 0.0 { gap / std_err } else if gap <= 1e-12 { 0.0 } else { f64::INFINITY };
    Ok(TrajectoryEstimate {
        gamma,
        shots,
        seed,
        mean,
        std_err,
        exact,
        z_score,
        within_3sigma: z_score <= 3.0,
    })
}
