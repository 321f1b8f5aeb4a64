//! Syndrome extraction, lookup tables and the two recovery backends.

pub mod circuit;
pub mod projector;
pub mod syndrome;

use serde::{Deserialize, Serialize};

pub use circuit::{artificial_ad, circuit_recovery, CircuitOptions, CircuitOutcome, CircuitReport};
pub use projector::{ProjectorRecovery, RecoveryMode};
pub use syndrome::{build_table, extract_syndrome, Syndrome, SyndromeBranch, SyndromeTable};

use crate::code::{physical_support, CodeSpec};
use crate::error::{Error, Result};
use crate::qla::{StateVector, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Projector,
    Circuit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalDecode {
    /// `<i|state>` for every codeword.
    pub amplitudes: Vec<C64>,
    /// Squared norm outside the code space.
    pub leakage: f64,
}

impl LogicalDecode {
    /// Logical index carrying the largest amplitude.
    pub fn dominant(&self) -> usize {
        self.amplitudes
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| {
                if a.norm_sqr() > best.1 {
                    (i, a.norm_sqr())
                } else {
                    best
                }
            })
            .0
    }
}

/// Projects onto the codeword basis.
pub fn decode_logical(state: &StateVector, spec: &CodeSpec) -> Result<LogicalDecode> {
    if state.n_qubits() != spec.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: spec.n_qubits(),
            right: state.n_qubits(),
        });
    }
    let amplitudes: Vec<C64> = (0..spec.logical_dim())
        .map(|i| {
            physical_support(spec, i)
                .iter()
                .fold(ZERO, |acc, (x, a)| acc + a.conj() * state.amp(*x))
        })
        .collect();
    let inside: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    Ok(LogicalDecode {
        amplitudes,
        leakage: (state.norm_sqr() - inside).max(0.0),
    })
}
