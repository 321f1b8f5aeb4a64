//! Projector-based recovery
//!
//! `R = (I - P)/2 + sum_{i,k} |i><i'_(k)|`, with `|i'_(k)>` the normalized
//! error states for `1 <= wt(k) <= w` and `P` the projector onto their span.
//!
//! On its own `R` is not a complete channel: `R^dag R = (I - P)/4 + P`. The
//! [`RecoveryMode::Completed`] mode adds `Q = (sqrt(3)/2)(I - P)` so that
//! `R^dag R + Q^dag Q = I`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channels::ErrorString;
use crate::code::{physical_support, CodeSpec};
use crate::error::{Error, Result};
use crate::qla::{StateVector, C64, ZERO};

/// Off-diagonal Gram entries above this reject the error set.
pub const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecoveryMode {
    /// `R` alone.
    Literal,
    /// `R` plus the complement operator `Q`.
    Completed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorState {
    pub logical: usize,
    pub error: ErrorString,
    /// `||A_k |i>||`.
    pub norm: f64,
    /// Normalized sparse amplitudes, sorted by index.
    pub support: Vec<(usize, C64)>,
}

#[derive(Debug, Clone)]
pub struct ProjectorRecovery {
    spec: CodeSpec,
    gamma: f64,
    mode: RecoveryMode,
    codewords: Vec<Vec<(usize, C64)>>,
    states: Vec<ErrorState>,
    /// Basis index to `(error state id, amplitude)`.
    by_index: BTreeMap<usize, Vec<(usize, C64)>>,
    max_gram_offdiag: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredBranch {
    /// Which recovery Kraus operator produced this branch (`0` is `R`).
    pub kraus: usize,
    pub state: StateVector,
}

fn sparse_inner(a: &[(usize, C64)], b: &[(usize, C64)]) -> C64 {
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

impl ProjectorRecovery {
    /// Builds the error states and verifies that codewords and error states
    /// are jointly orthonormal.
    pub fn new(spec: &CodeSpec, gamma: f64, mode: RecoveryMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: gamma,
            });
        }
        let n = spec.n_qubits();
        let codewords: Vec<Vec<(usize, C64)>> =
            (0..spec.logical_dim()).map(|i| physical_support(spec, i)).collect();
        let errors: Vec<ErrorString> = ErrorString::up_to_weight(n, spec.w)
            .into_iter()
            .filter(|e| e.weight() >= 1)
            .collect();
        let mut states = Vec::new();
        for e in &errors {
            for (i, cw) in codewords.iter().enumerate() {
                let raw = e.apply_sparse(cw, gamma);
                let norm = raw.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 {
                    // gamma = 0 or 1 can annihilate a branch; nothing to recover
                    continue;
                }
                let support = raw.into_iter().map(|(x, a)| (x, a / norm)).collect();
                states.push(ErrorState {
                    logical: i,
                    error: *e,
                    norm,
                    support,
                });
            }
        }
        let mut by_index: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
        for (id, s) in states.iter().enumerate() {
            for &(x, a) in &s.support {
                by_index.entry(x).or_default().push((id, a));
            }
        }
        let mut rec = Self {
            spec: *spec,
            gamma,
            mode,
            codewords,
            states,
            by_index,
            max_gram_offdiag: 0.0,
        };
        rec.check_gram()?;
        Ok(rec)
    }

    fn label(&self, id: usize) -> String {
        if id < self.codewords.len() {
            format!("codeword {id}")
        } else {
            let s = &self.states[id - self.codewords.len()];
            format!("A_{} |{}>", s.error, s.logical)
        }
    }

    /// Gram matrix of codewords and error states, computed over shared
    /// support only.
    fn check_gram(&mut self) -> Result<()> {
        let vectors: Vec<&Vec<(usize, C64)>> = self
            .codewords
            .iter()
            .chain(self.states.iter().map(|s| &s.support))
            .collect();
        let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (id, v) in vectors.iter().enumerate() {
            for &(x, _) in v.iter() {
                owners.entry(x).or_default().push(id);
            }
        }
        let mut worst = (0.0f64, 0usize, 0usize);
        for (id, v) in vectors.iter().enumerate() {
            let diag = sparse_inner(v, v).norm();
            if (diag - 1.0).abs() > GRAM_TOL {
                return Err(Error::NonOrthogonalErrorStates {
                    first: self.label(id),
                    second: self.label(id),
                    overlap: diag,
                });
            }
            let mut partners: Vec<usize> = v
                .iter()
                .flat_map(|(x, _)| owners[x].iter().copied())
                .filter(|&o| o > id)
                .collect();
            partners.sort_unstable();
            partners.dedup();
            for o in partners {
                let ov = sparse_inner(v, vectors[o]).norm();
                if ov > worst.0 {
                    worst = (ov, id, o);
                }
            }
        }
        self.max_gram_offdiag = worst.0;
        if worst.0 > GRAM_TOL {
            return Err(Error::NonOrthogonalErrorStates {
                first: self.label(worst.1),
                second: self.label(worst.2),
                overlap: worst.0,
            });
        }
        Ok(())
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mode(&self) -> RecoveryMode {
        self.mode
    }

    pub fn error_states(&self) -> &[ErrorState] {
        &self.states
    }

    pub fn max_gram_offdiag(&self) -> f64 {
        self.max_gram_offdiag
    }

    /// `<i'_(k)|phi>` for every error state.
    fn coefficients(&self, phi: &StateVector) -> Vec<C64> {
        let mut c = vec![ZERO; self.states.len()];
        for (x, entries) in &self.by_index {
            let a = phi.amp(*x);
            if a == ZERO {
                continue;
            }
            for (id, s) in entries {
                c[*id] += s.conj() * a;
            }
        }
        c
    }

    /// Applies every recovery Kraus operator of the current mode to `phi`.
    pub fn apply(&self, phi: &StateVector) -> Result<Vec<RecoveredBranch>> {
        if phi.n_qubits() != self.spec.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: self.spec.n_qubits(),
                right: phi.n_qubits(),
            });
        }
        let coeffs = self.coefficients(phi);
        // (I - P) phi
        let mut complement = phi.amps().to_vec();
        let mut transfer = vec![ZERO; phi.dim()];
        for (s, c) in self.states.iter().zip(&coeffs) {
            if *c == ZERO {
                continue;
            }
            for &(x, a) in &s.support {
                complement[x] -= c * a;
            }
            for &(x, a) in &self.codewords[s.logical] {
                transfer[x] += c * a;
            }
        }
        let n = phi.n_qubits();
        let r: Vec<C64> = complement
            .iter()
            .zip(&transfer)
            .map(|(q, t)| q * 0.5 + t)
            .collect();
        let mut out = vec![RecoveredBranch {
            kraus: 0,
            state: StateVector::new(n, r)?,
        }];
        if self.mode == RecoveryMode::Completed {
            let s = 3f64.sqrt() / 2.0;
            out.push(RecoveredBranch {
                kraus: 1,
                state: StateVector::new(n, complement.iter().map(|q| q * s).collect())?,
            });
        }
        Ok(out)
    }

    /// `R |i'_(k)>`, which should equal `|i>` for a correctable `k`.
    pub fn recover_error_state(&self, logical: usize, error: &ErrorString) -> Result<StateVector> {
        let s = self
            .states
            .iter()
            .find(|s| s.logical == logical && s.error == *error)
            .ok_or_else(|| Error::UncorrectableSyndrome(format!("{error} on |{logical}>")))?;
        let phi = StateVector::from_sparse(self.spec.n_qubits(), &s.support)?;
        Ok(self.apply(&phi)?.swap_remove(0).state)
    }

    /// `|<psi| R_j phi>|^2` summed over the recovery Kraus operators.
    pub fn fidelity_contribution(&self, psi: &StateVector, phi: &StateVector) -> Result<f64> {
        Ok(self
            .apply(phi)?
            .iter()
            .map(|b| crate::qla::inner(psi, &b.state).map(|z| z.norm_sqr()))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .sum())
    }
}
