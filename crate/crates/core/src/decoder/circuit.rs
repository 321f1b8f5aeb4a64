//! Gate-level recovery for the `w = 1` codes with `K <= 2`.
//!
//! Syndrome extraction copies each block's first qubit onto its second with a
//! CNOT and measures the second. The remaining data qubits (the first qubit of
//! every block) are then corrected per syndrome with X flips, artificial
//! damping and re-encoding CNOTs.
//!
//! Syndrome `001` of the `[[6,2]]` code uses a CNOT controlled by qubit 0 and
//! targeting qubit 2, reading the output as `(q2, q0)`. Control on qubit 2
//! instead sends `|10>` to `|11>`.

use serde::Serialize;

use super::syndrome::{extract_syndrome, Syndrome};
use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::qla::{
    apply_local, bits_of_index, discard, gates, measure_z, tensor, LocalOperator,
    MeasurementRecord, StateVector, C64, ZERO,
};

/// Damping rate `gamma'` for which `cos(theta/2) = sqrt(1 - gamma')`.
pub fn theta_for(gamma_prime: f64) -> f64 {
    2.0 * gamma_prime.sqrt().asin()
}

/// `CY(theta) = |0><0| (x) I + |1><1| (x) exp(-i theta/2 Y)` with the control
/// first.
pub fn controlled_ry(control: usize, target: usize, theta: f64) -> Result<LocalOperator> {
    let ry = gates::ry(theta);
    let mut m = vec![ZERO; 16];
    m[0] = C64::new(1.0, 0.0);
    m[5] = C64::new(1.0, 0.0);
    m[10] = ry[0];
    m[11] = ry[1];
    m[14] = ry[2];
    m[15] = ry[3];
    LocalOperator::dense(vec![control, target], m)
}

/// Artificial damping of `qubit` at rate `gamma_prime`.
///
/// Appends an ancilla in `|0>`, applies `CY(theta)` controlled by `qubit`,
/// and post-selects the ancilla. Outcome 0 leaves `|0><0| + cos(theta/2)|1><1|`;
/// outcome 1 is followed by an X on `qubit`, leaving `sin(theta/2)|0><1|`.
/// The returned record has the ancilla removed; `qubit` in the record is the
/// ancilla's index.
pub fn artificial_ad(
    state: &StateVector,
    qubit: usize,
    gamma_prime: f64,
    outcome: u8,
) -> Result<MeasurementRecord> {
    if !(0.0..=1.0).contains(&gamma_prime) {
        return Err(Error::OutOfRange {
            name: "gamma'",
            value: gamma_prime,
        });
    }
    let n = state.n_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange {
            qubit,
            n_qubits: n,
        });
    }
    let widened = tensor(state, &StateVector::basis(1, 0)?);
    let rotated = apply_local(&widened, &controlled_ry(qubit, n, theta_for(gamma_prime))?)?;
    let rec = measure_z(&rotated, n, outcome)?;
    let strip = |s: &StateVector| -> Result<StateVector> {
        let mut e = discard(s, n)?;
        let mut reduced = e.branches.swap_remove(0).state;
        if outcome == 1 {
            reduced = apply_local(&reduced, &LocalOperator::single(qubit, gates::X))?;
        }
        Ok(reduced)
    };
    Ok(MeasurementRecord {
        qubit: n,
        outcome: rec.outcome,
        probability: rec.probability,
        post_state: strip(&rec.post_state)?,
        branch: strip(&rec.branch)?,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CircuitOptions {
    /// Use the `(1 - gamma)` artificial damping for every syndrome instead of
    /// the `sqrt(1 - gamma)` variant on the `010` and `001` paths.
    pub equalize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: String,
    /// Original qubit labels of the register, in order.
    pub qubits: Vec<usize>,
    /// `(bits, re, im)` for every nonzero amplitude.
    pub amplitudes: Vec<(String, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOutcome {
    pub syndrome: Syndrome,
    /// Measurement outcomes taken along the way, e.g. `x0=+`.
    pub label: String,
    /// Un-renormalized `K`-qubit logical state.
    pub logical: StateVector,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitReport {
    pub outcomes: Vec<CircuitOutcome>,
    /// Syndromes without a procedure, with their branch weight.
    pub uncorrectable: Vec<(Syndrome, f64)>,
}

#[derive(Debug, Clone)]
struct Register {
    state: StateVector,
    labels: Vec<usize>,
    tag: String,
    trace: Vec<TraceStep>,
}

impl Register {
    fn record(&mut self, step: impl Into<String>) {
        let n = self.state.n_qubits();
        self.trace.push(TraceStep {
            step: step.into(),
            qubits: self.labels.clone(),
            amplitudes: self
                .state
                .support(0.0)
                .map(|(i, a)| (bits_of_index(n, i), a.re, a.im))
                .collect(),
        });
    }

    fn pos(&self, label: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::QubitOutOfRange {
                qubit: label,
                n_qubits: self.labels.len(),
            })
    }

    fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let op = LocalOperator::cnot(self.pos(control)?, self.pos(target)?)?;
        self.state = apply_local(&self.state, &op)?;
        self.record(format!("CNOT {control}->{target}"));
        Ok(())
    }

    fn x(&mut self, label: usize) -> Result<()> {
        self.state = apply_local(&self.state, &LocalOperator::single(self.pos(label)?, gates::X))?;
        self.record(format!("X{label}"));
        Ok(())
    }

    fn damp(&mut self, label: usize, gamma_prime: f64) -> Result<()> {
        let rec = artificial_ad(&self.state, self.pos(label)?, gamma_prime, 0)?;
        self.state = rec.branch;
        self.record(format!("artificial damping on {label}, gamma'={gamma_prime}, ancilla=0"));
        Ok(())
    }

    /// Z-basis discard; forks when the qubit is not definite.
    fn discard(self, label: usize) -> Result<Vec<Register>> {
        let p = self.pos(label)?;
        let e = discard(&self.state, p)?;
        let fork = e.len() > 1;
        Ok(e
            .branches
            .into_iter()
            .map(|b| {
                let mut labels = self.labels.clone();
                labels.remove(p);
                let mut r = Register {
                    state: b.state,
                    labels,
                    tag: if fork {
                        format!("{}z{label}={} ", self.tag, b.label.rsplit('=').next().unwrap_or(""))
                    } else {
                        self.tag.clone()
                    },
                    trace: self.trace.clone(),
                };
                r.record(format!("discard {label}"));
                r
            })
            .collect())
    }

    /// X-basis measurement of `label`, keeping both outcomes.
    fn release_x(self, label: usize) -> Result<Vec<Register>> {
        let p = self.pos(label)?;
        let rotated = apply_local(&self.state, &LocalOperator::single(p, gates::hadamard()))?;
        let mut out = Vec::new();
        for (outcome, sign) in [(0u8, '+'), (1u8, '-')] {
            let Ok(rec) = measure_z(&rotated, p, outcome) else {
                continue;
            };
            let mut e = discard(&rec.branch, p)?;
            if e.is_empty() {
                continue;
            }
            let mut labels = self.labels.clone();
            labels.remove(p);
            let mut r = Register {
                state: e.branches.swap_remove(0).state,
                labels,
                tag: format!("{}x{label}={sign} ", self.tag),
                trace: self.trace.clone(),
            };
            r.record(format!("measure {label} in X basis, outcome {sign}"));
            out.push(r);
        }
        Ok(out)
    }

    fn into_logical(self, order: &[usize]) -> Result<(String, StateVector, Vec<TraceStep>)> {
        let k = order.len();
        let n = self.state.n_qubits();
        if n != k {
            return Err(Error::DimensionMismatch { left: k, right: n });
        }
        let perm: Vec<usize> = order.iter().map(|&l| self.pos(l)).collect::<Result<_>>()?;
        let mut amps = vec![ZERO; 1usize << k];
        for (idx, a) in self.state.amps().iter().enumerate() {
            let out = perm.iter().fold(0usize, |acc, &p| {
                (acc << 1) | crate::qla::basis_bit(n, idx, p) as usize
            });
            amps[out] += *a;
        }
        Ok((
            self.tag.trim_end().to_string(),
            StateVector::new(k, amps)?,
            self.trace,
        ))
    }
}

enum Op {
    Cnot(usize, usize),
    X(usize),
    Damp(usize, f64),
    Discard(usize),
    ReleaseX(usize),
}

fn run(reg: Register, ops: &[Op], order: &[usize]) -> Result<Vec<(String, StateVector, Vec<TraceStep>)>> {
    let mut work = vec![reg];
    for op in ops {
        let mut next = Vec::new();
        for mut r in work {
            match *op {
                Op::Cnot(c, t) => {
                    r.cnot(c, t)?;
                    next.push(r);
                }
                Op::X(q) => {
                    r.x(q)?;
                    next.push(r);
                }
                Op::Damp(q, g) => {
                    r.damp(q, g)?;
                    next.push(r);
                }
                Op::Discard(q) => next.extend(r.discard(q)?),
                Op::ReleaseX(q) => next.extend(r.release_x(q)?),
            }
        }
        work = next;
    }
    work.into_iter().map(|r| r.into_logical(order)).collect()
}

/// Per-syndrome procedure on the data qubits `0, 2, 4, ...`.
fn procedure(spec: &CodeSpec, syndrome: &str, gamma: f64, opts: CircuitOptions) -> Option<(Vec<Op>, Vec<usize>)> {
    let full = 1.0 - (1.0 - gamma).powi(2);
    let half = if opts.equalize { full } else { gamma };
    use Op::*;
    match (spec.k, syndrome) {
        (1, "00") => Some((vec![Cnot(0, 2), ReleaseX(0)], vec![2])),
        (1, "10") => Some((vec![Discard(0), X(2), Damp(2, full)], vec![2])),
        (1, "01") => Some((vec![Discard(2), X(0), Damp(0, full)], vec![0])),
        (2, "000") => Some((vec![Cnot(0, 2), Cnot(0, 4), ReleaseX(0)], vec![2, 4])),
        (2, "100") => Some((
            vec![Discard(0), X(2), X(4), Damp(2, full), Damp(4, full)],
            vec![2, 4],
        )),
        (2, "010") => Some((
            vec![Discard(2), X(0), X(4), Damp(0, half), Damp(4, half), Cnot(0, 4)],
            vec![0, 4],
        )),
        (2, "001") => Some((
            vec![Discard(4), X(0), X(2), Damp(0, half), Damp(2, half), Cnot(0, 2)],
            vec![2, 0],
        )),
        _ => None,
    }
}

/// Syndrome extraction plus per-syndrome recovery of one error branch.
pub fn circuit_recovery(
    spec: &CodeSpec,
    branch: &StateVector,
    gamma: f64,
    opts: CircuitOptions,
) -> Result<CircuitReport> {
    if spec.w != 1 || spec.dual_rail || spec.k > 2 {
        return Err(Error::UnsupportedCode(format!(
            "circuit recovery covers w = 1, K <= 2 without dual rail; got {spec}"
        )));
    }
    let n = spec.n_outer();
    let mut outcomes = Vec::new();
    let mut uncorrectable = Vec::new();
    for sb in extract_syndrome(branch, spec)? {
        let syn = sb.syndrome.to_string();
        let Some((ops, order)) = procedure(spec, &syn, gamma, opts) else {
            uncorrectable.push((sb.syndrome.clone(), sb.state.norm_sqr()));
            continue;
        };
        let mut reg = Register {
            state: branch.clone(),
            labels: (0..n).collect(),
            tag: String::new(),
            trace: Vec::new(),
        };
        reg.record("input");
        for b in 0..spec.n_blocks() {
            reg.cnot(2 * b, 2 * b + 1)?;
        }
        // measure targets from the highest index down so positions stay valid
        for b in (0..spec.n_blocks()).rev() {
            let target = 2 * b + 1;
            let p = reg.pos(target)?;
            let rec = measure_z(&reg.state, p, sb.syndrome.bits()[b])?;
            let mut e = discard(&rec.branch, p)?;
            reg.state = e.branches.swap_remove(0).state;
            reg.labels.remove(p);
        }
        reg.record(format!("syndrome {syn}"));
        for (label, logical, trace) in run(reg, &ops, &order)? {
            outcomes.push(CircuitOutcome {
                syndrome: sb.syndrome.clone(),
                label,
                logical,
                trace,
            });
        }
    }
    Ok(CircuitReport {
        outcomes,
        uncorrectable,
    })
}

/// Reduced data-qubit state right after syndrome extraction.
pub fn syndrome_register(spec: &CodeSpec, branch: &StateVector) -> Result<Vec<(Syndrome, StateVector)>> {
    if spec.w != 1 || spec.dual_rail {
        return Err(Error::UnsupportedCode(format!("{spec}")));
    }
    let mut out = Vec::new();
    for sb in extract_syndrome(branch, spec)? {
        let mut state = sb.state.clone();
        for b in 0..spec.n_blocks() {
            state = apply_local(&state, &LocalOperator::cnot(2 * b, 2 * b + 1)?)?;
        }
        for b in (0..spec.n_blocks()).rev() {
            let mut e = discard(&state, 2 * b + 1)?;
            state = e.branches.swap_remove(0).state;
        }
        out.push((sb.syndrome, state));
    }
    Ok(out)
}
