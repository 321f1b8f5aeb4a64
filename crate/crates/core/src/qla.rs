//! Dense complex linear algebra over qubit registers.
//!
//! Qubit 0 is the leftmost ket factor and the most significant bit of the
//! amplitude index, so `|q0 q1 ... q_{n-1}>` lives at index
//! `q0 * 2^(n-1) + ... + q_{n-1}`.
//!
//! Every operation is a pure function returning a new state. Non-unitary
//! operators are allowed and leave the result un-renormalized, so raw branch
//! coefficients (and their squared norms) survive intact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance used for "is this state normalized" checks.
pub const NORM_TOL: f64 = 1e-12;

/// Bit mask of `qubit` inside an `n_qubits` amplitude index.
#[inline]
pub fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

/// Value of `qubit` in basis index `index`.
#[inline]
pub fn basis_bit(n_qubits: usize, index: usize, qubit: usize) -> u8 {
    ((index >> (n_qubits - 1 - qubit)) & 1) as u8
}

/// Basis index of a bit string given qubit 0 first.
pub fn index_of_bits(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1))
}

/// Renders a basis index as a bit string, qubit 0 first.
pub fn bits_of_index(n_qubits: usize, index: usize) -> String {
    (0..n_qubits)
        .map(|q| if basis_bit(n_qubits, index, q) == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::OutOfRange {
                name: "n_qubits",
                value: n_qubits as f64,
            });
        }
        if amps.len() != 1usize << n_qubits {
            return Err(Error::AmplitudeLength {
                n_qubits,
                found: amps.len(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    /// The all-zero vector (not a physical state; used as an accumulator).
    pub fn zeros(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            amps: vec![ZERO; 1usize << n_qubits],
        }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::new(n_qubits, vec![ZERO; 1usize << n_qubits])?;
        if index >= s.amps.len() {
            return Err(Error::OutOfRange {
                name: "basis index",
                value: index as f64,
            });
        }
        s.amps[index] = ONE;
        Ok(s)
    }

    /// Computational basis state from a bit string, qubit 0 first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::basis(bits.len(), index_of_bits(bits))
    }

    /// Builds a state from sparse `(index, amplitude)` pairs; repeated
    /// indices accumulate.
    pub fn from_sparse(n_qubits: usize, entries: &[(usize, C64)]) -> Result<Self> {
        let mut s = Self::new(n_qubits, vec![ZERO; 1usize << n_qubits])?;
        for &(idx, a) in entries {
            if idx >= s.amps.len() {
                return Err(Error::OutOfRange {
                    name: "basis index",
                    value: idx as f64,
                });
            }
            s.amps[idx] += a;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// Returns the renormalized state, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: C64, other: &Self) -> Result<Self> {
        check_same_width(self, other)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    /// Nonzero amplitudes (|amp| > `tol`) in index order.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.norm() > tol)
            .map(|(i, a)| (i, *a))
    }

    /// Largest `|a - b|` over all amplitudes.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same_width(self, other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_same_width(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    Ok(())
}

/// Matrix data of a [`LocalOperator`].
///
/// Local indices put `targets[0]` in the most significant position, matching
/// the global ordering convention.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// Row-major `2^arity x 2^arity` matrix.
    Dense(Vec<C64>),
    /// Diagonal of a `2^arity x 2^arity` matrix.
    Diagonal(Vec<C64>),
    /// Tensor product of one row-major 2x2 factor per target.
    Product(Vec<[C64; 4]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    targets: Vec<usize>,
    kind: OperatorKind,
}

impl LocalOperator {
    pub fn new(targets: Vec<usize>, kind: OperatorKind) -> Result<Self> {
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateTarget(*t));
            }
        }
        let arity = targets.len();
        let (expected, found) = match &kind {
            OperatorKind::Dense(m) => (1usize << (2 * arity), m.len()),
            OperatorKind::Diagonal(d) => (1usize << arity, d.len()),
            OperatorKind::Product(f) => (arity, f.len()),
        };
        if arity == 0 || expected != found {
            return Err(Error::OperatorShape {
                arity,
                expected,
                found,
            });
        }
        Ok(Self { targets, kind })
    }

    pub fn dense(targets: Vec<usize>, matrix: Vec<C64>) -> Result<Self> {
        Self::new(targets, OperatorKind::Dense(matrix))
    }

    pub fn single(target: usize, matrix: [C64; 4]) -> Self {
        Self {
            targets: vec![target],
            kind: OperatorKind::Dense(matrix.to_vec()),
        }
    }

    pub fn diagonal(targets: Vec<usize>, diag: Vec<C64>) -> Result<Self> {
        Self::new(targets, OperatorKind::Diagonal(diag))
    }

    pub fn product(targets: Vec<usize>, factors: Vec<[C64; 4]>) -> Result<Self> {
        Self::new(targets, OperatorKind::Product(factors))
    }

    /// Same 2x2 factor on every listed qubit.
    pub fn uniform(targets: Vec<usize>, factor: [C64; 4]) -> Result<Self> {
        let factors = vec![factor; targets.len()];
        Self::product(targets, factors)
    }

    /// CNOT with the given control and target.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[11] = ONE;
        m[14] = ONE;
        Self::dense(vec![control, target], m)
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// Dense row-major matrix of the operator on its targets.
    pub fn to_dense(&self) -> Vec<C64> {
        let dim = 1usize << self.arity();
        match &self.kind {
            OperatorKind::Dense(m) => m.clone(),
            OperatorKind::Diagonal(d) => {
                let mut m = vec![ZERO; dim * dim];
                for (i, v) in d.iter().enumerate() {
                    m[i * dim + i] = *v;
                }
                m
            }
            OperatorKind::Product(factors) => {
                let mut m = vec![ONE];
                let mut cur = 1usize;
                for f in factors {
                    let next = cur * 2;
                    let mut out = vec![ZERO; next * next];
                    for r in 0..cur {
                        for c in 0..cur {
                            let v = m[r * cur + c];
                            if v == ZERO {
                                continue;
                            }
                            for fr in 0..2 {
                                for fc in 0..2 {
                                    out[(2 * r + fr) * next + 2 * c + fc] = v * f[fr * 2 + fc];
                                }
                            }
                        }
                    }
                    m = out;
                    cur = next;
                }
                m
            }
        }
    }
}

/// Pauli matrices and other fixed single-qubit gates, row-major.
pub mod gates {
    use super::{C64, I, ONE, ZERO};

    pub const IDENTITY: [C64; 4] = [ONE, ZERO, ZERO, ONE];
    pub const X: [C64; 4] = [ZERO, ONE, ONE, ZERO];
    pub const Y: [C64; 4] = [ZERO, C64::new(0.0, -1.0), I, ZERO];
    pub const Z: [C64; 4] = [ONE, ZERO, ZERO, C64::new(-1.0, 0.0)];
    pub const PROJ0: [C64; 4] = [ONE, ZERO, ZERO, ZERO];
    pub const PROJ1: [C64; 4] = [ZERO, ZERO, ZERO, ONE];

    pub fn hadamard() -> [C64; 4] {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        [h, h, h, -h]
    }

    /// `exp(-i theta/2 Y) = cos(theta/2) I - i sin(theta/2) Y`.
    pub fn ry(theta: f64) -> [C64; 4] {
        let (s, c) = (theta / 2.0).sin_cos();
        [
            C64::new(c, 0.0),
            C64::new(-s, 0.0),
            C64::new(s, 0.0),
            C64::new(c, 0.0),
        ]
    }

    pub fn matmul2(a: &[C64; 4], b: &[C64; 4]) -> [C64; 4] {
        [
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ]
    }

    pub fn dagger2(a: &[C64; 4]) -> [C64; 4] {
        [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
    }
}

fn check_targets(n_qubits: usize, targets: &[usize]) -> Result<()> {
    for &t in targets {
        if t >= n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: t,
                n_qubits,
            });
        }
    }
    Ok(())
}

fn apply_single(amps: &mut [C64], n_qubits: usize, qubit: usize, m: &[C64; 4]) {
    let mask = qubit_mask(n_qubits, qubit);
    for idx in 0..amps.len() {
        if idx & mask != 0 {
            continue;
        }
        let a0 = amps[idx];
        let a1 = amps[idx | mask];
        amps[idx] = m[0] * a0 + m[1] * a1;
        amps[idx | mask] = m[2] * a0 + m[3] * a1;
    }
}

/// Contracts `op` onto its target qubits of `state`.
pub fn apply_local(state: &StateVector, op: &LocalOperator) -> Result<StateVector> {
    let n = state.n_qubits;
    check_targets(n, &op.targets)?;
    let mut amps = state.amps.clone();
    match &op.kind {
        OperatorKind::Product(factors) => {
            for (&q, f) in op.targets.iter().zip(factors) {
                apply_single(&mut amps, n, q, f);
            }
        }
        OperatorKind::Diagonal(diag) => {
            for (idx, a) in amps.iter_mut().enumerate() {
                let local = local_index(n, idx, &op.targets);
                *a *= diag[local];
            }
        }
        OperatorKind::Dense(m) if op.arity() == 1 => {
            let f = [m[0], m[1], m[2], m[3]];
            apply_single(&mut amps, n, op.targets[0], &f);
        }
        OperatorKind::Dense(m) => {
            let arity = op.arity();
            let dim = 1usize << arity;
            let offsets: Vec<usize> = (0..dim)
                .map(|l| {
                    op.targets
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| (l >> (arity - 1 - k)) & 1 == 1)
                        .map(|(_, &q)| qubit_mask(n, q))
                        .sum()
                })
                .collect();
            let target_mask: usize = offsets[dim - 1];
            let mut gathered = vec![ZERO; dim];
            for base in 0..amps.len() {
                if base & target_mask != 0 {
                    continue;
                }
                for (l, off) in offsets.iter().enumerate() {
                    gathered[l] = state.amps[base | off];
                }
                for (r, off) in offsets.iter().enumerate() {
                    let row = &m[r * dim..(r + 1) * dim];
                    amps[base | off] = row.iter().zip(&gathered).map(|(x, y)| x * y).sum();
                }
            }
        }
    }
    Ok(StateVector { n_qubits: n, amps })
}

fn local_index(n_qubits: usize, index: usize, targets: &[usize]) -> usize {
    targets
        .iter()
        .fold(0usize, |acc, &q| (acc << 1) | basis_bit(n_qubits, index, q) as usize)
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    check_same_width(a, b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Kronecker product; qubit 0 of the result is qubit 0 of `a`.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let nb = b.n_qubits;
    let mut amps = vec![ZERO; a.dim() * b.dim()];
    for (ia, x) in a.amps.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (ib, y) in b.amps.iter().enumerate() {
            amps[(ia << nb) | ib] = x * y;
        }
    }
    StateVector {
        n_qubits: a.n_qubits + nb,
        amps,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    /// Squared norm of the projected branch relative to the input's squared norm.
    pub probability: f64,
    /// Renormalized post-measurement state.
    pub post_state: StateVector,
    /// Projected, un-renormalized branch (same width as the input).
    pub branch: StateVector,
}

fn project_z(state: &StateVector, qubit: usize, outcome: u8) -> StateVector {
    let n = state.n_qubits;
    let mask = qubit_mask(n, qubit);
    let want = if outcome == 1 { mask } else { 0 };
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| if i & mask == want { *a } else { ZERO })
        .collect();
    StateVector { n_qubits: n, amps }
}

/// Post-selects `outcome` of a Z-basis measurement of `qubit`.
pub fn measure_z(state: &StateVector, qubit: usize, outcome: u8) -> Result<MeasurementRecord> {
    check_targets(state.n_qubits, &[qubit])?;
    let total = state.norm_sqr();
    let branch = project_z(state, qubit, outcome & 1);
    let weight = branch.norm_sqr();
    if total == 0.0 || weight == 0.0 {
        return Err(Error::ZeroProbabilityBranch { qubit, outcome });
    }
    let post_state = branch.scaled(C64::new(1.0 / weight.sqrt(), 0.0));
    Ok(MeasurementRecord {
        qubit,
        outcome: outcome & 1,
        probability: weight / total,
        post_state,
        branch,
    })
}

/// Both outcomes of a Z-basis measurement; zero-probability outcomes are
/// omitted.
pub fn measure_z_branches(state: &StateVector, qubit: usize) -> Result<Vec<MeasurementRecord>> {
    check_targets(state.n_qubits, &[qubit])?;
    Ok([0u8, 1]
        .iter()
        .filter_map(|&o| measure_z(state, qubit, o).ok())
        .collect())
}

/// An un-renormalized pure branch; its squared norm is its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub label: String,
    pub state: StateVector,
    pub squared_norm: f64,
}

impl Branch {
    pub fn new(label: impl Into<String>, state: StateVector) -> Self {
        let squared_norm = state.norm_sqr();
        Self {
            label: label.into(),
            state,
            squared_norm,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BranchEnsemble {
    pub branches: Vec<Branch>,
}

impl BranchEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.squared_norm).sum()
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Normalized branch states with their weights.
    pub fn weighted_states(&self) -> Vec<(f64, StateVector)> {
        self.branches
            .iter()
            .filter_map(|b| b.state.normalized().map(|s| (b.squared_norm, s)))
            .collect()
    }
}

/// Removes `qubit` from `index`, closing the gap.
pub fn drop_bit(n_qubits: usize, index: usize, qubit: usize) -> usize {
    let pos = n_qubits - 1 - qubit;
    let low = index & ((1usize << pos) - 1);
    let high = index >> (pos + 1);
    (high << pos) | low
}

/// Traces out `qubit` in the computational basis.
///
/// Each nonzero Z-branch becomes one un-renormalized branch on the remaining
/// qubits; a product state therefore yields a single branch of full weight.
pub fn discard(state: &StateVector, qubit: usize) -> Result<BranchEnsemble> {
    let n = state.n_qubits;
    check_targets(n, &[qubit])?;
    if n == 1 {
        return Err(Error::InvalidConfig(
            "cannot discard the only qubit of a register".into(),
        ));
    }
    let mask = qubit_mask(n, qubit);
    let mut branches = Vec::with_capacity(2);
    for outcome in 0..2u8 {
        let want = if outcome == 1 { mask } else { 0 };
        let mut amps = vec![ZERO; 1usize << (n - 1)];
        for (idx, a) in state.amps.iter().enumerate() {
            if idx & mask == want {
                amps[drop_bit(n, idx, qubit)] = *a;
            }
        }
        let reduced = StateVector {
            n_qubits: n - 1,
            amps,
        };
        if reduced.norm_sqr() > 0.0 {
            branches.push(Branch::new(format!("q{qubit}={outcome}"), reduced));
        }
    }
    Ok(BranchEnsemble { branches })
}
