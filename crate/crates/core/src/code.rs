//! The `[[(w+1)(w+K), K]]` amplitude-damping code family.
//!
//! Layout: `w + K` blocks of `w + 1` qubits each; block `b` occupies qubits
//! `(w+1)b ..= (w+1)b + w`. The first `w` blocks carry an outer repetition
//! over `a in {0,1}^w`, the last `K` blocks carry the logical bits XORed with
//! the parity of `a`.
//!
//! Stabilizers and logical operators always live on the outer register
//! (`n_outer` qubits). Dual-rail concatenation only changes the codewords.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{StateVector, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub w: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub dual_rail: bool,
}

impl CodeSpec {
    pub fn new(w: usize, k: usize) -> Result<Self> {
        if w == 0 || k == 0 {
            return Err(Error::InvalidCode { w, k });
        }
        Ok(Self {
            w,
            k,
            dual_rail: false,
        })
    }

    pub fn dual_rail(w: usize, k: usize) -> Result<Self> {
        Ok(Self {
            dual_rail: true,
            ..Self::new(w, k)?
        })
    }

    pub fn with_dual_rail(self, dual_rail: bool) -> Self {
        Self { dual_rail, ..self }
    }

    /// The same code without the dual-rail layer.
    pub fn outer(self) -> Self {
        self.with_dual_rail(false)
    }

    pub fn block_len(&self) -> usize {
        self.w + 1
    }

    pub fn n_blocks(&self) -> usize {
        self.w + self.k
    }

    /// Qubits of the outer code.
    pub fn n_outer(&self) -> usize {
        self.block_len() * self.n_blocks()
    }

    /// Physical qubits, doubled under dual rail.
    pub fn n_qubits(&self) -> usize {
        self.n_outer() * if self.dual_rail { 2 } else { 1 }
    }

    pub fn logical_dim(&self) -> usize {
        1usize << self.k
    }

    pub fn n_syndrome_bits(&self) -> usize {
        self.w * self.n_blocks()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n_qubits() as f64
    }

    pub fn block_qubits(&self, block: usize) -> std::ops::Range<usize> {
        let start = self.block_len() * block;
        start..start + self.block_len()
    }

    pub fn label(&self) -> String {
        format!("[[{},{}]]", self.n_qubits(), self.k)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (w={}, K={}{})",
            self.label(),
            self.w,
            self.k,
            if self.dual_rail { ", dual-rail" } else { "" }
        )
    }
}

/// Logical basis index from bits, bit 0 first (most significant).
pub fn logical_index(bits: &[u8]) -> usize {
    crate::qla::index_of_bits(bits)
}

pub fn logical_bits(k: usize, index: usize) -> Vec<u8> {
    (0..k).map(|l| ((index >> (k - 1 - l)) & 1) as u8).collect()
}

/// Sparse amplitudes of a codeword on the outer register, sorted by index.
pub fn codeword_support(spec: &CodeSpec, logical: usize) -> Vec<(usize, f64)> {
    let (w, k, len) = (spec.w, spec.k, spec.block_len());
    let block_ones = (1usize << len) - 1;
    // 2^(-w/2) computed without a pow to keep the value exact for even w
    let amp = 0.5f64.powi((w / 2) as i32) * if w % 2 == 1 { 0.5f64.sqrt() } else { 1.0 };
    let mut out: Vec<(usize, f64)> = (0..1usize << w)
        .map(|a| {
            let parity = (a.count_ones() & 1) as usize;
            let mut idx = 0usize;
            for j in 0..w {
                let bit = (a >> (w - 1 - j)) & 1;
                idx = (idx << len) | if bit == 1 { block_ones } else { 0 };
            }
            for l in 0..k {
                let bit = ((logical >> (k - 1 - l)) & 1) ^ parity;
                idx = (idx << len) | if bit == 1 { block_ones } else { 0 };
            }
            (idx, amp)
        })
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Maps an outer basis index to its dual-rail index: `0 -> 01`, `1 -> 10`.
pub fn dual_rail_index(n_outer: usize, index: usize) -> usize {
    (0..n_outer).fold(0usize, |acc, q| {
        let b = (index >> (n_outer - 1 - q)) & 1;
        (acc << 2) | if b == 1 { 0b10 } else { 0b01 }
    })
}

/// Sparse codeword on the physical register (dual rail applied if set).
pub fn physical_support(spec: &CodeSpec, logical: usize) -> Vec<(usize, C64)> {
    let n_outer = spec.n_outer();
    let mut out: Vec<(usize, C64)> = codeword_support(spec, logical)
        .into_iter()
        .map(|(i, a)| {
            let idx = if spec.dual_rail {
                dual_rail_index(n_outer, i)
            } else {
                i
            };
            (idx, C64::new(a, 0.0))
        })
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Codeword for a logical basis index (bit 0 of the logical string is the
/// most significant bit of `logical`).
pub fn codeword_index(spec: &CodeSpec, logical: usize) -> Result<StateVector> {
    if logical >= spec.logical_dim() {
        return Err(Error::OutOfRange {
            name: "logical index",
            value: logical as f64,
        });
    }
    StateVector::from_sparse(spec.n_qubits(), &physical_support(spec, logical))
}

pub fn codeword(spec: &CodeSpec, bits: &[u8]) -> Result<StateVector> {
    if bits.len() != spec.k {
        return Err(Error::LogicalLength {
            expected: spec.k,
            found: bits.len(),
        });
    }
    codeword_index(spec, logical_index(bits))
}

/// All `2^K` codewords in logical index order.
pub fn codewords(spec: &CodeSpec) -> Result<Vec<StateVector>> {
    (0..spec.logical_dim())
        .map(|i| codeword_index(spec, i))
        .collect()
}

/// `sum_i amps[i] |i>_code` without a normalization check.
pub fn embed(spec: &CodeSpec, amps: &[C64]) -> Result<StateVector> {
    if amps.len() != spec.logical_dim() {
        return Err(Error::LogicalLength {
            expected: spec.logical_dim(),
            found: amps.len(),
        });
    }
    let mut entries = Vec::new();
    for (i, c) in amps.iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        entries.extend(physical_support(spec, i).into_iter().map(|(x, a)| (x, a * c)));
    }
    StateVector::from_sparse(spec.n_qubits(), &entries)
}

/// Encodes a normalized logical state; unnormalized input is rejected.
pub fn encode(spec: &CodeSpec, amps: &[C64]) -> Result<StateVector> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > crate::qla::NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    embed(spec, amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Excitation {
    Constant(u32),
    NotConstant,
}

/// Hamming weight shared by every nonzero amplitude, if any.
pub fn excitation_number(state: &StateVector) -> Excitation {
    let mut weights = state.support(1e-14).map(|(i, _)| i.count_ones());
    match weights.next() {
        None => Excitation::NotConstant,
        Some(m) if weights.all(|x| x == m) => Excitation::Constant(m),
        Some(_) => Excitation::NotConstant,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn symplectic(self) -> (u8, u8) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        }
    }

    fn from_symplectic(x: u8, z: u8) -> Self {
        match (x & 1, z & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Phase `i^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(p: u8) -> Self {
        Phase(p % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn value(self) -> C64 {
        [ONE, C64::new(0.0, 1.0), -ONE, C64::new(0.0, -1.0)][self.0 as usize]
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    letters: Vec<Pauli>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            letters: vec![Pauli::I; n_qubits],
            phase: Phase::PLUS_ONE,
        }
    }

    /// `letter` on each listed qubit, identity elsewhere.
    pub fn on(n_qubits: usize, letter: Pauli, qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut p = Self::identity(n_qubits);
        for q in qubits {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits,
                });
            }
            p.letters[q] = letter;
        }
        Ok(p)
    }

    pub fn from_letters(letters: Vec<Pauli>, phase: Phase) -> Self {
        Self { letters, phase }
    }

    /// Parses the compact form `[-][i]P<q>P<q>...`, e.g. `Z0Z3Z7` or `-iX2Y5`.
    pub fn parse(n_qubits: usize, text: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot parse Pauli string {text:?}"));
        let mut rest = text.trim();
        let mut power = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            power += 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            power += 1;
            rest = r;
        }
        let mut p = Self::identity(n_qubits);
        let mut chars = rest.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(bad()),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q: usize = digits.parse().map_err(|_| bad())?;
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits,
                });
            }
            if p.letters[q] != Pauli::I {
                return Err(bad());
            }
            p.letters[q] = letter;
        }
        p.phase = Phase::from_power(power);
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letter(&self, q: usize) -> Pauli {
        self.letters[q]
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits())
            .filter(|&q| self.letters[q] != Pauli::I)
            .collect()
    }

    /// Symplectic row `[x_0..x_{n-1} | z_0..z_{n-1}]`; the phase is dropped.
    pub fn symplectic(&self) -> Vec<u8> {
        let n = self.n_qubits();
        let mut row = vec![0u8; 2 * n];
        for (q, p) in self.letters.iter().enumerate() {
            let (x, z) = p.symplectic();
            row[q] = x;
            row[n + q] = z;
        }
        row
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Operator product `self * other`, including the phase.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        let mut power = self.phase.power() + other.phase.power();
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(a, b)| {
                use Pauli::*;
                power += match (a, b) {
                    (X, Y) | (Y, Z) | (Z, X) => 1,
                    (Y, X) | (Z, Y) | (X, Z) => 3,
                    _ => 0,
                };
                let (ax, az) = a.symplectic();
                let (bx, bz) = b.symplectic();
                Pauli::from_symplectic(ax ^ bx, az ^ bz)
            })
            .collect();
        Ok(Self {
            letters,
            phase: Phase::from_power(power),
        })
    }

    /// Applies the operator to a state on the same register.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits();
        if state.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: state.n_qubits(),
            });
        }
        let (mut xmask, mut zmask, mut ycount) = (0usize, 0usize, 0u32);
        for (q, p) in self.letters.iter().enumerate() {
            let m = crate::qla::qubit_mask(n, q);
            match p {
                Pauli::I => {}
                Pauli::X => xmask |= m,
                Pauli::Z => zmask |= m,
                Pauli::Y => {
                    xmask |= m;
                    zmask |= m;
                    ycount += 1;
                }
            }
        }
        // Y = i X Z
        let base = self.phase.times(Phase::from_power((ycount % 4) as u8)).value();
        let mut out = vec![ZERO; state.dim()];
        for (idx, a) in state.amps().iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let sign = if (idx & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[idx ^ xmask] = a * base * sign;
        }
        StateVector::new(n, out)
    }

    /// `<psi| P |psi>`.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        crate::qla::inner(state, &self.apply(state)?)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase.power() as usize];
        write!(f, "{prefix}")?;
        if self.weight() == 0 {
            return write!(f, "I");
        }
        for (q, p) in self.letters.iter().enumerate() {
            if *p != Pauli::I {
                write!(f, "{}{}", p.letter(), q)?;
            }
        }
        Ok(())
    }
}

/// Row reduction over GF(2); returns the reduced rows (pivot form).
fn gf2_reduce(rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        let mut r: Vec<u8> = row.iter().map(|b| b & 1).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            if r[p] == 1 {
                r.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        if let Some(p) = r.iter().position(|&x| x == 1) {
            // keep earlier basis rows reduced against the new pivot
            for b in basis.iter_mut() {
                if b[p] == 1 {
                    b.iter_mut().zip(&r).for_each(|(x, y)| *x ^= y);
                }
            }
            basis.push(r);
            pivots.push(p);
        }
    }
    basis
}

pub fn gf2_rank(rows: &[Vec<u8>]) -> usize {
    gf2_reduce(rows).len()
}

/// Whether `v` lies in the GF(2) row span of `rows`.
pub fn gf2_in_span(rows: &[Vec<u8>], v: &[u8]) -> bool {
    let mut all = rows.to_vec();
    all.push(v.to_vec());
    gf2_rank(&all) == gf2_rank(rows)
}

/// `S^Z_{i,j} = Z_{(w+1)i+j} Z_{(w+1)i+j+1}`, block-major.
pub fn z_stabilizers(spec: &CodeSpec) -> Vec<PauliString> {
    let (n, len) = (spec.n_outer(), spec.block_len());
    let mut out = Vec::with_capacity(spec.n_syndrome_bits());
    for i in 0..spec.n_blocks() {
        for j in 0..spec.w {
            let q = len * i + j;
            out.push(PauliString::on(n, Pauli::Z, [q, q + 1]).expect("in range"));
        }
    }
    out
}

/// `w - 1` pairwise-block X generators followed by the wide generator over
/// blocks `w-1 ..= w-1+K`.
pub fn x_stabilizers(spec: &CodeSpec) -> Vec<PauliString> {
    let n = spec.n_outer();
    let mut out = Vec::with_capacity(spec.w);
    for i in 0..spec.w - 1 {
        let qubits = spec.block_qubits(i).chain(spec.block_qubits(i + 1));
        out.push(PauliString::on(n, Pauli::X, qubits).expect("in range"));
    }
    let wide = (spec.w - 1..spec.w + spec.k).flat_map(|b| spec.block_qubits(b));
    out.push(PauliString::on(n, Pauli::X, wide).expect("in range"));
    out
}

pub fn stabilizers(spec: &CodeSpec) -> Vec<PauliString> {
    let mut all = z_stabilizers(spec);
    all.extend(x_stabilizers(spec));
    all
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalOps {
    pub x: Vec<PauliString>,
    pub z: Vec<PauliString>,
    pub x_all: PauliString,
}

pub fn logical_ops(spec: &CodeSpec) -> LogicalOps {
    let (n, w, len) = (spec.n_outer(), spec.w, spec.block_len());
    let x = (0..spec.k)
        .map(|l| PauliString::on(n, Pauli::X, spec.block_qubits(w + l)).expect("in range"))
        .collect();
    let z = (0..spec.k)
        .map(|l| {
            let qubits = (0..w).map(|i| len * i).chain(std::iter::once(len * (w + l)));
            PauliString::on(n, Pauli::Z, qubits).expect("in range")
        })
        .collect();
    let x_all = PauliString::on(n, Pauli::X, spec.block_qubits(0)).expect("in range");
    LogicalOps { x, z, x_all }
}

/// Whether `a` and `b` differ by an element of the group generated by
/// `generators` (phases ignored).
pub fn equivalent_mod(a: &PauliString, b: &PauliString, generators: &[PauliString]) -> bool {
    let rows: Vec<Vec<u8>> = generators.iter().map(|g| g.symplectic()).collect();
    let diff: Vec<u8> = a
        .symplectic()
        .iter()
        .zip(b.symplectic())
        .map(|(x, y)| x ^ y)
        .collect();
    gf2_in_span(&rows, &diff)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordExport {
    pub spec: CodeSpec,
    pub i: String,
    /// `(index, re, im)` for every `|amp| > 1e-14`.
    pub amplitudes: Vec<(usize, f64, f64)>,
}

pub fn export_codeword(spec: &CodeSpec, logical: usize) -> Result<CodewordExport> {
    if logical >= spec.logical_dim() {
        return Err(Error::OutOfRange {
            name: "logical index",
            value: logical as f64,
        });
    }
    let amplitudes = physical_support(spec, logical)
        .into_iter()
        .filter(|(_, a)| a.norm() > 1e-14)
        .map(|(i, a)| (i, a.re, a.im))
        .collect();
    let i = logical_bits(spec.k, logical)
        .iter()
        .map(|b| char::from(b'0' + b))
        .collect();
    Ok(CodewordExport {
        spec: *spec,
        i,
        amplitudes,
    })
}

/// Block grid for documentation: one row per block, qubit indices in columns.
pub fn layout_ascii(spec: &CodeSpec) -> String {
    let mut out = String::new();
    for b in 0..spec.n_blocks() {
        let role = if b < spec.w {
            format!("a{b}")
        } else {
            format!("i{}", b - spec.w)
        };
        let cells: Vec<String> = spec.block_qubits(b).map(|q| format!("{q:>3}")).collect();
        out.push_str(&format!("{role:>4} |{}\n", cells.join(" -")));
    }
    out
}
