//! Noise models: amplitude damping, the collective-coherent rotation, their
//! composite, and the stochastic Pauli approximation.

use std::fmt;
use std::io::Write;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{gates, LocalOperator, StateVector, C64, ONE, ZERO};

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub label: String,
    pub ops: Vec<LocalOperator>,
}

impl KrausSet {
    /// `max |sum_k K_k^dag K_k - I|` over matrix entries.
    pub fn completeness_residual(&self) -> f64 {
        let Some(first) = self.ops.first() else {
            return f64::INFINITY;
        };
        let dim = 1usize << first.arity();
        let mut acc = vec![ZERO; dim * dim];
        for op in &self.ops {
            let m = op.to_dense();
            for r in 0..dim {
                for c in 0..dim {
                    acc[r * dim + c] += (0..dim).map(|x| m[x * dim + r].conj() * m[x * dim + c]).sum::<C64>();
                }
            }
        }
        (0..dim * dim)
            .map(|i| {
                let id = if i / dim == i % dim { ONE } else { ZERO };
                (acc[i] - id).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `(A0, A1)` as row-major 2x2 matrices.
pub fn ad_matrices(gamma: f64) -> ([C64; 4], [C64; 4]) {
    let a0 = [ONE, ZERO, ZERO, C64::new((1.0 - gamma).sqrt(), 0.0)];
    let a1 = [ZERO, C64::new(gamma.sqrt(), 0.0), ZERO, ZERO];
    (a0, a1)
}

pub fn ad_kraus(gamma: f64) -> Result<KrausSet> {
    check_probability("gamma", gamma)?;
    let (a0, a1) = ad_matrices(gamma);
    Ok(KrausSet {
        label: format!("AD(gamma={gamma})"),
        ops: vec![LocalOperator::single(0, a0), LocalOperator::single(0, a1)],
    })
}

/// Which qubits an `A_a` string damps (`A1`) rather than distorts (`A0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorString {
    n_qubits: usize,
    /// Bit `n-1-q` set when qubit `q` is damped (same layout as amplitude indices).
    mask: usize,
}

impl ErrorString {
    pub fn none(n_qubits: usize) -> Self {
        Self { n_qubits, mask: 0 }
    }

    pub fn from_mask(n_qubits: usize, mask: usize) -> Self {
        Self { n_qubits, mask }
    }

    pub fn from_positions(n_qubits: usize, positions: &[usize]) -> Result<Self> {
        let mut mask = 0usize;
        for &q in positions {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits,
                });
            }
            mask |= crate::qla::qubit_mask(n_qubits, q);
        }
        Ok(Self { n_qubits, mask })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bits: Vec<u8> = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidConfig(format!("bad error string {text:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            n_qubits: bits.len(),
            mask: crate::qla::index_of_bits(&bits),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn mask(&self) -> usize {
        self.mask
    }

    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_damped(&self, qubit: usize) -> bool {
        self.mask & crate::qla::qubit_mask(self.n_qubits, qubit) != 0
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.is_damped(q)).collect()
    }

    /// Image and coefficient of basis index `index`, or `None` when some
    /// damped qubit is already `|0>`.
    #[inline]
    pub fn act_on_index(&self, index: usize, sqrt_g: f64, sqrt_1mg: f64) -> Option<(usize, f64)> {
        if index & self.mask != self.mask {
            return None;
        }
        let out = index & !self.mask;
        let coeff = sqrt_g.powi(self.weight() as i32) * sqrt_1mg.powi(out.count_ones() as i32);
        Some((out, coeff))
    }

    /// `A_a |psi>` by index rewrite.
    pub fn apply(&self, state: &StateVector, gamma: f64) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: state.n_qubits(),
            });
        }
        let (sg, s1) = (gamma.sqrt(), (1.0 - gamma).sqrt());
        let mut out = vec![ZERO; state.dim()];
        for (idx, a) in state.amps().iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            if let Some((j, c)) = self.act_on_index(idx, sg, s1) {
                out[j] += a * c;
            }
        }
        StateVector::new(self.n_qubits, out)
    }

    /// `A_a` on sorted sparse amplitudes; the result is sorted by index.
    pub fn apply_sparse(&self, support: &[(usize, C64)], gamma: f64) -> Vec<(usize, C64)> {
        let (sg, s1) = (gamma.sqrt(), (1.0 - gamma).sqrt());
        let mut out: Vec<(usize, C64)> = support
            .iter()
            .filter_map(|(i, a)| self.act_on_index(*i, sg, s1).map(|(j, c)| (j, a * c)))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// All strings of weight `<= max_weight`, by weight then by positions.
    pub fn up_to_weight(n_qubits: usize, max_weight: usize) -> Vec<Self> {
        (0..=max_weight.min(n_qubits))
            .flat_map(|m| {
                (0..n_qubits)
                    .combinations(m)
                    .map(move |pos| Self::from_positions(n_qubits, &pos).expect("in range"))
            })
            .collect()
    }
}

impl fmt::Display for ErrorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::qla::bits_of_index(self.n_qubits, self.mask))
    }
}

impl Serialize for ErrorString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ErrorString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ErrorString::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// `A_a` as a product operator over all qubits.
pub fn kraus_string(a: &ErrorString, gamma: f64) -> LocalOperator {
    let (a0, a1) = ad_matrices(gamma);
    let factors = (0..a.n_qubits())
        .map(|q| if a.is_damped(q) { a1 } else { a0 })
        .collect();
    LocalOperator::product((0..a.n_qubits()).collect(), factors).expect("distinct targets")
}

/// Phase of the collective rotation on a basis state of Hamming weight `m`.
pub fn cc_phase(n_qubits: usize, m: usize, g: f64, dt: f64) -> C64 {
    let theta = -g * dt * (n_qubits as f64 - 2.0 * m as f64);
    C64::from_polar(1.0, theta)
}

/// `exp(-i g dt Z)` on every qubit.
pub fn cc_unitary(n_qubits: usize, g: f64, dt: f64) -> Result<LocalOperator> {
    if !g.is_finite() || !dt.is_finite() {
        return Err(Error::OutOfRange {
            name: "g*dt",
            value: g * dt,
        });
    }
    let d = [
        C64::from_polar(1.0, -g * dt),
        ZERO,
        ZERO,
        C64::from_polar(1.0, g * dt),
    ];
    LocalOperator::uniform((0..n_qubits).collect(), d)
}

/// Applies the collective rotation using the per-weight phase directly.
pub fn apply_cc(state: &StateVector, g: f64, dt: f64) -> StateVector {
    let n = state.n_qubits();
    let phases: Vec<C64> = (0..=n).map(|m| cc_phase(n, m, g, dt)).collect();
    let amps = state
        .amps()
        .iter()
        .enumerate()
        .map(|(i, a)| a * phases[i.count_ones() as usize])
        .collect();
    StateVector::new(n, amps).expect("same width")
}

/// Probability mass of strings heavier than `cutoff` on `|1...1>`, which
/// bounds what enumeration up to `cutoff` can miss on any input.
pub fn truncation_bound(n_qubits: usize, gamma: f64, cutoff: usize) -> f64 {
    if cutoff >= n_qubits {
        return 0.0;
    }
    (cutoff + 1..=n_qubits)
        .map(|m| binomial(n_qubits, m) * gamma.powi(m as i32) * (1.0 - gamma).powi((n_qubits - m) as i32))
        .sum()
}

pub fn binomial(n: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBranch {
    pub error: ErrorString,
    pub state: StateVector,
    pub squared_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeEnsemble {
    pub branches: Vec<ErrorBranch>,
    pub cutoff: usize,
    pub truncation_bound: f64,
}

impl CompositeEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.squared_norm).sum()
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W, with_amplitudes: bool) -> Result<()> {
        for b in &self.branches {
            let rec = BranchRecord {
                a: b.error,
                weight: b.error.weight(),
                squared_norm: b.squared_norm,
                amplitudes: with_amplitudes.then(|| {
                    b.state
                        .support(1e-14)
                        .map(|(i, a)| (i, a.re, a.im))
                        .collect()
                }),
            };
            serde_json::to_writer(&mut out, &rec)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub a: ErrorString,
    pub weight: usize,
    pub squared_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<(usize, f64, f64)>>,
}

/// `U_CC` followed by every `A_a` with `wt(a) <= cutoff` (all strings when
/// `cutoff` is `None`). Branches with zero norm are dropped.
pub fn composite_cc_ad(
    state: &StateVector,
    gamma: f64,
    g: f64,
    dt: f64,
    cutoff: Option<usize>,
) -> Result<CompositeEnsemble> {
    check_probability("gamma", gamma)?;
    if !state.is_normalized() {
        return Err(Error::NotNormalized { norm: state.norm() });
    }
    let n = state.n_qubits();
    let cutoff = cutoff.unwrap_or(n).min(n);
    let rotated = apply_cc(state, g, dt);
    let errors = ErrorString::up_to_weight(n, cutoff);
    let branches = errors
        .par_iter()
        .map(|e| {
            let s = e.apply(&rotated, gamma)?;
            let squared_norm = s.norm_sqr();
            Ok(ErrorBranch {
                error: *e,
                state: s,
                squared_norm,
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|b| b.squared_norm > 0.0)
        .collect();
    Ok(CompositeEnsemble {
        branches,
        cutoff,
        truncation_bound: truncation_bound(n, gamma, cutoff),
    })
}

/// `(p0, p1, p2, p3)` for `I, X, Y, Z`.
pub fn pauli_weights(gamma: f64) -> [f64; 4] {
    let p1 = gamma / 4.0;
    let p3 = gamma * gamma / 16.0;
    [1.0 - gamma / 2.0 - p3, p1, p1, p3]
}

pub fn pauli_approx(gamma: f64) -> Result<KrausSet> {
    let p = pauli_weights(gamma);
    if p[0] < 0.0 {
        return Err(Error::NegativeIdentityWeight { p0: p[0] });
    }
    if gamma < 0.0 || gamma.is_nan() {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
        });
    }
    let mats = [gates::IDENTITY, gates::X, gates::Y, gates::Z];
    let ops = p
        .iter()
        .zip(mats)
        .map(|(pi, m)| {
            let s = C64::new(pi.sqrt(), 0.0);
            LocalOperator::single(0, [m[0] * s, m[1] * s, m[2] * s, m[3] * s])
        })
        .collect();
    Ok(KrausSet {
        label: format!("PauliApprox(gamma={gamma})"),
        ops,
    })
}

/// Single-qubit density matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(pub [C64; 4]);

impl DensityMatrix2 {
    const TOL: f64 = 1e-12;

    pub fn new(m: [C64; 4]) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidDensityMatrix(why.into()));
        if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return bad("non-finite entry");
        }
        if m[0].im.abs() > Self::TOL || m[3].im.abs() > Self::TOL || (m[1] - m[2].conj()).norm() > Self::TOL {
            return bad("not Hermitian");
        }
        if ((m[0] + m[3]).re - 1.0).abs() > Self::TOL {
            return bad("trace is not 1");
        }
        let det = m[0].re * m[3].re - m[1].norm_sqr();
        if m[0].re < -Self::TOL || m[3].re < -Self::TOL || det < -Self::TOL {
            return bad("not positive semidefinite");
        }
        Ok(Self(m))
    }

    pub fn maximally_mixed() -> Self {
        Self([C64::new(0.5, 0.0), ZERO, ZERO, C64::new(0.5, 0.0)])
    }

    pub fn pure(state: &StateVector) -> Result<Self> {
        if state.n_qubits() != 1 {
            return Err(Error::DimensionMismatch {
                left: 1,
                right: state.n_qubits(),
            });
        }
        let (a, b) = (state.amp(0), state.amp(1));
        Self::new([a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj()])
    }

    /// `sum_k K rho K^dag` for single-qubit Kraus operators.
    pub fn apply(&self, kraus: &KrausSet) -> Result<[C64; 4]> {
        let mut out = [ZERO; 4];
        for op in &kraus.ops {
            if op.arity() != 1 {
                return Err(Error::OperatorShape {
                    arity: op.arity(),
                    expected: 4,
                    found: op.to_dense().len(),
                });
            }
            let k: [C64; 4] = op.to_dense().try_into().expect("2x2");
            let t = gates::matmul2(&gates::matmul2(&k, &self.0), &gates::dagger2(&k));
            out.iter_mut().zip(t).for_each(|(o, x)| *o += x);
        }
        Ok(out)
    }
}

/// Element-wise `AD(rho) - PauliApprox(rho)`.
pub fn channel_delta(rho: &DensityMatrix2, gamma: f64) -> Result<[C64; 4]> {
    let exact = rho.apply(&ad_kraus(gamma)?)?;
    let approx = rho.apply(&pauli_approx(gamma)?)?;
    Ok([
        exact[0] - approx[0],
        exact[1] - approx[1],
        exact[2] - approx[2],
        exact[3] - approx[3],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ad_endpoints() {
        let k = ad_kraus(0.0).unwrap();
        assert_eq!(k.ops[0].to_dense(), gates::IDENTITY.to_vec());
        assert!(k.ops[1].to_dense().iter().all(|x| *x == ZERO));
        let k = ad_kraus(1.0).unwrap();
        assert_eq!(k.ops[1].to_dense(), vec![ZERO, ONE, ZERO, ZERO]);
        assert_eq!(k.ops[0].to_dense(), gates::PROJ0.to_vec());
        assert!(ad_kraus(1.5).is_err());
        assert!(ad_kraus(-0.1).is_err());
    }

    #[test]
    fn error_string_roundtrip() {
        let e = ErrorString::parse("000001").unwrap();
        assert_eq!(e.positions(), vec![5]);
        assert_eq!(e.to_string(), "000001");
        assert_eq!(ErrorString::up_to_weight(6, 1).len(), 7);
        assert_eq!(ErrorString::up_to_weight(12, 2).len(), 1 + 12 + 66);
    }

    #[test]
    fn string_rewrite_matches_product_operator() {
        let g = 0.23;
        let amps: Vec<C64> = (0..16).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let s = StateVector::new(4, amps).unwrap();
        for e in ErrorString::up_to_weight(4, 4) {
            let a = e.apply(&s, g).unwrap();
            let b = crate::qla::apply_local(&s, &kraus_string(&e, g)).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-14, "{e}");
        }
    }

    #[test]
    fn truncation_bound_complements() {
        assert_eq!(truncation_bound(5, 0.1, 5), 0.0);
        let b = truncation_bound(6, 0.1, 0);
        assert!((b - (1.0 - 0.9f64.powi(6))).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix2::new([ONE, ZERO, ZERO, ONE]).is_err());
        assert!(DensityMatrix2::new([C64::new(0.5, 0.0), ONE, ONE, C64::new(0.5, 0.0)]).is_err());
        assert!(DensityMatrix2::new([C64::new(1.5, 0.0), ZERO, ZERO, C64::new(-0.5, 0.0)]).is_err());
    }
}
