//! Published reference data for the `(w, K)` codes, kept as plain data so
//! that computed results can be diffed against it.
//!
//! Coefficients in the `[[6,2]]` tables use `sqrt(gamma)` for a damped qubit
//! and `sqrt(1 - gamma)` for every qubit that stays excited.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::code::CodeSpec;

/// `(sqrt(gamma))^g (sqrt(1 - gamma))^s / sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub g: u32,
    pub s: u32,
}

impl Monomial {
    pub fn eval(&self, gamma: f64) -> f64 {
        gamma.sqrt().powi(self.g as i32) * (1.0 - gamma).sqrt().powi(self.s as i32) * FRAC_1_SQRT_2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub bits: String,
    pub coef: Monomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampedEntry {
    /// Error string, qubit 0 first.
    pub k: String,
    pub i: String,
    pub terms: Vec<Term>,
}

const LOGICALS_62: [&str; 4] = ["00", "01", "10", "11"];
const ERRORS_62: [&str; 7] = ["000000", "000001", "000010", "000100", "001000", "010000", "100000"];

type Terms = &'static [(u32, u32, &'static str)];

// (g, s, bits) terms per logical, rows in ERRORS_62 order
#[rustfmt::skip]
const TABLE_62: [[Terms; 7]; 4] = [
    [
        &[(0, 0, "000000"), (0, 6, "111111")],
        &[(1, 5, "111110")],
        &[(1, 5, "111101")],
        &[(1, 5, "111011")],
        &[(1, 5, "110111")],
        &[(1, 5, "101111")],
        &[(1, 5, "011111")],
    ],
    [
        &[(0, 2, "000011"), (0, 4, "111100")],
        &[(1, 1, "000010")],
        &[(1, 1, "000001")],
        &[(1, 3, "111000")],
        &[(1, 3, "110100")],
        &[(1, 3, "101100")],
        &[(1, 3, "011100")],
    ],
    [
        &[(0, 2, "001100"), (0, 4, "110011")],
        &[(1, 3, "110010")],
        &[(1, 3, "110001")],
        &[(1, 1, "001000")],
        &[(1, 1, "000100")],
        &[(1, 3, "100011")],
        // damping qubit 0 of 110011 leaves 010011
        &[(1, 3, "010011")],
    ],
    [
        &[(0, 4, "001111"), (0, 2, "110000")],
        &[(1, 3, "001110")],
        &[(1, 3, "001101")],
        &[(1, 3, "001011")],
        &[(1, 3, "000111")],
        &[(1, 1, "100000")],
        &[(1, 1, "010000")],
    ],
];

/// `A_k |i>` for the `[[6,2]]` code: 28 entries, logical-major.
pub fn damped_states_62() -> Vec<DampedEntry> {
    let mut out = Vec::with_capacity(28);
    for (li, rows) in TABLE_62.iter().enumerate() {
        for (ki, terms) in rows.iter().enumerate() {
            out.push(DampedEntry {
                k: ERRORS_62[ki].to_string(),
                i: LOGICALS_62[li].to_string(),
                terms: terms
                    .iter()
                    .map(|&(g, s, bits)| Term {
                        bits: bits.to_string(),
                        coef: Monomial { g, s },
                    })
                    .collect(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyndromeEntry62 {
    pub k: String,
    pub i: String,
    pub syndrome: String,
    /// Terms on the data qubits `(q0, q2, q4)`.
    pub terms: Vec<Term>,
}

/// Block parities and data-qubit states after syndrome extraction.
pub fn syndrome_states_62() -> Vec<SyndromeEntry62> {
    damped_states_62()
        .into_iter()
        .map(|e| {
            let b: Vec<char> = e.terms[0].bits.chars().collect();
            let syndrome = (0..3)
                .map(|j| if b[2 * j] == b[2 * j + 1] { '0' } else { '1' })
                .collect();
            let terms = e
                .terms
                .iter()
                .map(|t| Term {
                    bits: t.bits.chars().step_by(2).collect(),
                    coef: t.coef,
                })
                .collect();
            SyndromeEntry62 {
                k: e.k,
                i: e.i,
                syndrome,
                terms,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecoveredCoef {
    /// `(2 - 3 gamma) / sqrt(2)`, exact up to `O(gamma^2)`.
    Leading,
    Damped(Monomial),
}

impl RecoveredCoef {
    pub fn eval(&self, gamma: f64) -> f64 {
        match self {
            RecoveredCoef::Leading => (2.0 - 3.0 * gamma) * FRAC_1_SQRT_2,
            RecoveredCoef::Damped(m) => m.eval(gamma),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredEntry62 {
    pub k: String,
    pub i: String,
    pub syndrome: String,
    pub coef: RecoveredCoef,
}

/// Output of the gate-level recovery: every entry decodes to `|i>`.
pub fn recovered_states_62() -> Vec<RecoveredEntry62> {
    // sqrt(1 - gamma) powers for k = 000001 .. 100000
    const POWERS: [[u32; 6]; 4] = [
        [5, 5, 5, 5, 5, 5],
        [5, 5, 5, 5, 5, 5],
        [4, 4, 5, 5, 5, 5],
        [4, 4, 4, 4, 5, 5],
    ];
    syndrome_states_62()
        .into_iter()
        .map(|e| {
            let li = LOGICALS_62.iter().position(|l| *l == e.i).expect("known logical");
            let ki = ERRORS_62.iter().position(|k| *k == e.k).expect("known error");
            let coef = if ki == 0 {
                RecoveredCoef::Leading
            } else {
                RecoveredCoef::Damped(Monomial {
                    g: 1,
                    s: POWERS[li][ki - 1],
                })
            };
            RecoveredEntry62 {
                k: e.k,
                i: e.i,
                syndrome: e.syndrome,
                coef,
            }
        })
        .collect()
}

/// `C_kk` for the `[[6,2]]` code at `gamma`: no damping, then one damped qubit.
pub fn ckk_62(gamma: f64, k: &str) -> f64 {
    if k.chars().all(|c| c == '0') {
        0.5 * (1.0 + (1.0 - gamma).powi(6))
    } else {
        gamma * (1.0 - gamma).powi(5) / 2.0
    }
}

fn repeat(c: char, n: usize) -> String {
    std::iter::repeat_n(c, n).collect()
}

fn flip(c: char) -> char {
    if c == '0' {
        '1'
    } else {
        '0'
    }
}

/// Codeword terms from the closed forms for `w <= 2`, as `(bits, amplitude)`.
/// Returns `None` outside that range.
pub fn codeword_terms(spec: &CodeSpec, i: &str) -> Option<Vec<(String, f64)>> {
    let w = spec.w;
    if spec.dual_rail || w == 0 || w > 2 || i.len() != spec.k {
        return None;
    }
    let tail = |bits: &str, neg: bool| -> String {
        bits.chars()
            .map(|c| repeat(if neg { flip(c) } else { c }, w + 1))
            .collect()
    };
    let terms = if w == 1 {
        vec![
            (format!("00{}", tail(i, false)), FRAC_1_SQRT_2),
            (format!("11{}", tail(i, true)), FRAC_1_SQRT_2),
        ]
    } else {
        vec![
            (format!("000000{}", tail(i, false)), 0.5),
            (format!("111111{}", tail(i, false)), 0.5),
            (format!("000111{}", tail(i, true)), 0.5),
            (format!("111000{}", tail(i, true)), 0.5),
        ]
    };
    Some(terms)
}

/// The two explicit small codewords, `[[4,1]]` and `[[9,1]]`.
pub fn small_codewords(w: usize) -> Option<[Vec<(&'static str, f64)>; 2]> {
    match w {
        1 => Some([
            vec![("0000", FRAC_1_SQRT_2), ("1111", FRAC_1_SQRT_2)],
            vec![("0011", FRAC_1_SQRT_2), ("1100", FRAC_1_SQRT_2)],
        ]),
        2 => Some([
            vec![("000000000", 0.5), ("111111000", 0.5), ("000111111", 0.5), ("111000111", 0.5)],
            vec![("111111111", 0.5), ("000000111", 0.5), ("111000000", 0.5), ("000111000", 0.5)],
        ]),
        _ => None,
    }
}

/// `[[12,2]]` Z generators.
pub const Z_STABILIZERS_12_2: [&str; 8] = [
    "Z0Z1", "Z1Z2", "Z3Z4", "Z4Z5", "Z6Z7", "Z7Z8", "Z9Z10", "Z10Z11",
];

/// `[[12,2]]` X generators.
pub const X_STABILIZERS_12_2: [&str; 2] = ["X0X1X2X6X7X8X9X10X11", "X3X4X5X6X7X8X9X10X11"];

/// `[[12,2]]` logicals: `Z_0, Z_1, X_0, X_1`.
pub const LOGICALS_12_2: [&str; 4] = ["Z0Z3Z7", "Z2Z5Z10", "X6X7X8", "X9X10X11"];
