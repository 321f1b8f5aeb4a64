//! Recomputes the published tables and diffs them against [`crate::reference`].

use crate::channels::ErrorString;
use crate::code::{codeword_index, codeword_support, logical_index, CodeSpec};
use crate::decoder::circuit::syndrome_register;
use crate::decoder::{circuit_recovery, decode_logical, CircuitOptions, ProjectorRecovery, RecoveryMode};
use crate::error::Result;
use crate::qla::{bits_of_index, StateVector};
use crate::reference::{
    ckk_62, codeword_terms, damped_states_62, recovered_states_62, small_codewords, syndrome_states_62,
    RecoveredCoef,
};
use crate::report::Row;
use crate::verify::{family_rows, overlap_matrix, rate_tables};

/// Amplitude agreement for exact entries.
pub const EXACT_TOL: f64 = 1e-12;

/// `c` in the `c gamma^2` band for coefficients that agree only to leading
/// order.
pub const BAND_C: f64 = 4.0;

pub fn band(gamma: f64) -> f64 {
    BAND_C * gamma * gamma
}

/// Distance between a computed and a tabulated recovery coefficient: the
/// `O(1)` leading term is compared directly, the `O(sqrt(gamma))` damped
/// terms through their squares.
pub fn coefficient_gap(coef: &RecoveredCoef, computed: f64, gamma: f64) -> f64 {
    let expected = coef.eval(gamma);
    match coef {
        RecoveredCoef::Leading => (computed - expected).abs(),
        RecoveredCoef::Damped(_) => (computed.powi(2) - expected.powi(2)).abs(),
    }
}

fn index_of(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).expect("binary string")
}

fn bits_vec(bits: &str) -> Vec<u8> {
    bits.bytes().map(|b| b - b'0').collect()
}

fn six_two() -> CodeSpec {
    CodeSpec::new(1, 2).expect("valid code")
}

/// Compares a sparse computed support against expected `(bits, amp)` terms.
fn diff_support(
    rows: &mut Vec<Row>,
    spec: &str,
    gamma: Option<f64>,
    prefix: &str,
    computed: &[(usize, f64)],
    expected: &[(String, f64)],
) {
    for (bits, amp) in expected {
        let got = computed
            .iter()
            .find(|(x, _)| *x == index_of(bits))
            .map(|e| e.1)
            .unwrap_or(0.0);
        rows.push(Row::check(
            spec,
            gamma,
            format!("{prefix} |{bits}>"),
            got,
            Some(EXACT_TOL),
            (got - amp).abs() <= EXACT_TOL,
        ));
    }
    let extra = computed
        .iter()
        .filter(|(x, a)| a.abs() > EXACT_TOL && !expected.iter().any(|(b, _)| index_of(b) == *x))
        .count();
    if extra > 0 {
        rows.push(Row::check(
            spec,
            gamma,
            format!("{prefix} unexpected terms"),
            extra,
            None,
            false,
        ));
    }
}

/// Rates of the compared code families at `(w, k)`.
pub fn table_i(w: usize, k: usize) -> Vec<Row> {
    family_rows(w, k)
        .into_iter()
        .map(|r| {
            let (wf, kf) = (r.w as f64, r.k as f64);
            let closed = match r.family {
                crate::verify::rates::Family::FourOne => 0.25,
                crate::verify::rates::Family::TwoKPlusOne => 0.5 * kf / (kf + 1.0),
                crate::verify::rates::Family::SquareW => 1.0 / ((wf + 1.0) * (wf + 1.0)),
                crate::verify::rates::Family::ThisFamily => kf / ((wf + 1.0) * (kf + wf)),
            };
            Row::check(
                format!("{} w={} K={}", r.name, r.w, r.k),
                None,
                format!("rate {}", r.formula),
                r.rate,
                Some(1e-15),
                (r.rate - closed).abs() <= 1e-15,
            )
        })
        .collect()
}

/// The 18 qubit-count comparisons; exactly 12 use strictly fewer qubits.
pub fn table_ii() -> Vec<Row> {
    let table = rate_tables();
    let mut rows = Vec::new();
    for r in &table {
        let spec = format!("w={} K={}", r.w, r.k);
        rows.push(Row::info(&spec, None, "N1", r.n1));
        rows.push(Row::info(&spec, None, "N2", r.n2));
        rows.push(Row::info(&spec, None, "fewer", r.fewer));
        rows.push(Row::info(&spec, None, "at_most", r.at_most));
    }
    let fewer = table.iter().filter(|r| r.fewer).count();
    let at_most = table.iter().filter(|r| r.at_most).count();
    rows.push(Row::check("all", None, "rows", table.len(), None, table.len() == 18));
    rows.push(Row::check("all", None, "fewer_count", fewer, None, fewer == 12));
    rows.push(Row::info("all", None, "at_most_count", at_most));
    rows
}

/// `[[4,1]]` and `[[9,1]]` codewords.
pub fn table_iii() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for w in [1, 2] {
        let spec = CodeSpec::new(w, 1)?;
        let words = small_codewords(w).expect("tabulated");
        for (i, terms) in words.iter().enumerate() {
            let expected: Vec<(String, f64)> = terms.iter().map(|(b, a)| (b.to_string(), *a)).collect();
            let computed = codeword_support(&spec, i);
            diff_support(&mut rows, &spec.label(), None, &format!("|{i}>"), &computed, &expected);
        }
    }
    Ok(rows)
}

/// General `w = 1, 2` codewords for the given `K`.
pub fn table_iv(k: usize) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for w in [1, 2] {
        let spec = CodeSpec::new(w, k)?;
        for i in 0..spec.logical_dim() {
            let bits = bits_of_index(k, i);
            let expected = codeword_terms(&spec, &bits).expect("w <= 2");
            let computed = codeword_support(&spec, i);
            diff_support(&mut rows, &spec.label(), None, &format!("|{bits}>"), &computed, &expected);
        }
    }
    Ok(rows)
}

fn damped(spec: &CodeSpec, k: &str, i: &str, gamma: f64) -> Result<StateVector> {
    let word = codeword_index(spec, logical_index(&bits_vec(i)))?;
    ErrorString::parse(k)?.apply(&word, gamma)
}

fn real_support(state: &StateVector) -> Vec<(usize, f64)> {
    state.support(0.0).map(|(x, a)| (x, a.re)).collect()
}

/// `A_k |i>` of the `[[6,2]]` code and the diagonal `C_kk`.
pub fn table_v(gamma: f64) -> Result<Vec<Row>> {
    let spec = six_two();
    let label = spec.label();
    let mut rows = Vec::new();
    for e in damped_states_62() {
        let state = damped(&spec, &e.k, &e.i, gamma)?;
        let expected: Vec<(String, f64)> = e.terms.iter().map(|t| (t.bits.clone(), t.coef.eval(gamma))).collect();
        let prefix = format!("k={} i={}", e.k, e.i);
        diff_support(&mut rows, &label, Some(gamma), &prefix, &real_support(&state), &expected);
    }
    let report = overlap_matrix(&spec, gamma, 1)?;
    for (pos, err) in report.errors().iter().enumerate() {
        let c = report.c(pos, pos).re;
        let k = err.to_string();
        let expected = ckk_62(gamma, &k);
        rows.push(Row::check(
            &label,
            Some(gamma),
            format!("C_kk k={k}"),
            c,
            Some(EXACT_TOL),
            (c - expected).abs() <= EXACT_TOL,
        ));
    }
    Ok(rows)
}

/// Syndrome and data-qubit state `(q0, q2, q4)` after extraction.
pub fn table_vi(gamma: f64) -> Result<Vec<Row>> {
    let spec = six_two();
    let label = spec.label();
    let mut rows = Vec::new();
    for e in syndrome_states_62() {
        let state = damped(&spec, &e.k, &e.i, gamma)?;
        let branches = syndrome_register(&spec, &state)?;
        let prefix = format!("k={} i={}", e.k, e.i);
        let found = branches.iter().map(|(s, _)| s.to_string()).collect::<Vec<_>>().join("|");
        rows.push(Row::check(
            &label,
            Some(gamma),
            format!("{prefix} syndrome"),
            found.clone(),
            None,
            found == e.syndrome,
        ));
        if let Some((_, reduced)) = branches.first() {
            let expected: Vec<(String, f64)> = e.terms.iter().map(|t| (t.bits.clone(), t.coef.eval(gamma))).collect();
            diff_support(&mut rows, &label, Some(gamma), &prefix, &real_support(reduced), &expected);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredCase {
    pub k: String,
    pub i: String,
    pub syndrome: String,
    /// Coefficient of `|i>` comparable with the tabulated one.
    pub coefficient: f64,
    /// Every circuit outcome decodes to `|i>`.
    pub circuit_correct: bool,
    /// The projector recovery decodes to `|i>`.
    pub projector_correct: bool,
    /// Squared weight on `|i>` under each backend.
    pub circuit_weight: f64,
    pub projector_weight: f64,
}

/// Runs both recovery backends on all 28 `(k, i)` cases of the `[[6,2]]` code.
pub fn recovered_cases(gamma: f64, opts: CircuitOptions) -> Result<Vec<RecoveredCase>> {
    let spec = six_two();
    let projector = ProjectorRecovery::new(&spec, gamma, RecoveryMode::Completed)?;
    let mut out = Vec::new();
    for e in recovered_states_62() {
        let li = logical_index(&bits_vec(&e.i));
        let state = damped(&spec, &e.k, &e.i, gamma)?;
        let report = circuit_recovery(&spec, &state, gamma, opts)?;
        let mut circuit_correct = report.uncorrectable.is_empty() && !report.outcomes.is_empty();
        let mut circuit_weight = 0.0;
        let mut plus = None;
        let mut syndromes = Vec::new();
        for o in &report.outcomes {
            let amps = o.logical.amps();
            let best = (0..amps.len())
                .max_by(|a, b| amps[*a].norm_sqr().total_cmp(&amps[*b].norm_sqr()))
                .unwrap_or(0);
            circuit_correct &= best == li;
            circuit_weight += amps[li].norm_sqr();
            if o.label.contains("x0=+") {
                plus = Some(amps[li].norm());
            }
            syndromes.push(o.syndrome.to_string());
        }
        syndromes.dedup();
        let coefficient = match plus {
            Some(p) => p * std::f64::consts::SQRT_2,
            None => circuit_weight.sqrt(),
        };
        let branches = projector.apply(&state)?;
        let decoded = decode_logical(&branches[0].state, &spec)?;
        let projector_correct = decoded.dominant() == li;
        let projector_weight = branches
            .iter()
            .map(|b| decode_logical(&b.state, &spec).map(|d| d.amplitudes[li].norm_sqr()))
            .sum::<Result<f64>>()?;
        out.push(RecoveredCase {
            k: e.k,
            i: e.i,
            syndrome: syndromes.join("|"),
            coefficient,
            circuit_correct,
            projector_correct,
            circuit_weight,
            projector_weight,
        });
    }
    Ok(out)
}

/// Logical output of the gate-level recovery against the tabulated
/// coefficients, plus agreement with the projector recovery.
pub fn table_vii(gamma: f64, opts: CircuitOptions) -> Result<Vec<Row>> {
    let label = six_two().label();
    let cases = recovered_cases(gamma, opts)?;
    let reference = recovered_states_62();
    let mut rows = Vec::new();
    for (c, r) in cases.iter().zip(&reference) {
        let prefix = format!("k={} i={}", c.k, c.i);
        rows.push(Row::check(&label, Some(gamma), format!("{prefix} syndrome"), c.syndrome.clone(), None, c.syndrome == r.syndrome));
        let gap = coefficient_gap(&r.coef, c.coefficient, gamma);
        rows.push(Row::check(
            &label,
            Some(gamma),
            format!("{prefix} coefficient"),
            c.coefficient,
            Some(band(gamma)),
            gap <= band(gamma),
        ));
        rows.push(Row::check(&label, Some(gamma), format!("{prefix} circuit decodes"), c.circuit_correct, None, c.circuit_correct));
        rows.push(Row::check(
            &label,
            Some(gamma),
            format!("{prefix} projector decodes"),
            c.projector_correct,
            None,
            c.projector_correct,
        ));
        let agreement = (c.circuit_weight - c.projector_weight).abs();
        rows.push(Row::check(
            &label,
            Some(gamma),
            format!("{prefix} backend agreement"),
            agreement,
            Some(band(gamma)),
            agreement <= band(gamma),
        ));
    }
    Ok(rows)
}
