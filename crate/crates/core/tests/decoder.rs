use adshor::channels::ErrorString;
use adshor::code::{codeword_index, codewords};
use adshor::decoder::circuit::artificial_ad;
use adshor::decoder::{
    build_table, circuit_recovery, decode_logical, extract_syndrome, CircuitOptions, ProjectorRecovery,
    RecoveryMode, Syndrome,
};
use adshor::qla::{inner, StateVector, C64};
use adshor::CodeSpec;

const TOL: f64 = 1e-10;

fn spec(w: usize, k: usize) -> CodeSpec {
    CodeSpec::new(w, k).unwrap()
}

#[test]
fn syndromes_are_deterministic() {
    for (w, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let s = spec(w, k);
        for word in codewords(&s).unwrap() {
            for e in ErrorString::up_to_weight(s.n_qubits(), w) {
                let branch = e.apply(&word, 0.1).unwrap();
                if branch.norm() == 0.0 {
                    continue;
                }
                let out = extract_syndrome(&branch, &s).unwrap();
                assert_eq!(out.len(), 1, "{e} on {}", s.label());
                assert!((out[0].probability - 1.0).abs() <= TOL);
            }
        }
    }
}

#[test]
fn six_two_syndromes() {
    let s = spec(1, 2);
    for i in 0..4 {
        let word = codeword_index(&s, i).unwrap();
        for (e, want) in [("100000", "100"), ("010000", "100"), ("000000", "000")] {
            let b = ErrorString::parse(e).unwrap().apply(&word, 0.1).unwrap();
            assert_eq!(extract_syndrome(&b, &s).unwrap()[0].syndrome, Syndrome::parse(want).unwrap());
        }
    }
}

#[test]
fn middle_damp_in_block_one() {
    let s = spec(2, 1);
    let b = ErrorString::from_positions(9, &[4])
        .unwrap()
        .apply(&codeword_index(&s, 0).unwrap(), 0.1)
        .unwrap();
    assert_eq!(extract_syndrome(&b, &s).unwrap()[0].syndrome, Syndrome::parse("001100").unwrap());
}

#[test]
fn lookup_tables() {
    let t = build_table(&spec(1, 2)).unwrap();
    assert_eq!(t.len(), 4);
    assert!(t.lookup(&Syndrome::parse("000").unwrap()).unwrap().positions.is_empty());
    for (syn, cands) in [("001", [4, 5]), ("010", [2, 3]), ("100", [0, 1])] {
        let e = t.lookup(&Syndrome::parse(syn).unwrap()).unwrap();
        assert_eq!(e.candidates, vec![vec![cands[0]], vec![cands[1]]]);
        assert_eq!(e.positions, vec![cands[0]]);
        assert!(e.is_collision());
    }
    let t = build_table(&spec(1, 1)).unwrap();
    assert_eq!(t.len(), 3);
    assert!(t.lookup(&Syndrome::parse("11").unwrap()).is_none());
}

#[test]
fn joint_orthonormality() {
    for (w, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let r = ProjectorRecovery::new(&spec(w, k), 0.05, RecoveryMode::Completed).unwrap();
        assert!(r.max_gram_offdiag() <= TOL);
    }
}

#[test]
fn projector_transfers_error_states() {
    for (w, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let s = spec(w, k);
        let gamma = 0.05;
        let r = ProjectorRecovery::new(&s, gamma, RecoveryMode::Completed).unwrap();
        for i in 0..s.logical_dim() {
            let word = codeword_index(&s, i).unwrap();
            for e in ErrorString::up_to_weight(s.n_qubits(), w).into_iter().filter(|e| e.weight() > 0) {
                let branch = e.apply(&word, gamma).unwrap();
                if branch.norm() == 0.0 {
                    continue;
                }
                let f = r.fidelity_contribution(&word, &branch).unwrap() / branch.norm_sqr();
                assert!((f - 1.0).abs() <= TOL, "{} {e} i={i}: {f}", s.label());
                let back = r.recover_error_state(i, &e).unwrap();
                assert!((inner(&word, &back).unwrap().norm() - 1.0).abs() <= TOL);
            }
        }
    }
}

#[test]
fn decode_codewords_and_error_states() {
    let s = spec(1, 2);
    for i in 0..4 {
        let d = decode_logical(&codeword_index(&s, i).unwrap(), &s).unwrap();
        assert_eq!(d.dominant(), i);
        assert!(d.leakage <= TOL);
    }
    let b = ErrorString::parse("001000")
        .unwrap()
        .apply(&codeword_index(&s, 0).unwrap(), 0.1)
        .unwrap();
    let d = decode_logical(&b, &s).unwrap();
    assert!(d.amplitudes.iter().all(|a| a.norm() <= TOL));
    assert!((d.leakage - b.norm_sqr()).abs() <= TOL);
}

#[test]
fn circuit_recovers_all_cases() {
    let s = spec(1, 2);
    for gamma in [0.1, 0.01] {
        for i in 0..4 {
            let word = codeword_index(&s, i).unwrap();
            for e in ErrorString::up_to_weight(6, 1) {
                let report = circuit_recovery(&s, &e.apply(&word, gamma).unwrap(), gamma, CircuitOptions::default()).unwrap();
                assert!(report.uncorrectable.is_empty());
                for o in &report.outcomes {
                    let amps = o.logical.amps();
                    let best = (0..4).max_by(|a, b| amps[*a].norm_sqr().total_cmp(&amps[*b].norm_sqr())).unwrap();
                    assert_eq!(best, i, "{e} i={i} {}", o.label);
                }
            }
        }
    }
}

#[test]
fn circuit_flags_weight_two() {
    let s = spec(1, 2);
    let b = ErrorString::parse("100010")
        .unwrap()
        .apply(&codeword_index(&s, 0).unwrap(), 0.1)
        .unwrap();
    let report = circuit_recovery(&s, &b, 0.1, CircuitOptions::default()).unwrap();
    assert!(!report.uncorrectable.is_empty());
}

#[test]
fn circuit_rejects_unsupported_codes() {
    let s = spec(2, 1);
    let w = codeword_index(&s, 0).unwrap();
    assert!(circuit_recovery(&s, &w, 0.1, CircuitOptions::default()).is_err());
}

#[test]
fn artificial_damping_branches() {
    let one = StateVector::basis(1, 1).unwrap();
    let g = 0.3;
    let r0 = artificial_ad(&one, 0, g, 0).unwrap();
    assert!((r0.branch.amp(1) - C64::new((1.0 - g).sqrt(), 0.0)).norm() <= TOL);
    let r1 = artificial_ad(&one, 0, g, 1).unwrap();
    assert!((r1.branch.amp(0).norm() - g.sqrt()).abs() <= TOL);
    assert!((r0.probability + r1.probability - 1.0).abs() <= TOL);
    assert!(artificial_ad(&one, 0, 0.0, 1).is_err());

    // natural A0 then artificial A0' at the same rate: |1> weight scales by (1 - g)
    let plus = StateVector::new(1, vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]).unwrap();
    let damped = ErrorString::none(1).apply(&plus, g).unwrap();
    let out = artificial_ad(&damped, 0, g, 0).unwrap().branch;
    let ratio = out.amp(1).norm() / out.amp(0).norm();
    assert!((ratio - (1.0 - g) * 0.8 / 0.6).abs() <= TOL);
}
