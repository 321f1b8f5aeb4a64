use std::f64::consts::FRAC_1_SQRT_2;

use adshor::code::{
    codeword, codeword_index, codewords, encode, excitation_number, export_codeword, gf2_rank, layout_ascii,
    logical_ops, stabilizers, x_stabilizers, z_stabilizers, Excitation, PauliString,
};
use adshor::qla::{tensor, StateVector, C64};
use adshor::{CodeSpec, Error};

const TOL: f64 = 1e-12;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn close(a: &StateVector, b: &StateVector) -> bool {
    a.max_abs_diff(b).unwrap() <= TOL
}

fn from_terms(n: usize, terms: &[(&str, f64)]) -> StateVector {
    let entries: Vec<_> = terms
        .iter()
        .map(|(b, a)| (usize::from_str_radix(b, 2).unwrap(), c(*a)))
        .collect();
    StateVector::from_sparse(n, &entries).unwrap()
}

#[test]
fn qubit_counts_and_rates() {
    for (w, k, n) in [(1, 1, 4), (1, 2, 6), (2, 1, 9), (2, 2, 12), (3, 2, 20)] {
        let s = CodeSpec::new(w, k).unwrap();
        assert_eq!(s.n_qubits(), n);
        assert_eq!(s.rate(), k as f64 / n as f64);
        let d = CodeSpec::dual_rail(w, k).unwrap();
        assert_eq!(d.n_qubits(), 2 * n);
    }
    assert!(CodeSpec::new(0, 1).is_err());
    assert!(CodeSpec::new(1, 0).is_err());
}

#[test]
fn listed_codewords() {
    let s = CodeSpec::new(1, 1).unwrap();
    let want = from_terms(4, &[("0000", FRAC_1_SQRT_2), ("1111", FRAC_1_SQRT_2)]);
    assert!(close(&codeword(&s, &[0]).unwrap(), &want));

    let s = CodeSpec::new(2, 1).unwrap();
    let want = from_terms(
        9,
        &[("111111111", 0.5), ("000000111", 0.5), ("111000000", 0.5), ("000111000", 0.5)],
    );
    assert!(close(&codeword(&s, &[1]).unwrap(), &want));

    let s = CodeSpec::new(1, 2).unwrap();
    let want = from_terms(6, &[("000011", FRAC_1_SQRT_2), ("111100", FRAC_1_SQRT_2)]);
    assert!(close(&codeword(&s, &[0, 1]).unwrap(), &want));
}

#[test]
fn codeword_rejects_wrong_length() {
    let s = CodeSpec::new(1, 2).unwrap();
    assert!(codeword(&s, &[0]).is_err());
    assert!(codeword(&s, &[0, 1, 1]).is_err());
}

#[test]
fn encode_basis_and_uniform() {
    let s = CodeSpec::new(1, 2).unwrap();
    for i in 0..4 {
        let mut amps = vec![c(0.0); 4];
        amps[i] = c(1.0);
        assert!(close(&encode(&s, &amps).unwrap(), &codeword_index(&s, i).unwrap()));
    }
    let uniform = encode(&s, &[c(0.5); 4]).unwrap();
    assert!((uniform.norm() - 1.0).abs() <= TOL);
}

#[test]
fn encode_rejects_unnormalized() {
    let s = CodeSpec::new(1, 1).unwrap();
    assert!(matches!(encode(&s, &[c(1.0), c(1.0)]), Err(Error::NotNormalized { .. })));
    assert!(encode(&s, &[c(1.0)]).is_err());
}

#[test]
fn plus_state_factorizes() {
    // |+>_AD = |+>_rep (x) |+>_rep with |+>_rep = (|00> + |11>)/sqrt2
    let s = CodeSpec::new(1, 1).unwrap();
    let plus = encode(&s, &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
    let rep = from_terms(2, &[("00", FRAC_1_SQRT_2), ("11", FRAC_1_SQRT_2)]);
    assert!(close(&plus, &tensor(&rep, &rep)));
}

#[test]
fn stabilizer_lists() {
    let s = CodeSpec::new(1, 2).unwrap();
    let z: Vec<_> = ["Z0Z1", "Z2Z3", "Z4Z5"].iter().map(|t| PauliString::parse(6, t).unwrap()).collect();
    assert_eq!(z_stabilizers(&s), z);
    // w = 1: one all-X generator over blocks 0..K
    let x = x_stabilizers(&s);
    assert_eq!(x, vec![PauliString::parse(6, "X0X1X2X3X4X5").unwrap()]);
    for g in &x {
        for w in codewords(&s).unwrap() {
            assert!(close(&g.apply(&w).unwrap(), &w));
        }
    }
}

#[test]
fn generators_commute_and_are_independent() {
    for (w, k) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)] {
        let s = CodeSpec::new(w, k).unwrap();
        let g = stabilizers(&s);
        assert_eq!(z_stabilizers(&s).len(), w * (w + k));
        assert_eq!(x_stabilizers(&s).len(), w);
        for a in &g {
            for b in &g {
                assert!(a.commutes_with(b));
            }
        }
        let rows: Vec<_> = g.iter().map(|p| p.symplectic()).collect();
        assert_eq!(gf2_rank(&rows), s.n_qubits() - k);
    }
}

#[test]
fn stabilizers_fix_codewords() {
    for (w, k) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        let s = CodeSpec::new(w, k).unwrap();
        let words = codewords(&s).unwrap();
        for g in stabilizers(&s) {
            for c in &words {
                assert!(close(&g.apply(c).unwrap(), c), "{g:?} on {}", s.label());
            }
        }
    }
}

#[test]
fn logical_x_flips_bits() {
    for (w, k) in [(1, 2), (2, 1)] {
        let s = CodeSpec::new(w, k).unwrap();
        let ops = logical_ops(&s);
        for i in 0..1usize << k {
            let word = codeword_index(&s, i).unwrap();
            for (l, x) in ops.x.iter().enumerate() {
                let flipped = i ^ (1 << (k - 1 - l));
                assert!(close(&x.apply(&word).unwrap(), &codeword_index(&s, flipped).unwrap()));
            }
            let all = ops.x_all.apply(&word).unwrap();
            assert!(close(&all, &codeword_index(&s, i ^ ((1 << k) - 1)).unwrap()));
        }
    }
}

#[test]
fn logical_z_phases_and_algebra() {
    let s = CodeSpec::new(1, 2).unwrap();
    let ops = logical_ops(&s);
    for i in 0..4usize {
        let word = codeword_index(&s, i).unwrap();
        for (l, z) in ops.z.iter().enumerate() {
            let sign = if (i >> (1 - l)) & 1 == 1 { -1.0 } else { 1.0 };
            assert!(close(&z.apply(&word).unwrap(), &word.scaled(c(sign))));
        }
    }
    for (l, x) in ops.x.iter().enumerate() {
        for (m, z) in ops.z.iter().enumerate() {
            assert_eq!(x.commutes_with(z), l != m);
        }
    }
}

#[test]
fn excitation_numbers() {
    let d = CodeSpec::dual_rail(1, 1).unwrap();
    for w in codewords(&d).unwrap() {
        assert_eq!(excitation_number(&w), Excitation::Constant(4));
    }
    let plain = codeword_index(&CodeSpec::new(1, 1).unwrap(), 0).unwrap();
    assert_eq!(excitation_number(&plain), Excitation::NotConstant);
    let r = 1.0 / 3f64.sqrt();
    let w3 = from_terms(3, &[("110", r), ("101", r), ("011", r)]);
    assert_eq!(excitation_number(&w3), Excitation::Constant(2));
}

#[test]
fn dual_rail_rewrites_bits() {
    let d = CodeSpec::dual_rail(1, 1).unwrap();
    let want = from_terms(8, &[("01010101", FRAC_1_SQRT_2), ("10101010", FRAC_1_SQRT_2)]);
    assert!(close(&codeword_index(&d, 0).unwrap(), &want));
}

#[test]
fn export_skips_zero_amplitudes() {
    let s = CodeSpec::new(2, 1).unwrap();
    let e = export_codeword(&s, 1).unwrap();
    assert_eq!(e.amplitudes.len(), 4);
    let json = serde_json::to_value(&e).unwrap();
    assert!(json.get("spec").is_some() && json.get("i").is_some());
}

#[test]
fn layout_has_one_row_per_block() {
    let s = CodeSpec::new(2, 2).unwrap();
    assert_eq!(layout_ascii(&s).lines().count(), s.n_blocks());
}
