use adshor::channels::ErrorString;
use adshor::decoder::Backend;
use adshor::qla::C64;
use adshor::verify::ce::DEFAULT_DT;
use adshor::verify::overlap::{linear_fit, validate_grid, DEFAULT_GRID};
use adshor::verify::threshold::{closed_form_threshold, fidelity_margin};
use adshor::verify::{
    ce_certify, exact_fidelity, fidelity_sweep, fit_infidelity, overlap_matrix, probes, rate_tables,
    residual_scaling, sample_fidelity, threshold_rounds, FidelityConfig,
};
use adshor::{CodeSpec, Error};

const TOL: f64 = 1e-12;

fn spec(w: usize, k: usize) -> CodeSpec {
    CodeSpec::new(w, k).unwrap()
}

#[test]
fn six_two_overlaps() {
    let g = 0.07;
    let r = overlap_matrix(&spec(1, 2), g, 1).unwrap();
    let none = r.error_position(&ErrorString::none(6)).unwrap();
    let q = 1.0 - g;
    assert!((r.c(none, none).re - 0.5 * (1.0 + q.powi(6))).abs() <= TOL);
    let m = r.m(1, 1, none, none).re;
    assert!((m - 0.5 * (q.powi(2) + q.powi(4))).abs() <= TOL);
    assert!(r.residual >= 0.5 * (1.0 + q.powi(6) - q.powi(2) - q.powi(4)) - TOL);
    assert!(r.hermiticity <= TOL);
}

#[test]
fn cross_codeword_overlaps_vanish() {
    let r = overlap_matrix(&spec(1, 1), 0.2, 1).unwrap();
    let e = r.errors().len();
    for k in 0..e {
        for l in 0..e {
            assert!(r.m(0, 1, k, l).norm() <= TOL);
        }
    }
}

#[test]
fn overlap_rejects_large_w_max() {
    assert!(overlap_matrix(&spec(1, 1), 0.1, 2).is_err());
}

#[test]
fn residual_exponents() {
    for (w, k) in [(1, 1), (1, 2), (2, 1)] {
        let fit = residual_scaling(&spec(w, k), &DEFAULT_GRID).unwrap();
        assert!(fit.meets((w + 1) as f64, 0.15), "{w},{k}: {:?}", fit.slope);
    }
}

#[test]
fn grid_validation() {
    assert!(validate_grid(&DEFAULT_GRID, 4).is_ok());
    assert!(validate_grid(&[1e-1, 1e-2, 1e-3], 4).is_err());
    assert!(validate_grid(&[1e-1, 1e-2, 3e-2, 1e-3], 4).is_err());
    let (slope, intercept) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
    assert!((slope - 2.0).abs() <= TOL && (intercept - 1.0).abs() <= TOL);
}

#[test]
fn ce_positive_and_negative() {
    for k in [1, 2] {
        let r = ce_certify(&CodeSpec::dual_rail(1, k).unwrap(), -1.0, &DEFAULT_DT).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows.len(), 5);
    }
    let r = ce_certify(&spec(1, 1), -1.0, &DEFAULT_DT).unwrap();
    assert!(!r.pass);
}

#[test]
fn four_one_fidelity_closed_form() {
    // single-error paths: (1-g)^2 from no damping, 2 g (1-g)^3 from the
    // four single damps each reaching half of the probes' weight
    let cfg = FidelityConfig::default();
    let grid = [0.05, 0.02, 0.01];
    for r in fidelity_sweep(&spec(1, 1), &grid, &cfg).unwrap() {
        let g = r.gamma;
        let want = (1.0 - g).powi(2) + 2.0 * g * (1.0 - g).powi(3);
        assert!((r.termwise - want).abs() <= 1e-10, "gamma {g}: {} vs {want}", r.termwise);
        assert!(r.exact_worst >= r.termwise - 1e-10);
        let lit = r.literal.unwrap();
        assert!(lit < r.exact_worst);
    }
}

#[test]
fn fidelity_is_one_without_noise() {
    let cfg = FidelityConfig::default();
    let r = &fidelity_sweep(&spec(1, 2), &[0.0], &cfg).unwrap()[0];
    assert!((r.termwise - 1.0).abs() <= TOL && (r.exact_worst - 1.0).abs() <= TOL);
}

#[test]
fn fidelity_config_errors() {
    let cfg = FidelityConfig {
        rounds: 0,
        ..Default::default()
    };
    assert!(fidelity_sweep(&spec(1, 1), &[0.1], &cfg).is_err());
    let cfg = FidelityConfig {
        cutoff: Some(1),
        ..Default::default()
    };
    assert!(matches!(
        fidelity_sweep(&spec(1, 2), &[0.1], &cfg),
        Err(Error::TruncationBound { .. })
    ));
    assert!(fidelity_sweep(&spec(1, 1), &[], &FidelityConfig::default()).is_err());
}

#[test]
fn probe_sets() {
    assert_eq!(probes(&spec(1, 1), 20, 0).len(), 6);
    let p = probes(&spec(1, 2), 5, 3);
    assert_eq!(p.len(), 9);
    for v in &p {
        let n: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() <= TOL);
    }
    assert_eq!(p, probes(&spec(1, 2), 5, 3));
}

#[test]
fn infidelity_fit_recovers_coefficients() {
    let pts: Vec<_> = [1e-2, 3e-3, 1e-3].iter().map(|&g| (g, 5.0 * g * g - 6.0 * g * g * g)).collect();
    let fit = fit_infidelity(&pts).unwrap();
    assert!((fit.coefficient - 5.0).abs() < 0.1);
    assert!(fit_infidelity(&pts[..1]).is_err());
}

#[test]
fn circuit_backend_agrees_at_small_gamma() {
    let proj = FidelityConfig::default();
    let circ = FidelityConfig {
        backend: Backend::Circuit,
        ..Default::default()
    };
    let g = 1e-3;
    let a = &fidelity_sweep(&spec(1, 2), &[g], &proj).unwrap()[0];
    let b = &fidelity_sweep(&spec(1, 2), &[g], &circ).unwrap()[0];
    assert!((a.exact_worst - b.exact_worst).abs() <= 10.0 * g * g);
}

#[test]
fn threshold_values() {
    let g = 1.0 - (-1.0f64).exp();
    assert!((closed_form_threshold(g).unwrap() - std::f64::consts::LN_2 / 2.0).abs() <= TOL);
    let g = 1e-4;
    let t = closed_form_threshold(g).unwrap();
    assert!((t * 2.0 * g / std::f64::consts::LN_2 - 1.0).abs() < 1e-4);
    for g in [0.01, 0.05, 0.1] {
        let r = threshold_rounds(g).unwrap();
        assert!(r.relative_gap <= 1e-9);
        assert!(fidelity_margin(g, 0.5 * r.closed_form) > 0.0);
        assert!(fidelity_margin(g, 2.0 * r.closed_form) < 0.0);
    }
    assert!(threshold_rounds(0.0).is_err());
    assert!(threshold_rounds(1.0).is_err());
}

#[test]
fn rate_rows() {
    let rows = rate_tables();
    assert_eq!(rows.len(), 18);
    assert_eq!(rows.iter().filter(|r| r.fewer).count(), 12);
    assert_eq!(rows.iter().filter(|r| r.at_most).count(), 15);
    for r in &rows {
        assert_eq!(r.rate_n1, r.k as f64 / r.n1 as f64);
    }
}

#[test]
fn trajectories_match_enumeration() {
    let cfg = FidelityConfig::default();
    let s = spec(1, 1);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C64::new(h, 0.0), C64::new(h, 0.0)];
    let est = sample_fidelity(&s, 0.05, &cfg, &plus, 100_000, 11).unwrap();
    assert!(est.within_3sigma, "z = {}", est.z_score);
    let again = sample_fidelity(&s, 0.05, &cfg, &plus, 100_000, 11).unwrap();
    assert_eq!(est, again);
    let exact = exact_fidelity(&s, 0.05, &cfg, &plus).unwrap();
    assert_eq!(exact, est.exact);
}
