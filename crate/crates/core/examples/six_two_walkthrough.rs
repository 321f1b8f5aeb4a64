//! The [[6,2]] code end to end: damped states, syndromes and the gate-level
//! recovery of every single-damping case, next to the projector recovery.
//!
//! `cargo run --example six_two_walkthrough -- 0.05`

use adshor::channels::ErrorString;
use adshor::code::codeword_index;
use adshor::decoder::{build_table, circuit_recovery, CircuitOptions};
use adshor::repro::recovered_cases;
use adshor::CodeSpec;

fn main() -> adshor::Result<()> {
    let gamma: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let spec = CodeSpec::new(1, 2)?;

    println!("lookup table:");
    for e in build_table(&spec)?.entries.values() {
        println!("  {} -> {:?} (candidates {:?})", e.syndrome, e.positions, e.candidates);
    }

    // one traced case: |10> with qubit 5 damped
    let word = codeword_index(&spec, 0b10)?;
    let branch = ErrorString::parse("000001")?.apply(&word, gamma)?;
    let report = circuit_recovery(&spec, &branch, gamma, CircuitOptions::default())?;
    for o in &report.outcomes {
        println!("outcome {} syndrome {}:", o.label, o.syndrome);
        for step in &o.trace {
            let amps: Vec<String> = step.amplitudes.iter().map(|(b, re, _)| format!("{re:+.4}|{b}>")).collect();
            println!("  {:<24} {}", step.step, amps.join(" "));
        }
    }

    println!("\n{:>6} {:>3} {:>8} {:>10} {:>8} {:>8}", "k", "i", "syndrome", "coef", "circuit", "proj");
    for c in recovered_cases(gamma, CircuitOptions::default())? {
        println!(
            "{:>6} {:>3} {:>8} {:>10.6} {:>8} {:>8}",
            c.k, c.i, c.syndrome, c.coefficient, c.circuit_correct, c.projector_correct
        );
    }
    Ok(())
}
