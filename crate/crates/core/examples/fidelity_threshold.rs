//! Worst-case fidelity of the [[4,1]] and [[8,1]] codes, the fitted
//! infidelity coefficient, and the break-even number of rounds.
//!
//! `cargo run --example fidelity_threshold`

use adshor::verify::fidelity::FIT_GRID;
use adshor::verify::{fidelity_sweep, fit_infidelity, threshold_rounds, FidelityConfig};
use adshor::CodeSpec;

fn main() -> adshor::Result<()> {
    let cfg = FidelityConfig::default();
    for spec in [CodeSpec::new(1, 1)?, CodeSpec::dual_rail(1, 1)?] {
        let records = fidelity_sweep(&spec, &FIT_GRID, &cfg)?;
        for r in &records {
            println!(
                "{} gamma {:<6} 1-F {:.4e}  worst {:.6}  uncompleted {:.4}",
                spec.label(),
                r.gamma,
                1.0 - r.termwise,
                r.exact_worst,
                r.literal.unwrap_or(f64::NAN)
            );
        }
        let pts: Vec<_> = records.iter().map(|r| (r.gamma, 1.0 - r.termwise)).collect();
        let fit = fit_infidelity(&pts)?;
        println!("  1-F = {:.3} gamma^2 (linear/quadratic {:.1e})", fit.coefficient, fit.linear_ratio);
    }
    for gamma in [0.01, 0.05, 0.1] {
        let t = threshold_rounds(gamma)?;
        println!("gamma {gamma}: T_th {:.4}, crossing {:.4}", t.closed_form, t.numeric);
    }
    Ok(())
}
