//! Overlap-matrix checks and the scaling of the residual with gamma.
//!
//! `cargo run --example aqec_scaling`

use adshor::verify::overlap::DEFAULT_GRID;
use adshor::verify::{overlap_matrix, residual_scaling};
use adshor::CodeSpec;

fn main() -> adshor::Result<()> {
    for (w, k) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        let spec = CodeSpec::new(w, k)?;
        let r = overlap_matrix(&spec, 0.01, w)?;
        let fit = residual_scaling(&spec, &DEFAULT_GRID)?;
        println!(
            "{:<9} errors {:>3}  step1 {:.1e}  step2 {:.1e}  slope {:>6}  (w+1 = {})",
            spec.label(),
            r.n_errors,
            r.step1_max,
            r.step2_max,
            fit.slope.map(|s| format!("{s:.3}")).unwrap_or_else(|| "exact".into()),
            w + 1
        );
        for (g, res) in fit.grid.iter().zip(&fit.residuals) {
            println!("    gamma {g:<6} residual {res:.3e}");
        }
    }
    Ok(())
}
