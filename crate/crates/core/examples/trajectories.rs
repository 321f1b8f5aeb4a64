//! Monte Carlo trajectories against exact branch enumeration.
//!
//! `cargo run --release --example trajectories`

use adshor::decoder::Backend;
use adshor::qla::C64;
use adshor::verify::trajectories::MIN_SHOTS;
use adshor::verify::{sample_fidelity, FidelityConfig};
use adshor::CodeSpec;

fn main() -> adshor::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C64::new(h, 0.0), C64::new(h, 0.0)];
    for (spec, backend) in [
        (CodeSpec::new(1, 1)?, Backend::Projector),
        (CodeSpec::new(1, 1)?, Backend::Circuit),
        (CodeSpec::dual_rail(1, 1)?, Backend::Projector),
    ] {
        let cfg = FidelityConfig {
            backend,
            rounds: 2,
            ..Default::default()
        };
        let est = sample_fidelity(&spec, 0.05, &cfg, &plus, MIN_SHOTS, 42)?;
        println!(
            "{:<16} {:?}: sampled {:.5} +- {:.5}, exact {:.5}, z {:.2}",
            spec.label(),
            backend,
            est.mean,
            est.std_err,
            est.exact,
            est.z_score
        );
    }
    Ok(())
}
