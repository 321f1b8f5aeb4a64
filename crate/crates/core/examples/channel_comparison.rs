//! Amplitude damping against its stochastic Pauli approximation on one qubit.
//!
//! `cargo run --example channel_comparison`

use adshor::channels::{ad_kraus, channel_delta, pauli_approx, DensityMatrix2};
use adshor::qla::C64;

fn main() -> adshor::Result<()> {
    let plus = DensityMatrix2::new([C64::new(0.5, 0.0); 4])?;
    let states = [
        ("mixed", DensityMatrix2::maximally_mixed()),
        ("|1>", DensityMatrix2::new([C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)])?),
        ("|+>", plus),
    ];
    println!("{:>6} {:>6} {:>12} {:>12} {:>12}", "rho", "gamma", "d00", "|d01|", "d11");
    for gamma in [0.01, 0.05, 0.1, 0.3] {
        println!(
            "completeness residuals at {gamma}: AD {:.1e}, Pauli {:.1e}",
            ad_kraus(gamma)?.completeness_residual(),
            pauli_approx(gamma)?.completeness_residual()
        );
        for (name, rho) in &states {
            let d = channel_delta(rho, gamma)?;
            println!("{name:>6} {gamma:>6} {:>12.6} {:>12.6} {:>12.6}", d[0].re, d[1].norm(), d[3].re);
        }
    }
    Ok(())
}
