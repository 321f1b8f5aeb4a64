//! Dual-rail codewords under the collective rotation: eigenphases, and the
//! composite CC-AD branches against AD alone.
//!
//! `cargo run --example cc_immunity`

use adshor::channels::composite_cc_ad;
use adshor::code::codeword_index;
use adshor::verify::ce::DEFAULT_DT;
use adshor::verify::{ce_certify, compare_cc_ad};
use adshor::CodeSpec;

fn main() -> adshor::Result<()> {
    for spec in [CodeSpec::dual_rail(1, 1)?, CodeSpec::dual_rail(1, 2)?, CodeSpec::new(1, 1)?] {
        let r = ce_certify(&spec, -1.0, &DEFAULT_DT)?;
        println!(
            "{:<16} excitations {:?} modulus defect {:.1e} phase spread {:.1e} pass {}",
            spec.label(),
            r.excitations,
            r.modulus_defect,
            r.phase_spread,
            r.pass
        );
    }

    let spec = CodeSpec::dual_rail(1, 1)?;
    let word = codeword_index(&spec, 1)?;
    for dt in DEFAULT_DT {
        let c = compare_cc_ad(&word, 0.05, -1.0, dt, None)?;
        println!("dt {dt:.3}: global phase {:+.4}, branch gap {:.1e} over {} branches", c.global_phase, c.max_branch_diff, c.n_branches);
    }

    // a few branches as JSON lines
    let e = composite_cc_ad(&word, 0.05, -1.0, 0.7, Some(1))?;
    let mut out = Vec::new();
    e.write_jsonl(&mut out, false)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
