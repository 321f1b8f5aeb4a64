//! Codewords of a few small codes, their block layout and excitation numbers.
//!
//! `cargo run --example codewords`

use adshor::code::{codeword_support, excitation_number, layout_ascii};
use adshor::code::codewords;
use adshor::qla::bits_of_index;
use adshor::CodeSpec;

fn main() -> adshor::Result<()> {
    for spec in [CodeSpec::new(1, 1)?, CodeSpec::new(2, 1)?, CodeSpec::new(1, 2)?] {
        println!("{} (w={}, K={}), rate {:.4}", spec.label(), spec.w, spec.k, spec.rate());
        print!("{}", layout_ascii(&spec));
        for i in 0..spec.logical_dim() {
            let terms: Vec<String> = codeword_support(&spec, i)
                .iter()
                .map(|(idx, a)| format!("{a:+.4}|{}>", bits_of_index(spec.n_qubits(), *idx)))
                .collect();
            println!("  |{i:0width$b}> = {}", terms.join(" "), width = spec.k);
        }
        println!();
    }

    let dual = CodeSpec::dual_rail(1, 1)?;
    println!("{} with dual rail:", dual.label());
    for (i, w) in codewords(&dual)?.iter().enumerate() {
        println!("  |{i}> excitation {:?}", excitation_number(w));
    }
    Ok(())
}
