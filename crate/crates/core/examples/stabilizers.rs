//! Stabilizer generators and logical operators of the [[12,2]] code, with a
//! check that every generator fixes every codeword.
//!
//! `cargo run --example stabilizers`

use adshor::code::{codewords, equivalent_mod, logical_ops, stabilizers, x_stabilizers, z_stabilizers, PauliString};
use adshor::CodeSpec;

fn show(p: &PauliString) -> String {
    p.support()
        .iter()
        .map(|&q| format!("{:?}{q}", p.letter(q)))
        .collect()
}

fn main() -> adshor::Result<()> {
    let spec = CodeSpec::new(2, 2)?;
    println!("{}", spec.label());
    println!("Z generators:");
    for g in z_stabilizers(&spec) {
        println!("  {}", show(&g));
    }
    println!("X generators:");
    for g in x_stabilizers(&spec) {
        println!("  {}", show(&g));
    }
    let ops = logical_ops(&spec);
    for (l, (x, z)) in ops.x.iter().zip(&ops.z).enumerate() {
        println!("logical {l}: X = {}, Z = {}", show(x), show(z));
    }
    println!("X_all = {}", show(&ops.x_all));

    let group = stabilizers(&spec);
    let alt = PauliString::parse(spec.n_qubits(), "Z0Z3Z7")?;
    println!("Z0Z3Z7 equivalent to Z_0: {}", equivalent_mod(&alt, &ops.z[0], &group));

    let words = codewords(&spec)?;
    let worst = group
        .iter()
        .flat_map(|g| words.iter().map(move |c| g.apply(c).and_then(|s| s.max_abs_diff(c))))
        .collect::<adshor::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("max |S c - c| over generators and codewords: {worst:.1e}");
    Ok(())
}
