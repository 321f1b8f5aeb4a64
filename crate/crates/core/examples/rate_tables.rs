//! Code-family rates and the qubit-count comparison.
//!
//! `cargo run --example rate_tables`

use adshor::verify::{family_rows, rate_tables};

fn main() {
    for f in family_rows(2, 3) {
        println!("{:<18} {:<20} N = {:>3} rate {:.4}", f.name, f.formula, f.n, f.rate);
    }
    println!("\n{:>2} {:>2} {:>4} {:>4} fewer", "w", "K", "N1", "N2");
    let rows = rate_tables();
    for r in &rows {
        println!("{:>2} {:>2} {:>4} {:>4} {}", r.w, r.k, r.n1, r.n2, r.fewer);
    }
    println!("{} of {} rows need fewer qubits", rows.iter().filter(|r| r.fewer).count(), rows.len());
}
