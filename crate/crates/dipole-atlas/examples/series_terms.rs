//! Inspect a solution series directly: build the torus slice, take a few
//! structured terms, then extract exponential coefficients.

use dipole_atlas::genus::gamma_genus;
use dipole_atlas::series::Truncation;

fn main() {
    let gamma1 = gamma_genus(1, Truncation::new(4, 4, 4)).expect("torus series");
    println!(
        "Gamma^(1) at window (4,4,4): {} terms with face structure intact",
        gamma1.num_terms()
    );
    println!("first terms in the monomial order:");
    for (m, c) in gamma1.terms().take(8) {
        println!("  {c} * {m}");
    }

    let forgotten = gamma1.forget();
    println!();
    println!(
        "after forgetting face structure: {} terms; some counts:",
        forgotten.num_terms()
    );
    for (a, b, c, d) in [(0u32, 1u32, 1u32, 0u32), (1, 0, 2, 1), (0, 2, 0, 1)] {
        let count = forgotten.egf_coeff(a + 1, b, c + d, d, 1).expect("window");
        println!("  (a,b,c,d) = ({a},{b},{c},{d}) -> {count}");
    }

    let dump = gamma1.dump_terms();
    let rows = dump.as_array().unwrap();
    println!();
    println!("JSON dump holds {} rows; row 0:", rows.len());
    println!("  {}", serde_json::to_string(&rows[0]).unwrap());
}
