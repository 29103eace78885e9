//! `(a,b,0,0)`-dipoles on the double torus: the binomial-and-psi coefficient
//! formula against the assembled genus-2 series, including the a=2, b=3
//! value 75.

use dipole_atlas::genus::{b_genus, double_torus_ab_count};
use dipole_atlas::series::Truncation;
use dipole_atlas::util::rat_big;

fn main() {
    let b2 = b_genus(2, Truncation::new(7, 7, 0))
        .expect("double-torus series")
        .forget();

    println!("(a,b,0,0)-dipoles on the double torus: rows a = 0..5, columns b = 1..6");
    for a in 0..=5u32 {
        let mut row = Vec::new();
        for b in 1..=6u32 {
            let formula = double_torus_ab_count(a, b);
            let coeff = b2.egf_coeff(a + 1, b, 0, 0, 2).expect("window");
            assert_eq!(coeff, rat_big(formula.clone()));
            row.push(formula.to_string());
        }
        println!("  a={a}:  {}", row.join("  "));
    }
    println!();
    println!(
        "spot value: a=2, b=3 (seven edges) -> {}",
        double_torus_ab_count(2, 3)
    );
}
