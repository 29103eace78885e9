//! Closed-form counts on the torus: the `b(a+1)` law for `(a,b,0,0)`-dipoles
//! and the five-case formula for general `(a,b,c,d)`-dipoles, cross-read
//! from the assembled genus-1 solution series.

use dipole_atlas::genus::{b_genus, torus_abcd_count};
use dipole_atlas::series::Truncation;

fn main() {
    let b1 = b_genus(1, Truncation::new(7, 7, 0))
        .expect("torus series")
        .forget();

    println!("(a,b,0,0)-dipoles on the torus: rows a = 0..5, columns b = 1..6");
    for a in 0..=5u32 {
        let row: Vec<String> = (1..=6u32)
            .map(|b| {
                let coeff = b1.egf_coeff(a + 1, b, 0, 0, 1).expect("window");
                assert_eq!(coeff, dipole_atlas::util::rat_int(i64::from(b * (a + 1))));
                coeff.to_string()
            })
            .collect();
        println!("  a={a}:  {}", row.join("  "));
    }

    println!();
    println!("five-case torus formula, spot checks:");
    for (a, b, c, d) in [(0, 1, 1, 0), (1, 0, 2, 1), (2, 0, 0, 0), (1, 2, 0, 3)] {
        println!(
            "  (a,b,c,d) = ({a},{b},{c},{d})  ->  {}",
            torus_abcd_count(a, b, c, d)
        );
    }
}
