//! Brute-force the rotation-system universe at five edges and print the
//! joint (p,q) tables per genus next to the series counts.

use dipole_atlas::genus::pqn_count;
use dipole_atlas::oracle;

fn main() {
    let n = 5usize;
    let table = oracle::pqn_table(n, false).expect("small universe");
    println!("bi-rooted dipoles with {n} edges: (n-1)! (n-1) = 96 instances");
    for g in 0..=1usize {
        println!("genus {g}: rows p = 1..4, columns q = 1..4");
        for p in 1..n {
            let row: Vec<String> = (1..n)
                .map(|q| {
                    let by_oracle = table.get(&(p, q, g)).copied().unwrap_or(0);
                    let by_series =
                        pqn_count(p as u32, q as u32, n as u32, g as u32, 6).expect("series");
                    assert_eq!(by_series.to_string(), by_oracle.to_string());
                    format!("{by_oracle}")
                })
                .collect();
            println!("  p={p}:  {}", row.join("  "));
        }
    }
    println!("series counts match the enumeration cell for cell");
}
