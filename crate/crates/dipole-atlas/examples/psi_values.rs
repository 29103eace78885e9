//! Rooted dipole counts by face-degree sequence: psi for every partition of
//! n <= 6, with the (n-1)! universe totals.

use dipole_atlas::central::{partitions, psi};
use dipole_atlas::util::factorial;
use num::bigint::BigInt;
use num::Zero;

fn main() {
    for n in 1..=6u32 {
        let mut total = BigInt::zero();
        let mut parts = Vec::new();
        for lambda in partitions(n) {
            let value = psi(&lambda);
            total += &value;
            if !value.is_zero() {
                let shape: Vec<String> =
                    lambda.parts().iter().map(|p| p.to_string()).collect();
                parts.push(format!("({}) -> {}", shape.join(","), value));
            }
        }
        assert_eq!(total, factorial(n - 1));
        println!("n = {n}: total {total} rooted dipoles");
        for line in parts {
            println!("    {line}");
        }
    }
}
