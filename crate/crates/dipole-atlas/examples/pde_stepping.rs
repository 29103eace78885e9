//! Solve the join-cut equations degree by degree from the central initial
//! condition and compare the genus slices with the closed forms.

use dipole_atlas::genus::{b_by_stepping, b_genus, gamma_by_stepping, gamma_genus};
use dipole_atlas::series::Truncation;

fn main() {
    let trunc = Truncation::new(5, 5, 5);

    let b_tower = b_by_stepping(trunc, 2);
    println!(
        "stepped (a,b,0,0) tower at window (5,5): {} terms across genus 0..2",
        b_tower.num_terms()
    );
    for g in 0..=2u32 {
        let closed = b_genus(g, trunc).expect("closed slice");
        let stepped = b_tower.u_slice(2 * g);
        assert!(closed.sub(&stepped).is_zero());
        println!("  genus {g}: closed form = stepped slice ({} terms)", closed.num_terms());
    }

    let gamma_tower = gamma_by_stepping(trunc, 2);
    println!(
        "stepped (a,b,c,d) tower at window (5,5,5): {} terms",
        gamma_tower.num_terms()
    );
    for g in 0..=2u32 {
        let closed = gamma_genus(g, trunc).expect("closed slice");
        let stepped = gamma_tower.u_slice(2 * g);
        assert!(closed.sub(&stepped).is_zero());
        println!("  genus {g}: closed form = stepped slice ({} terms)", closed.num_terms());
    }
}
