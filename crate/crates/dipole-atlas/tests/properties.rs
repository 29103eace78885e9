//! Property tests for the algebraic substrate: ring axioms on the tracked
//! window, the forgetting homomorphism, dump round-trips, and the string
//! index language.

use proptest::prelude::*;

use dipole_atlas::series::{FMultiset, Monomial, Series, Truncation};
use dipole_atlas::strings::{canonicalize, string_compositions, BinaryString, Symbol};
use dipole_atlas::util::rat_int;

fn arb_symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just(Symbol::Black), Just(Symbol::White)]
}

fn arb_word(max_len: usize) -> impl Strategy<Value = BinaryString> {
    prop::collection::vec(arb_symbol(), 0..=max_len).prop_map(BinaryString::new)
}

fn arb_nonempty_word(max_len: usize) -> impl Strategy<Value = BinaryString> {
    prop::collection::vec(arb_symbol(), 1..=max_len).prop_map(BinaryString::new)
}

/// Monomials over a small pool; `with_g` controls whether a root-face factor
/// may appear (series that multiply must keep at most one side g-bearing).
fn arb_monomial(with_g: bool) -> impl Strategy<Value = Monomial> {
    let f_entry = (arb_nonempty_word(3), 1u32..=2);
    (
        prop::option::of(arb_nonempty_word(3)),
        prop::collection::vec(f_entry, 0..=2),
        0u32..=3,
        0u32..=3,
        0u32..=3,
        0u32..=2,
        0u32..=1,
    )
        .prop_map(move |(g, f_words, x, y, v, w, u)| Monomial {
            g: if with_g { g } else { None },
            f: FMultiset::from_pairs(
                f_words
                    .into_iter()
                    .map(|(word, m)| (canonicalize(&word), m))
                    .collect(),
            ),
            x,
            y,
            v,
            w,
            u: 2 * u,
        })
}

fn arb_series(with_g: bool) -> impl Strategy<Value = Series> {
    prop::collection::vec((arb_monomial(with_g), -4i64..=4), 0..=5).prop_map(|terms| {
        let mut s = Series::zero(Truncation::new(6, 6, 6));
        for (m, c) in terms {
            s.insert(m, rat_int(c));
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_commutes_and_associates(
        a in arb_series(true),
        b in arb_series(true),
        c in arb_series(true),
    ) {
        prop_assert!(a.add(&b).sub(&b.add(&a)).is_zero());
        prop_assert!(a.add(&b).add(&c).sub(&a.add(&b.add(&c))).is_zero());
    }

    #[test]
    fn multiplication_commutes_and_associates(
        a in arb_series(false),
        b in arb_series(false),
        c in arb_series(false),
    ) {
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        prop_assert!(ab.sub(&ba).is_zero());
        let abc = ab.mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(abc.sub(&a_bc).is_zero());
    }

    #[test]
    fn multiplication_distributes(
        a in arb_series(true),
        b in arb_series(false),
        c in arb_series(false),
    ) {
        let lhs = a.mul(&b.add(&c)).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap());
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn forgetting_is_a_homomorphism(
        a in arb_series(true),
        b in arb_series(false),
    ) {
        let prod = a.mul(&b).unwrap();
        prop_assert!(prod.forget().sub(&a.forget().mul(&b.forget()).unwrap()).is_zero());
        let sum = a.add(&b);
        prop_assert!(sum.forget().sub(&a.forget().add(&b.forget())).is_zero());
    }

    #[test]
    fn dump_round_trips(a in arb_series(true)) {
        let parsed = Series::parse_terms(&a.dump_terms(), a.truncation()).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn canonicalization_is_rotation_invariant(word in arb_word(8), shift in 0usize..8) {
        let rotated = word.rotate_left(shift);
        prop_assert_eq!(canonicalize(&word), canonicalize(&rotated));
    }

    #[test]
    fn compositions_partition_the_word(word in arb_nonempty_word(7)) {
        let mut total = 0usize;
        for parts in 1..=word.len() {
            for comp in string_compositions(&word, parts).unwrap() {
                prop_assert_eq!(comp.concat(), word.clone());
                prop_assert!(dipole_atlas::strings::iota(&comp) < comp.num_parts().max(1));
                total += 1;
            }
        }
        prop_assert_eq!(total, 1 << (word.len() - 1));
    }
}
