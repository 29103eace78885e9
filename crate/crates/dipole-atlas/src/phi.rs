//! The phi family: truncated realizations of
//! `phi(v, x_1..x_i) = sum_{n >= i} h_{n-i}(x_1..x_i) v^n/n!`
//! and its specializations, together with closed-form coefficient
//! extractors that provide an independent second path to the same numbers.
//!
//! Specializations:
//! - `phi_S(v)`: substitute `x_j = f_(W)` for white symbols and
//!   `x_j = w f_(B)` for black ones. Depends on `S` only through its symbol
//!   counts, so `Counts(i, j)` (i whites, j blacks) names the same function.
//! - `phi_i(y)`: substitute `v = y` and every `x_j = f_(B)`.

use num::bigint::BigInt;
use num::Zero;

use crate::error::AtlasError;
use crate::series::{Monomial, Series, Truncation, UNBOUNDED};
use crate::strings::{cyclic, BinaryString, Symbol};
use crate::util::{binomial, inv_factorial, rat_big, rat_int};

/// Which grade variable a phi realization lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PhiVar {
    Y,
    V,
}

/// Index of a phi function.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PhiSpec {
    /// The general function with `i` abstract slots; only `General(0)`
    /// (the constant 1) is realizable without slot values.
    General(u32),
    /// `phi_S(v)` for a binary string index.
    Str(BinaryString),
    /// `phi_{i,j}(v)`: `i` white slots, `j` black slots.
    Counts(u32, u32),
    /// `phi_i(y)`.
    YForm(u32),
}

/// Complete homogeneous symmetric function `h_j` evaluated at the given
/// series values. Negative `j` yields zero by convention; `h_0 = 1`.
pub fn complete_symmetric(j: i64, values: &[Series], trunc: Truncation) -> Series {
    if j < 0 {
        return Series::zero(trunc);
    }
    let j = j as usize;
    // h_d(x_1..x_k) = h_d(x_1..x_{k-1}) + x_k h_{d-1}(x_1..x_k):
    // fold the values in one at a time, updating degrees in ascending order.
    let mut h: Vec<Series> = Vec::with_capacity(j + 1);
    h.push(Series::one(trunc));
    for d in 1..=j {
        let _ = d;
        h.push(Series::zero(trunc));
    }
    for value in values {
        for d in 1..=j {
            let bump = value.mul(&h[d - 1]).expect("symmetric slots are g-free");
            h[d] = h[d].add(&bump);
        }
    }
    h.pop().unwrap_or_else(|| Series::one(trunc))
}

/// The general phi with explicit slot values, realized in the chosen
/// variable up to the given order.
pub fn phi_general(slots: &[Series], order: u32, var: PhiVar) -> Series {
    let trunc = phi_trunc(order, var);
    if slots.is_empty() {
        return Series::one(trunc);
    }
    let i = slots.len() as u32;
    let mut out = Series::zero(trunc);
    for n in i..=order {
        let h = complete_symmetric(i64::from(n) - i64::from(i), slots, trunc);
        let grade = match var {
            PhiVar::Y => Monomial::powers(0, n, 0, 0, 0),
            PhiVar::V => Monomial::powers(0, 0, n, 0, 0),
        };
        out = out.add(&h.mul_term(&grade, &inv_factorial(n)).expect("grade is g-free"));
    }
    out
}

fn phi_trunc(order: u32, var: PhiVar) -> Truncation {
    match var {
        PhiVar::Y => Truncation::new(UNBOUNDED, order, UNBOUNDED),
        PhiVar::V => Truncation::new(UNBOUNDED, UNBOUNDED, order),
    }
}

fn f_white() -> Series {
    Series::monomial(
        Monomial::of_f(cyclic(&[Symbol::White])),
        rat_int(1),
        Truncation::unbounded(),
    )
}

fn f_black() -> Series {
    Series::monomial(
        Monomial::of_f(cyclic(&[Symbol::Black])),
        rat_int(1),
        Truncation::unbounded(),
    )
}

fn w_f_black() -> Series {
    Series::monomial(
        Monomial {
            w: 1,
            ..Monomial::of_f(cyclic(&[Symbol::Black]))
        },
        rat_int(1),
        Truncation::unbounded(),
    )
}

/// Realize a phi function as an exact truncated series.
pub fn phi_series(spec: &PhiSpec, order: u32) -> Result<Series, AtlasError> {
    match spec {
        PhiSpec::General(0) => Ok(Series::one(phi_trunc(order, PhiVar::V))),
        PhiSpec::General(i) => Err(AtlasError::invalid(format!(
            "General({i}) needs explicit slot values; use phi_general"
        ))),
        PhiSpec::Str(s) => phi_series(
            &PhiSpec::Counts(s.count_white() as u32, s.count_black() as u32),
            order,
        ),
        PhiSpec::Counts(i, j) => {
            let mut slots = Vec::with_capacity((i + j) as usize);
            for _ in 0..*i {
                slots.push(f_white());
            }
            for _ in 0..*j {
                slots.push(w_f_black());
            }
            Ok(phi_general(&slots, order, PhiVar::V))
        }
        PhiSpec::YForm(i) => {
            let slots = vec![f_black(); *i as usize];
            Ok(phi_general(&slots, order, PhiVar::Y))
        }
    }
}

/// `[y^n/n!] <phi_i>`: `binomial(n-1, n-i)` for `n >= i`, else 0.
pub fn phi_i_coeff(i: u32, n: u32) -> BigInt {
    if i == 0 {
        return if n == 0 { BigInt::from(1) } else { BigInt::zero() };
    }
    if n < i {
        return BigInt::zero();
    }
    binomial(i64::from(n) - 1, i64::from(n) - i64::from(i))
}

/// `[w^d v^{c+d}/(c+d)!] w^k <phi_{i,j}>`, the case-split coefficient law
/// (general case, and the degenerate `i = 0` / `j = 0` / constant cases).
pub fn phi_ij_coeff(i: u32, j: u32, k: u32, c: u32, d: u32) -> BigInt {
    let (i, j, k, c, d) = (
        i64::from(i),
        i64::from(j),
        i64::from(k),
        i64::from(c),
        i64::from(d),
    );
    if i == 0 && j == 0 {
        return if c == 0 && d == 0 && k == 0 {
            BigInt::from(1)
        } else {
            BigInt::zero()
        };
    }
    if i == 0 {
        return if c == j - k && d >= k {
            binomial(d - k + j - 1, d - k)
        } else {
            BigInt::zero()
        };
    }
    if j == 0 {
        return if d == k && c + d >= i {
            binomial(c + d - 1, c + d - i)
        } else {
            BigInt::zero()
        };
    }
    if d >= k && c + k >= i + j {
        binomial(c + k - j - 1, c + k - j - i) * binomial(d - k + j - 1, d - k)
    } else {
        BigInt::zero()
    }
}

/// Derivative of a phi function with respect to `f_(W)` or `f_(B)`,
/// realized at the given order:
/// `d phi_{i,j} / d f_(W) = i phi_{i+1,j}`,
/// `d phi_{i,j} / d f_(B) = j w phi_{i,j+1}`,
/// `d phi_i / d f_(B) = i phi_{i+1}` (and zero with respect to `f_(W)`).
pub fn phi_f_derivative(spec: &PhiSpec, which: Symbol, order: u32) -> Result<Series, AtlasError> {
    match spec {
        PhiSpec::General(0) => Ok(Series::zero(phi_trunc(order, PhiVar::V))),
        PhiSpec::General(i) => Err(AtlasError::invalid(format!(
            "General({i}) has abstract slots; no f-derivative"
        ))),
        PhiSpec::Str(s) => phi_f_derivative(
            &PhiSpec::Counts(s.count_white() as u32, s.count_black() as u32),
            which,
            order,
        ),
        PhiSpec::Counts(i, j) => match which {
            Symbol::White => Ok(phi_series(&PhiSpec::Counts(i + 1, *j), order)?
                .scale(&rat_big(BigInt::from(*i)))),
            Symbol::Black => {
                let base = phi_series(&PhiSpec::Counts(*i, j + 1), order)?;
                let w = Monomial::powers(0, 0, 0, 1, 0);
                base.mul_term(&w, &rat_big(BigInt::from(*j)))
            }
        },
        PhiSpec::YForm(i) => match which {
            Symbol::Black => Ok(phi_series(&PhiSpec::YForm(i + 1), order)?
                .scale(&rat_big(BigInt::from(*i)))),
            Symbol::White => Ok(Series::zero(phi_trunc(order, PhiVar::Y))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::canonicalize;

    fn bs(text: &str) -> BinaryString {
        BinaryString::parse(text).unwrap()
    }

    #[test]
    fn h_base_cases() {
        let t = Truncation::unbounded();
        let vals = vec![f_white(), f_black()];
        assert_eq!(complete_symmetric(0, &vals, t), Series::one(t));
        assert!(complete_symmetric(-1, &vals, t).is_zero());
    }

    #[test]
    fn h2_of_two_slots() {
        // h_2(t1, t2) = t1^2 + t1 t2 + t2^2, on distinct f slots.
        let t = Truncation::unbounded();
        let t1 = Series::monomial(Monomial::of_f(cyclic(&[Symbol::White])), rat_int(1), t);
        let t2 = Series::monomial(
            Monomial::of_f(canonicalize(&bs("WW"))),
            rat_int(1),
            t,
        );
        let h2 = complete_symmetric(2, &[t1.clone(), t2.clone()], t);
        let expect = t1
            .mul(&t1)
            .unwrap()
            .add(&t1.mul(&t2).unwrap())
            .add(&t2.mul(&t2).unwrap());
        assert_eq!(h2, expect);
    }

    #[test]
    fn counts_zero_zero_is_one() {
        let s = phi_series(&PhiSpec::Counts(0, 0), 6).unwrap();
        assert_eq!(s.forget().egf_coeff(0, 0, 0, 0, 0).unwrap(), rat_int(1));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn y_form_forgotten_coefficients() {
        // <phi_1> has [y^n/n!] = 1 for n >= 1.
        let s = phi_series(&PhiSpec::YForm(1), 5).unwrap().forget();
        for n in 1..=5 {
            assert_eq!(s.egf_coeff(0, n, 0, 0, 0).unwrap(), rat_int(1));
        }
        assert_eq!(s.egf_coeff(0, 0, 0, 0, 0).unwrap(), rat_int(0));
    }

    #[test]
    fn phi_black_string_is_a_pure_power_series() {
        // phi_B(v) = sum_{n>=1} (w f_(B))^{n-1} v^n/n!.
        let s = phi_series(&PhiSpec::Str(bs("B")), 5).unwrap();
        for n in 1u32..=5 {
            let m = Monomial {
                f: crate::series::FMultiset::from_pairs(vec![(cyclic(&[Symbol::Black]), n - 1)]),
                v: n,
                w: n - 1,
                ..Monomial::one()
            };
            assert_eq!(s.coeff(&m), inv_factorial(n));
        }
        assert_eq!(s.num_terms(), 5);
    }

    #[test]
    fn phi_i_coeff_values() {
        assert_eq!(phi_i_coeff(2, 3), BigInt::from(2));
        assert_eq!(phi_i_coeff(3, 2), BigInt::zero());
        assert_eq!(phi_i_coeff(1, 1), BigInt::from(1));
    }

    #[test]
    fn phi_ij_coeff_values() {
        assert_eq!(phi_ij_coeff(1, 1, 0, 2, 5), BigInt::from(1));
        // i = 0 case with c = j - k.
        assert_eq!(phi_ij_coeff(0, 3, 1, 2, 4), BigInt::from(10));
        // j = 0 requires d = k.
        assert_eq!(phi_ij_coeff(2, 0, 1, 3, 2), BigInt::zero());
    }

    #[test]
    fn phi_ij_coeff_matches_direct_expansion() {
        for i in 0..=3u32 {
            for j in 0..=3u32 {
                let order = 8;
                let s = phi_series(&PhiSpec::Counts(i, j), order).unwrap().forget();
                for k in 0..=3u32 {
                    for d in 0..=6u32 {
                        for c in 0..=6u32 {
                            if c + d > order {
                                continue;
                            }
                            // [w^d v^{c+d}/(c+d)!] w^k phi: shift the w degree.
                            if d < k {
                                assert_eq!(phi_ij_coeff(i, j, k, c, d), BigInt::zero());
                                continue;
                            }
                            let got = s.egf_coeff(0, 0, c + d, d - k, 0).unwrap();
                            assert_eq!(
                                got,
                                rat_big(phi_ij_coeff(i, j, k, c, d)),
                                "mismatch at i={i} j={j} k={k} c={c} d={d}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_base_cases() {
        // d phi_{0,j} / d f_(W) = 0.
        let d = phi_f_derivative(&PhiSpec::Counts(0, 2), Symbol::White, 6).unwrap();
        assert!(d.is_zero());
        // d phi_{1,1} / d f_(W) = phi_{2,1}.
        let d = phi_f_derivative(&PhiSpec::Counts(1, 1), Symbol::White, 6).unwrap();
        let expect = phi_series(&PhiSpec::Counts(2, 1), 6).unwrap();
        assert_eq!(d, expect);
        // d phi_2 / d f_(B) = 2 phi_3.
        let d = phi_f_derivative(&PhiSpec::YForm(2), Symbol::Black, 6).unwrap();
        let expect = phi_series(&PhiSpec::YForm(3), 6).unwrap().scale(&rat_int(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn derivative_matches_termwise_differentiation() {
        let order = 7;
        for (i, j) in [(1u32, 1u32), (2, 1), (1, 2), (0, 2), (2, 0), (3, 2)] {
            let phi = phi_series(&PhiSpec::Counts(i, j), order).unwrap();
            for which in [Symbol::White, Symbol::Black] {
                let direct = phi.deriv_f(&cyclic(&[which]));
                let rule = phi_f_derivative(&PhiSpec::Counts(i, j), which, order).unwrap();
                assert!(direct.sub(&rule).is_zero(), "i={i} j={j} {which:?}");
            }
        }
        for i in 1..=4u32 {
            let phi = phi_series(&PhiSpec::YForm(i), order).unwrap();
            let direct = phi.deriv_f(&cyclic(&[Symbol::Black]));
            let rule = phi_f_derivative(&PhiSpec::YForm(i), Symbol::Black, order).unwrap();
            assert!(direct.sub(&rule).is_zero());
        }
    }

    #[test]
    fn symmetry_in_the_string_index() {
        let a = phi_series(&PhiSpec::Str(bs("BWB")), 6).unwrap();
        let b = phi_series(&PhiSpec::Str(bs("WBB")), 6).unwrap();
        assert_eq!(a, b);
    }
}
