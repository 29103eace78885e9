//! Preimage series of the cut operators: `tau_{R,k}` solves
//! `(d/dy - C') tau_{R,k} = g_{B R} phi_k(y)` and `tau_{R,S}` solves
//! `(d/dv - C'') tau_{R,S} = g_{B R} phi_S(v)` with vanishing initial
//! condition. Both admit closed forms as sums over string compositions of
//! `R`, which is what this module builds; [`verify_tau`] checks any key
//! against its defining equation.
//!
//! `tau_{R,S}` depends on `S` only through its symbol counts, so the
//! `(R, i, j)` keying used by the double-torus tables is also provided.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num::rational::BigRational;
use num::One;

use crate::error::AtlasError;
use crate::operators::{apply, OperatorKind};
use crate::phi::{phi_series, PhiSpec};
use crate::series::{FMultiset, Monomial, Series, Truncation, UNBOUNDED};
use crate::strings::{
    all_string_compositions, canonicalize, iota, BinaryString, Symbol,
};

/// Key of a preimage function.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TauKey {
    /// `tau_{R,k}` with `R` nonempty.
    Rk(BinaryString, u32),
    /// `tau_{R,S}`; `R` may be empty.
    Rs(BinaryString, BinaryString),
}

/// The combinatorial skeleton of `tau_{R,k}`: for each composition size `i`,
/// the sum `sum_{eta in C_i(R)} g_{B eta_1} prod_{j>=2} f_(B eta_j)`.
/// The full function is `sum_i phi_{k+i}(y) * skeleton[i]`.
pub(crate) fn tau_rk_skeleton(r: &BinaryString) -> Result<BTreeMap<u32, Series>, AtlasError> {
    if r.is_empty() {
        return Err(AtlasError::invalid("tau_{R,k} requires nonempty R"));
    }
    let black = BinaryString::new(vec![Symbol::Black]);
    let mut by_size: BTreeMap<u32, Series> = BTreeMap::new();
    for comp in all_string_compositions(r)? {
        let i = comp.num_parts() as u32;
        let mut f = FMultiset::empty();
        for part in &comp.parts()[1..] {
            f = f.insert(canonicalize(&black.concat(part)), 1);
        }
        let m = Monomial {
            g: Some(black.concat(&comp.parts()[0])),
            f,
            ..Monomial::one()
        };
        by_size
            .entry(i)
            .or_insert_with(|| Series::zero(Truncation::unbounded()))
            .insert(m, BigRational::one());
    }
    Ok(by_size)
}

/// Closed form of `tau_{R,k}` realized to the given y-order.
pub fn tau_rk(r: &BinaryString, k: u32, order: u32) -> Result<Series, AtlasError> {
    let mut out = Series::zero(Truncation::new(UNBOUNDED, order, UNBOUNDED));
    for (i, skeleton) in tau_rk_skeleton(r)? {
        let phi = phi_series(&PhiSpec::YForm(k + i), order)?;
        out = out.add(&phi.mul(&skeleton)?);
    }
    Ok(out)
}

/// One additive piece of the `tau_{R,S}` closed form: a g/f/w monomial sum
/// whose phi index is `S` with `extra_white` whites and `extra_black` blacks
/// prepended.
#[derive(Clone, Debug)]
pub(crate) struct TauRsPiece {
    pub extra_white: u32,
    pub extra_black: u32,
    pub skeleton: Series,
}

/// The `tau_{R,S}` closed form as phi-indexed pieces. For every composition
/// `eta = (eta_1..eta_k)` of `R`, writing `pw`/`pb` for the white/black
/// counts among the parts' first symbols:
///
/// - `zeta_1`: `w^iota(eta) g_{B eta_k} Omega(eta)` with `(pw, pb)` extra
///   phi symbols;
/// - `zeta_2`: `w^{iota(eta)+1} g_B f_(B eta_k) Omega(eta)` with
///   `(pw, pb+1)`;
///
/// where `Omega(eta) = prod_{j<k} f_(eta_j eta_{j+1,1})`. The empty-`R` case
/// is the single piece `g_B` with one extra black.
pub(crate) fn tau_rs_pieces(r: &BinaryString) -> Result<Vec<TauRsPiece>, AtlasError> {
    let black = BinaryString::new(vec![Symbol::Black]);
    if r.is_empty() {
        return Ok(vec![TauRsPiece {
            extra_white: 0,
            extra_black: 1,
            skeleton: Series::monomial(
                Monomial::of_g(black),
                BigRational::one(),
                Truncation::unbounded(),
            ),
        }]);
    }
    let mut pieces = Vec::new();
    for comp in all_string_compositions(r)? {
        let parts = comp.parts();
        let k = parts.len();
        let w_power = iota(&comp) as u32;
        let mut pw = 0u32;
        let mut pb = 0u32;
        for part in parts {
            match part.first().expect("parts are nonempty") {
                Symbol::White => pw += 1,
                Symbol::Black => pb += 1,
            }
        }
        let mut omega = FMultiset::empty();
        for j in 0..k - 1 {
            let first_next = parts[j + 1].slice(1, 1);
            omega = omega.insert(canonicalize(&parts[j].concat(&first_next)), 1);
        }
        let last = &parts[k - 1];
        pieces.push(TauRsPiece {
            extra_white: pw,
            extra_black: pb,
            skeleton: Series::monomial(
                Monomial {
                    g: Some(black.concat(last)),
                    f: omega.clone(),
                    w: w_power,
                    ..Monomial::one()
                },
                BigRational::one(),
                Truncation::unbounded(),
            ),
        });
        pieces.push(TauRsPiece {
            extra_white: pw,
            extra_black: pb + 1,
            skeleton: Series::monomial(
                Monomial {
                    g: Some(black.clone()),
                    f: omega.insert(canonicalize(&black.concat(last)), 1),
                    w: w_power + 1,
                    ..Monomial::one()
                },
                BigRational::one(),
                Truncation::unbounded(),
            ),
        });
    }
    Ok(pieces)
}

type TauRsCache = Mutex<HashMap<(String, u32, u32, u32), Series>>;

fn tau_rs_cache() -> &'static TauRsCache {
    static CACHE: std::sync::OnceLock<TauRsCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Closed form of `tau_{R,S}` realized to the given v-order, keyed by the
/// symbol counts of `S` (`s_white` whites, `s_black` blacks).
pub fn tau_rs_counts(
    r: &BinaryString,
    s_white: u32,
    s_black: u32,
    order: u32,
) -> Result<Series, AtlasError> {
    let key = (r.to_string(), s_white, s_black, order);
    if let Some(hit) = tau_rs_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let mut out = Series::zero(Truncation::new(UNBOUNDED, UNBOUNDED, order));
    for piece in tau_rs_pieces(r)? {
        let phi = phi_series(
            &PhiSpec::Counts(s_white + piece.extra_white, s_black + piece.extra_black),
            order,
        )?;
        out = out.add(&phi.mul(&piece.skeleton)?);
    }
    tau_rs_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// Closed form of `tau_{R,S}` with `S` given as a string.
pub fn tau_rs(r: &BinaryString, s: &BinaryString, order: u32) -> Result<Series, AtlasError> {
    tau_rs_counts(r, s.count_white() as u32, s.count_black() as u32, order)
}

/// Unrolling of the recursion
/// `tau_{R,k} = g_{B R} phi_{k+1} + sum_i f_(B R_{i+1}..R_l) tau_{R_1..R_i, k+1}`,
/// used as an independent construction in tests.
pub fn tau_rk_recursive(r: &BinaryString, k: u32, order: u32) -> Result<Series, AtlasError> {
    if r.is_empty() {
        return Err(AtlasError::invalid("tau_{R,k} requires nonempty R"));
    }
    let black = BinaryString::new(vec![Symbol::Black]);
    let l = r.len();
    let head = Series::monomial(
        Monomial::of_g(black.concat(r)),
        BigRational::one(),
        Truncation::unbounded(),
    )
    .mul(&phi_series(&PhiSpec::YForm(k + 1), order)?)?;
    let mut out = head;
    for i in 1..l {
        let f = canonicalize(&black.concat(&r.slice(i + 1, l)));
        let tail = tau_rk_recursive(&r.slice(1, i), k + 1, order)?;
        out = out.add(&tail.mul_term(&Monomial::of_f(f), &BigRational::one())?);
    }
    Ok(out)
}

/// Unrolling of the recursion for `tau_{tR,S}` (first symbol `t`, rest `R`):
/// `tau_{tR,S} = phi_{tS} g_{B tR}
///  + sum_{1<=i<=l(R)} f_(t R_1..R_i) w^{[R_i=B]} tau_{R_i..R_l, tS}
///  + w f_(B tR) tau_{eps, tS}`.
pub fn tau_rs_recursive(
    r: &BinaryString,
    s_white: u32,
    s_black: u32,
    order: u32,
) -> Result<Series, AtlasError> {
    let black = BinaryString::new(vec![Symbol::Black]);
    if r.is_empty() {
        let phi = phi_series(&PhiSpec::Counts(s_white, s_black + 1), order)?;
        return phi.mul_term(&Monomial::of_g(black), &BigRational::one());
    }
    let t = r.slice(1, 1);
    let rest = r.slice(2, r.len());
    let l = rest.len();
    let (ts_white, ts_black) = match t.get(1) {
        Symbol::White => (s_white + 1, s_black),
        Symbol::Black => (s_white, s_black + 1),
    };
    let mut out = phi_series(&PhiSpec::Counts(ts_white, ts_black), order)?
        .mul_term(&Monomial::of_g(black.concat(r)), &BigRational::one())?;
    for i in 1..=l {
        let f = canonicalize(&t.concat(&rest.slice(1, i)));
        let w_power = if rest.get(i).is_black() { 1 } else { 0 };
        let tail = tau_rs_recursive(&rest.slice(i, l), ts_white, ts_black, order)?;
        let m = Monomial {
            f: FMultiset::single(f),
            w: w_power,
            ..Monomial::one()
        };
        out = out.add(&tail.mul_term(&m, &BigRational::one())?);
    }
    let eps_tail = tau_rs_recursive(&BinaryString::empty(), ts_white, ts_black, order)?;
    let m = Monomial {
        f: FMultiset::single(canonicalize(&black.concat(r))),
        w: 1,
        ..Monomial::one()
    };
    out = out.add(&eps_tail.mul_term(&m, &BigRational::one())?);
    Ok(out)
}

/// Residual of the defining equation: `(d - C) tau - g_{B R} phi`, truncated
/// to the window where the derivative is exact. Empty means the key checks.
/// The vanishing initial condition is asserted directly.
pub fn verify_tau(key: &TauKey, order: u32) -> Result<Series, AtlasError> {
    let black = BinaryString::new(vec![Symbol::Black]);
    match key {
        TauKey::Rk(r, k) => {
            let tau = tau_rk(r, *k, order)?;
            assert!(tau.at_y_zero().is_zero(), "tau_{{R,k}} must vanish at y=0");
            let rhs = phi_series(&PhiSpec::YForm(*k), order)?
                .mul_term(&Monomial::of_g(black.concat(r)), &BigRational::one())?;
            let residual = tau.deriv_y().sub(&apply(OperatorKind::CPrime, &tau)).sub(&rhs);
            Ok(residual.truncate_to(Truncation::new(UNBOUNDED, order - 1, UNBOUNDED)))
        }
        TauKey::Rs(r, s) => {
            let tau = tau_rs(r, s, order)?;
            assert!(tau.at_v_zero().is_zero(), "tau_{{R,S}} must vanish at v=0");
            let rhs = phi_series(&PhiSpec::Str(s.clone()), order)?
                .mul_term(&Monomial::of_g(black.concat(r)), &BigRational::one())?;
            let residual = tau
                .deriv_v()
                .sub(&apply(OperatorKind::CDoublePrime, &tau))
                .sub(&rhs);
            Ok(residual.truncate_to(Truncation::new(UNBOUNDED, UNBOUNDED, order - 1)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::phi_i_coeff;
    use crate::strings::cyclic;
    use crate::util::{binomial, rat_big};

    fn bs(text: &str) -> BinaryString {
        BinaryString::parse(text).unwrap()
    }

    #[test]
    fn tau_bw_0_has_the_two_term_form() {
        // tau_{BW,0} = phi_1(y) g_{BBW} + phi_2(y) g_{BB} f_(BW).
        let order = 6;
        let got = tau_rk(&bs("BW"), 0, order).unwrap();
        let phi1 = phi_series(&PhiSpec::YForm(1), order).unwrap();
        let phi2 = phi_series(&PhiSpec::YForm(2), order).unwrap();
        let expect = phi1
            .mul_term(&Monomial::of_g(bs("BBW")), &BigRational::one())
            .unwrap()
            .add(
                &phi2
                    .mul_term(
                        &Monomial {
                            g: Some(bs("BB")),
                            f: FMultiset::single(cyclic(bs("BW").symbols())),
                            ..Monomial::one()
                        },
                        &BigRational::one(),
                    )
                    .unwrap(),
            );
        assert!(got.sub(&expect).is_zero());
    }

    #[test]
    fn defining_equation_spot_checks() {
        for (r, k) in [("B", 2u32), ("BW", 0), ("WB", 1), ("WWB", 0)] {
            let res = verify_tau(&TauKey::Rk(bs(r), k), 6).unwrap();
            assert!(res.is_zero(), "tau_{{{r},{k}}} residual: {res}");
        }
        for (r, s) in [("BW", ""), ("BB", ""), ("", "B"), ("WB", "B"), ("W", "WB")] {
            let res = verify_tau(&TauKey::Rs(bs(r), bs(s)), 6).unwrap();
            assert!(res.is_zero(), "tau_{{{r},{s}}} residual: {res}");
        }
    }

    #[test]
    fn tau_eps_is_g_phi() {
        let order = 6;
        let got = tau_rs(&BinaryString::empty(), &bs("B"), order).unwrap();
        let expect = phi_series(&PhiSpec::Counts(0, 2), order)
            .unwrap()
            .mul_term(&Monomial::of_g(bs("B")), &BigRational::one())
            .unwrap();
        assert!(got.sub(&expect).is_zero());
    }

    #[test]
    fn tau_wb_table_row() {
        // tau_{WB,S} = g_{BWB} phi_{WS} + w g_B f_(BWB) phi_{BWS}
        //            + w (g_{BB} phi_{BWS} + w g_B f_(BB) phi_{BBWS}) f_(WB),
        // checked here for S = eps.
        let order = 6;
        let got = tau_rs(&bs("WB"), &BinaryString::empty(), order).unwrap();
        let phi = |i: u32, j: u32| phi_series(&PhiSpec::Counts(i, j), order).unwrap();
        let term = |i: u32, j: u32, m: Monomial| {
            phi(i, j).mul_term(&m, &BigRational::one()).unwrap()
        };
        let expect = term(1, 0, Monomial::of_g(bs("BWB")))
            .add(&term(
                1,
                1,
                Monomial {
                    g: Some(bs("B")),
                    f: FMultiset::single(cyclic(bs("BWB").symbols())),
                    w: 1,
                    ..Monomial::one()
                },
            ))
            .add(&term(
                1,
                1,
                Monomial {
                    g: Some(bs("BB")),
                    f: FMultiset::single(cyclic(bs("WB").symbols())),
                    w: 1,
                    ..Monomial::one()
                },
            ))
            .add(&term(
                1,
                2,
                Monomial {
                    g: Some(bs("B")),
                    f: FMultiset::from_pairs(vec![
                        (cyclic(bs("BB").symbols()), 1),
                        (cyclic(bs("WB").symbols()), 1),
                    ]),
                    w: 2,
                    ..Monomial::one()
                },
            ));
        assert!(got.sub(&expect).is_zero());
    }

    #[test]
    fn closed_form_equals_recursion() {
        let order = 5;
        for r in ["B", "W", "BW", "WB", "BB", "BWB", "WWB"] {
            for k in 0..=2u32 {
                let a = tau_rk(&bs(r), k, order).unwrap();
                let b = tau_rk_recursive(&bs(r), k, order).unwrap();
                assert!(a.sub(&b).is_zero(), "tau_rk mismatch at R={r}, k={k}");
            }
            for (sw, sb) in [(0u32, 0u32), (1, 0), (0, 1)] {
                let a = tau_rs_counts(&bs(r), sw, sb, order).unwrap();
                let b = tau_rs_recursive(&bs(r), sw, sb, order).unwrap();
                assert!(a.sub(&b).is_zero(), "tau_rs mismatch at R={r}, S=({sw},{sb})");
            }
        }
    }

    #[test]
    fn forgotten_coefficient_law() {
        // <tau_{R,k}> = sum_i binom(l-1, i-1) <phi_{k+i}> and
        // [y^n/n!] <tau_{R,k}> = binom(l+n-2, l+k-1).
        let order = 8;
        for r in ["B", "BW", "WWB", "BWBW", "WBWBB"] {
            let word = bs(r);
            let l = word.len() as i64;
            for k in 0..=4u32 {
                let forgotten = tau_rk(&word, k, order).unwrap().forget();
                for n in 0..=order {
                    let got = forgotten.egf_coeff(0, n, 0, 0, 0).unwrap();
                    let direct: num::BigInt = (1..=word.len() as u32)
                        .map(|i| {
                            binomial(l - 1, i64::from(i) - 1) * phi_i_coeff(k + i, n)
                        })
                        .sum();
                    assert_eq!(got, rat_big(direct.clone()));
                    let vandermonde =
                        binomial(l + i64::from(n) - 2, l + i64::from(k) - 1);
                    assert_eq!(got, rat_big(vandermonde), "R={r} k={k} n={n}");
                }
            }
        }
    }
}
