//! Assembly of the explicit genus 0, 1, 2 solutions, the iterative stepping
//! tower, and conversion of series coefficients into dipole counts.
//!
//! Each genus slice can be produced two ways: a closed form built from the
//! preimage functions (for genus 2, by executing the four-step procedure:
//! expand in `g`-type indeterminates, apply `C'' B^(2) + J'' Gamma^(1)`,
//! substitute `g_{B R} phi_S -> tau_{R,S}`, realize), and degree-by-degree
//! iteration of the join-cut equations from the central initial condition.
//! The verification suites require the two paths to agree exactly; counts
//! are extracted from the closed forms.

pub mod appendix;

use std::collections::HashMap;
use std::sync::Mutex;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde_json::{json, Value};

use crate::central::{a_series, psi, Partition};
use crate::error::AtlasError;
use crate::operators::{step_b, step_gamma};
use crate::series::{FMultiset, Monomial, Series, Truncation, UNBOUNDED};
use crate::strings::{canonicalize, BinaryString, Symbol};
use crate::symbolic::{TaggedSeries, TauDecomposition};
use crate::tau::{tau_rk_skeleton, tau_rs_pieces};
use crate::util::{binomial, expect_nonneg_integer, inv_factorial, rat_big, rat_int};

/// Which construction produced a genus slice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    ClosedForm,
    Iterative,
    AppendixTable,
}

/// A genus slice of the two solution series. `b` is the `(a,b,0,0)` series
/// and `gamma` the `(a,b,c,d)` series; `gamma` restricted to `v = 0` equals
/// `b` (checked at construction).
#[derive(Clone, Debug)]
pub struct GenusSolution {
    pub g: u32,
    pub b: Series,
    pub gamma: Series,
    pub provenance: Provenance,
}

impl GenusSolution {
    /// Assemble the closed-form slice for `g <= 2`.
    pub fn closed_form(g: u32, trunc: Truncation) -> Result<Self, AtlasError> {
        Self::build(g, b_genus(g, trunc)?, gamma_genus(g, trunc)?, Provenance::ClosedForm)
    }

    /// Extract the slice from the iteratively stepped towers (any genus the
    /// window can reach).
    pub fn iterative(g: u32, trunc: Truncation) -> Result<Self, AtlasError> {
        Self::build(
            g,
            b_by_stepping(trunc, g).u_slice(2 * g),
            gamma_by_stepping(trunc, g).u_slice(2 * g),
            Provenance::Iterative,
        )
    }

    fn build(g: u32, b: Series, gamma: Series, provenance: Provenance) -> Result<Self, AtlasError> {
        let residual = gamma.at_v_zero().sub(&b);
        if !residual.is_zero() {
            return Err(AtlasError::Verification(format!(
                "genus {g} initial condition violated: Gamma|_(v=0) - B has {} terms",
                residual.num_terms()
            )));
        }
        Ok(GenusSolution {
            g,
            b,
            gamma,
            provenance,
        })
    }
}

// ---------------------------------------------------------------------------
// Closed-form counts

fn psi_hook3(a: i64) -> BigInt {
    match Partition::hook(3, a - 2) {
        Some(lambda) => psi(&lambda),
        None => BigInt::zero(),
    }
}

fn psi_two_two(a: i64) -> BigInt {
    match Partition::two_two(a - 3) {
        Some(lambda) => psi(&lambda),
        None => BigInt::zero(),
    }
}

/// Number of `(a,b,c,d)`-dipoles on the torus, by the five-case closed form:
///
/// - `c = 0, b >= 1`: `b (a+1) (d+1)`
/// - `c = 0, b = 0`: `binom(d+2, 4) + psi_{(3,1^{a-2})} + psi_{(2^2,1^{a-3})}`
/// - `c >= 1, b >= 1` or `c = 1, b = 0`: `(a+1)(d+1)`
/// - `c >= 2, b = 0`: `(a+1) c (d+1)`
pub fn torus_abcd_count(a: u32, b: u32, c: u32, d: u32) -> BigInt {
    let (ai, bi, ci, di) = (i64::from(a), i64::from(b), i64::from(c), i64::from(d));
    if c == 0 {
        if b >= 1 {
            BigInt::from(bi * (ai + 1) * (di + 1))
        } else {
            binomial(di + 2, 4) + psi_hook3(ai) + psi_two_two(ai)
        }
    } else if b >= 1 || c == 1 {
        BigInt::from((ai + 1) * (di + 1))
    } else {
        BigInt::from((ai + 1) * ci * (di + 1))
    }
}

/// Number of `(a,b,0,0)`-dipoles on the double torus for `b >= 1`:
///
/// `3(a+1) binom(b+2,5) + a(a+1) binom(b+2,4) + 2(a+1) binom(b+1,5)
///  + a(a+1) binom(b+1,4) + (3 binom(b+2,3) + (a-2) b) psi_{(3,1^{a-2})}
///  + (4 binom(b+1,2) + (a-3) b) psi_{(2^2,1^{a-3})}`
///
/// with the convention that the psi terms vanish when their partitions are
/// malformed. At `b = 0` the count is instead the genus-2 slice of the
/// central series.
pub fn double_torus_ab_count(a: u32, b: u32) -> BigInt {
    let (ai, bi) = (i64::from(a), i64::from(b));
    if b == 0 {
        let mut total = BigInt::zero();
        for lambda in crate::central::partitions(a + 1) {
            if a + 1 - lambda.num_parts() == 4 {
                total += psi(&lambda);
            }
        }
        return total;
    }
    BigInt::from(3 * (ai + 1)) * binomial(bi + 2, 5)
        + BigInt::from(ai * (ai + 1)) * binomial(bi + 2, 4)
        + BigInt::from(2 * (ai + 1)) * binomial(bi + 1, 5)
        + BigInt::from(ai * (ai + 1)) * binomial(bi + 1, 4)
        + (BigInt::from(3) * binomial(bi + 2, 3) + BigInt::from((ai - 2) * bi)) * psi_hook3(ai)
        + (BigInt::from(4) * binomial(bi + 1, 2) + BigInt::from((ai - 3) * bi)) * psi_two_two(ai)
}

// ---------------------------------------------------------------------------
// Shared series fragments

fn g_black() -> Monomial {
    Monomial::of_g(BinaryString::new(vec![Symbol::Black]))
}

fn f_cyc(text: &str) -> Monomial {
    Monomial::of_f(canonicalize(&BinaryString::parse(text).expect("literal")))
}

fn w_f_cyc(text: &str, w: u32) -> Monomial {
    Monomial {
        w,
        ..f_cyc(text)
    }
}

/// `x exp(x f_(W))` as a g-free series, exact to x-order `order`.
fn x_exp_xfw(order: u32) -> Series {
    let mut s = Series::zero(Truncation::new(order, UNBOUNDED, UNBOUNDED));
    for a in 1..=order {
        let m = Monomial {
            f: FMultiset::from_pairs(vec![(canonicalize(&BinaryString::whites(1)), a - 1)]),
            x: a,
            ..Monomial::one()
        };
        s.insert(m, inv_factorial(a - 1));
    }
    s
}

/// `exp(x f_(W)) - 1`.
fn exp_xfw_minus_one(order: u32) -> Series {
    let mut s = Series::zero(Truncation::new(order, UNBOUNDED, UNBOUNDED));
    for a in 1..=order {
        let m = Monomial {
            f: FMultiset::from_pairs(vec![(canonicalize(&BinaryString::whites(1)), a)]),
            x: a,
            ..Monomial::one()
        };
        s.insert(m, inv_factorial(a));
    }
    s
}

/// The genus-`g` slice of the central series with its `u` grade removed
/// (u-tagging is reapplied when slices are assembled).
fn a_slice_u0(order: u32, g: u32) -> Series {
    let mut out = Series::zero(Truncation::new(order, UNBOUNDED, UNBOUNDED));
    for (m, c) in a_series(order).u_slice(2 * g).terms() {
        let mut m2 = m.clone();
        m2.u = 0;
        out.insert(m2, c.clone());
    }
    out
}

/// The weighted hook/two-two sums of the double-torus assembly, with their
/// residual face factors and no `g`:
/// `sum_n weight(n) psi_lambda x^n/n! f_(W)^{n-shift}`.
fn psi_sum(order: u32, which: PsiFamily, starred: bool) -> Series {
    let mut out = Series::zero(Truncation::new(order, UNBOUNDED, UNBOUNDED));
    for n in 1..=order {
        let ni = i64::from(n);
        let (lambda, shift) = match which {
            PsiFamily::Hook3 => (Partition::hook(3, ni - 3), 3),
            PsiFamily::TwoTwo => (Partition::two_two(ni - 4), 4),
        };
        let Some(lambda) = lambda else { continue };
        // The starred sums arise from an f_(W) derivative: the weight is the
        // consumed multiplicity and the residual power drops by one more.
        let weight = if starred { ni - shift as i64 } else { 1 };
        if weight <= 0 {
            continue;
        }
        let f_power = if starred { n - shift - 1 } else { n - shift };
        let count = psi(&lambda);
        if count.is_zero() {
            continue;
        }
        let m = Monomial {
            f: FMultiset::from_pairs(vec![(
                canonicalize(&BinaryString::whites(1)),
                f_power,
            )]),
            x: n,
            ..Monomial::one()
        };
        out.insert(m, rat_big(count * BigInt::from(weight)) * inv_factorial(n));
    }
    out
}

#[derive(Clone, Copy)]
enum PsiFamily {
    Hook3,
    TwoTwo,
}

// ---------------------------------------------------------------------------
// Tagged (phi-symbolic) assemblies

fn tau_rk_tagged(r: &str, k: u32) -> Result<TaggedSeries, AtlasError> {
    let word = BinaryString::parse(r).expect("literal");
    let mut out = TaggedSeries::new();
    for (i, skeleton) in tau_rk_skeleton(&word)? {
        out.add_part((0, 0, k + i), skeleton);
    }
    Ok(out)
}

fn tau_rs_tagged(r: &str, s_white: u32, s_black: u32) -> Result<TaggedSeries, AtlasError> {
    let word = BinaryString::parse(r).expect("literal");
    let mut out = TaggedSeries::new();
    for piece in tau_rs_pieces(&word)? {
        out.add_part(
            (s_white + piece.extra_white, s_black + piece.extra_black, 0),
            piece.skeleton,
        );
    }
    Ok(out)
}

/// Move a plain series into a tagged series carrying a single `phi_k(y)`.
fn with_y_tag(ts: TaggedSeries, k: u32) -> TaggedSeries {
    let mut out = TaggedSeries::new();
    for (&(vi, vj, yk), s) in ts.parts() {
        assert_eq!(yk, 0, "a second phi(y) factor never arises here");
        out.add_part((vi, vj, k), s.clone());
    }
    out
}

/// `B^(1)` in tagged form (u grade omitted):
/// `tau_{BW,0} x exp(x f_(W)) + [u^2] A`.
fn b1_tagged(order: u32) -> Result<TaggedSeries, AtlasError> {
    let out = tau_rk_tagged("BW", 0)?.mul_plain(&x_exp_xfw(order))?;
    let mut init = TaggedSeries::new();
    init.add_part((0, 0, 0), a_slice_u0(order, 1));
    Ok(out.add(&init))
}

/// `B^(2)` in tagged form (u grade omitted), as the preimage of `J' B^(1)`
/// plus the genus-2 central slice.
fn b2_tagged(order: u32) -> Result<TaggedSeries, AtlasError> {
    let xe = x_exp_xfw(order);
    let one = BigRational::one();

    let x1 = Monomial::powers(1, 0, 0, 0, 0);
    let mut line1 = tau_rk_tagged("BWBB", 2)?;
    line1 = line1.add(&tau_rk_tagged("BWBW", 1)?.mul_plain(&Series::monomial(
        x1.clone(),
        one.clone(),
        Truncation::unbounded(),
    ))?);
    line1 = line1.add(&tau_rk_tagged("BBB", 3)?.mul_plain(&Series::monomial(
        f_cyc("BW"),
        rat_int(2),
        Truncation::unbounded(),
    ))?);
    line1 = line1.add(&tau_rk_tagged("BBBW", 2)?);
    line1 = line1.add(&tau_rk_tagged("BBWB", 2)?);
    line1 = line1.add(&tau_rk_tagged("BBW", 2)?.mul_plain(&Series::monomial(
        Monomial {
            x: 1,
            ..f_cyc("BW")
        },
        one.clone(),
        Truncation::unbounded(),
    ))?);
    let mut out = line1.mul_plain(&xe)?;

    out = out.add(
        &tau_rk_tagged("BWWW", 0)?
            .mul_plain(&psi_sum(order, PsiFamily::Hook3, false).scale(&rat_int(3)))?,
    );
    out = out.add(&tau_rk_tagged("BW", 0)?.mul_plain(
        &psi_sum(order, PsiFamily::Hook3, true).mul_term(&f_cyc("WWW"), &one)?,
    )?);
    out = out.add(
        &tau_rk_tagged("BWW", 0)?.mul_plain(
            &psi_sum(order, PsiFamily::TwoTwo, false)
                .mul_term(&f_cyc("WW"), &rat_int(4))?,
        )?,
    );
    out = out.add(&tau_rk_tagged("BW", 0)?.mul_plain(
        &psi_sum(order, PsiFamily::TwoTwo, true)
            .mul_term(&f_cyc("WW"), &one)?
            .mul_term(&f_cyc("WW"), &one)?,
    )?);

    let mut init = TaggedSeries::new();
    init.add_part((0, 0, 0), a_slice_u0(order, 2));
    Ok(out.add(&init))
}

/// `Gamma^(1)` in tagged form (u grade omitted): the preimages of
/// `J'' Gamma^(0) + C'' B^(1)` plus the initial condition `B^(1)`.
fn gamma1_tagged(order: u32) -> Result<TaggedSeries, AtlasError> {
    let xe = x_exp_xfw(order);
    let em1 = exp_xfw_minus_one(order);
    let one = BigRational::one();

    // (w f_(B) tau_{WW,B} + tau_{WW,eps}) x exp(x f_(W))
    let mut t1 = tau_rs_tagged("WW", 0, 1)?
        .mul_plain(&Series::monomial(w_f_cyc("B", 1), one.clone(), Truncation::unbounded()))?;
    t1 = t1.add(&tau_rs_tagged("WW", 0, 0)?);
    let mut out = t1.mul_plain(&xe)?;

    // (w^2 tau_{BB,B} + w^3 f_(B) tau_{BB,BB}) (exp(x f_(W)) - 1)
    let mut t2 = tau_rs_tagged("BB", 0, 1)?.mul_plain(&Series::monomial(
        Monomial::powers(0, 0, 0, 2, 0),
        one.clone(),
        Truncation::unbounded(),
    ))?;
    t2 = t2.add(&tau_rs_tagged("BB", 0, 2)?.mul_plain(&Series::monomial(
        w_f_cyc("B", 3),
        one.clone(),
        Truncation::unbounded(),
    ))?);
    out = out.add(&t2.mul_plain(&em1)?);

    // (w f_(BBW) tau_{eps,eps} + w f_(B) tau_{BW,eps} + f_(BW) tau_{W,eps})
    //   phi_1(y) x exp(x f_(W))
    let mut t3 = tau_rs_tagged("", 0, 0)?
        .mul_plain(&Series::monomial(w_f_cyc("BBW", 1), one.clone(), Truncation::unbounded()))?;
    t3 = t3.add(&tau_rs_tagged("BW", 0, 0)?.mul_plain(&Series::monomial(
        w_f_cyc("B", 1),
        one.clone(),
        Truncation::unbounded(),
    ))?);
    t3 = t3.add(&tau_rs_tagged("W", 0, 0)?.mul_plain(&Series::monomial(
        f_cyc("BW"),
        one.clone(),
        Truncation::unbounded(),
    ))?);
    out = out.add(&with_y_tag(t3, 1).mul_plain(&xe)?);

    // (w f_(BB) tau_{eps,eps} + w f_(B) tau_{B,eps}) f_(BW) phi_2(y) x exp(..)
    let mut t4 = tau_rs_tagged("", 0, 0)?
        .mul_plain(&Series::monomial(w_f_cyc("BB", 1), one.clone(), Truncation::unbounded()))?;
    t4 = t4.add(&tau_rs_tagged("B", 0, 0)?.mul_plain(&Series::monomial(
        w_f_cyc("B", 1),
        one.clone(),
        Truncation::unbounded(),
    ))?);
    let t4 = with_y_tag(t4, 2).mul_plain(&xe.mul_term(&f_cyc("BW"), &one)?)?;
    out = out.add(&t4);

    // w f_(B) tau_{eps,eps} times the genus-1 face sums (no g factor there;
    // it lives inside tau_{eps,eps} = g_B phi_B(v)).
    let faces1 = psi_sum(order, PsiFamily::Hook3, false)
        .mul_term(&f_cyc("WWW"), &one)?
        .add(
            &psi_sum(order, PsiFamily::TwoTwo, false)
                .mul_term(&f_cyc("WW"), &one)?
                .mul_term(&f_cyc("WW"), &one)?,
        );
    let t5 = tau_rs_tagged("", 0, 0)?
        .mul_plain(&Series::monomial(w_f_cyc("B", 1), one.clone(), Truncation::unbounded()))?
        .mul_plain(&faces1)?;
    out = out.add(&t5);

    // + B^(1).
    Ok(out.add(&b1_tagged(order)?))
}

// ---------------------------------------------------------------------------
// Genus slices, closed form

fn tag_u(s: &Series, g: u32) -> Series {
    let mut out = Series::zero(s.truncation());
    for (m, c) in s.terms() {
        let mut m2 = m.clone();
        m2.u = 2 * g;
        out.insert(m2, c.clone());
    }
    out
}

/// Closed-form genus slice of the `(a,b,0,0)` series. Supported for
/// `g <= 2`; higher genera are reachable through the iterative path.
pub fn b_genus(g: u32, trunc: Truncation) -> Result<Series, AtlasError> {
    let slice = match g {
        0 => Series::monomial(g_black(), BigRational::one(), Truncation::unbounded())
            .mul(&exp_xfw_minus_one(trunc.x))?,
        1 => b1_tagged(trunc.x)?.realize(trunc.v, trunc.y)?,
        2 => b2_tagged(trunc.x)?.realize(trunc.v, trunc.y)?,
        _ => {
            return Err(AtlasError::invalid(format!(
                "no closed form for genus {g}; use the iterative path"
            )))
        }
    };
    Ok(tag_u(&slice.truncate_to(trunc), g))
}

/// Closed-form genus slice of the `(a,b,c,d)` series, `g <= 2`.
pub fn gamma_genus(g: u32, trunc: Truncation) -> Result<Series, AtlasError> {
    match g {
        0 => {
            if trunc.x == UNBOUNDED || trunc.v == UNBOUNDED {
                return Err(AtlasError::invalid(
                    "the planar series needs finite x and v windows",
                ));
            }
            let mut s = Series::zero(trunc);
            for a in 0..trunc.x.max(1) {
                for d in 0..=trunc.v {
                    if a + 1 > trunc.x || d > trunc.v {
                        continue;
                    }
                    let m = Monomial {
                        g: Some(BinaryString::new(vec![Symbol::Black])),
                        f: FMultiset::from_pairs(vec![
                            (canonicalize(&BinaryString::blacks(1)), d),
                            (canonicalize(&BinaryString::whites(1)), a + 1),
                        ]),
                        x: a + 1,
                        v: d,
                        w: d,
                        ..Monomial::one()
                    };
                    s.insert(m, inv_factorial(a + 1) * inv_factorial(d));
                }
            }
            Ok(s)
        }
        1 => Ok(tag_u(
            &gamma1_tagged(trunc.x)?.realize(trunc.v, trunc.y)?.truncate_to(trunc),
            1,
        )),
        2 => {
            let decomp = gamma2_decomposition(trunc.x)?;
            let hat = decomp.realize(trunc.v, trunc.y)?;
            let b2 = b2_tagged(trunc.x)?.realize(trunc.v, trunc.y)?;
            Ok(tag_u(&hat.add(&b2).truncate_to(trunc), 2))
        }
        _ => Err(AtlasError::invalid(format!(
            "no closed form for genus {g}; use the iterative path"
        ))),
    }
}

/// The four-step decomposition of `GammaHat^(2)`: coefficients of each
/// `tau_{R,(i,j)}` in the solution of
/// `(d/dv - C'') GammaHat^(2) = J'' Gamma^(1) + C'' B^(2)`.
pub(crate) fn gamma2_decomposition(order: u32) -> Result<TauDecomposition, AtlasError> {
    let rhs = b2_tagged(order)?
        .apply_cut_dprime()
        .add(&gamma1_tagged(order)?.apply_join_dprime());
    rhs.tau_substitute()
}

// ---------------------------------------------------------------------------
// Iterative stepping

/// The full `(a,b,0,0)` series `B` (all genus grades up to `u^{2 g_max}`)
/// by stepping the `(C' + u^2 J')` equation from the central initial
/// condition.
pub fn b_by_stepping(trunc: Truncation, g_max: u32) -> Series {
    let mut slice = a_series(trunc.x).u_truncate(2 * g_max);
    let mut total = Series::zero(trunc);
    for b in 0..=trunc.y {
        if b > 0 {
            slice = step_b(&slice).u_truncate(2 * g_max);
        }
        let graded = slice
            .mul_term(&Monomial::powers(0, b, 0, 0, 0), &inv_factorial(b))
            .expect("y^b is g-free");
        total = total.add(&graded.truncate_to(trunc));
    }
    total
}

/// The full `(a,b,c,d)` series `Gamma` by stepping the `(C'' + u^2 J'')`
/// equation from `B`.
pub fn gamma_by_stepping(trunc: Truncation, g_max: u32) -> Series {
    let mut slice = b_by_stepping(trunc, g_max);
    let mut total = Series::zero(trunc);
    for m in 0..=trunc.v {
        if m > 0 {
            slice = step_gamma(&slice).u_truncate(2 * g_max);
        }
        let graded = slice
            .mul_term(&Monomial::powers(0, 0, m, 0, 0), &inv_factorial(m))
            .expect("v^m is g-free");
        total = total.add(&graded.truncate_to(trunc));
    }
    total
}

// ---------------------------------------------------------------------------
// Count extraction

fn gamma2_forgotten_cache() -> &'static Mutex<HashMap<u32, Series>> {
    static CACHE: std::sync::OnceLock<Mutex<HashMap<u32, Series>>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Forgotten genus-2 solution `<Gamma^(2)>` at symmetric order, cached.
pub fn gamma2_forgotten(order: u32) -> Result<Series, AtlasError> {
    if let Some(hit) = gamma2_forgotten_cache().lock().unwrap().get(&order) {
        return Ok(hit.clone());
    }
    let trunc = Truncation::new(order, order, order);
    let s = gamma_genus(2, trunc)?.forget();
    gamma2_forgotten_cache()
        .lock()
        .unwrap()
        .insert(order, s.clone());
    Ok(s)
}

/// Number of `(a,b,c,d)`-dipoles of genus `g`. Genus 0 and 1 use closed
/// forms; genus 2 extracts the EGF coefficient of the assembled solution,
/// which must cover the requested degrees (`order` bounds `a+1`, `b`, `c+d`).
pub fn abcd_count(a: u32, b: u32, c: u32, d: u32, g: u32, order: u32) -> Result<BigInt, AtlasError> {
    match g {
        0 => Ok(if b == 0 && c == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }),
        1 => Ok(torus_abcd_count(a, b, c, d)),
        2 => {
            let s = gamma2_forgotten(order)?;
            let coeff = s.egf_coeff(a + 1, b, c + d, d, 2)?;
            Ok(expect_nonneg_integer(&coeff, "abcd count"))
        }
        _ => Err(AtlasError::invalid(format!(
            "genus {g} is outside the supported closed forms (0..=2)"
        ))),
    }
}

/// Number of `(p,q,n)`-dipoles of genus `g`, by summing the `(a,b,c,d)`
/// refinement:
/// `sum_{0<=b<=p-1} [x^{q-b}/(q-b)! y^b/b! v^{n-q-1}/(n-q-1)! w^{p-1-b}]`.
pub fn pqn_count(p: u32, q: u32, n: u32, g: u32, order: u32) -> Result<BigInt, AtlasError> {
    if n < 2 || p == 0 || q == 0 || p > n - 1 || q > n - 1 {
        return Err(AtlasError::invalid(format!(
            "(p,q,n) = ({p},{q},{n}) outside 1 <= p,q <= n-1, n >= 2"
        )));
    }
    let mut total = BigInt::zero();
    for b in 0..=p - 1 {
        if b + 1 > q {
            continue; // x-degree q - b would drop below 1
        }
        let a = q - b - 1;
        let d = p - 1 - b;
        if n < p + q && b < p + q - n {
            continue; // c would be negative
        }
        let c = n + b - p - q;
        total += abcd_count(a, b, c, d, g, order)?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Count tables

/// A `(p,q,n,g) -> count` table, serializable to CSV and JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub rows: Vec<PqnRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqnRow {
    pub p: u32,
    pub q: u32,
    pub n: u32,
    pub g: u32,
    pub count: BigInt,
}

impl CountTable {
    /// CSV with the fixed column order `p,q,n,g,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,n,g,count\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.p, row.q, row.n, row.g, row.count
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let count = row
                        .count
                        .to_string()
                        .parse::<u64>()
                        .map(|n| json!(n))
                        .unwrap_or_else(|_| json!(row.count.to_string()));
                    json!({
                        "p": row.p,
                        "q": row.q,
                        "n": row.n,
                        "g": row.g,
                        "count": count,
                    })
                })
                .collect(),
        )
    }
}

/// The full `(p,q,n,g)` table for `n <= n_max`, `g <= g_max`, rows sorted by
/// `(n, g, p, q)` and including zero cells for a stable layout.
pub fn phi_count_table(n_max: u32, g_max: u32, order: u32) -> Result<CountTable, AtlasError> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for g in 0..=g_max {
            for p in 1..=n - 1 {
                for q in 1..=n - 1 {
                    rows.push(PqnRow {
                        p,
                        q,
                        n,
                        g,
                        count: pqn_count(p, q, n, g, order)?,
                    });
                }
            }
        }
    }
    Ok(CountTable { rows })
}

/// Named series for the dump interface.
pub fn series_by_name(name: &str, order: u32) -> Result<Series, AtlasError> {
    let trunc = Truncation::new(order, order, order);
    match name {
        "B0" => b_genus(0, trunc),
        "B1" => b_genus(1, trunc),
        "B2" => b_genus(2, trunc),
        "Gamma0" => gamma_genus(0, trunc),
        "Gamma1" => gamma_genus(1, trunc),
        "Gamma2" => gamma_genus(2, trunc),
        "A" => Ok(a_series(order)),
        other => Err(AtlasError::invalid(format!(
            "unknown series {other:?} (expected A, B0..B2, Gamma0..Gamma2)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: u32, y: u32, v: u32) -> Truncation {
        Truncation::new(x, y, v)
    }

    #[test]
    fn b0_has_no_y_dependence() {
        let b0 = b_genus(0, t(6, 6, 6)).unwrap();
        for (m, _) in b0.terms() {
            assert_eq!(m.y, 0);
            assert_eq!(m.u, 0);
        }
    }

    #[test]
    fn torus_coefficient_b_times_a_plus_1() {
        // [y^b/b! x^{a+1}/(a+1)!] <B^(1)> = b(a+1).
        let b1 = b_genus(1, t(8, 8, 8)).unwrap().forget();
        for a in 0..=6u32 {
            for b in 1..=6u32 {
                let got = b1.egf_coeff(a + 1, b, 0, 0, 1).unwrap();
                assert_eq!(got, rat_int(i64::from(b) * (i64::from(a) + 1)), "a={a} b={b}");
            }
        }
        // Spot value from the closed form at a=2, b=3.
        assert_eq!(b1.egf_coeff(3, 3, 0, 0, 1).unwrap(), rat_int(9));
    }

    #[test]
    fn b1_matches_stepping() {
        let trunc = t(6, 6, 0);
        let closed = b_genus(1, trunc).unwrap();
        let stepped = b_by_stepping(trunc, 1).u_slice(2);
        let diff = closed.sub(&stepped);
        assert!(diff.is_zero(), "B^(1) closed vs stepped:\n{diff}");
    }

    #[test]
    fn b2_matches_stepping() {
        let trunc = t(6, 6, 0);
        let closed = b_genus(2, trunc).unwrap();
        let stepped = b_by_stepping(trunc, 2).u_slice(4);
        let diff = closed.sub(&stepped);
        assert!(diff.is_zero(), "B^(2) closed vs stepped:\n{diff}");
    }

    #[test]
    fn double_torus_spot_value() {
        assert_eq!(double_torus_ab_count(2, 3), BigInt::from(75));
        let b2 = b_genus(2, t(8, 8, 8)).unwrap().forget();
        for a in 0..=5u32 {
            for b in 1..=5u32 {
                let got = b2.egf_coeff(a + 1, b, 0, 0, 2).unwrap();
                assert_eq!(
                    got,
                    rat_big(double_torus_ab_count(a, b)),
                    "double torus a={a} b={b}"
                );
            }
        }
    }

    #[test]
    fn gamma0_coefficients() {
        let g0 = gamma_genus(0, t(6, 6, 6)).unwrap().forget();
        // a=1, d=2: coefficient of x^2/2! (vw)^2/2! is 1.
        assert_eq!(g0.egf_coeff(2, 0, 2, 2, 0).unwrap(), rat_int(1));
        assert_eq!(g0.egf_coeff(2, 1, 2, 2, 0).unwrap(), rat_int(0));
    }

    #[test]
    fn gamma1_matches_stepping() {
        let trunc = t(5, 5, 5);
        let closed = gamma_genus(1, trunc).unwrap();
        let stepped = gamma_by_stepping(trunc, 1).u_slice(2);
        let diff = closed.sub(&stepped);
        assert!(diff.is_zero(), "Gamma^(1) closed vs stepped:\n{diff}");
    }

    #[test]
    fn gamma1_restricted_to_v0_is_b1() {
        let trunc = t(6, 6, 6);
        let gamma1 = gamma_genus(1, trunc).unwrap();
        let b1 = b_genus(1, trunc).unwrap();
        assert!(gamma1.at_v_zero().sub(&b1).is_zero());
    }

    #[test]
    fn torus_closed_form_examples() {
        assert_eq!(torus_abcd_count(0, 1, 1, 0), BigInt::from(1));
        assert_eq!(torus_abcd_count(1, 0, 2, 1), BigInt::from(8));
        // c = d = 0, b = 0: the pure central slice.
        assert_eq!(torus_abcd_count(2, 0, 0, 0), BigInt::from(1)); // psi(3)
    }

    #[test]
    fn torus_closed_form_matches_gamma1() {
        let gamma1 = gamma_genus(1, t(7, 6, 6)).unwrap().forget();
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                for c in 0..=4u32 {
                    for d in 0..=4u32 {
                        if c + d > 6 {
                            continue;
                        }
                        let got = gamma1.egf_coeff(a + 1, b, c + d, d, 1).unwrap();
                        assert_eq!(
                            got,
                            rat_big(torus_abcd_count(a, b, c, d)),
                            "(a,b,c,d)=({a},{b},{c},{d})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pqn_validation() {
        assert!(pqn_count(0, 1, 2, 0, 6).is_err());
        assert!(pqn_count(2, 1, 2, 0, 6).is_err());
        assert_eq!(pqn_count(1, 1, 2, 0, 6).unwrap(), BigInt::one());
    }

    #[test]
    fn genus0_law() {
        for n in 2..=8u32 {
            for p in 1..=n - 1 {
                for q in 1..=n - 1 {
                    let expected = if p + q == n { 1 } else { 0 };
                    assert_eq!(
                        pqn_count(p, q, n, 0, 8).unwrap(),
                        BigInt::from(expected),
                        "(p,q,n)=({p},{q},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn join_image_of_the_planar_solution() {
        // J'' Gamma^(0) = g_{BWW} (w f_(B) phi_B(v) + 1) x exp(x f_(W))
        //              + g_{BBB} (w^2 phi_B(v) + w^3 f_(B) phi_BB(v))
        //                (exp(x f_(W)) - 1).
        use crate::operators::{apply, OperatorKind};
        use crate::phi::{phi_series, PhiSpec};
        let order = 6;
        let trunc = t(order, 0, order);
        let gamma0 = gamma_genus(0, trunc).unwrap();
        let got = apply(OperatorKind::JDoublePrime, &gamma0);

        let phi_b = phi_series(&PhiSpec::Counts(0, 1), order).unwrap();
        let phi_bb = phi_series(&PhiSpec::Counts(0, 2), order).unwrap();
        let one = BigRational::one();
        let w_fb = Monomial {
            w: 1,
            ..Monomial::of_f(canonicalize(&BinaryString::blacks(1)))
        };
        let first = phi_b
            .mul_term(&w_fb, &one)
            .unwrap()
            .add(&Series::one(Truncation::unbounded()))
            .mul(&x_exp_xfw(order))
            .unwrap()
            .mul_term(&Monomial::of_g(BinaryString::parse("BWW").unwrap()), &one)
            .unwrap();
        let second = phi_b
            .mul_term(&Monomial::powers(0, 0, 0, 2, 0), &one)
            .unwrap()
            .add(
                &phi_bb
                    .mul_term(
                        &Monomial {
                            w: 3,
                            ..Monomial::of_f(canonicalize(&BinaryString::blacks(1)))
                        },
                        &one,
                    )
                    .unwrap(),
            )
            .mul(&exp_xfw_minus_one(order))
            .unwrap()
            .mul_term(&Monomial::of_g(BinaryString::parse("BBB").unwrap()), &one)
            .unwrap();
        let expect = first.add(&second).truncate_to(trunc);
        assert!(got.sub(&expect).is_zero(), "J'' image differs from the display");
    }

    #[test]
    fn gamma1_forgotten_matches_its_phi_expansion() {
        // The forgotten torus solution written purely in forgotten phi
        // functions, as an independent third construction.
        use crate::central::{appendix_series, AppendixSeries};
        use crate::phi::{phi_series, PhiSpec};
        let order = 8;
        let phi = |i: u32, j: u32| {
            phi_series(&PhiSpec::Counts(i, j), order).unwrap().forget()
        };
        let phi_y = |k: u32| phi_series(&PhiSpec::YForm(k), order).unwrap().forget();
        let w = |k: u32, s: &Series| {
            s.mul_term(&Monomial::powers(0, 0, 0, k, 0), &BigRational::one())
                .unwrap()
        };
        let xe = x_exp_xfw(order).forget();
        let em1 = exp_xfw_minus_one(order).forget();

        let line1 = xe
            .mul(
                &phi(1, 0)
                    .add(&phi(2, 0))
                    .add(&w(1, &phi(1, 1).scale(&rat_int(2))))
                    .add(&w(1, &phi(2, 1).scale(&rat_int(2))))
                    .add(&w(2, &phi(1, 2)))
                    .add(&w(2, &phi(2, 2))),
            )
            .unwrap();
        let line2 = em1
            .mul(
                &w(2, &phi(0, 2))
                    .add(&w(3, &phi(0, 3).scale(&rat_int(3))))
                    .add(&w(4, &phi(0, 4).scale(&rat_int(3))))
                    .add(&w(5, &phi(0, 5))),
            )
            .unwrap();
        let line3 = xe
            .mul(&phi_y(1))
            .unwrap()
            .mul(
                &phi(1, 0)
                    .add(&w(1, &phi(0, 1).scale(&rat_int(2))))
                    .add(&w(1, &phi(1, 1).scale(&rat_int(2))))
                    .add(&w(2, &phi(0, 2)))
                    .add(&w(2, &phi(1, 2))),
            )
            .unwrap();
        let line4 = xe
            .mul(&phi_y(2))
            .unwrap()
            .mul(&w(1, &phi(0, 1).scale(&rat_int(2))).add(&w(2, &phi(0, 2))))
            .unwrap();
        let line5 = w(
            1,
            &phi(0, 1)
                .mul(
                    &appendix_series(AppendixSeries::D3, order)
                        .add(&appendix_series(AppendixSeries::D22, order)),
                )
                .unwrap(),
        );
        let b1 = b_genus(1, t(order, order, order)).unwrap().forget();
        let expansion = line1
            .add(&line2)
            .add(&line3)
            .add(&line4)
            .add(&line5)
            .mul_term(&Monomial::powers(0, 0, 0, 0, 2), &BigRational::one())
            .unwrap()
            .add(&b1)
            .truncate_to(t(order, order, order));

        let gamma1 = gamma_genus(1, t(order, order, order)).unwrap().forget();
        assert!(
            gamma1.sub(&expansion).is_zero(),
            "forgotten torus solution differs from the specialized form"
        );
    }

    #[test]
    fn genus_solutions_expose_both_paths() {
        let trunc = t(4, 4, 4);
        for g in 0..=2u32 {
            let closed = GenusSolution::closed_form(g, trunc).unwrap();
            let iterative = GenusSolution::iterative(g, trunc).unwrap();
            assert_eq!(closed.provenance, Provenance::ClosedForm);
            assert_eq!(iterative.provenance, Provenance::Iterative);
            assert!(closed.gamma.sub(&iterative.gamma).is_zero());
        }
    }

    #[test]
    fn table_layout() {
        let table = phi_count_table(3, 1, 6).unwrap();
        assert_eq!(table.rows.len(), (1 + 4) * 2);
        let csv = table.to_csv();
        assert!(csv.starts_with("p,q,n,g,count\n"));
        assert!(csv.contains("1,1,2,0,1"));
    }
}
