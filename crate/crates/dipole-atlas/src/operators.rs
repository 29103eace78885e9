//! The join and cut differential operators and the degree-by-degree stepping
//! maps that solve the two partial differential equations
//! `(C' + u^2 J') B = dB/dy` and `(C'' + u^2 J'') Gamma = dGamma/dv`.
//!
//! All operators are total monomial rewriters extended linearly, never
//! symbolic differentiation of expression trees:
//!
//! - `C'`  : `g_R -> sum_{2<=i<=l} g_{R_1..R_i} f_(R_1 R_{i+1}..R_l)`
//! - `J'`  : `g_R f_(S) -> sum_{S' in (S)} g_{R R_1 S'}`, one summand per
//!   element of the multiset of cyclic shifts, times the multiplicity of
//!   `f_(S)` (the derivative's multiplier)
//! - `C''` : `g_R -> sum_{2<=i<=l} w^{[R_i=B]} g_{R_1 R_i..R_l} f_(R_2..R_i)
//!   + w g_{R_1} f_(R)`
//! - `J''` : `g_R f_(S) -> sum_{S' in (S)} w^{[S'_1=B]}
//!   g_{R_1 S'_1..S'_l S'_1 R_2..R_l}`
//! - `C~`, `J~`: the same operators after lengths replace indices, acting on
//!   shadow series produced by [`Series::forget_lengths`] (lengths are
//!   encoded on all-black strings).
//!
//! Cut-kind operators add one `f` factor and preserve the `u` grade;
//! join-kind operators consume one `f` factor, and the stepping maps weight
//! their images by `u^2` (adding a handle raises the genus by one).

use num::rational::BigRational;

use crate::series::{Monomial, Series};
use crate::strings::{canonicalize, BinaryString};
use crate::util::rat_int;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OperatorKind {
    CPrime,
    JPrime,
    CDoublePrime,
    JDoublePrime,
    CTilde,
    JTilde,
}

/// Apply an operator to a series. Monomials without the factors the operator
/// differentiates (no `g`, or no `f` for the join kinds) contribute zero.
/// Linearity in the `g`-type indeterminates is guaranteed upstream by the
/// monomial representation, which can hold at most one `g` factor.
pub fn apply(op: OperatorKind, s: &Series) -> Series {
    let mut out = Series::zero(s.truncation());
    for (m, c) in s.terms() {
        match op {
            OperatorKind::CPrime => cut_prime(m, c, &mut out),
            OperatorKind::JPrime => join_prime(m, c, &mut out),
            OperatorKind::CDoublePrime => cut_dprime(m, c, &mut out),
            OperatorKind::JDoublePrime => join_dprime(m, c, &mut out),
            OperatorKind::CTilde => cut_tilde(m, c, &mut out),
            OperatorKind::JTilde => join_tilde(m, c, &mut out),
        }
    }
    out
}

fn cut_prime(m: &Monomial, c: &BigRational, out: &mut Series) {
    let Some(r) = &m.g else { return };
    let l = r.len();
    for i in 2..=l {
        // New root face R_1..R_i; the split-off face reads R_1 R_{i+1}..R_l.
        let g = r.slice(1, i);
        let f_word = r.slice(1, 1).concat(&r.slice(i + 1, l));
        let mut m2 = m.clone();
        m2.g = Some(g);
        m2.f = m.f.insert(canonicalize(&f_word), 1);
        out.insert(m2, c.clone());
    }
}

fn join_prime(m: &Monomial, c: &BigRational, out: &mut Series) {
    let Some(r) = &m.g else { return };
    if r.is_empty() {
        return;
    }
    let r1 = r.slice(1, 1);
    for (s, mult) in m.f.pairs() {
        let f_rest = m.f.remove_one(s);
        let multiplier = c * rat_int(i64::from(*mult));
        for rot in s.rotations() {
            let mut m2 = m.clone();
            m2.g = Some(r.concat(&r1).concat(&rot));
            m2.f = f_rest.clone();
            out.insert(m2, multiplier.clone());
        }
    }
}

fn cut_dprime(m: &Monomial, c: &BigRational, out: &mut Series) {
    let Some(r) = &m.g else { return };
    let l = r.len();
    if l == 0 {
        return;
    }
    // Digon case: the new root face is the single corner R_1 and the whole
    // old root face becomes a non-root face; always a d-edge.
    {
        let mut m2 = m.clone();
        m2.g = Some(r.slice(1, 1));
        m2.f = m.f.insert(canonicalize(r), 1);
        m2.w += 1;
        out.insert(m2, c.clone());
    }
    for i in 2..=l {
        let mut m2 = m.clone();
        m2.g = Some(r.slice(1, 1).concat(&r.slice(i, l)));
        m2.f = m.f.insert(canonicalize(&r.slice(2, i)), 1);
        if r.get(i).is_black() {
            m2.w += 1;
        }
        out.insert(m2, c.clone());
    }
}

fn join_dprime(m: &Monomial, c: &BigRational, out: &mut Series) {
    let Some(r) = &m.g else { return };
    let l = r.len();
    if l == 0 {
        return;
    }
    let r1 = r.slice(1, 1);
    let r_tail = r.slice(2, l);
    for (s, mult) in m.f.pairs() {
        let f_rest = m.f.remove_one(s);
        let multiplier = c * rat_int(i64::from(*mult));
        for rot in s.rotations() {
            let s1 = rot.slice(1, 1);
            let mut m2 = m.clone();
            m2.g = Some(r1.concat(&rot).concat(&s1).concat(&r_tail));
            m2.f = f_rest.clone();
            if rot.get(1).is_black() {
                m2.w += 1;
            }
            out.insert(m2, multiplier.clone());
        }
    }
}

fn cut_tilde(m: &Monomial, c: &BigRational, out: &mut Series) {
    let Some(r) = &m.g else { return };
    let l = r.len();
    for j in 1..l {
        let mut m2 = m.clone();
        m2.g = Some(BinaryString::blacks(j + 1));
        m2.f = m.f.insert(canonicalize(&BinaryString::blacks(l - j)), 1);
        out.insert(m2, c.clone());
    }
}

fn join_tilde(m: &Monomial, c: &BigRational, out: &mut Series) {
    let Some(r) = &m.g else { return };
    if r.is_empty() {
        return;
    }
    for (s, mult) in m.f.pairs() {
        let j = s.len();
        let mut m2 = m.clone();
        m2.g = Some(BinaryString::blacks(r.len() + j + 1));
        m2.f = m.f.remove_one(s);
        out.insert(m2, c * rat_int(i64::from(*mult)) * rat_int(j as i64));
    }
}

/// One y-step of the `(a,b,0,0)` equation: from the EGF slice `B_{b-1}`
/// produce `B_b = (C' + u^2 J') B_{b-1}`.
pub fn step_b(prev: &Series) -> Series {
    let cut = apply(OperatorKind::CPrime, prev);
    let join = apply(OperatorKind::JPrime, prev);
    let u2 = Monomial::powers(0, 0, 0, 0, 2);
    cut.add(&join.mul_term(&u2, &rat_int(1)).expect("u^2 is g-free"))
}

/// One v-step of the `(a,b,c,d)` equation: `Gamma_m = (C'' + u^2 J'')
/// Gamma_{m-1}`.
pub fn step_gamma(prev: &Series) -> Series {
    let cut = apply(OperatorKind::CDoublePrime, prev);
    let join = apply(OperatorKind::JDoublePrime, prev);
    let u2 = Monomial::powers(0, 0, 0, 0, 2);
    cut.add(&join.mul_term(&u2, &rat_int(1)).expect("u^2 is g-free"))
}
