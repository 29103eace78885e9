//! Exact truncated multivariate formal series over the indeterminates
//! `g_R`, `f_(S)`, `x`, `y`, `v`, `w`, `u` with rational coefficients.
//!
//! Representation invariants:
//! - Coefficients are ordinary (non-exponential); factorial normalization is
//!   applied only at [`Series::egf_coeff`].
//! - No stored zero coefficients.
//! - Every stored monomial respects the truncation window.
//! - Monomials of combinatorial origin carry at most one `g` factor, enforced
//!   by the `Option` in [`Monomial`]; a product that would need two signals
//!   [`AtlasError::LinearityViolation`].
//!
//! The truncation window records the degrees up to which the series is exact
//! in each of `x`, `y`, `v`; `u32::MAX` in a component means "exact at every
//! order" (used by series with no dependence on that variable, so that
//! windows combine by componentwise minimum without losing information).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::{One, Zero};
use serde_json::{json, Value};

use crate::error::AtlasError;
use crate::strings::{BinaryString, CyclicString};
use crate::util::{factorial, rat_big};

/// Multiset of cyclic strings, stored as a sorted list of (class, multiplicity).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct FMultiset(Vec<(CyclicString, u32)>);

impl FMultiset {
    pub fn empty() -> Self {
        FMultiset(Vec::new())
    }

    pub fn single(s: CyclicString) -> Self {
        FMultiset(vec![(s, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(CyclicString, u32)>) -> Self {
        pairs.retain(|(_, m)| *m > 0);
        pairs.sort();
        let mut out: Vec<(CyclicString, u32)> = Vec::with_capacity(pairs.len());
        for (s, m) in pairs {
            match out.last_mut() {
                Some((last, lm)) if *last == s => *lm += m,
                _ => out.push((s, m)),
            }
        }
        FMultiset(out)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(CyclicString, u32)] {
        &self.0
    }

    pub fn multiplicity(&self, s: &CyclicString) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    pub fn insert(&self, s: CyclicString, m: u32) -> FMultiset {
        if m == 0 {
            return self.clone();
        }
        let mut v = self.0.clone();
        match v.binary_search_by(|(t, _)| t.cmp(&s)) {
            Ok(i) => v[i].1 += m,
            Err(i) => v.insert(i, (s, m)),
        }
        FMultiset(v)
    }

    /// Remove one copy of `s`; panics if absent.
    pub fn remove_one(&self, s: &CyclicString) -> FMultiset {
        let mut v = self.0.clone();
        let i = v
            .binary_search_by(|(t, _)| t.cmp(s))
            .expect("removing an f factor that is not present");
        if v[i].1 == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        FMultiset(v)
    }

    pub fn union(&self, other: &FMultiset) -> FMultiset {
        let mut pairs = self.0.clone();
        pairs.extend(other.0.iter().cloned());
        FMultiset::from_pairs(pairs)
    }

    pub fn total_length(&self) -> usize {
        self.0.iter().map(|(s, m)| s.len() * *m as usize).sum()
    }
}

/// One term index: an optional root-face factor `g_R`, a multiset of
/// non-root-face factors `f_(S)`, and the numeric grades.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub g: Option<BinaryString>,
    pub f: FMultiset,
    pub x: u32,
    pub y: u32,
    pub v: u32,
    pub w: u32,
    pub u: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            g: None,
            f: FMultiset::empty(),
            x: 0,
            y: 0,
            v: 0,
            w: 0,
            u: 0,
        }
    }

    pub fn of_g(g: BinaryString) -> Self {
        Monomial {
            g: Some(g),
            ..Monomial::one()
        }
    }

    pub fn of_f(s: CyclicString) -> Self {
        Monomial {
            f: FMultiset::single(s),
            ..Monomial::one()
        }
    }

    pub fn powers(x: u32, y: u32, v: u32, w: u32, u: u32) -> Self {
        Monomial {
            g: None,
            f: FMultiset::empty(),
            x,
            y,
            v,
            w,
            u,
        }
    }

    pub fn is_gf_free(&self) -> bool {
        self.g.is_none() && self.f.is_empty()
    }

    /// Product of two monomials; errors if both carry a `g` factor.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial, AtlasError> {
        let g = match (&self.g, &other.g) {
            (Some(a), Some(b)) => {
                return Err(AtlasError::LinearityViolation(a.to_string(), b.to_string()))
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        Ok(Monomial {
            g,
            f: self.f.union(&other.f),
            x: self.x + other.x,
            y: self.y + other.y,
            v: self.v + other.v,
            w: self.w + other.w,
            u: self.u + other.u,
        })
    }

    fn degree_key(&self) -> (u32, u32, u32, u32, u32) {
        (self.x, self.y, self.v, self.w, self.u)
    }
}

// Total order used for map keys and byte-stable dumps: degrees first, then
// the g string, then the f multiset.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree_key()
            .cmp(&other.degree_key())
            .then_with(|| self.g.cmp(&other.g))
            .then_with(|| self.f.cmp(&other.f))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(g) = &self.g {
            parts.push(format!("g_{{{g}}}"));
        }
        for (s, m) in self.f.pairs() {
            if *m == 1 {
                parts.push(format!("f_{s}"));
            } else {
                parts.push(format!("f_{s}^{m}"));
            }
        }
        for (name, d) in [
            ("x", self.x),
            ("y", self.y),
            ("v", self.v),
            ("w", self.w),
            ("u", self.u),
        ] {
            match d {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{d}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Exact window of a series: maximum tracked degree in `x`, `y`, `v`.
/// `u32::MAX` marks a component exact at every order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Truncation {
    pub x: u32,
    pub y: u32,
    pub v: u32,
}

pub const UNBOUNDED: u32 = u32::MAX;

impl Truncation {
    pub fn new(x: u32, y: u32, v: u32) -> Self {
        Truncation { x, y, v }
    }

    /// Exact at every order in every variable (polynomial data).
    pub fn unbounded() -> Self {
        Truncation {
            x: UNBOUNDED,
            y: UNBOUNDED,
            v: UNBOUNDED,
        }
    }

    pub fn min(&self, other: &Truncation) -> Truncation {
        Truncation {
            x: self.x.min(other.x),
            y: self.y.min(other.y),
            v: self.v.min(other.v),
        }
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.x <= self.x && m.y <= self.y && m.v <= self.v
    }
}

/// A truncated formal series: finite map from monomials to nonzero exact
/// rational coefficients, together with its exact window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    terms: BTreeMap<Monomial, BigRational>,
    trunc: Truncation,
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Series {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(c: BigRational, trunc: Truncation) -> Self {
        let mut s = Series::zero(trunc);
        s.insert(Monomial::one(), c);
        s
    }

    pub fn one(trunc: Truncation) -> Self {
        Series::constant(BigRational::one(), trunc)
    }

    pub fn monomial(m: Monomial, c: BigRational, trunc: Truncation) -> Self {
        let mut s = Series::zero(trunc);
        s.insert(m, c);
        s
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `c` onto the coefficient of `m`, dropping zeros and
    /// anything outside the window.
    pub fn insert(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() || !self.trunc.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Series) -> Series {
        let trunc = self.trunc.min(&other.trunc);
        let mut out = Series::zero(trunc);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        if c.is_zero() {
            return Series::zero(self.trunc);
        }
        let mut out = Series::zero(self.trunc);
        for (m, coeff) in &self.terms {
            out.insert(m.clone(), coeff * c);
        }
        out
    }

    /// Distributive product. `f` multisets union, grades add; errors if any
    /// product term would carry two `g` factors.
    pub fn mul(&self, other: &Series) -> Result<Series, AtlasError> {
        let trunc = self.trunc.min(&other.trunc);
        let mut out = Series::zero(trunc);
        for (ma, ca) in &self.terms {
            // Degree pre-screen: skip pairs that cannot land in the window.
            if !trunc.admits(ma) {
                continue;
            }
            for (mb, cb) in &other.terms {
                let x = ma.x + mb.x;
                let y = ma.y + mb.y;
                let v = ma.v + mb.v;
                if x > trunc.x || y > trunc.y || v > trunc.v {
                    continue;
                }
                let m = ma.mul(mb)?;
                out.insert(m, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiply by a single monomial with coefficient.
    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Result<Series, AtlasError> {
        self.mul(&Series::monomial(m.clone(), c.clone(), Truncation::unbounded()))
    }

    /// exp of a series with zero constant term, all of whose monomials have
    /// positive degree in some tracked variable (so powers terminate).
    pub fn exp(&self) -> Result<Series, AtlasError> {
        if !self.coeff(&Monomial::one()).is_zero() {
            return Err(AtlasError::invalid("exp requires zero constant term"));
        }
        for m in self.terms.keys() {
            if m.x == 0 && m.y == 0 && m.v == 0 {
                return Err(AtlasError::invalid(
                    "exp requires every term to carry x, y or v degree",
                ));
            }
        }
        let mut out = Series::one(self.trunc);
        let mut power = Series::one(self.trunc);
        let mut k: u32 = 0;
        loop {
            k += 1;
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&BigRational::new(1.into(), factorial(k))));
        }
        Ok(out)
    }

    /// Evaluate all `g_R` and `f_(S)` at 1, combining like terms.
    pub fn forget(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.g = None;
            m2.f = FMultiset::empty();
            out.insert(m2, c.clone());
        }
        out
    }

    /// Replace each index by its length: `g_R -> g_{len}` and
    /// `f_(S) -> f_{len}`, encoded on all-black strings.
    pub fn forget_lengths(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let g = m.g.as_ref().map(|r| BinaryString::blacks(r.len()));
            let f = FMultiset::from_pairs(
                m.f.pairs()
                    .iter()
                    .map(|(s, mult)| {
                        (
                            crate::strings::canonicalize(&BinaryString::blacks(s.len())),
                            *mult,
                        )
                    })
                    .collect(),
            );
            out.insert(
                Monomial {
                    g,
                    f,
                    ..m.clone()
                },
                c.clone(),
            );
        }
        out
    }

    /// EGF coefficient `[x^a/a! y^b/b! v^m/m! w^d u^{2g}]` of a g/f-free
    /// series: the stored ordinary coefficient times `a! b! m!`.
    pub fn egf_coeff(&self, a: u32, b: u32, m: u32, d: u32, genus: u32) -> Result<BigRational, AtlasError> {
        if a > self.trunc.x || b > self.trunc.y || m > self.trunc.v {
            return Err(AtlasError::TruncationExceeded(
                a,
                b,
                m,
                self.trunc.x,
                self.trunc.y,
                self.trunc.v,
            ));
        }
        let key = Monomial::powers(a, b, m, d, 2 * genus);
        let c = self.coeff(&key);
        Ok(c * rat_big(factorial(a)) * rat_big(factorial(b)) * rat_big(factorial(m)))
    }

    /// Ordinary partial derivative in `y`. The exact window shrinks by one.
    pub fn deriv_y(&self) -> Series {
        let trunc = Truncation {
            y: self.trunc.y.saturating_sub(1),
            ..self.trunc
        };
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            if m.y == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.y -= 1;
            out.insert(m2, c * rat_big(m.y.into()));
        }
        out
    }

    /// Ordinary partial derivative in `v`. The exact window shrinks by one.
    pub fn deriv_v(&self) -> Series {
        let trunc = Truncation {
            v: self.trunc.v.saturating_sub(1),
            ..self.trunc
        };
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            if m.v == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.v -= 1;
            out.insert(m2, c * rat_big(m.v.into()));
        }
        out
    }

    /// Partial derivative with respect to one `f`-type indeterminate:
    /// multiplicity becomes the multiplier and drops by one.
    pub fn deriv_f(&self, s: &CyclicString) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let mult = m.f.multiplicity(s);
            if mult == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.f = m.f.remove_one(s);
            out.insert(m2, c * rat_big(mult.into()));
        }
        out
    }

    /// Restrict to the `u^{deg}` slice (keeping the `u` grade on the terms).
    pub fn u_slice(&self, deg: u32) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            if m.u == deg {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Drop terms with `u` grade above `max`.
    pub fn u_truncate(&self, max: u32) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            if m.u <= max {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// The EGF slice `b! [y^b]`: coefficient of `y^b` with the factorial
    /// restored and the `y` grade removed.
    pub fn y_slice(&self, b: u32) -> Series {
        let trunc = Truncation {
            y: UNBOUNDED,
            ..self.trunc
        };
        let fact = rat_big(factorial(b));
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            if m.y == b {
                let mut m2 = m.clone();
                m2.y = 0;
                out.insert(m2, c * &fact);
            }
        }
        out
    }

    /// The EGF slice `m! [v^m]`.
    pub fn v_slice(&self, mv: u32) -> Series {
        let trunc = Truncation {
            v: UNBOUNDED,
            ..self.trunc
        };
        let fact = rat_big(factorial(mv));
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            if m.v == mv {
                let mut m2 = m.clone();
                m2.v = 0;
                out.insert(m2, c * &fact);
            }
        }
        out
    }

    /// Evaluate at `y = 0` (keep only terms with no `y` grade).
    pub fn at_y_zero(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            if m.y == 0 {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Evaluate at `v = 0`.
    pub fn at_v_zero(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            if m.v == 0 {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Shrink the exact window, dropping terms that fall outside it.
    pub fn truncate_to(&self, trunc: Truncation) -> Series {
        let trunc = self.trunc.min(&trunc);
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    /// Serialize the term list in the documented dump format, sorted by the
    /// monomial order (degrees, then g string, then f multiset).
    pub fn dump_terms(&self) -> Value {
        let rows: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "g": m.g.as_ref().map(|g| g.to_string()),
                    "f": m.f.pairs().iter().map(|(s, mult)| json!({
                        "cyc": s.to_string(),
                        "mult": mult,
                    })).collect::<Vec<_>>(),
                    "x": m.x,
                    "y": m.y,
                    "v": m.v,
                    "w": m.w,
                    "u": m.u,
                    "coeff": c.to_string(),
                })
            })
            .collect();
        Value::Array(rows)
    }

    /// Parse a term list produced by [`Series::dump_terms`] into a series with
    /// the given window.
    pub fn parse_terms(value: &Value, trunc: Truncation) -> Result<Series, AtlasError> {
        let rows = value
            .as_array()
            .ok_or_else(|| AtlasError::Parse("expected a JSON array of terms".into()))?;
        let mut out = Series::zero(trunc);
        for row in rows {
            let get_u32 = |key: &str| -> Result<u32, AtlasError> {
                row.get(key)
                    .and_then(Value::as_u64)
                    .map(|n| n as u32)
                    .ok_or_else(|| AtlasError::Parse(format!("missing degree field {key}")))
            };
            let g = match row.get("g") {
                Some(Value::String(s)) => Some(BinaryString::parse(s)?),
                Some(Value::Null) | None => None,
                _ => return Err(AtlasError::Parse("bad g field".into())),
            };
            let mut f_pairs = Vec::new();
            if let Some(Value::Array(fs)) = row.get("f") {
                for entry in fs {
                    let cyc = entry
                        .get("cyc")
                        .and_then(Value::as_str)
                        .ok_or_else(|| AtlasError::Parse("bad f entry".into()))?;
                    let mult = entry
                        .get("mult")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| AtlasError::Parse("bad f multiplicity".into()))?;
                    f_pairs.push((CyclicString::parse(cyc)?, mult as u32));
                }
            }
            let coeff_text = row
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| AtlasError::Parse("missing coeff".into()))?;
            let coeff: BigRational = coeff_text
                .parse()
                .map_err(|e| AtlasError::Parse(format!("bad coefficient {coeff_text:?}: {e}")))?;
            out.insert(
                Monomial {
                    g,
                    f: FMultiset::from_pairs(f_pairs),
                    x: get_u32("x")?,
                    y: get_u32("y")?,
                    v: get_u32("v")?,
                    w: get_u32("w")?,
                    u: get_u32("u")?,
                },
                coeff,
            );
        }
        Ok(out)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::canonicalize;
    use crate::util::{rat, rat_int};

    fn bs(text: &str) -> BinaryString {
        BinaryString::parse(text).unwrap()
    }

    fn cyc(text: &str) -> CyclicString {
        canonicalize(&bs(text))
    }

    fn t888() -> Truncation {
        Truncation::new(8, 8, 8)
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let m = Monomial::of_g(bs("BW"));
        let s = Series::monomial(m.clone(), rat_int(2), t888());
        assert_eq!(s.add(&Series::zero(t888())), s);
        let cancelled = s.add(&Series::monomial(m, rat_int(-2), t888()));
        assert!(cancelled.is_zero());
    }

    #[test]
    fn truncation_minimum_rule() {
        let a = Series::one(Truncation::new(8, 8, 8));
        let b = Series::one(Truncation::new(6, 8, 8));
        assert_eq!(a.add(&b).truncation(), Truncation::new(6, 8, 8));
    }

    #[test]
    fn multiply_unions_f_and_scales() {
        let xfw = Monomial {
            x: 1,
            f: FMultiset::single(cyc("W")),
            ..Monomial::one()
        };
        let s = Series::monomial(xfw, rat_int(1), t888());
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.num_terms(), 1);
        let (m, c) = sq.terms().next().unwrap();
        assert_eq!(m.x, 2);
        assert_eq!(m.f.multiplicity(&cyc("W")), 2);
        assert_eq!(*c, rat_int(1));

        let gb = Series::monomial(Monomial::of_g(bs("B")), rat_int(1), t888());
        let tripled = gb.scale(&rat_int(3));
        assert_eq!(tripled.coeff(&Monomial::of_g(bs("B"))), rat_int(3));
    }

    #[test]
    fn g_times_g_is_a_linearity_violation() {
        let a = Series::monomial(Monomial::of_g(bs("B")), rat_int(1), t888());
        let b = Series::monomial(Monomial::of_g(bs("BW")), rat_int(1), t888());
        assert!(matches!(
            a.mul(&b),
            Err(AtlasError::LinearityViolation(_, _))
        ));
    }

    #[test]
    fn forget_substitutes_ones() {
        let m = Monomial {
            g: Some(bs("BW")),
            f: FMultiset::from_pairs(vec![(cyc("W"), 2)]),
            x: 3,
            ..Monomial::one()
        };
        let s = Series::monomial(m, rat(5, 2), t888());
        let fg = s.forget();
        assert_eq!(fg.num_terms(), 1);
        assert_eq!(fg.coeff(&Monomial::powers(3, 0, 0, 0, 0)), rat(5, 2));
        assert!(Series::zero(t888()).forget().is_zero());
    }

    #[test]
    fn egf_coeff_normalizes_factorials() {
        let one = Series::one(t888());
        assert_eq!(one.egf_coeff(0, 0, 0, 0, 0).unwrap(), rat_int(1));
        // x^3 y^2 stored with ordinary coefficient 1/(3! 2!) has EGF coeff 1.
        let m = Monomial::powers(3, 2, 0, 0, 0);
        let s = Series::monomial(m, rat(1, 12), t888());
        assert_eq!(s.egf_coeff(3, 2, 0, 0, 0).unwrap(), rat_int(1));
        assert!(matches!(
            s.egf_coeff(9, 0, 0, 0, 0),
            Err(AtlasError::TruncationExceeded(..))
        ));
    }

    #[test]
    fn products_drop_overflow_terms() {
        let x = Series::monomial(Monomial::powers(5, 0, 0, 0, 0), rat_int(1), t888());
        let sq = x.mul(&x).unwrap();
        assert!(sq.is_zero()); // x^10 exceeds the window
    }

    #[test]
    fn exp_of_x() {
        let x = Series::monomial(Monomial::powers(1, 0, 0, 0, 0), rat_int(1), Truncation::new(4, 0, 0));
        let e = x.exp().unwrap();
        assert_eq!(e.egf_coeff(0, 0, 0, 0, 0).unwrap(), rat_int(1));
        assert_eq!(e.egf_coeff(3, 0, 0, 0, 0).unwrap(), rat_int(1));
        assert_eq!(e.egf_coeff(4, 0, 0, 0, 0).unwrap(), rat_int(1));
    }

    #[test]
    fn dump_round_trip() {
        let m = Monomial {
            g: Some(bs("BWB")),
            f: FMultiset::from_pairs(vec![(cyc("BW"), 1), (cyc("W"), 3)]),
            x: 2,
            y: 1,
            v: 0,
            w: 4,
            u: 2,
        };
        let mut s = Series::zero(t888());
        s.insert(m, rat(-7, 3));
        s.insert(Monomial::one(), rat_int(1));
        let parsed = Series::parse_terms(&s.dump_terms(), t888()).unwrap();
        assert_eq!(parsed, s);
    }
}
