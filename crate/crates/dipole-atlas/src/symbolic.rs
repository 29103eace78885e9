//! Series with symbolic phi factors, used by the genus-2 assembly.
//!
//! A tagged series is a finite sum `sum phi_{i,j}(v) phi_k(y) * coefficient`
//! where each coefficient is an ordinary [`Series`] free of `v` and `y`
//! (those grades live only inside the phi symbols). Keeping the phi factors
//! symbolic is what makes the preimage substitution
//! `g_{B R} phi_{i,j}(v) -> tau_{R,(i,j)}` a mechanical rewrite.
//!
//! Applying the join operator to a tagged series needs the product rule:
//! besides the explicit `f` factors of the coefficient, the derivative can
//! strike a phi symbol, via
//! `d phi_{i,j}/d f_(W) = i phi_{i+1,j}`,
//! `d phi_{i,j}/d f_(B) = j w phi_{i,j+1}`, and
//! `d phi_k /d f_(B) = k phi_{k+1}`;
//! the operator then contributes its own `w^{[S_1 = B]}` and duplicated
//! attachment corner exactly as in the explicit case with `S` a single
//! symbol.

use std::collections::BTreeMap;

use crate::error::AtlasError;
use crate::operators::{apply, OperatorKind};
use crate::phi::{phi_series, PhiSpec};
use crate::series::{Monomial, Series, Truncation};
use crate::strings::{BinaryString, Symbol};
use crate::util::rat_int;

/// Symbolic phi factors attached to a coefficient: `phi_{vw.0, vw.1}(v)` and
/// `phi_y(y)`, with `(0, 0)` and `0` meaning "absent" (both are the constant
/// 1 there).
pub(crate) type PhiTag = (u32, u32, u32);

#[derive(Clone, Debug, Default)]
pub(crate) struct TaggedSeries {
    parts: BTreeMap<PhiTag, Series>,
}

impl TaggedSeries {
    pub fn new() -> Self {
        TaggedSeries {
            parts: BTreeMap::new(),
        }
    }

    pub fn add_part(&mut self, tag: PhiTag, series: Series) {
        if series.is_zero() {
            return;
        }
        match self.parts.entry(tag) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(series);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&series);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TaggedSeries) -> TaggedSeries {
        let mut out = self.clone();
        for (tag, s) in &other.parts {
            out.add_part(*tag, s.clone());
        }
        out
    }

    /// Multiply every coefficient by a phi-free plain series.
    pub fn mul_plain(&self, factor: &Series) -> Result<TaggedSeries, AtlasError> {
        let mut out = TaggedSeries::new();
        for (tag, s) in &self.parts {
            out.add_part(*tag, s.mul(factor)?);
        }
        Ok(out)
    }

    pub fn parts(&self) -> impl Iterator<Item = (&PhiTag, &Series)> {
        self.parts.iter()
    }

    /// The cut operator `C''` only differentiates `g`, so it passes through
    /// the phi symbols part by part.
    pub fn apply_cut_dprime(&self) -> TaggedSeries {
        let mut out = TaggedSeries::new();
        for (tag, s) in &self.parts {
            out.add_part(*tag, apply(OperatorKind::CDoublePrime, s));
        }
        out
    }

    /// The join operator `J''` with the phi product rule.
    pub fn apply_join_dprime(&self) -> TaggedSeries {
        let mut out = TaggedSeries::new();
        for (&(vi, vj, yk), s) in &self.parts {
            // Explicit f factors of the coefficient.
            out.add_part((vi, vj, yk), apply(OperatorKind::JDoublePrime, s));
            // phi_{vi,vj}(v) struck through its f_(W) dependence: the
            // operator sees S = W (no w factor) and the derivative gives vi.
            if vi > 0 {
                out.add_part(
                    (vi + 1, vj, yk),
                    join_tag_route(s, Symbol::White, 0, vi),
                );
            }
            // phi_{vi,vj}(v) struck through f_(B): derivative j w, operator w.
            if vj > 0 {
                out.add_part(
                    (vi, vj + 1, yk),
                    join_tag_route(s, Symbol::Black, 2, vj),
                );
            }
            // phi_k(y) struck through f_(B): derivative k, operator w.
            if yk > 0 {
                out.add_part(
                    (vi, vj, yk + 1),
                    join_tag_route(s, Symbol::Black, 1, yk),
                );
            }
        }
        out
    }

    /// Realize the phi symbols as truncated series, `v` to `v_order` and `y`
    /// to `y_order`.
    pub fn realize(&self, v_order: u32, y_order: u32) -> Result<Series, AtlasError> {
        let mut out = Series::zero(Truncation::unbounded());
        for (&(vi, vj, yk), s) in &self.parts {
            let mut term = s.clone();
            if (vi, vj) != (0, 0) {
                term = term.mul(&phi_series(&PhiSpec::Counts(vi, vj), v_order)?)?;
            }
            if yk != 0 {
                term = term.mul(&phi_series(&PhiSpec::YForm(yk), y_order)?)?;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Group by preimage key: every monomial must carry `g_{B R}`; the
    /// leading black is stripped and the term is filed under
    /// `(R, phi-v counts)`, keeping its `phi_k(y)` tag in the value.
    pub fn tau_substitute(&self) -> Result<TauDecomposition, AtlasError> {
        let mut rows: BTreeMap<(BinaryString, u32, u32), YTagged> = BTreeMap::new();
        for (&(vi, vj, yk), s) in &self.parts {
            for (m, c) in s.terms() {
                let Some(g) = &m.g else {
                    return Err(AtlasError::invalid(
                        "tau substitution on a term without a g factor",
                    ));
                };
                if g.first() != Some(Symbol::Black) {
                    return Err(AtlasError::invalid(format!(
                        "root-face index {g} does not start at a region-1 corner"
                    )));
                }
                let r = g.slice(2, g.len());
                let mut stripped = m.clone();
                stripped.g = None;
                let entry = rows.entry((r, vi, vj)).or_default();
                entry.add_term(yk, stripped, c.clone());
            }
        }
        Ok(TauDecomposition { rows })
    }
}

fn join_tag_route(s: &Series, attach: Symbol, w_shift: u32, multiplier: u32) -> Series {
    let mut out = Series::zero(s.truncation());
    for (m, c) in s.terms() {
        let Some(r) = &m.g else { continue };
        if r.is_empty() {
            continue;
        }
        // g_{R_1 S_1 S_1 R_2..R_l} with S the single attachment symbol.
        let mut word = r.slice(1, 1);
        word.push(attach);
        word.push(attach);
        let new_g = word.concat(&r.slice(2, r.len()));
        let mut m2 = m.clone();
        m2.g = Some(new_g);
        m2.w += w_shift;
        out.insert(m2, c * rat_int(i64::from(multiplier)));
    }
    out
}

/// Coefficients that still carry a `phi_k(y)` symbol, keyed by `k`.
#[derive(Clone, Debug, Default)]
pub(crate) struct YTagged {
    parts: BTreeMap<u32, Series>,
}

impl YTagged {
    fn add_term(&mut self, k: u32, m: Monomial, c: num::rational::BigRational) {
        self.parts
            .entry(k)
            .or_insert_with(|| Series::zero(Truncation::unbounded()))
            .insert(m, c);
    }

    pub fn realize(&self, y_order: u32) -> Result<Series, AtlasError> {
        let mut out = Series::zero(Truncation::unbounded());
        for (&k, s) in &self.parts {
            let mut term = s.clone();
            if k != 0 {
                term = term.mul(&phi_series(&PhiSpec::YForm(k), y_order)?)?;
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

/// The result of the preimage substitution: for each `(R, i, j)` the
/// coefficient multiplying `tau_{R,(i,j)}` in the assembled solution.
#[derive(Clone, Debug, Default)]
pub(crate) struct TauDecomposition {
    pub rows: BTreeMap<(BinaryString, u32, u32), YTagged>,
}

impl TauDecomposition {
    /// Realize `sum tau_{R,(i,j)} * coefficient` into a plain series.
    pub fn realize(&self, v_order: u32, y_order: u32) -> Result<Series, AtlasError> {
        let mut out = Series::zero(Truncation::unbounded());
        for ((r, vi, vj), coeff) in &self.rows {
            let tau = crate::tau::tau_rs_counts(r, *vi, *vj, v_order)?;
            out = out.add(&tau.mul(&coeff.realize(y_order)?)?);
        }
        Ok(out)
    }
}
