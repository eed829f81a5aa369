//! Lexicographic and alternate orders on digit words, and the admissibility
//! predicates of the β- and (−β)-numeration systems.

use std::cmp::Ordering;

use serde::{Serialize, Serializer};

use crate::base::BaseContext;
use crate::error::{Error, Result};
use crate::expansion::{reference_l_decided, reference_r_star, renyi_one_star, ExpandedWord};
use crate::word::{Digit, DigitWord};

/// Outcome of comparing two infinite words. `witness_index` is the 1-based
/// position of the first differing digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderResult {
    pub relation: Ordering,
    pub witness_index: Option<usize>,
}

impl Serialize for OrderResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("OrderResult", 2)?;
        let rel = match self.relation {
            Ordering::Less => "LT",
            Ordering::Equal => "EQ",
            Ordering::Greater => "GT",
        };
        st.serialize_field("relation", rel)?;
        st.serialize_field("witness_index", &self.witness_index)?;
        st.end()
    }
}

/// First 1-based index in `1..=horizon` where the two digit streams differ.
fn first_difference(a: impl Fn(usize) -> Digit, b: impl Fn(usize) -> Digit, horizon: usize) -> Option<(usize, Digit, Digit)> {
    (0..horizon).find_map(|i| {
        let (x, y) = (a(i), b(i));
        (x != y).then_some((i + 1, x, y))
    })
}

fn lex_from(diff: Option<(usize, Digit, Digit)>) -> OrderResult {
    match diff {
        None => OrderResult { relation: Ordering::Equal, witness_index: None },
        Some((i, x, y)) => OrderResult { relation: x.cmp(&y), witness_index: Some(i) },
    }
}

/// x ≺_alt y iff (−1)^i (y_i − x_i) > 0 at the first difference i.
fn alt_from(diff: Option<(usize, Digit, Digit)>) -> OrderResult {
    match diff {
        None => OrderResult { relation: Ordering::Equal, witness_index: None },
        Some((i, x, y)) => {
            let rel = if i % 2 == 0 { x.cmp(&y) } else { y.cmp(&x) };
            OrderResult { relation: rel, witness_index: Some(i) }
        }
    }
}

pub fn lex_order(u: &DigitWord, v: &DigitWord) -> OrderResult {
    lex_from(first_difference(|i| u.digit(i), |i| v.digit(i), u.horizon(v)))
}

pub fn alt_order(u: &DigitWord, v: &DigitWord) -> OrderResult {
    alt_from(first_difference(|i| u.digit(i), |i| v.digit(i), u.horizon(v)))
}

fn finite_horizon(u: &[Digit], w: &DigitWord) -> usize {
    u.len().max(w.preperiod().len()) + w.period_len()
}

fn finite_digit(u: &[Digit], i: usize) -> Digit {
    u.get(i).copied().unwrap_or(0)
}

/// Alternate order of `u·0^ω` against `w`.
pub(crate) fn alt_finite(u: &[Digit], w: &DigitWord) -> Ordering {
    alt_from(first_difference(|i| finite_digit(u, i), |i| w.digit(i), finite_horizon(u, w))).relation
}

/// Lexicographic order of `u·0^ω` against `w`.
pub(crate) fn lex_finite(u: &[Digit], w: &DigitWord) -> Ordering {
    lex_from(first_difference(|i| finite_digit(u, i), |i| w.digit(i), finite_horizon(u, w))).relation
}

/// Alternate order of two finite words of equal length.
pub(crate) fn alt_cmp_equal_len(a: &[Digit], b: &[Digit]) -> Ordering {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        None => Ordering::Equal,
        Some(i) if i % 2 == 1 => a[i].cmp(&b[i]),
        Some(i) => b[i].cmp(&a[i]),
    }
}

fn decided(w: &ExpandedWord) -> Result<&DigitWord> {
    w.decided().ok_or(Error::UndecidedInput)
}

pub fn lex_compare(u: &ExpandedWord, v: &ExpandedWord) -> Result<OrderResult> {
    Ok(lex_order(decided(u)?, decided(v)?))
}

pub fn alt_compare(u: &ExpandedWord, v: &ExpandedWord) -> Result<OrderResult> {
    Ok(alt_order(decided(u)?, decided(v)?))
}

/// The two reference words bounding every suffix of a (−β)-admissible word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegReferences {
    pub l: DigitWord,
    pub r_star: DigitWord,
}

impl NegReferences {
    pub fn of(ctx: &BaseContext) -> Result<Self> {
        Ok(NegReferences { l: reference_l_decided(ctx)?, r_star: reference_r_star(ctx)? })
    }

    /// d_{−β}(l_β) ⪯_alt s ≺_alt d*_{−β}(r_β).
    pub fn in_window(&self, s: &DigitWord) -> bool {
        alt_order(&self.l, s).relation != Ordering::Greater && alt_order(s, &self.r_star).relation == Ordering::Less
    }

    /// Window test for `u·0^ω` alone (not its proper suffixes).
    pub(crate) fn finite_in_window(&self, u: &[Digit]) -> bool {
        alt_finite(u, &self.l) != Ordering::Less && alt_finite(u, &self.r_star) == Ordering::Less
    }

    /// Admissibility of `u·0^ω`.
    pub fn admits_finite(&self, u: &[Digit]) -> bool {
        (0..u.len()).all(|i| self.finite_in_window(&u[i..]))
    }

    pub fn admits(&self, w: &DigitWord) -> bool {
        w.suffix_classes().iter().all(|s| self.in_window(s))
    }
}

/// The bound d*_β(1) every suffix of a β-admissible word stays below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosReference {
    pub one_star: DigitWord,
}

impl PosReference {
    pub fn of(ctx: &BaseContext) -> Result<Self> {
        Ok(PosReference { one_star: renyi_one_star(ctx)? })
    }

    pub(crate) fn finite_in_window(&self, u: &[Digit]) -> bool {
        lex_finite(u, &self.one_star) == Ordering::Less
    }

    pub fn admits_finite(&self, u: &[Digit]) -> bool {
        (0..u.len()).all(|i| self.finite_in_window(&u[i..]))
    }

    pub fn admits(&self, w: &DigitWord) -> bool {
        w.suffix_classes().iter().all(|s| lex_order(s, &self.one_star).relation == Ordering::Less)
    }
}

/// Parry's condition: every suffix is lexicographically below d*_β(1).
pub fn is_admissible_beta(ctx: &BaseContext, w: &DigitWord) -> Result<bool> {
    Ok(PosReference::of(ctx)?.admits(w))
}

/// Every suffix s satisfies d_{−β}(l_β) ⪯_alt s ≺_alt d*_{−β}(r_β).
pub fn is_admissible_negbeta(ctx: &BaseContext, w: &DigitWord) -> Result<bool> {
    Ok(NegReferences::of(ctx)?.admits(w))
}
