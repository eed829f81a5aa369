//! The digit-producing transformations T_β and T_{−β}, orbit tracing with
//! exact cycle detection, the reference words d_β(1), d*_β(1),
//! d_{−β}(l_β), d*_{−β}(r_β) and pointed expansions of elements of Q(β).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::base::{BaseContext, Sign};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::word::{digits_to_string, Digit, DigitWord};

/// Result of expanding along an orbit: either the orbit closed exactly and
/// the word is known, or the budget ran out and only a prefix is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "word", rename_all = "lowercase")]
pub enum ExpandedWord {
    Decided(DigitWord),
    Truncated(Vec<Digit>),
}

impl ExpandedWord {
    pub fn decided(&self) -> Option<&DigitWord> {
        match self {
            ExpandedWord::Decided(w) => Some(w),
            ExpandedWord::Truncated(_) => None,
        }
    }

    pub fn is_decided(&self) -> bool {
        matches!(self, ExpandedWord::Decided(_))
    }

    pub fn digit(&self, i: usize) -> Option<Digit> {
        match self {
            ExpandedWord::Decided(w) => Some(w.digit(i)),
            ExpandedWord::Truncated(d) => d.get(i).copied(),
        }
    }
}

impl fmt::Display for ExpandedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpandedWord::Decided(w) => write!(f, "{w}"),
            ExpandedWord::Truncated(d) => write!(f, "{}...", digits_to_string(d)),
        }
    }
}

/// Orbit of a transformation, with the index where it first closes.
#[derive(Clone, Debug)]
pub struct OrbitTrace {
    pub points: Vec<FieldElement>,
    pub cycle_start: Option<usize>,
}

/// `a_k⋯a_0 • x_1x_2⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedExpansion {
    pub integer_part: Vec<Digit>,
    pub fractional_part: ExpandedWord,
    pub base_sign: Sign,
}

impl fmt::Display for PointedExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}•", digits_to_string(&self.integer_part))?;
        match &self.fractional_part {
            ExpandedWord::Decided(w) if *w == DigitWord::zero() => Ok(()),
            other => write!(f, "{other}"),
        }
    }
}

fn to_digit(n: num_bigint::BigInt) -> Result<Digit> {
    n.to_u32().ok_or_else(|| Error::OutOfDomain(format!("digit {n} is not a valid digit")))
}

/// One step of T_β(x) = βx − ⌊βx⌋ on [0, 1).
pub fn step_beta(ctx: &BaseContext, x: &FieldElement) -> Result<(Digit, FieldElement)> {
    if x.sign()? == Ordering::Less || x.compare(&ctx.int(1))? != Ordering::Less {
        return Err(Error::OutOfDomain(format!("{x} not in [0, 1)")));
    }
    let bx = ctx.beta() * x;
    let d = bx.floor()?;
    let next = bx.add_rational(&num_rational::BigRational::from_integer(-d.clone()));
    Ok((to_digit(d)?, next))
}

/// One step of T_{−β}(x) = −βx − ⌊−βx + β/(β+1)⌋ on [l_β, r_β).
pub fn step_negbeta(ctx: &BaseContext, x: &FieldElement) -> Result<(Digit, FieldElement)> {
    if x.compare(ctx.l())? == Ordering::Less || x.compare(ctx.r())? != Ordering::Less {
        return Err(Error::OutOfDomain(format!("{x} not in [l_beta, r_beta)")));
    }
    let mbx = -(ctx.beta() * x);
    let d = (&mbx - ctx.l()).floor()?;
    let next = mbx.add_rational(&num_rational::BigRational::from_integer(-d.clone()));
    Ok((to_digit(d)?, next))
}

fn step(ctx: &BaseContext, sign: Sign, x: &FieldElement) -> Result<(Digit, FieldElement)> {
    match sign {
        Sign::Positive => step_beta(ctx, x),
        Sign::Negative => step_negbeta(ctx, x),
    }
}

/// Iterates the transformation from `x`, stopping when a point repeats
/// exactly or after `max_steps` digits.
pub fn trace_orbit(
    ctx: &BaseContext,
    sign: Sign,
    x: &FieldElement,
    max_steps: usize,
) -> Result<(OrbitTrace, Vec<Digit>, ExpandedWord)> {
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut points = vec![x.clone()];
    let mut digits = Vec::new();
    seen.insert(x.clone(), 0);
    let mut cur = x.clone();
    for _ in 0..max_steps {
        let (d, next) = step(ctx, sign, &cur)?;
        digits.push(d);
        if let Some(&start) = seen.get(&next) {
            let word = DigitWord::new(digits[..start].to_vec(), digits[start..].to_vec());
            let trace = OrbitTrace { points, cycle_start: Some(start) };
            return Ok((trace, digits, ExpandedWord::Decided(word)));
        }
        seen.insert(next.clone(), points.len());
        points.push(next.clone());
        cur = next;
    }
    let word = ExpandedWord::Truncated(digits.clone());
    Ok((OrbitTrace { points, cycle_start: None }, digits, word))
}

/// d_{−β}(l_β) within the context's orbit budget (cached).
pub fn reference_l(ctx: &BaseContext) -> Result<ExpandedWord> {
    if let Some(w) = ctx.caches.lock().unwrap().reference_l.clone() {
        return Ok(w);
    }
    let w = reference_l_with_budget(ctx, ctx.orbit_budget())?;
    ctx.caches.lock().unwrap().reference_l = Some(w.clone());
    Ok(w)
}

/// d_{−β}(l_β) with an explicit step budget (uncached).
pub fn reference_l_with_budget(ctx: &BaseContext, max_steps: usize) -> Result<ExpandedWord> {
    Ok(trace_orbit(ctx, Sign::Negative, ctx.l(), max_steps)?.2)
}

/// d_{−β}(l_β), failing when it is undecided.
pub fn reference_l_decided(ctx: &BaseContext) -> Result<DigitWord> {
    match reference_l(ctx)? {
        ExpandedWord::Decided(w) => Ok(w),
        ExpandedWord::Truncated(_) => Err(Error::UndecidedReference(ctx.orbit_budget())),
    }
}

/// d*_{−β}(r_β) from d_{−β}(l_β): `(0 d_1 ⋯ d_{2l} (d_{2l+1} − 1))^ω` when the
/// reference is purely periodic with odd period, otherwise `0 d_{−β}(l_β)`.
pub fn reference_r_star(ctx: &BaseContext) -> Result<DigitWord> {
    Ok(r_star_from_l(&reference_l_decided(ctx)?))
}

pub(crate) fn r_star_from_l(d: &DigitWord) -> DigitWord {
    if d.is_purely_periodic() && d.period().len() % 2 == 1 {
        let mut per = vec![0];
        per.extend_from_slice(d.period());
        *per.last_mut().unwrap() -= 1;
        DigitWord::periodic(per)
    } else {
        d.prepend(&[0])
    }
}

/// d_β(1) as a flagged word (cached).
pub fn renyi_one_word(ctx: &BaseContext) -> Result<ExpandedWord> {
    if let Some(w) = ctx.caches.lock().unwrap().renyi_one.clone() {
        return Ok(w);
    }
    let t1 = ctx.beta_floor();
    let frac = ctx.beta().add_rational(&num_rational::BigRational::from_integer((-(t1 as i64)).into()));
    let (_, _, tail) = trace_orbit(ctx, Sign::Positive, &frac, ctx.orbit_budget())?;
    let w = match tail {
        ExpandedWord::Decided(t) => ExpandedWord::Decided(t.prepend(&[t1])),
        ExpandedWord::Truncated(mut d) => {
            d.insert(0, t1);
            ExpandedWord::Truncated(d)
        }
    };
    ctx.caches.lock().unwrap().renyi_one = Some(w.clone());
    Ok(w)
}

/// Rényi expansion of unity d_β(1).
pub fn renyi_one(ctx: &BaseContext) -> Result<DigitWord> {
    match renyi_one_word(ctx)? {
        ExpandedWord::Decided(w) => Ok(w),
        ExpandedWord::Truncated(_) => Err(Error::UndecidedReference(ctx.orbit_budget())),
    }
}

/// d*_β(1): `(t_1⋯t_{m−1}(t_m − 1))^ω` when d_β(1) = t_1⋯t_m is finite,
/// otherwise d_β(1).
pub fn renyi_one_star(ctx: &BaseContext) -> Result<DigitWord> {
    Ok(star_from_renyi(&renyi_one(ctx)?))
}

pub(crate) fn star_from_renyi(d: &DigitWord) -> DigitWord {
    if d.is_finite() {
        let mut per = d.preperiod().to_vec();
        *per.last_mut().expect("d_beta(1) is nonzero") -= 1;
        DigitWord::periodic(per)
    } else {
        d.clone()
    }
}

/// First `n` digits of d_{−β}(x) for x ∈ [l_β, r_β).
pub fn expand_negbeta(ctx: &BaseContext, x: &FieldElement, n: usize) -> Result<Vec<Digit>> {
    expand_n(ctx, Sign::Negative, x, n)
}

/// First `n` digits of d_β(x) for x ∈ [0, 1).
pub fn expand_beta(ctx: &BaseContext, x: &FieldElement, n: usize) -> Result<Vec<Digit>> {
    expand_n(ctx, Sign::Positive, x, n)
}

fn expand_n(ctx: &BaseContext, sign: Sign, x: &FieldElement, n: usize) -> Result<Vec<Digit>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = x.clone();
    for _ in 0..n {
        let (d, next) = step(ctx, sign, &cur)?;
        out.push(d);
        cur = next;
    }
    Ok(out)
}

fn in_neg_domain(ctx: &BaseContext, y: &FieldElement) -> Result<bool> {
    Ok(y.compare(ctx.l())? != Ordering::Less && y.compare(ctx.r())? == Ordering::Less)
}

/// Pointed (−β)-expansion of any x ∈ Q(β), using the minimal exponent l with
/// x/(−β)^l ∈ [l_β, r_β), except for the doubly representable values
/// (−β)^k/(β+1), which get the preferred representation starting `1 d_1 d_2 ⋯`.
pub fn expand_real_negbeta(ctx: &BaseContext, x: &FieldElement) -> Result<PointedExpansion> {
    let neg_beta = -ctx.beta();
    let inv = neg_beta.inverse()?;
    let mut l = 0usize;
    let mut y = x.clone();
    while !in_neg_domain(ctx, &y)? {
        y = &y * &inv;
        l += 1;
        if l > ctx.field().budget_bits() as usize {
            return Err(Error::RefinementBudgetExceeded(ctx.field().budget_bits()));
        }
    }
    if &y == ctx.l() {
        y = &(&y * &inv) * &inv;
        l += 2;
    }
    let (_, _, word) = trace_orbit(ctx, Sign::Negative, &y, ctx.orbit_budget())?;
    Ok(split_pointed(word, l, Sign::Negative))
}

/// Pointed β-expansion of x ≥ 0 using the minimal k with x/β^k ∈ [0, 1).
pub fn expand_real_beta(ctx: &BaseContext, x: &FieldElement) -> Result<PointedExpansion> {
    if x.sign()? == Ordering::Less {
        return Err(Error::OutOfDomain(format!("{x} is negative")));
    }
    let inv = ctx.beta().inverse()?;
    let one = ctx.int(1);
    let mut k = 0usize;
    let mut y = x.clone();
    while y.compare(&one)? != Ordering::Less {
        y = &y * &inv;
        k += 1;
    }
    let (_, _, word) = trace_orbit(ctx, Sign::Positive, &y, ctx.orbit_budget())?;
    Ok(split_pointed(word, k, Sign::Positive))
}

fn split_pointed(word: ExpandedWord, l: usize, sign: Sign) -> PointedExpansion {
    let (head, frac) = match word {
        ExpandedWord::Decided(w) => (w.prefix(l), ExpandedWord::Decided(w.suffix(l))),
        ExpandedWord::Truncated(d) => {
            let cut = l.min(d.len());
            (d[..cut].to_vec(), ExpandedWord::Truncated(d[cut..].to_vec()))
        }
    };
    let first = head.iter().position(|&d| d != 0).unwrap_or(head.len());
    let mut integer_part = head[first..].to_vec();
    if integer_part.is_empty() {
        integer_part.push(0);
    }
    PointedExpansion { integer_part, fractional_part: frac, base_sign: sign }
}

/// γ(a_k⋯a_0) = a_k(−β)^k + ⋯ + a_1(−β) + a_0; γ(ε) = 0.
pub fn evaluate_gamma(ctx: &BaseContext, w: &[Digit]) -> FieldElement {
    let neg_beta = -ctx.beta();
    horner(ctx, &neg_beta, w)
}

/// a_kβ^k + ⋯ + a_1β + a_0.
pub fn evaluate_positive(ctx: &BaseContext, w: &[Digit]) -> FieldElement {
    horner(ctx, ctx.beta(), w)
}

fn horner(ctx: &BaseContext, radix: &FieldElement, w: &[Digit]) -> FieldElement {
    let mut acc = ctx.int(0);
    for &d in w {
        acc = (&acc * radix).add_rational(&num_rational::BigRational::from_integer(d.into()));
    }
    acc
}

/// Value Σ w_i ρ^{-i} of an infinite word for ρ = −β or β.
pub fn word_value(ctx: &BaseContext, w: &DigitWord, sign: Sign) -> Result<FieldElement> {
    let radix = match sign {
        Sign::Positive => ctx.beta().clone(),
        Sign::Negative => -ctx.beta(),
    };
    w.value_with(&radix.inverse()?)
}
