//! (−β)-integers and β-integers: triviality, the extremal strings min(k) and
//! max(k), the gap values Δ_k and window enumeration.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::admissibility::{alt_cmp_equal_len, NegReferences, PosReference};
use crate::base::{BaseContext, Sign};
use crate::error::{Error, Result};
use crate::expansion::{reference_l_decided, renyi_one_star, trace_orbit, word_value};
use crate::field::FieldElement;
use crate::word::{digits_to_string, Digit, DigitWord};

/// Which closed-form description of d_{−β}(l_β) applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// Infinite reference with 0 < d_i and d_1 > d_{2i} for all i.
    Infinite,
    /// Finite reference d_1⋯d_m with 0 < d_i and d_1 > d_{2i} for i ≤ m.
    Finite,
    Neither,
}

pub fn hypothesis(d: &DigitWord) -> Hypothesis {
    let d1 = d.digit(0);
    if d.is_finite() {
        let m = d.preperiod().len();
        let ok = m >= 1 && d.preperiod().iter().all(|&x| x > 0) && (1..=m / 2).all(|i| d.digit(2 * i - 1) < d1);
        return if ok { Hypothesis::Finite } else { Hypothesis::Neither };
    }
    let span = d.preperiod().len() + 2 * d.period().len() + 2;
    let positive = d.preperiod().iter().chain(d.period()).all(|&x| x > 0);
    if positive && (1..=span).all(|i| d.digit(2 * i - 1) < d1) {
        Hypothesis::Infinite
    } else {
        Hypothesis::Neither
    }
}

pub fn base_hypothesis(ctx: &BaseContext) -> Result<Hypothesis> {
    Ok(hypothesis(&reference_l_decided(ctx)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    pub trivial: bool,
    /// The prefix 1 0^{2k} 1 of d_{−β}(l_β) witnessing triviality.
    pub witness_prefix: Option<String>,
    /// β < (1+√5)/2, decided exactly from the sign of β² − β − 1.
    pub below_golden_ratio: bool,
    pub consistent: bool,
}

/// Z_{−β} = {0} iff d_{−β}(l_β) has a prefix 1 0^{2k} 1.
pub fn is_trivial(ctx: &BaseContext) -> Result<TrivialityReport> {
    let d = reference_l_decided(ctx)?;
    let mut witness = None;
    if d.digit(0) == 1 {
        let limit = d.preperiod().len() + d.period_len() + 1;
        if let Some(j) = (1..limit).find(|&j| d.digit(j) != 0) {
            // digits are bounded by d_1 = 1
            if (j - 1) % 2 == 0 {
                witness = Some(digits_to_string(&d.prefix(j + 1)));
            }
        }
    }
    let b = ctx.beta();
    let golden = &(b * b) - b - &ctx.int(1);
    let below = golden.sign()? == Ordering::Less;
    let trivial = witness.is_some();
    Ok(TrivialityReport { trivial, witness_prefix: witness, below_golden_ratio: below, consistent: trivial == below })
}

/// Digit trees of admissible finite strings.
pub(crate) struct NegTree<'a> {
    refs: &'a NegReferences,
    amax: Digit,
}

impl<'a> NegTree<'a> {
    pub(crate) fn new(ctx: &BaseContext, refs: &'a NegReferences) -> Self {
        NegTree { refs, amax: ctx.alphabet_max(Sign::Negative) }
    }

    /// All strings of S(k), unordered, grown by prepending digits.
    pub(crate) fn layer(&self, k: usize) -> Vec<Vec<Digit>> {
        let mut cur: Vec<Vec<Digit>> = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for s in &cur {
                for d in 0..=self.amax {
                    let mut cand = Vec::with_capacity(s.len() + 1);
                    cand.push(d);
                    cand.extend_from_slice(s);
                    if self.refs.finite_in_window(&cand) {
                        next.push(cand);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Whether some suffix of the prefix `p` is already out of the window.
    fn prefix_dead(&self, p: &[Digit]) -> bool {
        (0..p.len()).any(|i| {
            let s = &p[i..];
            let l = self.refs.l.prefix(s.len());
            let r = self.refs.r_star.prefix(s.len());
            alt_cmp_equal_len(s, &l) == Ordering::Less || alt_cmp_equal_len(s, &r) == Ordering::Greater
        })
    }

    /// Strings of S(len) between `lo` and `hi` (inclusive, alternate order),
    /// in ascending or descending order, stopping after `limit` results.
    pub(crate) fn ordered(
        &self,
        len: usize,
        lo: Option<&[Digit]>,
        hi: Option<&[Digit]>,
        descending: bool,
        limit: usize,
    ) -> Vec<Vec<Digit>> {
        let mut out = Vec::new();
        let mut p = Vec::with_capacity(len);
        self.dfs(&mut p, len, lo, hi, descending, limit, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        p: &mut Vec<Digit>,
        len: usize,
        lo: Option<&[Digit]>,
        hi: Option<&[Digit]>,
        descending: bool,
        limit: usize,
        out: &mut Vec<Vec<Digit>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if p.len() == len {
            if self.refs.admits_finite(p) {
                out.push(p.clone());
            }
            return;
        }
        let pos = p.len();
        // ascending alternate order: larger digits first at odd (1-based) positions
        let odd = pos % 2 == 0;
        let digits: Vec<Digit> = if odd != descending {
            (0..=self.amax).rev().collect()
        } else {
            (0..=self.amax).collect()
        };
        for d in digits {
            p.push(d);
            let n = p.len();
            let below = lo.is_some_and(|b| alt_cmp_equal_len(p, &b[..n]) == Ordering::Less);
            let above = hi.is_some_and(|b| alt_cmp_equal_len(p, &b[..n]) == Ordering::Greater);
            if !below && !above && !self.prefix_dead(p) {
                self.dfs(p, len, lo, hi, descending, limit, out);
            }
            p.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
}

/// S(k): strings a_{k−1}⋯a_0 with a_{k−1}⋯a_0 0^ω admissible, in ascending
/// alternate order.
pub fn enumerate_s(ctx: &BaseContext, k: usize) -> Result<Vec<Vec<Digit>>> {
    let refs = NegReferences::of(ctx)?;
    let mut v = NegTree::new(ctx, &refs).layer(k);
    v.sort_by(|a, b| alt_cmp_equal_len(a, b));
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalMethod {
    Bruteforce,
    ClosedInfinite,
    ClosedFinite,
}

impl FromStr for ExtremalMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bruteforce" => Ok(ExtremalMethod::Bruteforce),
            "closed_infinite" | "closed-infinite" => Ok(ExtremalMethod::ClosedInfinite),
            "closed_finite" | "closed-finite" => Ok(ExtremalMethod::ClosedFinite),
            _ => Err(Error::ParseError(format!("unknown extremal method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalStrings {
    pub k: usize,
    pub min: Vec<Digit>,
    pub max: Vec<Digit>,
    pub method: ExtremalMethod,
}

pub fn extremal_strings(ctx: &BaseContext, k: usize, method: ExtremalMethod) -> Result<ExtremalStrings> {
    let d = reference_l_decided(ctx)?;
    let (min, max) = match method {
        ExtremalMethod::Bruteforce => {
            let refs = NegReferences::of(ctx)?;
            extremal_bruteforce(&NegTree::new(ctx, &refs), k)
        }
        ExtremalMethod::ClosedInfinite => {
            if hypothesis(&d) != Hypothesis::Infinite {
                return Err(Error::HypothesisViolated(format!("d = {d} needs 0 < d_i and d_1 > d_2i, infinite")));
            }
            (min_infinite(&d, k), if k == 0 { vec![] } else { zero_then(&min_infinite(&d, k - 1)) })
        }
        ExtremalMethod::ClosedFinite => {
            if hypothesis(&d) != Hypothesis::Finite {
                return Err(Error::HypothesisViolated(format!("d = {d} needs a finite reference with 0 < d_i, d_1 > d_2i")));
            }
            // d = 1 (β = τ): the odd-k max(k) would end in 01·0^ω = d*(r), which is excluded
            if d.preperiod() == [1] && k >= 3 && k % 2 == 1 {
                return Err(Error::HypothesisViolated("d = 1: odd max(k) for k ≥ 3 only exists by enumeration".into()));
            }
            (min_finite(&d, k), max_finite(&d, k)?)
        }
    };
    Ok(ExtremalStrings { k, min, max, method })
}

pub(crate) fn extremal_bruteforce(tree: &NegTree, k: usize) -> (Vec<Digit>, Vec<Digit>) {
    let min = tree.ordered(k, None, None, false, 1).pop().expect("0^k is admissible");
    let max = tree.ordered(k, None, None, true, 1).pop().expect("0^k is admissible");
    (min, max)
}

fn zero_then(s: &[Digit]) -> Vec<Digit> {
    let mut v = vec![0];
    v.extend_from_slice(s);
    v
}

fn min_infinite(d: &DigitWord, k: usize) -> Vec<Digit> {
    let mut v = d.prefix(k);
    if k % 2 == 1 {
        v[k - 1] -= 1;
    }
    v
}

fn min_finite(d: &DigitWord, k: usize) -> Vec<Digit> {
    let m = d.preperiod().len();
    if k >= m {
        return d.prefix(k);
    }
    min_infinite(d, k)
}

fn max_finite(d: &DigitWord, k: usize) -> Result<Vec<Digit>> {
    let m = d.preperiod().len();
    let dd = |i: usize| d.digit(i - 1);
    let head = |n: usize| -> Vec<Digit> { zero_then(&d.prefix(n)) };
    if k == 0 {
        return Ok(vec![]);
    }
    if k <= m {
        return Ok(zero_then(&min_finite(d, k - 1)));
    }
    let min1 = min_finite(d, 1);
    let v = if k == m + 1 && k % 2 == 0 {
        let mut v = head(m);
        v[m] -= 1;
        v
    } else if k == m + 1 {
        if dd(m) + 1 < dd(1) {
            let mut v = head(m);
            v[m] += 1;
            v
        } else if dd(m) + 1 == dd(1) {
            let mut v = head(m - 1);
            v[m - 1] -= 1;
            v.push(0);
            v
        } else {
            return Err(Error::HypothesisViolated(format!("d_m = d_1 at odd k = {k}")));
        }
    } else if k == m + 2 && k % 2 == 0 {
        let mut v = head(m);
        v[m] += 1;
        v.extend_from_slice(&min1);
        v
    } else if k % 2 == 1 {
        let mut v = head(m);
        v.extend(std::iter::repeat(0).take(k - m - 2));
        v.push(1);
        v
    } else {
        let mut v = head(m);
        v.extend(std::iter::repeat(0).take(k - m - 3));
        v.push(1);
        v.extend_from_slice(&min1);
        v
    };
    Ok(v)
}

/// Powers (−β)^0, (−β)^1, … as exact field elements.
pub(crate) struct GammaPowers {
    pows: Vec<FieldElement>,
    neg_beta: FieldElement,
}

impl GammaPowers {
    pub(crate) fn new(ctx: &BaseContext, sign: Sign) -> Self {
        let neg_beta = match sign {
            Sign::Negative => -ctx.beta(),
            Sign::Positive => ctx.beta().clone(),
        };
        GammaPowers { pows: vec![ctx.int(1)], neg_beta }
    }

    fn ensure(&mut self, n: usize) {
        while self.pows.len() < n {
            let next = self.pows.last().unwrap() * &self.neg_beta;
            self.pows.push(next);
        }
    }

    /// Value of a_{k−1}⋯a_0 in the radix.
    pub(crate) fn eval(&mut self, w: &[Digit]) -> FieldElement {
        self.ensure(w.len());
        let mut acc = self.pows[0].field().zero();
        for (i, &a) in w.iter().rev().enumerate() {
            if a != 0 {
                acc = &acc + &self.pows[i].mul_int(a as i64);
            }
        }
        acc
    }

    pub(crate) fn pow(&mut self, k: usize) -> FieldElement {
        self.ensure(k + 1);
        self.pows[k].clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaMethod {
    Definition,
    Series,
    Orbit,
    FiniteTable,
}

impl FromStr for DeltaMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition" => Ok(DeltaMethod::Definition),
            "series" => Ok(DeltaMethod::Series),
            "orbit" => Ok(DeltaMethod::Orbit),
            "finite_table" | "finite-table" => Ok(DeltaMethod::FiniteTable),
            _ => Err(Error::ParseError(format!("unknown delta method '{s}'"))),
        }
    }
}

impl fmt::Display for DeltaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMethod::Definition => "definition",
            DeltaMethod::Series => "series",
            DeltaMethod::Orbit => "orbit",
            DeltaMethod::FiniteTable => "finite_table",
        })
    }
}

/// Δ_k = |(−β)^k + γ(min(k)) − γ(max(k))| from given extremal strings.
fn delta_from_extremal(pows: &mut GammaPowers, k: usize, min: &[Digit], max: &[Digit]) -> Result<FieldElement> {
    let v = &(&pows.pow(k) + &pows.eval(min)) - &pows.eval(max);
    v.abs()
}

/// |(−1)^k + T^{k−1}(l_β) − T^k(l_β)| with the orbit points as suffix values.
fn delta_series(ctx: &BaseContext, d: &DigitWord, k: usize) -> Result<FieldElement> {
    if k == 0 {
        return Ok(ctx.int(1));
    }
    let a = word_value(ctx, &d.suffix(k - 1), Sign::Negative)?;
    let b = word_value(ctx, &d.suffix(k), Sign::Negative)?;
    let sign = if k % 2 == 0 { 1 } else { -1 };
    (&(&ctx.int(sign) + &a) - &b).abs()
}

fn delta_orbit(ctx: &BaseContext, k: usize) -> Result<FieldElement> {
    if k == 0 {
        return Ok(ctx.int(1));
    }
    let (trace, _, word) = trace_orbit(ctx, Sign::Negative, ctx.l(), ctx.orbit_budget())?;
    if !word.is_decided() {
        return Err(Error::UndecidedReference(ctx.orbit_budget()));
    }
    let point = |j: usize| -> FieldElement {
        let n = trace.points.len();
        if j < n {
            trace.points[j].clone()
        } else {
            let c = trace.cycle_start.expect("decided orbit has a cycle");
            trace.points[c + (j - c) % (n - c)].clone()
        }
    };
    let sign = if k % 2 == 0 { 1 } else { -1 };
    (&(&ctx.int(sign) + &point(k - 1)) - &point(k)).abs()
}

fn delta_finite_table(ctx: &BaseContext, d: &DigitWord, k: usize) -> Result<FieldElement> {
    let m = d.preperiod().len();
    let dm = d.digit(m - 1);
    let d1 = d.digit(0);
    let delta1 = || delta_finite_table(ctx, d, 1);
    if k == 0 {
        return Ok(ctx.int(1));
    }
    if k < m {
        return delta_series(ctx, d, k);
    }
    if k == m {
        let q = ctx.beta().inverse()?.mul_int(dm as i64);
        return Ok(if m % 2 == 0 { &ctx.int(1) - &q } else { q });
    }
    if k == m + 1 {
        return if m % 2 == 0 && dm + 1 == d1 { delta1() } else { Ok(ctx.int(1)) };
    }
    if k % 2 == 1 {
        Ok(ctx.int(1))
    } else {
        delta1()
    }
}

/// Δ_k by the chosen method. `Series` and `Orbit` need the infinite-reference
/// hypothesis, `FiniteTable` the finite one; `Definition` always applies.
pub fn delta_gap(ctx: &BaseContext, k: usize, method: DeltaMethod) -> Result<FieldElement> {
    let d = reference_l_decided(ctx)?;
    let h = hypothesis(&d);
    match method {
        DeltaMethod::Definition => {
            let e = extremal_strings(ctx, k, ExtremalMethod::Bruteforce)?;
            delta_from_extremal(&mut GammaPowers::new(ctx, Sign::Negative), k, &e.min, &e.max)
        }
        DeltaMethod::Series | DeltaMethod::Orbit if h != Hypothesis::Infinite => {
            Err(Error::HypothesisViolated(format!("{method} needs 0 < d_i and d_1 > d_2i for d = {d}")))
        }
        DeltaMethod::Series => delta_series(ctx, &d, k),
        DeltaMethod::Orbit => delta_orbit(ctx, k),
        DeltaMethod::FiniteTable if h != Hypothesis::Finite => {
            Err(Error::HypothesisViolated(format!("finite_table needs a finite reference, d = {d}")))
        }
        DeltaMethod::FiniteTable => delta_finite_table(ctx, &d, k),
    }
}

/// Gap values Δ_0…Δ_{k_max} by the definition, reusing one digit tree.
pub fn delta_definitions(ctx: &BaseContext, k_max: usize) -> Result<Vec<FieldElement>> {
    let refs = NegReferences::of(ctx)?;
    let tree = NegTree::new(ctx, &refs);
    let mut pows = GammaPowers::new(ctx, Sign::Negative);
    (0..=k_max)
        .map(|k| {
            let (min, max) = extremal_bruteforce(&tree, k);
            delta_from_extremal(&mut pows, k, &min, &max)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapClass {
    pub value: FieldElement,
    pub members: Vec<usize>,
}

/// Which structural prediction for coinciding gaps applies, and whether the
/// computed values follow it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternCheck {
    pub pattern: String,
    pub preperiod: usize,
    pub period: usize,
    pub holds: bool,
    pub first_violation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapTable {
    pub entries: Vec<FieldElement>,
    pub classes: Vec<GapClass>,
    pub horizon: usize,
    pub pattern: Option<PatternCheck>,
}

impl GapTable {
    pub fn from_values(entries: Vec<FieldElement>) -> Self {
        let mut classes: Vec<GapClass> = Vec::new();
        for (k, v) in entries.iter().enumerate() {
            match classes.iter_mut().find(|c| &c.value == v) {
                Some(c) => c.members.push(k),
                None => classes.push(GapClass { value: v.clone(), members: vec![k] }),
            }
        }
        let horizon = entries.len().saturating_sub(1);
        GapTable { entries, classes, horizon, pattern: None }
    }

    /// Smallest k with the same gap value as `k`.
    pub fn representative(&self, k: usize) -> Option<usize> {
        let v = self.entries.get(k)?;
        self.entries.iter().position(|x| x == v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "entries": self.entries.iter().enumerate().map(|(k, v)| json!({
                "k": k,
                "value": v.to_string(),
                "approx": v.to_f64(),
            })).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| json!({
                "value": c.value.to_string(),
                "approx": c.value.to_f64(),
                "members": c.members,
            })).collect::<Vec<_>>(),
            "horizon": self.horizon,
            "pattern": self.pattern,
        })
    }
}

fn check_relation(range: impl Iterator<Item = usize>, rel: impl Fn(usize) -> Option<bool>) -> (bool, Option<usize>) {
    for k in range {
        match rel(k) {
            Some(true) | None => {}
            Some(false) => return (false, Some(k)),
        }
    }
    (true, None)
}

/// The predicted coincidence pattern for the reference `d`, checked on `e`.
pub fn predicted_pattern(ctx: &BaseContext, d: &DigitWord, e: &[FieldElement]) -> Option<PatternCheck> {
    let n = e.len();
    let at = |k: usize| e.get(k);
    let eq = |a: usize, b: usize| -> Option<bool> { Some(at(a)? == at(b)?) };
    let two = ctx.int(2);
    match hypothesis(d) {
        Hypothesis::Infinite => {
            let m = d.preperiod().len();
            let p = d.period().len();
            let (name, (holds, viol)) = match p {
                1 => ("period-1", check_relation(1..n, |k| eq(m + k, 0))),
                2 => ("period-2", check_relation(1..n, |k| eq(m + k, m + 1))),
                _ if p % 2 == 0 => ("even-period", check_relation(1..n, |k| eq(m + p + k, m + k))),
                _ => {
                    let a = check_relation(1..n, |k| eq(m + 2 * p + k, m + k));
                    let b = check_relation(1..n, |k| Some(at(m + p + k)? == &(&two - at(m + k)?)));
                    ("odd-period", if !a.0 { a } else { b })
                }
            };
            Some(PatternCheck { pattern: name.into(), preperiod: m, period: p, holds, first_violation: viol })
        }
        Hypothesis::Finite => {
            let m = d.preperiod().len();
            let dm = d.digit(m - 1);
            let d1 = d.digit(0);
            let next = if m % 2 == 0 && dm + 1 == d1 { 1 } else { 0 };
            let (holds, viol) = check_relation(m + 1..n, |k| {
                let target = if k == m + 1 { next } else if k % 2 == 1 { 0 } else { 1 };
                eq(k, target)
            });
            Some(PatternCheck { pattern: "finite".into(), preperiod: m, period: 0, holds, first_violation: viol })
        }
        Hypothesis::Neither => None,
    }
}

/// Δ_0…Δ_{k_max} by definition, grouped by exact equality, with the
/// structural prediction checked when one applies.
pub fn gap_coincidences(ctx: &BaseContext, k_max: usize) -> Result<GapTable> {
    let d = reference_l_decided(ctx)?;
    let mut t = GapTable::from_values(delta_definitions(ctx, k_max)?);
    t.pattern = predicted_pattern(ctx, &d, &t.entries);
    Ok(t)
}

/// How much of Z_{−β} or Z_β to list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowSpec {
    /// That many points on each side of 0.
    Count(usize),
    /// All points with |z| ≤ bound.
    Bound(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerPoint {
    /// a_k⋯a_0 without leading zeros; `[0]` for zero.
    pub digits: Vec<Digit>,
    pub value: FieldElement,
    /// Set for the mirrored half of a symmetric positive-base window.
    pub negated: bool,
}

impl IntegerPoint {
    /// `110•`, or `-110•` for mirrored points.
    pub fn pointed(&self) -> String {
        format!("{}{}•", if self.negated { "-" } else { "" }, digits_to_string(&self.digits))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerWindow {
    pub sign: Sign,
    /// Strictly increasing.
    pub points: Vec<IntegerPoint>,
    /// Letter coding the gap between points n and n+1.
    pub gap_letters: Vec<usize>,
    /// Index of 0 in `points`.
    pub origin: usize,
}

impl IntegerWindow {
    /// z_1, z_2, … (positive side, increasing).
    pub fn positive(&self) -> &[IntegerPoint] {
        &self.points[self.origin + 1..]
    }

    /// z_{−1}, z_{−2}, … (negative side, moving away from 0).
    pub fn negative(&self) -> Vec<&IntegerPoint> {
        self.points[..self.origin].iter().rev().collect()
    }

    pub fn gaps(&self) -> Vec<FieldElement> {
        self.points.windows(2).map(|w| &w[1].value - &w[0].value).collect()
    }

    pub fn to_json(&self, ctx: &BaseContext) -> Value {
        json!({
            "base": ctx.polynomial().to_string(),
            "sign": self.sign,
            "points": self.points.iter().map(|p| json!({
                "digits": format!("{}{}", if p.negated { "-" } else { "" }, digits_to_string(&p.digits)),
                "value_exact": p.value.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "value_approx": p.value.to_f64(),
            })).collect::<Vec<_>>(),
            "gap_letters": self.gap_letters,
        })
    }

    /// Columns digits,value_exact,value_approx,gap_letter; the exact value is
    /// written as space-separated coordinates.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("digits,value_exact,value_approx,gap_letter\n");
        for (i, p) in self.points.iter().enumerate() {
            let coords: Vec<String> = p.value.coords().iter().map(|c| c.to_string()).collect();
            let gap = self.gap_letters.get(i).map(|g| g.to_string()).unwrap_or_default();
            s.push_str(&format!(
                "{}{},{},{},{}\n",
                if p.negated { "-" } else { "" },
                digits_to_string(&p.digits),
                coords.join(" "),
                p.value.to_f64(),
                gap
            ));
        }
        s
    }
}

fn strip_leading(s: &[Digit]) -> Vec<Digit> {
    let first = s.iter().position(|&d| d != 0).unwrap_or(s.len());
    if first == s.len() {
        vec![0]
    } else {
        s[first..].to_vec()
    }
}

/// Length-`len` admissible strings (leading zeros allowed) sorted by value,
/// with the position of 0^len.
pub(crate) fn neg_strings_by_value(ctx: &BaseContext, refs: &NegReferences, len: usize) -> (Vec<Vec<Digit>>, usize) {
    let mut v = NegTree::new(ctx, refs).layer(len);
    // z/(−β)^len is the value of the string read as an expansion, so the
    // alternate order is the value order for even lengths and its reverse otherwise
    if len % 2 == 0 {
        v.sort_by(|a, b| alt_cmp_equal_len(a, b));
    } else {
        v.sort_by(|a, b| alt_cmp_equal_len(b, a));
    }
    let origin = v.iter().position(|s| s.iter().all(|&d| d == 0)).expect("zero string present");
    (v, origin)
}

fn pos_strings_by_value(ctx: &BaseContext, refs: &PosReference, len: usize) -> Vec<Vec<Digit>> {
    let amax = ctx.alphabet_max(Sign::Positive);
    let mut cur: Vec<Vec<Digit>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for s in &cur {
            for d in 0..=amax {
                let mut cand = Vec::with_capacity(s.len() + 1);
                cand.push(d);
                cand.extend_from_slice(s);
                if refs.finite_in_window(&cand) {
                    next.push(cand);
                }
            }
        }
        cur = next;
    }
    cur.sort();
    cur
}

/// Largest exponent where two equal-length strings differ.
pub(crate) fn gap_letter(a: &[Digit], b: &[Digit]) -> usize {
    let i = a.iter().zip(b).position(|(x, y)| x != y).expect("distinct strings");
    a.len() - 1 - i
}

/// Smallest length whose strings with a nonzero leading digit all lie beyond
/// `bound` in absolute value: β^{len−1}/(β+1) > bound (or β^{len−1} for the
/// positive base).
fn length_for_bound(ctx: &BaseContext, sign: Sign, bound: &BigRational) -> Result<usize> {
    let scale = match sign {
        Sign::Negative => ctx.r().clone(),
        Sign::Positive => ctx.int(1),
    };
    let b = ctx.field().rational(bound.clone());
    let mut len = 1;
    let mut v = scale;
    while v.compare(&b)? != Ordering::Greater {
        v = &v * ctx.beta();
        len += 1;
    }
    Ok(len)
}

fn initial_length(ctx: &BaseContext, count: usize) -> usize {
    let b = ctx.approx_beta();
    ((((count as f64) + 2.0) * (b + 1.0)).ln() / b.ln()).ceil() as usize + 1
}

/// Values in a window of Z_{−β}, enumerated over digit trees of bounded length.
pub fn enumerate_negbeta_integers(ctx: &BaseContext, spec: &WindowSpec) -> Result<IntegerWindow> {
    if is_trivial(ctx)?.trivial {
        return Err(Error::TrivialSet);
    }
    let refs = NegReferences::of(ctx)?;
    let mut pows = GammaPowers::new(ctx, Sign::Negative);
    let (strings, lo, hi) = match spec {
        WindowSpec::Count(n) => {
            let mut len = initial_length(ctx, *n).max(2);
            loop {
                let (v, origin) = neg_strings_by_value(ctx, &refs, len);
                let limit = pows.pow(len - 1).abs()? * ctx.r().clone();
                if origin >= *n && origin + n < v.len() {
                    let lo = origin - n;
                    let hi = origin + n;
                    let ok_lo = pows.eval(&v[lo]).abs()?.compare(&limit)? == Ordering::Less;
                    let ok_hi = pows.eval(&v[hi]).abs()?.compare(&limit)? == Ordering::Less;
                    if ok_lo && ok_hi {
                        break (v, lo, hi);
                    }
                }
                len += 1;
            }
        }
        WindowSpec::Bound(b) => {
            let len = length_for_bound(ctx, Sign::Negative, b)? + 1;
            let (v, origin) = neg_strings_by_value(ctx, &refs, len);
            let bound = ctx.field().rational(b.clone());
            let inside = |s: &[Digit], pows: &mut GammaPowers| -> Result<bool> {
                Ok(pows.eval(s).abs()?.compare(&bound)? != Ordering::Greater)
            };
            let mut lo = origin;
            while lo > 0 && inside(&v[lo - 1], &mut pows)? {
                lo -= 1;
            }
            let mut hi = origin;
            while hi + 1 < v.len() && inside(&v[hi + 1], &mut pows)? {
                hi += 1;
            }
            (v, lo, hi)
        }
    };
    let origin_idx = strings[lo..=hi].iter().position(|s| s.iter().all(|&d| d == 0)).unwrap();
    let slice = &strings[lo..=hi];
    let points = slice
        .iter()
        .map(|s| IntegerPoint { digits: strip_leading(s), value: pows.eval(s), negated: false })
        .collect();
    let gap_letters = slice.windows(2).map(|w| gap_letter(&w[0], &w[1])).collect();
    Ok(IntegerWindow { sign: Sign::Negative, points, gap_letters, origin: origin_idx })
}

/// Gap values Δ⁺_i = Σ_{j≥1} t*_{i+j} β^{−j}, one per distinct suffix of d*_β(1).
pub fn positive_gaps(ctx: &BaseContext) -> Result<Vec<FieldElement>> {
    let star = renyi_one_star(ctx)?;
    let n = star.preperiod().len() + star.period_len();
    (0..n).map(|i| word_value(ctx, &star.suffix(i), Sign::Positive)).collect()
}

/// A window of Z_β⁺ (or of Z_β = Z_β⁺ ∪ −Z_β⁺ when `symmetric`), gap letters
/// naming the first Δ⁺_i equal to the gap.
pub fn enumerate_beta_integers(ctx: &BaseContext, spec: &WindowSpec, symmetric: bool) -> Result<IntegerWindow> {
    let refs = PosReference::of(ctx)?;
    let deltas = positive_gaps(ctx)?;
    let mut pows = GammaPowers::new(ctx, Sign::Positive);
    let strings: Vec<Vec<Digit>> = match spec {
        WindowSpec::Count(n) => {
            let mut len = initial_length(ctx, *n).max(1);
            loop {
                let v = pos_strings_by_value(ctx, &refs, len);
                if v.len() > *n {
                    let limit = pows.pow(len - 1);
                    if pows.eval(&v[*n]).compare(&limit)? == Ordering::Less {
                        break v[..=*n].to_vec();
                    }
                }
                len += 1;
            }
        }
        WindowSpec::Bound(b) => {
            let len = length_for_bound(ctx, Sign::Positive, b)?;
            let bound = ctx.field().rational(b.clone());
            let v = pos_strings_by_value(ctx, &refs, len);
            let mut out = Vec::new();
            for s in v {
                if pows.eval(&s).compare(&bound)? == Ordering::Greater {
                    break;
                }
                out.push(s);
            }
            out
        }
    };
    let mut points: Vec<IntegerPoint> = strings
        .iter()
        .map(|s| IntegerPoint { digits: strip_leading(s), value: pows.eval(s), negated: false })
        .collect();
    let mut origin = 0;
    if symmetric {
        let mut neg: Vec<IntegerPoint> = points[1..]
            .iter()
            .rev()
            .map(|p| IntegerPoint { digits: p.digits.clone(), value: -&p.value, negated: true })
            .collect();
        origin = neg.len();
        neg.extend(points);
        points = neg;
    }
    let gap_letters = points
        .windows(2)
        .map(|w| {
            let g = &w[1].value - &w[0].value;
            deltas.iter().position(|d| d == &g).ok_or_else(|| Error::HypothesisViolated(format!("gap {g} is not a Δ⁺ value")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegerWindow { sign: Sign::Positive, points, gap_letters, origin })
}
