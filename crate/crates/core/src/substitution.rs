//! The gap word v_{−β}, the antimorphism Φ built from the words S_k and R_k,
//! projections onto a finite alphabet, the finite morphism ψ = (Π∘Φ)², and
//! the canonical substitution of a Parry number.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissibility::NegReferences;
use crate::base::BaseContext;
use crate::error::{Error, Result};
use crate::expansion::{reference_l_decided, renyi_one};
use crate::integers::{
    delta_definitions, enumerate_negbeta_integers, extremal_bruteforce, gap_letter, hypothesis, is_trivial, Hypothesis,
    NegTree, WindowSpec,
};
use crate::word::{Digit, DigitWord};

pub type Letter = usize;

pub const DEFAULT_HORIZON: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    Morphism,
    Antimorphism,
}

/// A morphism or antimorphism given by letter images over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub alphabet: Vec<Letter>,
    pub kind: MorphismKind,
    pub rules: BTreeMap<Letter, Vec<Letter>>,
}

/// Plain digits when every letter is below 10, otherwise comma-separated.
pub fn format_word(w: &[Letter], plain: bool) -> String {
    if plain {
        w.iter().map(|l| char::from_digit(*l as u32, 10).unwrap()).collect()
    } else {
        w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    let bad = || Error::ParseError(format!("bad word '{s}'"));
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as Letter).ok_or_else(bad)).collect()
    }
}

impl Morphism {
    /// The alphabet is every letter occurring in a rule.
    pub fn new(kind: MorphismKind, rules: BTreeMap<Letter, Vec<Letter>>) -> Self {
        let mut alphabet: BTreeSet<Letter> = rules.keys().copied().collect();
        alphabet.extend(rules.values().flatten().copied());
        Morphism { alphabet: alphabet.into_iter().collect(), kind, rules }
    }

    pub fn image(&self, a: Letter) -> Option<&[Letter]> {
        self.rules.get(&a).map(|v| v.as_slice())
    }

    /// Image of a word; `None` if some letter has no rule.
    pub fn apply(&self, w: &[Letter]) -> Option<Vec<Letter>> {
        let mut out = Vec::new();
        match self.kind {
            MorphismKind::Morphism => {
                for &a in w {
                    out.extend_from_slice(self.image(a)?);
                }
            }
            MorphismKind::Antimorphism => {
                for &a in w.iter().rev() {
                    out.extend_from_slice(self.image(a)?);
                }
            }
        }
        Some(out)
    }

    /// `self ∘ self`, restricted to letters whose image can be computed. The
    /// square of an antimorphism is a morphism.
    pub fn square(&self) -> Morphism {
        let rules = self
            .rules
            .iter()
            .filter_map(|(&a, img)| self.apply(img).map(|w| (a, w)))
            .collect();
        Morphism::new(MorphismKind::Morphism, rules)
    }

    pub fn is_non_erasing(&self) -> bool {
        self.rules.values().all(|w| !w.is_empty())
    }

    fn plain(&self) -> bool {
        self.alphabet.iter().all(|&a| a < 10)
    }

    pub fn format(&self, w: &[Letter]) -> String {
        format_word(w, self.plain())
    }

    /// M[b][a] = number of occurrences of b in the image of a (alphabet order).
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let idx: HashMap<Letter, usize> = self.alphabet.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let n = self.alphabet.len();
        let mut m = vec![vec![0u64; n]; n];
        for (a, img) in &self.rules {
            for b in img {
                m[idx[b]][idx[a]] += 1;
            }
        }
        m
    }

    /// Some power of the incidence matrix is strictly positive; powers up to
    /// the Wielandt bound (n−1)² + 1 suffice.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        if n == 0 || self.rules.len() != n {
            return false;
        }
        let m: Vec<Vec<bool>> = self.incidence_matrix().iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        let mut p = m.clone();
        for _ in 0..(n - 1) * (n - 1) + 1 {
            if p.iter().all(|r| r.iter().all(|&x| x)) {
                return true;
            }
            p = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && m[k][j])).collect()).collect();
        }
        false
    }

    /// Normalized Perron eigenvector of the incidence matrix: the letter
    /// frequencies of a fixed point of a primitive morphism.
    pub fn perron_frequencies(&self) -> Vec<f64> {
        let m = self.incidence_matrix();
        let n = m.len();
        let mut v = vec![1.0 / n as f64; n];
        for _ in 0..2000 {
            let mut w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] as f64 * v[j]).sum()).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let diff: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            // average consecutive iterates to damp periodic oscillation
            v = w.iter().zip(&v).map(|(a, b)| 0.5 * (a + b)).collect();
            if diff < 1e-15 {
                break;
            }
        }
        v
    }

    pub fn to_json(&self) -> Value {
        let rules: serde_json::Map<String, Value> =
            self.rules.iter().map(|(a, w)| (a.to_string(), Value::String(self.format(w)))).collect();
        json!({ "alphabet": self.alphabet, "kind": self.kind, "rules": rules })
    }

    pub fn from_json(v: &Value) -> Result<Morphism> {
        let bad = |m: &str| Error::ParseError(format!("morphism json: {m}"));
        let kind: MorphismKind =
            serde_json::from_value(v.get("kind").cloned().ok_or_else(|| bad("missing kind"))?).map_err(|e| bad(&e.to_string()))?;
        let rules_v = v.get("rules").and_then(|r| r.as_object()).ok_or_else(|| bad("missing rules"))?;
        let mut rules = BTreeMap::new();
        for (k, w) in rules_v {
            let a: Letter = k.parse().map_err(|_| bad(&format!("bad letter '{k}'")))?;
            rules.insert(a, parse_word(w.as_str().ok_or_else(|| bad("rule must be a string"))?)?);
        }
        let mut m = Morphism::new(kind, rules);
        if let Some(alpha) = v.get("alphabet").and_then(|a| a.as_array()) {
            let mut set: BTreeSet<Letter> = m.alphabet.iter().copied().collect();
            for a in alpha {
                set.insert(a.as_u64().ok_or_else(|| bad("alphabet letters must be integers"))? as Letter);
            }
            m.alphabet = set.into_iter().collect();
        }
        Ok(m)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rules.iter().map(|(a, w)| format!("{a}→{}", self.format(w))).collect();
        f.write_str(&parts.join(", "))
    }
}

/// min(k) and max(k) for k = 0..=top, computed once by ordered search.
struct Extremals<'a> {
    tree: NegTree<'a>,
    min: Vec<Vec<Digit>>,
    max: Vec<Vec<Digit>>,
}

impl<'a> Extremals<'a> {
    fn new(ctx: &BaseContext, refs: &'a NegReferences, top: usize) -> Self {
        let tree = NegTree::new(ctx, refs);
        let (min, max) = (0..=top).map(|k| extremal_bruteforce(&tree, k)).unzip();
        Extremals { tree, min, max }
    }

    fn with_zero(s: &[Digit]) -> Vec<Digit> {
        let mut v = s.to_vec();
        v.push(0);
        v
    }

    fn letters(list: &[Vec<Digit>]) -> Vec<Letter> {
        list.windows(2).map(|w| gap_letter(&w[0], &w[1])).collect()
    }

    /// S_k: strings of S(k+1) from min(k)0 down to min(k+1); R_k: strings
    /// from max(k)0 up to max(k+1). Letters are the gap codes between them.
    fn s_r(&self, k: usize) -> (Vec<Letter>, Vec<Letter>) {
        let s_hi = Self::with_zero(&self.min[k]);
        let s_list = self.tree.ordered(k + 1, Some(&self.min[k + 1]), Some(&s_hi), true, usize::MAX);
        let r_lo = Self::with_zero(&self.max[k]);
        let r_list = self.tree.ordered(k + 1, Some(&r_lo), Some(&self.max[k + 1]), false, usize::MAX);
        (Self::letters(&s_list), Self::letters(&r_list))
    }

    fn phi(&self, k: usize) -> Vec<Letter> {
        let (s, r) = self.s_r(k);
        let (first, mirrored) = if k % 2 == 0 { (s, r) } else { (r, s) };
        let mut v = first;
        v.push(k + 1);
        v.extend(mirrored.iter().rev());
        v
    }
}

fn nontrivial_refs(ctx: &BaseContext) -> Result<NegReferences> {
    if is_trivial(ctx)?.trivial {
        return Err(Error::TrivialSet);
    }
    NegReferences::of(ctx)
}

/// The words S_k and R_k.
pub fn words_s_r(ctx: &BaseContext, k: usize) -> Result<(Vec<Letter>, Vec<Letter>)> {
    let refs = nontrivial_refs(ctx)?;
    Ok(Extremals::new(ctx, &refs, k + 1).s_r(k))
}

/// Φ(2ℓ) = S_{2ℓ}(2ℓ+1)R̄_{2ℓ}, Φ(2ℓ+1) = R_{2ℓ+1}(2ℓ+2)S̄_{2ℓ+1}.
pub fn antimorphism_phi(ctx: &BaseContext, k: usize) -> Result<Vec<Letter>> {
    let refs = nontrivial_refs(ctx)?;
    Ok(Extremals::new(ctx, &refs, k + 1).phi(k))
}

/// Φ restricted to the letters 0..=horizon.
pub fn phi_rules(ctx: &BaseContext, horizon: usize) -> Result<Morphism> {
    let refs = nontrivial_refs(ctx)?;
    let ex = Extremals::new(ctx, &refs, horizon + 1);
    let rules = (0..=horizon).map(|k| (k, ex.phi(k))).collect();
    Ok(Morphism::new(MorphismKind::Antimorphism, rules))
}

/// Closed form of Φ(k) for an infinite reference with 0 < d_i and d_1 > d_{2i}.
pub fn phi_closed_form(ctx: &BaseContext, k: usize) -> Result<Vec<Letter>> {
    let d = reference_l_decided(ctx)?;
    if hypothesis(&d) != Hypothesis::Infinite {
        return Err(Error::HypothesisViolated(format!("closed form of Φ needs 0 < d_i and d_1 > d_2i, d = {d}")));
    }
    Ok(phi_closed_from_digits(&d, k))
}

fn phi_closed_from_digits(d: &DigitWord, k: usize) -> Vec<Letter> {
    let dd = |i: usize| d.digit(i - 1) as usize;
    let zeros = |n: usize| vec![0; n];
    let d1 = dd(1);
    if k == 0 {
        let mut v = zeros(d1 - 1);
        v.push(1);
        return v;
    }
    let (lead, tail) = if k % 2 == 0 { (dd(k + 1), dd(k)) } else { (dd(k), dd(k + 1)) };
    let mut v = zeros(lead - 1);
    v.push(k + 1);
    v.extend(zeros(d1 - tail - 1));
    v.push(1);
    v
}

/// A letter-to-letter map from gap letters onto class representatives. Beyond
/// the materialized range it repeats with `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub map: Vec<Letter>,
    pub period: usize,
}

impl Projection {
    pub fn identity(n: usize) -> Self {
        Projection { map: (0..n).collect(), period: 1 }
    }

    pub fn get(&self, k: Letter) -> Letter {
        let top = self.map.len() - 1;
        if k <= top {
            return self.map[k];
        }
        let steps = (k - top).div_ceil(self.period);
        self.map[k - steps * self.period]
    }

    pub fn apply(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().map(|&k| self.get(k)).collect()
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        let s: BTreeSet<Letter> = self.map.iter().copied().collect();
        s.into_iter().collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "map": self.map, "period": self.period })
    }
}

fn sofic_reference(ctx: &BaseContext) -> Result<DigitWord> {
    reference_l_decided(ctx).map_err(|e| match e {
        Error::UndecidedReference(_) => Error::NotSofic,
        other => other,
    })
}

/// Index period of the gap structure: twice the period of d_{−β}(l_β), or 2
/// for a finite reference.
fn structural_period(d: &DigitWord) -> usize {
    2 * d.period().len().max(1)
}

fn working_horizon(d: &DigitWord, horizon: usize) -> usize {
    horizon.max(d.preperiod().len() + 2 * structural_period(d) + 3)
}

/// Letters merged when their gaps coincide, then split until Π∘Φ = Π∘Φ∘Π on
/// the materialized letters. Classes are named by their smallest member.
pub fn projection_pi(ctx: &BaseContext, horizon: usize) -> Result<Projection> {
    let d = sofic_reference(ctx)?;
    let h = working_horizon(&d, horizon);
    let phi = phi_rules(ctx, h)?;
    let deltas = delta_definitions(ctx, h)?;
    Ok(refine_projection(&deltas, &phi, structural_period(&d), h))
}

fn refine_projection(deltas: &[crate::field::FieldElement], phi: &Morphism, period: usize, h: usize) -> Projection {
    let mut labels: Vec<usize> =
        deltas.iter().map(|v| deltas.iter().position(|x| x == v).unwrap()).collect();
    let ext = |labels: &[usize], k: usize| -> usize {
        if k <= h {
            labels[k]
        } else {
            labels[k - (k - h).div_ceil(period) * period]
        }
    };
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..=h)
            .map(|k| (labels[k], phi.image(k).unwrap().iter().map(|&a| ext(&labels, a)).collect()))
            .collect();
        let mut next = vec![0; h + 1];
        for k in 0..=h {
            next[k] = (0..=k).find(|&j| sigs[j] == sigs[k]).unwrap();
        }
        let count = |v: &[usize]| v.iter().collect::<BTreeSet<_>>().len();
        if count(&next) == count(&labels) {
            return Projection { map: next, period };
        }
        labels = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationCheck {
    pub holds: bool,
    pub first_failure: Option<Letter>,
}

/// (Π∘Φ)(k) = (Π∘Φ∘Π)(k) for every k ≤ k_max.
pub fn check_commutation(pi: &Projection, phi: &Morphism, k_max: usize) -> CommutationCheck {
    for k in 0..=k_max {
        let lhs = phi.image(k).map(|w| pi.apply(w));
        let rhs = phi.image(pi.get(k)).map(|w| pi.apply(w));
        if lhs.is_none() || lhs != rhs {
            return CommutationCheck { holds: false, first_failure: Some(k) };
        }
    }
    CommutationCheck { holds: true, first_failure: None }
}

#[derive(Clone, Debug)]
pub struct FiniteMorphisms {
    pub projection: Projection,
    /// Φ on the materialized letters.
    pub phi_full: Morphism,
    /// φ = Π∘Φ over the class representatives (an antimorphism).
    pub phi: Morphism,
    /// ψ = φ².
    pub psi: Morphism,
    pub primitive: bool,
    pub frequencies: Vec<f64>,
}

impl FiniteMorphisms {
    pub fn to_json(&self) -> Value {
        json!({
            "projection": self.projection.to_json(),
            "phi_full": self.phi_full.to_json(),
            "phi": self.phi.to_json(),
            "psi": self.psi.to_json(),
            "primitive": self.primitive,
            "frequencies": self.frequencies,
        })
    }
}

pub fn finite_morphism(ctx: &BaseContext) -> Result<FiniteMorphisms> {
    finite_morphism_with_horizon(ctx, DEFAULT_HORIZON)
}

pub fn finite_morphism_with_horizon(ctx: &BaseContext, horizon: usize) -> Result<FiniteMorphisms> {
    let d = sofic_reference(ctx)?;
    let h = working_horizon(&d, horizon);
    let phi_full = phi_rules(ctx, h)?;
    let deltas = delta_definitions(ctx, h)?;
    let projection = refine_projection(&deltas, &phi_full, structural_period(&d), h);
    let check = check_commutation(&projection, &phi_full, h);
    if let Some(k) = check.first_failure {
        return Err(Error::CommutationFailed(k as u32));
    }
    let rules = projection
        .alphabet()
        .into_iter()
        .map(|a| (a, projection.apply(phi_full.image(a).unwrap())))
        .collect();
    let phi = Morphism::new(MorphismKind::Antimorphism, rules);
    let psi = phi.square();
    let primitive = psi.is_primitive();
    let frequencies = psi.perron_frequencies();
    Ok(FiniteMorphisms { projection, phi_full, phi, psi, primitive, frequencies })
}

/// A finite piece `…w_{−2}w_{−1} | w_0w_1…` of a bidirectional word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointedBiWord {
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
}

impl PointedBiWord {
    pub fn project(&self, pi: &Projection) -> PointedBiWord {
        PointedBiWord { left: pi.apply(&self.left), right: pi.apply(&self.right) }
    }

    /// The image under the morphism, aligned at the origin, extends the
    /// segment on both sides.
    pub fn is_fixed_by(&self, m: &Morphism) -> bool {
        let (Some(r), Some(l)) = (m.apply(&self.right), m.apply(&self.left)) else {
            return false;
        };
        r.len() >= self.right.len()
            && l.len() >= self.left.len()
            && r.starts_with(&self.right)
            && l.ends_with(&self.left)
    }
}

/// v_{−β} around the origin, from the gap letters of an enumerated window,
/// together with the result of checking Ψ = Φ² against it.
pub fn fixed_biword(ctx: &BaseContext, length: usize) -> Result<(PointedBiWord, bool)> {
    if is_trivial(ctx)?.trivial {
        return Err(Error::TrivialSet);
    }
    let w = enumerate_negbeta_integers(ctx, &WindowSpec::Count(length))?;
    let bi = PointedBiWord { left: w.gap_letters[..w.origin].to_vec(), right: w.gap_letters[w.origin..].to_vec() };
    let top = bi.left.iter().chain(&bi.right).copied().max().unwrap_or(0);
    let phi = phi_rules(ctx, top + 2)?;
    let ok = bi.is_fixed_by(&phi.square());
    Ok((bi, ok))
}

/// Canonical substitution of a Parry number from d_β(1) = t_1t_2⋯:
/// i ↦ 0^{t_{i+1}}(i+1), with the last letter sent to 0^{t_m} (simple case)
/// or to 0^{t_{m+p}}m (eventually periodic case).
pub fn canonical_substitution_beta(ctx: &BaseContext) -> Result<Morphism> {
    let t = renyi_one(ctx).map_err(|e| match e {
        Error::UndecidedReference(_) => Error::NotParry,
        other => other,
    })?;
    let zeros = |n: Digit| vec![0 as Letter; n as usize];
    let (n, back) = if t.is_finite() {
        (t.preperiod().len(), None)
    } else {
        (t.preperiod().len() + t.period().len(), Some(t.preperiod().len()))
    };
    let mut rules = BTreeMap::new();
    for i in 0..n {
        let mut img = zeros(t.digit(i));
        if i + 1 < n {
            img.push(i + 1);
        } else if let Some(m) = back {
            img.push(m);
        }
        rules.insert(i, img);
    }
    Ok(Morphism::new(MorphismKind::Morphism, rules))
}

/// Shortest u with |u| ≤ max_len and u·m1(a) = m2(a)·u for every letter a.
pub fn conjugacy_witness(m1: &Morphism, m2: &Morphism, max_len: usize) -> Option<Vec<Letter>> {
    let letters: BTreeSet<Letter> = m1.rules.keys().chain(m2.rules.keys()).copied().collect();
    for &a in &letters {
        if m1.image(a)?.len() != m2.image(a)?.len() {
            return None;
        }
    }
    // u·X = Y·u forces u to be a prefix of Y^ω
    let seed = letters.iter().find_map(|&a| m2.image(a).filter(|w| !w.is_empty()));
    let Some(seed) = seed else {
        return Some(vec![]);
    };
    (0..=max_len).find_map(|n| {
        let u: Vec<Letter> = (0..n).map(|i| seed[i % seed.len()]).collect();
        letters
            .iter()
            .all(|&a| {
                let mut lhs = u.clone();
                lhs.extend_from_slice(m1.image(a).unwrap());
                let mut rhs = m2.image(a).unwrap().to_vec();
                rhs.extend_from_slice(&u);
                lhs == rhs
            })
            .then_some(u)
    })
}

/// Right-sided fixed point of `m` starting with `seed`, `n` letters long.
pub fn fixed_point_prefix(m: &Morphism, seed: Letter, n: usize) -> Option<Vec<Letter>> {
    let mut w = vec![seed];
    while w.len() < n {
        let next = m.apply(&w)?;
        if next.len() <= w.len() || !next.starts_with(&w) {
            return None;
        }
        w = next;
    }
    w.truncate(n);
    Some(w)
}
