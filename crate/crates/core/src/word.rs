//! Eventually periodic digit words and their textual form.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::FieldElement;

pub type Digit = u32;

/// An infinite digit word `preperiod · period^ω`; an empty period stands for
/// the tail `0^ω`. Always stored in normal form: the period is primitive,
/// the preperiod minimal, and a zero tail is represented by an empty period
/// with no trailing zeros in the preperiod.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitWord {
    preperiod: Vec<Digit>,
    period: Vec<Digit>,
}

fn primitive_root(q: &[Digit]) -> &[Digit] {
    let n = q.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| q[i] == q[i - d]) {
            return &q[..d];
        }
    }
    q
}

impl DigitWord {
    pub fn new(preperiod: Vec<Digit>, period: Vec<Digit>) -> Self {
        let mut pre = preperiod;
        if period.iter().all(|&d| d == 0) {
            while pre.last() == Some(&0) {
                pre.pop();
            }
            return DigitWord { preperiod: pre, period: vec![] };
        }
        let mut per = primitive_root(&period).to_vec();
        while let (Some(&a), Some(&b)) = (pre.last(), per.last()) {
            if a != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        DigitWord { preperiod: pre, period: per }
    }

    /// The word `digits · 0^ω`.
    pub fn finite(digits: Vec<Digit>) -> Self {
        DigitWord::new(digits, vec![])
    }

    pub fn periodic(period: Vec<Digit>) -> Self {
        DigitWord::new(vec![], period)
    }

    pub fn zero() -> Self {
        DigitWord { preperiod: vec![], period: vec![] }
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    /// Has only finitely many nonzero digits.
    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty() && !self.period.is_empty()
    }

    /// Period length, counting the zero tail as period 1.
    pub fn period_len(&self) -> usize {
        self.period.len().max(1)
    }

    /// Digit at 0-based position `i`.
    pub fn digit(&self, i: usize) -> Digit {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Digit> {
        (0..n).map(|i| self.digit(i)).collect()
    }

    /// The word with its first `i` digits removed.
    pub fn suffix(&self, i: usize) -> DigitWord {
        if i <= self.preperiod.len() {
            return DigitWord::new(self.preperiod[i..].to_vec(), self.period.clone());
        }
        if self.period.is_empty() {
            return DigitWord::zero();
        }
        let k = (i - self.preperiod.len()) % self.period.len();
        let mut per = self.period.clone();
        per.rotate_left(k);
        DigitWord::new(vec![], per)
    }

    pub fn prepend(&self, digits: &[Digit]) -> DigitWord {
        let mut pre = digits.to_vec();
        pre.extend_from_slice(&self.preperiod);
        DigitWord::new(pre, self.period.clone())
    }

    /// One representative per distinct suffix: shifts `0..=|preperiod| + |period| - 1`.
    pub fn suffix_classes(&self) -> Vec<DigitWord> {
        let n = self.preperiod.len() + self.period_len();
        (0..n).map(|i| self.suffix(i)).collect()
    }

    pub fn max_digit(&self) -> Digit {
        self.preperiod.iter().chain(&self.period).copied().max().unwrap_or(0)
    }

    /// Number of leading positions that decide any comparison with `other`.
    pub(crate) fn horizon(&self, other: &DigitWord) -> usize {
        self.preperiod.len().max(other.preperiod.len()) + self.period_len().lcm(&other.period_len())
    }

    /// Σ_{i≥1} w_i ρ^{-i} for the radix ρ with `radix_inv` = ρ^{-1}, summed
    /// exactly (the periodic tail as a geometric series).
    pub fn value_with(&self, radix_inv: &FieldElement) -> Result<FieldElement> {
        let field = radix_inv.field();
        let mut acc = field.zero();
        let mut scale = radix_inv.clone();
        for &d in &self.preperiod {
            acc = &acc + &scale.mul_int(d as i64);
            scale = &scale * radix_inv;
        }
        if self.period.is_empty() {
            return Ok(acc);
        }
        // scale = ρ^{-(m+1)}
        let mut block = field.zero();
        let mut s = scale.clone();
        for &d in &self.period {
            block = &block + &s.mul_int(d as i64);
            s = &s * radix_inv;
        }
        // s = ρ^{-(m+p+1)}, so ρ^{-p} = s / scale
        let rho_p = s.checked_div(&scale)?;
        let denom = &field.one() - &rho_p;
        Ok(&acc + &block.checked_div(&denom)?)
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.preperiod.is_empty() && self.period.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&digits_to_string(&self.preperiod))?;
        if !self.period.is_empty() {
            write!(f, "({})", digits_to_string(&self.period))?;
        }
        Ok(())
    }
}

/// Plain digits when all are ≤ 9, otherwise `[12,0,3]`.
pub fn digits_to_string(d: &[Digit]) -> String {
    if d.iter().all(|&x| x <= 9) {
        d.iter().map(|x| char::from(b'0' + *x as u8)).collect()
    } else {
        format!("[{}]", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Parses plain digits or bracketed comma-separated digits (or a mix).
pub fn parse_digits(s: &str) -> Result<Vec<Digit>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('[') {
            let end = r.find(']').ok_or_else(|| Error::ParseError(format!("unclosed '[' in '{s}'")))?;
            for tok in r[..end].split(',').map(str::trim).filter(|t| !t.is_empty()) {
                out.push(tok.parse().map_err(|_| Error::ParseError(format!("bad digit '{tok}' in '{s}'")))?);
            }
            rest = &r[end + 1..];
        } else {
            let c = rest.chars().next().unwrap();
            let d = c.to_digit(10).ok_or_else(|| Error::ParseError(format!("bad digit '{c}' in '{s}'")))?;
            out.push(d);
            rest = &rest[c.len_utf8()..];
        }
    }
    Ok(out)
}

impl FromStr for DigitWord {
    type Err = Error;

    /// Accepts `10(1)`, `210`, `(110)`, `[12,0]([3])`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            None => Ok(DigitWord::finite(parse_digits(s)?)),
            Some(i) => {
                let body = s[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::ParseError(format!("period must end with ')' in '{s}'")))?;
                let period = parse_digits(body)?;
                if period.is_empty() {
                    return Err(Error::ParseError(format!("empty period in '{s}'")));
                }
                Ok(DigitWord::new(parse_digits(&s[..i])?, period))
            }
        }
    }
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DigitWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
