//! Integer and rational univariate polynomials: parsing, printing, gcd,
//! squarefree part and Sturm-sequence real root isolation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Defining polynomial of a base, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalPolynomial {
    coeffs: Vec<BigInt>,
}

impl MinimalPolynomial {
    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        MinimalPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub(crate) fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(i == 0 && first) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for MinimalPolynomial {
    type Err = Error;

    /// Parses strings such as `x^3-x^2-x-1`, `2*x^2 + 3x - 1` or `x-2`.
    fn from_str(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::ParseError("empty polynomial".into()));
        }
        let bad = |msg: &str| Error::ParseError(format!("polynomial '{s}': {msg}"));
        let mut coeffs: Vec<BigInt> = Vec::new();
        let bytes = src.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(bad("expected '+' or '-' between terms"));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coef = if pos > start {
                BigInt::from_str(&src[start..pos]).map_err(|_| bad("bad coefficient"))?
            } else {
                BigInt::one()
            };
            let has_coef = pos > start;
            if pos < bytes.len() && bytes[pos] == b'*' {
                if !has_coef {
                    return Err(bad("'*' without coefficient"));
                }
                pos += 1;
                if pos >= bytes.len() || bytes[pos] != b'x' {
                    return Err(bad("expected 'x' after '*'"));
                }
            }
            let exp = if pos < bytes.len() && bytes[pos] == b'x' {
                pos += 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let s0 = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if s0 == pos {
                        return Err(bad("missing exponent"));
                    }
                    src[s0..pos].parse::<usize>().map_err(|_| bad("bad exponent"))?
                } else {
                    1
                }
            } else {
                if !has_coef {
                    return Err(bad("empty term"));
                }
                0
            };
            if pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                return Err(bad(&format!("unexpected character '{}'", bytes[pos] as char)));
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += sign * coef;
        }
        Ok(MinimalPolynomial::new(coeffs))
    }
}

/// Dense polynomial with rational coefficients, lowest degree first,
/// always trimmed (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatPoly {
    pub c: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> RatPoly {
        match self.c.last() {
            None => self.clone(),
            Some(lc) => RatPoly::new(self.c.iter().map(|c| c / lc).collect()),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.c.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.c.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::new(out)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return (RatPoly::new(vec![]), self.clone());
        }
        let lc = d.c.last().unwrap();
        let mut q = vec![BigRational::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dl - 1] / lc;
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dc;
                }
            }
            q[k] = coef;
        }
        r.truncate(dl - 1);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns (g, s) with s·self ≡ g (mod m), g monic gcd.
    pub fn gcd_inverse(&self, m: &RatPoly) -> (RatPoly, RatPoly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (RatPoly::new(vec![]), RatPoly::new(vec![BigRational::one()]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lc = r0.c.last().cloned().unwrap_or_else(BigRational::one);
        let g = RatPoly::new(r0.c.iter().map(|c| c / &lc).collect());
        let s = RatPoly::new(s0.c.iter().map(|c| c / &lc).collect());
        (g, s)
    }

    pub fn squarefree(&self) -> RatPoly {
        let d = self.derivative();
        if d.is_zero() {
            return self.monic();
        }
        let g = self.gcd(&d);
        self.div_rem(&g).0.monic()
    }

    /// Rescales to a primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_int(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.c {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.c.iter().map(|c| (c * &lcm).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            let neg = ints.last().is_some_and(|c| c.is_negative());
            for c in ints.iter_mut() {
                *c = &*c / &g;
                if neg {
                    *c = -&*c;
                }
            }
        }
        ints
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.c.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Sturm chain of a squarefree polynomial.
pub(crate) struct Sturm {
    chain: Vec<RatPoly>,
}

impl Sturm {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(RatPoly::new(r.c.into_iter().map(|c| -c).collect()));
        }
        Sturm { chain }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in (a, b].
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// An isolating interval for a real root; `lo == hi` encodes an exact rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halves the interval around the unique root of squarefree `p` inside it.
    pub(crate) fn bisect(&mut self, p: &RatPoly) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        let sm = p.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if sm == p.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

/// Cauchy bound: all roots satisfy |x| < bound.
fn cauchy_bound(p: &RatPoly) -> BigRational {
    let lc = p.c.last().unwrap().abs();
    let mut m = BigRational::zero();
    for c in &p.c[..p.c.len() - 1] {
        let v = c.abs() / &lc;
        if v > m {
            m = v;
        }
    }
    let b = m + BigRational::one();
    // round up to an integer so bisection midpoints stay dyadic
    BigRational::from_integer(b.ceil().to_integer())
}

/// Isolates all distinct real roots of `p` (not necessarily squarefree),
/// returned in ascending order with sign changes of the squarefree part
/// strictly inside each open interval (or exact).
pub(crate) fn isolate_real_roots(p: &RatPoly) -> Vec<RealRoot> {
    let sf = p.squarefree();
    if sf.degree() == 0 {
        return vec![];
    }
    let sturm = Sturm::new(&sf);
    let b = cauchy_bound(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((a, c)) = stack.pop() {
        let n = sturm.count(&a, &c);
        if n == 0 {
            continue;
        }
        if n == 1 {
            // root lies in (a, c]; make the right endpoint a non-root
            if sf.sign_at(&c) == 0 {
                out.push(RealRoot { lo: c.clone(), hi: c });
            } else {
                out.push(RealRoot { lo: a, hi: c });
            }
            continue;
        }
        let mid = (&a + &c) / &two;
        stack.push((a, mid.clone()));
        stack.push((mid, c));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    // left endpoints may be roots of neighbours only if exact; ensure open intervals
    for r in out.iter_mut() {
        if !r.is_exact() && sf.sign_at(&r.lo) == 0 {
            // (lo, hi] contains one root and lo is another root: shrink from the left
            let mut hi = r.hi.clone();
            loop {
                let mid = (&r.lo + &hi) / &two;
                if sf.sign_at(&mid) == 0 {
                    r.lo = mid.clone();
                    hi = mid;
                    break;
                }
                if sturm.count(&mid, &hi) == 1 {
                    r.lo = mid;
                    break;
                }
                hi = mid;
            }
            r.hi = hi;
        }
    }
    out
}
