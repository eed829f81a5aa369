//! Exact arithmetic in Q(β) for a designated real root β of an integer
//! polynomial. Elements are rational coordinate vectors reduced modulo the
//! polynomial; order questions are settled by interval evaluation on a
//! refinable isolating interval of β.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{isolate_real_roots, MinimalPolynomial, RatPoly, RealRoot};

pub const DEFAULT_REFINEMENT_BITS: u32 = 4096;
pub const DEFAULT_EMBEDDING_BITS: u32 = 128;
/// Bits of refinement performed eagerly when a field is built.
const INITIAL_BITS: u32 = 64;
/// Bits added per refinement round while deciding a sign.
const REFINE_STEP: u32 = 32;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

struct RootState {
    root: RealRoot,
    /// Interval enclosures of β^i for i < degree.
    pows: Arc<Vec<(BigRational, BigRational)>>,
    refined_bits: u32,
}

impl RootState {
    fn new(root: RealRoot, degree: usize) -> Self {
        let mut s = RootState { root, pows: Arc::new(vec![]), refined_bits: 0 };
        s.recompute(degree);
        s
    }

    fn recompute(&mut self, degree: usize) {
        let (lo, hi) = (&self.root.lo, &self.root.hi);
        let mut pows = Vec::with_capacity(degree);
        let mut plo = BigRational::one();
        let mut phi = BigRational::one();
        for i in 0..degree {
            let enclosure = if i == 0 {
                (BigRational::one(), BigRational::one())
            } else if !lo.is_negative() {
                (plo.clone(), phi.clone())
            } else if !hi.is_positive() {
                if i % 2 == 0 {
                    (phi.clone(), plo.clone())
                } else {
                    (plo.clone(), phi.clone())
                }
            } else if i % 2 == 0 {
                let m = if plo > phi { plo.clone() } else { phi.clone() };
                (BigRational::zero(), m)
            } else {
                (plo.clone(), phi.clone())
            };
            pows.push(enclosure);
            plo = &plo * lo;
            phi = &phi * hi;
        }
        self.pows = Arc::new(pows);
    }
}

/// A conjugate value given to a fixed number of binary digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexApprox {
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// The number field Q(β) together with the interval data that pins β down.
pub struct NumberField {
    poly: MinimalPolynomial,
    modulus: RatPoly,
    /// x^n ≡ Σ reduce[i] x^i modulo the polynomial.
    reduce: Vec<BigRational>,
    sqfree: RatPoly,
    state: Mutex<RootState>,
    budget_bits: u32,
    /// Position of β in the ordering used by `conjugate_roots`.
    beta_index: usize,
    conjugates: Mutex<HashMap<u32, Arc<Vec<ComplexApprox>>>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField").field("poly", &self.poly.to_string()).finish()
    }
}

impl NumberField {
    /// Builds Q(β) where β is the root of `poly` isolated by `root`.
    pub(crate) fn new(poly: MinimalPolynomial, root: RealRoot, beta_index: usize, budget_bits: u32) -> Result<Arc<Self>> {
        if poly.degree() == 0 {
            return Err(Error::DegenerateDegree);
        }
        let modulus = poly.to_rat();
        let n = poly.degree();
        let lc = modulus.c[n].clone();
        let reduce = modulus.c[..n].iter().map(|c| -c / &lc).collect();
        let sqfree = modulus.squarefree();
        let field = NumberField {
            state: Mutex::new(RootState::new(root, n)),
            poly,
            modulus,
            reduce,
            sqfree,
            budget_bits,
            beta_index,
            conjugates: Mutex::new(HashMap::new()),
        };
        field.refine(INITIAL_BITS.min(budget_bits))?;
        Ok(Arc::new(field))
    }

    /// Field for the real root of `poly` at `index` among its distinct real
    /// roots in ascending order.
    pub fn with_real_root(poly: MinimalPolynomial, index: usize, budget_bits: u32) -> Result<Arc<Self>> {
        if poly.degree() == 0 {
            return Err(Error::DegenerateDegree);
        }
        let roots = isolate_real_roots(&poly.to_rat());
        let root = roots
            .get(index)
            .cloned()
            .ok_or_else(|| Error::NoSuchRoot(format!("{poly} has {} real roots", roots.len())))?;
        NumberField::new(poly, root, index, budget_bits)
    }

    pub fn polynomial(&self) -> &MinimalPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn budget_bits(&self) -> u32 {
        self.budget_bits
    }

    /// Current isolating interval of β.
    pub fn root_interval(&self) -> RealRoot {
        self.state.lock().unwrap().root.clone()
    }

    /// Bisects the isolating interval `bits` more times.
    pub fn refine(&self, bits: u32) -> Result<()> {
        let mut st = self.state.lock().unwrap();
        if st.root.is_exact() {
            return Ok(());
        }
        if st.refined_bits + bits > self.budget_bits {
            return Err(Error::RefinementBudgetExceeded(self.budget_bits));
        }
        for _ in 0..bits {
            st.root.bisect(&self.sqfree);
        }
        st.refined_bits += bits;
        st.recompute(self.degree());
        Ok(())
    }

    fn snapshot(&self) -> (Arc<Vec<(BigRational, BigRational)>>, bool) {
        let st = self.state.lock().unwrap();
        (st.pows.clone(), st.root.is_exact())
    }

    pub fn element(self: &Arc<Self>, coords: Vec<BigRational>) -> FieldElement {
        FieldElement::from_poly(self, RatPoly::new(coords))
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.int(1)
    }

    pub fn int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.rational(rat(n))
    }

    pub fn rational(self: &Arc<Self>, q: BigRational) -> FieldElement {
        let mut z = self.zero();
        z.coords[0] = q;
        z
    }

    /// The generator β itself.
    pub fn beta(self: &Arc<Self>) -> FieldElement {
        self.element(vec![BigRational::zero(), BigRational::one()])
    }

    /// Evaluates an interval enclosure of the value of `coords` at β.
    fn enclose_coords(&self, coords: &[BigRational]) -> (BigRational, BigRational) {
        let (pows, _) = self.snapshot();
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (c, (plo, phi)) in coords.iter().zip(pows.iter()) {
            if c.is_zero() {
                continue;
            }
            if c.is_positive() {
                lo += c * plo;
                hi += c * phi;
            } else {
                lo += c * phi;
                hi += c * plo;
            }
        }
        (lo, hi)
    }

    /// Whether the polynomial `coords` vanishes at β, decided exactly through
    /// its gcd with the squarefree part of the defining polynomial.
    fn vanishes_at_beta(&self, coords: &[BigRational]) -> bool {
        let a = RatPoly::new(coords.to_vec());
        if a.is_zero() {
            return true;
        }
        let g = a.gcd(&self.sqfree);
        if g.degree() == 0 {
            return false;
        }
        let root = self.root_interval();
        if root.is_exact() {
            return g.eval(&root.lo).is_zero();
        }
        g.sign_at(&root.lo) * g.sign_at(&root.hi) < 0
    }

    fn sign_coords(&self, coords: &[BigRational]) -> Result<Ordering> {
        if coords.iter().all(|c| c.is_zero()) {
            return Ok(Ordering::Equal);
        }
        let mut zero_checked = false;
        loop {
            let (lo, hi) = self.enclose_coords(coords);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if lo == hi {
                // only possible for an exact root
                return Ok(Ordering::Equal);
            }
            if !zero_checked {
                zero_checked = true;
                if self.vanishes_at_beta(coords) {
                    return Ok(Ordering::Equal);
                }
            }
            let remaining = {
                let st = self.state.lock().unwrap();
                self.budget_bits.saturating_sub(st.refined_bits)
            };
            if remaining == 0 {
                return Err(Error::RefinementBudgetExceeded(self.budget_bits));
            }
            self.refine(REFINE_STEP.min(remaining))?;
        }
    }

    /// Distinct complex roots of the defining polynomial: real roots ascending,
    /// then non-real roots ordered by real part and imaginary part.
    pub fn conjugate_roots(&self, bits: u32) -> Arc<Vec<ComplexApprox>> {
        if let Some(v) = self.conjugates.lock().unwrap().get(&bits) {
            return v.clone();
        }
        let roots = Arc::new(compute_roots(&self.sqfree, bits));
        self.conjugates.lock().unwrap().insert(bits, roots.clone());
        roots
    }

    /// Index of β itself among `conjugate_roots`.
    pub fn beta_embedding_index(&self) -> usize {
        self.beta_index
    }

    pub fn embedding_count(&self) -> usize {
        self.sqfree.degree()
    }
}

/// Element of Q(β) in canonical coordinates (reduced, lowest terms).
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl FieldElement {
    fn from_poly(field: &Arc<NumberField>, p: RatPoly) -> Self {
        let n = field.degree();
        let mut c = p.c;
        // reduce from the top using x^n ≡ Σ reduce[i] x^i
        while c.len() > n {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = c.len() - n;
            for (i, r) in field.reduce.iter().enumerate() {
                c[base + i] += &top * r;
            }
        }
        c.resize(n, BigRational::zero());
        FieldElement { field: field.clone(), coords: c }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check_field(&self, other: &FieldElement) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.poly == other.field.poly,
            "elements of different fields"
        );
    }

    /// Exact sign of the value at β.
    pub fn sign(&self) -> Result<Ordering> {
        self.field.sign_coords(&self.coords)
    }

    /// Exact comparison of values at β.
    pub fn compare(&self, other: &FieldElement) -> Result<Ordering> {
        if self.coords == other.coords {
            return Ok(Ordering::Equal);
        }
        (self - other).sign()
    }

    /// Largest integer n with n ≤ self.
    pub fn floor(&self) -> Result<BigInt> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            return Ok(self.coords[0].floor().to_integer());
        }
        loop {
            let (lo, hi) = self.field.enclose_coords(&self.coords);
            let flo = lo.floor().to_integer();
            let fhi = hi.floor().to_integer();
            if flo == fhi {
                return Ok(flo);
            }
            // some integer lies in (lo, hi]; decide against the top candidate
            let cand = self.field.rational(BigRational::from_integer(fhi.clone()));
            match self.compare(&cand)? {
                Ordering::Greater | Ordering::Equal => return Ok(fhi),
                Ordering::Less => {
                    if flo == &fhi - 1 {
                        return Ok(flo);
                    }
                }
            }
            self.field.refine(REFINE_STEP)?;
        }
    }

    /// Interval enclosure of the value at the current refinement.
    pub fn enclose(&self) -> (BigRational, BigRational) {
        self.field.enclose_coords(&self.coords)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclose();
        ((lo + hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn add_rational(&self, q: &BigRational) -> FieldElement {
        let mut out = self.clone();
        out.coords[0] += q;
        out
    }

    pub fn mul_int(&self, k: i64) -> FieldElement {
        let k = rat(k);
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * &k).collect() }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() || self.field.vanishes_at_beta(&self.coords) {
            return Err(Error::DivisionByZero);
        }
        let a = RatPoly::new(self.coords.clone());
        let (g, s) = a.gcd_inverse(&self.field.modulus);
        if g.degree() > 0 {
            return Err(Error::NonInvertible);
        }
        Ok(FieldElement::from_poly(&self.field, s))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other);
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut out = self.field.one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Absolute value (exact).
    pub fn abs(&self) -> Result<FieldElement> {
        Ok(if self.sign()? == Ordering::Less { -self } else { self.clone() })
    }

    /// Value under the embedding sending β to the conjugate root `index`.
    pub fn conjugate_embed(&self, index: usize, bits: u32) -> Result<ComplexApprox> {
        let roots = self.field.conjugate_roots(bits);
        let z = roots
            .get(index)
            .ok_or(Error::BadEmbeddingIndex { index, available: roots.len() })?;
        let prec = bits + 32;
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for c in self.coords.iter().rev() {
            let nre = round_bits(&(&re * &z.re - &im * &z.im + c), prec);
            let nim = round_bits(&(&re * &z.im + &im * &z.re), prec);
            re = nre;
            im = nim;
        }
        Ok(ComplexApprox { re: round_bits(&re, bits), im: round_bits(&im, bits) })
    }

    pub fn conjugate_embed_f64(&self, index: usize) -> Result<Complex64> {
        Ok(self.conjugate_embed(index, DEFAULT_EMBEDDING_BITS)?.to_complex64())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("b")?,
                (1, false) => write!(f, "{mag}*b")?,
                (_, true) => write!(f, "b^{i}")?,
                (_, false) => write!(f, "{mag}*b^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl FieldElement {
    /// Parses the textual form produced by `Display`, e.g. `1/2 - 3*b + b^2`.
    pub fn parse(field: &Arc<NumberField>, s: &str) -> Result<FieldElement> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: &str| Error::ParseError(format!("field element '{s}': {m}"));
        if src.is_empty() {
            return Err(bad("empty"));
        }
        let mut coords: Vec<BigRational> = Vec::new();
        let mut rest = src.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut neg = false;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                neg = true;
                rest = r;
            } else if !first {
                return Err(bad("expected sign"));
            }
            first = false;
            let end = rest[1..].find(['+', '-']).map(|i| i + 1).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef, power) = match term.find('b') {
                None => (term, 0usize),
                Some(i) => {
                    let c = term[..i].trim_end_matches('*');
                    let p = &term[i + 1..];
                    let power = if p.is_empty() {
                        1
                    } else {
                        p.strip_prefix('^').ok_or_else(|| bad("bad power"))?.parse().map_err(|_| bad("bad power"))?
                    };
                    (c, power)
                }
            };
            let mut q = if coef.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coef).ok_or_else(|| bad("bad coefficient"))?
            };
            if neg {
                q = -q;
            }
            if coords.len() <= power {
                coords.resize(power + 1, BigRational::zero());
            }
            coords[power] += q;
        }
        Ok(FieldElement::from_poly(field, RatPoly::new(coords)))
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.check_field(o);
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.check_field(o);
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.check_field(o);
        let n = self.coords.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElement::from_poly(&self.field, RatPoly { c: prod })
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn round_bits(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    BigRational::new(n, scale)
}

/// All distinct complex roots of squarefree `p` to `bits` binary digits.
fn compute_roots(p: &RatPoly, bits: u32) -> Vec<ComplexApprox> {
    let n = p.degree();
    let mut real: Vec<ComplexApprox> = isolate_real_roots(p)
        .into_iter()
        .map(|mut r| {
            let target = BigRational::new(BigInt::one(), BigInt::one() << (bits + 4));
            while !r.is_exact() && r.width() > target {
                r.bisect(p);
            }
            let mid = round_bits(&((&r.lo + &r.hi) / rat(2)), bits);
            ComplexApprox { re: mid, im: BigRational::zero() }
        })
        .collect();
    if real.len() == n {
        return real;
    }
    let approx = aberth(&p.to_f64());
    let mut approx: Vec<Complex64> = approx;
    approx.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap_or(Ordering::Equal));
    let mut complex: Vec<ComplexApprox> = approx[real.len()..]
        .iter()
        .map(|z| newton_polish(p, *z, bits))
        .collect();
    complex.sort_by(|a, b| {
        let (x, y) = (a.to_complex64(), b.to_complex64());
        x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal).then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal))
    });
    real.extend(complex);
    real
}

fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let c: Vec<f64> = coeffs.iter().map(|x| x / lc).collect();
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn newton_polish(p: &RatPoly, z0: Complex64, bits: u32) -> ComplexApprox {
    let prec = bits + 32;
    let to_rat = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    let mut re = round_bits(&to_rat(z0.re), prec);
    let mut im = round_bits(&to_rat(z0.im), prec);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
    for _ in 0..200 {
        let (mut pr, mut pi) = (BigRational::zero(), BigRational::zero());
        let (mut dr, mut di) = (BigRational::zero(), BigRational::zero());
        for a in p.c.iter().rev() {
            let ndr = round_bits(&(&dr * &re - &di * &im + &pr), prec);
            let ndi = round_bits(&(&dr * &im + &di * &re + &pi), prec);
            dr = ndr;
            di = ndi;
            let npr = round_bits(&(&pr * &re - &pi * &im + a), prec);
            let npi = round_bits(&(&pr * &im + &pi * &re), prec);
            pr = npr;
            pi = npi;
        }
        let den = &dr * &dr + &di * &di;
        if den.is_zero() {
            break;
        }
        let sr = round_bits(&((&pr * &dr + &pi * &di) / &den), prec);
        let si = round_bits(&((&pi * &dr - &pr * &di) / &den), prec);
        re = &re - &sr;
        im = &im - &si;
        if sr.abs() < tol && si.abs() < tol {
            break;
        }
    }
    ComplexApprox { re: round_bits(&re, bits), im: round_bits(&im, bits) }
}
