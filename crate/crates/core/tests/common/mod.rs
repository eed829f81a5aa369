//! Shared oracles for the integration tests: polynomials realizing a given
//! reference word, an f64 root finder independent of the exact kernel, and
//! the bases used across the suites.
#![allow(dead_code)]

use negabeta::expansion::reference_l;
use negabeta::{BaseContext, Budgets, DigitWord, ExpandedWord, MinimalPolynomial, RootSelector};

pub const TRIB: &str = "x^3-x^2-x-1";
pub const CUBIC: &str = "x^3-2x^2-x+1";
pub const MIN_PISOT: &str = "x^3-x-1";
pub const GOLDEN: &str = "x^2-x-1";

pub fn ctx(poly: &str) -> BaseContext {
    BaseContext::parse(poly).unwrap()
}

/// Integer polynomials, lowest coefficient first.
pub type IPoly = Vec<i64>;

fn trim(mut p: IPoly) -> IPoly {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

pub fn add(a: &[i64], b: &[i64]) -> IPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect())
}

pub fn neg(a: &[i64]) -> IPoly {
    a.iter().map(|c| -c).collect()
}

pub fn mul(a: &[i64], b: &[i64]) -> IPoly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic divisor, if it divides.
pub fn div_exact(a: &[i64], d: &[i64]) -> Option<IPoly> {
    assert_eq!(*d.last().unwrap(), 1);
    if a.len() < d.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![0; a.len() - d.len() + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + d.len() - 1];
        q[i] = c;
        for (j, dj) in d.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    r.iter().all(|&c| c == 0).then(|| trim(q))
}

/// x^n for the variable x.
fn monomial(n: usize) -> IPoly {
    let mut v = vec![0; n + 1];
    v[n] = 1;
    v
}

/// p(−x).
fn reflect(p: &[i64]) -> IPoly {
    p.iter().enumerate().map(|(i, c)| if i % 2 == 0 { *c } else { -c }).collect()
}

pub fn cyclotomic(n: usize) -> IPoly {
    let mut p = add(&monomial(n), &[-1]);
    for d in 1..n {
        if n % d == 0 {
            p = div_exact(&p, &cyclotomic(d)).unwrap();
        }
    }
    p
}

/// Σ_{i=1}^{len} w_i x^{len−i}.
fn horner_poly(w: &[u32]) -> IPoly {
    let n = w.len();
    trim((0..n.max(1)).map(|j| if j < n { w[n - 1 - j] as i64 } else { 0 }).collect())
}

/// With x = −β, a base whose l_β has expansion d satisfies
/// x^{m+1}(x^p − 1) = (1 − x)(A(x)(x^p − 1) + B(x)), or x^{m+1} = (1 − x)A(x)
/// for a finite d. Returned as a polynomial in β.
pub fn word_poly(d: &DigitWord) -> IPoly {
    let m = d.preperiod().len();
    let a = horner_poly(d.preperiod());
    let one_minus_x = vec![1, -1];
    let px = if d.is_finite() {
        add(&monomial(m + 1), &neg(&mul(&one_minus_x, &a)))
    } else {
        let p = d.period().len();
        let xp1 = add(&monomial(p), &[-1]);
        let b = horner_poly(d.period());
        let rhs = mul(&one_minus_x, &add(&mul(&a, &xp1), &b));
        add(&mul(&monomial(m + 1), &xp1), &neg(&rhs))
    };
    let mut q = reflect(&px);
    if *q.last().unwrap() < 0 {
        q = neg(&q);
    }
    q
}

/// Removes factors β, β ± 1 and cyclotomic factors in ±β.
pub fn strip_spurious(p: &[i64]) -> IPoly {
    let mut p = p.to_vec();
    while p.len() > 1 && p[0] == 0 {
        p.remove(0);
    }
    let mut divisors = vec![];
    for n in 1..=30 {
        let c = cyclotomic(n);
        divisors.push(c.clone());
        let r = reflect(&c);
        if *r.last().unwrap() == 1 {
            divisors.push(r);
        } else {
            divisors.push(neg(&r));
        }
    }
    loop {
        let before = p.len();
        for d in &divisors {
            while p.len() > 1 {
                match div_exact(&p, d) {
                    Some(q) => p = q,
                    None => break,
                }
            }
        }
        if p.len() == before {
            break;
        }
    }
    if *p.last().unwrap() < 0 {
        p = neg(&p);
    }
    p
}

/// Real roots by sign changes on a grid refined with bisection, f64 only.
pub fn real_roots_f64(p: &[i64]) -> Vec<f64> {
    let f = |x: f64| p.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64);
    let bound = 1.0 + p[..p.len() - 1].iter().map(|c| (*c as f64).abs()).fold(0.0, f64::max) / (*p.last().unwrap() as f64).abs();
    let steps = 200_000;
    let h = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut f0 = f(x0);
    for i in 1..=steps {
        let x1 = -bound + i as f64 * h;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b) = (x0, x1);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if f(a) * f(m) <= 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

pub fn poly_string(p: &[i64]) -> String {
    MinimalPolynomial::from_i64(p).to_string()
}

/// A base β > 1 whose d_{−β}(l_β) is exactly `d`, tried over every real root
/// of the stripped polynomial.
pub fn base_for_word(d: &DigitWord) -> Option<(String, BaseContext)> {
    let p = strip_spurious(&word_poly(d));
    if p.len() < 2 {
        return None;
    }
    let roots = real_roots_f64(&p);
    for (i, r) in roots.iter().enumerate() {
        if *r <= 1.0 + 1e-9 {
            continue;
        }
        // a wrong root can have a long non-closing orbit; the target word is short
        let budgets = Budgets { orbit_steps: 64 + 8 * (d.preperiod().len() + d.period_len()), ..Budgets::default() };
        let poly = MinimalPolynomial::from_i64(&p);
        let Ok(probe) = BaseContext::with_budgets(poly.clone(), RootSelector::Index(i), budgets) else { continue };
        if let Ok(ExpandedWord::Decided(w)) = reference_l(&probe) {
            if &w == d {
                return Some((poly_string(&p), BaseContext::new(poly, RootSelector::Index(i)).ok()?));
            }
        }
    }
    None
}

/// Bases with an infinite reference word meeting 0 < d_i, d_1 > d_2i,
/// as (d_{−β}(l_β), minimal polynomial); found with `base_for_word`.
pub const INFINITE_BASES: &[(&str, &str)] = &[
    ("2(1)", "x^2-2x-1"),
    ("3(1)", "x^2-3x-2"),
    ("3(2)", "x^2-3x-1"),
    ("(31)", "x^2-4x+1"),
    ("3(21)", "x^3-4x^2+2x+2"),
    ("3(12)", "x^3-4x^2+x+1"),
    ("3(1211)", "x^5-4x^4+2x^3-3x^2+x+2"),
    ("3(2111)", "x^5-4x^4+3x^3-2x^2+x+2"),
    ("3(121)", "x^4-4x^3+2x^2-2x-2"),
    ("3(211)", "x^4-4x^3+3x^2-x-2"),
    ("3(112)", "x^4-4x^3+2x^2-x-1"),
    ("(3121)", "x^4-4x^3+2x^2-3x+1"),
];

/// Finite reference words d_1⋯d_m meeting the same digit conditions.
pub const FINITE_BASES: &[(&str, &str)] = &[
    ("1", "x^2-x-1"),
    ("21", "x^3-2x^2-x+1"),
    ("31", "x^3-3x^2-2x+1"),
    ("211", "x^4-2x^3-x^2-1"),
    ("311", "x^4-3x^3-2x^2-1"),
    ("321", "x^4-3x^3-x^2+x-1"),
];

/// Context for a table entry, rebuilt from its word and checked against the
/// recorded polynomial.
pub fn listed_base(entry: &(&str, &str)) -> BaseContext {
    let d: DigitWord = entry.0.parse().unwrap();
    let (poly, ctx) = base_for_word(&d).unwrap_or_else(|| panic!("no base for {}", entry.0));
    assert_eq!(poly, entry.1, "{}", entry.0);
    ctx
}
