use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::ExpandedWord;
use crate::field::{FieldElement, NumberField, DEFAULT_REFINEMENT_BITS};
use crate::poly::{isolate_real_roots, MinimalPolynomial, RatPoly};

pub const DEFAULT_ORBIT_BUDGET: usize = 10_000;

/// Which real root of the polynomial is the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSelector {
    LargestReal,
    /// Position among the distinct real roots in ascending order.
    Index(usize),
}

impl FromStr for RootSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "largest" | "largest-real" => Ok(RootSelector::LargestReal),
            _ => s
                .strip_prefix("index:")
                .unwrap_or(s)
                .parse()
                .map(RootSelector::Index)
                .map_err(|_| Error::ParseError(format!("bad root selector '{s}'"))),
        }
    }
}

/// Positive (Rényi) or negative (Ito-Sadahiro) numeration system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "pos")]
    Positive,
    #[serde(rename = "neg")]
    Negative,
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" | "positive" | "+" => Ok(Sign::Positive),
            "neg" | "negative" | "-" => Ok(Sign::Negative),
            _ => Err(Error::ParseError(format!("bad sign '{s}' (expected pos|neg)"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "pos",
            Sign::Negative => "neg",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub orbit_steps: usize,
    pub refinement_bits: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { orbit_steps: DEFAULT_ORBIT_BUDGET, refinement_bits: DEFAULT_REFINEMENT_BITS }
    }
}

#[derive(Default)]
pub(crate) struct Caches {
    pub reference_l: Option<ExpandedWord>,
    pub renyi_one: Option<ExpandedWord>,
}

/// An algebraic base β > 1 with the exact data both numeration systems need.
pub struct BaseContext {
    field: Arc<NumberField>,
    beta: FieldElement,
    beta_floor: u32,
    beta_is_integer: bool,
    l: FieldElement,
    r: FieldElement,
    orbit_budget: usize,
    pub(crate) caches: Mutex<Caches>,
}

impl fmt::Debug for BaseContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseContext")
            .field("poly", &self.field.polynomial().to_string())
            .field("beta_floor", &self.beta_floor)
            .finish()
    }
}

/// Drops every factor (x + 1) so that β + 1 is invertible modulo the polynomial.
fn strip_minus_one_factors(poly: MinimalPolynomial) -> MinimalPolynomial {
    let mut p = poly.to_rat();
    let lin = RatPoly::new(vec![BigRational::one(), BigRational::one()]);
    loop {
        let (q, r) = p.div_rem(&lin);
        if !r.is_zero() || q.degree() == 0 {
            break;
        }
        p = q;
    }
    if p.degree() == poly.degree() {
        poly
    } else {
        MinimalPolynomial::new(p.to_primitive_int())
    }
}

impl BaseContext {
    /// Builds the base with default budgets.
    pub fn new(poly: MinimalPolynomial, selector: RootSelector) -> Result<Self> {
        Self::with_budgets(poly, selector, Budgets::default())
    }

    pub fn with_budgets(poly: MinimalPolynomial, selector: RootSelector, budgets: Budgets) -> Result<Self> {
        if poly.degree() == 0 {
            return Err(Error::DegenerateDegree);
        }
        let poly = strip_minus_one_factors(poly);
        let roots = isolate_real_roots(&poly.to_rat());
        let index = match selector {
            RootSelector::LargestReal => roots
                .len()
                .checked_sub(1)
                .ok_or_else(|| Error::NoSuchRoot(format!("{poly} has no real root")))?,
            RootSelector::Index(i) => {
                if i >= roots.len() {
                    return Err(Error::NoSuchRoot(format!("{poly} has {} real roots, index {i}", roots.len())));
                }
                i
            }
        };
        let field = NumberField::with_real_root(poly.clone(), index, budgets.refinement_bits)?;
        let beta = field.beta();
        let one = field.one();
        if beta.compare(&one)? != Ordering::Greater {
            return Err(Error::NoSuchRoot(format!("selected root of {poly} is not greater than 1")));
        }
        let floor = beta.floor()?;
        let beta_floor = floor.to_u32().ok_or_else(|| Error::NoSuchRoot("base too large".into()))?;
        let beta_is_integer = beta.compare(&field.int(beta_floor as i64))? == Ordering::Equal;
        let r = (&beta + &one).inverse()?;
        let l = -(&beta * &r);
        Ok(BaseContext {
            field,
            beta,
            beta_floor,
            beta_is_integer,
            l,
            r,
            orbit_budget: budgets.orbit_steps,
            caches: Mutex::new(Caches::default()),
        })
    }

    /// Convenience constructor from a polynomial string, largest real root.
    pub fn parse(poly: &str) -> Result<Self> {
        Self::new(poly.parse()?, RootSelector::LargestReal)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn polynomial(&self) -> &MinimalPolynomial {
        self.field.polynomial()
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    /// ⌊β⌋.
    pub fn beta_floor(&self) -> u32 {
        self.beta_floor
    }

    pub fn beta_is_integer(&self) -> bool {
        self.beta_is_integer
    }

    /// Largest digit: ⌊β⌋ for the negative base, ⌈β⌉ − 1 for the positive base.
    pub fn alphabet_max(&self, sign: Sign) -> u32 {
        match sign {
            Sign::Negative => self.beta_floor,
            Sign::Positive if self.beta_is_integer => self.beta_floor - 1,
            Sign::Positive => self.beta_floor,
        }
    }

    /// l_β = −β/(β+1), left end of the (−β)-transformation domain.
    pub fn l(&self) -> &FieldElement {
        &self.l
    }

    /// r_β = 1/(β+1), right end of the (−β)-transformation domain.
    pub fn r(&self) -> &FieldElement {
        &self.r
    }

    pub fn orbit_budget(&self) -> usize {
        self.orbit_budget
    }

    pub fn element(&self, coords: Vec<BigRational>) -> FieldElement {
        self.field.element(coords)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        self.field.int(n)
    }

    pub fn approx_beta(&self) -> f64 {
        self.beta.to_f64()
    }
}
