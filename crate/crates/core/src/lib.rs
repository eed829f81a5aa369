//! Exact arithmetic and combinatorics for numeration in negative algebraic bases.

pub mod admissibility;
pub mod base;
pub mod error;
pub mod expansion;
pub mod field;
pub mod fractal;
pub mod integers;
pub mod poly;
pub mod substitution;
pub mod word;

pub use base::{BaseContext, Budgets, RootSelector, Sign};
pub use error::{Error, Result};
pub use expansion::{ExpandedWord, PointedExpansion};
pub use field::{FieldElement, NumberField};
pub use poly::MinimalPolynomial;
pub use word::{Digit, DigitWord};
