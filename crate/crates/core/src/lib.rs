//! Exact computational engine for pairs of differential forms.
//!
//! A pair `(τ, ω)` of a 1-form and a 2-form is classified by its *class*,
//! the codimension of `Ker τ ∩ Ker ω`. Odd class is equivalent to the
//! existence of Reeb vectors (`ι_R τ = 1`, `ι_R ω = 0`), even class to the
//! existence of Liouville vectors (`ι_Δ ω = τ`). This crate computes these
//! objects exactly over the rationals, pointwise ([`pair`]) and over
//! polynomial forms on a coordinate chart ([`field`], [`scan`]), and builds
//! the precontact toolkit on top of them ([`precontact`]).
//!
//! Nothing in the computational path uses floating point.

pub mod error;
pub mod exterior;
pub mod field;
pub mod linalg;
pub mod pair;
pub mod poly;
pub mod precontact;
pub mod scan;

pub use error::{Error, Result};
pub use exterior::{AltForm, Coefficient, Form};
pub use field::{PolyForm, PolyVectorField};
pub use linalg::{AffineSet, Matrix, Subspace, Vector};
pub use pair::{Parity, PairReport, Witness};
pub use poly::{parse_polynomial, ParseError, Polynomial};
pub use scan::{SampleDomain, ScanReport};

/// Exact rational scalar. Always kept in lowest terms with a positive denominator.
pub type Rational = num::BigRational;

/// Builds a rational from a pair of machine integers.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `"p"` or `"p/q"` (optional leading `-`) into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: num::BigInt = num.parse().ok()?;
    let den: num::BigInt = den.parse().ok()?;
    if num::Zero::is_zero(&den) {
        return None;
    }
    Some(Rational::new(num, den))
}
