//! Exact coefficient field: arbitrary-precision rationals, polynomials in
//! `q`, and the rational function field `Q(q)`.
//!
//! Only rational constants occur in the constant terms handled here, so the
//! base field is `Q` rather than `C`. Negative powers of `q` are carried by
//! [`QRat`] as a monomial denominator; [`QPoly`] only has nonnegative powers.

mod poly;
mod rat;

pub use num_rational::BigRational as BigRat;
pub use poly::QPoly;
pub use rat::QRat;
