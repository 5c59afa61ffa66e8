//! Multivariate Laurent polynomials, symbolic factored forms, and their
//! expansion in the iterated Laurent series field `K((x_n))...((x_0))`.
//!
//! Series are read first in `x_0`, then `x_1`, and so on. A monomial is
//! *small* when its lowest-indexed variable carries a positive exponent;
//! `q^k x_i/x_j` is small exactly when `i < j`. Then
//!
//! * `1/(1 - M) = Σ_{l≥0} M^l` for small `M`, and
//! * `1/(1 - M) = -Σ_{l≥0} M^{-l-1}` for large `M`.
//!
//! [`FactoredForm`] keeps every binomial with its monomial in small
//! orientation, so only the first rule is ever applied at expansion time.
//!
//! Truncation bound for the constant term in `x_0`: when every denominator
//! factor involves `x_0`, each geometric series only raises the `x_0`
//! degree. If the numerator has `x_0` degrees in `[-a, 0]` (as the q-Dyson
//! integrand does), then no term of `x_0` degree above `a` in the expansion
//! of the denominators can reach degree zero, and truncating at degree `a`
//! is exact for the constant term. The expansion here goes further and prunes
//! against the exact remaining budget, so any bound `>= 0` is exact for the
//! constant term.

mod expand;
mod factored;
mod monomial;
mod pochhammer;
mod poly;

pub use expand::{expand_factored, expand_graded, Grading};
pub use factored::{Binomial, FactoredForm, Oriented, Substitution};
pub use monomial::{monomial_class, ExpVec, MonomialClass, QMonomial};
pub use pochhammer::{qbinomial, qfactorial, qpochhammer, qpochhammer_value};
pub use poly::LaurentPoly;

/// The variables `x_0, ..., x_n` of one computation, in expansion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarOrder {
    count: usize,
}

impl VarOrder {
    /// Variables `x_0..=x_n`.
    pub fn new(n: usize) -> Self {
        VarOrder { count: n + 1 }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.count
    }

    pub fn vars(&self) -> std::ops::Range<usize> {
        0..self.count
    }
}
