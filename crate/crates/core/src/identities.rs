//! Checks of the basic q-series identities used by the proof.
//!
//! * pair rewrite: `(x_i/x_j)_l (q x_j/x_i)_m = q^{C(m+1,2)} (-x_j/x_i)^m (x_i/x_j q^{-m})_{l+m}`
//! * finite q-binomial theorem: `(u)_n = Σ_k q^{C(k,2)} [n k] (-u)^k`
//! * q-binomial theorem: `(az)_∞/(z)_∞ = Σ_k (a)_k/(q)_k z^k`
//! * Pochhammer additivity: `(z)_n (z q^n)_m = (z)_{n+m}`

use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::Result;
use crate::laurent::{expand_factored, qbinomial, qpochhammer, ExpVec, LaurentPoly, QMonomial};
use crate::qfield::{BigRat, QRat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub params: String,
    pub passed: bool,
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{mark}  {:<22} {}", self.identity, self.params)
    }
}

pub const PAIR_REWRITE: &str = "pair-rewrite";
pub const FINITE_QBINOMIAL: &str = "finite-q-binomial";
pub const QBINOMIAL_THEOREM: &str = "q-binomial-theorem";
pub const POCHHAMMER_ADDITIVITY: &str = "pochhammer-additivity";

/// Both sides of the pair rewrite, expanded exactly.
pub fn pair_rewrite_sides(
    l: u32,
    m: u32,
    i: usize,
    j: usize,
) -> Result<(LaurentPoly, LaurentPoly)> {
    let (l, m) = (l as i64, m as i64);
    let lhs = qpochhammer(&QMonomial::ratio(0, i, j), l)?
        .mul(&qpochhammer(&QMonomial::ratio(1, j, i), m)?)
        .expand_exact()?;
    let sign = if m % 2 == 0 {
        BigRat::one()
    } else {
        -BigRat::one()
    };
    let mut rhs = qpochhammer(&QMonomial::ratio(-m, i, j), l + m)?;
    rhs.mul_qmonomial(
        &QMonomial::new(sign, m * (m + 1) / 2, ExpVec::ratio(j, i).pow(m as i32)),
        1,
    )?;
    Ok((lhs, rhs.expand_exact()?))
}

/// `(u)_n` (with `u = x_0`) and `Σ_{k<=degree} q^{C(k,2)} [n k] (-u)^k`, both
/// through `u^degree`.
pub fn finite_qbinomial_sides(n: i64, degree: u32) -> Result<(LaurentPoly, LaurentPoly)> {
    let lhs = expand_factored(&qpochhammer(&QMonomial::var(0), n)?, 0, degree as i64)?;
    let mut rhs = LaurentPoly::zero();
    for k in 0..=degree as i64 {
        let sign = if k % 2 == 0 {
            QRat::one()
        } else {
            -QRat::one()
        };
        let c = &(&QRat::q_pow(k * (k - 1) / 2) * &qbinomial(n, k)?) * &sign;
        rhs.add_term(ExpVec::var_pow(0, k as i32), c);
    }
    Ok((lhs, rhs))
}

/// Box truncation `deg_z <= dz`, `deg_q <= dq` over `z = x_0`, `q = x_1`,
/// `a = x_2`, with `q` treated as a formal variable so the infinite
/// products become power series.
struct BoxSeries {
    dz: i32,
    dq: i32,
}

const Z: usize = 0;
const QV: usize = 1;
const A: usize = 2;

impl BoxSeries {
    fn keep(&self, m: &ExpVec) -> bool {
        m.exp(Z) <= self.dz && m.exp(QV) <= self.dq
    }

    fn mul(&self, x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
        x.mul_filtered(y, |m| self.keep(m))
    }

    /// `1/(1 - M)` for a monomial `M` of positive total box degree.
    fn geometric(&self, m: &ExpVec, c: &QRat) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        let (mut mono, mut coeff) = (ExpVec::one(), QRat::one());
        loop {
            mono = mono.mul(m);
            coeff = &coeff * c;
            if !self.keep(&mono) {
                break;
            }
            out.add_term(mono.clone(), coeff.clone());
        }
        out
    }

    fn one_minus(&self, m: ExpVec) -> LaurentPoly {
        let mut p = LaurentPoly::one();
        if self.keep(&m) {
            p.add_term(m, -QRat::one());
        }
        p
    }

    /// `(c z)_∞` truncated, with `c` a monomial in `a`.
    fn pochhammer_inf(&self, base: &ExpVec) -> LaurentPoly {
        (0..=self.dq).fold(LaurentPoly::one(), |acc, m| {
            self.mul(&acc, &self.one_minus(base.mul(&ExpVec::var_pow(QV, m))))
        })
    }

    fn inv_pochhammer_inf(&self, base: &ExpVec) -> LaurentPoly {
        (0..=self.dq).fold(LaurentPoly::one(), |acc, m| {
            self.mul(
                &acc,
                &self.geometric(&base.mul(&ExpVec::var_pow(QV, m)), &QRat::one()),
            )
        })
    }
}

/// Both sides of the q-binomial theorem in the box `deg_z, deg_q <= degree`.
pub fn qbinomial_theorem_sides(degree: u32) -> (LaurentPoly, LaurentPoly) {
    let bx = BoxSeries {
        dz: degree as i32,
        dq: degree as i32,
    };
    let z = ExpVec::var(Z);
    let lhs = bx.mul(
        &bx.pochhammer_inf(&z.mul(&ExpVec::var(A))),
        &bx.inv_pochhammer_inf(&z),
    );
    let mut rhs = LaurentPoly::zero();
    for k in 0..=degree as i32 {
        // (a)_k / (q)_k z^k
        let mut term = LaurentPoly::term(ExpVec::var_pow(Z, k), QRat::one());
        for i in 0..k {
            term = bx.mul(
                &term,
                &bx.one_minus(ExpVec::var(A).mul(&ExpVec::var_pow(QV, i))),
            );
        }
        for i in 1..=k {
            term = bx.mul(&term, &bx.geometric(&ExpVec::var_pow(QV, i), &QRat::one()));
        }
        rhs = &rhs + &term;
    }
    (lhs, rhs)
}

/// `(z)_n (z q^n)_m` and `(z)_{n+m}` for `z = x_0/x_1`, as forms.
pub fn pochhammer_additivity_holds(n: i64, m: i64, degree: u32) -> Result<bool> {
    let z = QMonomial::ratio(0, 0, 1);
    let lhs = qpochhammer(&z, n)?.mul(&qpochhammer(&z.clone().with_q(n), m)?);
    let rhs = qpochhammer(&z, n + m)?;
    let d = degree as i64;
    Ok(lhs == rhs && expand_factored(&lhs, 0, d)? == expand_factored(&rhs, 0, d)?)
}

/// Runs every identity. `degree` is the series truncation.
pub fn run_identity_suite(degree: u32) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for l in 0..=3 {
        for m in 0..=3 {
            for (i, j) in [(0, 1), (1, 0)] {
                let (lhs, rhs) = pair_rewrite_sides(l, m, i, j)?;
                out.push(IdentityCheck {
                    identity: PAIR_REWRITE,
                    params: format!("l={l} m={m} i={i} j={j}"),
                    passed: lhs == rhs,
                });
            }
        }
    }
    for n in -4..=4 {
        let (lhs, rhs) = finite_qbinomial_sides(n, degree)?;
        out.push(IdentityCheck {
            identity: FINITE_QBINOMIAL,
            params: format!("n={n} degree={degree}"),
            passed: lhs == rhs,
        });
    }
    let (lhs, rhs) = qbinomial_theorem_sides(degree);
    out.push(IdentityCheck {
        identity: QBINOMIAL_THEOREM,
        params: format!("degree={degree}"),
        passed: lhs == rhs,
    });
    for n in -3..=3 {
        for m in -3..=3 {
            out.push(IdentityCheck {
                identity: POCHHAMMER_ADDITIVITY,
                params: format!("n={n} m={m}"),
                passed: pochhammer_additivity_holds(n, m, degree)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_rewrite_small() {
        let (l, r) = pair_rewrite_sides(1, 1, 0, 1).unwrap();
        assert_eq!(l, r);
        let (l, r) = pair_rewrite_sides(0, 0, 0, 1).unwrap();
        assert_eq!(l, LaurentPoly::one());
        assert_eq!(r, LaurentPoly::one());
    }

    #[test]
    fn finite_qbinomial_at_minus_one() {
        // (u)_{-1} = 1/(1 - u/q): coefficient of u^k is q^{-k}
        let (lhs, rhs) = finite_qbinomial_sides(-1, 8).unwrap();
        assert_eq!(lhs, rhs);
        for k in 0..=8 {
            assert_eq!(lhs.coeff(&ExpVec::var_pow(0, k)), QRat::q_pow(-(k as i64)));
        }
    }

    #[test]
    fn finite_qbinomial_at_zero() {
        let (lhs, rhs) = finite_qbinomial_sides(0, 8).unwrap();
        assert_eq!(lhs, LaurentPoly::one());
        assert_eq!(rhs, LaurentPoly::one());
    }

    #[test]
    fn qbinomial_theorem_low_degree() {
        let (lhs, rhs) = qbinomial_theorem_sides(3);
        assert_eq!(lhs, rhs);
        // z^1 coefficient: (1 - a)/(1 - q) = (1 - a)(1 + q + q^2 + q^3)
        assert_eq!(
            lhs.coeff(&ExpVec::from_pairs([(Z, 1), (QV, 2)])),
            QRat::one()
        );
        assert_eq!(
            lhs.coeff(&ExpVec::from_pairs([(Z, 1), (QV, 2), (A, 1)])),
            -QRat::one()
        );
    }

    #[test]
    fn a_broken_side_is_noticed() {
        let (lhs, mut rhs) = finite_qbinomial_sides(2, 4).unwrap();
        rhs.add_term(ExpVec::var_pow(0, 3), QRat::one());
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn full_suite_passes() {
        let checks = run_identity_suite(6).unwrap();
        assert_eq!(checks.len(), 32 + 9 + 1 + 49);
        assert!(
            checks.iter().all(|c| c.passed),
            "{:?}",
            checks.iter().find(|c| !c.passed)
        );
    }
}
