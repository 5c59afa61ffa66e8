use super::{FactoredForm, QMonomial};
use crate::error::{Error, Result};
use num_traits::One;

use crate::qfield::{BigRat, QRat};

/// `(z)_n` for any integer `n`.
///
/// `n = p >= 0` gives `(1-z)(1-zq)...(1-zq^{p-1})`; `n = -p` gives
/// `1/((1-zq^{-1})...(1-zq^{-p}))`.
pub fn qpochhammer(z: &QMonomial, n: i64) -> Result<FactoredForm> {
    let mut f = FactoredForm::one();
    if n >= 0 {
        for m in 0..n {
            f.mul_binomial(z.clone().with_q(m), 1)?;
        }
    } else {
        for m in 1..=-n {
            f.mul_binomial(z.clone().with_q(-m), -1)?;
        }
    }
    Ok(f)
}

/// `(z)_n` for a constant `z` in `Q(q)`.
pub fn qpochhammer_value(z: &QRat, n: i64) -> Result<QRat> {
    let factor = |m: i64| &QRat::one() - &(z * &QRat::q_pow(m));
    if n >= 0 {
        Ok((0..n).map(factor).product())
    } else {
        (1..=-n).map(|m| factor(-m)).product::<QRat>().inv()
    }
}

/// `(q)_n` for `n >= 0`.
pub fn qfactorial(n: u32) -> QRat {
    (1..=n as i64)
        .map(|i| QRat::one_minus(&BigRat::one(), i))
        .product()
}

/// The q-binomial coefficient `(q^{n-m+1})_m / (q)_m`, defined for all
/// integers `n` and `m >= 0`.
pub fn qbinomial(n: i64, m: i64) -> Result<QRat> {
    if m < 0 {
        return Err(Error::Domain(format!("q-binomial needs m >= 0, got {m}")));
    }
    let num: QRat = (0..m)
        .map(|i| QRat::one_minus(&BigRat::one(), n - m + 1 + i))
        .product();
    num.checked_div(&qfactorial(m as u32))
}
