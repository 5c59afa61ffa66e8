use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{BigRat, QPoly};
use crate::error::{Error, Result};

/// An element of `Q(q)` in canonical form.
///
/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0/1`.
/// Equality is therefore representational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        QRat::from_poly(QPoly::one())
    }

    pub fn q() -> Self {
        QRat::from_poly(QPoly::q_pow(1))
    }

    pub fn from_poly(num: QPoly) -> Self {
        QRat {
            num,
            den: QPoly::one(),
        }
    }

    pub fn from_rat(c: BigRat) -> Self {
        QRat::from_poly(QPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        QRat::from_rat(BigRat::from_integer(c.into()))
    }

    /// `c * q^k` for any integer `k`.
    pub fn q_monomial(c: BigRat, k: i64) -> Self {
        if c.is_zero() {
            return QRat::zero();
        }
        if k >= 0 {
            QRat::from_poly(QPoly::term(c, k as usize))
        } else {
            QRat {
                num: QPoly::constant(c),
                den: QPoly::q_pow(k.unsigned_abs() as usize),
            }
        }
    }

    pub fn q_pow(k: i64) -> Self {
        QRat::q_monomial(BigRat::one(), k)
    }

    /// `1 - c q^k`, the constant binomial.
    pub fn one_minus(c: &BigRat, k: i64) -> Self {
        &QRat::one() - &QRat::q_monomial(c.clone(), k)
    }

    /// Builds the canonical representative of `num / den`.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(mut num: QPoly, mut den: QPoly) -> Self {
        if num.is_zero() {
            return QRat::zero();
        }
        let shift = num.low_degree().unwrap().min(den.low_degree().unwrap());
        if shift > 0 {
            num = num.shift_down(shift);
            den = den.shift_down(shift);
        }
        // After removing the common power of q, a monomial denominator is
        // already coprime to the numerator.
        if den.as_monomial().is_none() {
            let g = QPoly::gcd(&num, &den);
            if g.degree().unwrap_or(0) > 0 {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let lead = den.lead().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        QRat { num, den }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Rational constant, if the value does not depend on `q`.
    pub fn as_constant(&self) -> Option<BigRat> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `Some((c, k))` when the value is `c q^k` (with `k` possibly negative).
    pub fn as_q_monomial(&self) -> Option<(BigRat, i64)> {
        let (c, k) = self.num.as_monomial()?;
        let (_, d) = self.den.as_monomial()?;
        Some((c, k as i64 - d as i64))
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self) -> Result<Self> {
        QRat::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &QRat) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = QRat::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Evaluates at `q = v`. Fails only on a genuine pole of the reduced form.
    pub fn specialize(&self, v: &BigRat) -> Result<BigRat> {
        let d = self.den.eval(v);
        if d.is_zero() {
            return Err(Error::Pole { at: v.to_string() });
        }
        Ok(self.num.eval(v) / d)
    }

    /// True when the printed form needs parentheses inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        if self.as_q_monomial().is_some() {
            return false;
        }
        true
    }
}

impl Default for QRat {
    fn default() -> Self {
        QRat::zero()
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with_offset(f, 0);
        }
        if let Some((c, k)) = self.den.as_monomial() {
            // Laurent polynomial in q; den is monic so c = 1.
            debug_assert!(c.is_one());
            return self.num.fmt_with_offset(f, k as i64);
        }
        let wrap = |p: &QPoly| p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
        if wrap(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRat({self})")
    }
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QRat::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return QRat::normalize(&self.num + &rhs.num, self.den.clone());
        }
        QRat::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QRat::from_poly(&self.num * &rhs.num);
        }
        QRat::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for QRat {
    fn sum<I: Iterator<Item = QRat>>(iter: I) -> QRat {
        iter.fold(QRat::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for QRat {
    fn product<I: Iterator<Item = QRat>>(iter: I) -> QRat {
        iter.fold(QRat::one(), |a, b| &a * &b)
    }
}

impl From<i64> for QRat {
    fn from(c: i64) -> Self {
        QRat::from_int(c)
    }
}
