use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ExpVec, QMonomial};
use crate::qfield::QRat;

/// Sparse multivariate Laurent polynomial with `Q(q)` coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<ExpVec, QRat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(QRat::one())
    }

    pub fn constant(c: QRat) -> Self {
        LaurentPoly::term(ExpVec::one(), c)
    }

    pub fn term(m: ExpVec, c: QRat) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: usize) -> Self {
        LaurentPoly::term(ExpVec::var(v), QRat::one())
    }

    pub fn from_qmonomial(m: &QMonomial) -> Self {
        LaurentPoly::term(m.vars.clone(), m.scalar())
    }

    /// `1 - m`.
    pub fn one_minus(m: &QMonomial) -> Self {
        &LaurentPoly::one() - &LaurentPoly::from_qmonomial(m)
    }

    pub fn add_term(&mut self, m: ExpVec, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &QRat)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (ExpVec, QRat)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &ExpVec) -> QRat {
        self.terms.get(m).cloned().unwrap_or_else(QRat::zero)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> QRat {
        self.coeff(&ExpVec::one())
    }

    pub fn scale(&self, c: &QRat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &ExpVec, c: &QRat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&ExpVec) -> bool) {
        self.terms.retain(|m, _| keep(m));
    }

    /// Terms free of `x_v`.
    pub fn ct_var(&self, v: usize) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.involves(v))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn exp_range(&self, v: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn min_grade(&self, weights: &[i64]) -> Option<i64> {
        self.terms.keys().map(|m| m.grade(weights)).min()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(ExpVec::max_var).max()
    }

    /// Product keeping only terms accepted by `keep`.
    pub fn mul_filtered(
        &self,
        rhs: &LaurentPoly,
        mut keep: impl FnMut(&ExpVec) -> bool,
    ) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                if keep(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_filtered(rhs, |_| true)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl FromIterator<(ExpVec, QRat)> for LaurentPoly {
    fn from_iter<I: IntoIterator<Item = (ExpVec, QRat)>>(iter: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }
}

/// Writes `c*m` in the surface syntax, parenthesising compound coefficients.
pub(crate) fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    m: &ExpVec,
    c: &QRat,
    first: bool,
) -> fmt::Result {
    let text = c.to_string();
    let (neg, mag) = match text.strip_prefix('-') {
        Some(rest) if !c.is_compound() => (true, rest.to_string()),
        _ => (false, text),
    };
    if neg {
        f.write_str("-")?;
    } else if !first {
        f.write_str("+")?;
    }
    let wrapped = if c.is_compound() {
        format!("({mag})")
    } else {
        mag
    };
    if m.is_one() {
        return f.write_str(&wrapped);
    }
    if wrapped != "1" {
        write!(f, "{wrapped}*")?;
    }
    write!(f, "{m}")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&ExpVec::one()) {
                // a bare constant prints without parentheses
                return write!(f, "{c}");
            }
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            fmt_term(f, m, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
