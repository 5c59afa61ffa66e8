use std::fmt;

use num_traits::{One, Signed};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::qfield::{BigRat, QRat};

/// Exponent vector of a monomial in `x_0, x_1, ...`.
///
/// Sorted by variable index with no zero exponents; the empty vector is the
/// constant monomial `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExpVec(SmallVec<[(u32, i32); 4]>);

/// Classification of `q^k x_i / x_j` in the iterated Laurent series field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialClass {
    /// `i < j`: `1/(1 - M)` expands in powers of `M`, constant term 1.
    Small,
    /// `i > j`: `1/(1 - M)` expands in powers of `1/M`, constant term 0.
    Large,
}

impl ExpVec {
    pub fn one() -> Self {
        ExpVec(SmallVec::new())
    }

    pub fn var(v: usize) -> Self {
        ExpVec::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: i32) -> Self {
        ExpVec::from_pairs([(v, e)])
    }

    /// `x_i / x_j`.
    pub fn ratio(i: usize, j: usize) -> Self {
        ExpVec::from_pairs([(i, 1), (j, -1)])
    }

    /// Collects `(variable, exponent)` pairs, combining repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, i32)>) -> Self {
        let mut out = ExpVec::one();
        for (v, e) in pairs {
            out.add_exp(v, e);
        }
        out
    }

    fn add_exp(&mut self, v: usize, e: i32) {
        if e == 0 {
            return;
        }
        let v = u32::try_from(v).expect("variable index overflow");
        match self.0.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(pos) => {
                let sum = self.0[pos].1.checked_add(e).expect("exponent overflow");
                if sum == 0 {
                    self.0.remove(pos);
                } else {
                    self.0[pos].1 = sum;
                }
            }
            Err(pos) => self.0.insert(pos, (v, e)),
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: usize) -> i32 {
        self.0
            .iter()
            .find(|&&(var, _)| var as usize == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn involves(&self, v: usize) -> bool {
        self.exp(v) != 0
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v as usize)
    }

    pub fn mul(&self, other: &ExpVec) -> ExpVec {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va < vb {
                        out.push((va, ea));
                        a.next();
                    } else if vb < va {
                        out.push((vb, eb));
                        b.next();
                    } else {
                        let e = ea.checked_add(eb).expect("exponent overflow");
                        if e != 0 {
                            out.push((va, e));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        ExpVec(out)
    }

    pub fn inv(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> ExpVec {
        if k == 0 {
            return ExpVec::one();
        }
        ExpVec(
            self.0
                .iter()
                .map(|&(v, e)| (v, e.checked_mul(k).expect("exponent overflow")))
                .collect(),
        )
    }

    /// Splits off the exponent of `v`.
    pub fn without(&self, v: usize) -> (ExpVec, i32) {
        let e = self.exp(v);
        (
            ExpVec(
                self.0
                    .iter()
                    .copied()
                    .filter(|&(var, _)| var as usize != v)
                    .collect(),
            ),
            e,
        )
    }

    /// Small in the iterated order: the lowest-indexed variable present has a
    /// positive exponent. `None` for the constant monomial.
    pub fn is_small(&self) -> Option<bool> {
        self.0.first().map(|&(_, e)| e > 0)
    }

    /// `Some((i, j))` when the monomial is exactly `x_i / x_j`.
    pub fn as_ratio(&self) -> Option<(usize, usize)> {
        match self.0.as_slice() {
            [(a, 1), (b, -1)] => Some((*a as usize, *b as usize)),
            [(a, -1), (b, 1)] => Some((*b as usize, *a as usize)),
            _ => None,
        }
    }

    pub fn grade(&self, weights: &[i64]) -> i64 {
        self.iter()
            .map(|(v, e)| weights.get(v).copied().unwrap_or(0) * e as i64)
            .sum()
    }
}

/// Small/large classification of a monomial `x_i / x_j` (any power of `q`).
pub fn monomial_class(m: &ExpVec) -> Result<MonomialClass> {
    let (i, j) = m
        .as_ratio()
        .ok_or_else(|| Error::Shape(format!("expected x_i/x_j with i != j, got {m}")))?;
    Ok(if i < j {
        MonomialClass::Small
    } else {
        MonomialClass::Large
    })
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_var = |f: &mut fmt::Formatter<'_>, v: u32, e: i32| {
            if e == 1 {
                write!(f, "x{v}")
            } else {
                write!(f, "x{v}^{e}")
            }
        };
        let mut first = true;
        for &(v, e) in self.0.iter().filter(|p| p.1 > 0) {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write_var(f, v, e)?;
        }
        if first {
            f.write_str("1")?;
        }
        for &(v, e) in self.0.iter().filter(|p| p.1 < 0) {
            f.write_str("/")?;
            write_var(f, v, -e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpVec({self})")
    }
}

/// A coefficient-carrying monomial `c * q^s * x^e` with rational `c`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    pub vars: ExpVec,
    pub qexp: i64,
    pub coeff: BigRat,
}

impl QMonomial {
    pub fn new(coeff: BigRat, qexp: i64, vars: ExpVec) -> Self {
        QMonomial { vars, qexp, coeff }
    }

    pub fn vars(vars: ExpVec) -> Self {
        QMonomial::new(BigRat::one(), 0, vars)
    }

    /// `q^s * x_i / x_j`.
    pub fn ratio(s: i64, i: usize, j: usize) -> Self {
        QMonomial::new(BigRat::one(), s, ExpVec::ratio(i, j))
    }

    pub fn var(v: usize) -> Self {
        QMonomial::vars(ExpVec::var(v))
    }

    pub fn with_q(mut self, s: i64) -> Self {
        self.qexp += s;
        self
    }

    pub fn scaled(mut self, c: &BigRat) -> Self {
        self.coeff *= c;
        self
    }

    pub fn mul(&self, other: &QMonomial) -> QMonomial {
        QMonomial {
            vars: self.vars.mul(&other.vars),
            qexp: self.qexp + other.qexp,
            coeff: &self.coeff * &other.coeff,
        }
    }

    /// Panics on a zero coefficient.
    pub fn inv(&self) -> QMonomial {
        QMonomial {
            vars: self.vars.inv(),
            qexp: -self.qexp,
            coeff: self.coeff.recip(),
        }
    }

    pub fn scalar(&self) -> QRat {
        QRat::q_monomial(self.coeff.clone(), self.qexp)
    }

    pub(crate) fn fmt_scalar_prefix(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // prints `c*q^s*` (or nothing when c q^s = 1); sign handled by caller
        let c = self.coeff.abs();
        let mut parts = Vec::new();
        if !c.is_one() {
            parts.push(c.to_string());
        }
        match self.qexp {
            0 => {}
            1 => parts.push("q".to_string()),
            s => parts.push(format!("q^{s}")),
        }
        for p in parts {
            write!(f, "{p}*")?;
        }
        Ok(())
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_negative() {
            f.write_str("-")?;
        }
        if self.vars.is_one() {
            let s = QRat::q_monomial(self.coeff.abs(), self.qexp);
            return write!(f, "{s}");
        }
        self.fmt_scalar_prefix(f)?;
        write!(f, "{}", self.vars)
    }
}

impl fmt::Debug for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMonomial({self})")
    }
}
