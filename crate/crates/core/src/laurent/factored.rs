use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{ExpVec, LaurentPoly, QMonomial};
use crate::error::{Error, Result};
use crate::qfield::{BigRat, QRat};

/// The binomial `1 - M` for a non-constant monomial `M = c q^s x^e`.
///
/// `M` is always stored in its small orientation (lowest variable with a
/// positive exponent), so each binomial has one representation and
/// `1/(1 - M)` expands directly as a geometric series in `M`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial(QMonomial);

/// Result of normalizing `1 - M`.
#[derive(Debug, Clone)]
pub enum Oriented {
    Constant(QRat),
    /// `1 - M = prefix * binomial`.
    Factor {
        prefix: QMonomial,
        binomial: Binomial,
    },
}

impl Binomial {
    /// Rewrites `1 - m` as a monomial prefix times an oriented binomial,
    /// using `1 - M = -M (1 - 1/M)` when `M` is large.
    pub fn orient(m: QMonomial) -> Oriented {
        match m.vars.is_small() {
            None => Oriented::Constant(QRat::one_minus(&m.coeff, m.qexp)),
            Some(true) => Oriented::Factor {
                prefix: QMonomial::vars(ExpVec::one()),
                binomial: Binomial(m),
            },
            Some(false) => {
                let inv = m.inv();
                let prefix = m.scaled(&-BigRat::one());
                Oriented::Factor {
                    prefix,
                    binomial: Binomial(inv),
                }
            }
        }
    }

    pub fn monomial(&self) -> &QMonomial {
        &self.0
    }

    pub fn vars(&self) -> &ExpVec {
        &self.0.vars
    }

    pub fn involves(&self, v: usize) -> bool {
        self.0.vars.involves(v)
    }

    /// Degree of `1 - M` as a rational function of `x_v`: `max(0, deg_v M)`.
    pub fn degree_in(&self, v: usize) -> i64 {
        self.0.vars.exp(v).max(0) as i64
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::one_minus(&self.0)
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        f.write_str(if m.coeff.is_negative() { "1+" } else { "1-" })?;
        m.fmt_scalar_prefix(f)?;
        write!(f, "{}", m.vars)
    }
}

impl fmt::Debug for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Binomial({self})")
    }
}

/// A monomial map `x_v -> c q^s x_w` applied variable by variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Substitution {
    images: BTreeMap<usize, QMonomial>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    /// Adds `x_v -> c q^s x_w`.
    pub fn set(&mut self, v: usize, image: QMonomial) {
        self.images.insert(v, image);
    }

    pub fn with(mut self, v: usize, image: QMonomial) -> Self {
        self.set(v, image);
        self
    }

    /// Image of the generator `x_v`.
    pub fn image(&self, v: usize) -> QMonomial {
        self.images
            .get(&v)
            .cloned()
            .unwrap_or_else(|| QMonomial::var(v))
    }

    pub fn moved(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.keys().copied()
    }

    pub fn apply_monomial(&self, m: &QMonomial) -> QMonomial {
        let mut out = QMonomial::new(m.coeff.clone(), m.qexp, ExpVec::one());
        for (v, e) in m.vars.iter() {
            match self.images.get(&v) {
                None => out.vars = out.vars.mul(&ExpVec::var_pow(v, e)),
                Some(img) => {
                    out.vars = out.vars.mul(&img.vars.pow(e));
                    out.qexp += img.qexp * e as i64;
                    out.coeff *= img.coeff.pow(e);
                }
            }
        }
        out
    }

    pub fn apply_poly(&self, p: &LaurentPoly) -> LaurentPoly {
        p.terms()
            .map(|(m, c)| {
                let img = self.apply_monomial(&QMonomial::vars(m.clone()));
                (img.vars.clone(), c * &img.scalar())
            })
            .collect()
    }

    /// `after ∘ self`: first `self`, then `after`.
    pub fn then(&self, after: &Substitution) -> Substitution {
        let mut out = after.clone();
        for (&v, img) in &self.images {
            out.images.insert(v, after.apply_monomial(img));
        }
        out
    }
}

/// `scalar * monomial * Π binomial^e` kept symbolically.
///
/// Factors with equal binomials are merged; constant binomials are folded
/// into the scalar. A zero scalar is the zero form, with no factors.
#[derive(Clone, PartialEq, Eq)]
pub struct FactoredForm {
    scalar: QRat,
    monomial: ExpVec,
    factors: BTreeMap<Binomial, i32>,
}

impl FactoredForm {
    pub fn one() -> Self {
        FactoredForm::constant(QRat::one())
    }

    pub fn zero() -> Self {
        FactoredForm::constant(QRat::zero())
    }

    pub fn constant(c: QRat) -> Self {
        FactoredForm {
            scalar: c,
            monomial: ExpVec::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn monomial_form(c: QRat, m: ExpVec) -> Self {
        if c.is_zero() {
            return FactoredForm::zero();
        }
        FactoredForm {
            scalar: c,
            monomial: m,
            factors: BTreeMap::new(),
        }
    }

    pub fn from_qmonomial(m: &QMonomial) -> Self {
        FactoredForm::monomial_form(m.scalar(), m.vars.clone())
    }

    /// `(1 - m)^e`.
    pub fn binomial(m: QMonomial, e: i32) -> Result<Self> {
        let mut f = FactoredForm::one();
        f.mul_binomial(m, e)?;
        Ok(f)
    }

    pub fn scalar(&self) -> &QRat {
        &self.scalar
    }

    pub fn monomial(&self) -> &ExpVec {
        &self.monomial
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Binomial, i32)> {
        self.factors.iter().map(|(b, &e)| (b, e))
    }

    pub fn numerator_factors(&self) -> impl Iterator<Item = (&Binomial, i32)> {
        self.factors().filter(|&(_, e)| e > 0)
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Binomial, i32)> {
        self.factors().filter(|&(_, e)| e < 0)
    }

    pub fn has_denominators(&self) -> bool {
        self.denominator_factors().next().is_some()
    }

    /// Number of binomial factors counted with multiplicity.
    pub fn factor_count(&self) -> usize {
        self.factors
            .values()
            .map(|e| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.monomial.is_one() && self.factors.is_empty()
    }

    pub fn exponent_of(&self, b: &Binomial) -> i32 {
        self.factors.get(b).copied().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.monomial.involves(v) || self.factors.keys().any(|b| b.involves(v))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.factors
            .keys()
            .filter_map(|b| b.vars().max_var())
            .chain(self.monomial.max_var())
            .max()
    }

    fn set_zero(&mut self) {
        *self = FactoredForm::zero();
    }

    pub fn mul_scalar(&mut self, c: &QRat) {
        if c.is_zero() {
            self.set_zero();
        } else if !self.is_zero() {
            self.scalar = &self.scalar * c;
        }
    }

    pub fn mul_qmonomial(&mut self, m: &QMonomial, e: i32) -> Result<()> {
        if self.is_zero() {
            return Ok(());
        }
        let s = m.scalar().pow(e as i64)?;
        self.mul_scalar(&s);
        if !self.is_zero() {
            self.monomial = self.monomial.mul(&m.vars.pow(e));
        }
        Ok(())
    }

    /// Multiplies by `(1 - m)^e`. A zero constant binomial zeroes a
    /// numerator and is a division by zero in a denominator.
    pub fn mul_binomial(&mut self, m: QMonomial, e: i32) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        if m.coeff.is_zero() {
            return Ok(());
        }
        match Binomial::orient(m) {
            Oriented::Constant(c) => {
                if c.is_zero() && e < 0 {
                    return Err(Error::DivisionByZero);
                }
                self.mul_scalar(&c.pow(e as i64)?);
            }
            Oriented::Factor { prefix, binomial } => {
                self.mul_qmonomial(&prefix, e)?;
                self.mul_oriented(binomial, e);
            }
        }
        Ok(())
    }

    /// Multiplies by an already-oriented binomial power.
    pub fn mul_factor(&mut self, b: Binomial, e: i32) {
        self.mul_oriented(b, e);
    }

    fn mul_oriented(&mut self, b: Binomial, e: i32) {
        if self.is_zero() {
            return;
        }
        let slot = self.factors.entry(b).or_insert(0);
        *slot = slot.checked_add(e).expect("factor exponent overflow");
        if *slot == 0 {
            self.factors.retain(|_, e| *e != 0);
        }
    }

    pub fn mul(&self, rhs: &FactoredForm) -> FactoredForm {
        if self.is_zero() || rhs.is_zero() {
            return FactoredForm::zero();
        }
        let mut out = self.clone();
        out.scalar = &out.scalar * &rhs.scalar;
        out.monomial = out.monomial.mul(&rhs.monomial);
        for (b, e) in rhs.factors() {
            out.mul_oriented(b.clone(), e);
        }
        out
    }

    pub fn inv(&self) -> Result<FactoredForm> {
        self.pow(-1)
    }

    pub fn pow(&self, e: i32) -> Result<FactoredForm> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if e == 0 {
            return Ok(FactoredForm::one());
        }
        Ok(FactoredForm {
            scalar: self.scalar.pow(e as i64)?,
            monomial: self.monomial.pow(e),
            factors: self
                .factors
                .iter()
                .map(|(b, &x)| {
                    (
                        b.clone(),
                        x.checked_mul(e).expect("factor exponent overflow"),
                    )
                })
                .collect(),
        })
    }

    /// Removes `(1 - m)^{-1}` from the denominator, i.e. multiplies by `1 - m`
    /// symbolically. Fails if that factor is not present.
    pub fn cancel_denominator(&mut self, m: QMonomial) -> Result<()> {
        if let Oriented::Factor { binomial, .. } = Binomial::orient(m.clone()) {
            if self.exponent_of(&binomial) < 0 {
                return self.mul_binomial(m, 1);
            }
        }
        Err(Error::UncancelledPole {
            factor: format!("1-{m}"),
        })
    }

    /// Degree as a rational function of `x_v`.
    pub fn degree_in_var(&self, v: usize) -> i64 {
        self.monomial.exp(v) as i64
            + self
                .factors()
                .map(|(b, e)| e as i64 * b.degree_in(v))
                .sum::<i64>()
    }

    /// Splits into the part involving `x_v` and the part free of it; the
    /// scalar goes with the free part.
    pub fn split_by_var(&self, v: usize) -> (FactoredForm, FactoredForm) {
        let (rest_mono, e) = self.monomial.without(v);
        let mut with = FactoredForm::monomial_form(QRat::one(), ExpVec::var_pow(v, e));
        let mut without = FactoredForm::monomial_form(self.scalar.clone(), rest_mono);
        for (b, x) in self.factors() {
            if b.involves(v) {
                with.mul_oriented(b.clone(), x);
            } else {
                without.mul_oriented(b.clone(), x);
            }
        }
        (with, without)
    }

    /// Exact expansion; only valid without denominator factors.
    pub fn expand_exact(&self) -> Result<LaurentPoly> {
        if self.has_denominators() {
            return Err(Error::NotPolynomial);
        }
        let mut acc = LaurentPoly::term(self.monomial.clone(), self.scalar.clone());
        for (b, e) in self.factors() {
            let lp = b.to_laurent();
            for _ in 0..e {
                acc = &acc * &lp;
            }
        }
        Ok(acc)
    }

    /// Applies a monomial substitution factor by factor. Denominator factors
    /// that collapse to zero are an error; numerator factors that collapse to
    /// zero make the whole form zero.
    pub fn substitute(&self, sub: &Substitution) -> Result<FactoredForm> {
        for (b, _) in self.denominator_factors() {
            let img = sub.apply_monomial(b.monomial());
            if img.vars.is_one() && QRat::one_minus(&img.coeff, img.qexp).is_zero() {
                return Err(Error::UncancelledPole {
                    factor: format!("{b} under {sub:?}"),
                });
            }
        }
        if self.is_zero() {
            return Ok(FactoredForm::zero());
        }
        let mut out = FactoredForm::constant(self.scalar.clone());
        out.mul_qmonomial(
            &sub.apply_monomial(&QMonomial::vars(self.monomial.clone())),
            1,
        )?;
        for (b, e) in self.factors() {
            out.mul_binomial(sub.apply_monomial(b.monomial()), e)?;
        }
        Ok(out)
    }
}

impl fmt::Display for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut wrote = false;
        let (num_mono, den_mono): (Vec<_>, Vec<_>) =
            self.monomial.iter().partition(|&(_, e)| e > 0);
        let num_mono = ExpVec::from_pairs(num_mono);
        let den_mono = ExpVec::from_pairs(den_mono).inv();
        if !self.scalar.is_one() || (num_mono.is_one() && self.numerator_factors().next().is_none())
        {
            if self.scalar.is_compound() {
                write!(f, "({})", self.scalar)?;
            } else {
                write!(f, "{}", self.scalar)?;
            }
            wrote = true;
        }
        let sep = |f: &mut fmt::Formatter<'_>, wrote: &mut bool| -> fmt::Result {
            if *wrote {
                f.write_str("*")?;
            }
            *wrote = true;
            Ok(())
        };
        if !num_mono.is_one() {
            sep(f, &mut wrote)?;
            write!(f, "{num_mono}")?;
        }
        for (b, e) in self.numerator_factors() {
            sep(f, &mut wrote)?;
            if e == 1 {
                write!(f, "({b})")?;
            } else {
                write!(f, "({b})^{e}")?;
            }
        }
        if !den_mono.is_one() {
            for (v, e) in den_mono.iter() {
                if e == 1 {
                    write!(f, "/x{v}")?;
                } else {
                    write!(f, "/x{v}^{e}")?;
                }
            }
        }
        for (b, e) in self.denominator_factors() {
            if e == -1 {
                write!(f, "/({b})")?;
            } else {
                write!(f, "/({b})^{}", -e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredForm({self})")
    }
}
