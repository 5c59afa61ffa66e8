//! Constant-term operators.
//!
//! Two independent routes are provided. The brute-force route expands into
//! Laurent polynomials (truncated series when denominators are present) and
//! picks out the terms free of a variable. The partial-fraction route works
//! on [`FactoredForm`]s: for a rational function proper in `x_k` with simple
//! poles `x_k = α_j`, the constant term in `x_k` is the sum of the residue
//! evaluations `(R (1 - x_k/α_j))|_{x_k = α_j}` over the poles for which
//! `x_k/α_j` is small. The polynomial part `p_0(x_k)/x_k^d` of the
//! decomposition has no constant term and is never built.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::laurent::{
    expand_factored, expand_graded, ExpVec, FactoredForm, Grading, LaurentPoly, QMonomial,
    Substitution,
};
use crate::qfield::{BigRat, QRat};

/// Terms of `f` free of `x_v`.
pub fn ct_var_bruteforce(f: &LaurentPoly, v: usize) -> LaurentPoly {
    f.ct_var(v)
}

/// Constant term in all variables of a form without denominator factors.
pub fn ct_all_bruteforce(f: &FactoredForm) -> Result<QRat> {
    ct_all_bruteforce_stats(f).map(|(c, _)| c)
}

/// As [`ct_all_bruteforce`], also reporting the peak number of live terms.
pub fn ct_all_bruteforce_stats(f: &FactoredForm) -> Result<(QRat, usize)> {
    ct_all_times(LaurentPoly::one(), f)
}

/// Constant term in all variables of `p * f`, where `f` has no
/// denominator factors. Also reports the peak number of live terms.
pub fn ct_all_times(p: LaurentPoly, f: &FactoredForm) -> Result<(QRat, usize)> {
    if f.has_denominators() {
        return Err(Error::NotPolynomial);
    }
    if f.is_zero() || p.is_zero() {
        return Ok((QRat::zero(), 0));
    }
    let mut parts = vec![
        p,
        LaurentPoly::term(f.monomial().clone(), f.scalar().clone()),
    ];
    for (b, e) in f.factors() {
        let lp = b.to_laurent();
        parts.extend((0..e).map(|_| lp.clone()));
    }
    Ok(ct_all_of_product(parts))
}

/// Constant term of a product of Laurent polynomials, multiplying left to
/// right and discarding partial terms whose exponent in some variable can no
/// longer be brought back to zero by the remaining factors.
pub fn ct_all_of_product(parts: Vec<LaurentPoly>) -> (QRat, usize) {
    let nvars = parts
        .iter()
        .filter_map(LaurentPoly::max_var)
        .max()
        .map_or(0, |v| v + 1);
    // rest[i][v] = (min, max) total exponent of x_v over parts after i
    let mut rest = vec![vec![(0i64, 0i64); nvars]; parts.len()];
    let mut run = vec![(0i64, 0i64); nvars];
    for (i, p) in parts.iter().enumerate().rev() {
        rest[i] = run.clone();
        for (v, slot) in run.iter_mut().enumerate() {
            if let Some((lo, hi)) = p.exp_range(v) {
                slot.0 += lo as i64;
                slot.1 += hi as i64;
            }
        }
    }
    let mut acc = LaurentPoly::one();
    let mut peak = 1;
    for (p, bounds) in parts.iter().zip(&rest) {
        acc = acc.mul_filtered(p, |m| {
            m.iter().all(|(v, e)| {
                let (lo, hi) = bounds[v];
                e as i64 + hi >= 0 && e as i64 + lo <= 0
            })
        });
        peak = peak.max(acc.len());
        if acc.is_zero() {
            break;
        }
    }
    (acc.constant_term(), peak)
}

/// Constant term in all variables of any form, through its iterated Laurent
/// series expansion. Exact: the constant monomial has weight zero under the
/// chosen grading, and every term of weight at most zero is kept exactly.
pub fn ct_all_series(f: &FactoredForm) -> Result<QRat> {
    if !f.has_denominators() {
        return ct_all_bruteforce(f);
    }
    let g = Grading::for_forms([f])?;
    Ok(expand_graded(f, &g, 0)?.constant_term())
}

/// Constant term in `x_v` of the expansion of `f`, exact for every term of
/// weight at most `bound` under `g`.
pub fn ct_var_series(f: &FactoredForm, v: usize, g: &Grading, bound: i64) -> Result<LaurentPoly> {
    Ok(expand_graded(f, g, bound)?.ct_var(v))
}

/// Constant term in `x_0` of the series expansion of `f`, treating `f` as a
/// Laurent series in `x_0`. Every denominator factor must involve `x_0`.
///
/// Factors free of `x_0` are pulled out before expanding. The expansion
/// prunes against the numerator's actual `x_0` range, so any `bound >= 0`
/// is exact.
pub fn ct_x0_truncated(f: &FactoredForm, bound: i64) -> Result<LaurentPoly> {
    let (with, without) = f.split_by_var(0);
    let inner = ct_x0_core(&with, bound)?;
    Ok(&inner
        * &without
            .expand_exact()
            .map_err(|_| not_x0_expandable(&without))?)
}

pub(crate) fn ct_x0_core(with_x0: &FactoredForm, bound: i64) -> Result<LaurentPoly> {
    Ok(expand_factored(with_x0, 0, bound)?.ct_var(0))
}

fn not_x0_expandable(f: &FactoredForm) -> Error {
    Error::NotExpandable {
        factor: f
            .denominator_factors()
            .next()
            .map_or_else(|| f.to_string(), |(b, _)| b.to_string()),
    }
}

/// A pole `α = c q^s x_t` of a rational function in `x_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alpha {
    pub var: usize,
    pub qexp: i64,
    pub coeff: BigRat,
}

impl Alpha {
    fn monomial(&self) -> QMonomial {
        QMonomial::new(self.coeff.clone(), self.qexp, ExpVec::var(self.var))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.monomial())
    }
}

/// `rest / Π (1 - x_k/α_i)` with `rest` free of poles in `x_k`, proper in
/// `x_k` and with distinct `α_i`.
#[derive(Clone, Debug)]
pub struct ProperRat {
    var: usize,
    rest: FactoredForm,
    poles: Vec<Alpha>,
    degree: i64,
}

impl ProperRat {
    /// Extracts the poles in `x_k` from `f`, checking properness and the
    /// shape and distinctness of every pole.
    pub fn new(f: &FactoredForm, k: usize) -> Result<ProperRat> {
        let degree = f.degree_in_var(k);
        if degree >= 0 {
            return Err(Error::NotProper { var: k, degree });
        }
        let mut rest = f.clone();
        let mut poles: Vec<Alpha> = Vec::new();
        for (b, e) in f.denominator_factors().filter(|(b, _)| b.involves(k)) {
            let m = b.monomial();
            if e != -1 {
                return Err(Error::DistinctPoles {
                    pole: format!("({b})^{}", -e),
                });
            }
            let (i, j) = m.vars.as_ratio().ok_or_else(|| {
                Error::Shape(format!("pole factor {b} is not of the form 1 - x_{k}/α"))
            })?;
            rest.mul_factor(b.clone(), 1);
            let alpha = if i == k {
                // 1 - c q^s x_k/x_t = 1 - x_k/α with α = x_t q^-s / c
                Alpha {
                    var: j,
                    qexp: -m.qexp,
                    coeff: m.coeff.recip(),
                }
            } else {
                // 1 - c q^s x_t/x_k = -(c q^s x_t/x_k)(1 - x_k/α) with α = c q^s x_t
                let prefix = m.clone().scaled(&-BigRat::one());
                rest.mul_qmonomial(&prefix, -1)?;
                Alpha {
                    var: i,
                    qexp: m.qexp,
                    coeff: m.coeff.clone(),
                }
            };
            if poles.contains(&alpha) {
                return Err(Error::DistinctPoles {
                    pole: alpha.to_string(),
                });
            }
            poles.push(alpha);
        }
        Ok(ProperRat {
            var: k,
            rest,
            poles,
            degree,
        })
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn poles(&self) -> &[Alpha] {
        &self.poles
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `x_k / α` is small exactly when `k < t`.
    pub fn is_small_pole(&self, a: &Alpha) -> bool {
        self.var < a.var
    }

    /// Reassembles the rational function.
    pub fn to_form(&self) -> Result<FactoredForm> {
        let mut f = self.rest.clone();
        for a in &self.poles {
            f.mul_binomial(QMonomial::var(self.var).mul(&a.monomial().inv()), -1)?;
        }
        Ok(f)
    }
}

/// Constant term in `x_k` by partial fractions: one summand per small pole.
pub fn ct_partial_fraction(r: &ProperRat) -> Result<Vec<FactoredForm>> {
    let mut out = Vec::new();
    for (j, aj) in r.poles.iter().enumerate() {
        if !r.is_small_pole(aj) {
            continue;
        }
        let sub = Substitution::identity().with(r.var, aj.monomial());
        let mut term = r.rest.substitute(&sub)?;
        for (i, ai) in r.poles.iter().enumerate() {
            if i != j {
                term.mul_binomial(aj.monomial().mul(&ai.monomial().inv()), -1)?;
            }
        }
        if !term.is_zero() {
            out.push(term);
        }
    }
    Ok(out)
}

/// Constant term in `x_v` of a form, kept as a sum of forms.
///
/// Without poles in `x_v` the `x_v`-dependent part is a Laurent polynomial
/// and its constant term is read off directly; otherwise the form must be
/// proper in `x_v` and [`ct_partial_fraction`] applies.
pub fn ct_var_factored(f: &FactoredForm, v: usize) -> Result<Vec<FactoredForm>> {
    if f.is_zero() {
        return Ok(Vec::new());
    }
    if !f.involves(v) {
        return Ok(vec![f.clone()]);
    }
    let has_pole = f.denominator_factors().any(|(b, _)| b.involves(v));
    if !has_pole {
        let (with, without) = f.split_by_var(v);
        let poly = with.expand_exact()?.ct_var(v);
        return Ok(poly
            .into_terms()
            .map(|(m, c)| {
                let mut t = FactoredForm::monomial_form(c, m);
                t = t.mul(&without);
                t
            })
            .filter(|t| !t.is_zero())
            .collect());
    }
    ct_partial_fraction(&ProperRat::new(f, v)?)
}

/// Constant term in all variables by repeated [`ct_var_factored`], in the
/// order `x_0, x_1, ...`.
pub fn ct_all_factored(f: &FactoredForm) -> Result<QRat> {
    let mut terms = vec![f.clone()];
    let top = f.max_var().unwrap_or(0);
    for v in 0..=top {
        let mut next = Vec::new();
        for t in &terms {
            next.extend(ct_var_factored(t, v)?);
        }
        terms = next;
    }
    terms
        .iter()
        .map(|t| {
            if t.is_constant() {
                Ok(t.scalar().clone())
            } else {
                Err(Error::Precondition(format!("left a non-constant term {t}")))
            }
        })
        .sum()
}

/// Outcome of comparing the partial-fraction route with series expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleComparison {
    pub summands: usize,
    pub weight_bound: i64,
    /// `CT_{x_k}` agrees on every term up to the weight bound.
    pub var_agrees: bool,
    /// The constant terms in all variables agree.
    pub all_agrees: bool,
}

/// Computes `CT_{x_k} f` both by [`ct_partial_fraction`] and from a truncated
/// series expansion of `f`, expanding everything under one grading.
pub fn compare_pfrac_with_series(f: &FactoredForm, k: usize) -> Result<OracleComparison> {
    let summands = ct_partial_fraction(&ProperRat::new(f, k)?)?;
    let g = Grading::for_forms(std::iter::once(f).chain(summands.iter()))?;
    let weight_bound = 2 * g.weights().iter().copied().max().unwrap_or(1);
    let series = ct_var_series(f, k, &g, weight_bound)?;
    let mut pf = LaurentPoly::zero();
    for s in &summands {
        pf = &pf + &expand_graded(s, &g, weight_bound)?;
    }
    let mut all_pf = QRat::zero();
    for s in &summands {
        all_pf = &all_pf + &ct_all_series(s)?;
    }
    Ok(OracleComparison {
        summands: summands.len(),
        weight_bound,
        var_agrees: series == pf,
        all_agrees: ct_all_series(f)? == all_pf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QPoly;

    fn qm(s: i64, i: usize, j: usize) -> QMonomial {
        QMonomial::ratio(s, i, j)
    }

    #[test]
    fn bruteforce_picks_free_terms() {
        let f = FactoredForm::binomial(qm(0, 0, 1), 1)
            .unwrap()
            .mul(&FactoredForm::binomial(qm(1, 1, 0), 1).unwrap());
        let lp = f.expand_exact().unwrap();
        assert_eq!(
            ct_var_bruteforce(&lp, 0),
            LaurentPoly::constant(QRat::from_poly(QPoly::from_ints(&[1, 1])))
        );
        let c = LaurentPoly::constant(QRat::from_int(7));
        assert_eq!(ct_var_bruteforce(&c, 0), c);
        assert!(
            ct_var_bruteforce(&LaurentPoly::term(ExpVec::ratio(1, 2), QRat::one()), 1).is_zero()
        );
    }

    #[test]
    fn bruteforce_rejects_denominators() {
        let f = FactoredForm::binomial(qm(0, 0, 1), -1).unwrap();
        assert_eq!(ct_all_bruteforce(&f), Err(Error::NotPolynomial));
        assert!(ct_all_bruteforce(&FactoredForm::one()).unwrap().is_one());
    }

    #[test]
    fn two_poles_split_into_complementary_terms() {
        // 1/((1 - x0/x1)(1 - x0/(q x2))) in x0
        let mut f = FactoredForm::binomial(qm(0, 0, 1), -1).unwrap();
        f.mul_binomial(qm(-1, 0, 2), -1).unwrap();
        let r = ProperRat::new(&f, 0).unwrap();
        let parts = ct_partial_fraction(&r).unwrap();
        let want = [
            FactoredForm::binomial(qm(-1, 1, 2), -1).unwrap(),
            FactoredForm::binomial(qm(1, 2, 1), -1).unwrap(),
        ];
        assert_eq!(parts, want);
        // 1/(1-u) + 1/(1-1/u) = 1
        let g = Grading::for_forms(parts.iter()).unwrap();
        let sum = parts
            .iter()
            .map(|p| expand_graded(p, &g, 6).unwrap())
            .fold(LaurentPoly::zero(), |a, b| &a + &b);
        assert_eq!(sum, LaurentPoly::one());
    }

    #[test]
    fn single_pole_examples() {
        let f = FactoredForm::binomial(qm(0, 0, 1), -1).unwrap();
        let parts = ct_partial_fraction(&ProperRat::new(&f, 0).unwrap()).unwrap();
        assert_eq!(parts, vec![FactoredForm::one()]);
        // 1/(1 - x1/(q x0)) in x1: x1/α with α = q x0 is large
        let g = FactoredForm::binomial(qm(-1, 1, 0), -1).unwrap();
        let parts = ct_partial_fraction(&ProperRat::new(&g, 1).unwrap()).unwrap();
        assert!(parts.is_empty());
    }

    #[test]
    fn improper_and_repeated_inputs_are_rejected() {
        let f = FactoredForm::binomial(qm(0, 0, 1), 1).unwrap();
        assert_eq!(
            ProperRat::new(&f, 0).unwrap_err(),
            Error::NotProper { var: 0, degree: 1 }
        );
        let g = FactoredForm::binomial(qm(0, 0, 1), -2).unwrap();
        assert!(matches!(
            ProperRat::new(&g, 0),
            Err(Error::DistinctPoles { .. })
        ));
    }

    #[test]
    fn x0_series_oracle_small_case() {
        // (x0/x1)_{-1} (q x1/x0)_1 = (1 - q x1/x0)/(1 - x0/(q x1)): CT is 0
        let mut f = FactoredForm::binomial(qm(-1, 0, 1), -1).unwrap();
        f.mul_binomial(qm(1, 1, 0), 1).unwrap();
        let ct0 = ct_x0_truncated(&f, 1).unwrap();
        assert!(ct0.ct_var(1).is_zero());
        assert!(ct_all_series(&f).unwrap().is_zero());
        assert!(ct_all_factored(&f).unwrap().is_zero());
    }

    #[test]
    fn truncation_is_inert_without_denominators() {
        let f = FactoredForm::binomial(qm(0, 0, 1), 1)
            .unwrap()
            .mul(&FactoredForm::binomial(qm(1, 1, 0), 1).unwrap());
        assert_eq!(
            ct_x0_truncated(&f, 3).unwrap(),
            f.expand_exact().unwrap().ct_var(0)
        );
    }

    #[test]
    fn constant_term_of_a_single_geometric_factor() {
        // CT_{x_i} 1/(1 - q^k x_i/x_j) is 1 if i < j and 0 if i > j
        for k in -3..=3 {
            for (i, j, want) in [(0, 1, 1), (1, 0, 0), (1, 3, 1), (2, 1, 0)] {
                let f = FactoredForm::binomial(qm(k, i, j), -1).unwrap();
                let pf: QRat = ct_partial_fraction(&ProperRat::new(&f, i).unwrap())
                    .unwrap()
                    .iter()
                    .map(|t| t.scalar().clone())
                    .sum();
                assert_eq!(pf, QRat::from_int(want), "k={k} i={i} j={j}");
                let g = Grading::for_forms([&f]).unwrap();
                let brute = ct_var_series(&f, i, &g, 4).unwrap();
                assert_eq!(brute, LaurentPoly::constant(QRat::from_int(want)));
            }
        }
    }
}
