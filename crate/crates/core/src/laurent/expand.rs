//! Truncated series expansion in the iterated Laurent series field.
//!
//! A [`Grading`] assigns an integer weight to each variable. Every
//! denominator `1 - M` (stored with `M` small) must have positive weight, so
//! `1/(1 - M) = Σ M^l` has increasing weight and only finitely many terms
//! fall under any weight bound. Each part of the product records the lowest
//! weight it can contribute; a partial product term is dropped as soon as
//! even the lightest completion would exceed the bound. Every term of weight
//! at most the bound is therefore exact.

use num_bigint::BigInt;
use num_integer::binomial;

use super::{ExpVec, FactoredForm, LaurentPoly, QMonomial};
use crate::error::{Error, Result};
use crate::qfield::{BigRat, QRat};

/// Linear weight on exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    weights: Vec<i64>,
}

impl Grading {
    pub fn new(weights: Vec<i64>) -> Self {
        Grading { weights }
    }

    /// Degree in the single variable `x_v`.
    pub fn var(v: usize) -> Self {
        let mut weights = vec![0; v + 1];
        weights[v] = 1;
        Grading { weights }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn grade(&self, m: &ExpVec) -> i64 {
        m.grade(&self.weights)
    }

    /// Picks weights under which every denominator monomial of every form is
    /// positive. Tries `w_i = V - i` first, then `c^(V-1-i)` for growing `c`;
    /// the latter always succeeds once `c` exceeds the largest exponent by 2.
    pub fn for_forms<'a>(forms: impl IntoIterator<Item = &'a FactoredForm>) -> Result<Grading> {
        let forms: Vec<&FactoredForm> = forms.into_iter().collect();
        let dens: Vec<&ExpVec> = forms
            .iter()
            .flat_map(|f| f.denominator_factors().map(|(b, _)| b.vars()))
            .collect();
        let nvars = forms
            .iter()
            .filter_map(|f| f.max_var())
            .max()
            .map_or(1, |v| v + 1);
        let max_exp = dens
            .iter()
            .flat_map(|m| m.iter().map(|(_, e)| e.unsigned_abs() as i64))
            .max()
            .unwrap_or(1);
        let ok = |g: &Grading| dens.iter().all(|m| g.grade(m) > 0);
        let linear = Grading::new((0..nvars).map(|i| (nvars - i) as i64).collect());
        if ok(&linear) {
            return Ok(linear);
        }
        for base in 2..=(max_exp + 2) {
            let weights = (0..nvars)
                .map(|i| {
                    base.checked_pow((nvars - 1 - i) as u32)
                        .ok_or_else(|| Error::Precondition("grading weights overflow".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let g = Grading::new(weights);
            if ok(&g) {
                return Ok(g);
            }
        }
        Err(Error::NotExpandable {
            factor: "no positive grading found".into(),
        })
    }
}

enum Part {
    Poly(LaurentPoly),
    /// `1/(1 - ratio)^power` with `ratio` of positive weight.
    Series {
        ratio: QMonomial,
        weight: i64,
        power: u32,
    },
}

impl Part {
    fn min_grade(&self, g: &Grading) -> i64 {
        match self {
            Part::Poly(p) => p.min_grade(g.weights()).unwrap_or(0),
            Part::Series { .. } => 0,
        }
    }
}

/// Expands `f` keeping every term of weight at most `max`, exactly.
pub fn expand_graded(f: &FactoredForm, g: &Grading, max: i64) -> Result<LaurentPoly> {
    if f.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let mut parts = vec![Part::Poly(LaurentPoly::term(
        f.monomial().clone(),
        f.scalar().clone(),
    ))];
    for (b, e) in f.factors() {
        if e > 0 {
            let lp = b.to_laurent();
            parts.extend((0..e).map(|_| Part::Poly(lp.clone())));
        } else {
            let weight = g.grade(b.vars());
            if weight <= 0 {
                return Err(Error::NotExpandable {
                    factor: b.to_string(),
                });
            }
            parts.push(Part::Series {
                ratio: b.monomial().clone(),
                weight,
                power: e.unsigned_abs(),
            });
        }
    }
    Ok(graded_product(parts, g, max))
}

/// [`expand_graded`] with the degree in a single variable as the weight.
pub fn expand_factored(f: &FactoredForm, var: usize, max_degree: i64) -> Result<LaurentPoly> {
    expand_graded(f, &Grading::var(var), max_degree)
}

fn graded_product(parts: Vec<Part>, g: &Grading, max: i64) -> LaurentPoly {
    let mut rest_min: Vec<i64> = parts.iter().map(|p| p.min_grade(g)).collect();
    // suffix sums: minimum weight still to come after part i
    let mut acc_min = 0;
    for slot in rest_min.iter_mut().rev() {
        let here = *slot;
        *slot = acc_min;
        acc_min += here;
    }

    let mut acc = LaurentPoly::one();
    for (part, rest) in parts.into_iter().zip(rest_min) {
        let budget = max - rest;
        acc = match part {
            Part::Poly(p) => acc.mul_filtered(&p, |m| g.grade(m) <= budget),
            Part::Series {
                ratio,
                weight,
                power,
            } => {
                let mut out = LaurentPoly::zero();
                let Some(lowest) = acc.min_grade(g.weights()) else {
                    return LaurentPoly::zero();
                };
                if lowest > budget {
                    return LaurentPoly::zero();
                }
                let steps = ((budget - lowest) / weight) as u32;
                let ratio_scalar = ratio.scalar();
                let mut powers = Vec::with_capacity(steps as usize + 1);
                let (mut mono, mut coeff) = (ExpVec::one(), QRat::one());
                for l in 0..=steps {
                    let mult: BigInt =
                        binomial(BigInt::from(l + power - 1), BigInt::from(power - 1));
                    powers.push((
                        mono.clone(),
                        &coeff * &QRat::from_rat(BigRat::from_integer(mult)),
                    ));
                    mono = mono.mul(&ratio.vars);
                    coeff = &coeff * &ratio_scalar;
                }
                for (m, c) in acc.terms() {
                    let start = g.grade(m);
                    for (l, (pm, pc)) in powers.iter().enumerate() {
                        if start + l as i64 * weight > budget {
                            break;
                        }
                        out.add_term(m.mul(pm), c * pc);
                    }
                }
                out
            }
        };
        if acc.is_zero() {
            break;
        }
    }
    acc.retain(|m| g.grade(m) <= max);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(s: i64, i: usize, j: usize) -> QMonomial {
        QMonomial::ratio(s, i, j)
    }

    #[test]
    fn small_denominator_expands_forward() {
        // 1/(1 - q x0/x1) = 1 + q x0/x1 + q^2 x0^2/x1^2 + ...
        let f = FactoredForm::binomial(qm(1, 0, 1), -1).unwrap();
        let got = expand_factored(&f, 0, 2).unwrap();
        let want: LaurentPoly = (0..=2)
            .map(|l| (ExpVec::ratio(0, 1).pow(l), QRat::q_pow(l as i64)))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn large_denominator_uses_the_reversed_series() {
        // 1/(1 - q x1/x0) = -q^-1 x0/x1 - q^-2 x0^2/x1^2 - ...
        let f = FactoredForm::binomial(qm(1, 1, 0), -1).unwrap();
        let got = expand_factored(&f, 0, 2).unwrap();
        let want: LaurentPoly = (1..=2)
            .map(|l| (ExpVec::ratio(0, 1).pow(l), -QRat::q_pow(-(l as i64))))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn numerator_is_truncated_too() {
        let f = FactoredForm::binomial(qm(0, 0, 1), 1).unwrap();
        assert_eq!(expand_factored(&f, 0, 0).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn factor_free_of_truncation_variable_is_rejected() {
        let f = FactoredForm::binomial(qm(0, 1, 2), -1).unwrap();
        assert!(matches!(
            expand_factored(&f, 0, 3),
            Err(Error::NotExpandable { .. })
        ));
    }

    #[test]
    fn repeated_denominators_use_binomial_multiplicities() {
        // 1/(1-x0)^2 = Σ (l+1) x0^l
        let f = FactoredForm::binomial(QMonomial::var(0), -2).unwrap();
        let got = expand_factored(&f, 0, 3).unwrap();
        for l in 0..=3 {
            assert_eq!(
                got.coeff(&ExpVec::var_pow(0, l)),
                QRat::from_int(l as i64 + 1)
            );
        }
    }

    #[test]
    fn negative_numerator_weights_extend_the_budget() {
        // x0^-2 / (1 - x0): terms x0^-2 .. x0^1 under max 1
        let mut f = FactoredForm::binomial(QMonomial::var(0), -1).unwrap();
        f.mul_qmonomial(&QMonomial::vars(ExpVec::var_pow(0, -2)), 1)
            .unwrap();
        let got = expand_factored(&f, 0, 1).unwrap();
        assert_eq!(got.len(), 4);
        assert!(got.coeff(&ExpVec::var(0)).is_one());
    }
}
