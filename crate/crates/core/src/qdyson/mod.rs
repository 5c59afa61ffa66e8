//! The q-Dyson constant term, its polynomial dependence on `q^b`, and a
//! mechanical replay of the vanishing argument.
//!
//! With `a = (a_1, ..., a_n)` fixed, `Q_a(q^b)` is the constant term of
//! `Π_j (x_0/x_j)_b (q x_j/x_0)_{a_j} Π_{i<j} (x_i/x_j)_{a_i} (q x_j/x_i)_{a_j}`,
//! read as a Laurent series in `x_0` when `b < 0`. The closed form is
//! `P_a(q^b) = (1-q^{b+1})...(1-q^{b+a}) / Π (q)_{a_i}`.

mod certificate;
mod proof;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

pub use certificate::{
    certify_main_lemma, certify_main_lemma_with, validate_certificate, Certificate,
    CertificateStats, CertifyOptions, Node, Status, CERTIFICATE_FORMAT, CERTIFICATE_VERSION,
};
pub use proof::{
    build_Qbrk, build_Qcal, check_composition, child_from_parent, path_weights, recurse_case_ii,
    substitute_E, substitute_T, zero_test_case_i, ProofPath,
};

use crate::ct::{ct_all_bruteforce_stats, ct_all_of_product, ct_all_times, ct_x0_core};
use crate::error::{Error, Result};
use crate::laurent::{qbinomial, qfactorial, qpochhammer, FactoredForm, LaurentPoly, QMonomial};
use crate::qfield::{BigRat, QRat};

/// `n`, `a_1..a_n`, their sum, and an optional exponent `b` of `q^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DysonParams {
    pub n: usize,
    pub a: Vec<u32>,
    pub asum: u32,
    pub b: Option<i64>,
}

impl DysonParams {
    pub fn new(a: Vec<u32>) -> Self {
        DysonParams {
            n: a.len(),
            asum: a.iter().sum(),
            a,
            b: None,
        }
    }

    pub fn with_b(mut self, b: i64) -> Self {
        self.b = Some(b);
        self
    }

    /// Reads `a` from signed input, rejecting negative entries.
    pub fn from_signed(a: &[i64]) -> Result<Self> {
        let a = a
            .iter()
            .map(|&x| {
                u32::try_from(x).map_err(|_| Error::Domain(format!("parameter {x} is negative")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DysonParams::new(a))
    }
}

/// The form whose constant term is `Q_a(q^b)`, for any integer `b`.
pub fn build_qa_integrand(a: &[u32], b: i64) -> Result<FactoredForm> {
    let mut f = FactoredForm::one();
    for (j, &aj) in a.iter().enumerate() {
        let j = j + 1;
        f = f.mul(&qpochhammer(&QMonomial::ratio(0, 0, j), b)?);
        f = f.mul(&qpochhammer(&QMonomial::ratio(1, j, 0), aj as i64)?);
    }
    Ok(f.mul(&pair_products(a, 1)?))
}

/// `Π_{i<j} (x_i/x_j)_{a_i} (q x_j/x_i)_{a_j}` with `a[0]` on `x_offset`.
fn pair_products(a: &[u32], offset: usize) -> Result<FactoredForm> {
    let mut f = FactoredForm::one();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (xi, xj) = (i + offset, j + offset);
            f = f.mul(&qpochhammer(&QMonomial::ratio(0, xi, xj), a[i] as i64)?);
            f = f.mul(&qpochhammer(&QMonomial::ratio(1, xj, xi), a[j] as i64)?);
        }
    }
    Ok(f)
}

/// The q-Dyson product on `x_0..x_n` with exponents `(a0, a_1, ..., a_n)`.
pub fn build_qdyson_lhs(a0: u32, a: &[u32]) -> FactoredForm {
    let mut all = vec![a0];
    all.extend_from_slice(a);
    pair_products(&all, 0).expect("numerator-only products cannot fail")
}

/// `(q)_{a_0+...+a_n} / Π (q)_{a_i}`.
pub fn rhs_qdyson(a0: u32, a: &[u32]) -> QRat {
    let total = a0 + a.iter().sum::<u32>();
    let den: QRat = std::iter::once(a0)
        .chain(a.iter().copied())
        .map(qfactorial)
        .product();
    qfactorial(total)
        .checked_div(&den)
        .expect("(q)_m is nonzero")
}

/// `P_a(q^b)`.
#[allow(non_snake_case)]
pub fn eval_Pa(a: &[u32], b: i64) -> QRat {
    let total: u32 = a.iter().sum();
    let num: QRat = (1..=total as i64)
        .map(|m| QRat::one_minus(&BigRat::one(), b + m))
        .product();
    let den: QRat = a.iter().copied().map(qfactorial).product();
    num.checked_div(&den).expect("(q)_m is nonzero")
}

/// `Q_a(q^b)` for any integer `b`.
#[allow(non_snake_case)]
pub fn eval_Qa(a: &[u32], b: i64) -> Result<QRat> {
    eval_Qa_stats(a, b).map(|(v, _)| v)
}

/// [`eval_Qa`] with the peak number of live terms.
///
/// `b >= 0` expands the Laurent polynomial exactly. `b < 0` expands the
/// `x_0`-part as a series in `x_0`, truncated at degree `a` (enough, since
/// the numerator's `x_0` degrees lie in `[-a, 0]`), takes its `x_0`-free
/// part, and finishes by brute force in `x_1..x_n`.
#[allow(non_snake_case)]
pub fn eval_Qa_stats(a: &[u32], b: i64) -> Result<(QRat, usize)> {
    let f = build_qa_integrand(a, b)?;
    if b >= 0 {
        return ct_all_bruteforce_stats(&f);
    }
    let total: u32 = a.iter().sum();
    let (with, without) = f.split_by_var(0);
    let inner = ct_x0_core(&with, total as i64)?;
    let peak = inner.len();
    let (v, p) = ct_all_times(inner, &without)?;
    Ok((v, p.max(peak)))
}

/// Result of fitting `Q_a(t)`, `t = q^b`, through `b = 0..a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationReport {
    pub a: Vec<u32>,
    pub values: Vec<QRat>,
    /// Coefficients of `t^0, ..., t^a` of the fitted polynomial.
    pub coefficients: Vec<QRat>,
    pub predicted: QRat,
    pub actual: QRat,
}

impl InterpolationReport {
    pub fn passed(&self) -> bool {
        self.predicted == self.actual
    }
}

/// Fits the polynomial of degree at most `a` in `t = q^b` through
/// `Q_a(q^0), ..., Q_a(q^a)` and compares its value at `t = q^{a+1}` with
/// `Q_a(q^{a+1})`.
#[allow(non_snake_case)]
pub fn interpolate_Qa_degree_check(a: &[u32]) -> Result<InterpolationReport> {
    let total: u32 = a.iter().sum();
    let values = (0..=total as i64 + 1)
        .map(|b| eval_Qa(a, b))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<QRat> = (0..=total as i64).map(QRat::q_pow).collect();
    let coefficients = interpolate(&xs, &values[..=total as usize])?;
    let t = QRat::q_pow(total as i64 + 1);
    let predicted = coefficients
        .iter()
        .rev()
        .fold(QRat::zero(), |acc, c| &(&acc * &t) + c);
    Ok(InterpolationReport {
        a: a.to_vec(),
        actual: values[total as usize + 1].clone(),
        values,
        coefficients,
        predicted,
    })
}

/// Coefficients, lowest degree first, of the polynomial through `(x_i, y_i)`.
pub fn interpolate(xs: &[QRat], ys: &[QRat]) -> Result<Vec<QRat>> {
    if xs.len() != ys.len() {
        return Err(Error::Shape(
            "interpolation needs as many values as nodes".into(),
        ));
    }
    let m = xs.len();
    let mut dd: Vec<QRat> = ys.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            let num = &dd[i] - &dd[i - 1];
            dd[i] = num.checked_div(&(&xs[i] - &xs[i - j]))?;
        }
    }
    // Newton form to monomial basis, innermost first
    let mut poly: Vec<QRat> = Vec::new();
    for i in (0..m).rev() {
        let mut next = vec![QRat::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = &next[d + 1] + c;
            next[d] = &next[d] - &(c * &xs[i]);
        }
        next[0] = &next[0] + &dd[i];
        poly = next;
    }
    while poly.len() > 1 && poly.last().is_some_and(QRat::is_zero) {
        poly.pop();
    }
    Ok(poly)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Replay,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "replay" => Ok(Method::Replay),
            "both" => Ok(Method::Both),
            other => Err(Error::Domain(format!("unknown method {other}"))),
        }
    }
}

/// Work done by a replay.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReplayStats {
    pub certificates: usize,
    pub nodes: usize,
    pub leaves: usize,
    pub degree_checks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDysonReport {
    pub a0: u32,
    pub a: Vec<u32>,
    pub rhs: QRat,
    pub brute: Option<QRat>,
    pub replay: Option<QRat>,
    pub replay_stats: Option<ReplayStats>,
}

impl QDysonReport {
    pub fn holds(&self) -> bool {
        [&self.brute, &self.replay]
            .into_iter()
            .flatten()
            .all(|v| *v == self.rhs)
    }

    /// A description of the first disagreement, if any.
    pub fn counterexample(&self) -> Option<String> {
        let params = format!("a0={} a={:?}", self.a0, self.a);
        for (name, v) in [("brute force", &self.brute), ("replay", &self.replay)] {
            if let Some(v) = v {
                if *v != self.rhs {
                    return Some(format!(
                        "{params}: {name} gives {v}, closed form gives {}",
                        self.rhs
                    ));
                }
            }
        }
        None
    }
}

impl fmt::Display for QDysonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.counterexample() {
            Some(c) => write!(f, "MISMATCH {c}"),
            None => write!(f, "LHS = RHS = {}", self.rhs),
        }
    }
}

/// Checks the q-Dyson identity at `(a0, a)`.
pub fn verify_qdyson(a0: u32, a: &[u32], method: Method) -> Result<QDysonReport> {
    let rhs = rhs_qdyson(a0, a);
    let brute = match method {
        Method::Brute | Method::Both => Some(ct_all_bruteforce_stats(&build_qdyson_lhs(a0, a))?.0),
        Method::Replay => None,
    };
    let (replay, replay_stats) = match method {
        Method::Replay | Method::Both => {
            let mut stats = ReplayStats::default();
            let mut all = vec![a0];
            all.extend_from_slice(a);
            (Some(replay(&all, &mut stats)?), Some(stats))
        }
        Method::Brute => (None, None),
    };
    Ok(QDysonReport {
        a0,
        a: a.to_vec(),
        rhs,
        brute,
        replay,
        replay_stats,
    })
}

/// Constant term of `(x_0/x_1)_l (q x_1/x_0)_m` from the q-binomial theorem:
/// rewrite as `q^{C(m+1,2)} (-x_1/x_0)^m (x_0 q^{-m}/x_1)_{l+m}` and read off
/// the `u^m` coefficient `q^{C(m,2)} [l+m, m] (-1)^m q^{-m^2}` of `(u)_{l+m}`.
pub fn two_variable_ct(l: u32, m: u32) -> QRat {
    let (l, m) = (l as i64, m as i64);
    let pref = QRat::q_pow(m * (m + 1) / 2);
    let coeff = &QRat::q_pow(m * (m - 1) / 2 - m * m) * &qbinomial(l + m, m).expect("m >= 0");
    // the two signs (-1)^m cancel
    &pref * &coeff
}

/// Value of the q-Dyson constant term for exponents `all`, re-derived the way
/// the induction does: the `a_0 = 0` case is the same problem on one
/// variable fewer; `Q_a` has degree at most `a` in `q^{a_0}` and vanishes at
/// `q^{-1}, ..., q^{-a}`, which pins it down up to the value at `a_0 = 0`.
fn replay(all: &[u32], stats: &mut ReplayStats) -> Result<QRat> {
    if all.len() <= 1 {
        return Ok(QRat::one());
    }
    let (a0, rest) = (all[0], &all[1..]);
    let v0 = replay(rest, stats)?;
    let total: u32 = rest.iter().sum();
    let value = if total == 0 {
        v0
    } else {
        let interp = interpolate_Qa_degree_check(rest)?;
        stats.degree_checks += 1;
        if !interp.passed() {
            return Err(Error::ProofInvariant(format!(
                "Q_a for a={rest:?} is not of degree <= {total} in q^b"
            )));
        }
        if interp.values[0] != v0 {
            return Err(Error::ProofInvariant(format!(
                "Q_a(1) for a={rest:?} is {}, the smaller case gives {v0}",
                interp.values[0]
            )));
        }
        for b in 1..=total {
            let cert = certify_main_lemma(rest, b)?;
            let st = validate_certificate(&cert)?;
            stats.certificates += 1;
            stats.nodes += st.nodes;
            stats.leaves += st.leaves;
        }
        // C Π_{i=1..a} (1 - q^i t) with C fixed by t = 1, evaluated at t = q^{a0}
        let shift: QRat = (1..=total as i64)
            .map(|i| QRat::one_minus(&BigRat::one(), i + a0 as i64))
            .product();
        let at_one: QRat = (1..=total as i64)
            .map(|i| QRat::one_minus(&BigRat::one(), i))
            .product();
        (&v0 * &shift).checked_div(&at_one)?
    };
    if rest.len() == 1 && value != two_variable_ct(a0, rest[0]) {
        return Err(Error::ProofInvariant(format!(
            "two-variable case ({a0}, {}) disagrees with the q-binomial theorem",
            rest[0]
        )));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DysonQ1Report {
    pub all: Vec<u32>,
    pub lhs: BigRat,
    pub multinomial: BigInt,
    pub specialized: BigRat,
}

impl DysonQ1Report {
    pub fn holds(&self) -> bool {
        let m = BigRat::from_integer(self.multinomial.clone());
        self.lhs == m && self.specialized == m
    }
}

/// `(a_0+...+a_n)! / (a_0! ... a_n!)`.
pub fn multinomial(all: &[u32]) -> BigInt {
    let fact = |n: u32| (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let total: u32 = all.iter().sum();
    all.iter().fold(fact(total), |acc, &x| acc / fact(x))
}

/// The classical Dyson constant term: expands `Π_{i≠j} (1 - x_i/x_j)^{a_j}`
/// with rational coefficients and compares with the multinomial coefficient.
/// Also specializes the q-closed form at `q = 1`.
pub fn verify_dyson_q1(a0: u32, a: &[u32]) -> Result<DysonQ1Report> {
    let mut all = vec![a0];
    all.extend_from_slice(a);
    let mut parts = Vec::new();
    for i in 0..all.len() {
        for (j, &aj) in all.iter().enumerate() {
            if i != j {
                let f = LaurentPoly::one_minus(&QMonomial::ratio(0, i, j));
                parts.extend((0..aj).map(|_| f.clone()));
            }
        }
    }
    let (ct, _) = ct_all_of_product(parts);
    let lhs = ct
        .as_constant()
        .ok_or_else(|| Error::ProofInvariant(format!("q-free product gave {ct}")))?;
    let specialized = rhs_qdyson(a0, a).specialize(&BigRat::one())?;
    Ok(DysonQ1Report {
        all: all.clone(),
        lhs,
        multinomial: multinomial(&all),
        specialized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QPoly;

    fn poly(c: &[i64]) -> QRat {
        QRat::from_poly(QPoly::from_ints(c))
    }

    #[test]
    fn lhs_shapes() {
        let f = build_qdyson_lhs(1, &[1]);
        let mut want = FactoredForm::binomial(QMonomial::ratio(0, 0, 1), 1).unwrap();
        want.mul_binomial(QMonomial::ratio(1, 1, 0), 1).unwrap();
        assert_eq!(f, want);
        assert_eq!(build_qdyson_lhs(0, &[0, 0]), FactoredForm::one());
        assert_eq!(build_qdyson_lhs(2, &[1]).factor_count(), 3);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(rhs_qdyson(1, &[1]), poly(&[1, 1]));
        assert_eq!(rhs_qdyson(1, &[1, 1]), &poly(&[1, 1]) * &poly(&[1, 1, 1]));
        assert!(rhs_qdyson(0, &[3, 0]).is_one());
        assert!(eval_Pa(&[1], 0).is_one());
        assert!(eval_Pa(&[1], -1).is_zero());
        assert_eq!(eval_Pa(&[1, 1], 1), &poly(&[1, 1, 1]) * &poly(&[1, 1]));
    }

    #[test]
    fn qa_values() {
        assert_eq!(eval_Qa(&[1], 1).unwrap(), poly(&[1, 1]));
        assert!(eval_Qa(&[1], 0).unwrap().is_one());
        assert!(eval_Qa(&[1], -1).unwrap().is_zero());
        assert!(eval_Qa(&[1, 1], -2).unwrap().is_zero());
        assert!(!eval_Qa(&[1, 1], -3).unwrap().is_zero());
        assert_eq!(eval_Qa(&[1, 1], -3).unwrap(), eval_Pa(&[1, 1], -3));
    }

    #[test]
    fn brute_examples() {
        let r = verify_qdyson(1, &[1, 1], Method::Brute).unwrap();
        assert_eq!(r.brute, Some(&poly(&[1, 1]) * &poly(&[1, 1, 1])));
        assert!(r.holds());
        assert!(verify_qdyson(0, &[0, 0], Method::Brute).unwrap().holds());
        assert_eq!(
            verify_qdyson(2, &[1], Method::Brute).unwrap().rhs,
            poly(&[1, 1, 1])
        );
    }

    #[test]
    fn replay_matches() {
        for (a0, a) in [
            (1u32, vec![1u32]),
            (2, vec![1]),
            (0, vec![2, 1]),
            (2, vec![1, 1]),
        ] {
            let r = verify_qdyson(a0, &a, Method::Both).unwrap();
            assert!(r.holds(), "{r}");
        }
        let st = verify_qdyson(1, &[1, 1], Method::Replay)
            .unwrap()
            .replay_stats
            .unwrap();
        assert_eq!(st.certificates, 2 + 1);
    }

    #[test]
    fn interpolation() {
        let r = interpolate_Qa_degree_check(&[1]).unwrap();
        assert!(r.passed());
        // (1 - q t)/(1 - q)
        let c = QRat::one_minus(&BigRat::one(), 1).inv().unwrap();
        assert_eq!(r.coefficients, vec![c.clone(), -(&c * &QRat::q())]);
        assert_eq!(r.predicted, poly(&[1, 1, 1]));
        let r = interpolate_Qa_degree_check(&[]).unwrap();
        assert!(r.passed());
        assert_eq!(r.coefficients, vec![QRat::one()]);
        assert!(interpolate_Qa_degree_check(&[1, 1]).unwrap().passed());
    }

    #[test]
    fn two_variable_formula() {
        for l in 0..4 {
            for m in 0..4 {
                assert_eq!(two_variable_ct(l, m), rhs_qdyson(l, &[m]), "l={l} m={m}");
            }
        }
    }

    #[test]
    fn classical_dyson() {
        let r = verify_dyson_q1(1, &[1, 1]).unwrap();
        assert_eq!(r.lhs, BigRat::from_integer(6.into()));
        assert!(r.holds());
        assert_eq!(multinomial(&[2, 1]), BigInt::from(3));
        assert!(verify_dyson_q1(0, &[0, 0]).unwrap().holds());
        assert!(verify_dyson_q1(2, &[1]).unwrap().holds());
    }

    #[test]
    fn negative_parameters_are_rejected() {
        assert!(DysonParams::from_signed(&[1, -1]).is_err());
        let p = DysonParams::from_signed(&[1, 2]).unwrap().with_b(3);
        assert_eq!((p.n, p.asum, p.b), (2, 3, Some(3)));
    }
}
