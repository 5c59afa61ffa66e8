//! Recursion objects: paths `(r; k)`, the substitutions `E` and `T`, and the
//! terms `Q(b | r; k)` obtained by peeling off one pole at a time.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::build_qa_integrand;
use crate::error::{Error, Result};
use crate::laurent::{FactoredForm, QMonomial, Substitution};
use crate::tournament::{find_witness, Witness};

/// Index sequences `0 < r_1 < ... < r_s <= n` and `1 <= k_i <= b`, with
/// `r_0 = k_0 = 0` implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofPath {
    pub r: Vec<usize>,
    pub k: Vec<i64>,
}

impl ProofPath {
    pub fn root() -> Self {
        ProofPath::default()
    }

    pub fn new(r: Vec<usize>, k: Vec<i64>) -> Result<Self> {
        if r.len() != k.len() {
            return Err(Error::InvalidPath(format!(
                "r has {} entries, k has {}",
                r.len(),
                k.len()
            )));
        }
        Ok(ProofPath { r, k })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `r_s`, or 0 at the root.
    pub fn last_var(&self) -> usize {
        self.r.last().copied().unwrap_or(0)
    }

    /// `k_s`, or 0 at the root.
    pub fn last_k(&self) -> i64 {
        self.k.last().copied().unwrap_or(0)
    }

    pub fn extend(&self, r: usize, k: i64) -> ProofPath {
        let mut out = self.clone();
        out.r.push(r);
        out.k.push(k);
        out
    }

    pub fn validate(&self, n: usize, b: i64) -> Result<()> {
        if self.r.len() != self.k.len() {
            return Err(Error::InvalidPath(format!(
                "{self}: r and k differ in length"
            )));
        }
        let mut prev = 0;
        for &ri in &self.r {
            if ri <= prev || ri > n {
                return Err(Error::InvalidPath(format!(
                    "{self}: r must increase within 1..={n}"
                )));
            }
            prev = ri;
        }
        if let Some(ki) = self.k.iter().find(|&&ki| ki < 1 || ki > b) {
            return Err(Error::InvalidPath(format!(
                "{self}: k entry {ki} outside 1..={b}"
            )));
        }
        Ok(())
    }

    /// `E_{r,k}`: `x_{r_i} -> x_{r_s} q^{k_s - k_i}` for `i = 0..s-1`.
    pub fn e_substitution(&self) -> Substitution {
        let mut sub = Substitution::identity();
        if self.is_empty() {
            return sub;
        }
        let (rs, ks) = (self.last_var(), self.last_k());
        sub.set(0, QMonomial::var(rs).with_q(ks));
        for (&ri, &ki) in self.r.iter().zip(&self.k).take(self.len() - 1) {
            sub.set(ri, QMonomial::var(rs).with_q(ks - ki));
        }
        sub
    }

    /// `T_{j,k}`: `x_{r_s} -> x_j q^{k - k_s}`.
    pub fn t_substitution(&self, j: usize, k: i64) -> Substitution {
        Substitution::identity().with(self.last_var(), QMonomial::var(j).with_q(k - self.last_k()))
    }

    /// Children `(r, r_{s+1}; k, k_{s+1})` in lexicographic order.
    pub fn children(&self, n: usize, b: i64) -> Vec<ProofPath> {
        (self.last_var() + 1..=n)
            .flat_map(|r| (1..=b).map(move |k| (r, k)))
            .map(|(r, k)| self.extend(r, k))
            .collect()
    }
}

impl fmt::Display for ProofPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        write!(
            f,
            "(r={}; k={})",
            join(self.r.iter().map(|x| x.to_string()).collect()),
            join(self.k.iter().map(|x| x.to_string()).collect())
        )
    }
}

#[allow(non_snake_case)]
pub fn substitute_E(path: &ProofPath, f: &FactoredForm) -> Result<FactoredForm> {
    f.substitute(&path.e_substitution())
}

/// `T_{j,k}` relative to the last entry of `path`.
#[allow(non_snake_case)]
pub fn substitute_T(path: &ProofPath, j: usize, k: i64, f: &FactoredForm) -> Result<FactoredForm> {
    if j == path.last_var() {
        return Err(Error::Precondition(format!("T needs j != r_s = {j}")));
    }
    f.substitute(&path.t_substitution(j, k))
}

/// The pole-bearing integrand with positive `b`: the constant term of this
/// form is `Q_a(q^{-b})`. Its degree in `x_0` is `-nb`.
#[allow(non_snake_case)]
pub fn build_Qcal(b: u32, a: &[u32]) -> Result<FactoredForm> {
    if b == 0 {
        return Err(Error::Precondition("b must be at least 1".into()));
    }
    build_qa_integrand(a, -(b as i64))
}

/// `Q(b | r; k) = E_{r,k}[Q(b) Π (1 - x_0/(x_{r_i} q^{k_i}))]`, multiplying in
/// the listed factors before substituting. Usually they cancel a
/// denominator factor; when the canonical form had already cancelled that
/// pole against a numerator factor, the new factor stays in the numerator
/// and the substitution sends it to zero, as it should.
#[allow(non_snake_case)]
pub fn build_Qbrk(b: u32, a: &[u32], path: &ProofPath) -> Result<FactoredForm> {
    path.validate(a.len(), b as i64)?;
    let mut f = build_Qcal(b, a)?;
    for (&ri, &ki) in path.r.iter().zip(&path.k) {
        f.mul_binomial(QMonomial::ratio(-ki, 0, ri), 1)?;
    }
    substitute_E(path, &f)
}

/// `A = (a_{r_1}, ..., a_{r_s})` for a path.
pub fn path_weights(a: &[u32], path: &ProofPath) -> Vec<u32> {
    path.r.iter().map(|&ri| a[ri - 1]).collect()
}

/// A vanishing witness for `Q(b | r; k)`, scanning case 1 then case 2.
pub fn zero_test_case_i(a: &[u32], path: &ProofPath) -> Option<Witness> {
    find_witness(&path_weights(a, path), &path.k)
}

/// Checks `T_{r', k'} ∘ E_{r,k} = E_{r', k'}` on every generator `x_0..x_n`.
pub fn check_composition(path: &ProofPath, r_next: usize, k_next: i64, n: usize) -> Result<()> {
    let lhs = path
        .e_substitution()
        .then(&path.t_substitution(r_next, k_next));
    let child = path.extend(r_next, k_next);
    let rhs = child.e_substitution();
    for v in 0..=n {
        if lhs.image(v) != rhs.image(v) {
            return Err(Error::ProofInvariant(format!(
                "T∘E differs from E' on x{v} at {child}: {} vs {}",
                lhs.image(v),
                rhs.image(v)
            )));
        }
    }
    Ok(())
}

/// Splitting step at a node with no witness: checks properness in `x_{r_s}`
/// against `(n-s)(a_{r_1}+...+a_{r_s} - b)` and the composition law for
/// each child, and returns the children.
pub fn recurse_case_ii(b: u32, a: &[u32], path: &ProofPath) -> Result<Vec<ProofPath>> {
    let f = build_Qbrk(b, a, path)?;
    split_node(b, a, path, &f).map(|(children, _)| children)
}

/// [`recurse_case_ii`] on an already built `Q(b | r; k)`; also returns the
/// degree in `x_{r_s}`.
pub(crate) fn split_node(
    b: u32,
    a: &[u32],
    path: &ProofPath,
    f: &FactoredForm,
) -> Result<(Vec<ProofPath>, i64)> {
    let (n, s) = (a.len(), path.len());
    if s >= n {
        return Err(Error::Precondition(format!(
            "{path} is already at full depth"
        )));
    }
    if let Some(w) = zero_test_case_i(a, path) {
        return Err(Error::Precondition(format!("{path} vanishes by {w}")));
    }
    let total: i64 = path_weights(a, path).iter().map(|&x| x as i64).sum();
    if s > 0 && path.k.iter().all(|&ki| ki <= total) {
        return Err(Error::LemmaViolation {
            a: path_weights(a, path),
            k: path.k.iter().map(|&x| x as u32).collect(),
        });
    }
    let degree = f.degree_in_var(path.last_var());
    let want = (n - s) as i64 * (total - b as i64);
    if degree != want || degree >= 0 {
        return Err(Error::ProofInvariant(format!(
            "degree of {path} in x{} is {degree}, expected {want} < 0",
            path.last_var()
        )));
    }
    let children = path.children(n, b as i64);
    for c in &children {
        check_composition(path, c.last_var(), c.last_k(), n)?;
    }
    Ok((children, degree))
}

/// The child term computed from its parent:
/// `T_{r', k'}[Q(b | r; k)(1 - x_{r_s} q^{k_s}/(x_{r'} q^{k'}))]`.
pub fn child_from_parent(
    parent_form: &FactoredForm,
    path: &ProofPath,
    r_next: usize,
    k_next: i64,
) -> Result<FactoredForm> {
    let rs = path.last_var();
    let mut f = parent_form.clone();
    f.mul_binomial(QMonomial::ratio(path.last_k() - k_next, rs, r_next), 1)?;
    substitute_T(path, r_next, k_next, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::ExpVec;
    use crate::tournament::Witness;

    fn path(r: &[usize], k: &[i64]) -> ProofPath {
        ProofPath::new(r.to_vec(), k.to_vec()).unwrap()
    }

    #[test]
    fn e_substitution_examples() {
        let e = path(&[2], &[3]).e_substitution();
        assert_eq!(e.image(0), QMonomial::var(2).with_q(3));
        assert_eq!(e.image(1), QMonomial::var(1));
        assert_eq!(e.image(2), QMonomial::var(2));
        let e = path(&[1, 2], &[1, 1]).e_substitution();
        assert_eq!(e.image(0), QMonomial::var(2).with_q(1));
        assert_eq!(e.image(1), QMonomial::var(2));
        assert_eq!(e.image(3), QMonomial::var(3));
    }

    #[test]
    fn t_substitution_examples() {
        let p = path(&[1], &[1]);
        let t = p.t_substitution(2, 2);
        assert_eq!(t.image(1), QMonomial::var(2).with_q(1));
        assert_eq!(t.image(3), QMonomial::var(3));
        let f = FactoredForm::binomial(QMonomial::ratio(0, 2, 3), 1).unwrap();
        assert_eq!(substitute_T(&p, 2, 2, &f).unwrap(), f);
    }

    #[test]
    fn composition_on_generators() {
        check_composition(&path(&[1], &[2]), 2, 1, 3).unwrap();
        check_composition(&ProofPath::root(), 2, 3, 3).unwrap();
        check_composition(&path(&[1, 2], &[3, 1]), 3, 2, 3).unwrap();
    }

    #[test]
    fn qcal_shape() {
        // (1 - q x1/x0)/(1 - x0/(q x1))
        let f = build_Qcal(1, &[1]).unwrap();
        let mut want = FactoredForm::binomial(QMonomial::ratio(1, 1, 0), 1).unwrap();
        want.mul_binomial(QMonomial::ratio(-1, 0, 1), -1).unwrap();
        assert_eq!(f, want);
        assert_eq!(build_Qcal(2, &[1, 1]).unwrap().degree_in_var(0), -4);
        assert_eq!(build_Qcal(3, &[1, 1]).unwrap().degree_in_var(0), -6);
    }

    #[test]
    fn qbrk_examples() {
        assert!(build_Qbrk(1, &[1], &path(&[1], &[1])).unwrap().is_zero());
        let f = build_Qbrk(2, &[1, 1], &path(&[1], &[2])).unwrap();
        assert_eq!(f.degree_in_var(1), -1);
        // full depth: only x_{r_n} can survive, and ratios of it cancel
        let g = build_Qbrk(2, &[0, 0], &path(&[1, 2], &[1, 2])).unwrap();
        assert!(!g.is_zero());
        assert!(g.is_constant());
        assert_eq!(g.monomial(), &ExpVec::one());
    }

    #[test]
    fn witness_scan() {
        assert_eq!(
            zero_test_case_i(&[1], &path(&[1], &[1])),
            Some(Witness::Case1 { i: 1 })
        );
        assert_eq!(
            zero_test_case_i(&[1, 1], &path(&[1, 2], &[1, 1])),
            Some(Witness::Case1 { i: 1 })
        );
        assert_eq!(
            zero_test_case_i(&[1, 1], &path(&[1, 2], &[2, 2])),
            Some(Witness::Case2 { i: 1, j: 2 })
        );
        assert_eq!(zero_test_case_i(&[1, 1], &path(&[1], &[2])), None);
    }

    #[test]
    fn recursion_children() {
        let kids = recurse_case_ii(2, &[1, 1], &path(&[1], &[2])).unwrap();
        assert_eq!(kids, vec![path(&[1, 2], &[2, 1]), path(&[1, 2], &[2, 2])]);
        let root = recurse_case_ii(2, &[1, 1], &ProofPath::root()).unwrap();
        assert_eq!(root.len(), 4);
        assert!(recurse_case_ii(1, &[1], &path(&[1], &[1])).is_err());
    }

    #[test]
    fn child_from_parent_matches_direct_construction() {
        let a = [1, 2, 1];
        let b = 4;
        let p = path(&[1], &[3]);
        let parent = build_Qbrk(b, &a, &p).unwrap();
        for c in p.children(3, b as i64) {
            let via_t = child_from_parent(&parent, &p, c.last_var(), c.last_k()).unwrap();
            assert_eq!(via_t, build_Qbrk(b, &a, &c).unwrap(), "{c}");
        }
    }

    #[test]
    fn invalid_paths() {
        assert!(build_Qbrk(2, &[1, 1], &path(&[2, 1], &[1, 1])).is_err());
        assert!(build_Qbrk(2, &[1, 1], &path(&[1], &[3])).is_err());
        assert!(build_Qbrk(2, &[1, 1], &path(&[3], &[1])).is_err());
    }
}
