//! Certificates replaying the vanishing of `CT Q(b)` for `1 <= b <= a`.
//!
//! JSON layout (field order as written):
//!
//! ```text
//! {
//!   "format": "ct-forge/main-lemma",
//!   "version": 1,
//!   "a": [a_1, ..., a_n],
//!   "b": b,
//!   "root": NODE,
//!   "oracle_checked": [{"r": [...], "k": [...]}, ...]
//! }
//! NODE = {
//!   "path": {"r": [r_1, ..., r_s], "k": [k_1, ..., k_s]},
//!   "status": "zero_case1" | "zero_case2" | "recursed" | "base_full_depth",
//!   "witness": {"case": 1, "i": i} | {"case": 2, "i": i, "j": j} | null,
//!   "degree": d | null,
//!   "children": [NODE, ...]
//! }
//! ```
//!
//! Indices in witnesses are positions in the path (1-based). `degree` is the
//! degree in `x_{r_s}` (in `x_0` at the root) and is set on recursed nodes
//! only. Children of a recursed node are listed in lexicographic
//! `(r_{s+1}, k_{s+1})` order and must enumerate `r_s < r_{s+1} <= n`,
//! `1 <= k_{s+1} <= b` exactly. `oracle_checked` lists the nodes whose
//! constant term in all variables was also computed by series expansion.

use serde::{Deserialize, Serialize};

use super::proof::{
    build_Qbrk, child_from_parent, path_weights, split_node, zero_test_case_i, ProofPath,
};
use crate::ct::{ct_all_series, ct_var_factored};
use crate::error::{Error, Result};
use crate::laurent::FactoredForm;
use crate::tournament::{witness_holds, Witness};

pub const CERTIFICATE_FORMAT: &str = "ct-forge/main-lemma";
pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    ZeroCase1,
    ZeroCase2,
    Recursed,
    BaseFullDepth,
}

impl Status {
    pub fn is_leaf(self) -> bool {
        self != Status::Recursed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub path: ProofPath,
    pub status: Status,
    pub witness: Option<Witness>,
    pub degree: Option<i64>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn walk<'a>(&'a self, out: &mut Vec<&'a Node>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub version: u32,
    pub a: Vec<u32>,
    pub b: u32,
    pub root: Node,
    pub oracle_checked: Vec<ProofPath>,
}

/// Node counts by status.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CertificateStats {
    pub nodes: usize,
    pub leaves: usize,
    pub zero_case1: usize,
    pub zero_case2: usize,
    pub recursed: usize,
    pub base_full_depth: usize,
    pub depth: usize,
}

impl Certificate {
    pub fn nodes(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        self.root.walk(&mut out);
        out
    }

    pub fn stats(&self) -> CertificateStats {
        let mut st = CertificateStats::default();
        for node in self.nodes() {
            st.nodes += 1;
            st.depth = st.depth.max(node.path.len());
            match node.status {
                Status::ZeroCase1 => st.zero_case1 += 1,
                Status::ZeroCase2 => st.zero_case2 += 1,
                Status::Recursed => st.recursed += 1,
                Status::BaseFullDepth => st.base_full_depth += 1,
            }
            if node.status.is_leaf() {
                st.leaves += 1;
            }
        }
        st
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// How many recursed nodes below the root get an independent series
    /// check of their constant term. The smallest terms are picked first.
    pub oracle_samples: usize,
    /// Cross-check every split against the partial-fraction engine.
    pub pfrac_check: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            oracle_samples: 1,
            pfrac_check: true,
        }
    }
}

fn failure(path: &ProofPath, reason: impl ToString) -> Error {
    Error::CertificationFailure {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

/// Replays the recursion for `CT Q(b)` with default options.
pub fn certify_main_lemma(a: &[u32], b: u32) -> Result<Certificate> {
    certify_main_lemma_with(a, b, &CertifyOptions::default())
}

pub fn certify_main_lemma_with(a: &[u32], b: u32, opts: &CertifyOptions) -> Result<Certificate> {
    let total: u32 = a.iter().sum();
    if b < 1 || b > total {
        return Err(Error::Precondition(format!("b = {b} outside 1..={total}")));
    }
    let root_path = ProofPath::root();
    let root_form = build_Qbrk(b, a, &root_path)?;
    let ctx = Ctx { a, b, opts };
    let root = ctx.node(root_path, root_form)?;

    let mut cert = Certificate {
        format: CERTIFICATE_FORMAT.into(),
        version: CERTIFICATE_VERSION,
        a: a.to_vec(),
        b,
        root,
        oracle_checked: Vec::new(),
    };
    cert.oracle_checked = oracle_sample(&cert, opts.oracle_samples)?;
    Ok(cert)
}

struct Ctx<'a> {
    a: &'a [u32],
    b: u32,
    opts: &'a CertifyOptions,
}

impl Ctx<'_> {
    fn node(&self, path: ProofPath, form: FactoredForm) -> Result<Node> {
        let n = self.a.len();
        if let Some(w) = zero_test_case_i(self.a, &path) {
            if !form.is_zero() {
                return Err(failure(&path, format!("{w} holds but the term is {form}")));
            }
            let status = match w {
                Witness::Case1 { .. } => Status::ZeroCase1,
                Witness::Case2 { .. } => Status::ZeroCase2,
            };
            return Ok(Node {
                path,
                status,
                witness: Some(w),
                degree: None,
                children: Vec::new(),
            });
        }
        if path.len() == n {
            if !form.is_zero() {
                return Err(failure(&path, "full depth without a witness and nonzero"));
            }
            return Ok(Node {
                path,
                status: Status::BaseFullDepth,
                witness: None,
                degree: None,
                children: Vec::new(),
            });
        }
        let (kids, degree) =
            split_node(self.b, self.a, &path, &form).map_err(|e| failure(&path, e))?;
        let mut forms = Vec::with_capacity(kids.len());
        for c in &kids {
            let via_t = child_from_parent(&form, &path, c.last_var(), c.last_k())
                .map_err(|e| failure(c, e))?;
            let direct = build_Qbrk(self.b, self.a, c)?;
            if via_t != direct {
                return Err(failure(
                    c,
                    format!("T-route gives {via_t}, direct gives {direct}"),
                ));
            }
            forms.push(direct);
        }
        if self.opts.pfrac_check {
            let summands =
                ct_var_factored(&form, path.last_var()).map_err(|e| failure(&path, e))?;
            let nonzero: Vec<&FactoredForm> = forms.iter().filter(|f| !f.is_zero()).collect();
            if !same_multiset(&summands, &nonzero) {
                return Err(failure(
                    &path,
                    "partial fractions disagree with the children",
                ));
            }
        }
        let children = kids
            .into_iter()
            .zip(forms)
            .map(|(c, f)| self.node(c, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Node {
            path,
            status: Status::Recursed,
            witness: None,
            degree: Some(degree),
            children,
        })
    }
}

fn same_multiset(xs: &[FactoredForm], ys: &[&FactoredForm]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    xs.iter().all(|x| {
        let hit = ys.iter().enumerate().find(|(i, y)| !used[*i] && **y == x);
        match hit {
            Some((i, _)) => {
                used[i] = true;
                true
            }
            None => false,
        }
    })
}

/// Picks up to `samples` recursed nodes below the root, fewest denominator
/// factors first, and checks that their constant term vanishes. Falls back
/// to the root when there is no such node.
fn oracle_sample(cert: &Certificate, samples: usize) -> Result<Vec<ProofPath>> {
    if samples == 0 {
        return Ok(Vec::new());
    }
    let mut cands: Vec<(usize, ProofPath, FactoredForm)> = Vec::new();
    for node in cert.nodes() {
        if node.status == Status::Recursed && !node.path.is_empty() {
            let f = build_Qbrk(cert.b, &cert.a, &node.path)?;
            cands.push((f.denominator_factors().count(), node.path.clone(), f));
        }
    }
    if cands.is_empty() {
        let f = build_Qbrk(cert.b, &cert.a, &cert.root.path)?;
        cands.push((0, cert.root.path.clone(), f));
    }
    cands.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
    let mut checked = Vec::new();
    for (_, path, f) in cands.into_iter().take(samples) {
        let ct = if path.is_empty() {
            super::eval_Qa(&cert.a, -(cert.b as i64))?
        } else {
            ct_all_series(&f)?
        };
        if !ct.is_zero() {
            return Err(failure(
                &path,
                format!("series oracle gives constant term {ct}"),
            ));
        }
        checked.push(path);
    }
    Ok(checked)
}

/// Re-derives every node of a certificate from its path alone: leaf
/// witnesses and vanishing, full enumeration of children, the degree of each
/// split, and the composition law on each child.
pub fn validate_certificate(cert: &Certificate) -> Result<CertificateStats> {
    let bad = |path: &ProofPath, why: &str| failure(path, why);
    if cert.format != CERTIFICATE_FORMAT || cert.version != CERTIFICATE_VERSION {
        return Err(Error::Shape(format!(
            "unknown certificate format {} v{}",
            cert.format, cert.version
        )));
    }
    let (a, b) = (&cert.a[..], cert.b);
    let n = a.len();
    let total: u32 = a.iter().sum();
    if b < 1 || b > total {
        return Err(Error::Precondition(format!("b = {b} outside 1..={total}")));
    }
    if !cert.root.path.is_empty() || cert.root.status != Status::Recursed {
        return Err(bad(
            &cert.root.path,
            "root must be the empty path and split",
        ));
    }
    let mut stack = vec![&cert.root];
    while let Some(node) = stack.pop() {
        let p = &node.path;
        p.validate(n, b as i64)?;
        let form = build_Qbrk(b, a, p)?;
        match node.status {
            Status::ZeroCase1 | Status::ZeroCase2 => {
                let w = node
                    .witness
                    .ok_or_else(|| bad(p, "zero leaf without witness"))?;
                let case_ok = matches!(
                    (node.status, w),
                    (Status::ZeroCase1, Witness::Case1 { .. })
                        | (Status::ZeroCase2, Witness::Case2 { .. })
                );
                if !case_ok || !witness_holds(&path_weights(a, p), &p.k, w) {
                    return Err(bad(p, "witness does not hold"));
                }
                if !form.is_zero() || !node.children.is_empty() {
                    return Err(bad(p, "witnessed leaf is not zero"));
                }
            }
            Status::BaseFullDepth => {
                if p.len() != n || !form.is_zero() || !node.children.is_empty() {
                    return Err(bad(p, "base leaf is not a zero at full depth"));
                }
            }
            Status::Recursed => {
                let (kids, degree) = split_node(b, a, p, &form).map_err(|e| failure(p, e))?;
                if node.degree != Some(degree) {
                    return Err(bad(p, "recorded degree differs"));
                }
                let listed: Vec<&ProofPath> = node.children.iter().map(|c| &c.path).collect();
                if listed != kids.iter().collect::<Vec<_>>() {
                    return Err(bad(p, "children do not enumerate the split"));
                }
                stack.extend(node.children.iter());
            }
        }
    }
    let nodes = cert.nodes();
    for o in &cert.oracle_checked {
        if !nodes.iter().any(|nd| &nd.path == o) {
            return Err(bad(o, "oracle-checked path is not in the tree"));
        }
    }
    Ok(cert.stats())
}
