//! The witness lemma behind the vanishing of the recursion leaves, and the
//! tournament used to prove it.
//!
//! For nonnegative `A_1..A_s` and `1 <= k_i <= A_1+...+A_s`, either
//! `1 <= k_i <= A_i` for some `i` (case 1), or `-A_j <= k_i - k_j <= A_i - 1`
//! for some `i < j` (case 2). Indices in witnesses are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WitnessRepr", into = "WitnessRepr")]
pub enum Witness {
    Case1 { i: usize },
    Case2 { i: usize, j: usize },
}

/// Serialized as `{"case": 1, "i": i}` or `{"case": 2, "i": i, "j": j}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessRepr {
    case: u8,
    i: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
}

impl From<Witness> for WitnessRepr {
    fn from(w: Witness) -> Self {
        match w {
            Witness::Case1 { i } => WitnessRepr {
                case: 1,
                i,
                j: None,
            },
            Witness::Case2 { i, j } => WitnessRepr {
                case: 2,
                i,
                j: Some(j),
            },
        }
    }
}

impl TryFrom<WitnessRepr> for Witness {
    type Error = String;

    fn try_from(r: WitnessRepr) -> std::result::Result<Self, String> {
        match (r.case, r.j) {
            (1, None) => Ok(Witness::Case1 { i: r.i }),
            (2, Some(j)) => Ok(Witness::Case2 { i: r.i, j }),
            (c, _) => Err(format!("malformed witness with case {c}")),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Case1 { i } => write!(f, "case 1 (i={i})"),
            Witness::Case2 { i, j } => write!(f, "case 2 (i={i}, j={j})"),
        }
    }
}

/// First witness in scan order: case 1 by ascending `i`, then case 2 by
/// lexicographic `(i, j)`. No hypothesis on `k` is assumed.
pub fn find_witness(a: &[u32], k: &[i64]) -> Option<Witness> {
    debug_assert_eq!(a.len(), k.len());
    if let Some(i) = (0..a.len()).find(|&i| 1 <= k[i] && k[i] <= a[i] as i64) {
        return Some(Witness::Case1 { i: i + 1 });
    }
    case2_witness(a, k)
}

fn case2_witness(a: &[u32], k: &[i64]) -> Option<Witness> {
    let s = a.len();
    for i in 0..s {
        for j in i + 1..s {
            let d = k[i] - k[j];
            if -(a[j] as i64) <= d && d < a[i] as i64 {
                return Some(Witness::Case2 { i: i + 1, j: j + 1 });
            }
        }
    }
    None
}

/// Checks the defining inequalities of `w` directly.
pub fn witness_holds(a: &[u32], k: &[i64], w: Witness) -> bool {
    let s = a.len();
    match w {
        Witness::Case1 { i } => {
            (1..=s).contains(&i) && 1 <= k[i - 1] && k[i - 1] <= a[i - 1] as i64
        }
        Witness::Case2 { i, j } => {
            if !(1 <= i && i < j && j <= s) {
                return false;
            }
            let d = k[i - 1] - k[j - 1];
            -(a[j - 1] as i64) <= d && d < a[i - 1] as i64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TournamentInstance {
    a: Vec<u32>,
    k: Vec<i64>,
}

impl TournamentInstance {
    /// Enforces the lemma hypothesis `1 <= k_i <= ΣA`.
    pub fn new(a: Vec<u32>, k: Vec<i64>) -> Result<Self> {
        let inst = Self::relaxed(a, k)?;
        let total = inst.total();
        if let Some(&bad) = inst.k.iter().find(|&&ki| ki < 1 || ki > total) {
            return Err(Error::Precondition(format!(
                "k entry {bad} outside [1, {total}]"
            )));
        }
        Ok(inst)
    }

    /// Only checks the shapes; the bound on `k` is waived.
    pub fn relaxed(a: Vec<u32>, k: Vec<i64>) -> Result<Self> {
        if a.len() != k.len() {
            return Err(Error::Shape(format!(
                "A has {} entries but k has {}",
                a.len(),
                k.len()
            )));
        }
        Ok(TournamentInstance { a, k })
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    pub fn total(&self) -> i64 {
        self.a.iter().map(|&x| x as i64).sum()
    }
}

/// The witness guaranteed by the lemma.
pub fn lemma_witness(inst: &TournamentInstance) -> Result<Witness> {
    find_witness(&inst.a, &inst.k).ok_or_else(|| Error::LemmaViolation {
        a: inst.a.clone(),
        k: inst.k.iter().map(|&x| x as u32).collect(),
    })
}

/// An arc `from -> to` carrying `label`, vertices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub label: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A directed cycle, with its label sum.
    Cycle {
        vertices: Vec<usize>,
        label_sum: i64,
    },
    /// The total order `i_1 -> ... -> i_s`; `span = k_{i_s} - k_{i_1}` and
    /// `tail_sum = A_{i_2} + ... + A_{i_s}`.
    Order {
        order: Vec<usize>,
        span: i64,
        tail_sum: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tournament {
    pub arcs: Vec<Arc>,
    pub outcome: Outcome,
}

impl Tournament {
    /// Label sum along consecutive vertices of a path (1-based).
    pub fn path_label_sum(&self, path: &[usize]) -> Option<i64> {
        path.windows(2)
            .map(|w| {
                self.arcs
                    .iter()
                    .find(|a| a.from == w[0] && a.to == w[1])
                    .map(|a| a.label)
            })
            .sum()
    }

    /// Whether the final contradiction of the proof is reached:
    /// `k_{i_s} >= k_{i_1} + A_{i_2} + ... + A_{i_s} > ΣA`.
    pub fn contradicts(&self, inst: &TournamentInstance) -> bool {
        match &self.outcome {
            Outcome::Cycle { .. } => true,
            Outcome::Order { order, .. } => {
                let last = order[order.len() - 1];
                inst.k[last - 1] > inst.total()
            }
        }
    }
}

/// Builds the labelled tournament of the lemma's proof. For `i < j`,
/// `k_i - k_j >= A_i` gives `j -> i` labelled `A_i`, and
/// `k_i - k_j <= -1 - A_j` gives `i -> j` labelled `A_j + 1`.
///
/// Needs every pair to fall under one of these rules, i.e. no case 2
/// witness. Case 1 and the bound on `k` are not required, which lets tests
/// feed instances outside the lemma's hypothesis.
pub fn build_tournament(inst: &TournamentInstance) -> Result<Tournament> {
    if let Some(w) = case2_witness(&inst.a, &inst.k) {
        return Err(Error::Precondition(format!(
            "instance admits the witness {w}"
        )));
    }
    Ok(Tournament::from_arcs(inst, arcs_of(inst)))
}

fn arcs_of(inst: &TournamentInstance) -> Vec<Arc> {
    let (a, k) = (&inst.a, &inst.k);
    let s = a.len();
    let mut arcs = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            let d = k[i] - k[j];
            if d >= a[i] as i64 {
                arcs.push(Arc {
                    from: j + 1,
                    to: i + 1,
                    label: a[i] as i64,
                });
            } else {
                arcs.push(Arc {
                    from: i + 1,
                    to: j + 1,
                    label: a[j] as i64 + 1,
                });
            }
        }
    }
    arcs
}

impl Tournament {
    /// Orders the vertices by out-degree; a tournament is transitive exactly
    /// when that order has every arc pointing forward. Otherwise a 3-cycle
    /// exists and is reported.
    pub fn from_arcs(inst: &TournamentInstance, arcs: Vec<Arc>) -> Tournament {
        let s = inst.a.len();
        let mut out = vec![0usize; s + 1];
        for a in &arcs {
            out[a.from] += 1;
        }
        let mut order: Vec<usize> = (1..=s).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(out[v]));
        let pos: Vec<usize> = {
            let mut p = vec![0; s + 1];
            for (idx, &v) in order.iter().enumerate() {
                p[v] = idx;
            }
            p
        };
        let transitive = arcs.iter().all(|a| pos[a.from] < pos[a.to]);
        let outcome = if transitive {
            let span = if s == 0 {
                0
            } else {
                inst.k[order[s - 1] - 1] - inst.k[order[0] - 1]
            };
            let tail_sum = order.iter().skip(1).map(|&v| inst.a[v - 1] as i64).sum();
            Outcome::Order {
                order,
                span,
                tail_sum,
            }
        } else {
            let has = |u: usize, v: usize| arcs.iter().find(|a| a.from == u && a.to == v);
            let mut cycle = None;
            'outer: for u in 1..=s {
                for v in 1..=s {
                    for w in 1..=s {
                        if let (Some(x), Some(y), Some(z)) = (has(u, v), has(v, w), has(w, u)) {
                            cycle = Some(Outcome::Cycle {
                                vertices: vec![u, v, w],
                                label_sum: x.label + y.label + z.label,
                            });
                            break 'outer;
                        }
                    }
                }
            }
            cycle.expect("a non-transitive tournament has a 3-cycle")
        };
        Tournament { arcs, outcome }
    }
}

/// Counts from an exhaustive run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub vectors: u64,
    pub instances: u64,
    pub case1: u64,
    pub case2: u64,
}

impl LemmaReport {
    pub fn merge(mut self, other: &LemmaReport) -> LemmaReport {
        self.vectors += other.vectors;
        self.instances += other.instances;
        self.case1 += other.case1;
        self.case2 += other.case2;
        self
    }
}

/// Every `A` with `1 <= s <= s_max` entries in `[0, a_max]`.
pub fn lemma_vectors(s_max: usize, a_max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for s in 1..=s_max {
        let mut a = vec![0u32; s];
        loop {
            out.push(a.clone());
            let Some(p) = a.iter().rposition(|&x| x < a_max) else {
                break;
            };
            a[p] += 1;
            a[p + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    out
}

/// Runs the lemma on every admissible `k` for one `A`, re-checking each
/// witness against its inequalities.
pub fn check_vector(a: &[u32]) -> Result<LemmaReport> {
    let s = a.len();
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    let mut rep = LemmaReport {
        vectors: 1,
        ..Default::default()
    };
    if total == 0 || s == 0 {
        return Ok(rep);
    }
    let mut k = vec![1i64; s];
    loop {
        let w = find_witness(a, &k).ok_or_else(|| Error::LemmaViolation {
            a: a.to_vec(),
            k: k.iter().map(|&x| x as u32).collect(),
        })?;
        if !witness_holds(a, &k, w) {
            return Err(Error::ProofInvariant(format!(
                "unsound witness {w} for A={a:?} k={k:?}"
            )));
        }
        rep.instances += 1;
        match w {
            Witness::Case1 { .. } => rep.case1 += 1,
            Witness::Case2 { .. } => rep.case2 += 1,
        }
        let Some(p) = k.iter().rposition(|&x| x < total) else {
            break;
        };
        k[p] += 1;
        k[p + 1..].iter_mut().for_each(|x| *x = 1);
    }
    Ok(rep)
}

/// The lemma on all `A` with at most `s_max` entries bounded by `a_max`.
pub fn exhaustive_lemma_check(s_max: usize, a_max: u32) -> Result<LemmaReport> {
    lemma_vectors(s_max, a_max)
        .iter()
        .try_fold(LemmaReport::default(), |acc, a| {
            Ok(acc.merge(&check_vector(a)?))
        })
}
