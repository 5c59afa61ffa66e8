//! Acceptance suite: one line per criterion, exact comparisons throughout.
//! Runs without the test harness so the lines are always printed.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use ct_forge_core::ct::compare_pfrac_with_series;
use ct_forge_core::identities::{
    run_identity_suite, FINITE_QBINOMIAL, PAIR_REWRITE, POCHHAMMER_ADDITIVITY, QBINOMIAL_THEOREM,
};
use ct_forge_core::qdyson::{
    build_Qbrk, build_Qcal, certify_main_lemma, check_composition, eval_Qa,
    interpolate_Qa_degree_check, path_weights, rhs_qdyson, validate_certificate, verify_dyson_q1,
    verify_qdyson,
};
use ct_forge_core::tournament::{exhaustive_lemma_check, find_witness, lemma_vectors, Witness};
use ct_forge_core::{
    BigRat, Certificate, Error, ExpVec, FactoredForm, Method, ProofPath, QMonomial, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn tuples(min_len: usize, max_len: usize, max_a: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for len in min_len..=max_len {
        let mut t = vec![0u32; len];
        loop {
            out.push(t.clone());
            let Some(p) = t.iter().rposition(|&x| x < max_a) else {
                break;
            };
            t[p] += 1;
            t[p + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    out
}

/// Every a with 1 <= n <= 3, a_i <= 2 and a positive sum.
fn lemma_grid() -> Vec<Vec<u32>> {
    tuples(1, 3, 2)
        .into_iter()
        .filter(|a| a.iter().any(|&x| x > 0))
        .collect()
}

fn c1_qdyson() -> Outcome {
    let grid = tuples(1, 4, 3);
    for all in &grid {
        let r = verify_qdyson(all[0], &all[1..], Method::Brute).map_err(|e| e.to_string())?;
        if r.brute.as_ref() != Some(&r.rhs) {
            return Err(r.counterexample().unwrap_or_default());
        }
    }
    let spot = rhs_qdyson(1, &[1, 1]);
    Ok(format!(
        "{} tuples (up to 4 variables, a_i <= 3) match; (1,1,1) gives {spot}",
        grid.len()
    ))
}

fn c2_classical() -> Outcome {
    let grid = tuples(1, 5, 2);
    for all in &grid {
        let r = verify_dyson_q1(all[0], &all[1..]).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("{all:?}: {} vs {}", r.lhs, r.multinomial));
        }
    }
    let spot = verify_dyson_q1(1, &[1, 1]).map_err(|e| e.to_string())?;
    if spot.lhs != BigRat::from_integer(6.into()) {
        return Err(format!("(1,1,1) gives {}", spot.lhs));
    }
    Ok(format!(
        "{} tuples (up to 5 variables, a_i <= 2) match; (1,1,1) gives 6",
        grid.len()
    ))
}

fn c3_main_lemma(certs: &mut Vec<Certificate>) -> Outcome {
    let mut internal_checked = 0;
    for a in lemma_grid() {
        let total: u32 = a.iter().sum();
        for b in 1..=total {
            let v = eval_Qa(&a, -(b as i64)).map_err(|e| e.to_string())?;
            if !v.is_zero() {
                return Err(format!("series oracle: Q_{a:?}(q^-{b}) = {v}"));
            }
            let c = certify_main_lemma(&a, b).map_err(|e| e.to_string())?;
            validate_certificate(&c).map_err(|e| e.to_string())?;
            let nodes = c.nodes();
            let bad_leaf = nodes.iter().find(|n| {
                n.status.is_leaf()
                    && !matches!(
                        n.status,
                        Status::ZeroCase1 | Status::ZeroCase2 | Status::BaseFullDepth
                    )
            });
            if let Some(n) = bad_leaf {
                return Err(format!(
                    "a={a:?} b={b}: leaf {} has status {:?}",
                    n.path, n.status
                ));
            }
            let sampled_internal = c.oracle_checked.iter().any(|p| {
                nodes
                    .iter()
                    .any(|n| &n.path == p && n.status == Status::Recursed)
            });
            if !sampled_internal {
                return Err(format!(
                    "a={a:?} b={b}: no internal node was oracle-checked"
                ));
            }
            internal_checked += c.oracle_checked.len();
            certs.push(c);
        }
    }
    Ok(format!(
        "{} (a, b) pairs: series CT = 0 and certificates validate; {internal_checked} internal nodes oracle-checked",
        certs.len()
    ))
}

fn random_proper(rng: &mut ChaCha8Rng) -> (FactoredForm, usize) {
    let nvars = rng.gen_range(2..=4);
    let k = rng.gen_range(0..nvars);
    let others: Vec<usize> = (0..nvars).filter(|&v| v != k).collect();
    let mut f = FactoredForm::one();
    let npoles = rng.gen_range(1..=4);
    let mut used = Vec::new();
    while used.len() < npoles {
        let t = others[rng.gen_range(0..others.len())];
        let s = rng.gen_range(-3..=3);
        if !used.contains(&(t, s)) {
            used.push((t, s));
            f.mul_binomial(QMonomial::ratio(-s, k, t), -1).unwrap();
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let i = rng.gen_range(0..nvars);
        let j = (i + rng.gen_range(1..nvars)) % nvars;
        f.mul_binomial(QMonomial::ratio(rng.gen_range(-3..=3), i, j), 1)
            .unwrap();
    }
    let want = -rng.gen_range(1..=2);
    let shift = want - f.degree_in_var(k);
    let other = others[rng.gen_range(0..others.len())];
    let prefix = ExpVec::from_pairs([(k, shift as i32), (other, rng.gen_range(-1..=1))]);
    f.mul_qmonomial(
        &QMonomial::new(
            BigRat::from_integer(1.into()),
            rng.gen_range(-2..=2),
            prefix,
        ),
        1,
    )
    .unwrap();
    (f, k)
}

fn c4_pfrac_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut done, mut summands, mut several) = (0, 0, 0);
    while done < 120 {
        let (f, k) = random_proper(&mut rng);
        match compare_pfrac_with_series(&f, k) {
            Ok(c) if c.var_agrees && c.all_agrees => {
                done += 1;
                summands += c.summands;
                several += usize::from(c.summands >= 2);
            }
            Ok(c) => return Err(format!("{f} in x{k}: {c:?}")),
            // a numerator factor cancelled a pole and left the function improper
            Err(Error::NotProper { .. }) => {}
            Err(e) => return Err(format!("{f} in x{k}: {e}")),
        }
    }
    Ok(format!(
        "{done} random proper functions agree in x_k and in all variables ({summands} residues, {several} with two or more)"
    ))
}

/// The two cases checked straight from their inequalities.
fn witness_sound(a: &[u32], k: &[i64], w: Witness) -> bool {
    let s = a.len();
    match w {
        Witness::Case1 { i } => i >= 1 && i <= s && k[i - 1] >= 1 && k[i - 1] <= a[i - 1] as i64,
        Witness::Case2 { i, j } => {
            i >= 1
                && i < j
                && j <= s
                && k[i - 1] - k[j - 1] >= -(a[j - 1] as i64)
                && k[i - 1] - k[j - 1] < a[i - 1] as i64
        }
    }
}

fn c5_tournament() -> Outcome {
    let report = exhaustive_lemma_check(4, 3).map_err(|e| e.to_string())?;
    let mut rechecked = 0u64;
    for a in lemma_vectors(4, 3) {
        let total: i64 = a.iter().map(|&x| x as i64).sum();
        if total == 0 {
            continue;
        }
        let mut k = vec![1i64; a.len()];
        loop {
            match find_witness(&a, &k) {
                Some(w) if witness_sound(&a, &k, w) => rechecked += 1,
                other => return Err(format!("A={a:?} k={k:?}: {other:?}")),
            }
            let Some(p) = k.iter().rposition(|&x| x < total) else {
                break;
            };
            k[p] += 1;
            k[p + 1..].iter_mut().for_each(|x| *x = 1);
        }
    }
    if rechecked != report.instances {
        return Err(format!(
            "{rechecked} rechecked vs {} enumerated",
            report.instances
        ));
    }
    Ok(format!(
        "{} instances over {} vectors, 0 counterexamples, every witness re-verified",
        report.instances, report.vectors
    ))
}

fn c6_degree(certs: &[Certificate]) -> Outcome {
    let grid = lemma_grid();
    for a in &grid {
        let r = interpolate_Qa_degree_check(a).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!(
                "a={a:?}: predicted {} but Q = {}",
                r.predicted, r.actual
            ));
        }
        let total: u32 = a.iter().sum();
        for b in 1..=total {
            let d = build_Qcal(b, a)
                .map_err(|e| e.to_string())?
                .degree_in_var(0);
            if d != -(a.len() as i64) * b as i64 {
                return Err(format!("a={a:?} b={b}: degree {d} in x0"));
            }
        }
    }
    let mut recursed = 0;
    for c in certs {
        let n = c.a.len() as i64;
        for node in c
            .nodes()
            .into_iter()
            .filter(|n| n.status == Status::Recursed)
        {
            let s = node.path.len() as i64;
            let sum: i64 = path_weights(&c.a, &node.path)
                .iter()
                .map(|&x| x as i64)
                .sum();
            let want = (n - s) * (sum - c.b as i64);
            let form = build_Qbrk(c.b, &c.a, &node.path).map_err(|e| e.to_string())?;
            let got = form.degree_in_var(node.path.last_var());
            if node.degree != Some(want) || got != want {
                return Err(format!(
                    "a={:?} b={} at {}: degree {got}, want {want}",
                    c.a, c.b, node.path
                ));
            }
            recursed += 1;
        }
    }
    Ok(format!(
        "{} interpolants predict b = a+1; degree in x0 is -nb; {recursed} recursed nodes match (n-s)(sum-b)",
        grid.len()
    ))
}

fn c7_identities() -> Outcome {
    let checks = run_identity_suite(8).map_err(|e| e.to_string())?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &checks {
        if !c.passed {
            return Err(format!("{} fails at {}", c.identity, c.params));
        }
        *counts.entry(c.identity).or_default() += 1;
    }
    let want = [
        (PAIR_REWRITE, 32),
        (FINITE_QBINOMIAL, 9),
        (QBINOMIAL_THEOREM, 1),
        (POCHHAMMER_ADDITIVITY, 49),
    ];
    for (name, n) in want {
        if counts.get(name) != Some(&n) {
            return Err(format!(
                "{name}: {:?} checks, expected {n}",
                counts.get(name)
            ));
        }
    }
    Ok(format!("{} checks at degree 8 pass", checks.len()))
}

fn c8_composition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(2..=7);
        let b = rng.gen_range(1..=6);
        let r: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.5)).collect();
        let k = r.iter().map(|_| rng.gen_range(1..=b)).collect();
        let p = ProofPath::new(r, k).map_err(|e| e.to_string())?;
        let r_next = rng.gen_range(p.last_var() + 1..=n);
        let k_next = rng.gen_range(1..=b);
        check_composition(&p, r_next, k_next, n).map_err(|e| e.to_string())?;
        done += 1;
    }
    Ok(format!(
        "{done} random paths, checked on every generator x0..xn"
    ))
}

fn c9_cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ct-forge");
    let dir = std::env::temp_dir().join(format!("ct-forge-acceptance-{}", std::process::id()));
    let dir_s = dir.to_string_lossy().into_owned();
    let suites: Vec<Vec<&str>> = vec![
        vec!["verify", "--a0", "1", "--a", "1"],
        vec!["verify", "--max-vars", "4", "--max-a", "3"],
        vec!["verify", "--max-vars", "5", "--max-a", "2", "--q1"],
        vec![
            "certify",
            "--max-n",
            "3",
            "--max-a",
            "2",
            "--oracle",
            "--json-out",
            &dir_s,
        ],
        vec![
            "ct",
            "--expr",
            "1/(1 - q*x0/x1)",
            "--var",
            "x0",
            "--method",
            "both",
        ],
        vec![
            "ct",
            "--expr",
            "(1 - x0/x1)*(1 - q*x1/x0)",
            "--all-vars",
            "--method",
            "both",
        ],
        vec!["tournament", "--max-s", "4", "--max-a", "3"],
        vec!["identities", "--degree", "8"],
    ];
    for args in &suites {
        let o = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!(
                "`ct-forge {}` exited with {:?}: {}",
                args.join(" "),
                o.status.code(),
                String::from_utf8_lossy(&o.stderr)
            ));
        }
    }
    let mut files = 0;
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let keys: Vec<&str> = raw
            .as_object()
            .map(|o| o.keys().map(String::as_str).collect())
            .unwrap_or_default();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        if sorted != ["a", "b", "format", "oracle_checked", "root", "version"] {
            return Err(format!("{}: top-level keys {keys:?}", path.display()));
        }
        let cert: Certificate =
            serde_json::from_value(raw).map_err(|e| format!("{}: {e}", path.display()))?;
        validate_certificate(&cert).map_err(|e| e.to_string())?;
        for node in cert.nodes().into_iter().filter(|n| n.status.is_leaf()) {
            let zero = build_Qbrk(cert.b, &cert.a, &node.path)
                .map_err(|e| e.to_string())?
                .is_zero();
            let w = find_witness(&path_weights(&cert.a, &node.path), &node.path.k);
            if !zero || (node.status != Status::BaseFullDepth && w != node.witness) {
                return Err(format!(
                    "{}: leaf {} does not re-verify",
                    path.display(),
                    node.path
                ));
            }
        }
        files += 1;
    }
    let _ = std::fs::remove_dir_all(&dir);
    if files == 0 {
        return Err("certify wrote no certificates".into());
    }
    Ok(format!(
        "{} command suites exit 0; {files} certificate files reload, validate and re-verify leaf by leaf",
        suites.len()
    ))
}

fn main() {
    let mut certs = Vec::new();
    let mut failures = 0;
    let mut report = |n: u32, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {n} PASS  {title}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failures += 1;
                println!("criterion {n} FAIL  {title}: {msg} [{secs:.1}s]");
            }
        }
    };
    report(1, "q-Dyson exactness", &mut c1_qdyson);
    report(2, "classical Dyson at q = 1", &mut c2_classical);
    report(3, "vanishing lemma, series and certificates", &mut || {
        c3_main_lemma(&mut certs)
    });
    report(4, "partial fractions vs series", &mut c4_pfrac_oracle);
    report(5, "witness lemma, exhaustive", &mut c5_tournament);
    report(6, "degree bounds", &mut || c6_degree(&certs));
    report(7, "identity suite", &mut c7_identities);
    report(8, "composition law", &mut c8_composition);
    report(9, "command line end to end", &mut c9_cli);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
