use std::fs;
use std::path::{Path, PathBuf};

use ct_forge_core::qdyson::{
    certify_main_lemma_with, eval_Qa, validate_certificate, CertificateStats, CertifyOptions,
};
use ct_forge_core::Certificate;
use rayon::prelude::*;

use super::{dashed, nonnegative, tuples};
use crate::args::CertifyArgs;
use crate::{CliError, CliResult};

/// Reads a certificate file, checking its shape against the schema, and
/// re-derives every node.
pub fn load_and_validate(path: &Path) -> CliResult<(Certificate, CertificateStats)> {
    let text = fs::read_to_string(path)?;
    let cert: Certificate = serde_json::from_str(&text).map_err(|e| {
        CliError::Failure(format!("{}: not a valid certificate: {e}", path.display()))
    })?;
    let stats = validate_certificate(&cert)
        .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    Ok((cert, stats))
}

struct Job {
    a: Vec<u32>,
    b: u32,
    out: Option<PathBuf>,
}

struct Done {
    a: Vec<u32>,
    b: u32,
    stats: CertificateStats,
    oracle_root: bool,
    sampled: Vec<String>,
    written: Option<PathBuf>,
}

fn certify_one(job: &Job, oracle: bool) -> CliResult<Done> {
    let opts = CertifyOptions {
        oracle_samples: if oracle { 3 } else { 1 },
        ..CertifyOptions::default()
    };
    let cert = certify_main_lemma_with(&job.a, job.b, &opts).map_err(|e| match e {
        ct_forge_core::Error::Precondition(m) => CliError::Usage(m),
        other => CliError::Failure(format!("a={:?} b={}: {other}", job.a, job.b)),
    })?;
    let stats = validate_certificate(&cert)?;
    if oracle {
        let root = eval_Qa(&job.a, -(job.b as i64))?;
        if !root.is_zero() {
            return Err(CliError::Failure(format!(
                "a={:?} b={}: series oracle gives CT = {root} at the root",
                job.a, job.b
            )));
        }
    }
    let written = match &job.out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&cert)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            fs::write(path, text + "\n")?;
            let (back, _) = load_and_validate(path)?;
            if back != cert {
                return Err(CliError::Failure(format!(
                    "{} does not reload to the same certificate",
                    path.display()
                )));
            }
            Some(path.clone())
        }
        None => None,
    };
    Ok(Done {
        a: job.a.clone(),
        b: job.b,
        stats,
        oracle_root: oracle,
        sampled: cert
            .oracle_checked
            .iter()
            .map(|p| {
                if p.is_empty() {
                    "the root".to_string()
                } else {
                    p.to_string()
                }
            })
            .collect(),
        written,
    })
}

pub fn run(args: &CertifyArgs) -> CliResult {
    let vectors: Vec<Vec<u32>> = match (&args.a, args.max_n, args.max_a) {
        (Some(a), _, _) => vec![nonnegative(a)?],
        (None, Some(n), Some(m)) => tuples(1, n, m)
            .into_iter()
            .filter(|a| a.iter().any(|&x| x > 0))
            .collect(),
        _ => return Err(CliError::Usage("give --a or --max-n with --max-a".into())),
    };
    let grid = args.a.is_none();
    if !grid && args.b.is_none() && !args.all_b {
        return Err(CliError::Usage("give --b or --all-b".into()));
    }
    if grid && args.b.is_some() {
        return Err(CliError::Usage("--b cannot be combined with a grid".into()));
    }

    let mut pairs = Vec::new();
    for a in &vectors {
        let total: u32 = a.iter().sum();
        match args.b {
            Some(b) if !grid => {
                if b < 1 || b > total as i64 {
                    return Err(CliError::Usage(format!(
                        "b = {b} outside 1..={total} for a = {a:?}"
                    )));
                }
                pairs.push((a.clone(), b as u32));
            }
            _ => pairs.extend((1..=total).map(|b| (a.clone(), b))),
        }
    }

    let single = pairs.len() == 1 && args.b.is_some();
    if let Some(dir) = args.json_out.as_ref().filter(|_| !single) {
        fs::create_dir_all(dir)?;
    }
    let jobs: Vec<Job> = pairs
        .into_iter()
        .map(|(a, b)| {
            let out = args.json_out.as_ref().map(|p| {
                if single {
                    p.clone()
                } else {
                    p.join(format!("cert-a{}-b{b}.json", dashed(&a)))
                }
            });
            Job { a, b, out }
        })
        .collect();

    let results: Vec<CliResult<Done>> = jobs
        .par_iter()
        .map(|j| certify_one(j, args.oracle))
        .collect();
    let mut errors = Vec::new();
    let mut count = 0;
    for r in results {
        match r {
            Ok(d) => {
                count += 1;
                let st = &d.stats;
                println!(
                    "a={:?} b={}: {} nodes, {} leaves (zero_case1 {}, zero_case2 {}, base_full_depth {}), {} recursed, depth {}",
                    d.a, d.b, st.nodes, st.leaves, st.zero_case1, st.zero_case2,
                    st.base_full_depth, st.recursed, st.depth
                );
                if d.oracle_root {
                    println!("  oracle: CT = 0 at the root by series expansion");
                }
                if !d.sampled.is_empty() {
                    println!("  oracle: zero CT at {}", d.sampled.join(", "));
                }
                if let Some(p) = d.written {
                    println!("  wrote {} (reloaded and re-validated)", p.display());
                }
            }
            Err(e) => errors.push(e),
        }
    }
    if vectors.len() > 1 || args.all_b {
        println!("{count} certificates validated");
    }
    // the first error is reported by the caller
    for e in errors.iter().skip(1) {
        eprintln!("error: {e}");
    }
    match errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
