use ct_forge_core::qdyson::{verify_dyson_q1, verify_qdyson, QDysonReport, ReplayStats};
use ct_forge_core::Method;
use rayon::prelude::*;
use serde::Serialize;

use super::{nonnegative, to_json, tuples};
use crate::args::{VerifyArgs, VerifyMethod};
use crate::{CliError, CliResult};

#[derive(Debug, Serialize)]
struct Row {
    a: Vec<u32>,
    holds: bool,
    rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replay: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replay_stats: Option<ReplayStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

impl Row {
    fn from_q(all: Vec<u32>, r: &QDysonReport) -> Row {
        Row {
            a: all,
            holds: r.holds(),
            rhs: r.rhs.to_string(),
            brute: r.brute.as_ref().map(|v| v.to_string()),
            replay: r.replay.as_ref().map(|v| v.to_string()),
            replay_stats: r.replay_stats.clone(),
            counterexample: r.counterexample(),
        }
    }

    fn line(&self) -> String {
        match &self.counterexample {
            Some(c) => format!("MISMATCH {c}"),
            None => format!("LHS = RHS = {}", self.rhs),
        }
    }
}

fn method(m: Option<VerifyMethod>) -> Method {
    match m.unwrap_or(VerifyMethod::Brute) {
        VerifyMethod::Brute => Method::Brute,
        VerifyMethod::Replay => Method::Replay,
        VerifyMethod::Both => Method::Both,
    }
}

fn check(all: &[u32], q1: bool, m: Method) -> CliResult<Row> {
    let (a0, a) = (all[0], &all[1..]);
    if q1 {
        let r = verify_dyson_q1(a0, a)?;
        let holds = r.holds();
        return Ok(Row {
            a: all.to_vec(),
            holds,
            rhs: r.multinomial.to_string(),
            brute: Some(r.lhs.to_string()),
            replay: None,
            replay_stats: None,
            counterexample: (!holds).then(|| {
                format!(
                    "a={all:?}: expansion gives {}, q = 1 closed form gives {}, multinomial is {}",
                    r.lhs, r.specialized, r.multinomial
                )
            }),
        });
    }
    Ok(Row::from_q(all.to_vec(), &verify_qdyson(a0, a, m)?))
}

pub fn run(args: &VerifyArgs) -> CliResult {
    let m = method(args.method);
    let rows: Vec<Row> = match (&args.a, args.max_vars, args.max_a) {
        (Some(a), _, _) => {
            let mut all = nonnegative(&[args.a0])?;
            all.extend(nonnegative(a)?);
            vec![check(&all, args.q1, m)?]
        }
        (None, Some(v), Some(max_a)) => {
            if v == 0 {
                return Err(CliError::Usage("--max-vars must be at least 1".into()));
            }
            tuples(1, v, max_a)
                .par_iter()
                .map(|t| check(t, args.q1, m))
                .collect::<CliResult<Vec<_>>>()?
        }
        _ => {
            return Err(CliError::Usage(
                "give --a or --max-vars with --max-a".into(),
            ))
        }
    };

    let failed: Vec<&Row> = rows.iter().filter(|r| !r.holds).collect();
    if args.json {
        println!("{}", to_json(&rows)?);
    } else if rows.len() == 1 {
        println!("{}", rows[0].line());
        if let Some(st) = &rows[0].replay_stats {
            println!(
                "replay: {} certificates, {} nodes, {} leaves, {} degree checks",
                st.certificates, st.nodes, st.leaves, st.degree_checks
            );
        }
    } else {
        for r in &failed {
            println!("{}", r.line());
        }
        let what = if args.q1 { "q = 1" } else { "q-Dyson" };
        println!(
            "{what}: {} tuples checked, {} hold, {} fail",
            rows.len(),
            rows.len() - failed.len(),
            failed.len()
        );
    }
    match failed.first() {
        None => Ok(()),
        Some(r) => Err(CliError::Failure(
            r.counterexample.clone().unwrap_or_default(),
        )),
    }
}
