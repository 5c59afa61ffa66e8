use std::io::Write;
use std::time::Instant;

use ct_forge_core::ct::ct_all_bruteforce_stats;
use ct_forge_core::qdyson::{build_qdyson_lhs, rhs_qdyson, verify_qdyson};
use ct_forge_core::Method;
use serde::Serialize;

use super::{dashed, tuples};
use crate::args::BenchArgs;
use crate::{CliError, CliResult};

/// One CSV row. `a` lists `a_0..a_n`; `terms` is the peak number of live
/// terms for brute force and the number of certificate nodes for replay.
#[derive(Debug, Serialize)]
pub struct Row {
    pub n: usize,
    pub a: String,
    pub method: &'static str,
    pub millis: u128,
    pub terms: usize,
}

pub const HEADER: &str = "n,a,method,millis,terms";

fn measure(all: &[u32]) -> CliResult<[Row; 2]> {
    let (a0, a) = (all[0], &all[1..]);
    let t = Instant::now();
    let (v, peak) = ct_all_bruteforce_stats(&build_qdyson_lhs(a0, a))?;
    let brute_ms = t.elapsed().as_millis();
    if v != rhs_qdyson(a0, a) {
        return Err(CliError::Failure(format!(
            "brute force disagrees at a={all:?}"
        )));
    }
    let t = Instant::now();
    let rep = verify_qdyson(a0, a, Method::Replay)?;
    let replay_ms = t.elapsed().as_millis();
    if !rep.holds() {
        return Err(CliError::Failure(format!("replay disagrees at a={all:?}")));
    }
    let nodes = rep.replay_stats.map_or(0, |s| s.nodes);
    let row = |method, millis, terms| Row {
        n: a.len(),
        a: dashed(all),
        method,
        millis,
        terms,
    };
    Ok([
        row("brute", brute_ms, peak),
        row("replay", replay_ms, nodes),
    ])
}

/// Rows for every `(a_0, ..., a_n)` with `1 <= n <= max_n` and entries at
/// most `max_a`, measured one at a time.
pub fn rows(max_n: usize, max_a: u32) -> CliResult<Vec<Row>> {
    let mut out = Vec::new();
    if max_n == 0 {
        return Ok(out);
    }
    for t in tuples(2, max_n + 1, max_a) {
        out.extend(measure(&t)?);
    }
    Ok(out)
}

pub fn write_csv<W: Write>(w: W, rows: &[Row]) -> CliResult {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(HEADER.split(','))
        .map_err(|e| CliError::Failure(e.to_string()))?;
    for r in rows {
        wr.serialize(r)
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn run(args: &BenchArgs) -> CliResult {
    let rows = rows(args.max_n, args.max_a)?;
    match &args.out {
        Some(p) => write_csv(std::fs::File::create(p)?, &rows),
        None => write_csv(std::io::stdout().lock(), &rows),
    }
}
