use ct_forge_core::tournament::{
    build_tournament, check_vector, find_witness, lemma_vectors, witness_holds, LemmaReport,
    Outcome,
};
use ct_forge_core::TournamentInstance;
use rayon::prelude::*;
use serde::Serialize;

use super::to_json;
use crate::args::TournamentArgs;
use crate::{CliError, CliResult};

#[derive(Serialize)]
struct Summary {
    max_s: usize,
    max_a: u32,
    #[serde(flatten)]
    report: LemmaReport,
    counterexamples: u64,
}

fn exhaustive(args: &TournamentArgs) -> CliResult {
    let vectors = lemma_vectors(args.max_s, args.max_a);
    let parts = vectors
        .par_iter()
        .map(|a| check_vector(a))
        .collect::<Result<Vec<_>, _>>()?;
    let report = parts
        .iter()
        .fold(LemmaReport::default(), |acc, r| acc.merge(r));
    let summary = Summary {
        max_s: args.max_s,
        max_a: args.max_a,
        report,
        counterexamples: 0,
    };
    if args.json {
        println!("{}", to_json(&summary)?);
    } else {
        let r = &summary.report;
        println!(
            "s <= {}, A_i <= {}: {} vectors, {} instances, case 1: {}, case 2: {}, counterexamples: 0",
            args.max_s, args.max_a, r.vectors, r.instances, r.case1, r.case2
        );
    }
    Ok(())
}

fn single(a: Vec<u32>, k: Vec<i64>, relaxed: bool) -> CliResult {
    let inst = if relaxed {
        TournamentInstance::relaxed(a, k)?
    } else {
        TournamentInstance::new(a, k)?
    };
    if let Some(w) = find_witness(inst.a(), inst.k()) {
        if !witness_holds(inst.a(), inst.k(), w) {
            return Err(CliError::Failure(format!("witness {w} does not hold")));
        }
        println!("witness: {w}");
        return Ok(());
    }
    if !relaxed {
        return Err(CliError::Failure(format!(
            "no witness for A={:?} k={:?}",
            inst.a(),
            inst.k()
        )));
    }
    let t = build_tournament(&inst)?;
    println!("no witness; tournament:");
    for arc in &t.arcs {
        println!("  {} -> {} [{}]", arc.from, arc.to, arc.label);
    }
    match &t.outcome {
        Outcome::Cycle {
            vertices,
            label_sum,
        } => println!("cycle {vertices:?} with label sum {label_sum}"),
        Outcome::Order {
            order,
            span,
            tail_sum,
        } => println!("transitive order {order:?}: span {span}, tail sum {tail_sum}"),
    }
    if t.contradicts(&inst) {
        println!("k leaves [1, {}], as the lemma predicts", inst.total());
        Ok(())
    } else {
        Err(CliError::Failure(
            "tournament does not reach the contradiction".into(),
        ))
    }
}

pub fn run(args: &TournamentArgs) -> CliResult {
    match (&args.weights, &args.k) {
        (Some(a), Some(k)) => single(a.clone(), k.clone(), args.relaxed),
        _ => exhaustive(args),
    }
}
