use ct_forge_core::identities::run_identity_suite;

use super::to_json;
use crate::args::IdentitiesArgs;
use crate::{CliError, CliResult};

pub fn run(args: &IdentitiesArgs) -> CliResult {
    let checks = run_identity_suite(args.degree)?;
    if args.json {
        println!("{}", to_json(&checks)?);
    } else {
        for c in &checks {
            println!("{c}");
        }
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    println!(
        "{} of {} identity checks pass",
        checks.len() - failed.len(),
        checks.len()
    );
    match failed.first() {
        None => Ok(()),
        Some(c) => Err(CliError::Failure(format!(
            "{} fails at {}",
            c.identity, c.params
        ))),
    }
}
