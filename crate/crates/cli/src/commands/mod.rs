pub mod bench;
pub mod certify;
pub mod ct;
pub mod identities;
pub mod tournament;
pub mod verify;

use ct_forge_core::DysonParams;

use crate::{CliError, CliResult};

/// Reads a list of exponents, rejecting negative entries as a usage error.
pub(crate) fn nonnegative(a: &[i64]) -> CliResult<Vec<u32>> {
    DysonParams::from_signed(a)
        .map(|p| p.a)
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Every tuple with `min_len..=max_len` entries in `0..=max_a`, shortest
/// first, each length in lexicographic order.
pub(crate) fn tuples(min_len: usize, max_len: usize, max_a: u32) -> Vec<Vec<u32>> {
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

pub(crate) fn dashed(a: &[u32]) -> String {
    a.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

pub(crate) fn to_json<T: serde::Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Failure(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_grid() {
        assert_eq!(tuples(1, 1, 1), vec![vec![0], vec![1]]);
        assert_eq!(tuples(1, 2, 1).len(), 2 + 4);
        assert!(tuples(1, 0, 3).is_empty());
        assert_eq!(dashed(&[1, 0, 2]), "1-0-2");
    }

    #[test]
    fn negative_entries_are_usage_errors() {
        assert!(matches!(nonnegative(&[1, -1]), Err(CliError::Usage(_))));
        assert_eq!(nonnegative(&[2, 0]).unwrap(), vec![2, 0]);
    }
}
