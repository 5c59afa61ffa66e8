//! Workloads shared by the benchmarks.

use ct_forge_core::qdyson::build_qdyson_lhs;
use ct_forge_core::{FactoredForm, QMonomial};

/// `(a_0, ..., a_n)` tuples used for the brute-force and replay timings.
pub const QDYSON_CASES: &[&[u32]] = &[&[1, 1, 1], &[2, 2, 1], &[2, 2, 2], &[3, 2, 2, 1]];

/// `(a, b)` pairs for certificate construction.
pub const CERT_CASES: &[(&[u32], u32)] =
    &[(&[1, 1], 2), (&[2, 1], 3), (&[2, 2, 1], 4), (&[2, 2, 2], 5)];

pub fn dyson_product(all: &[u32]) -> FactoredForm {
    build_qdyson_lhs(all[0], &all[1..])
}

/// `x_0^{-1} / Π_t (1 - q^t x_0/x_1)` over `t` in `0..poles`, proper in `x_0`.
pub fn pole_family(poles: i64) -> FactoredForm {
    let mut f = FactoredForm::one();
    for t in 0..poles {
        f.mul_binomial(QMonomial::ratio(t, 0, 1), -1).unwrap();
    }
    f.mul_binomial(QMonomial::ratio(1, 2, 0), 1).unwrap();
    f.mul_qmonomial(&QMonomial::var(0), -1).unwrap();
    f
}
