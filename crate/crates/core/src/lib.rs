//! Exact constant-term computations for rational functions in the iterated
//! Laurent series field over `Q(q)`, and a machine replay of the vanishing
//! argument behind the q-Dyson constant term.

pub mod ct;
pub mod error;
pub mod identities;
pub mod laurent;
pub mod qdyson;
pub mod qfield;
pub mod tournament;

pub use ct::{
    ct_all_bruteforce, ct_all_series, ct_partial_fraction, ct_var_bruteforce, ct_var_factored,
    ct_x0_truncated, Alpha, ProperRat,
};
pub use error::{Error, Result};
pub use laurent::{ExpVec, FactoredForm, Grading, LaurentPoly, QMonomial, Substitution, VarOrder};
pub use qdyson::{Certificate, DysonParams, Method, ProofPath, Status};
pub use qfield::{BigRat, QPoly, QRat};
pub use tournament::{TournamentInstance, Witness};
