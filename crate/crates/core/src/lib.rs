//! Constructive rearrangement machinery for trigonometric polynomials.
//!
//! The crate turns a family of existence results about rearranged
//! trigonometric sums into deterministic, seeded algorithms:
//!
//! * [`poly`] — canonical cosine-form polynomials, grid-certified sup-norm
//!   brackets, complex/real conversion, de la Vallee Poussin sums, and
//!   coefficient extraction from uniform samples.
//! * [`selection`] — choosing `m` of `n` terms with small uniform norm via
//!   residue classes whose moduli come from a greedy Egyptian-fraction
//!   decomposition, plus collision-minimizing prime search and padding.
//! * [`discrepancy`] — seeded local search standing in for the
//!   non-constructive six-deviations signing: sign balancing, half/half
//!   splits, two-option coefficient rounding, and recursive balanced
//!   orderings.
//! * [`rearrange`] — block schedules built from successive de la Vallee
//!   Poussin sums, rounded block membership, per-block balanced orderings,
//!   and flattened rearrangement plans with prefix-error audits.
//! * [`corpus`] — deterministic seeded test-polynomial generators.
//! * [`io`] — the JSON/CSV file formats shared with the CLI.
//!
//! Everything is deterministic given the seeds carried in the config
//! structs; no global RNG state is consulted.

pub mod corpus;
pub mod discrepancy;
pub mod error;
mod grid;
pub mod index_set;
pub mod io;
pub mod poly;
pub mod rearrange;
pub mod selection;

pub use error::{Error, Fault, Result};
pub use index_set::IndexSet;
pub use poly::{
    fourier_coeffs, from_complex, norm_lower, subsum, sup_norm, to_complex, vallee_poussin,
    ComplexCoeffs, NormEstimate, SampledFunction, TrigPolynomial, TrigTerm, DEFAULT_REFINE,
};
