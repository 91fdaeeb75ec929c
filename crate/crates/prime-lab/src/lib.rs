//! prime-lab: probabilistic models of the distribution of primes and
//! prime k-tuples, checked against exact sieved counts.
//!
//! The crate provides:
//! - exact π(x) and prime k-tuple counts via a segmented sieve with a disk
//!   cache (`sieve`)
//! - generalized logarithmic integrals Li_k(x) with certified error bounds
//!   (`logint`)
//! - Hardy–Littlewood singular-series constants for admissible patterns
//!   (`singular`)
//! - means and standard deviations of three count models, the hypergeometric
//!   urn pmf, and the Riemann-conjecture deviation bound (`models`)
//! - closed-form densities for the derived average-gap random variables
//!   (`densities`)
//! - seeded urn simulations for the with/without-replacement models
//!   (`montecarlo`)
//! - reproduction of the benchmark tables T1–T4 as structured rows with CSV
//!   and Markdown emission (`report`)

pub mod densities;
pub mod error;
pub mod logint;
pub mod models;
pub mod montecarlo;
pub mod report;
pub mod sieve;
pub mod singular;

pub use error::{Error, Result};
pub use logint::{ibp_identity_defect, li, LiValue, Tol};
pub use sieve::{CountRecord, Provenance, Sieve, TuplePattern};
