//! Negative Pell solubility and the 2-part of narrow class groups of real
//! quadratic fields `Q(sqrt d)` for `d` whose prime divisors are all 1 or 2 mod 4.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorisation, Jacobi symbols, the sieve for the family of
//!   special radicands and the regularity ("nice") predicate.
//! * [`pell`]: continued fractions of `sqrt d` and fundamental solutions.
//! * [`gf2`]: bit-packed linear algebra over GF(2).
//! * [`qfclass`]: the brute-force oracle. Narrow class groups from indefinite
//!   binary quadratic forms, their 2-Sylow subgroups and the Artin pairing chain.
//! * [`redei`]: the fast 4-rank via Redei matrices, conic solving and Redei symbols.
//! * [`model`]: exact random-matrix rank distributions and the density constants.
//! * [`combi`]: cubes, additive systems, box finding and the permutation
//!   second moment bound.
//! * [`equidist`]: preboxes and exact Legendre-symbol fiber counts.
//!
//! Probability-valued code is generic over a [`Scalar`]; the aliases below fix
//! the two instantiations used throughout the workspace.

pub mod arith;
pub mod combi;
pub mod equidist;
mod error;
pub mod gf2;
pub mod model;
pub mod pell;
pub mod qfclass;
pub mod redei;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

/// Exact probability, always in lowest terms.
pub type ExactProb = Exact;

/// Rank distribution with exact rational weights.
pub type ExactRankDistribution = model::RankDistribution<Exact>;

/// Rank distribution evaluated in double precision.
pub type RankDistributionF64 = model::RankDistribution<f64>;

/// Acceptance-density report with exact rational densities.
pub type ExactDensityReport = combi::DensityReport<Exact>;

/// Acceptance-density report in double precision.
pub type DensityReportF64 = combi::DensityReport<f64>;
