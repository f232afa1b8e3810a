//! Exact decomposition of a thermal radiation mode's energy into independent
//! binary components, plus the samplers and statistical tests that verify it.
//!
//! A single cavity mode at frequency `nu` and temperature `T` has dimensionless
//! energy `eta = E/(h nu)`, exponentially distributed with rate `beta = h nu/(k T)`.
//! The integer part `xi = floor(eta)` follows the Planck-Bose (geometric) law and
//! splits into independent "binary photons" with weights `2^s`. The fractional
//! part `zeta = eta - xi` follows a truncated exponential on `[0,1)` whose binary
//! digits are mutually independent Bernoulli variables. At `beta -> 0` the digits
//! become fair coin flips: the zero-point fluctuations act as an ideal random
//! number generator.
//!
//! * [`distributions`]: closed-form densities, pmfs, digit probabilities, and the
//!   exact algebraic identities connecting them.
//! * [`samplers`]: seeded, reproducible Monte Carlo realizations of every variable
//!   along independent routes.
//! * [`stats`]: goodness-of-fit, independence, and bit-stream tests that turn the
//!   identities into pass/fail checks.

pub mod distributions;
pub mod samplers;
pub mod stats;

/// Crate version, embedded in machine-readable reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
