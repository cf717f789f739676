//! Rate regions for state amplification under a masking constraint.
//!
//! A state-dependent channel `p(y,z|x,s)` carries an i.i.d. state `S` that the
//! encoder knows non-causally. The receiver observing `Y` wants to learn the
//! state (amplification rate `r_a`, a lower bound on `I(S^n;Y^n)/n`), while an
//! eavesdropper observing `Z` should learn as little as possible (leakage rate
//! `r_l`, an upper bound on `I(S^n;Z^n)/n`). This crate evaluates achievable
//! (inner) and converse (outer) bounds on the `(r_a, r_l)` trade-off over
//! auxiliary policies `p(u,x|s)`, together with closed forms for three channel
//! families: a binary additive-noise channel, a defective-memory channel, and
//! the Gaussian channel.
//!
//! All rates are in bits (log base 2).
//!
//! Layout:
//! - [`dist`], [`info`], [`frontier`]: finite distributions, entropy and
//!   mutual-information primitives, Pareto/convex-hull geometry.
//! - [`channel`]: the channel kernel, encoder policies, joint assembly, and
//!   degradedness checks.
//! - [`regions`]: the per-policy bound evaluators, policy sweeps, and the
//!   differential amplification capacity of reversely degraded channels.
//! - [`binary`], [`memdef`], [`gaussian`]: the three worked channel families.

pub mod binary;
pub mod channel;
pub mod dist;
pub mod frontier;
pub mod gaussian;
pub mod info;
mod lp;
pub mod memdef;
pub mod regions;

use thiserror::Error;

/// Tolerance for probability masses summing to one. Grid-generated
/// distributions accumulate rounding error, so exact comparison is too strict.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Probabilities below this are treated as exact zeros in entropy sums,
/// implementing the 0·log 0 = 0 convention without NaN propagation.
pub const ZERO_PROB: f64 = 1e-15;

/// Magnitude of negative rounding noise that is clamped to zero (mutual
/// informations, rate coordinates).
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Slack used when testing policy feasibility conditions such as
/// `I(U;Y) ≥ I(U;S)`.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// A channel counts as (reversely) degraded when the best stochastic
/// factorization leaves at most this residual.
pub const DEGRADEDNESS_TOLERANCE: f64 = 1e-7;

/// Cross-product tolerance below which three frontier points are treated as
/// collinear by the convex-hull envelope.
pub const HULL_COLLINEAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum Error {
    /// A probability vector failed validation (negative entry, wrong mass).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    /// A scalar parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Axis groups passed to an information measure overlap or name axes the
    /// joint does not have.
    #[error("bad axis group: {0}")]
    BadAxisGroup(String),
    /// Array dimensions do not agree with the declared alphabet sizes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// An operation that needs at least one element received none.
    #[error("empty input: {0}")]
    EmptyInput(String),
    /// A refinement rate outside `[0, cap]` was requested.
    #[error("refinement rate {r_u} outside [0, {cap}]")]
    RefinementRateOutOfRange { r_u: f64, cap: f64 },
    /// A structural precondition on the channel does not hold; `residual` is
    /// the best factorization residual found.
    #[error("channel is not {direction} degraded (best factorization residual {residual:.3e})")]
    NotDegraded {
        direction: &'static str,
        residual: f64,
    },
    /// A closed form was invoked outside its hypothesis.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An internal guarantee was violated; indicates a bug or a numerically
    /// hostile input.
    #[error("internal consistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
