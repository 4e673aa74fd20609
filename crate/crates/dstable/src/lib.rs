//! Discrete stable laws on the integer lattice.
//!
//! This crate implements the characteristic-function algebra of casual-stable
//! lattice distributions: a law `f` is casually stable over a base law `ĝ`
//! when, for every `n`, there is a normalizer characteristic function `g_n`
//! with
//!
//! ```text
//! f(t) = ( ĝ₁(i log g_n(−t)) + ĝ₂(−i log g_n(t)) )^n,
//! ```
//!
//! where `ĝ₁`/`ĝ₂` are the negative- and nonnegative-support parts of `ĝ`.
//! For lattice laws this composition is a generating-function evaluation at
//! `z = g_n(t)`, which is how [`compose`] computes it — no complex logarithm,
//! no branch cuts.
//!
//! The pieces:
//!
//! * [`cf`] — closed-form characteristic-function families (positive,
//!   symmetric and two-sided discrete stable, Hermite, compound Poisson),
//!   the normalizer sequences, generating functions, and the
//!   principal-branch power.
//! * [`compose`] — split lattice laws, the casual composition operator, and
//!   representation verification, including the non-uniqueness construction.
//! * [`invert`] — DFT inversion of characteristic functions to probability
//!   windows, the validity oracle, closed-form PMFs, the minimum-λ solver,
//!   and distance metrics.
//! * [`sample`] — seeded samplers for all the laws plus the triangular-array
//!   row sums, with empirical histograms.
//! * [`harness`] — run configurations and the command entry points behind
//!   the `dstable` binary.
//!
//! ```
//! use dstable::compose::{verify_representation, CasualRepresentation};
//!
//! // the symmetric discrete stable law is exactly representable over the
//! // positive discrete stable base for every n
//! let rep = CasualRepresentation::symmetric_discrete_stable(1.0, 0.5, 16).unwrap();
//! let report = verify_representation(&rep, 1 << 10, 1e-12);
//! assert!(report.verdict);
//! ```

pub mod cf;
pub mod compose;
pub mod harness;
pub mod invert;
pub mod sample;

pub use cf::{principal_power, LatticeCf, NormalizerFamily, ParamError, Pgf};
pub use compose::{
    casual_compose_pow, casual_inner, verify_representation, CasualRepresentation, SplitLatticePgf,
    VerificationReport,
};
pub use invert::{
    invert_to_pmf, is_valid_cf, min_valid_lambda, sup_cf_distance, tv_distance, PmfWindow,
};
pub use sample::{RandomSource, SampleBatch};
