//! Numerical toolkit for radial functions of the max norm on the plane.
//!
//! The central object is a bivariate function built from a one-dimensional
//! profile `f0` via `f(x) = f0(max(|x1|, |x2|))`. Everything else follows
//! from that shape: its Fourier transform collapses to one-dimensional sine
//! transforms, positive definiteness reduces to the monotonicity of a single
//! function of one variable, and absolute-convergence questions reduce to
//! weighted boundary integrals of the profile.
//!
//! Modules:
//!
//! * [`quadrature`]: adaptive Gauss-Kronrod integration with oscillatory
//!   splitting, the shared engine for every transform in the crate.
//! * [`profile`]: profile families (truncated powers, exponentials, exact
//!   rational splines, tabulated curves) and their companion profiles.
//! * [`transform`]: sine transforms, the reduction of the planar transform
//!   to them, a direct 2-D oracle, and endpoint asymptotics.
//! * [`positivity`]: positive-definiteness verdicts via the companion
//!   profile's cosine transform and via direct transform scans.
//! * [`membership`]: convergence ladders for weighted boundary integrals
//!   and tail-supremum profiles.
//! * [`splines`]: compactly supported piecewise-polynomial profiles with
//!   prescribed smoothness, built in exact rational arithmetic.
//! * [`dimwalk`]: descent and ascent between radial profiles in different
//!   space dimensions.
//! * [`summability`]: periodic kernels generated by sampling a multiplier
//!   on the integer lattice, their positivity and L1 growth.
//! * [`acceptance`]: the self-check suite used both by `cargo test` and by
//!   the command line tool.

use thiserror::Error;

pub mod acceptance;
pub mod dimwalk;
pub mod membership;
pub mod positivity;
pub mod profile;
pub mod quadrature;
pub mod report;
mod special;
pub mod splines;
pub mod summability;
pub mod transform;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain an operation is defined on.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The requested operation is not defined for this profile.
    #[error("unsupported profile: {0}")]
    Unsupported(String),
    /// An iterative computation ran out of its budget. The payload carries
    /// the best estimate so callers can decide whether to use it.
    #[error("did not converge: {context} (best estimate {best}, error {err})")]
    NonConvergent {
        context: String,
        best: f64,
        err: f64,
    },
    /// The integrand produced a NaN or infinity inside the domain.
    #[error("non-finite integrand value at {at}")]
    NonFiniteValue { at: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
