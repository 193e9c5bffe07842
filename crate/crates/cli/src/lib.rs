//! Config-driven batch runs: the α sweep of the analytic toy state, collision
//! runs with entanglement time series, and the linear-entropy versus von
//! Neumann comparison with timings.

pub mod collision;
pub mod config;
pub mod modes;

pub use collision::{run_collision, CollisionOptions, CollisionOutcome};
pub use config::RunConfig;
pub use modes::{run, Mode, RunManifest};

use twofermion::Error;

/// Process exit code for an error: 2 for configuration problems, 3 when the
/// step size violates the stability bounds, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Unstable(_) => 3,
        Error::InvalidConfig(_)
        | Error::InvalidGrid(_)
        | Error::OutOfRange { .. }
        | Error::Unresolved(_)
        | Error::GridMismatch => 2,
        _ => 1,
    }
}
