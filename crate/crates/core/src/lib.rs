//! Trotterized continuous-time quantum walk search and the QAOA sequences it
//! induces.
//!
//! Everything is simulated exactly in the `n + 1` dimensional permutation
//! symmetric subspace spanned by the Dicke states. The crate is organised
//! bottom-up:
//!
//! * [`symspace`]: Dicke-basis vectors and operators, the hypercube mixer,
//!   the marked-state projector, exact evolution, matrix powers and a
//!   brute-force full Hilbert space oracle for small `n`.
//! * [`ctqw`]: the optimal walk coupling, spectral gap, search time and the
//!   exact walk overlap.
//! * [`trotter`]: Suzuki product formulas, their grouping into alternating
//!   QAOA layers, step operators and angle recovery.
//! * [`bounds`]: commutator sums, Trotter error bounds and the analytic
//!   depth estimates, all evaluated in log domain.
//! * [`depthsearch`]: the numeric optimal-depth search, the Grover baseline
//!   and the depth-ratio sweeps.

pub mod bounds;
pub mod ctqw;
pub mod depthsearch;
mod error;
pub mod symspace;
pub mod trotter;

pub use error::{Error, Result};

/// Largest qubit count accepted anywhere in the crate.
pub const MAX_QUBITS: usize = 80;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "at least one qubit is required",
        });
    }
    if n > MAX_QUBITS {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "qubit count exceeds the supported maximum of 80",
        });
    }
    Ok(())
}
