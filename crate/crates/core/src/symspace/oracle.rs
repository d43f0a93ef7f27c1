//! Brute-force simulation in the full `2^n` dimensional Hilbert space.
//!
//! Only used to cross-check the symmetric-subspace machinery. Each mixer
//! factor is applied as a product of single-qubit `X` rotations and each cost
//! factor as a phase on `|0...0>`, so none of the Dicke-basis code is reused.

use nalgebra::DVector;

use super::{SymVector, C64};
use crate::trotter::{Generator, ProductFormula};
use crate::{check_qubits, Error, Result};

pub const FULL_SPACE_MAX_QUBITS: usize = 12;

/// Runs `formula` from `|+>^{(x)n}` with `H1 = -i|0><0|` and
/// `H2 = -i alpha H_x`, then projects onto the Dicke basis.
pub fn full_space_oracle(n: usize, alpha: f64, formula: &ProductFormula) -> Result<SymVector> {
    check_qubits(n)?;
    if n > FULL_SPACE_MAX_QUBITS {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "full-space oracle is limited to 12 qubits",
        });
    }
    let dim = 1usize << n;
    let mut psi = vec![C64::new((dim as f64).sqrt().recip(), 0.0); dim];

    for factor in formula.factors() {
        match factor.generator {
            Generator::Cost => {
                psi[0] *= C64::from_polar(1.0, -factor.coefficient);
            }
            Generator::Mixer => {
                let theta = alpha * factor.coefficient;
                let (cos, sin) = (theta.cos(), theta.sin());
                let minus_i_sin = C64::new(0.0, -sin);
                for qubit in 0..n {
                    let bit = 1usize << qubit;
                    for i in 0..dim {
                        if i & bit == 0 {
                            let (a, b) = (psi[i], psi[i | bit]);
                            psi[i] = a * cos + b * minus_i_sin;
                            psi[i | bit] = a * minus_i_sin + b * cos;
                        }
                    }
                }
            }
        }
    }

    let mut sums = vec![C64::new(0.0, 0.0); n + 1];
    for (z, amp) in psi.iter().enumerate() {
        sums[z.count_ones() as usize] += amp;
    }
    let amp = DVector::from_iterator(
        n + 1,
        sums.into_iter()
            .enumerate()
            .map(|(k, s)| s / (binomial(n, k) as f64).sqrt()),
    );
    SymVector::new(n, amp)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
