use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use super::formula::{block_times, check_order};
use crate::symspace::{build_hx, plus_state, Spectrum, SymOperator, SymVector, C64};
use crate::{Error, Result};

/// Alternating cost/mixer angles of the QAOA circuit obtained from
/// `S_q^r(t/r)`.
///
/// Angles are raw reals in units of evolution time: the cost angle is the
/// full `t_k` of the `k`-th second-order block and the mixer angle is the
/// merged pair of neighbouring half-blocks. Mixer angles still have to be
/// multiplied by the walk coupling `alpha` when the circuit is applied.
///
/// `leading_beta` is the half-block mixer that acts first. On `|+>` it only
/// contributes the global phase `e^{-i alpha n leading_beta}`, which is why
/// the QAOA ansatz omits it; it is kept so the circuit can be compared with
/// the product formula as an operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QaoaAngles {
    pub p: usize,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub leading_beta: f64,
}

/// Recovers the QAOA angles of `S_q^r(t / r)` through its decomposition into
/// second-order blocks `prod_k S_2(t_k)`.
pub fn qaoa_angles(q: u32, t: f64, r: u64) -> Result<QaoaAngles> {
    check_order(q)?;
    if r == 0 {
        return Err(Error::InvalidArgument("step count must be at least 1".into()));
    }
    let step = block_times(q, t / r as f64)?;
    let times: Vec<f64> = (0..r).flat_map(|_| step.iter().copied()).collect();
    let p = times.len();
    let betas = (0..p)
        .map(|k| match times.get(k + 1) {
            Some(next) => (times[k] + next) / 2.0,
            None => times[k] / 2.0,
        })
        .collect();
    Ok(QaoaAngles {
        p,
        leading_beta: times[0] / 2.0,
        gammas: times,
        betas,
    })
}

impl QaoaAngles {
    /// The full circuit, including the leading mixer, as a Dicke-basis
    /// operator.
    pub fn circuit_operator(&self, n: usize, alpha: f64) -> Result<SymOperator> {
        let mixer = Spectrum::of(&build_hx(n)?)?;
        let mut acc = mixer.propagator(alpha * self.leading_beta);
        for (gamma, beta) in self.gammas.iter().zip(&self.betas) {
            acc = cost_layer(n, *gamma)?.compose(&acc)?;
            acc = mixer.propagator(alpha * beta).compose(&acc)?;
        }
        Ok(acc)
    }

    /// `prod_k e^{-i alpha beta_k H_x} e^{-i gamma_k H_0} |+>`.
    pub fn ansatz_state(&self, n: usize, alpha: f64) -> Result<SymVector> {
        let mixer = Spectrum::of(&build_hx(n)?)?;
        let mut state = plus_state(n)?;
        for (gamma, beta) in self.gammas.iter().zip(&self.betas) {
            state = cost_layer(n, *gamma)?.apply(&state)?;
            state = mixer.evolve(alpha * beta, &state)?;
        }
        Ok(state)
    }

    /// Angles reduced to `gamma in [0, 2 pi)` and physical mixer angle
    /// `alpha beta in [0, pi)`, for display only.
    ///
    /// The mixer reduction holds up to the global phase `(-1)^n` of
    /// `e^{-i pi H_x}`; never feed these back into operator comparisons.
    pub fn reduced(&self, alpha: f64) -> Vec<(f64, f64)> {
        self.gammas
            .iter()
            .zip(&self.betas)
            .map(|(g, b)| (g.rem_euclid(2.0 * PI), (alpha * b).rem_euclid(PI)))
            .collect()
    }
}

fn cost_layer(n: usize, gamma: f64) -> Result<SymOperator> {
    let mut m = DMatrix::<C64>::identity(n + 1, n + 1);
    m[(0, 0)] = C64::from_polar(1.0, -gamma);
    SymOperator::new(n, m)
}
