//! Analytic error and depth bounds for the trotterized walk.
//!
//! All magnitudes are carried as natural logarithms and only exponentiated
//! at the edges: `t*^{q+1}` alone reaches `1e97` at `n = 68, q = 8`.
//!
//! The error budget in this module is a spectral-norm budget on
//! `||U - S_q^r||_2`. The numeric search in [`crate::depthsearch`] uses an
//! overlap-deficit budget instead; the two are labelled by [`EpsilonKind`].

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::ctqw::{alpha_star, t_star, Walk};
use crate::symspace::{build_h0, build_hx, commutator, spectral_norm, C64};
use crate::trotter::{check_order, stage_count, MixerFrame, TrotterStep};
use crate::{check_qubits, Error, Result};

/// Tolerance for the agreement of the two closed forms of the depth.
const FORM_AGREEMENT_TOL: f64 = 1e-9;

/// Largest order accepted by [`delta_exact`] (`2^{q+1}` nested commutators).
pub const DELTA_EXACT_MAX_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonKind {
    /// Budget on `||U(alpha*, t) - S_q^r(t/r)||_2`.
    SpectralNorm,
    /// Budget on `|<0|U|+>|^2 - |<0|S^r|+>|^2`.
    OverlapDeficit,
}

impl EpsilonKind {
    pub fn label(self) -> &'static str {
        match self {
            EpsilonKind::SpectralNorm => "spectral-norm",
            EpsilonKind::OverlapDeficit => "overlap-deficit",
        }
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// `ln(2 alpha* (n + 1) + 1)`, the base shared by the commutator bound and
/// the depth prefactor.
fn ln_coupling_base(n: usize) -> Result<f64> {
    Ok((2.0 * alpha_star(n)? * (n + 1) as f64 + 1.0).ln())
}

/// `ln delta_bound(n, q)`.
pub fn ln_delta_bound(n: usize, q: u32) -> Result<f64> {
    check_qubits(n)?;
    if q == 0 {
        return Err(Error::InvalidArgument("commutator order must be at least 1".into()));
    }
    Ok((2.0 * (n + 1) as f64).ln() + q as f64 * ln_coupling_base(n)?)
}

/// Upper bound `2 (n + 1) (2 alpha* (n + 1) + 1)^q` on the nested commutator
/// sum.
pub fn delta_bound(n: usize, q: u32) -> Result<f64> {
    Ok(ln_delta_bound(n, q)?.exp())
}

/// Brute-force nested commutator sum
/// `sum_mu ||[H_{mu_{q+1}}, ... [H_{mu_2}, H_{mu_1}] ...]||_2`
/// over all `2^{q+1}` index sequences, with `H1 = -i H_0` and
/// `H2 = -i alpha* H_x` in the symmetric subspace.
pub fn delta_exact(n: usize, q: u32) -> Result<f64> {
    check_qubits(n)?;
    if q == 0 || q > DELTA_EXACT_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "delta_exact supports orders 1..={DELTA_EXACT_MAX_ORDER}, got {q}"
        )));
    }
    let minus_i = C64::new(0.0, -1.0);
    let alpha = alpha_star(n)?;
    let gens: [DMatrix<C64>; 2] = [
        build_h0(n)?.into_matrix() * minus_i,
        build_hx(n)?.into_matrix() * (minus_i * alpha),
    ];
    let mut total = 0.0;
    for mask in 0u32..(1 << (q + 1)) {
        let pick = |i: u32| &gens[((mask >> i) & 1) as usize];
        // [A, A] = 0 kills every sequence with mu_1 == mu_2
        if (mask & 1) == ((mask >> 1) & 1) {
            continue;
        }
        let mut nested = commutator(pick(1), pick(0));
        for i in 2..=q {
            nested = commutator(pick(i), &nested);
        }
        total += spectral_norm(&nested);
    }
    Ok(total)
}

/// `ln` of `2 Upsilon^{q+1} delta t^{q+1} / (r^q (q + 1))`.
pub fn ln_trotter_error_bound(q: u32, delta: f64, t: f64, r: f64, stages: f64) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidOrder(q));
    }
    for (name, v) in [("delta", delta), ("t", t), ("r", r), ("stages", stages)] {
        check_positive(name, v)?;
    }
    let q = q as f64;
    Ok(LN_2 + (q + 1.0) * stages.ln() + delta.ln() + (q + 1.0) * t.ln()
        - q * r.ln()
        - (q + 1.0).ln())
}

/// Spectral-norm bound on `||U(t) - S_q^r(t/r)||_2`.
pub fn trotter_error_bound(q: u32, delta: f64, t: f64, r: u64, stages: u64) -> Result<f64> {
    Ok(ln_trotter_error_bound(q, delta, t, r as f64, stages as f64)?.exp())
}

/// `p0 = pi (2 alpha* (n + 1) + 1) / (2 5^{3/2} (q + 1)^{1/q})`.
pub fn p0(n: usize, q: f64) -> Result<f64> {
    check_qubits(n)?;
    check_positive("q", q)?;
    Ok((PI.ln() + ln_coupling_base(n)? - 2f64.ln() - 1.5 * 5f64.ln() - (q + 1.0).ln() / q).exp())
}

/// Analytic depth for a target spectral error, with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthEstimate {
    pub n: usize,
    /// Formula order; always even except for [`analytic_depth_at_order`].
    pub q: f64,
    pub epsilon: f64,
    pub epsilon_kind: EpsilonKind,
    pub delta_bound: f64,
    pub p0: f64,
    /// Depth before rounding up.
    pub p_analytic: f64,
    pub log2_p: f64,
}

/// Depth from solving the Trotter error bound for `p = r Upsilon_q` at
/// `t = t*`, with `delta = delta_bound`.
fn ln_depth_from_error_bound(n: usize, q: f64, epsilon: f64) -> Result<f64> {
    let ln_stages = (q / 2.0 - 1.0) * 5f64.ln();
    let ln_delta = (2.0 * (n + 1) as f64).ln() + q * ln_coupling_base(n)?;
    let ln_t = t_star(n)?.ln();
    Ok((2.0 + 1.0 / q) * ln_stages + (LN_2 + ln_delta) / q + (1.0 + 1.0 / q) * ln_t
        - (epsilon * (q + 1.0)).ln() / q)
}

/// The same depth after substituting `Upsilon_q`, `t*` and `delta_bound`:
/// `p0 2^{n/2} (2 pi (n + 1) 2^{n/2} / (5 eps))^{1/q} 5^q`.
fn ln_depth_substituted(n: usize, q: f64, epsilon: f64) -> Result<f64> {
    let half_n = n as f64 / 2.0 * LN_2;
    let inner = (2.0 * PI * (n + 1) as f64).ln() + half_n - (5.0 * epsilon).ln();
    Ok(p0(n, q)?.ln() + half_n + inner / q + q * 5f64.ln())
}

/// Analytic depth at a (possibly non-integer) order, cross-checking both
/// algebraic forms.
pub fn analytic_depth_at_order(n: usize, q: f64, epsilon: f64) -> Result<DepthEstimate> {
    check_qubits(n)?;
    check_positive("epsilon", epsilon)?;
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidArgument(format!("order must be at least 1, got {q}")));
    }
    let ln_a = ln_depth_from_error_bound(n, q, epsilon)?;
    let ln_b = ln_depth_substituted(n, q, epsilon)?;
    // relative agreement of the depths is |e^{ln_a - ln_b} - 1| ~ |ln_a - ln_b|
    if (ln_a - ln_b).abs() > FORM_AGREEMENT_TOL {
        return Err(Error::Inconsistent {
            what: "depth from error bound vs substituted form",
            lhs: ln_a,
            rhs: ln_b,
        });
    }
    Ok(DepthEstimate {
        n,
        q,
        epsilon,
        epsilon_kind: EpsilonKind::SpectralNorm,
        delta_bound: 2.0 * (n + 1) as f64 * (q * ln_coupling_base(n)?).exp(),
        p0: p0(n, q)?,
        p_analytic: ln_a.exp(),
        log2_p: ln_a / LN_2,
    })
}

/// Analytic depth at an even order `q` for spectral error `epsilon`.
pub fn analytic_depth(n: usize, q: u32, epsilon: f64) -> Result<DepthEstimate> {
    check_order(q)?;
    analytic_depth_at_order(n, q as f64, epsilon)
}

/// Depth-minimising order: the real stationary point and the even order
/// actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalOrder {
    pub q_real: f64,
    pub q_even: u32,
}

pub fn optimal_order(n: usize, epsilon: f64) -> Result<OptimalOrder> {
    check_qubits(n)?;
    check_positive("epsilon", epsilon)?;
    let radicand = (n as f64 * 2f64.sqrt().ln() + (2.0 * PI * (n + 1) as f64).ln()
        - (5.0 * epsilon).ln())
        / 5f64.ln();
    if radicand <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "optimal order undefined: non-positive radicand {radicand} at n={n}, epsilon={epsilon}"
        )));
    }
    let q_real = radicand.sqrt();
    let q_even = ((q_real / 2.0).round() as u32 * 2).max(2);
    Ok(OptimalOrder { q_real, q_even })
}

/// Closed-form depth at the optimal real order,
/// `p0 (2 pi (n + 1) / (5 eps))^{2/q} 2^{n/2 + sqrt(n) sqrt(2 log2 5)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormDepth {
    pub n: usize,
    pub epsilon: f64,
    pub q_real: f64,
    pub p0: f64,
    pub p: f64,
    pub log2_p: f64,
}

pub fn analytic_depth_closed(n: usize, epsilon: f64) -> Result<ClosedFormDepth> {
    let OptimalOrder { q_real, .. } = optimal_order(n, epsilon)?;
    let p0 = p0(n, q_real)?;
    let n_f = n as f64;
    let log2_p = p0.log2()
        + 2.0 / q_real * (2.0 * PI * (n_f + 1.0) / (5.0 * epsilon)).log2()
        + n_f / 2.0
        + n_f.sqrt() * (2.0 * 5f64.log2()).sqrt();
    Ok(ClosedFormDepth {
        n,
        epsilon,
        q_real,
        p0,
        p: (log2_p * LN_2).exp(),
        log2_p,
    })
}

/// Smallest step count meeting the spectral budget, and the depth it gives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RequiredSteps {
    pub r: u64,
    pub p: u64,
    pub bound_at_r: f64,
}

pub fn required_steps(n: usize, q: u32, epsilon: f64) -> Result<RequiredSteps> {
    check_order(q)?;
    check_positive("epsilon", epsilon)?;
    let stages = stage_count(q)?;
    let delta = delta_bound(n, q)?;
    let t = t_star(n)?;
    let ln_bound = |r: f64| ln_trotter_error_bound(q, delta, t, r, stages as f64);
    let target = epsilon.ln();
    // bound(r) = bound(1) r^{-q}
    let ln_r = (ln_bound(1.0)? - target) / q as f64;
    if ln_r > 62.0 * LN_2 {
        return Err(Error::InvalidArgument(format!(
            "required step count 2^{:.1} exceeds the supported range",
            ln_r / LN_2
        )));
    }
    let mut r = ln_r.exp().ceil().max(1.0) as u64;
    while r > 1 && ln_bound((r - 1) as f64)? <= target {
        r -= 1;
    }
    while ln_bound(r as f64)? > target {
        r += 1;
    }
    Ok(RequiredSteps {
        r,
        p: r * stages,
        bound_at_r: ln_bound(r as f64)?.exp(),
    })
}

/// `||U(alpha*, t) - S_q^r(t/r)||_2`, phase-sensitive.
pub fn spectral_error(n: usize, q: u32, t: f64, r: u64) -> Result<f64> {
    check_order(q)?;
    if r == 0 {
        return Err(Error::InvalidArgument("step count must be at least 1".into()));
    }
    let alpha = alpha_star(n)?;
    let exact = Walk::new(n, alpha)?.spectrum().propagator(t);
    let frame = MixerFrame::new(n)?;
    let trotter = TrotterStep::new(&frame, alpha, q, t / r as f64)?.power(r)?;
    Ok(spectral_norm(&(exact.matrix() - trotter.matrix())))
}
