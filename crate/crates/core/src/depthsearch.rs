//! Numeric optimal-depth search, the Grover baseline and the sweeps built
//! on top of them.
//!
//! The search accepts a step count `r` when the trotterized overlap reaches
//! the exact walk overlap at `(alpha*, t*)` minus an overlap-deficit budget.
//! Candidate step counts live on the grid `r_{d,l} = d 2^{n/2 - l}`: `d` is
//! increased until acceptance, then the grid is halved around the accepted
//! point (`d <- 2d - 1`, `l <- l + 1`) and the scan repeats.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{analytic_depth_closed, EpsilonKind};
use crate::ctqw::{alpha_star, t_star, Walk};
use crate::symspace::plus_state;
use crate::trotter::{stage_count, MixerFrame, TrotterStep};
use crate::{check_qubits, Error, Result};

/// Number of grid levels scanned by default.
pub const DEFAULT_REFINEMENT_ITERATIONS: u32 = 15;

/// Increments of `d` allowed within one level before giving up.
pub const MAX_MULTIPLIER_STEPS: u64 = 4096;

/// Orders tried when looking for the shortest numeric sequence.
pub const ADMISSIBLE_ORDERS: [u32; 4] = [2, 4, 6, 8];

/// `|<0| U(alpha*, t*) |+>|^2`, memoised per `n`.
pub fn reference_overlap(n: usize) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Ok(*v);
    }
    let value = Walk::at_optimum(n)?.overlap(t_star(n)?);
    cache.lock().unwrap().insert(n, value);
    Ok(value)
}

/// Position of the search on the refinement grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchState {
    pub d: u64,
    pub l: u32,
    pub r_current: u64,
    pub iterations_done: u32,
}

impl SearchState {
    fn new(n: usize) -> Self {
        Self {
            d: 1,
            l: 0,
            r_current: grid_steps(n, 1, 0),
            iterations_done: 0,
        }
    }

    fn set_d(&mut self, n: usize, d: u64) {
        self.d = d;
        self.r_current = grid_steps(n, d, self.l);
    }

    fn refine(&mut self, n: usize) {
        self.l += 1;
        self.iterations_done += 1;
        self.set_d(n, 2 * self.d - 1);
    }
}

/// `round(d 2^{n/2 - l})`, at least 1. For odd `n` the grid spacing is
/// irrational and rounding keeps the halving structure.
pub fn grid_steps(n: usize, d: u64, l: u32) -> u64 {
    let spacing = 2f64.powf(n as f64 / 2.0 - l as f64);
    ((d as f64 * spacing).round() as u64).max(1)
}

/// Outcome of [`numeric_optimal_depth`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericDepth {
    pub n: usize,
    pub q: u32,
    pub epsilon: f64,
    pub epsilon_kind: EpsilonKind,
    /// Accepted step count.
    pub r: u64,
    /// `r Upsilon_q`.
    pub p: u64,
    pub state: SearchState,
    pub threshold: f64,
    pub overlap: f64,
    /// The grid point one multiplier below the accepted one at the final
    /// level, with its (rejected) overlap. `None` when that point is `r = 0`.
    pub below: Option<(u64, f64)>,
}

/// Memoised acceptance test for one `(n, q, epsilon)` search.
struct Acceptance<'f> {
    frame: &'f MixerFrame,
    alpha: f64,
    q: u32,
    t: f64,
    threshold: f64,
    seen: HashMap<u64, f64>,
}

impl Acceptance<'_> {
    fn overlap(&mut self, r: u64) -> Result<f64> {
        if let Some(v) = self.seen.get(&r) {
            return Ok(*v);
        }
        let v = TrotterStep::new(self.frame, self.alpha, self.q, self.t / r as f64)?.target_overlap(r);
        self.seen.insert(r, v);
        Ok(v)
    }
}

/// Smallest grid step count whose trotterized overlap reaches
/// `reference_overlap(n) - epsilon`, refined over `iterations` grid levels.
pub fn numeric_optimal_depth(n: usize, q: u32, epsilon: f64, iterations: u32) -> Result<NumericDepth> {
    check_qubits(n)?;
    let stages = stage_count(q)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "overlap budget must lie in (0, 1), got {epsilon}"
        )));
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("at least one refinement iteration is required".into()));
    }
    let frame = MixerFrame::new(n)?;
    let threshold = reference_overlap(n)? - epsilon;
    let mut accept = Acceptance {
        frame: &frame,
        alpha: alpha_star(n)?,
        q,
        t: t_star(n)?,
        threshold,
        seen: HashMap::new(),
    };

    let mut state = SearchState::new(n);
    let mut overlap;
    loop {
        let start = state.d;
        loop {
            overlap = accept.overlap(state.r_current)?;
            if overlap >= accept.threshold {
                break;
            }
            if state.d - start >= MAX_MULTIPLIER_STEPS {
                return Err(Error::SearchExhausted {
                    n,
                    q,
                    epsilon,
                    level: state.l,
                    last_r: state.r_current,
                    last_overlap: overlap,
                    threshold,
                });
            }
            state.set_d(n, state.d + 1);
        }
        if state.iterations_done + 1 >= iterations {
            break;
        }
        state.refine(n);
    }

    let below = if state.d > 1 {
        let r = grid_steps(n, state.d - 1, state.l);
        Some((r, accept.overlap(r)?))
    } else {
        None
    };
    Ok(NumericDepth {
        n,
        q,
        epsilon,
        epsilon_kind: EpsilonKind::OverlapDeficit,
        r: state.r_current,
        p: state.r_current * stages,
        state,
        threshold,
        overlap,
        below,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverPoint {
    pub iterations: u64,
    pub overlap: f64,
    /// `sin^2((2k + 1) theta)` with `sin theta = 2^{-n/2}`.
    pub closed_form: f64,
}

/// Grover iterate `(2|+><+| - I)(I - 2|0><0|)` applied `0..=k_max` times to
/// `|+>`, simulated in the Dicke basis.
pub fn grover_curve(n: usize, k_max: u64) -> Result<Vec<GroverPoint>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let plus = plus_state(n)?.into_amplitudes();
    let theta = 2f64.powf(-(n as f64) / 2.0).asin();
    let mut state = plus.clone();
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            state[0] = -state[0];
            let proj = plus.dotc(&state);
            state = &plus * (proj * 2.0) - state;
        }
        out.push(GroverPoint {
            iterations: k,
            overlap: state[0].norm_sqr(),
            closed_form: grover_closed_form(theta, k),
        });
    }
    Ok(out)
}

pub fn grover_closed_form(theta: f64, k: u64) -> f64 {
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// One cell of the analytic/numeric depth comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    /// Order giving the shortest numeric sequence.
    pub q: u32,
    pub epsilon: f64,
    pub p_numerical: u64,
    pub p_analytical: f64,
    pub ratio: f64,
    /// Numeric depths are searched with an overlap-deficit budget.
    pub numeric_epsilon_kind: EpsilonKind,
    /// The closed-form depth treats `epsilon` as a spectral-norm budget.
    pub analytic_epsilon_kind: EpsilonKind,
}

/// A sweep cell; failures of individual orders are kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub epsilon: f64,
    pub result: Result<SweepRecord>,
    pub order_failures: Vec<(u32, Error)>,
}

/// Depth ratios for every `(n, epsilon)` pair, ordered by `n` then
/// `epsilon` as given. Cells are evaluated in parallel.
pub fn ratio_sweep(n_list: &[usize], epsilon_list: &[f64], orders: &[u32], iterations: u32) -> Result<Vec<SweepCell>> {
    if n_list.is_empty() || epsilon_list.is_empty() || orders.is_empty() {
        return Err(Error::InvalidArgument("sweep lists must be non-empty".into()));
    }
    let jobs: Vec<(usize, f64, u32)> = n_list
        .iter()
        .flat_map(|&n| {
            epsilon_list
                .iter()
                .flat_map(move |&e| orders.iter().map(move |&q| (n, e, q)))
        })
        .collect();
    let depths: Vec<Result<NumericDepth>> = jobs
        .par_iter()
        .map(|&(n, e, q)| numeric_optimal_depth(n, q, e, iterations))
        .collect();

    let mut cells = Vec::new();
    for (chunk, results) in jobs.chunks(orders.len()).zip(depths.chunks(orders.len())) {
        let (n, epsilon) = (chunk[0].0, chunk[0].1);
        let mut best: Option<&NumericDepth> = None;
        let mut order_failures = Vec::new();
        for (&(_, _, q), res) in chunk.iter().zip(results) {
            match res {
                Ok(d) => {
                    if best.is_none_or(|b| d.p < b.p) {
                        best = Some(d);
                    }
                }
                Err(e) => order_failures.push((q, e.clone())),
            }
        }
        let result = match best {
            None => Err(order_failures
                .last()
                .map(|(_, e)| e.clone())
                .unwrap_or_else(|| Error::InvalidArgument("no orders evaluated".into()))),
            Some(d) => analytic_depth_closed(n, epsilon).map(|a| SweepRecord {
                n,
                q: d.q,
                epsilon,
                p_numerical: d.p,
                p_analytical: a.p,
                ratio: a.p / d.p as f64,
                numeric_epsilon_kind: EpsilonKind::OverlapDeficit,
                analytic_epsilon_kind: EpsilonKind::SpectralNorm,
            }),
        };
        cells.push(SweepCell {
            n,
            epsilon,
            result,
            order_failures,
        });
    }
    Ok(cells)
}
