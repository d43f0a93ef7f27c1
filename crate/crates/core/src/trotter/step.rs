use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::formula::{check_order, group_sequence, Generator, ProductFormula};
use crate::ctqw::alpha_star;
use crate::symspace::{build_hx, plus_state, Spectrum, SymOperator, SymVector, C64};
use crate::{Error, Result};

/// Eigenframe of the mixer `H_x`.
///
/// In this frame every mixer exponential is diagonal and every cost
/// exponential is a rank-one update `I + (e^{-ic} - 1) w w^dagger`, so a
/// Trotter step is assembled in `O(n^2)` per factor with no accumulated
/// eigensolver error beyond the one-time change of basis.
#[derive(Debug, Clone)]
pub struct MixerFrame {
    n: usize,
    vectors: DMatrix<C64>,
    eigenvalues: Vec<f64>,
    target: DVector<C64>,
    plus: DVector<C64>,
}

impl MixerFrame {
    pub fn new(n: usize) -> Result<Self> {
        let spectrum = Spectrum::of(&build_hx(n)?)?;
        let mut vectors = spectrum.vectors().clone();
        // fix each column's phase so that <e_0|h_k> is real and non-negative
        for mut col in vectors.column_iter_mut() {
            let lead = col[0];
            if lead.norm() > 0.0 {
                col *= lead.conj() / lead.norm();
            }
        }
        let target = vectors.row(0).adjoint();
        let plus = vectors.ad_mul(plus_state(n)?.amplitudes());
        Ok(Self {
            n,
            vectors,
            eigenvalues: spectrum.energies().to_vec(),
            target,
            plus,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dicke-basis coordinates of the mixer eigenvectors, as columns.
    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn to_dicke(&self, coords: &DVector<C64>) -> Result<SymVector> {
        SymVector::new(self.n, &self.vectors * coords)
    }

    fn operator_to_dicke(&self, local: &DMatrix<C64>) -> Result<SymOperator> {
        SymOperator::new(self.n, &self.vectors * local * self.vectors.adjoint())
    }
}

/// One step `S_q(dt)` with `H1 = -i H_0` and `H2 = -i alpha H_x`, held in
/// the mixer eigenframe.
#[derive(Debug, Clone)]
pub struct TrotterStep<'a> {
    frame: &'a MixerFrame,
    local: DMatrix<C64>,
}

impl<'a> TrotterStep<'a> {
    pub fn new(frame: &'a MixerFrame, alpha: f64, q: u32, dt: f64) -> Result<Self> {
        let step = group_sequence(q, 1, dt)?;
        Ok(Self {
            frame,
            local: frame_product(frame, alpha, &step),
        })
    }

    /// The step as a Dicke-basis operator.
    pub fn operator(&self) -> Result<SymOperator> {
        self.frame.operator_to_dicke(&self.local)
    }

    /// `S^r |+>` in the Dicke basis.
    pub fn evolve_plus(&self, r: u64) -> Result<SymVector> {
        let coords = Powers::new(&self.local).apply(r, self.frame.plus.clone());
        self.frame.to_dicke(&coords)
    }

    /// `|<0| S^r |+>|^2`.
    pub fn target_overlap(&self, r: u64) -> f64 {
        let coords = Powers::new(&self.local).apply(r, self.frame.plus.clone());
        self.frame.target.dotc(&coords).norm_sqr()
    }

    /// `S^r` as a Dicke-basis operator.
    pub fn power(&self, r: u64) -> Result<SymOperator> {
        let local = crate::symspace::power_by_squaring(&self.local, r);
        self.frame.operator_to_dicke(&local)
    }
}

fn frame_product(frame: &MixerFrame, alpha: f64, formula: &ProductFormula) -> DMatrix<C64> {
    let d = frame.n + 1;
    let w = &frame.target;
    let mut m = DMatrix::<C64>::identity(d, d);
    for f in formula.factors() {
        match f.generator {
            Generator::Cost => {
                let kick = C64::from_polar(1.0, -f.coefficient) - C64::new(1.0, 0.0);
                let proj = w.ad_mul(&m); // 1 x d row: w^dagger M
                m += (w * kick) * proj;
            }
            Generator::Mixer => {
                for (j, &lambda) in frame.eigenvalues.iter().enumerate() {
                    let phase = C64::from_polar(1.0, -alpha * f.coefficient * lambda);
                    for c in 0..d {
                        m[(j, c)] *= phase;
                    }
                }
            }
        }
    }
    m
}

/// Cached repeated squarings `M, M^2, M^4, ...` for applying arbitrary powers
/// to vectors with `O(log r)` matrix-vector products.
struct Powers<'m> {
    base: &'m DMatrix<C64>,
    squares: Vec<DMatrix<C64>>,
}

impl<'m> Powers<'m> {
    fn new(base: &'m DMatrix<C64>) -> Self {
        Self {
            base,
            squares: Vec::new(),
        }
    }

    fn square(&mut self, j: usize) -> &DMatrix<C64> {
        while self.squares.len() <= j {
            let next = match self.squares.last() {
                None => self.base.clone(),
                Some(prev) => prev * prev,
            };
            self.squares.push(next);
        }
        &self.squares[j]
    }

    fn apply(mut self, r: u64, v: DVector<C64>) -> DVector<C64> {
        self.advance(r, v)
    }

    fn advance(&mut self, mut r: u64, mut v: DVector<C64>) -> DVector<C64> {
        let mut j = 0;
        while r > 0 {
            if r & 1 == 1 {
                v = self.square(j) * v;
            }
            r >>= 1;
            j += 1;
        }
        v
    }
}

/// Builds the grouped formula as a Dicke-basis operator, using exact
/// eigendecomposition of `H_x` for the mixer factors and a diagonal phase for
/// the cost factors.
pub fn formula_operator(n: usize, alpha: f64, formula: &ProductFormula) -> Result<SymOperator> {
    let mixer = Spectrum::of(&build_hx(n)?)?;
    let mut acc = SymOperator::identity(n)?;
    for f in formula.factors() {
        let factor = match f.generator {
            Generator::Cost => {
                let mut m = DMatrix::<C64>::identity(n + 1, n + 1);
                m[(0, 0)] = C64::from_polar(1.0, -f.coefficient);
                SymOperator::new(n, m)?
            }
            Generator::Mixer => mixer.propagator(alpha * f.coefficient),
        };
        acc = factor.compose(&acc)?;
    }
    Ok(acc)
}

fn check_steps(r: u64) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidArgument("step count must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// The unitary of one step `S_q(t / r)` at the optimal coupling.
pub fn step_operator(n: usize, q: u32, t: f64, r: u64) -> Result<SymOperator> {
    check_order(q)?;
    check_steps(r)?;
    let frame = MixerFrame::new(n)?;
    TrotterStep::new(&frame, alpha_star(n)?, q, t / r as f64)?.operator()
}

/// `S_q^r(t / r) |+>`.
pub fn trotterized_state(n: usize, q: u32, t: f64, r: u64) -> Result<SymVector> {
    check_order(q)?;
    check_steps(r)?;
    let frame = MixerFrame::new(n)?;
    TrotterStep::new(&frame, alpha_star(n)?, q, t / r as f64)?.evolve_plus(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub steps_applied: u64,
    pub overlap: f64,
}

/// Evenly spaced step counts `0 = s_0 < ... < s_m = r`, at most `samples`
/// of them.
pub fn trace_steps(r: u64, samples: usize) -> Vec<u64> {
    let m = (samples.max(2) - 1) as u64;
    let mut out: Vec<u64> = (0..=m)
        .map(|i| ((i as u128 * r as u128 + m as u128 / 2) / m as u128) as u64)
        .collect();
    out.dedup();
    out
}

/// Target overlap after evenly spaced prefixes of the `r` steps.
pub fn overlap_trace(n: usize, q: u32, t: f64, r: u64, samples: usize) -> Result<Vec<TracePoint>> {
    check_order(q)?;
    check_steps(r)?;
    if samples < 2 {
        return Err(Error::InvalidArgument("at least two trace samples are required".into()));
    }
    let frame = MixerFrame::new(n)?;
    let step = TrotterStep::new(&frame, alpha_star(n)?, q, t / r as f64)?;
    let mut powers = Powers::new(&step.local);
    let mut coords = frame.plus.clone();
    let mut done = 0u64;
    let mut out = Vec::new();
    for s in trace_steps(r, samples) {
        coords = powers.advance(s - done, coords);
        done = s;
        out.push(TracePoint {
            steps_applied: s,
            overlap: frame.target.dotc(&coords).norm_sqr(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctqw::{t_star, Walk};
    use crate::symspace::{full_space_oracle, matrix_power, overlap};

    #[test]
    fn frame_target_is_sqrt_binomial_weight() {
        let frame = MixerFrame::new(7).unwrap();
        let weights = crate::symspace::binomial_weights(7);
        // eigenvalues ascend from -n, so <e_0|h_k> pairs with weight index n - j
        for (j, w) in frame.target.iter().enumerate() {
            assert!((w.re - weights[7 - j].sqrt()).abs() < 1e-13);
            assert!(w.im.abs() < 1e-13);
        }
        // |+> is the top eigenvector
        assert!((frame.plus[7].norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_time_step_is_identity() {
        let s = step_operator(5, 4, 0.0, 3).unwrap();
        assert!(s.max_abs_diff(&SymOperator::identity(5).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn step_is_unitary() {
        let s = step_operator(20, 6, t_star(20).unwrap(), 37).unwrap();
        assert!(s.unitarity_defect() < 1e-11, "{}", s.unitarity_defect());
    }

    #[test]
    fn step_matches_formula_operator() {
        let n = 6;
        let alpha = alpha_star(n).unwrap();
        for q in [2, 4, 6] {
            let t = 3.3;
            let via_frame = step_operator(n, q, t, 1).unwrap();
            let direct = formula_operator(n, alpha, &group_sequence(q, 1, t).unwrap()).unwrap();
            assert!(via_frame.max_abs_diff(&direct).unwrap() < 1e-12);
        }
    }

    #[test]
    fn trotterized_state_matches_power_of_step() {
        let (n, q, t, r) = (8, 4, 9.0, 13);
        let s = step_operator(n, q, t, r).unwrap();
        let via_power = matrix_power(&s, r).apply(&plus_state(n).unwrap()).unwrap();
        let direct = trotterized_state(n, q, t, r).unwrap();
        assert!(via_power.max_abs_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn trotterized_state_matches_full_space_oracle() {
        let n = 7;
        let alpha = alpha_star(n).unwrap();
        for (q, r, t) in [(2, 1, 1.0), (2, 5, 7.5), (4, 3, 11.0), (6, 2, 4.0)] {
            let sym = trotterized_state(n, q, t, r).unwrap();
            let full = full_space_oracle(n, alpha, &group_sequence(q, r, t).unwrap()).unwrap();
            assert!(sym.max_abs_diff(&full).unwrap() < 1e-10);
        }
    }

    #[test]
    fn converges_to_walk_state() {
        let (n, q) = (10, 2);
        let t = t_star(n).unwrap();
        let exact = Walk::at_optimum(n).unwrap().state(t).unwrap();
        let mut last = 0.0;
        for r in [64, 256, 1024, 4096] {
            let o = overlap(&exact, &trotterized_state(n, q, t, r).unwrap()).unwrap();
            assert!(o >= last - 1e-12);
            last = o;
        }
        assert!(last > 1.0 - 1e-6, "{last}");
    }

    #[test]
    fn trace_endpoints() {
        let (n, q, r) = (12, 4, 300);
        let t = t_star(n).unwrap();
        let trace = overlap_trace(n, q, t, r, 17).unwrap();
        assert_eq!(trace.first().unwrap().steps_applied, 0);
        assert!((trace[0].overlap - 2f64.powi(-(n as i32))).abs() < 1e-15);
        assert_eq!(trace.last().unwrap().steps_applied, r);
        let final_state = trotterized_state(n, q, t, r).unwrap();
        let direct = final_state.amplitudes()[0].norm_sqr();
        assert!((trace.last().unwrap().overlap - direct).abs() < 1e-12);
        assert!(overlap_trace(n, q, t, r, 1).is_err());
    }

    #[test]
    fn trace_steps_spacing() {
        assert_eq!(trace_steps(10, 3), vec![0, 5, 10]);
        assert_eq!(trace_steps(2, 10), vec![0, 1, 2]);
        assert_eq!(trace_steps(u64::MAX / 4, 2), vec![0, u64::MAX / 4]);
    }
}
