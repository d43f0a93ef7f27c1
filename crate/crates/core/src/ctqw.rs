//! Continuous-time quantum walk search on the hypercube.
//!
//! The walk Hamiltonian is `alpha H_x + |0><0|`. At the optimal coupling
//! `alpha*` the two eigenstates closest to `|+>^{(x)n}` form an avoided
//! crossing with an exponentially small splitting, and evolving `|+>` for
//! half a Rabi period rotates it onto the marked state.
//!
//! With `+alpha H_x` the resonant pair sits at the top of the spectrum
//! (`|+>` has the largest `H_x` eigenvalue `n`), so the gap reported here is
//! the splitting of the two highest eigenvalues.

use std::f64::consts::PI;

use serde::Serialize;

use crate::symspace::{
    binomial_weights, build_h0, build_hx, plus_state, Spectrum, SymOperator, SymVector, C64,
};
use crate::{check_qubits, Error, Result};

/// Pair separation below which the resonant eigenvectors are not resolvable.
const DEGENERACY_TOL: f64 = 1e-13;

/// `alpha* = (1/2) sum_{k=1}^n P_k / k`.
pub fn alpha_star(n: usize) -> Result<f64> {
    check_qubits(n)?;
    let weights = binomial_weights(n);
    Ok(0.5
        * weights
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, p)| p / k as f64)
            .sum::<f64>())
}

/// `xi = (2 / 2^{n/2}) (sum_{k=1}^n P_k / k^2)^{-1/2}`.
pub fn xi(n: usize) -> Result<f64> {
    check_qubits(n)?;
    let weights = binomial_weights(n);
    let s2: f64 = weights
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, p)| p / (k * k) as f64)
        .sum();
    Ok(2.0 * 2f64.powf(-(n as f64) / 2.0) / s2.sqrt())
}

/// Search time `(pi / 2) 2^{n/2}`.
pub fn t_star(n: usize) -> Result<f64> {
    check_qubits(n)?;
    Ok(PI / 2.0 * 2f64.powf(n as f64 / 2.0))
}

/// `alpha H_x + H_0`.
pub fn walk_hamiltonian(n: usize, alpha: f64) -> Result<SymOperator> {
    let hx = build_hx(n)?;
    let h0 = build_h0(n)?;
    SymOperator::new(n, hx.into_matrix() * C64::new(alpha, 0.0) + h0.into_matrix())
}

/// Three estimates of the resonant splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapEstimates {
    /// From dense diagonalisation of `alpha* H_x + H_0`.
    pub exact: f64,
    /// `2 alpha* xi`.
    pub formula: f64,
    /// `2 / 2^{n/2}`.
    pub asymptotic: f64,
}

pub fn gap(n: usize) -> Result<GapEstimates> {
    let alpha = alpha_star(n)?;
    let spectrum = Spectrum::of(&walk_hamiltonian(n, alpha)?)?;
    let e = spectrum.energies();
    Ok(GapEstimates {
        exact: e[n] - e[n - 1],
        formula: 2.0 * alpha * xi(n)?,
        asymptotic: 2.0 * 2f64.powf(-(n as f64) / 2.0),
    })
}

/// Everything the search needs to know about the walk at a given size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CtqwParams {
    pub n: usize,
    pub alpha_star: f64,
    pub xi: f64,
    pub gap: f64,
    pub t_star: f64,
    pub p_weights: Vec<f64>,
}

impl CtqwParams {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            alpha_star: alpha_star(n)?,
            xi: xi(n)?,
            gap: gap(n)?.exact,
            t_star: t_star(n)?,
            p_weights: binomial_weights(n),
        })
    }
}

/// Exact walk evolution from `|+>`, diagonalised once so that overlaps at
/// many times cost `O(n)` each.
#[derive(Debug, Clone)]
pub struct Walk {
    spectrum: Spectrum,
    plus: SymVector,
    // <v_j|+> and <e_0|v_j> for each eigenvector v_j
    plus_coords: Vec<C64>,
    target_coords: Vec<C64>,
}

impl Walk {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        let spectrum = Spectrum::of(&walk_hamiltonian(n, alpha)?)?;
        let plus = plus_state(n)?;
        let v = spectrum.vectors();
        let plus_coords = v.ad_mul(plus.amplitudes()).iter().copied().collect();
        let target_coords = v.row(0).iter().copied().collect();
        Ok(Self {
            spectrum,
            plus,
            plus_coords,
            target_coords,
        })
    }

    pub fn at_optimum(n: usize) -> Result<Self> {
        Self::new(n, alpha_star(n)?)
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `e^{-i H t} |+>`.
    pub fn state(&self, t: f64) -> Result<SymVector> {
        self.spectrum.evolve(t, &self.plus)
    }

    /// `|<0| e^{-i H t} |+>|^2`.
    pub fn overlap(&self, t: f64) -> f64 {
        self.target_coords
            .iter()
            .zip(&self.plus_coords)
            .zip(self.spectrum.energies())
            .map(|((a, b), &e)| a * b * C64::from_polar(1.0, -e * t))
            .sum::<C64>()
            .norm_sqr()
    }
}

/// `|<e_0| e^{-i (alpha H_x + H_0) t} |+>|^2`.
pub fn ctqw_overlap(n: usize, alpha: f64, t: f64) -> Result<f64> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be finite and non-negative, got {t}"
        )));
    }
    Ok(Walk::new(n, alpha)?.overlap(t))
}

/// The resonant eigenpair of `alpha* H_x + H_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub psi_plus: SymVector,
    pub psi_minus: SymVector,
    /// `(E_+, E_-)`, with `E_+ > E_-`.
    pub energies: (f64, f64),
}

/// Resonant eigenstates, phased so that `<+|psi_pm>` is real and positive.
///
/// `psi_plus` is the upper member of the pair; its `<e_0|psi>` component has
/// the same sign as `<+|psi>`.
pub fn low_eigenstates(n: usize) -> Result<EigenPair> {
    check_qubits(n)?;
    if n < 2 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "resonant eigenpair needs at least two qubits",
        });
    }
    let alpha = alpha_star(n)?;
    let spectrum = Spectrum::of(&walk_hamiltonian(n, alpha)?)?;
    let e = spectrum.energies();
    let separation = e[n] - e[n - 1];
    if separation < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { separation });
    }
    let plus = plus_state(n)?;
    let phased = |index: usize| -> Result<SymVector> {
        let v = spectrum.eigenvector(index);
        let proj = plus.inner(&v)?;
        let phase = if proj.norm() > 0.0 {
            proj.conj() / proj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        SymVector::new(n, v.into_amplitudes() * phase)
    };
    Ok(EigenPair {
        psi_plus: phased(n)?,
        psi_minus: phased(n - 1)?,
        energies: (e[n], e[n - 1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::overlap;

    #[test]
    fn alpha_star_small_sizes() {
        // direct sums: n=1 -> (1/2)(1/2); n=3 -> (1/2)(3/8 + 3/16 + 1/24)
        assert!((alpha_star(1).unwrap() - 0.25).abs() < 1e-15);
        let want = 0.5 * (3.0 / 8.0 + 3.0 / 16.0 + 1.0 / 24.0);
        assert!((alpha_star(3).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.302_083_333_333_333_3).abs() < 1e-15);
    }

    #[test]
    fn alpha_star_tracks_one_over_n() {
        let n = 60;
        let scaled = n as f64 * alpha_star(n).unwrap();
        assert!((scaled - 1.0).abs() < 0.05, "{scaled}");
    }

    #[test]
    fn t_star_values() {
        assert!((t_star(2).unwrap() - PI).abs() < 1e-15);
        assert!((t_star(20).unwrap() - 1608.49543863879).abs() < 1e-9);
        assert!(t_star(0).is_err());
    }

    #[test]
    fn gap_estimates_agree() {
        let g = gap(10).unwrap();
        let ratio = g.formula / g.exact;
        assert!((0.9..=1.1).contains(&ratio), "{ratio}");

        let n = 30;
        let g = gap(n).unwrap();
        let scaled = g.exact * 2f64.powf(n as f64 / 2.0) / 2.0;
        let slack = 5.0 / n as f64;
        assert!((1.0 - slack..=1.0 + slack).contains(&scaled), "{scaled}");

        for n in 1..=40 {
            assert!(gap(n).unwrap().formula > 0.0);
        }
    }

    #[test]
    fn overlap_at_time_zero_is_uniform_weight() {
        for n in [3, 8, 15] {
            let a = alpha_star(n).unwrap();
            let o = ctqw_overlap(n, a, 0.0).unwrap();
            assert!((o - 2f64.powi(-(n as i32))).abs() < 1e-14);
        }
        assert!(ctqw_overlap(4, 0.2, -1.0).is_err());
    }

    #[test]
    fn overlap_near_one_at_search_time() {
        let n = 16;
        let o = ctqw_overlap(n, alpha_star(n).unwrap(), t_star(n).unwrap()).unwrap();
        assert!(o >= 0.8, "{o}");
        // 1 - O(1/n) with a modest constant
        assert!(1.0 - o <= 4.0 / n as f64, "{o}");
    }

    #[test]
    fn overlap_peak_sits_at_half_gap_period() {
        // the first maximum is pi / gap_exact; t* is its large-n limit
        for (n, t_tol, gap_tol) in [(4, 0.3, 0.15), (8, 0.15, 0.06), (12, 0.1, 0.03)] {
            let walk = Walk::at_optimum(n).unwrap();
            let ts = t_star(n).unwrap();
            let (best_t, _) = (0..=6000)
                .map(|i| 2.0 * ts * i as f64 / 6000.0)
                .map(|t| (t, walk.overlap(t)))
                .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
            let half_period = std::f64::consts::PI / gap(n).unwrap().exact;
            assert!((best_t - half_period).abs() <= gap_tol * half_period, "n={n}: {best_t} vs {half_period}");
            assert!((best_t - ts).abs() <= t_tol * ts, "n={n}: peak at {best_t}, t* = {ts}");
        }
    }

    #[test]
    fn walk_overlap_matches_state_evolution() {
        let n = 9;
        let walk = Walk::at_optimum(n).unwrap();
        let target = SymVector::basis(n, 0).unwrap();
        for t in [0.0, 1.3, 17.0, 40.0] {
            let via_state = overlap(&target, &walk.state(t).unwrap()).unwrap();
            assert!((via_state - walk.overlap(t)).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenpair_matches_closed_forms() {
        let pair = low_eigenstates(20).unwrap();
        let plus = plus_state(20).unwrap();
        for psi in [&pair.psi_plus, &pair.psi_minus] {
            let h0 = plus.inner(psi).unwrap();
            assert!(h0.im.abs() < 1e-12 && h0.re > 0.0);
            assert!((h0.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3, "{h0}");
        }
        assert!(pair.psi_plus.amplitudes()[0].re > 0.0);
        assert!(pair.psi_minus.amplitudes()[0].re < 0.0);
        assert!(pair.energies.0 > pair.energies.1);
    }

    #[test]
    fn eigenpair_target_component_tracks_gap() {
        // leading-order relation; the two members straddle it symmetrically
        let mut last = f64::INFINITY;
        for n in [12, 16, 20, 24] {
            let pair = low_eigenstates(n).unwrap();
            let delta = gap(n).unwrap().exact;
            let predicted = 2f64.powf(n as f64 / 2.0) * delta / (2.0 * 2f64.sqrt());
            let up = pair.psi_plus.amplitudes()[0].norm();
            let down = pair.psi_minus.amplitudes()[0].norm();
            let spread = ((up - predicted) / predicted).abs().max(((down - predicted) / predicted).abs());
            assert!(spread < 4.0 / 2f64.powf(n as f64 / 2.0) * 4.0, "n={n}: {spread}");
            assert!(spread < last);
            last = spread;
            let geometric = (up * down).sqrt();
            assert!(((geometric - predicted) / predicted).abs() < spread / 10.0);
        }
    }

    #[test]
    fn eigenpair_is_orthonormal_and_bessel_bounded() {
        for n in [2, 5, 12, 24] {
            let pair = low_eigenstates(n).unwrap();
            assert!((pair.psi_plus.norm_squared() - 1.0).abs() < 1e-10);
            assert!((pair.psi_minus.norm_squared() - 1.0).abs() < 1e-10);
            assert!(pair.psi_plus.inner(&pair.psi_minus).unwrap().norm() < 1e-10);
            // e_0 and h_0 overlap by 2^{-n/2}: orthonormalise before Bessel
            let plus = plus_state(n).unwrap().into_amplitudes();
            let mut perp = plus.clone();
            perp[0] -= plus[0];
            let perp = perp.normalize();
            for psi in [&pair.psi_plus, &pair.psi_minus] {
                let total = psi.amplitudes()[0].norm_sqr() + perp.dotc(psi.amplitudes()).norm_sqr();
                assert!(total <= 1.0 + 1e-12, "n={n}: {total}");
            }
        }
        assert!(low_eigenstates(1).is_err());
    }
}
