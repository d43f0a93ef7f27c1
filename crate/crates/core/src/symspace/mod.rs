//! Linear algebra on the permutation-symmetric subspace.
//!
//! States of `n` qubits that are invariant under qubit permutations are
//! expanded in the Dicke basis `|e_0>, ..., |e_n>`, where `|e_k>` is the
//! normalised uniform superposition of all bit strings of Hamming weight `k`.
//! The target string is always `|0...0> = |e_0>`; other targets are reduced
//! to it by bit-flip relabeling before anything reaches this module.

mod norms;
mod oracle;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use statrs::function::factorial::ln_binomial;

use crate::{check_qubits, Error, Result};

pub use norms::{commutator, frobenius_norm, max_norm, phase_invariant_distance, spectral_norm};
pub use oracle::{full_space_oracle, FULL_SPACE_MAX_QUBITS};

pub type C64 = Complex64;

const HERMITIAN_TOL: f64 = 1e-12;

/// Binomial weights `P_k = C(n, k) / 2^n` for `k = 0..=n`.
///
/// Evaluated through log-gamma so that the central coefficients at `n` close
/// to 80 neither overflow nor lose digits.
pub fn binomial_weights(n: usize) -> Vec<f64> {
    let log_norm = n as f64 * std::f64::consts::LN_2;
    (0..=n)
        .map(|k| (ln_binomial(n as u64, k as u64) - log_norm).exp())
        .collect()
}

/// Amplitudes of a symmetric state in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymVector {
    n: usize,
    amp: DVector<C64>,
}

impl SymVector {
    pub fn new(n: usize, amp: DVector<C64>) -> Result<Self> {
        check_qubits(n)?;
        if amp.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: amp.len(),
            });
        }
        Ok(Self { n, amp })
    }

    /// The Dicke basis state `|e_k>`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        check_qubits(n)?;
        if k > n {
            return Err(Error::InvalidArgument(format!(
                "Dicke index {k} out of range for {n} qubits"
            )));
        }
        let mut amp = DVector::zeros(n + 1);
        amp[k] = C64::new(1.0, 0.0);
        Ok(Self { n, amp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amp
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amp
    }

    pub fn norm_squared(&self) -> f64 {
        self.amp.norm_squared()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SymVector) -> Result<C64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.amp.dotc(&other.amp))
    }

    /// Largest amplitude-wise difference.
    pub fn max_abs_diff(&self, other: &SymVector) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Dense operator on the symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOperator {
    n: usize,
    entries: DMatrix<C64>,
}

impl SymOperator {
    pub fn new(n: usize, entries: DMatrix<C64>) -> Result<Self> {
        check_qubits(n)?;
        if entries.nrows() != n + 1 || entries.ncols() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self {
            n,
            entries: DMatrix::identity(n + 1, n + 1),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn adjoint(&self) -> SymOperator {
        Self {
            n: self.n,
            entries: self.entries.adjoint(),
        }
    }

    /// Largest `|A_jk - conj(A_kj)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.entries;
        let d = m.nrows();
        let mut worst = 0.0_f64;
        for j in 0..d {
            for k in j..d {
                worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
            }
        }
        worst
    }

    /// `||U^dagger U - I||_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        let gram = self.entries.adjoint() * &self.entries;
        max_norm(&(gram - DMatrix::<C64>::identity(d, d)))
    }

    pub fn compose(&self, rhs: &SymOperator) -> Result<SymOperator> {
        same_dim(self.dim(), rhs.dim())?;
        Ok(Self {
            n: self.n,
            entries: &self.entries * &rhs.entries,
        })
    }

    pub fn apply(&self, v: &SymVector) -> Result<SymVector> {
        same_dim(self.dim(), v.dim())?;
        Ok(SymVector {
            n: self.n,
            amp: &self.entries * &v.amp,
        })
    }

    pub fn max_abs_diff(&self, other: &SymOperator) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(max_norm(&(&self.entries - &other.entries)))
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Hypercube mixer `H_x = sum_j X_j` restricted to the symmetric subspace.
///
/// Tridiagonal with `<e_{l+1}|H_x|e_l> = sqrt((l + 1)(n - l))`.
pub fn build_hx(n: usize) -> Result<SymOperator> {
    check_qubits(n)?;
    let mut m = DMatrix::<C64>::zeros(n + 1, n + 1);
    for l in 0..n {
        let off = (((l + 1) * (n - l)) as f64).sqrt();
        m[(l + 1, l)] = C64::new(off, 0.0);
        m[(l, l + 1)] = C64::new(off, 0.0);
    }
    Ok(SymOperator { n, entries: m })
}

/// Marked-state projector `|e_0><e_0|`.
pub fn build_h0(n: usize) -> Result<SymOperator> {
    check_qubits(n)?;
    let mut m = DMatrix::<C64>::zeros(n + 1, n + 1);
    m[(0, 0)] = C64::new(1.0, 0.0);
    Ok(SymOperator { n, entries: m })
}

/// `|+>^{(x)n}` in the Dicke basis: `amp_k = sqrt(C(n, k) / 2^n)`.
pub fn plus_state(n: usize) -> Result<SymVector> {
    check_qubits(n)?;
    let amp = DVector::from_iterator(
        n + 1,
        binomial_weights(n)
            .into_iter()
            .map(|w| C64::new(w.sqrt(), 0.0)),
    );
    Ok(SymVector { n, amp })
}

/// Full eigendecomposition of a Hermitian operator, kept around so that
/// repeated evolutions under the same Hamiltonian reuse it.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n: usize,
    energies: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl Spectrum {
    /// Diagonalises `h`; eigenpairs are stored in ascending energy order.
    pub fn of(h: &SymOperator) -> Result<Self> {
        let scale = max_norm(h.matrix()).max(1.0);
        let deviation = h.hermiticity_defect();
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        let eig = h.matrix().clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..h.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(h.dim(), h.dim(), |row, col| {
            eig.eigenvectors[(row, order[col])]
        });
        Ok(Self {
            n: h.n(),
            energies,
            vectors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues in ascending order.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenvectors as columns, matching [`Spectrum::energies`].
    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn eigenvector(&self, index: usize) -> SymVector {
        SymVector {
            n: self.n,
            amp: self.vectors.column(index).into_owned(),
        }
    }

    /// `e^{-i h t}` as a dense operator.
    pub fn propagator(&self, t: f64) -> SymOperator {
        let phases = self.phases(t);
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, c| {
            self.vectors[(r, c)] * phases[c]
        });
        SymOperator {
            n: self.n,
            entries: scaled * self.vectors.adjoint(),
        }
    }

    /// `e^{-i h t} v` without forming the propagator.
    pub fn evolve(&self, t: f64, v: &SymVector) -> Result<SymVector> {
        same_dim(self.energies.len(), v.dim())?;
        let mut coords = self.vectors.ad_mul(&v.amp);
        for (c, phase) in coords.iter_mut().zip(self.phases(t)) {
            *c *= phase;
        }
        Ok(SymVector {
            n: self.n,
            amp: &self.vectors * coords,
        })
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.energies
            .iter()
            .map(|&e| C64::from_polar(1.0, -e * t))
            .collect()
    }
}

/// `e^{-i h t} v` through a full Hermitian eigendecomposition of `h`.
pub fn evolve(h: &SymOperator, t: f64, v: &SymVector) -> Result<SymVector> {
    same_dim(h.dim(), v.dim())?;
    Spectrum::of(h)?.evolve(t, v)
}

/// `u^r` by binary exponentiation. `r = 0` yields the identity.
pub fn matrix_power(u: &SymOperator, r: u64) -> SymOperator {
    SymOperator {
        n: u.n,
        entries: power_by_squaring(&u.entries, r),
    }
}

pub(crate) fn power_by_squaring(base: &DMatrix<C64>, mut r: u64) -> DMatrix<C64> {
    let d = base.nrows();
    let mut result: Option<DMatrix<C64>> = None;
    let mut square = base.clone();
    while r > 0 {
        if r & 1 == 1 {
            result = Some(match result {
                None => square.clone(),
                Some(acc) => &square * acc,
            });
        }
        r >>= 1;
        if r > 0 {
            square = &square * &square;
        }
    }
    result.unwrap_or_else(|| DMatrix::identity(d, d))
}

/// `|<a|b>|^2`.
pub fn overlap(a: &SymVector, b: &SymVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}
