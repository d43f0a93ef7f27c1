use nalgebra::DMatrix;

use super::C64;

/// `max_{j,k} |A_jk|`.
pub fn max_norm(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius_norm(a: &DMatrix<C64>) -> f64 {
    a.norm()
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<C64>) -> f64 {
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b - b * a
}

/// `min_phi ||a - e^{i phi} b||_max`, with `phi` aligned to `tr(b^dagger a)`.
///
/// The alignment is the Frobenius-optimal phase; for operators that agree up
/// to a global phase it recovers that phase exactly.
pub fn phase_invariant_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    // tr(b^dagger a) = sum_jk conj(b_jk) a_jk
    let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    max_norm(&(a - b * phase))
}
