//! Dense complex matrices, induced operator norms, spectra and the
//! polynomial functional calculus.

mod eigen;
mod hermitian;
mod matrix;
mod norm;
mod poly;

pub use eigen::{characteristic_polynomial, eigenvalues, polynomial_roots, Spectrum, ABERTH_MAX_SWEEPS};
pub use hermitian::{hermitian_max_eigenvalue, hermitian_min_eigenvalue};
pub use matrix::{Matrix, MAX_DIM};
pub use norm::{
    column_sum_norm, induced_norm, inverse, power_iteration_norm2, resolvent_norm, row_sum_norm,
    spectral_norm, NormKind, POWER_ITERATION_CAP, POWER_ITERATION_RTOL,
};
pub use poly::{poly_apply, upper_toeplitz, Polynomial};


/// Plain (non-conjugating) transpose.
pub fn transpose(t: &Matrix) -> Matrix {
    t.transpose()
}
