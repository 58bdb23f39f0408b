//! Sparse symmetric factorization and generalized eigensolvers.

pub mod eigen;
pub mod envelope;

pub use eigen::{
    csr_mul, smallest_eigenpairs, smallest_eigenpairs_from, to_dense, EigenOptions, EigenPairs,
};
pub use envelope::{rcm_ordering, EnvelopeCholesky};

/// Richardson extrapolation for a quantity converging at `O(h^order)` when `h` is halved.
pub fn richardson(coarse: f64, fine: f64, order: f64) -> f64 {
    let r = 2f64.powf(order);
    (r * fine - coarse) / (r - 1.0)
}

/// Error estimate attached to an extrapolated value: the distance from the fine
/// value to the extrapolation, inflated by a safety factor of 1.25.
pub fn richardson_error(coarse: f64, fine: f64, order: f64) -> f64 {
    1.25 * (fine - richardson(coarse, fine, order)).abs()
}
