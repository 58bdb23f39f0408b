//! Bessel functions, their zeros, and the closed-form constants built on them.

pub mod bessel;
pub mod constants;

pub use bessel::{bessel_j, bessel_j_prime, bessel_zero, bessel_zeros, BesselZeroTable};
pub use constants::{
    alt_simplicity_threshold, constants, eps_k, gamma_half_integer, j01, kroger_bound,
    multiple_eigenvalue_floor, DimensionalConstants, Formula,
};
