//! Quadrature on [0, 1] with algebraic endpoint weights, period oracles and
//! numerical monodromy of the Gauss–Manin system.

mod monodromy;
mod oracle;
mod rules;

pub use monodromy::{
    calibrate_sign, eigenvalues, finite_composite, frob, identity, inverse, monodromy, monodromy_of, pair_distance,
    predicted_eigenvalues, product, spectrum_distance, sub_identity, CMat2, LoopCenter, LoopPath, BASEPOINT, MONODROMY_SIGN,
};
pub use oracle::{oracle_one_period, oracle_two_period, oracle_two_period_direct, oracle_two_period_form};
pub use rules::{gauss_jacobi_rule, jacobi_quad, jacobi_quad_with, JacobiWeight, QuadMethod};
