//! The adjoint problem and numerical checks of its defining identities.

mod build;
mod conjugation;
mod green_quad;
mod testfn;

pub use build::{adjoint_ellipticity, anti_diagonal_defect, build_adjoint, condition_distance, AdjointEllipticity, AdjointProblem};
pub use conjugation::{admissible_sections, cauchy_data, conjugation_check, reflection_offset, ConjugationReport};
pub use green_quad::{green_identity_quadrature, pairing, GreenResidual, QUAD_NODES};
pub use testfn::{kernel_test_functions, random_test_function, TestFunction};

#[cfg(test)]
mod tests;
