//! Boundary value problems of Fuchs type on a cone over an interval.
//!
//! The crate covers the symbolic operator algebra (composition, formal
//! adjoints, Green matrices, adjoint boundary conditions), a collocation
//! discretization of the conormal symbol, meromorphic inversion and pole
//! data, domain descriptions of the closed extensions, and two verification
//! labs for the adjoint and for finite-dimensional index identities.

pub mod adjoint_lab;
pub mod cross_section;
pub mod domains;
pub mod error;
pub mod fredholm_lab;
pub mod fuchs;
pub mod linalg;
pub mod mat;
pub mod meromorphic;
pub mod models;
pub mod par;
pub mod problem;
pub mod quad;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use mat::Mat;
pub use par::Exec;
pub use problem::Problem;
pub use scalar::{Scalar, C64, CQ};
