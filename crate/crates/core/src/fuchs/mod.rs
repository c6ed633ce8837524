//! Symbolic algebra of Fuchs-type operators and boundary conditions.

pub mod boundary;
pub mod crossop;
pub mod green;
pub mod mellin;
pub mod series;
pub mod singular;
pub mod xpoly;

pub use boundary::{normality_check, triangular_invert, BoundaryCondition, BoundaryPoint, Normality, TriangularInverse};
pub use crossop::CrossOp;
pub use green::{adjoint_condition, green_matrix, green_matrix_x};
pub use mellin::{Coeff, MellinPoly};
pub use series::{BoundaryFuchsOp, FuchsOp, FuchsSeries};
pub use singular::{apply_mellin, apply_to_singular, Section, SingularTerm};
pub use xpoly::XPoly;
