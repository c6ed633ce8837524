//! Discretized cross-section: collocation of the conormal symbols together
//! with the boundary rows, and the ellipticity checks.

mod discretization;
mod ellipticity;
mod family;

pub use discretization::Discretization;
pub use ellipticity::{
    boundary_principal_symbol, lopatinskij_check, principal_symbol_check, t_samples, LopatinskijReport, SymbolReport,
};
pub use family::ConormalFamily;
