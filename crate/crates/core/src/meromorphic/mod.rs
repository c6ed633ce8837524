//! Poles of the inverted conormal symbol, their Laurent data and the
//! recursion for the lower-order inverted symbols.

mod inverse;
mod laurent;
mod recursion;
mod scan;

pub use inverse::{char_determinant, invert_family, MeromorphicInverse};
pub use laurent::{
    contour_coefficients, default_radius, hankel, laurent_coeffs, laurent_data, PoleDatum, LAURENT_NODES, RANK_TOL,
};
pub use recursion::Recursion;
pub use scan::{locate_poles, scan_rectangle, scan_strip, segment_moments, sort_poles, Pole, Rect, ScanSettings, StripScan};

#[cfg(test)]
mod tests;
