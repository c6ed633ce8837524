//! Realization data from pole data: weight lines, relative index, the
//! singular functions of the maximal domain and domain reports.

mod basis;
mod report;
mod weight;

pub use basis::{indicial_residual, singular_basis, SingularBasis, SingularFunction, SUBSTRIP_EPS};
pub use report::{domain_report, pole_table, AnalysisSettings, DomainReport, PoleTable, Verdict};
pub use weight::{
    membership, membership_all, relative_index, trace_weight, weight_line_check, Space, WeightData, LINE_TOL,
};

#[cfg(test)]
mod tests;
