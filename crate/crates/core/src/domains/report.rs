use super::basis::{singular_basis, SingularFunction};
use super::weight::{membership_all, relative_index, Space, WeightData, LINE_TOL};
use crate::cross_section::{lopatinskij_check, principal_symbol_check, ConormalFamily, Discretization};
use crate::error::{Error, Result};
use crate::meromorphic::{default_radius, laurent_coeffs, scan_strip, PoleDatum, Recursion, ScanSettings};
use crate::problem::Problem;
use crate::scalar::C64;

/// Discretization and search settings shared by the analyses.
#[derive(Clone, Copy, Debug)]
pub struct AnalysisSettings {
    pub grid_n: usize,
    pub imag_box: f64,
    pub scan: ScanSettings,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings { grid_n: 48, imag_box: 10.0, scan: ScanSettings::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Verdict { passed: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Verdict { passed: false, detail: detail.into() }
    }
}

/// Poles of `r_0` near the strip with their Laurent data.
#[derive(Clone, Debug)]
pub struct PoleTable {
    pub strip: (f64, f64),
    pub imag_box: f64,
    pub poles: Vec<PoleDatum>,
}

impl PoleTable {
    pub fn in_strip(&self, d: &PoleDatum) -> bool {
        d.p.re > self.strip.0 + LINE_TOL && d.p.re < self.strip.1 - LINE_TOL && d.p.im.abs() <= self.imag_box
    }

    pub fn strip_poles(&self) -> Vec<PoleDatum> {
        self.poles.iter().filter(|d| self.in_strip(d)).cloned().collect()
    }

    pub fn positions(&self) -> Vec<C64> {
        self.poles.iter().map(|d| d.p).collect()
    }
}

/// Scans `a < Re z < b` (plus the scan margin) and extracts Laurent data of every
/// pole found within the imaginary box.
pub fn pole_table(f: &ConormalFamily, strip: (f64, f64), settings: &AnalysisSettings) -> Result<PoleTable> {
    let scan = scan_strip(&|z| f.log_derivative(z), strip, settings.imag_box, &settings.scan)?;
    let all: Vec<C64> = scan.all.iter().map(|p| p.z).collect();
    let poles = scan
        .all
        .iter()
        .filter(|p| p.z.im.abs() <= settings.imag_box)
        .map(|&p| laurent_coeffs(f, p, default_radius(p.z, &all), settings.scan.exec))
        .collect::<Result<Vec<_>>>()?;
    Ok(PoleTable { strip, imag_box: settings.imag_box, poles })
}

#[derive(Clone, Debug)]
pub struct DomainReport {
    pub problem: String,
    pub weight: WeightData,
    pub principal_symbol: Verdict,
    pub lopatinskij: Verdict,
    /// Invertibility of the conormal symbol on the weight line.
    pub conormal: Verdict,
    pub table: PoleTable,
    pub relative_index: Option<usize>,
    pub basis: Vec<SingularFunction>,
    pub min_domain: String,
    pub max_domain: String,
    /// Every basis element lies in `H^{0,gamma}` and not in `H^{0,gamma+mu}`.
    pub membership_ok: bool,
    pub flags: Vec<String>,
    pub adjoint: Option<String>,
}

impl DomainReport {
    pub fn is_elliptic(&self) -> bool {
        self.principal_symbol.passed && self.lopatinskij.passed && self.conormal.passed
    }
}

fn fmt_num(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

/// Full domain analysis of a problem at one weight.
pub fn domain_report(problem: &Problem<C64>, w: &WeightData, settings: &AnalysisSettings) -> Result<DomainReport> {
    let principal_symbol = match principal_symbol_check(problem) {
        Ok(r) => Verdict::pass(format!("smallest singular value {:.3e}", r.min_singular_value)),
        Err(e) => Verdict::fail(e.to_string()),
    };
    let lopatinskij = match lopatinskij_check(problem) {
        Ok(r) => Verdict::pass(
            r.iter()
                .map(|x| format!("{}: {} decaying solutions", x.point, x.decaying_dimension))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        Err(e) => Verdict::fail(e.to_string()),
    };
    let disc = Discretization::new(settings.grid_n, problem.length.re)?;
    let rec = Recursion::new(problem, &disc)?;
    let family = &rec.families()[0];
    let (lo, hi) = w.strip();
    // shifted poles p + j of the r_l reaching the strip come from poles p >= lo
    let table = pole_table(family, (lo, hi), settings)?;
    let mut flags = Vec::new();

    let on_line: Vec<&PoleDatum> = table
        .poles
        .iter()
        .filter(|d| (d.p.re - hi).abs() <= LINE_TOL && d.p.im.abs() <= settings.imag_box)
        .collect();
    let conormal = match on_line.first() {
        Some(d) => Verdict::fail(Error::WeightOnPole { re: d.p.re, im: d.p.im, line: hi }.to_string()),
        None => Verdict::pass(format!("no pole on Re z = {}", fmt_num(hi))),
    };
    let endpoint: Vec<&PoleDatum> = table
        .poles
        .iter()
        .filter(|d| (d.p.re - lo).abs() <= LINE_TOL && d.p.im.abs() <= settings.imag_box)
        .collect();
    let near: Vec<PoleDatum> = table
        .poles
        .iter()
        .filter(|d| d.p.re >= lo - LINE_TOL && d.p.re <= hi + LINE_TOL && d.p.im.abs() <= settings.imag_box)
        .cloned()
        .collect();
    let relative = match relative_index(&near, w) {
        Ok(r) => Some(r),
        Err(e @ Error::EndpointPole { .. }) => {
            flags.push(format!("{e}; the relative index is not reported"));
            None
        }
        Err(Error::WeightOnPole { .. }) => None,
        Err(e) => return Err(e),
    };
    let saturated = table.poles.iter().filter(|d| d.saturated).count();
    if saturated > 0 {
        flags.push(format!("{saturated} pole orders reach the size of the discretized family"));
    }

    let mut basis = Vec::new();
    if conormal.passed {
        let b = singular_basis(&rec, &table.poles, w, settings.scan.exec)?;
        flags.extend(b.flags);
        basis = b.functions;
    }
    if basis.iter().any(|f| f.endpoint) {
        flags.push("basis contains exponents on the line of gamma + mu; the sum may be non-direct".into());
    }
    if let Some(r) = relative {
        if endpoint.is_empty() && basis.len() != r && conormal.passed {
            flags.push(format!("basis has {} elements but the relative index is {r}", basis.len()));
        }
    }
    let n = problem.n();
    let lower = Space { s: 0.0, gamma: w.gamma, p_int: w.p_int };
    let upper = Space { s: 0.0, gamma: w.gamma + w.mu as f64, p_int: w.p_int };
    let membership_ok = basis
        .iter()
        .all(|f| membership_all(&f.terms, &lower, n) && !membership_all(&f.terms, &upper, n));

    let min_domain = if endpoint.is_empty() {
        format!("H^{{{},{}}}_{}(D,E)_T", w.mu, fmt_num(w.gamma + w.mu as f64), fmt_num(w.p_int))
    } else {
        format!(
            "{{u in H^{{{},{}-eps}}_{}(D,E)_T for all eps > 0 : A u in H^{{0,{}}}_{}}}",
            w.mu,
            fmt_num(w.gamma + w.mu as f64),
            fmt_num(w.p_int),
            fmt_num(w.gamma),
            fmt_num(w.p_int)
        )
    };
    let max_domain = if basis.is_empty() {
        "D_min".to_string()
    } else {
        format!("D_min + span of {} singular functions", basis.len())
    };
    Ok(DomainReport {
        problem: problem.name.clone(),
        weight: *w,
        principal_symbol,
        lopatinskij,
        conormal,
        table,
        relative_index: relative,
        basis,
        min_domain,
        max_domain,
        membership_ok,
        flags,
        adjoint: None,
    })
}
