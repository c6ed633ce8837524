use super::laurent::{default_radius, laurent_coeffs, PoleDatum};
use super::scan::{locate_poles, ScanSettings, StripScan};
use crate::cross_section::ConormalFamily;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::C64;

/// `det F(z)` with the fixed row normalization of the family.
pub fn char_determinant(f: &ConormalFamily, z: C64) -> C64 {
    f.delta(z)
}

/// `F^{-1}` with the poles found in a strip and their Laurent data.
#[derive(Clone, Debug)]
pub struct MeromorphicInverse {
    family: ConormalFamily,
    scan: StripScan,
    poles: Vec<PoleDatum>,
}

/// Locates the poles of `F^{-1}` in `a < Re z < b`, `|Im z| <= h` and extracts
/// their Laurent data.
pub fn invert_family(f: &ConormalFamily, strip: (f64, f64), imag_box: f64, settings: &ScanSettings) -> Result<MeromorphicInverse> {
    let scan = locate_poles(f, strip, imag_box, settings)?;
    let all: Vec<C64> = scan.all.iter().map(|p| p.z).collect();
    let poles = scan
        .poles
        .iter()
        .map(|&p| laurent_coeffs(f, p, default_radius(p.z, &all), settings.exec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeromorphicInverse { family: f.clone(), scan, poles })
}

impl MeromorphicInverse {
    pub fn family(&self) -> &ConormalFamily {
        &self.family
    }

    pub fn poles(&self) -> &[PoleDatum] {
        &self.poles
    }

    pub fn scan(&self) -> &StripScan {
        &self.scan
    }

    pub fn strip(&self) -> (f64, f64) {
        self.scan.strip
    }

    /// `F(z)^{-1}`; refuses points on a located pole.
    pub fn full(&self, z: C64) -> Result<CMat> {
        if let Some(p) = self.scan.all.iter().find(|p| (p.z - z).norm() <= 1e-9 * p.z.norm().max(1.0)) {
            return Err(Error::Singular(format!("evaluation at the located pole {}", p.z)));
        }
        self.family.inverse(z).ok_or_else(|| Error::Singular(format!("F({z}) is not invertible")))
    }

    /// `(r_0(z), k_0(z))`: columns of `F(z)^{-1}` for interior and boundary data.
    pub fn eval(&self, z: C64) -> Result<(CMat, CMat)> {
        let inv = self.full(z)?;
        Ok((self.family.r0_block(&inv), self.family.k0_block(&inv)))
    }
}
