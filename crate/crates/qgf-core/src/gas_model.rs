//! Ideal quantum gases in the continuum approximation.
//!
//! All thermodynamic quantities are written through
//! L_a = -Li_a(-e^{βμ}) for fermions and L_a = Li_a(e^{βμ}) for bosons,
//! with a prefactor A = V/λ_T^d and index k = d/2 for boxes, or
//! A = (βℏΩ)^{-d} and k = d for harmonic traps. Then
//!
//! ```text
//! ⟨N⟩  = A L_k
//! ⟨H⟩  = (k/β) A L_{k+1}
//! F_μμ = β² A L_{k-1}
//! F_βμ = A (βμ L_{k-1} - k L_k)
//! F_ββ = A/β² (β²μ² L_{k-1} - 2kβμ L_k + k(k+1) L_{k+1})
//! ```

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::polylog::{li_exp, li_neg_exp};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Fermi,
    Bose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confinement {
    PeriodicBox,
    HarmonicTrap,
    /// Hard walls. Continuum formulas treat it like a periodic box.
    DirichletBox,
}

impl Confinement {
    pub fn is_box(self) -> bool {
        !matches!(self, Confinement::HarmonicTrap)
    }
}

/// A non-interacting gas: statistics, confinement and geometry.
///
/// `geometry` holds side lengths for boxes and angular frequencies for
/// traps, one per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GasSpec {
    pub statistics: Statistics,
    pub confinement: Confinement,
    pub geometry: Vec<f64>,
    pub mass: f64,
    pub units: UnitSystem,
}

impl GasSpec {
    pub fn new(
        statistics: Statistics,
        confinement: Confinement,
        geometry: &[f64],
        mass: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        if geometry.is_empty() || geometry.len() > 3 {
            return domain(format!("dimension must be 1, 2 or 3, got {}", geometry.len()));
        }
        if geometry.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return domain("lengths and frequencies must be positive and finite");
        }
        if !(mass.is_finite() && mass > 0.0) {
            return domain(format!("mass must be positive, got {mass}"));
        }
        Ok(GasSpec { statistics, confinement, geometry: geometry.to_vec(), mass, units })
    }

    /// Isotropic box of side `l` in `d` dimensions.
    pub fn isotropic_box(statistics: Statistics, d: usize, l: f64, mass: f64, units: UnitSystem) -> Result<Self> {
        GasSpec::new(statistics, Confinement::PeriodicBox, &vec![l; d], mass, units)
    }

    /// Isotropic harmonic trap of angular frequency `omega` in `d` dimensions.
    pub fn isotropic_trap(statistics: Statistics, d: usize, omega: f64, mass: f64, units: UnitSystem) -> Result<Self> {
        GasSpec::new(statistics, Confinement::HarmonicTrap, &vec![omega; d], mass, units)
    }

    pub fn dim(&self) -> usize {
        self.geometry.len()
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar()
    }

    /// V_d = ∏L_i (boxes only).
    pub fn volume(&self) -> f64 {
        debug_assert!(self.confinement.is_box());
        self.geometry.iter().product()
    }

    /// Ω_d = (∏ω_i)^{1/d} (traps only).
    pub fn mean_frequency(&self) -> f64 {
        debug_assert!(!self.confinement.is_box());
        self.geometry.iter().product::<f64>().powf(1.0 / self.dim() as f64)
    }

    pub fn is_isotropic(&self) -> bool {
        let g0 = self.geometry[0];
        self.geometry.iter().all(|g| ((g - g0) / g0).abs() < 1e-12)
    }

    /// λ_T = sqrt(2πℏ²β/m).
    pub fn thermal_wavelength(&self, beta: f64) -> f64 {
        let h = self.hbar();
        (2.0 * PI * h * h * beta / self.mass).sqrt()
    }

    /// Density convention: ⟨N⟩/V_d for boxes, ⟨N⟩Ω_d^d for traps.
    pub fn density(&self, mean_n: f64) -> f64 {
        if self.confinement.is_box() {
            mean_n / self.volume()
        } else {
            mean_n * self.mean_frequency().powi(self.dim() as i32)
        }
    }

    /// Copy with every extent scaled so that V_d (or Ω_d^{-d}) is multiplied by `factor`.
    pub fn scaled_extent(&self, factor: f64) -> GasSpec {
        let per_axis = factor.powf(1.0 / self.dim() as f64);
        let mut out = self.clone();
        for g in &mut out.geometry {
            if self.confinement.is_box() {
                *g *= per_axis;
            } else {
                *g /= per_axis;
            }
        }
        out
    }

    /// A = V/λ_T^d (box) or (βℏΩ)^{-d} (trap).
    pub fn prefactor(&self, beta: f64) -> f64 {
        let d = self.dim() as i32;
        if self.confinement.is_box() {
            self.volume() / self.thermal_wavelength(beta).powi(d)
        } else {
            (beta * self.hbar() * self.mean_frequency()).powi(-d)
        }
    }

    /// Index k: d/2 for boxes, d for traps.
    pub fn order(&self) -> f64 {
        let d = self.dim() as f64;
        if self.confinement.is_box() {
            d / 2.0
        } else {
            d
        }
    }
}

/// Inverse temperature and chemical potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub beta: f64,
    pub mu: f64,
}

impl ThermoPoint {
    pub fn new(beta: f64, mu: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return domain(format!("beta must be positive, got {beta}"));
        }
        if !mu.is_finite() {
            return domain("mu must be finite");
        }
        Ok(ThermoPoint { beta, mu })
    }

    /// Point with βμ = `x`.
    pub fn from_log_fugacity(beta: f64, x: f64) -> Result<Self> {
        ThermoPoint::new(beta, x / beta)
    }

    pub fn log_fugacity(&self) -> f64 {
        self.beta * self.mu
    }

    pub fn fugacity(&self) -> f64 {
        self.log_fugacity().exp()
    }
}

/// Symmetric 2×2 Fisher matrix in the (β, μ) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherMatrix2 {
    pub f_bb: f64,
    pub f_bm: f64,
    pub f_mm: f64,
}

impl FisherMatrix2 {
    pub fn new(f_bb: f64, f_bm: f64, f_mm: f64) -> Self {
        FisherMatrix2 { f_bb, f_bm, f_mm }
    }

    pub fn det(&self) -> f64 {
        self.f_bb * self.f_mm - self.f_bm * self.f_bm
    }

    pub fn trace(&self) -> f64 {
        self.f_bb + self.f_mm
    }

    /// Positive semidefinite up to the numerical slack 1e-12·f_bb·f_mm.
    pub fn is_psd(&self) -> bool {
        self.f_bb >= 0.0 && self.f_mm >= 0.0 && self.det() >= -1e-12 * self.f_bb * self.f_mm
    }

    pub fn scale(&self, k: f64) -> Self {
        FisherMatrix2::new(k * self.f_bb, k * self.f_bm, k * self.f_mm)
    }

    pub fn add(&self, o: &FisherMatrix2) -> Self {
        FisherMatrix2::new(self.f_bb + o.f_bb, self.f_bm + o.f_bm, self.f_mm + o.f_mm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasObservables {
    pub mean_n: f64,
    pub mean_h: f64,
    pub var_n: f64,
    pub compressibility: f64,
}

/// ⟨N⟩, ⟨H⟩ and the Fisher matrix at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermo {
    pub mean_n: f64,
    pub mean_h: f64,
    pub fisher: FisherMatrix2,
}

impl Thermo {
    /// ⟨μN - H⟩.
    pub fn mean_grand(&self, mu: f64) -> f64 {
        mu * self.mean_n - self.mean_h
    }
}

fn check_point(spec: &GasSpec, pt: &ThermoPoint) -> Result<()> {
    if !(pt.beta > 0.0) {
        return domain("beta must be positive");
    }
    if spec.statistics == Statistics::Bose && pt.mu >= 0.0 {
        return Err(Error::Domain(format!("Bose continuum formulas need mu < 0, got {}", pt.mu)));
    }
    Ok(())
}

/// L_a at log-fugacity x.
fn l_fn(stat: Statistics, a: f64, x: f64) -> Result<f64> {
    match stat {
        Statistics::Fermi => Ok(-li_neg_exp(a, x)?.value),
        Statistics::Bose => Ok(li_exp(a, x)?.value),
    }
}

/// ⟨N⟩ and d⟨N⟩/d(βμ) = Δ²N at log-fugacity `x`, for root finding.
pub(crate) fn number_and_slope(spec: &GasSpec, beta: f64, x: f64) -> Result<(f64, f64)> {
    if spec.statistics == Statistics::Bose && x >= 0.0 {
        return domain("Bose continuum formulas need mu < 0");
    }
    let a = spec.prefactor(beta);
    let k = spec.order();
    Ok((a * l_fn(spec.statistics, k, x)?, a * l_fn(spec.statistics, k - 1.0, x)?))
}

/// Bose ⟨N⟩ in the limit μ → 0⁻, `None` when it diverges.
pub fn bose_saturation_number(spec: &GasSpec, beta: f64) -> Option<f64> {
    let k = spec.order();
    if k > 1.0 {
        Some(spec.prefactor(beta) * crate::special::zeta_any(k))
    } else {
        None
    }
}

pub fn mean_particle_number(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    check_point(spec, pt)?;
    Ok(spec.prefactor(pt.beta) * l_fn(spec.statistics, spec.order(), pt.log_fugacity())?)
}

pub fn mean_energy(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    check_point(spec, pt)?;
    let k = spec.order();
    Ok(k / pt.beta * spec.prefactor(pt.beta) * l_fn(spec.statistics, k + 1.0, pt.log_fugacity())?)
}

pub fn fisher_continuum(spec: &GasSpec, pt: &ThermoPoint) -> Result<FisherMatrix2> {
    Ok(thermo(spec, pt)?.fisher)
}

/// All continuum moments at once, sharing the three polylog evaluations.
pub fn thermo(spec: &GasSpec, pt: &ThermoPoint) -> Result<Thermo> {
    check_point(spec, pt)?;
    let k = spec.order();
    let x = pt.log_fugacity();
    let b = pt.beta;
    let a = spec.prefactor(b);
    let lm = l_fn(spec.statistics, k - 1.0, x)?;
    let l0 = l_fn(spec.statistics, k, x)?;
    let lp = l_fn(spec.statistics, k + 1.0, x)?;
    let f_mm = b * b * a * lm;
    let f_bm = a * (x * lm - k * l0);
    let f_bb = a / (b * b) * (x * x * lm - 2.0 * k * x * l0 + k * (k + 1.0) * lp);
    Ok(Thermo { mean_n: a * l0, mean_h: k / b * a * lp, fisher: FisherMatrix2::new(f_bb, f_bm, f_mm) })
}

pub fn observables(spec: &GasSpec, pt: &ThermoPoint) -> Result<GasObservables> {
    let t = thermo(spec, pt)?;
    let var_n = t.fisher.f_mm / (pt.beta * pt.beta);
    Ok(GasObservables {
        mean_n: t.mean_n,
        mean_h: t.mean_h,
        var_n,
        compressibility: kappa(spec, pt.beta, t.mean_n, var_n)?,
    })
}

fn kappa(spec: &GasSpec, beta: f64, mean_n: f64, var_n: f64) -> Result<f64> {
    if !(mean_n > 0.0) {
        return domain("compressibility undefined for an empty gas");
    }
    Ok(beta * var_n / (spec.density(mean_n) * mean_n))
}

/// κ_T = βΔ²N/(ϱ⟨N⟩).
pub fn compressibility(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    Ok(observables(spec, pt)?.compressibility)
}

/// Degenerate Fermi gas limit, valid for βμ ≫ 1.
pub fn fisher_lowt_fermi(spec: &GasSpec, pt: &ThermoPoint) -> Result<FisherMatrix2> {
    if spec.statistics != Statistics::Fermi {
        return domain("low-temperature expansion applies to fermions only");
    }
    if !(pt.log_fugacity() >= 10.0) {
        return domain(format!("low-temperature expansion needs βμ ≥ 10, got {}", pt.log_fugacity()));
    }
    let n = mean_particle_number(spec, pt)?;
    let d = spec.dim() as f64;
    let (b, mu) = (pt.beta, pt.mu);
    let pi2 = PI * PI;
    let f = if spec.confinement.is_box() {
        FisherMatrix2::new(
            d * pi2 / (6.0 * b.powi(3) * mu) * n,
            (2.0 - d) * d * pi2 / (12.0 * b * b * mu * mu) * n,
            d * b / (2.0 * mu) * n,
        )
    } else {
        FisherMatrix2::new(
            d * pi2 / (3.0 * b.powi(3) * mu) * n,
            (1.0 - d) * d * pi2 / (3.0 * b * b * mu * mu) * n,
            d * b / mu * n,
        )
    };
    Ok(f)
}

/// Maxwell-Boltzmann gas with the same geometry.
pub fn classical_fisher(spec: &GasSpec, pt: &ThermoPoint) -> Result<(GasObservables, FisherMatrix2)> {
    if !(pt.beta > 0.0) {
        return domain("beta must be positive");
    }
    let b = pt.beta;
    let d = spec.dim() as f64;
    // one-particle energy mean and variance
    let (h1, var_h1) = if spec.confinement.is_box() {
        (d / (2.0 * b), d / (2.0 * b * b))
    } else {
        (d / b, d / (b * b))
    };
    let n = pt.fugacity() * spec.prefactor(b);
    let dm = pt.mu - h1;
    let fisher = FisherMatrix2::new(n * (dm * dm + var_h1), b * n * dm, b * b * n);
    let obs = GasObservables {
        mean_n: n,
        mean_h: n * h1,
        var_n: n,
        compressibility: if n > 0.0 { b / spec.density(n) } else { f64::NAN },
    };
    Ok((obs, fisher))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reduced_box(stat: Statistics, d: usize) -> GasSpec {
        GasSpec::isotropic_box(stat, d, 7.0, 1.0, UnitSystem::Reduced).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn bose_box_2d_closed_form() {
        let spec = reduced_box(Statistics::Bose, 2);
        let pt = ThermoPoint::new(1.3, -0.2).unwrap();
        let lam = spec.thermal_wavelength(pt.beta);
        let area = spec.volume();
        let n = mean_particle_number(&spec, &pt).unwrap();
        let want = -(area / (lam * lam)) * (1.0 - pt.fugacity()).ln();
        assert!(rel(n, want) < 1e-13);
        let f = fisher_continuum(&spec, &pt).unwrap();
        let want_mm = pt.beta * pt.beta * area / (lam * lam) * ((lam * lam * n / area).exp() - 1.0);
        assert!(rel(f.f_mm, want_mm) < 1e-12);
    }

    #[test]
    fn fermi_trap_1d_at_zero_mu() {
        let spec = GasSpec::isotropic_trap(Statistics::Fermi, 1, 2.0, 1.0, UnitSystem::Reduced).unwrap();
        let pt = ThermoPoint::new(0.5, 0.0).unwrap();
        let n = mean_particle_number(&spec, &pt).unwrap();
        assert!(rel(n, 2f64.ln() / (0.5 * 2.0)) < 1e-14);
    }

    #[test]
    fn bose_requires_negative_mu() {
        let spec = reduced_box(Statistics::Bose, 3);
        let pt = ThermoPoint::new(1.0, 0.0).unwrap();
        assert!(mean_particle_number(&spec, &pt).is_err());
        assert!(fisher_continuum(&spec, &pt).is_err());
    }

    #[test]
    fn lowt_coefficients_vanish() {
        let spec = reduced_box(Statistics::Fermi, 2);
        let pt = ThermoPoint::from_log_fugacity(1.0, 30.0).unwrap();
        assert_eq!(fisher_lowt_fermi(&spec, &pt).unwrap().f_bm, 0.0);
        let trap = GasSpec::isotropic_trap(Statistics::Fermi, 1, 1.0, 1.0, UnitSystem::Reduced).unwrap();
        assert_eq!(fisher_lowt_fermi(&trap, &pt).unwrap().f_bm, 0.0);
        let bad = ThermoPoint::from_log_fugacity(1.0, 5.0).unwrap();
        assert!(fisher_lowt_fermi(&spec, &bad).is_err());
    }

    #[test]
    fn classical_examples() {
        let spec = reduced_box(Statistics::Bose, 3);
        let pt = ThermoPoint::new(2.0, -3.0).unwrap();
        let (obs, f) = classical_fisher(&spec, &pt).unwrap();
        let (b, mu) = (pt.beta, pt.mu);
        assert!(rel(f.f_bb, obs.mean_n * (mu * mu - 3.0 * mu / b + 15.0 / (4.0 * b * b))) < 1e-13);
        let trap = GasSpec::isotropic_trap(Statistics::Bose, 3, 1.0, 1.0, UnitSystem::Reduced).unwrap();
        let (obs, f) = classical_fisher(&trap, &pt).unwrap();
        assert!(rel(f.f_bm, obs.mean_n * (b * mu - 3.0)) < 1e-13);
        let at_mean = ThermoPoint::new(2.0, 1.5).unwrap();
        assert_eq!(classical_fisher(&trap, &at_mean).unwrap().1.f_bm, 0.0);
    }

    #[test]
    fn classical_compressibility() {
        let spec = reduced_box(Statistics::Fermi, 3);
        let pt = ThermoPoint::from_log_fugacity(1.0, -20.0).unwrap();
        let k = compressibility(&spec, &pt).unwrap();
        let n = mean_particle_number(&spec, &pt).unwrap();
        assert!(rel(k, pt.beta / spec.density(n)) < 1e-8);
    }

    #[test]
    fn spec_validation() {
        assert!(GasSpec::new(Statistics::Bose, Confinement::PeriodicBox, &[], 1.0, UnitSystem::Reduced).is_err());
        assert!(GasSpec::new(Statistics::Bose, Confinement::PeriodicBox, &[1.0, -1.0], 1.0, UnitSystem::Reduced).is_err());
        assert!(GasSpec::new(Statistics::Bose, Confinement::PeriodicBox, &[1.0; 4], 1.0, UnitSystem::Reduced).is_err());
        assert!(ThermoPoint::new(0.0, 1.0).is_err());
    }
}
