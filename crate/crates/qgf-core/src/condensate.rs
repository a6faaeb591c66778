//! Bose-Einstein condensation: critical temperatures, condensed-phase Fisher
//! matrices, isobaric condensation in 2D and generalized condensation in
//! slab and cigar geometries.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::gas_model::{Confinement, FisherMatrix2, GasSpec, Statistics};
use crate::lattice_sums::converged_lattice_constant;
use crate::polylog::li_exp;
use crate::special::zeta_any;
use crate::units::UnitSystem;

fn require_bose(spec: &GasSpec) -> Result<()> {
    if spec.statistics != Statistics::Bose {
        return domain("condensation needs Bose statistics");
    }
    Ok(())
}

/// Whether (confinement, d) has a condensed phase at finite density.
pub fn has_transition(spec: &GasSpec) -> bool {
    match spec.confinement {
        Confinement::HarmonicTrap => spec.dim() >= 2,
        _ => spec.dim() == 3,
    }
}

/// Critical temperature at `density` (⟨N⟩/V for boxes, ⟨N⟩Ω^d for traps).
///
/// Box d=3: (2πℏ²/k_B m)(ϱ/ζ(3/2))^{2/3}. Trap: (ℏ/k_B)(ϱ̃/ζ(d))^{1/d}.
pub fn critical_temperature(spec: &GasSpec, density: f64) -> Result<f64> {
    require_bose(spec)?;
    if !(density > 0.0 && density.is_finite()) {
        return domain(format!("density must be positive, got {density}"));
    }
    if !has_transition(spec) {
        return Err(Error::NoTransition(format!(
            "no condensation at finite density for a {}D {}",
            spec.dim(),
            if spec.confinement.is_box() { "box" } else { "trap" }
        )));
    }
    let (h, kb) = (spec.hbar(), spec.units.kb());
    let d = spec.dim() as f64;
    Ok(if spec.confinement.is_box() {
        2.0 * PI * h * h / (kb * spec.mass) * (density / zeta_any(1.5)).powf(2.0 / 3.0)
    } else {
        h / kb * (density / zeta_any(d)).powf(1.0 / d)
    })
}

/// Condensate fraction 1 - (T/T_c)^p, p = 3/2 for the box and d for traps.
pub fn condensate_fraction(spec: &GasSpec, t: f64, t_c: f64) -> Result<f64> {
    if !(t >= 0.0 && t_c > 0.0) {
        return domain("temperatures must be non-negative");
    }
    if t > t_c {
        return domain(format!("T = {t:.6e} is above T_c = {t_c:.6e}"));
    }
    let p = if spec.confinement.is_box() { 1.5 } else { spec.dim() as f64 };
    Ok(1.0 - (t / t_c).powf(p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensedState {
    pub temperature: f64,
    pub t_c: f64,
    pub fraction: f64,
    /// Finite-size chemical potential, -βμ ≈ 1/(f⟨N⟩).
    pub mu_eff: f64,
    /// Drop ground-mode fluctuations (Δ²N₀ = 0).
    pub symmetry_breaking: bool,
}

impl CondensedState {
    pub fn new(spec: &GasSpec, temperature: f64, mean_n: f64, symmetry_breaking: bool) -> Result<Self> {
        if !(mean_n > 0.0) {
            return domain("mean particle number must be positive");
        }
        let t_c = critical_temperature(spec, spec.density(mean_n))?;
        if !(temperature > 0.0 && temperature < t_c) {
            return domain(format!("T = {temperature:.6e} is not below T_c = {t_c:.6e}"));
        }
        let fraction = condensate_fraction(spec, temperature, t_c)?;
        let beta = spec.units.beta_from_temperature(temperature);
        Ok(CondensedState { temperature, t_c, fraction, mu_eff: -1.0 / (beta * fraction * mean_n), symmetry_breaking })
    }

    pub fn beta(&self, units: UnitSystem) -> f64 {
        units.beta_from_temperature(self.temperature)
    }
}

/// Continuum F_ββ at βμ = 0.
///
/// Box: (d²+2d)ζ(d/2+1) m^{d/2} V/(2^{2+d/2}π^{d/2}ℏ^d β^{2+d/2}).
/// Trap: (d+d²)ζ(d+1)/(ℏ^d β^{d+2} Ω^d).
pub fn condensed_fisher_bb(spec: &GasSpec, beta: f64) -> Result<f64> {
    require_bose(spec)?;
    let k = spec.order();
    Ok(spec.prefactor(beta) / (beta * beta) * k * (k + 1.0) * zeta_any(k + 1.0))
}

/// Excited-mode F_μμ with the ground mode removed and μ set to 0.
fn excited_fisher_mm(spec: &GasSpec, beta: f64) -> Result<f64> {
    let k = spec.order();
    let b2 = beta * beta;
    if k - 1.0 > 1.0 {
        // trap d=3: β²Aζ(2) = π²β²⟨N_ex⟩/(6ζ(3))
        return Ok(b2 * spec.prefactor(beta) * zeta_any(k - 1.0));
    }
    if !spec.is_isotropic() {
        return domain("the excited-mode sums need an isotropic gas");
    }
    let h = spec.hbar();
    match (spec.confinement.is_box(), spec.dim()) {
        (true, 3) => {
            let lam = spec.thermal_wavelength(beta);
            Ok(converged_lattice_constant(3)? * b2 * spec.volume().powf(4.0 / 3.0) / (PI * PI * lam.powi(4)))
        }
        (false, 2) => {
            let w = spec.mean_frequency();
            Ok((1.0 / (beta * h * w).powi(2)).ln() / (2.0 * h * h * w * w))
        }
        _ => Err(Error::NoTransition("no condensed phase for this geometry".into())),
    }
}

/// Fisher matrix in the condensed phase.
///
/// Excited modes are taken at μ = 0. Without symmetry breaking the ground
/// mode adds β²(f⟨N⟩ + f²⟨N⟩²) to F_μμ, β⁻² to F_ββ and (βμ)⁻¹ = -f⟨N⟩
/// to F_βμ.
pub fn condensed_fisher(spec: &GasSpec, cs: &CondensedState, mean_n: f64) -> Result<FisherMatrix2> {
    require_bose(spec)?;
    if !(cs.temperature < cs.t_c && cs.fraction > 0.0 && cs.fraction <= 1.0) {
        return domain("state is not condensed");
    }
    let beta = cs.beta(spec.units);
    let k = spec.order();
    let f_bb = condensed_fisher_bb(spec, beta)?;
    let f_bm = -k * spec.prefactor(beta) * zeta_any(k);
    let f_mm = excited_fisher_mm(spec, beta)?;
    let mut out = FisherMatrix2::new(f_bb, f_bm, f_mm);
    if !cs.symmetry_breaking {
        let n0 = cs.fraction * mean_n;
        out = out.add(&FisherMatrix2::new(1.0 / (beta * beta), -n0, beta * beta * (n0 + n0 * n0)));
    }
    Ok(out)
}

/// Isobaric condensation temperature of the 2D Dirichlet box, √(12ℏ²P/(π m k_B²)).
pub fn isobaric_transition(pressure: f64, mass: f64, units: UnitSystem) -> Result<f64> {
    if !(pressure > 0.0 && mass > 0.0) {
        return domain("pressure and mass must be positive");
    }
    let h = units.hbar();
    Ok((12.0 * h * h * pressure / (PI * mass)).sqrt() / units.kb())
}

/// Above-T_c density asymptote -√(3mP/(π³ℏ²)) ln(T/T_c - 1).
pub fn isobaric_density(t: f64, pressure: f64, mass: f64, units: UnitSystem) -> Result<f64> {
    let t_c = isobaric_transition(pressure, mass, units)?;
    if !(t > t_c) {
        return domain(format!("density asymptote holds only above T_c = {t_c:.6e}"));
    }
    let h = units.hbar();
    Ok(-(3.0 * mass * pressure / (PI.powi(3) * h * h)).sqrt() * (t / t_c - 1.0).ln())
}

/// Choice of the characteristic length ℓ in the slab formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlabLength {
    ThermalWavelength,
    Fixed(f64),
}

/// Slab with L_x = L_y = γ e^{αL_z}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabSpec {
    pub density: f64,
    pub alpha: f64,
    pub ell: SlabLength,
    pub units: UnitSystem,
}

impl SlabSpec {
    pub fn new(density: f64, alpha: f64, ell: SlabLength, units: UnitSystem) -> Result<Self> {
        if !(density > 0.0 && alpha > 0.0) {
            return domain("density and alpha must be positive");
        }
        if let SlabLength::Fixed(l) = ell {
            if !(l > 0.0) {
                return domain("characteristic length must be positive");
            }
        }
        Ok(SlabSpec { density, alpha, ell, units })
    }

    fn thermal_wavelength(&self, mass: f64, t: f64) -> f64 {
        let h = self.units.hbar();
        (2.0 * PI * h * h / (mass * self.units.kb() * t)).sqrt()
    }
}

/// (T_c^3D, T_c^2D). The second solves ζ(3/2)/λ³ + 2α/λ² = ϱ for λ.
///
/// The left side sweeps (0, ∞) as λ decreases, so a root exists for any ϱ, α > 0.
pub fn slab_critical_temperatures(slab: &SlabSpec, mass: f64) -> Result<(f64, f64)> {
    let h = slab.units.hbar();
    let kb = slab.units.kb();
    let rho = slab.density;
    let z = zeta_any(1.5);
    let t3 = 2.0 * PI * h * h / (kb * mass) * (rho / z).powf(2.0 / 3.0);
    // g(u) = ζ(3/2)u³ + 2αu² - ϱ with u = 1/λ is increasing for u > 0
    let g = |u: f64| z * u.powi(3) + 2.0 * slab.alpha * u * u - rho;
    // g(0) = -ϱ < 0 and g((ϱ/ζ)^{1/3}) > 0, so the root is always bracketed
    let mut lo = 0.0;
    let mut hi = (rho / z).cbrt();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let lam = 1.0 / (0.5 * (lo + hi));
    let t2 = 2.0 * PI * h * h / (mass * kb * lam * lam);
    Ok((t3, t2))
}

/// F_μμ/⟨N⟩ of the slab between the two critical temperatures:
///
/// ```text
/// 2αβ²/(ϱλ² ln X)·(X^{fϱλ²/2α} - 1) + √π β²/(ϱλ³)·X^{fϱλ²/4α},  X = ⟨N⟩/(ϱℓ³)
/// ```
pub fn slab_fisher_per_particle(slab: &SlabSpec, mass: f64, t: f64, mean_n: f64) -> Result<f64> {
    let (t3, t2) = slab_critical_temperatures(slab, mass)?;
    if !(t >= t2 * (1.0 - 1e-12) && t <= t3 * (1.0 + 1e-12)) {
        return domain(format!("T = {t:.6e} outside [{t2:.6e}, {t3:.6e}]"));
    }
    if !(mean_n > 0.0) {
        return domain("mean particle number must be positive");
    }
    let rho = slab.density;
    let beta = slab.units.beta_from_temperature(t);
    let lam = slab.thermal_wavelength(mass, t);
    let ell = match slab.ell {
        SlabLength::ThermalWavelength => lam,
        SlabLength::Fixed(l) => l,
    };
    let f = (1.0 - (t / t3).powf(1.5)).max(0.0);
    let x = mean_n / (rho * ell.powi(3));
    if !(x > 1.0) {
        return domain("⟨N⟩ must exceed ϱℓ³");
    }
    let p = f * rho * lam * lam / (2.0 * slab.alpha);
    let b2 = beta * beta;
    // (X^p - 1)/ln X, continuous at p = 0
    let lx = x.ln();
    let first = 2.0 * slab.alpha * b2 / (rho * lam * lam) * (p * lx).exp_m1() / lx;
    let second = PI.sqrt() * b2 / (rho * lam.powi(3)) * (0.5 * p * lx).exp();
    Ok(first + second)
}

/// F_μμ/⟨N⟩ of a cigar-shaped trap (ω_x ≪ ω_y, ω_z):
/// (βω_yω_z/ϱ̃ℏ)(e^{ℏβϱ̃/ω_yω_z} - 1) + Li₂(e^{βμ})/(ϱ̃βℏ³).
pub fn cigar_fisher_per_particle(
    omega_y: f64,
    omega_z: f64,
    rho_t: f64,
    beta: f64,
    mu: f64,
    units: UnitSystem,
) -> Result<f64> {
    if !(omega_y > 0.0 && omega_z > 0.0 && rho_t > 0.0 && beta > 0.0) {
        return domain("frequencies, density and beta must be positive");
    }
    if !(mu < 0.0) {
        return domain(format!("need mu < 0, got {mu}"));
    }
    let h = units.hbar();
    let w2 = omega_y * omega_z;
    let first = beta * w2 / (rho_t * h) * (h * beta * rho_t / w2).exp_m1();
    let second = li_exp(2.0, beta * mu)?.value / (rho_t * beta * h.powi(3));
    Ok(first + second)
}
