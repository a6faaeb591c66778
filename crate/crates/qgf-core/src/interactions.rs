//! Interacting gases: harmonic two-body forces, the mean-field (imperfect)
//! Bose gas, and weak contact interactions in 1D.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::gas_model::{bose_saturation_number, number_and_slope, Confinement, GasSpec, Statistics, ThermoPoint};
use crate::roots::{solve_increasing, SolveTrace};
use crate::units::UnitSystem;

/// Trap with frequencies shifted by a pairwise quadratic coupling.
///
/// The coupling Σ_{j,l} γ(r_j - r_l)² runs over ordered pairs, so the
/// relative normal modes oscillate at ω̃² = ω² + 4γN/m. The center-of-mass
/// mode keeps ω; with N ≫ 1 every mode is given ω̃.
pub fn harmonic_remap(spec: &GasSpec, coupling: f64, n_particles: f64) -> Result<GasSpec> {
    if spec.confinement != Confinement::HarmonicTrap {
        return domain("harmonic interactions need a trapped gas");
    }
    if !(n_particles >= 0.0) {
        return domain("particle number must be non-negative");
    }
    let shift = 4.0 * coupling * n_particles / spec.mass;
    let mut out = spec.clone();
    for w in &mut out.geometry {
        let w2 = *w * *w + shift;
        if !(w2 > 0.0) {
            return domain("coupling makes the trap unstable (ω̃² ≤ 0)");
        }
        *w = w2.sqrt();
    }
    Ok(out)
}

/// Imperfect Bose gas H₀ + λN²/(2V).
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldSpec {
    pub lambda: f64,
    pub base: GasSpec,
}

impl MeanFieldSpec {
    pub fn new(lambda: f64, base: GasSpec) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return domain(format!("coupling must be non-negative, got {lambda}"));
        }
        if base.statistics != Statistics::Bose || !base.confinement.is_box() {
            return domain("mean-field model needs a Bose gas in a box");
        }
        Ok(MeanFieldSpec { lambda, base })
    }

    /// Ideal critical density, infinite when the ideal gas never saturates.
    pub fn critical_density(&self, beta: f64) -> f64 {
        bose_saturation_number(&self.base, beta).map_or(f64::INFINITY, |n| n / self.base.volume())
    }
}

/// α(μ): 0 when μ ≥ λϱ_c, otherwise the root of α + λϱ₀(α) = μ.
pub fn meanfield_alpha(mf: &MeanFieldSpec, pt: &ThermoPoint) -> Result<f64> {
    let lam = mf.lambda;
    let rho_c = mf.critical_density(pt.beta);
    if lam * rho_c <= pt.mu {
        return Ok(0.0);
    }
    if lam == 0.0 {
        return Ok(pt.mu);
    }
    let v = mf.base.volume();
    let b = pt.beta;
    // h(α) = α + λϱ₀(α), increasing on α < 0; solve in α directly
    let eval = |alpha: f64| -> Result<(f64, f64)> {
        let (n, slope) = number_and_slope(&mf.base, b, b * alpha)?;
        Ok((alpha + lam * n / v, 1.0 + lam * b * slope / v))
    };
    let scale = 1.0 / b;
    let x0 = pt.mu.min(-scale);
    let mut trace = SolveTrace::default();
    // the target may be negative; shift so the solver sees a positive one
    let shift = pt.mu.abs() + scale;
    let alpha = solve_increasing(
        |a| eval(a).map(|(h, d)| (h + shift, d)),
        pt.mu + shift,
        x0,
        Some(0.0),
        1e-14,
        &mut trace,
    )
    .map_err(|e| match e {
        Error::NoSolution(m) => Error::Convergence(m),
        other => other,
    })?;
    Ok(alpha)
}

/// F_μμ^{(λ)} = Vβ F⁽⁰⁾/(Vβ + λF⁽⁰⁾). Infinite F⁽⁰⁾ gives the ceiling Vβ/λ.
pub fn meanfield_fisher_mm(f0_mm: f64, lambda: f64, v_d: f64, beta: f64) -> Result<f64> {
    if !(f0_mm >= 0.0) || !(lambda >= 0.0) || !(v_d > 0.0 && beta > 0.0) {
        return domain("meanfield_fisher_mm needs f0 ≥ 0, λ ≥ 0, V > 0, β > 0");
    }
    let vb = v_d * beta;
    if f0_mm.is_infinite() {
        return Ok(if lambda > 0.0 { vb / lambda } else { f64::INFINITY });
    }
    Ok(vb * f0_mm / (vb + lambda * f0_mm))
}

/// Mean particle number of the imperfect gas, V(μ - α)/λ.
pub fn meanfield_mean_n(mf: &MeanFieldSpec, pt: &ThermoPoint) -> Result<f64> {
    let alpha = meanfield_alpha(mf, pt)?;
    if mf.lambda == 0.0 {
        let (n, _) = number_and_slope(&mf.base, pt.beta, pt.beta * alpha)?;
        return Ok(n);
    }
    Ok(mf.base.volume() * (pt.mu - alpha) / mf.lambda)
}

/// Parameters of a weakly interacting 1D Bose gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSpec {
    /// Coupling, energy × length.
    pub c: f64,
    /// Linear density ⟨N⟩/L_x.
    pub rho: f64,
    pub beta: f64,
    pub l_x: f64,
    pub mass: f64,
    pub units: UnitSystem,
}

impl ContactSpec {
    pub fn new(c: f64, rho: f64, beta: f64, l_x: f64, mass: f64, units: UnitSystem) -> Result<Self> {
        if !(c >= 0.0) {
            return domain("contact coupling must be non-negative");
        }
        if !(rho > 0.0 && beta > 0.0 && l_x > 0.0 && mass > 0.0) {
            return domain("density, beta, length and mass must be positive");
        }
        Ok(ContactSpec { c, rho, beta, l_x, mass, units })
    }

    /// Spec at fixed length with ϱ = ⟨N⟩/L_x.
    pub fn at_fixed_length(c: f64, mean_n: f64, beta: f64, l_x: f64, mass: f64, units: UnitSystem) -> Result<Self> {
        ContactSpec::new(c, mean_n / l_x, beta, l_x, mass, units)
    }

    pub fn thermal_wavelength(&self) -> f64 {
        let h = self.units.hbar();
        (2.0 * PI * h * h * self.beta / self.mass).sqrt()
    }

    /// γ = 2πβc/(λ_T²ϱ).
    pub fn gamma(&self) -> f64 {
        2.0 * PI * self.beta * self.c / (self.thermal_wavelength().powi(2) * self.rho)
    }

    /// τ = 4π/(λ_T²ϱ²).
    pub fn tau(&self) -> f64 {
        4.0 * PI / (self.thermal_wavelength() * self.rho).powi(2)
    }

    /// Coupling scale 8π/(βλ_T²ϱ³) at which √γ = τ.
    pub fn coupling_scale(&self) -> f64 {
        8.0 * PI / (self.beta * self.thermal_wavelength().powi(2) * self.rho.powi(3))
    }
}

/// Weak-coupling g²(r) = 1 + (1 - (4γ/τ²)(1 + ϱτr)) e^{-ϱτr}.
pub fn contact_g2(r: f64, cs: &ContactSpec) -> f64 {
    let (g, t) = (cs.gamma(), cs.tau());
    let k = cs.rho * t * r;
    1.0 + (1.0 - 4.0 * g / (t * t) * (1.0 + k)) * (-k).exp()
}

/// Perturbative validity and breakdown flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactFlags {
    /// √γ ≪ τ, taken as c ≤ 0.1·8π/(βλ_T²ϱ³).
    pub weak_coupling: bool,
    /// τ ≪ 1, taken as τ ≤ 0.1.
    pub degenerate: bool,
    /// The c-correction exceeds half the ideal value.
    pub breakdown: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactFisher {
    pub value: f64,
    pub ideal: f64,
    pub correction: f64,
    pub flags: ContactFlags,
}

/// Ratio of the breakdown threshold to the ideal value.
pub const BREAKDOWN_RATIO: f64 = 0.5;

/// F_μμ of the weakly interacting 1D gas to first order in c.
///
/// With y = 4π⟨N⟩/(λ_T²ϱ²):
///
/// ```text
/// ideal      β²⟨N⟩ + β²λ²ϱ²⟨N⟩/2π - β²λ⁴ϱ⁴(1 - e^{-y})/8π²
/// correction c[3β³λ⁶ϱ⁷(1 - e^{-y})/16π³ - β³λ⁴ϱ⁵⟨N⟩(2 + e^{-y})/4π²]
/// ```
pub fn contact_fisher_mm(cs: &ContactSpec, mean_n: f64) -> Result<ContactFisher> {
    if !(mean_n > 0.0) {
        return domain("mean particle number must be positive");
    }
    let b = cs.beta;
    let lam = cs.thermal_wavelength();
    let rho = cs.rho;
    let l2r2 = (lam * rho).powi(2);
    let y = 4.0 * PI * mean_n / l2r2;
    let one_minus = -(-y).exp_m1();
    let ideal = b * b * mean_n + b * b * l2r2 * mean_n / (2.0 * PI) - b * b * l2r2 * l2r2 * one_minus / (8.0 * PI * PI);
    let b3 = b.powi(3);
    let correction = cs.c
        * (3.0 * b3 * lam.powi(6) * rho.powi(7) * one_minus / (16.0 * PI.powi(3))
            - b3 * lam.powi(4) * rho.powi(5) * mean_n * (2.0 + (-y).exp()) / (4.0 * PI * PI));
    let flags = ContactFlags {
        weak_coupling: cs.c <= 0.1 * cs.coupling_scale(),
        degenerate: cs.tau() <= 0.1,
        breakdown: correction.abs() > BREAKDOWN_RATIO * ideal,
    };
    Ok(ContactFisher { value: ideal + correction, ideal, correction, flags })
}

/// Δ²N = ⟨N⟩ + 2ϱ²∫₀^L (L - r)(g²(r) - 1) dr.
pub fn variance_from_g2<G>(g2: G, rho: f64, l: f64, mean_n: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !(rho > 0.0 && l > 0.0 && mean_n >= 0.0) {
        return domain("variance_from_g2 needs ϱ > 0, L > 0, ⟨N⟩ ≥ 0");
    }
    let f = |r: f64| (l - r) * (g2(r) - 1.0);
    // dyadic pieces towards r = 0, where correlations decay
    let mut integral = 0.0;
    let mut hi = l;
    for _ in 0..40 {
        let lo = hi / 2.0;
        integral += quadrature::double_exponential::integrate(f, lo, hi, 1e-14 * l * l).integral;
        hi = lo;
    }
    integral += quadrature::double_exponential::integrate(f, 0.0, hi, 1e-14 * l * l).integral;
    let var = mean_n + 2.0 * rho * rho * integral;
    if var < -1e-9 * mean_n.max(1.0) {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn remap_identity_and_box_error() {
        let spec = GasSpec::isotropic_trap(Statistics::Bose, 3, 2.0, 1.0, UnitSystem::Reduced).unwrap();
        assert_eq!(harmonic_remap(&spec, 0.0, 100.0).unwrap(), spec);
        let r = harmonic_remap(&spec, 0.25, 3.0).unwrap();
        assert!(rel(r.geometry[0], (4.0f64 + 3.0).sqrt()) < 1e-15);
        let bx = GasSpec::isotropic_box(Statistics::Bose, 3, 2.0, 1.0, UnitSystem::Reduced).unwrap();
        assert!(harmonic_remap(&bx, 0.1, 10.0).is_err());
    }

    #[test]
    fn meanfield_limits() {
        assert_eq!(meanfield_fisher_mm(7.0, 0.0, 2.0, 3.0).unwrap(), 7.0);
        assert!(rel(meanfield_fisher_mm(7.0, 6.0 / 7.0, 2.0, 3.0).unwrap(), 3.5) < 1e-15);
        assert!(rel(meanfield_fisher_mm(f64::INFINITY, 2.0, 2.0, 3.0).unwrap(), 3.0) < 1e-15);
    }

    #[test]
    fn alpha_root_and_threshold() {
        let base = GasSpec::isotropic_box(Statistics::Bose, 3, 4.0, 1.0, UnitSystem::Reduced).unwrap();
        let mf = MeanFieldSpec::new(0.7, base.clone()).unwrap();
        let pt = ThermoPoint::new(1.0, -0.3).unwrap();
        let a = meanfield_alpha(&mf, &pt).unwrap();
        let (n, _) = number_and_slope(&base, 1.0, a).unwrap();
        assert!((a + 0.7 * n / base.volume() - pt.mu).abs() < 1e-10);
        let rc = mf.critical_density(1.0);
        let at = ThermoPoint::new(1.0, 0.7 * rc).unwrap();
        assert_eq!(meanfield_alpha(&mf, &at).unwrap(), 0.0);
        let free = MeanFieldSpec::new(0.0, base).unwrap();
        assert_eq!(meanfield_alpha(&free, &pt).unwrap(), -0.3);
    }

    #[test]
    fn g2_limits() {
        let cs = ContactSpec::new(0.0, 10.0, 1.0, 5.0, 1.0, UnitSystem::Reduced).unwrap();
        assert_eq!(contact_g2(0.0, &cs), 2.0);
        assert!((contact_g2(1e3, &cs) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_variance() {
        assert!(rel(variance_from_g2(|_| 1.0, 3.0, 2.0, 6.0).unwrap(), 6.0) < 1e-15);
    }

    #[test]
    fn antibunching_reduces_variance() {
        let v = variance_from_g2(|r| 1.0 - (-30.0 * r).exp(), 3.0, 2.0, 6.0).unwrap();
        assert!(v > 0.0);
        assert!(v < 6.0);
        assert!(matches!(variance_from_g2(|_| 0.0, 3.0, 2.0, 6.0), Err(Error::NegativeVariance(_))));
    }
}
