//! Zero-temperature fermions: the finite-difference (HCKR) bound on μ.
//!
//! At T = 0 the state jumps when μ crosses a level, so the Fisher
//! information is replaced by J = g/δ², with δ the level spacing at the
//! Fermi energy and g its degeneracy.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::gas_model::{Confinement, GasSpec, Statistics};
use crate::units::UnitSystem;

/// Largest number of modes enumerated when counting the Fermi-level degeneracy.
const MAX_ENUMERATED: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HckrQuery {
    pub g: u64,
    pub delta: f64,
}

impl HckrQuery {
    pub fn new(g: u64, delta: f64) -> Result<Self> {
        if g < 1 {
            return domain("degeneracy must be at least 1");
        }
        if !(delta.is_finite() && delta > 0.0) {
            return domain(format!("level spacing must be positive, got {delta}"));
        }
        Ok(HckrQuery { g, delta })
    }
}

/// J = g/δ².
pub fn hckr_bound(q: &HckrQuery) -> f64 {
    q.g as f64 / (q.delta * q.delta)
}

/// Which level-spacing estimate to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelScenario {
    /// Box, Fermi momentum close to an axis: δ ~ ℏ²/(mV^{2/d}).
    EdgeAxisBox,
    /// Box, all wave numbers ~ ηL: δ ~ ℏ²η/(mV^{1/d}).
    BulkBox { eta: f64 },
    /// Spherical box: δ ~ ℏk_F/(mV^{1/d}).
    SphericalBox,
    /// δ = ℏΩ.
    IsotropicTrap,
    /// Trap with α_x = α_y^n = α_z^n: δ = ℏω_x, the softest axis.
    AnisotropicTrap(u32),
}

impl LevelScenario {
    pub fn bulk_box() -> Self {
        LevelScenario::BulkBox { eta: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSpacing {
    pub delta: f64,
    pub g: u64,
    pub j: f64,
    /// True when g is an asymptotic guess rather than an exact count.
    pub g_estimated: bool,
}

/// Level spacing, Fermi-level degeneracy and J for `mean_n` fermions.
///
/// g is the multiplicity of the single-particle eigenvalue holding the
/// N-th particle. It is counted exactly for traps with equal frequencies
/// and by enumeration elsewhere while that stays small; beyond that a
/// generic lattice-point multiplicity (2^d for boxes, 1 for traps) is
/// returned and flagged.
pub fn fermi_level_spacing(spec: &GasSpec, mean_n: f64, scenario: LevelScenario) -> Result<LevelSpacing> {
    if spec.statistics != Statistics::Fermi {
        return Err(Error::UnsupportedScenario("level spacing applies to fermions only".into()));
    }
    if !(mean_n.is_finite() && mean_n >= 1.0) {
        return domain(format!("need at least one particle, got {mean_n}"));
    }
    let n = mean_n.round() as u64;
    let d = spec.dim();
    let h = spec.hbar();
    let is_box = spec.confinement.is_box();
    let want_box = matches!(
        scenario,
        LevelScenario::EdgeAxisBox | LevelScenario::BulkBox { .. } | LevelScenario::SphericalBox
    );
    if want_box != is_box {
        return Err(Error::UnsupportedScenario(format!("{scenario:?} does not match {:?}", spec.confinement)));
    }
    // in one dimension the square and spherical boxes coincide
    let scenario = if is_box && d == 1 { LevelScenario::SphericalBox } else { scenario };
    let delta = match scenario {
        LevelScenario::EdgeAxisBox => h * h / (spec.mass * spec.volume().powf(2.0 / d as f64)),
        LevelScenario::BulkBox { eta } => {
            if !(eta.is_finite() && eta > 0.0) {
                return domain("η must be positive");
            }
            h * h * eta / (spec.mass * spec.volume().powf(1.0 / d as f64))
        }
        LevelScenario::SphericalBox => {
            let rho = mean_n / spec.volume();
            let kf = match d {
                1 => PI * rho,
                2 => (4.0 * PI * rho).sqrt(),
                _ => (6.0 * PI * PI * rho).cbrt(),
            };
            h * kf / (spec.mass * spec.volume().powf(1.0 / d as f64))
        }
        LevelScenario::IsotropicTrap => h * spec.mean_frequency(),
        LevelScenario::AnisotropicTrap(k) => {
            if k < 1 || d != 3 {
                return Err(Error::UnsupportedScenario("anisotropic trap needs d = 3 and n ≥ 1".into()));
            }
            h * spec.geometry.iter().cloned().fold(f64::INFINITY, f64::min)
        }
    };
    let (g, g_estimated) = if !is_box && spec.is_isotropic() {
        (isotropic_trap_degeneracy(d, n), false)
    } else {
        match enumerated_degeneracy(spec, n) {
            Some(g) => (g, false),
            None if is_box => (1 << d, true),
            None => (1, true),
        }
    };
    let j = hckr_bound(&HckrQuery::new(g, delta)?);
    Ok(LevelSpacing { delta, g, j, g_estimated })
}

/// Degeneracy (n+d−1 choose d−1) of the level holding the N-th fermion.
fn isotropic_trap_degeneracy(d: usize, n: u64) -> u64 {
    let deg = |l: u64| match d {
        1 => 1,
        2 => l + 1,
        _ => (l + 1) * (l + 2) / 2,
    };
    let (mut filled, mut level) = (0u64, 0u64);
    loop {
        filled += deg(level);
        if filled >= n {
            return deg(level);
        }
        level += 1;
    }
}

/// Per-axis energies in units where the first axis has scale 1.
fn axis_energy(spec: &GasSpec, axis: usize, k: i64) -> f64 {
    let g = spec.geometry[axis];
    let g0 = spec.geometry[0];
    match spec.confinement {
        Confinement::HarmonicTrap => k as f64 * g / g0,
        _ => (k * k) as f64 * (g0 / g).powi(2),
    }
}

fn axis_range(c: Confinement) -> (i64, i64) {
    match c {
        Confinement::PeriodicBox => (i64::MIN, i64::MAX),
        Confinement::DirichletBox => (1, i64::MAX),
        Confinement::HarmonicTrap => (0, i64::MAX),
    }
}

/// All mode energies ≤ `cap`, or None once more than `limit` are found.
fn modes_below(spec: &GasSpec, cap: f64, limit: usize) -> Option<Vec<f64>> {
    let (lo, _) = axis_range(spec.confinement);
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0.0f64)];
    while let Some((axis, e)) = stack.pop() {
        if axis == spec.dim() {
            out.push(e);
            if out.len() > limit {
                return None;
            }
            continue;
        }
        let mut k = if lo == i64::MIN { 0 } else { lo };
        loop {
            let ek = axis_energy(spec, axis, k);
            if e + ek > cap * (1.0 + 1e-12) {
                break;
            }
            stack.push((axis + 1, e + ek));
            if lo == i64::MIN && k > 0 {
                stack.push((axis + 1, e + ek));
            }
            k += 1;
        }
    }
    Some(out)
}

/// Multiplicity of the N-th lowest mode energy, if enumeration stays small.
fn enumerated_degeneracy(spec: &GasSpec, n: u64) -> Option<u64> {
    if n as usize > MAX_ENUMERATED / 4 {
        return None;
    }
    let mut cap = (0..spec.dim()).map(|a| axis_energy(spec, a, 1)).fold(0.0, f64::max);
    loop {
        let mut es = modes_below(spec, cap, MAX_ENUMERATED)?;
        if es.len() as u64 >= n {
            es.sort_by(f64::total_cmp);
            let ef = es[n as usize - 1];
            let tol = 1e-12 * ef.abs().max(1.0);
            return Some(es.iter().filter(|e| (*e - ef).abs() <= tol).count() as u64);
        }
        cap *= 1.5;
    }
}

/// Trap with α_x = α_y^n = α_z^n at fixed ϱ̃ = ⟨N⟩ω_xω_yω_z.
///
/// α_x = (⟨N⟩ω³/ϱ̃)^{n/(n+2)}, ω_x = ω/α_x and ω_y = ω_z = ω/α_x^{1/n}.
pub fn anisotropic_trap_spec(
    omega: f64,
    rho_tilde: f64,
    n: u32,
    mean_n: f64,
    mass: f64,
    units: UnitSystem,
) -> Result<GasSpec> {
    if n < 1 {
        return domain("anisotropy exponent must be at least 1");
    }
    if !(omega > 0.0 && rho_tilde > 0.0 && mean_n > 0.0) {
        return domain("ω, ϱ̃ and ⟨N⟩ must be positive");
    }
    let nf = n as f64;
    let ax = (mean_n * omega.powi(3) / rho_tilde).powf(nf / (nf + 2.0));
    let ay = ax.powf(1.0 / nf);
    GasSpec::new(
        Statistics::Fermi,
        Confinement::HarmonicTrap,
        &[omega / ax, omega / ay, omega / ay],
        mass,
        units,
    )
}
