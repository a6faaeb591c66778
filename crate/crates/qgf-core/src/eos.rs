//! Equation-of-state inversion and regime classification.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::gas_model::{bose_saturation_number, number_and_slope, GasSpec, Statistics, ThermoPoint};
use crate::roots::{solve_increasing, SolveTrace};
use crate::special::zeta_any;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Classical,
    QuantumContinuum,
    DiscreteRequired,
    Condensed,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Classical => "classical",
            Regime::QuantumContinuum => "quantum_continuum",
            Regime::DiscreteRequired => "discrete_required",
            Regime::Condensed => "condensed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    /// -βμ threshold set by the level spacing.
    pub continuum_bound: f64,
    /// -βμ threshold set by ground-state occupation, ln(1 + 1/⟨N⟩).
    pub ground_bound: f64,
    pub fugacity: f64,
}

/// Fugacity at or below which a gas counts as classical.
pub const CLASSICAL_FUGACITY: f64 = 0.01;

/// Residual tolerance of [`solve_mu`], relative to the target.
const SOLVE_TOL: f64 = 1e-13;

/// Chemical potential giving ⟨N⟩ = `target_n` at inverse temperature `beta`.
pub fn solve_mu(spec: &GasSpec, beta: f64, target_n: f64) -> Result<ThermoPoint> {
    solve_mu_traced(spec, beta, target_n).map(|(pt, _)| pt)
}

/// As [`solve_mu`], also returning the bracket history.
pub fn solve_mu_traced(spec: &GasSpec, beta: f64, target_n: f64) -> Result<(ThermoPoint, SolveTrace)> {
    if !(target_n > 0.0 && target_n.is_finite()) {
        return domain(format!("target particle number must be positive, got {target_n}"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    let bose = spec.statistics == Statistics::Bose;
    if bose {
        if let Some(nmax) = bose_saturation_number(spec, beta) {
            if target_n >= nmax {
                return Err(Error::NoSolution(format!(
                    "target {target_n} exceeds the Bose continuum maximum {nmax:.6e}; the gas condenses"
                )));
            }
        }
    }
    // classical inversion: ⟨N⟩ ≈ A e^{βμ}
    let x0 = (target_n / spec.prefactor(beta)).ln();
    let mut trace = SolveTrace::default();
    let x = solve_increasing(
        |x| number_and_slope(spec, beta, x),
        target_n,
        x0,
        if bose { Some(0.0) } else { None },
        SOLVE_TOL,
        &mut trace,
    )?;
    Ok((ThermoPoint::from_log_fugacity(beta, x)?, trace))
}

/// -βμ above which the continuum approximation holds.
pub fn continuum_bound(spec: &GasSpec, beta: f64) -> f64 {
    let h = spec.hbar();
    if spec.confinement.is_box() {
        let d = spec.dim() as f64;
        beta * (2.0 * PI * h).powi(2) / (2.0 * spec.mass * spec.volume().powf(2.0 / d))
    } else {
        beta * h * spec.mean_frequency()
    }
}

/// -βμ below which the ground state is macroscopically occupied.
pub fn ground_bound(mean_n: f64) -> f64 {
    (1.0 / mean_n).ln_1p()
}

/// Classification by the two chemical-potential bounds.
///
/// Bosons are checked against the bounds before the fugacity threshold, so
/// `DiscreteRequired` holds exactly when ground ≤ -βμ < continuum.
pub fn classify_regime(spec: &GasSpec, pt: &ThermoPoint, mean_n: f64) -> Result<RegimeReport> {
    if !(mean_n > 0.0) {
        return domain(format!("mean particle number must be positive, got {mean_n}"));
    }
    let cb = continuum_bound(spec, pt.beta);
    let gb = ground_bound(mean_n);
    let fugacity = pt.fugacity();
    let neg_x = -pt.log_fugacity();
    let classical = fugacity <= CLASSICAL_FUGACITY;
    let regime = match spec.statistics {
        Statistics::Fermi => {
            if classical {
                Regime::Classical
            } else {
                Regime::QuantumContinuum
            }
        }
        Statistics::Bose => {
            if neg_x < gb {
                Regime::Condensed
            } else if neg_x < cb {
                Regime::DiscreteRequired
            } else if classical {
                Regime::Classical
            } else {
                Regime::QuantumContinuum
            }
        }
    };
    Ok(RegimeReport { regime, continuum_bound: cb, ground_bound: gb, fugacity })
}

/// Upper bound on the Bose F_μμ when μ sits at the edge of the continuum regime.
///
/// | confinement | d | bound                      |
/// |-------------|---|----------------------------|
/// | box         | 3 | β²N^{4/3}/ζ(3/2)^{4/3}     |
/// | box         | 2 | β²N²/ln N                  |
/// | box         | 1 | β²N²/(2π)                  |
/// | trap        | 3 | π²β²N/(6ζ(3))              |
/// | trap        | 2 | 3β²N ln N/π²               |
/// | trap        | 1 | β²N²/ln N                  |
pub fn continuum_fisher_bound_mm(spec: &GasSpec, pt: &ThermoPoint, mean_n: f64) -> Result<f64> {
    if spec.statistics != Statistics::Bose {
        return domain("continuum Fisher bound applies to bosons only");
    }
    if !(mean_n > 1.0) {
        return domain(format!("bound needs mean_n > 1, got {mean_n}"));
    }
    let b2 = pt.beta * pt.beta;
    let n = mean_n;
    let v = match (spec.confinement.is_box(), spec.dim()) {
        (true, 3) => b2 * n.powf(4.0 / 3.0) / zeta_any(1.5).powf(4.0 / 3.0),
        (true, 2) => b2 * n * n / n.ln(),
        (true, _) => b2 * n * n / (2.0 * PI),
        (false, 3) => PI * PI * b2 * n / (6.0 * zeta_any(3.0)),
        (false, 2) => 3.0 * b2 * n * n.ln() / (PI * PI),
        (false, _) => b2 * n * n / n.ln(),
    };
    Ok(v)
}

/// Ground-state envelope β²(N + N²), the T = 0 ceiling.
pub fn ground_state_fisher_mm(beta: f64, mean_n: f64) -> f64 {
    beta * beta * (mean_n + mean_n * mean_n)
}
