//! Exact sums over single-particle modes.
//!
//! Spectra, with the zero-point energy of the trap dropped:
//!
//! ```text
//! periodic box   ε = Σ (2πℏ n_i)²/(2m L_i²),  n_i ∈ ℤ
//! Dirichlet box  ε = Σ (πℏ n_i)²/(2m L_i²),   n_i ≥ 1
//! harmonic trap  ε = ℏ Σ ω_i n_i,             n_i ≥ 0
//! ```
//!
//! Sums run over |n_i| ≤ `max_index` on each axis, except isotropic traps,
//! which are summed level by level up to total quantum number `max_index`.
//! The omitted modes are bounded from above by factorizing e^{-βε} over
//! axes, so the reported truncation error is rigorous.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::gas_model::{Confinement, FisherMatrix2, GasSpec, Statistics, ThermoPoint};
use crate::special::zeta_any;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPolicy {
    /// Fail with `CutoffTooSmall` when the tail bound exceeds the tolerance.
    Truncate,
    /// Account for the omitted tail. Lattice constants add the analytic
    /// 1/|n|⁴ tail; thermal sums, whose tail is exponentially small, double
    /// the cutoff until the bound holds.
    ZetaTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeCutoff {
    pub max_index: usize,
    pub tail_policy: TailPolicy,
}

impl ModeCutoff {
    pub fn new(max_index: usize, tail_policy: TailPolicy) -> Result<Self> {
        if max_index < 1 {
            return domain("max_index must be at least 1");
        }
        Ok(ModeCutoff { max_index, tail_policy })
    }

    pub fn truncate(max_index: usize) -> Self {
        ModeCutoff { max_index: max_index.max(1), tail_policy: TailPolicy::Truncate }
    }

    pub fn auto(max_index: usize) -> Self {
        ModeCutoff { max_index: max_index.max(1), tail_policy: TailPolicy::ZetaTail }
    }
}

/// Allowed relative size of the omitted tail.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Largest cutoff `ZetaTail` will grow to before giving up.
const MAX_AUTO_INDEX: usize = 1 << 28;

/// Cap on the number of enumerated modes.
const MAX_MODES: f64 = 2e9;

/// Per-axis energy scale: ε_i(n) = c n² for boxes, c n for traps.
fn axis_scale(spec: &GasSpec, axis: usize) -> f64 {
    let h = spec.hbar();
    let g = spec.geometry[axis];
    match spec.confinement {
        Confinement::PeriodicBox => (2.0 * PI * h).powi(2) / (2.0 * spec.mass * g * g),
        Confinement::DirichletBox => (PI * h).powi(2) / (2.0 * spec.mass * g * g),
        Confinement::HarmonicTrap => h * g,
    }
}

/// Energy of the lowest mode.
pub fn ground_energy(spec: &GasSpec) -> f64 {
    match spec.confinement {
        Confinement::DirichletBox => (0..spec.dim()).map(|i| axis_scale(spec, i)).sum(),
        _ => 0.0,
    }
}

/// Axis levels as (energy, multiplicity) for indices up to `m`.
fn axis_levels(spec: &GasSpec, axis: usize, m: usize) -> Vec<(f64, f64)> {
    let c = axis_scale(spec, axis);
    match spec.confinement {
        Confinement::PeriodicBox => {
            (0..=m).map(|n| (c * (n * n) as f64, if n == 0 { 1.0 } else { 2.0 })).collect()
        }
        Confinement::DirichletBox => (1..=m).map(|n| (c * (n * n) as f64, 1.0)).collect(),
        Confinement::HarmonicTrap => (0..=m).map(|n| (c * n as f64, 1.0)).collect(),
    }
}

/// Upper bounds on Σ_{all n} w e^{-βε_i(n)} and on the part with index > m.
fn axis_theta(spec: &GasSpec, axis: usize, beta: f64, m: usize) -> (f64, f64) {
    let c = beta * axis_scale(spec, axis);
    let mf = m as f64;
    let tail = match spec.confinement {
        Confinement::HarmonicTrap => (-c * (mf + 1.0)).exp() / -(-c).exp_m1(),
        Confinement::PeriodicBox | Confinement::DirichletBox => {
            // consecutive ratios beyond m are at most e^{-c(2m+3)}
            let w = if spec.confinement == Confinement::PeriodicBox { 2.0 } else { 1.0 };
            w * (-c * (mf + 1.0).powi(2)).exp() / -(-c * (2.0 * mf + 3.0)).exp_m1()
        }
    };
    let inside: f64 = match spec.confinement {
        Confinement::HarmonicTrap => -(-c * (mf + 1.0)).exp_m1() / -(-c).exp_m1(),
        _ => {
            let mut s = 0.0;
            for (e, w) in axis_levels(spec, axis, m) {
                let t = w * (-beta * e).exp();
                s += t;
                if t < 1e-300 {
                    break;
                }
            }
            s
        }
    };
    (inside + tail, tail)
}

/// Number of modes in the isotropic level n of a d-dimensional trap.
fn level_degeneracy(d: usize, n: usize) -> f64 {
    match d {
        1 => 1.0,
        2 => (n + 1) as f64,
        _ => ((n + 1) * (n + 2)) as f64 / 2.0,
    }
}

fn level_summed(spec: &GasSpec) -> bool {
    spec.confinement == Confinement::HarmonicTrap && spec.dim() > 1 && spec.is_isotropic()
}

/// Bound on Σ_{omitted} e^{-β(ε-μ)}.
fn omitted_boltzmann(spec: &GasSpec, pt: &ThermoPoint, m: usize) -> f64 {
    let z = pt.fugacity();
    if level_summed(spec) {
        let q = (-pt.beta * axis_scale(spec, 0)).exp();
        let d = spec.dim();
        let n1 = m + 1;
        // term ratio q(n+d)/(n+1) decreases with n
        let ratio = q * (n1 + d) as f64 / (n1 + 1) as f64;
        let first = level_degeneracy(d, n1) * q.powf(n1 as f64);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        return z * first / (1.0 - ratio);
    }
    let thetas: Vec<(f64, f64)> = (0..spec.dim()).map(|i| axis_theta(spec, i, pt.beta, m)).collect();
    let mut total = 0.0;
    for i in 0..thetas.len() {
        let mut term = thetas[i].1;
        for (j, t) in thetas.iter().enumerate() {
            if j != i {
                term *= t.0;
            }
        }
        total += term;
    }
    z * total
}

fn check_below_ground(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    let x0 = pt.beta * (ground_energy(spec) - pt.mu);
    if spec.statistics == Statistics::Bose && !(x0 > 0.0) {
        return Err(Error::Domain(format!(
            "Bose mode sums need mu below the ground energy {:.6e}, got {:.6e}",
            ground_energy(spec),
            pt.mu
        )));
    }
    Ok(x0)
}

/// Sum of `f(ε)·multiplicity` over all enumerated modes.
///
/// The reduction is split by the first axis index and recombined in order,
/// so the result does not depend on the thread count.
fn mode_sum<const K: usize, F>(spec: &GasSpec, m: usize, f: F) -> Result<[f64; K]>
where
    F: Fn(f64) -> [f64; K] + Sync,
{
    let add = |acc: &mut [f64; K], v: [f64; K], w: f64| {
        for k in 0..K {
            acc[k] += w * v[k];
        }
    };
    if level_summed(spec) || spec.dim() == 1 {
        // one index: (energy, multiplicity) computed on the fly
        let c = axis_scale(spec, 0);
        let d = spec.dim();
        let conf = spec.confinement;
        let level = move |n: usize| -> Option<(f64, f64)> {
            let nf = n as f64;
            match conf {
                Confinement::HarmonicTrap => Some((c * nf, level_degeneracy(d, n))),
                Confinement::PeriodicBox => Some((c * nf * nf, if n == 0 { 1.0 } else { 2.0 })),
                Confinement::DirichletBox => (n > 0).then_some((c * nf * nf, 1.0)),
            }
        };
        const CHUNK: usize = 1 << 16;
        let parts: Vec<[f64; K]> = (0..m / CHUNK + 1)
            .into_par_iter()
            .map(|chunk| {
                let mut a = [0.0; K];
                for n in chunk * CHUNK..((chunk + 1) * CHUNK).min(m + 1) {
                    if let Some((e, w)) = level(n) {
                        add(&mut a, f(e), w);
                    }
                }
                a
            })
            .collect();
        return Ok(fold(&parts));
    }
    let axes: Vec<Vec<(f64, f64)>> = (0..spec.dim()).map(|i| axis_levels(spec, i, m)).collect();
    let count: f64 = axes.iter().map(|a| a.len() as f64).product();
    if count > MAX_MODES {
        return domain(format!("{count:.3e} modes exceed the enumeration limit"));
    }
    let parts: Vec<[f64; K]> = axes[0]
        .par_iter()
        .map(|&(e0, w0)| {
            let mut a = [0.0; K];
            match axes.len() {
                2 => {
                    for &(e1, w1) in &axes[1] {
                        add(&mut a, f(e0 + e1), w0 * w1);
                    }
                }
                _ => {
                    for &(e1, w1) in &axes[1] {
                        for &(e2, w2) in &axes[2] {
                            add(&mut a, f(e0 + e1 + e2), w0 * w1 * w2);
                        }
                    }
                }
            }
            a
        })
        .collect();
    Ok(fold(&parts))
}

fn fold<const K: usize>(parts: &[[f64; K]]) -> [f64; K] {
    let mut out = [0.0; K];
    for p in parts {
        for k in 0..K {
            out[k] += p[k];
        }
    }
    out
}

/// Mean occupation and its variance for one mode at x = β(ε - μ).
fn occupation(stat: Statistics, x: f64) -> (f64, f64) {
    match stat {
        Statistics::Bose => {
            let n = 1.0 / x.exp_m1();
            (n, n * (1.0 + n))
        }
        Statistics::Fermi => {
            if x > 0.0 {
                let e = (-x).exp();
                let n = e / (1.0 + e);
                (n, n * (1.0 - n))
            } else {
                let n = 1.0 / (1.0 + x.exp());
                (n, n * (1.0 - n))
            }
        }
    }
}

/// A thermal mode sum together with its truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSum {
    pub value: f64,
    /// Rigorous upper bound on the omitted modes.
    pub tail_bound: f64,
    /// Cutoff actually used.
    pub max_index: usize,
}

/// Sums `summand` over modes; `occ_bound` bounds summand·e^{β(ε-μ)} for ε ≥ ε₀.
fn thermal_sum<F>(spec: &GasSpec, pt: &ThermoPoint, cutoff: ModeCutoff, occ_bound: f64, summand: F) -> Result<ModeSum>
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut m = cutoff.max_index;
    loop {
        let [value] = mode_sum(spec, m, |e| [summand(e)])?;
        let tail = occ_bound * omitted_boltzmann(spec, pt, m);
        let allowed = TAIL_TOLERANCE * value.abs();
        if tail <= allowed {
            return Ok(ModeSum { value, tail_bound: tail, max_index: m });
        }
        match cutoff.tail_policy {
            TailPolicy::Truncate => return Err(Error::CutoffTooSmall { tail, allowed }),
            TailPolicy::ZetaTail if m < MAX_AUTO_INDEX => m *= 2,
            TailPolicy::ZetaTail => return Err(Error::CutoffTooSmall { tail, allowed }),
        }
    }
}

/// ⟨N⟩ = Σ_k 1/(e^{β(ε_k-μ)} ∓ 1), with truncation bookkeeping.
pub fn discrete_sum_n_detailed(spec: &GasSpec, pt: &ThermoPoint, cutoff: ModeCutoff) -> Result<ModeSum> {
    let x0 = check_below_ground(spec, pt)?;
    let bound = match spec.statistics {
        Statistics::Bose => 1.0 / -(-x0).exp_m1(),
        Statistics::Fermi => 1.0,
    };
    let (b, mu, st) = (pt.beta, pt.mu, spec.statistics);
    thermal_sum(spec, pt, cutoff, bound, |e| occupation(st, b * (e - mu)).0)
}

pub fn discrete_sum_n(spec: &GasSpec, pt: &ThermoPoint, cutoff: ModeCutoff) -> Result<f64> {
    Ok(discrete_sum_n_detailed(spec, pt, cutoff)?.value)
}

/// F_μμ = β² Σ_k e^{x_k}/(e^{x_k} ∓ 1)², with truncation bookkeeping.
pub fn discrete_sum_fmm_detailed(spec: &GasSpec, pt: &ThermoPoint, cutoff: ModeCutoff) -> Result<ModeSum> {
    let x0 = check_below_ground(spec, pt)?;
    let b2 = pt.beta * pt.beta;
    let bound = match spec.statistics {
        Statistics::Bose => b2 / (-x0).exp_m1().powi(2),
        Statistics::Fermi => b2,
    };
    let (b, mu, st) = (pt.beta, pt.mu, spec.statistics);
    thermal_sum(spec, pt, cutoff, bound, |e| b2 * occupation(st, b * (e - mu)).1)
}

pub fn discrete_sum_fmm(spec: &GasSpec, pt: &ThermoPoint, cutoff: ModeCutoff) -> Result<f64> {
    Ok(discrete_sum_fmm_detailed(spec, pt, cutoff)?.value)
}

/// The ground-mode contribution to F_μμ.
pub fn ground_mode_fmm(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    check_below_ground(spec, pt)?;
    let x = pt.beta * (ground_energy(spec) - pt.mu);
    Ok(pt.beta * pt.beta * occupation(spec.statistics, x).1)
}

/// Moments of the full mode sum: ⟨N⟩, ⟨H⟩ and the Fisher matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMoments {
    pub mean_n: f64,
    pub mean_h: f64,
    pub var_n: f64,
    pub var_h: f64,
    pub cov_nh: f64,
    pub fisher: FisherMatrix2,
    pub max_index: usize,
}

/// All discrete moments in one pass.
///
/// The cutoff is chosen (or checked) on ⟨N⟩ and F_μμ; the energy-weighted
/// moments share it.
pub fn discrete_moments(spec: &GasSpec, pt: &ThermoPoint, cutoff: ModeCutoff) -> Result<DiscreteMoments> {
    let m = discrete_sum_fmm_detailed(spec, pt, cutoff)?.max_index;
    let m = discrete_sum_n_detailed(spec, pt, ModeCutoff { max_index: m, ..cutoff })?.max_index;
    let (b, mu, st) = (pt.beta, pt.mu, spec.statistics);
    let [n, h, v, vh, vhh] = mode_sum(spec, m, |e| {
        let (occ, var) = occupation(st, b * (e - mu));
        [occ, e * occ, var, e * var, e * e * var]
    })?;
    // F_ββ = Σ(ε-μ)²v, F_βμ = -βΣ(ε-μ)v
    let f = FisherMatrix2::new(vhh - 2.0 * mu * vh + mu * mu * v, -b * (vh - mu * v), b * b * v);
    Ok(DiscreteMoments { mean_n: n, mean_h: h, var_n: v, var_h: vhh, cov_nh: vh, fisher: f, max_index: m })
}

/// Mode energies with multiplicities, for samplers and likelihoods.
pub fn enumerate_modes(spec: &GasSpec, max_index: usize) -> Result<Vec<(f64, f64)>> {
    if level_summed(spec) {
        let c = axis_scale(spec, 0);
        return Ok((0..=max_index).map(|n| (c * n as f64, level_degeneracy(spec.dim(), n))).collect());
    }
    let axes: Vec<Vec<(f64, f64)>> = (0..spec.dim()).map(|i| axis_levels(spec, i, max_index)).collect();
    let count: f64 = axes.iter().map(|a| a.len() as f64).product();
    if count > 1e7 {
        return domain(format!("{count:.3e} modes are too many to enumerate"));
    }
    let mut out = vec![(0.0, 1.0)];
    for axis in &axes {
        out = out.iter().flat_map(|&(e, w)| axis.iter().map(move |&(ea, wa)| (e + ea, w * wa))).collect();
    }
    Ok(out)
}

/// Whether the lattice sum covers all of ℤ^d or only positive indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeConvention {
    /// n ∈ ℤ^d \ {0}.
    Full,
    /// n ∈ ℕ^d with every n_i ≥ 1 (for d = 1, the positive integers).
    OneSided,
}

/// Σ 1/|n|⁴ over the cube |n_i| ≤ cutoff.
pub fn lattice_sum(d: usize, cutoff: usize, convention: LatticeConvention, tail: TailPolicy) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return domain(format!("lattice sums need d in 1..=3, got {d}"));
    }
    if cutoff < 1 {
        return domain("cutoff must be at least 1");
    }
    let m = cutoff as i64;
    let lo = if convention == LatticeConvention::Full { 0 } else { 1 };
    // octant sum with weight 2^{#nonzero} for the full lattice
    let weight = |n: i64| if convention == LatticeConvention::Full && n != 0 { 2.0 } else { 1.0 };
    let parts: Vec<f64> = (lo..=m)
        .into_par_iter()
        .map(|a| {
            let wa = weight(a);
            let a2 = (a * a) as f64;
            match d {
                1 => {
                    if a == 0 {
                        0.0
                    } else {
                        wa / (a2 * a2)
                    }
                }
                2 => {
                    let mut s = 0.0;
                    for b in lo..=m {
                        let r2 = a2 + (b * b) as f64;
                        if r2 > 0.0 {
                            s += wa * weight(b) / (r2 * r2);
                        }
                    }
                    s
                }
                _ => {
                    let mut s = 0.0;
                    for b in lo..=m {
                        let wab = wa * weight(b);
                        let ab2 = a2 + (b * b) as f64;
                        for c in lo..=m {
                            let r2 = ab2 + (c * c) as f64;
                            if r2 > 0.0 {
                                s += wab * weight(c) / (r2 * r2);
                            }
                        }
                    }
                    s
                }
            }
        })
        .collect();
    let mut sum: f64 = parts.iter().sum();
    if tail == TailPolicy::ZetaTail {
        sum += lattice_tail(d, cutoff, convention);
    }
    Ok(sum)
}

/// Analytic estimate of Σ_{n outside the cube} 1/|n|⁴.
fn lattice_tail(d: usize, cutoff: usize, convention: LatticeConvention) -> f64 {
    let m = cutoff as f64;
    if d == 1 {
        // Euler-Maclaurin for Σ_{n>m} n^{-4}
        let one = 1.0 / (3.0 * m.powi(3)) - 1.0 / (2.0 * m.powi(4)) + 1.0 / (3.0 * m.powi(5))
            - 1.0 / (6.0 * m.powi(7));
        return if convention == LatticeConvention::Full { 2.0 * one } else { one };
    }
    // outside the cube of half-width a the sum is close to ∫ d^d r / r⁴
    let a = m + 0.5;
    let full = if d == 2 { (1.0 + PI / 2.0) / (a * a) } else { cube_face_constant() / a };
    match convention {
        LatticeConvention::Full => full,
        // one orthant, minus the coordinate planes, which carry no weight at this order
        LatticeConvention::OneSided => full / (1 << d) as f64,
    }
}

/// 6 ∫∫_{[-1,1]²} dx dy / (1 + x² + y²)², the far-field constant for d = 3.
fn cube_face_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let inner = |x: f64| {
            // ∫_{-1}^{1} dy/(c + y²)² with c = 1 + x²
            let c = 1.0 + x * x;
            let r = c.sqrt();
            2.0 * (1.0 / (2.0 * c * (c + 1.0)) + (1.0 / r).atan() / (2.0 * c * r))
        };
        6.0 * quadrature::double_exponential::integrate(inner, -1.0, 1.0, 1e-14).integral
    })
}

/// Full-lattice constant Σ_{n ∈ ℤ^d \ 0, |n_i| ≤ cutoff} 1/|n|⁴ with the far-field tail added.
pub fn lattice_constant(d: usize, cutoff: usize) -> Result<f64> {
    lattice_sum(d, cutoff, LatticeConvention::Full, TailPolicy::ZetaTail)
}

/// Converged full-lattice constants: 2ζ(4) for d = 1, ≈ 6.03 and ≈ 16.5 for d = 2, 3.
pub fn converged_lattice_constant(d: usize) -> Result<f64> {
    static C: OnceLock<[f64; 2]> = OnceLock::new();
    match d {
        1 => Ok(2.0 * zeta_any(4.0)),
        2 | 3 => {
            let c = C.get_or_init(|| {
                [lattice_constant(2, 512).expect("d = 2"), lattice_constant(3, 256).expect("d = 3")]
            });
            Ok(c[d - 2])
        }
        _ => domain(format!("lattice constants need d in 1..=3, got {d}")),
    }
}

fn require_isotropic_bose(spec: &GasSpec, pt: &ThermoPoint) -> Result<()> {
    if spec.statistics != Statistics::Bose {
        return domain("dominant-contribution formulas apply to bosons only");
    }
    if !spec.is_isotropic() {
        return domain("dominant-contribution formulas need an isotropic gas");
    }
    if !(pt.mu < 0.0) {
        return domain(format!("need mu < 0, got {}", pt.mu));
    }
    Ok(())
}

/// Leading-order F_μμ of a Bose box when μ sits between the two bounds:
/// 1/μ² + C_d β² V^{4/d}/(π²λ_T⁴), excited modes taken at μ = 0.
pub fn box_dominant_fisher_mm(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    require_isotropic_bose(spec, pt)?;
    if spec.confinement != Confinement::PeriodicBox {
        return domain("box dominant formula needs a periodic box");
    }
    let d = spec.dim();
    let lam = spec.thermal_wavelength(pt.beta);
    let v = spec.volume();
    let c = converged_lattice_constant(d)?;
    Ok(1.0 / (pt.mu * pt.mu) + c * pt.beta.powi(2) * v.powf(4.0 / d as f64) / (PI * PI * lam.powi(4)))
}

/// Leading-order ⟨N⟩ of a 1D Bose gas at small -βμ.
///
/// Box: -1/(βμ) + πL²/(3λ_T²). Trap: -1/(βμ) + ln(1/(βℏω))/(βℏω).
pub fn dominant_mean_n_1d(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    require_isotropic_bose(spec, pt)?;
    if spec.dim() != 1 {
        return domain("1D formula needs d = 1");
    }
    let ground = -1.0 / (pt.beta * pt.mu);
    match spec.confinement {
        Confinement::PeriodicBox => {
            let l = spec.geometry[0];
            let lam = spec.thermal_wavelength(pt.beta);
            Ok(ground + PI * l * l / (3.0 * lam * lam))
        }
        Confinement::HarmonicTrap => {
            let a = pt.beta * spec.hbar() * spec.geometry[0];
            Ok(ground + (1.0 / a).ln() / a)
        }
        Confinement::DirichletBox => domain("1D formula needs a periodic box or a trap"),
    }
}

/// Leading-order F_μμ of a 2D isotropic Bose trap between the two bounds:
/// 1/μ² + (⟨N⟩/2ℏ²ϱ̃) ln(⟨N⟩/β²ℏ²ϱ̃) with ϱ̃ = ⟨N⟩Ω².
pub fn harmonic_discrete_fmm_2d(spec: &GasSpec, pt: &ThermoPoint) -> Result<f64> {
    require_isotropic_bose(spec, pt)?;
    if spec.confinement != Confinement::HarmonicTrap || spec.dim() != 2 {
        return domain("needs a 2D harmonic trap");
    }
    let h = spec.hbar();
    let w = spec.mean_frequency();
    let a = pt.beta * h * w;
    if !(-pt.log_fugacity() < a) {
        return domain("mu lies outside the discrete regime (-βμ ≥ βℏΩ)");
    }
    Ok(1.0 / (pt.mu * pt.mu) + (1.0 / (a * a)).ln() / (2.0 * h * h * w * w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas_model::{fisher_continuum, mean_particle_number};
    use crate::units::UnitSystem;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn one_dimensional_constant_is_zeta4() {
        let z4 = PI.powi(4) / 90.0;
        let s = lattice_sum(1, 256, LatticeConvention::OneSided, TailPolicy::ZetaTail).unwrap();
        assert!(rel(s, z4) < 1e-12);
        assert!(rel(lattice_constant(1, 256).unwrap(), 2.0 * z4) < 1e-12);
    }

    #[test]
    fn two_dimensional_constant() {
        let c = lattice_constant(2, 256).unwrap();
        assert!((c - 6.0268).abs() < 1e-3, "{c}");
        let raw = lattice_sum(2, 256, LatticeConvention::Full, TailPolicy::Truncate).unwrap();
        assert!(raw < c);
    }

    #[test]
    fn face_constant() {
        let c3 = cube_face_constant();
        assert!(c3 > 10.0 && c3 < 12.0, "{c3}");
    }

    #[test]
    fn harmonic_axis_theta_exact() {
        let spec = GasSpec::isotropic_trap(Statistics::Bose, 1, 1.0, 1.0, UnitSystem::Reduced).unwrap();
        let (full, tail) = axis_theta(&spec, 0, 0.5, 10);
        let q: f64 = (-0.5f64).exp();
        assert!(rel(full, 1.0 / (1.0 - q)) < 1e-14);
        assert!(rel(tail, q.powi(11) / (1.0 - q)) < 1e-14);
    }

    #[test]
    fn bose_needs_mu_below_ground() {
        let spec = GasSpec::new(Statistics::Bose, Confinement::DirichletBox, &[1.0], 1.0, UnitSystem::Reduced).unwrap();
        let e0 = ground_energy(&spec);
        let pt = ThermoPoint::new(1.0, 0.5 * e0).unwrap();
        assert!(discrete_sum_n(&spec, &pt, ModeCutoff::auto(16)).is_ok());
        let pt = ThermoPoint::new(1.0, e0).unwrap();
        assert!(discrete_sum_n(&spec, &pt, ModeCutoff::auto(16)).is_err());
    }

    #[test]
    fn truncate_reports_small_cutoff() {
        let spec = GasSpec::isotropic_box(Statistics::Fermi, 1, 50.0, 1.0, UnitSystem::Reduced).unwrap();
        let pt = ThermoPoint::new(1.0, 0.5).unwrap();
        assert!(matches!(discrete_sum_n(&spec, &pt, ModeCutoff::truncate(2)), Err(Error::CutoffTooSmall { .. })));
        let s = discrete_sum_n_detailed(&spec, &pt, ModeCutoff::auto(2)).unwrap();
        assert!(s.max_index > 2 && s.tail_bound <= TAIL_TOLERANCE * s.value);
    }

    #[test]
    fn dilute_limit_matches_continuum() {
        let spec = GasSpec::isotropic_box(Statistics::Bose, 3, 30.0, 1.0, UnitSystem::Reduced).unwrap();
        let pt = ThermoPoint::from_log_fugacity(1.0, -8.0).unwrap();
        let n = discrete_sum_n(&spec, &pt, ModeCutoff::auto(8)).unwrap();
        let c = mean_particle_number(&spec, &pt).unwrap();
        assert!(rel(n, c) < 1e-3, "{n} {c}");
    }

    #[test]
    fn level_sum_matches_product_sum() {
        let iso = GasSpec::isotropic_trap(Statistics::Bose, 2, 1.0, 1.0, UnitSystem::Reduced).unwrap();
        let aniso = GasSpec::new(
            Statistics::Bose,
            Confinement::HarmonicTrap,
            &[1.0, 1.0 + 1e-9],
            1.0,
            UnitSystem::Reduced,
        )
        .unwrap();
        let pt = ThermoPoint::new(0.3, -0.1).unwrap();
        let a = discrete_sum_fmm(&iso, &pt, ModeCutoff::auto(16)).unwrap();
        let b = discrete_sum_fmm(&aniso, &pt, ModeCutoff::auto(16)).unwrap();
        assert!(rel(a, b) < 1e-7, "{a} {b}");
    }

    #[test]
    fn moments_agree_with_continuum_fisher() {
        let spec = GasSpec::isotropic_trap(Statistics::Fermi, 3, 1.0, 1.0, UnitSystem::Reduced).unwrap();
        let pt = ThermoPoint::new(0.005, 10.0).unwrap();
        let m = discrete_moments(&spec, &pt, ModeCutoff::auto(64)).unwrap();
        let f = fisher_continuum(&spec, &pt).unwrap();
        assert!(rel(m.fisher.f_mm, f.f_mm) < 0.02, "{} {}", m.fisher.f_mm, f.f_mm);
        assert!(rel(m.fisher.f_bm, f.f_bm) < 0.02, "{} {}", m.fisher.f_bm, f.f_bm);
        assert!(rel(m.fisher.f_bb, f.f_bb) < 0.02, "{} {}", m.fisher.f_bb, f.f_bb);
        assert!(m.fisher.is_psd());
    }

    #[test]
    fn harmonic_2d_log_vanishes() {
        let spec = GasSpec::isotropic_trap(Statistics::Bose, 2, 1.0, 1.0, UnitSystem::Reduced).unwrap();
        let pt = ThermoPoint::new(1.0, -0.5).unwrap();
        // βℏΩ = 1 makes the logarithm zero
        assert!(rel(harmonic_discrete_fmm_2d(&spec, &pt).unwrap(), 4.0) < 1e-15);
    }
}
