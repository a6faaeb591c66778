//! Polylogarithm Li_s(z) for real order and real argument z ≤ 1.
//!
//! | region                        | method                                      |
//! |-------------------------------|---------------------------------------------|
//! | \|z\| ≤ 0.5                   | direct power series                         |
//! | 0.5 < z < 1                   | expansion in μ = ln z around z = 1          |
//! | -e^2 ≤ z < -0.5               | same expansion at complex μ = ln(-z) + iπ   |
//! | z < -e^2                      | inversion formula through Hurwitz zeta      |
//!
//! The fermionic argument z = -e^x overflows for large x, so the
//! log-argument entry points [`li_neg_exp`] and [`li_exp`] are what the
//! thermodynamics code calls.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::special::{gamma, harmonic, hurwitz_over_gamma, rgamma, zeta_any, zeta_shift_over_factorial};

pub use crate::special::zeta;

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    ClosedForm,
    DirectSeries,
    LogSeries,
    BoseSingular,
    FermiInversion,
    FermiAsymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylogResult {
    pub value: f64,
    pub branch: Branch,
    pub abs_error: f64,
    /// Order outside [-1/2, 4]: evaluated, but without accuracy guarantees.
    pub out_of_range: bool,
}

/// Branch thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylogConfig {
    /// Direct series is used for |z| up to this radius.
    pub direct_radius: f64,
    /// Below this gap 1 - z (and s < 1) results are labeled BoseSingular.
    pub bose_singular_gap: f64,
    /// Fermionic log-arguments up to this use the complex μ-expansion.
    pub fermi_series_max_x: f64,
    /// Lower domain edge for `polylog_fermi_large`.
    pub fermi_crossover_x: f64,
    /// Width of the window for `polylog_bose_singular`.
    pub bose_x_small: f64,
    /// Default number of terms for the two truncated expansions.
    pub default_terms: usize,
}

pub const CONFIG: PolylogConfig = PolylogConfig {
    direct_radius: 0.5,
    bose_singular_gap: 1e-3,
    fermi_series_max_x: 2.0,
    fermi_crossover_x: 10.0,
    bose_x_small: 0.05,
    default_terms: 2,
};

const ORDER_MIN: f64 = -0.5;
const ORDER_MAX: f64 = 4.0;
const EPS: f64 = f64::EPSILON;
/// Orders closer than this to a positive integer are interpolated.
const NEAR_INTEGER: f64 = 1e-4;
const INTERP_STEP: f64 = 1e-3;

fn out_of_range(s: f64) -> bool {
    !(ORDER_MIN..=ORDER_MAX).contains(&s)
}

/// Li_s(z) for real z ≤ 1 (z < 1 when s ≤ 1).
pub fn polylog(s: f64, z: f64) -> Result<PolylogResult> {
    if !s.is_finite() || !z.is_finite() {
        return domain(format!("polylog needs finite arguments, got s={s}, z={z}"));
    }
    if z > 1.0 {
        return domain(format!("polylog argument z={z} > 1"));
    }
    let oor = out_of_range(s);
    if z == 1.0 {
        if s <= 1.0 {
            return domain(format!("Li_{s}(1) diverges"));
        }
        let v = zeta_any(s);
        return Ok(PolylogResult { value: v, branch: Branch::ClosedForm, abs_error: 4.0 * EPS * v, out_of_range: oor });
    }
    if z == 0.0 {
        return Ok(PolylogResult { value: 0.0, branch: Branch::ClosedForm, abs_error: 0.0, out_of_range: oor });
    }
    if let Some(r) = closed_form(s, z) {
        return Ok(r);
    }
    let mut r = if z.abs() <= CONFIG.direct_radius {
        direct_series(s, z)
    } else if z > 0.0 {
        bose_log_series(s, z.ln(), 1.0 - z)
    } else {
        fermi_by_log(s, (-z).ln())
    };
    r.out_of_range = oor;
    Ok(r)
}

/// Li_s(-e^x) for any real x. Never overflows.
pub fn li_neg_exp(s: f64, x: f64) -> Result<PolylogResult> {
    if !s.is_finite() || !x.is_finite() {
        return domain(format!("li_neg_exp needs finite arguments, got s={s}, x={x}"));
    }
    if x <= CONFIG.direct_radius.ln() {
        return polylog(s, -x.exp());
    }
    let mut r = if s == 0.0 {
        // -e^x/(1+e^x)
        PolylogResult { value: -1.0 / (1.0 + (-x).exp()), branch: Branch::ClosedForm, abs_error: EPS, out_of_range: false }
    } else if s == 1.0 {
        // -ln(1 + e^x)
        let v = -(x + (-x).exp().ln_1p());
        PolylogResult { value: v, branch: Branch::ClosedForm, abs_error: 2.0 * EPS * v.abs(), out_of_range: false }
    } else {
        fermi_by_log(s, x)
    };
    r.out_of_range = out_of_range(s);
    Ok(r)
}

/// Li_s(e^x) for x ≤ 0 (x < 0 when s ≤ 1).
pub fn li_exp(s: f64, x: f64) -> Result<PolylogResult> {
    if x > 0.0 {
        return domain(format!("li_exp needs x ≤ 0, got {x}"));
    }
    if x == 0.0 || x <= CONFIG.direct_radius.ln() {
        return polylog(s, x.exp());
    }
    if s == 0.0 || s == 1.0 {
        // -expm1 keeps 1 - e^x accurate for tiny |x|
        let gap = -x.exp_m1();
        let z = x.exp();
        let v = if s == 0.0 { z / gap } else { -gap.ln() };
        return Ok(PolylogResult { value: v, branch: Branch::ClosedForm, abs_error: 4.0 * EPS * v.abs(), out_of_range: false });
    }
    let mut r = bose_log_series(s, x, -x.exp_m1());
    r.out_of_range = out_of_range(s);
    Ok(r)
}

fn closed_form(s: f64, z: f64) -> Option<PolylogResult> {
    let v = if s == 0.0 {
        z / (1.0 - z)
    } else if s == 1.0 {
        -(-z).ln_1p()
    } else if s == -1.0 {
        z / ((1.0 - z) * (1.0 - z))
    } else {
        return None;
    };
    Some(PolylogResult { value: v, branch: Branch::ClosedForm, abs_error: 4.0 * EPS * v.abs(), out_of_range: out_of_range(s) })
}

fn direct_series(s: f64, z: f64) -> PolylogResult {
    let mut sum = 0.0;
    let mut zk = 1.0;
    let mut last = 0.0;
    for k in 1..=2000u32 {
        zk *= z;
        let term = zk * (k as f64).powf(-s);
        sum += term;
        last = term.abs();
        if last <= 0.25 * EPS * sum.abs() {
            break;
        }
    }
    let abs_error = last / (1.0 - z.abs()) + 4.0 * EPS * sum.abs();
    PolylogResult { value: sum, branch: Branch::DirectSeries, abs_error, out_of_range: false }
}

fn bose_log_series(s: f64, mu: f64, gap: f64) -> PolylogResult {
    let (v, err) = log_series_interp(s, Complex64::new(mu, 0.0));
    let branch = if gap < CONFIG.bose_singular_gap && s < 1.0 { Branch::BoseSingular } else { Branch::LogSeries };
    PolylogResult { value: v.re, branch, abs_error: err, out_of_range: false }
}

fn fermi_by_log(s: f64, x: f64) -> PolylogResult {
    if x <= CONFIG.fermi_series_max_x {
        let (v, err) = log_series_interp(s, Complex64::new(x, PI));
        PolylogResult { value: v.re, branch: Branch::LogSeries, abs_error: err, out_of_range: false }
    } else {
        let (v, err) = fermi_inversion(s, x);
        PolylogResult { value: v, branch: Branch::FermiInversion, abs_error: err, out_of_range: false }
    }
}

/// Log-series with quadratic interpolation in s near positive integers,
/// where Γ(1-s) and ζ(s-k) cancel catastrophically.
fn log_series_interp(s: f64, mu: Complex64) -> (Complex64, f64) {
    let n = s.round();
    let t = s - n;
    if n >= 1.0 && t != 0.0 && t.abs() < NEAR_INTEGER {
        let h = INTERP_STEP;
        let (f0, e0) = log_series(n, mu);
        let (fp, ep) = log_series(n + h, mu);
        let (fm, em) = log_series(n - h, mu);
        let d1 = (fp - fm) / (2.0 * h);
        let d2 = (fp - f0 * 2.0 + fm) / (h * h);
        let v = f0 + d1 * t + d2 * (t * t / 2.0);
        // truncation of the quadratic model plus propagated branch errors
        let third = (d2.norm() / h) * t.abs().powi(3);
        let err = e0 + (ep + em) * (t.abs() / h) + third + 8.0 * EPS * v.norm();
        return (v, err);
    }
    log_series(s, mu)
}

/// Li_s(e^μ) = Γ(1-s)(-μ)^{s-1} + Σ_k ζ(s-k) μ^k/k!, valid for |μ| < 2π.
///
/// Positive integer s uses the limiting form with H_{s-1} - ln(-μ).
fn log_series(s: f64, mu: Complex64) -> (Complex64, f64) {
    let is_int = s >= 1.0 && s == s.floor();
    let neg_mu = -mu;
    let mut total;
    let mut magnitude;
    let skip = if is_int { s as u32 - 1 } else { u32::MAX };
    if is_int {
        let m = skip;
        let lead = mu.powu(m) * rgamma(m as f64 + 1.0) * (Complex64::new(harmonic(m), 0.0) - neg_mu.ln());
        total = lead;
        magnitude = lead.norm();
    } else {
        let lead = (neg_mu.ln() * (s - 1.0)).exp() * gamma(1.0 - s);
        total = lead;
        magnitude = lead.norm();
    }
    let mut mu_pow = Complex64::new(1.0, 0.0);
    let mut small_run = 0;
    let mut last = 0.0;
    for k in 0..400u32 {
        if k > 0 {
            mu_pow *= mu;
        }
        if k == skip {
            continue;
        }
        let arg = s - k as f64;
        let coef = if arg < 0.0 {
            zeta_shift_over_factorial(s, k)
        } else {
            zeta_any(arg) * rgamma(k as f64 + 1.0)
        };
        let term = mu_pow * coef;
        total += term;
        let tn = term.norm();
        magnitude += tn;
        last = tn;
        // terms vanish at even negative zeta arguments, so demand a run
        if tn <= 0.25 * EPS * total.norm() {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let err = 4.0 * last + 16.0 * EPS * magnitude;
    (total, err)
}

/// Li_s(-e^x) = Re[(2π)^s e^{iπs/2} ζ(1-s, 1/2 - ix/2π)/Γ(s)] - cos(πs) Li_s(-e^{-x}).
fn fermi_inversion(s: f64, x: f64) -> (f64, f64) {
    let a = Complex64::new(0.5, -x / (2.0 * PI));
    let h = hurwitz_over_gamma(s, a);
    let phase = Complex64::from_polar((2.0 * PI).powf(s), PI * s / 2.0);
    let main = (phase * h).re;
    let reflected = if x > 745.0 { 0.0 } else { direct_series(s, -(-x).exp()).value };
    let c = (PI * s).cos();
    let v = main - c * reflected;
    let err = 16.0 * EPS * ((phase * h).norm() + reflected.abs());
    (v, err)
}

/// Truncated Sommerfeld expansion of Li_s(-e^x) with the default two terms.
pub fn polylog_fermi_large(s: f64, x: f64) -> Result<PolylogResult> {
    polylog_fermi_large_terms(s, x, CONFIG.default_terms)
}

/// Li_s(-e^x) ≈ -Σ_{j<terms} c_j x^{s-2j}/Γ(s+1-2j), c_j = 2(1-2^{1-2j})ζ(2j).
///
/// The error estimate is twice the magnitude of the first dropped term (the
/// series is asymptotic and the next terms share its sign) plus e^{-x}, which
/// bounds the reflected part the expansion never sees. For integer s the
/// series terminates and only that second part remains.
pub fn polylog_fermi_large_terms(s: f64, x: f64, terms: usize) -> Result<PolylogResult> {
    if !(x >= CONFIG.fermi_crossover_x) {
        return domain(format!("Sommerfeld expansion needs x ≥ {}, got {x}", CONFIG.fermi_crossover_x));
    }
    if terms == 0 {
        return domain("at least one Sommerfeld term is required");
    }
    let term = |j: usize| -> f64 {
        let c = if j == 0 {
            1.0
        } else {
            let k = 2.0 * j as f64;
            2.0 * (1.0 - 2f64.powf(1.0 - k)) * zeta_any(k)
        };
        -c * x.powf(s - 2.0 * j as f64) * rgamma(s + 1.0 - 2.0 * j as f64)
    };
    let value: f64 = (0..terms).map(term).sum();
    let dropped = 2.0 * term(terms).abs() + (-x).exp();
    Ok(PolylogResult { value, branch: Branch::FermiAsymptotic, abs_error: dropped, out_of_range: out_of_range(s) })
}

/// Γ(1-s)(-x)^{s-1} plus the default two regular terms.
pub fn polylog_bose_singular(s: f64, x: f64) -> Result<PolylogResult> {
    polylog_bose_singular_terms(s, x, CONFIG.default_terms)
}

/// Singular expansion of Li_s(e^x) for s < 1 and x ∈ (-x_small, 0),
/// keeping `terms` regular corrections ζ(s-k)x^k/k!.
pub fn polylog_bose_singular_terms(s: f64, x: f64, terms: usize) -> Result<PolylogResult> {
    if !(s < 1.0) {
        return domain(format!("singular expansion needs s < 1, got {s}"));
    }
    if !(x < 0.0 && x > -CONFIG.bose_x_small) {
        return domain(format!("singular expansion needs x in (-{}, 0), got {x}", CONFIG.bose_x_small));
    }
    let coef = |k: u32| -> f64 {
        if s - (k as f64) < 0.0 {
            zeta_shift_over_factorial(s, k)
        } else {
            zeta_any(s - k as f64) * rgamma(k as f64 + 1.0)
        }
    };
    let mut value = gamma(1.0 - s) * (-x).powf(s - 1.0);
    for k in 0..terms as u32 {
        value += coef(k) * x.powi(k as i32);
    }
    // ζ vanishes at negative even integers, so one dropped term can be tiny
    // near integer s; the next two together bound the remainder for |x| < 0.05
    let k0 = terms as u32;
    let dropped = 2.0 * ((coef(k0) * x.powi(k0 as i32)).abs() + (coef(k0 + 1) * x.powi(k0 as i32 + 1)).abs());
    Ok(PolylogResult {
        value,
        branch: Branch::BoseSingular,
        abs_error: dropped + 8.0 * EPS * value.abs(),
        out_of_range: out_of_range(s),
    })
}

/// Li_s(z), value only.
pub fn li(s: f64, z: f64) -> Result<f64> {
    polylog(s, z).map(|r| r.value)
}
