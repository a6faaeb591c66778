//! Gamma and zeta functions backing the polylogarithm.
//!
//! The Gamma function comes from `libm`. Riemann and Hurwitz zeta use
//! Euler-Maclaurin summation with a fixed Bernoulli table.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// B_{2j} for j = 1..=15.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// B_{2j}/(2j)! for j = 1..=15.
fn bernoulli_over_factorial() -> [f64; 15] {
    let mut out = [0.0; 15];
    let mut fact = 1.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = 2 * (j + 1);
        fact *= ((k - 1) * k) as f64;
        out[j] = b / fact;
    }
    out
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    let g = libm::tgamma(x);
    if g.is_infinite() {
        0.0
    } else {
        1.0 / g
    }
}

/// Riemann zeta for s > 1.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return domain(format!("zeta requires finite s > 1, got {s}"));
    }
    Ok(zeta_any(s))
}

/// Riemann zeta for any real s != 1 (analytic continuation).
pub(crate) fn zeta_any(s: f64) -> f64 {
    if s >= 40.0 {
        // 6^-40 is below one ulp of 1
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s) + 4f64.powf(-s) + 5f64.powf(-s);
    }
    if s < 0.0 {
        if s == s.floor() && (s as i64) % 2 == 0 {
            return 0.0;
        }
        let one_minus = 1.0 - s;
        return 2f64.powf(s)
            * PI.powf(s - 1.0)
            * (PI * s / 2.0).sin()
            * gamma(one_minus)
            * zeta_any(one_minus);
    }
    if s == 0.0 {
        return -0.5;
    }
    zeta_euler_maclaurin(s)
}

fn zeta_euler_maclaurin(s: f64) -> f64 {
    const N: usize = 10;
    let coef = bernoulli_over_factorial();
    let mut head = 0.0;
    for n in (1..N).rev() {
        head += (n as f64).powf(-s);
    }
    let n = N as f64;
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut poch = s;
    let mut pow = n.powf(-s - 1.0);
    for (j, c) in coef.iter().enumerate() {
        tail += c * poch * pow;
        let k = 2.0 * (j as f64 + 1.0);
        poch *= (s + k - 1.0) * (s + k);
        pow /= n * n;
    }
    head + tail
}

/// ζ(s - k)/k! for integer k ≥ 0 and s - k < 0, via the reflection formula.
///
/// Written to avoid forming Γ(k + 1 - s) and k! separately.
pub(crate) fn zeta_shift_over_factorial(s: f64, k: u32) -> f64 {
    let arg = s - k as f64;
    debug_assert!(arg < 0.0);
    if arg == arg.floor() && (arg as i64) % 2 == 0 {
        return 0.0;
    }
    let w = 1.0 - arg;
    let log_ratio = ln_gamma(w) - ln_gamma(k as f64 + 1.0);
    2.0 * (2.0 * PI).powf(arg - 1.0) * (PI * arg / 2.0).sin() * log_ratio.exp() * zeta_any(w)
}

/// Returns ζ(1 - s, a)/Γ(s) for real s and complex a with Re a > 0.
///
/// Euler-Maclaurin after shifting a by enough integers that |a + N| ≥ 15.
/// The pole of ζ at 1 - s = 1 is cancelled analytically by 1/Γ(s).
pub(crate) fn hurwitz_over_gamma(s: f64, a: Complex64) -> Complex64 {
    let sigma = 1.0 - s;
    let rg = rgamma(s);
    let shift = (15.0 - a.norm()).max(0.0).ceil() as usize;
    let mut head = Complex64::new(0.0, 0.0);
    if rg != 0.0 {
        for n in 0..shift {
            head += (a + n as f64).powf(-sigma);
        }
    }
    let b = a + shift as f64;
    let lb = b.ln();
    // (b^{1-σ}/(σ-1))/Γ(s) = -b^s/Γ(s+1)
    let mut total = -(lb * s).exp() * rgamma(s + 1.0);
    if rg != 0.0 {
        let coef = bernoulli_over_factorial();
        let mut tail = 0.5 * (-sigma * lb).exp();
        let mut poch = sigma;
        let mut pow = (-(sigma + 1.0) * lb).exp();
        let inv_b2 = (b * b).inv();
        for (j, c) in coef.iter().enumerate() {
            tail += pow * (c * poch);
            let k = 2.0 * (j as f64 + 1.0);
            poch *= (sigma + k - 1.0) * (sigma + k);
            pow *= inv_b2;
        }
        total += (head + tail) * rg;
    }
    total
}

/// Harmonic number H_n.
pub(crate) fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zeta_exact_values() {
        assert!(rel(zeta(2.0).unwrap(), PI * PI / 6.0) < 1e-14);
        assert!(rel(zeta(4.0).unwrap(), PI.powi(4) / 90.0) < 1e-14);
        assert!(rel(zeta_any(0.5), -1.4603545088095868) < 1e-13);
        assert!(rel(zeta_any(-1.0), -1.0 / 12.0) < 1e-13);
        assert_eq!(zeta_any(-2.0), 0.0);
        assert!(zeta(1.0).is_err());
    }

    #[test]
    fn reflected_zeta_matches_direct() {
        for &s in &[0.5, 1.5, 2.3, -0.5] {
            for k in 1..6u32 {
                if s - (k as f64) >= 0.0 {
                    continue;
                }
                let direct = zeta_any(s - k as f64) / gamma(k as f64 + 1.0);
                let via = zeta_shift_over_factorial(s, k);
                assert!((direct - via).abs() <= 1e-13 * direct.abs().max(1e-300), "{s} {k}");
            }
        }
    }

    #[test]
    fn hurwitz_at_half_reduces_to_riemann() {
        // ζ(σ, 1/2) = (2^σ - 1) ζ(σ)
        let s = -1.5;
        let v = hurwitz_over_gamma(s, Complex64::new(0.5, 0.0));
        let sigma: f64 = 1.0 - s;
        let want = (2f64.powf(sigma) - 1.0) * zeta_any(sigma) * rgamma(s);
        assert!((v.re - want).abs() < 1e-13 * want.abs());
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn rgamma_poles() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!(rel(rgamma(0.5), 1.0 / PI.sqrt()) < 1e-14);
    }
}
