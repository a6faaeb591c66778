//! Maximum-likelihood estimation from (N, E) samples.
//!
//! For the grand-canonical state the average log-likelihood is
//! ℓ(β, μ) = −β(Ē − μN̄) − ln Z(β, μ). Its stationary point matches the
//! sample means of N and E with the model means, and its Hessian there is −F.

use crate::error::{Error, Result};
use crate::gas_model::{FisherMatrix2, GasSpec, Statistics, ThermoPoint};
use crate::lattice_sums::enumerate_modes;
use crate::roots::{solve_increasing, SolveTrace};

use super::SampleBatch;

const MAX_NEWTON: usize = 100;

/// The discrete spectrum a batch was drawn from.
#[derive(Debug, Clone)]
pub struct ModeModel {
    modes: Vec<(f64, f64)>,
    statistics: Statistics,
    e0: f64,
}

/// Model moments at one (β, μ).
#[derive(Debug, Clone, Copy)]
pub struct ModelMoments {
    pub mean_n: f64,
    pub mean_h: f64,
    pub fisher: FisherMatrix2,
    pub log_z: f64,
}

impl ModeModel {
    pub fn new(spec: &GasSpec, max_index: usize) -> Result<Self> {
        let modes = enumerate_modes(spec, max_index)?;
        let e0 = modes.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
        Ok(ModeModel { modes, statistics: spec.statistics, e0 })
    }

    pub fn ground_energy(&self) -> f64 {
        self.e0
    }

    fn in_domain(&self, beta: f64, mu: f64) -> bool {
        beta > 0.0 && beta.is_finite() && mu.is_finite() && (self.statistics == Statistics::Fermi || mu < self.e0)
    }

    pub fn moments(&self, beta: f64, mu: f64) -> ModelMoments {
        let (mut n, mut h, mut v, mut ve, mut vee, mut lz) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for &(e, w) in &self.modes {
            let x = beta * (e - mu);
            let (occ, var, lzk) = match self.statistics {
                Statistics::Bose => {
                    let o = 1.0 / x.exp_m1();
                    (o, o * (1.0 + o), -(-(-x).exp_m1()).ln())
                }
                Statistics::Fermi => {
                    let o = 1.0 / (x.exp() + 1.0);
                    let l = if x > 0.0 { (-x).exp().ln_1p() } else { -x + x.exp().ln_1p() };
                    (o, o * (1.0 - o), l)
                }
            };
            let de = e - mu;
            n += w * occ;
            h += w * e * occ;
            v += w * var;
            ve += w * de * var;
            vee += w * de * de * var;
            lz += w * lzk;
        }
        let fisher = FisherMatrix2::new(vee, -beta * ve, beta * beta * v);
        ModelMoments { mean_n: n, mean_h: h, fisher, log_z: lz }
    }

    fn check_targets(&self, mean_n: f64, mean_e: f64) -> Result<()> {
        if !(mean_n > 0.0) {
            return Err(Error::OutOfModelRange(format!("sample mean N = {mean_n} must be positive")));
        }
        if self.statistics == Statistics::Fermi {
            let cap: f64 = self.modes.iter().map(|m| m.1).sum();
            if mean_n >= cap {
                return Err(Error::OutOfModelRange(format!("sample mean N = {mean_n} fills all {cap} modes")));
            }
        }
        if !(mean_e > self.e0 * mean_n) {
            return Err(Error::OutOfModelRange(format!(
                "sample mean E = {mean_e:e} is not above the ground energy times N̄"
            )));
        }
        Ok(())
    }

    /// Solves ⟨N⟩(β, μ) = N̄ for μ at fixed β.
    pub fn mu_for_number(&self, mean_n: f64, beta: f64) -> Result<f64> {
        // solve in x = βμ so bracketing steps are dimensionless
        let upper = match self.statistics {
            Statistics::Bose => Some(beta * self.e0),
            Statistics::Fermi => None,
        };
        if self.statistics == Statistics::Fermi {
            let cap: f64 = self.modes.iter().map(|m| m.1).sum();
            if mean_n >= cap {
                return Err(Error::OutOfModelRange(format!("mean N = {mean_n} fills all {cap} modes")));
            }
        }
        if !(mean_n > 0.0) {
            return Err(Error::OutOfModelRange(format!("mean N = {mean_n} must be positive")));
        }
        let x0 = beta * self.e0 - 1.0;
        let eval = |x: f64| {
            let mm = self.moments(beta, x / beta);
            Ok((mm.mean_n, mm.fisher.f_mm / (beta * beta)))
        };
        let x = solve_increasing(eval, mean_n, x0, upper, 1e-14, &mut SolveTrace::default())?;
        Ok(x / beta)
    }

    /// Joint ML by damped Fisher scoring, with a nested bisection fallback.
    pub fn max_likelihood(&self, mean_n: f64, mean_e: f64, init: &ThermoPoint) -> Result<(ThermoPoint, MlReport)> {
        self.check_targets(mean_n, mean_e)?;
        let (beta, mu, iterations, fallback) = match self.fisher_scoring(mean_n, mean_e, init) {
            Ok((b, m, it)) => (b, m, it, false),
            Err(Error::Convergence(_)) => {
                let (b, m) = self.nested(mean_n, mean_e, init.beta)?;
                (b, m, 0, true)
            }
            Err(e) => return Err(e),
        };
        let mm = self.moments(beta, mu);
        let f = mm.fisher;
        let off = mean_n - mm.mean_n - f.f_bm;
        let hessian = [[-f.f_bb, off], [off, -f.f_mm]];
        let negative_definite = f.f_bb > 0.0 && f.f_bb * f.f_mm - off * off > 0.0;
        let pt = ThermoPoint::new(beta, mu)?;
        Ok((pt, MlReport { hessian, negative_definite, fisher: f, iterations, fallback }))
    }

    fn log_likelihood(&self, mean_n: f64, mean_e: f64, beta: f64, mu: f64) -> f64 {
        -beta * (mean_e - mu * mean_n) - self.moments(beta, mu).log_z
    }

    fn fisher_scoring(&self, mean_n: f64, mean_e: f64, init: &ThermoPoint) -> Result<(f64, f64, usize)> {
        let (mut beta, mut mu) = (init.beta, init.mu);
        if !self.in_domain(beta, mu) {
            mu = self.e0 - 1.0 / beta;
        }
        for it in 1..=MAX_NEWTON {
            let mm = self.moments(beta, mu);
            let f = mm.fisher;
            let g_b = mu * mean_n - mean_e - (mu * mm.mean_n - mm.mean_h);
            let g_m = beta * (mean_n - mm.mean_n);
            let det = f.det();
            if !(det > 0.0) {
                return Err(Error::Convergence("Fisher matrix lost rank during scoring".into()));
            }
            let d_b = (f.f_mm * g_b - f.f_bm * g_m) / det;
            let d_m = (f.f_bb * g_m - f.f_bm * g_b) / det;
            let decrement = g_b * d_b + g_m * d_m;
            if decrement < 1e-24 {
                return Ok((beta, mu, it));
            }
            let l0 = mean_n * beta * mu - beta * mean_e - mm.log_z;
            let mut t = 1.0;
            loop {
                let (b1, m1) = (beta + t * d_b, mu + t * d_m);
                if self.in_domain(b1, m1) {
                    let l1 = self.log_likelihood(mean_n, mean_e, b1, m1);
                    if l1 >= l0 - 1e-13 * l0.abs().max(1.0) {
                        beta = b1;
                        mu = m1;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-12 {
                    return Err(Error::Convergence("line search stalled".into()));
                }
            }
            if (t * d_b).abs() <= 1e-15 * beta && (t * d_m).abs() <= 1e-15 * (mu.abs() + 1.0 / beta) {
                return Ok((beta, mu, it));
            }
        }
        Err(Error::Convergence(format!("no convergence in {MAX_NEWTON} scoring steps")))
    }

    /// Outer bisection in ln β on ⟨H⟩ at fixed ⟨N⟩ = N̄, which decreases with β.
    fn nested(&self, mean_n: f64, mean_e: f64, beta_init: f64) -> Result<(f64, f64)> {
        let resid = |t: f64| -> Result<(f64, f64)> {
            let beta = t.exp();
            let mu = self.mu_for_number(mean_n, beta)?;
            Ok((self.moments(beta, mu).mean_h - mean_e, mu))
        };
        let t0 = beta_init.ln();
        let (mut lo, mut hi) = (t0, t0);
        let (mut r_lo, _) = resid(lo)?;
        let mut r_hi = r_lo;
        let mut k = 0;
        while r_lo < 0.0 {
            lo -= 1.0;
            r_lo = resid(lo)?.0;
            k += 1;
            if k > 200 {
                return Err(Error::OutOfModelRange(format!("mean E = {mean_e:e} above the high-temperature limit")));
            }
        }
        k = 0;
        while r_hi > 0.0 {
            hi += 1.0;
            r_hi = resid(hi)?.0;
            k += 1;
            if k > 200 {
                return Err(Error::OutOfModelRange(format!("mean E = {mean_e:e} below the zero-temperature limit")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if resid(mid)?.0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        let t = 0.5 * (lo + hi);
        let (_, mu) = resid(t)?;
        Ok((t.exp(), mu))
    }
}

/// Outcome details of a joint ML fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlReport {
    /// Hessian of the average log-likelihood at the estimate, (β, μ) order.
    pub hessian: [[f64; 2]; 2],
    pub negative_definite: bool,
    /// Model Fisher matrix at the estimate.
    pub fisher: FisherMatrix2,
    pub iterations: usize,
    /// Whether the nested bisection replaced Fisher scoring.
    pub fallback: bool,
}

/// Joint ML estimate of (β, μ) from a batch.
pub fn max_likelihood_estimate(batch: &SampleBatch, spec: &GasSpec, init: &ThermoPoint) -> Result<(ThermoPoint, MlReport)> {
    let model = ModeModel::new(spec, batch.max_index)?;
    model.max_likelihood(batch.mean_n(), batch.mean_e(), init)
}

/// Single-parameter ML estimate of μ when β is known: inverts ⟨N⟩ = N̄.
pub fn estimate_mu_known_beta(batch: &SampleBatch, spec: &GasSpec, beta: f64) -> Result<f64> {
    let model = ModeModel::new(spec, batch.max_index)?;
    model.mu_for_number(batch.mean_n(), beta)
}

/// Single-parameter ML estimate of β when μ is known: inverts
/// ⟨μN − H⟩ = (1/M)Σ(μN⁽ⁱ⁾ − E⁽ⁱ⁾), which increases with β.
pub fn estimate_beta_known_mu(batch: &SampleBatch, spec: &GasSpec, mu: f64) -> Result<f64> {
    let model = ModeModel::new(spec, batch.max_index)?;
    let target = mu * batch.mean_n() - batch.mean_e();
    if model.statistics == Statistics::Bose && mu >= model.e0 {
        return Err(Error::Domain(format!("Bose μ = {mu} must lie below the ground energy")));
    }
    if !(target < 0.0) {
        return Err(Error::OutOfModelRange(format!("sample ⟨μN − E⟩ = {target:e} must be negative")));
    }
    let eval = |t: f64| {
        let beta = t.exp();
        let mm = model.moments(beta, mu);
        Ok((mu * mm.mean_n - mm.mean_h, beta * mm.fisher.f_bb))
    };
    let t0 = -(batch.mean_n() / -target).ln();
    let t = solve_increasing(eval, target, t0, None, 1e-14, &mut SolveTrace::default())?;
    Ok(t.exp())
}
