//! Cramér-Rao machinery for joint estimation of β and μ.
//!
//! The Fisher matrix of the grand-canonical state is indexed as
//! (β, μ). Inverting it gives the covariance lower bound; rotating the
//! rescaled matrix gives two uncorrelated parameter combinations, each with
//! an optimal observable that is affine in N and H.

mod hckr;
mod ml;
mod sampler;

use std::f64::consts::PI;

pub use hckr::{
    anisotropic_trap_spec, fermi_level_spacing, hckr_bound, HckrQuery, LevelScenario, LevelSpacing,
};
pub use ml::{
    estimate_beta_known_mu, estimate_mu_known_beta, max_likelihood_estimate, MlReport, ModeModel, ModelMoments,
};
pub use sampler::{read_binary, read_csv, sample_grand_canonical, Draw, SampleBatch, BATCH_MAGIC, BATCH_VERSION};

use crate::error::{domain, Error, Result};
use crate::gas_model::{FisherMatrix2, GasSpec, ThermoPoint};

/// Largest accepted condition number of the correlation-normalized Fisher matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Reference scales making β and μ dimensionless: β̄ = β/β₀, μ̄ = μ/μ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleConstants {
    pub beta0: f64,
    pub mu0: f64,
}

impl ScaleConstants {
    pub fn new(beta0: f64, mu0: f64) -> Result<Self> {
        if !(beta0.is_finite() && beta0 > 0.0 && mu0.is_finite() && mu0 > 0.0) {
            return domain(format!("scale constants must be positive, got β₀={beta0}, μ₀={mu0}"));
        }
        Ok(ScaleConstants { beta0, mu0 })
    }

    /// Fixed-volume choice μ₀ = 1/β₀: 2π²ℏ²/(mV^{2/d}) for boxes, ℏΩ for traps.
    pub fn for_spec(spec: &GasSpec) -> Self {
        let h = spec.hbar();
        let e = if spec.confinement.is_box() {
            let d = spec.dim() as f64;
            2.0 * PI * PI * h * h / (spec.mass * spec.volume().powf(2.0 / d))
        } else {
            h * spec.mean_frequency()
        };
        ScaleConstants { beta0: 1.0 / e, mu0: e }
    }

    /// Fixed-density choice: 2π²ℏ²ρ^{2/d}/m for boxes, ℏϱ̃^{1/d} for traps.
    pub fn for_density(spec: &GasSpec, density: f64) -> Result<Self> {
        if !(density.is_finite() && density > 0.0) {
            return domain("density must be positive");
        }
        let h = spec.hbar();
        let d = spec.dim() as f64;
        let e = if spec.confinement.is_box() {
            2.0 * PI * PI * h * h * density.powf(2.0 / d) / spec.mass
        } else {
            h * density.powf(1.0 / d)
        };
        Ok(ScaleConstants { beta0: 1.0 / e, mu0: e })
    }

    /// F̄: the Fisher matrix in the dimensionless parameters.
    pub fn rescale(&self, f: &FisherMatrix2) -> FisherMatrix2 {
        FisherMatrix2::new(
            self.beta0 * self.beta0 * f.f_bb,
            self.beta0 * self.mu0 * f.f_bm,
            self.mu0 * self.mu0 * f.f_mm,
        )
    }
}

/// Symmetric 2×2 covariance of (β, μ) estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance2 {
    pub var_beta: f64,
    pub cov: f64,
    pub var_mu: f64,
}

impl Covariance2 {
    pub fn scale(&self, k: f64) -> Self {
        Covariance2 { var_beta: k * self.var_beta, cov: k * self.cov, var_mu: k * self.var_mu }
    }

    pub fn as_array(&self) -> [[f64; 2]; 2] {
        [[self.var_beta, self.cov], [self.cov, self.var_mu]]
    }

    /// Smallest eigenvalue and its unit eigenvector.
    pub fn min_eigen(&self) -> (f64, [f64; 2]) {
        let (a, b, c) = (self.var_beta, self.cov, self.var_mu);
        let s = ((a - c).powi(2) + 4.0 * b * b).sqrt();
        let lam = 0.5 * (a + c - s);
        let v = if b == 0.0 {
            if a <= c {
                [1.0, 0.0]
            } else {
                [0.0, 1.0]
            }
        } else {
            let v = [b, lam - a];
            let n = v[0].hypot(v[1]);
            [v[0] / n, v[1] / n]
        };
        (lam, v)
    }

    /// vᵀ C v.
    pub fn quad(&self, v: [f64; 2]) -> f64 {
        self.var_beta * v[0] * v[0] + 2.0 * self.cov * v[0] * v[1] + self.var_mu * v[1] * v[1]
    }
}

/// Condition number of F after normalizing its diagonal to 1.
///
/// The raw entries carry different units, so the plain condition number
/// would depend on the unit system.
pub fn normalized_condition(f: &FisherMatrix2) -> f64 {
    if !(f.f_bb > 0.0 && f.f_mm > 0.0) {
        return f64::INFINITY;
    }
    let r = (f.f_bm / (f.f_bb.sqrt() * f.f_mm.sqrt())).abs();
    if r >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 + r) / (1.0 - r)
    }
}

/// F⁻¹, the covariance lower bound for a single measurement.
pub fn cramer_rao_inverse(f: &FisherMatrix2) -> Result<Covariance2> {
    let det = f.det();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::SingularFisher(format!("det F = {det:.6e}")));
    }
    let cond = normalized_condition(f);
    if cond > MAX_CONDITION {
        return Err(Error::SingularFisher(format!("condition number {cond:.3e}")));
    }
    Ok(Covariance2 { var_beta: f.f_mm / det, cov: -f.f_bm / det, var_mu: f.f_bb / det })
}

/// Rotation diagonalizing the dimensionless Fisher matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDiag {
    /// Rows are the directions λ̄₁, λ̄₂ in (β̄, μ̄) space.
    pub r_matrix: [[f64; 2]; 2],
    pub f_lambda1: f64,
    pub f_lambda2: f64,
    /// Set when F̄ is a multiple of the identity and any rotation works.
    pub degenerate: bool,
}

impl JointDiag {
    /// (λ̄₁, λ̄₂) = R (β̄, μ̄).
    pub fn rotate(&self, beta_bar: f64, mu_bar: f64) -> [f64; 2] {
        let r = &self.r_matrix;
        [r[0][0] * beta_bar + r[0][1] * mu_bar, r[1][0] * beta_bar + r[1][1] * mu_bar]
    }
}

/// Diagonalizes F̄ = rescaled F.
///
/// With a = F̄_ββ − F̄_μμ, b = F̄_βμ and s = √(4b² + a²), the rows of R are
/// proportional to (a − s, 2b) and (a + s, 2b), with eigenvalues
/// (F̄_ββ + F̄_μμ ∓ s)/2. Each row is evaluated in whichever algebraic form
/// avoids cancellation, then normalized.
pub fn joint_diagonalize(f: &FisherMatrix2, sc: &ScaleConstants) -> Result<JointDiag> {
    if !f.is_psd() {
        return domain("Fisher matrix is not positive semidefinite");
    }
    let fb = sc.rescale(f);
    let a = fb.f_bb - fb.f_mm;
    let b = fb.f_bm;
    let s = (4.0 * b * b + a * a).sqrt();
    let tr = fb.f_bb + fb.f_mm;
    let f_lambda1 = 0.5 * (tr - s);
    let f_lambda2 = 0.5 * (tr + s);
    if s <= 1e-14 * tr.abs() || s == 0.0 {
        return Ok(JointDiag { r_matrix: [[1.0, 0.0], [0.0, 1.0]], f_lambda1, f_lambda2, degenerate: true });
    }
    let unit = |v: [f64; 2]| {
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    };
    // (a − s, 2b) ∝ (2b, −(a + s))·sign, and (a + s, 2b) ∝ (2b, s − a)·sign
    let row1 = if a <= 0.0 {
        unit([a - s, 2.0 * b])
    } else {
        let v = unit([2.0 * b, -(a + s)]);
        if b > 0.0 {
            [-v[0], -v[1]]
        } else {
            v
        }
    };
    let row2 = if a >= 0.0 {
        unit([a + s, 2.0 * b])
    } else {
        let v = unit([2.0 * b, s - a]);
        if b < 0.0 {
            [-v[0], -v[1]]
        } else {
            v
        }
    };
    Ok(JointDiag { r_matrix: [row1, row2], f_lambda1, f_lambda2, degenerate: false })
}

/// An observable c₀·1 + c_N·N + c_H·H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableCoeffs {
    pub constant: f64,
    pub n: f64,
    pub h: f64,
}

impl ObservableCoeffs {
    /// Expectation given ⟨N⟩ and ⟨H⟩.
    pub fn mean(&self, mean_n: f64, mean_h: f64) -> f64 {
        self.constant + self.n * mean_n + self.h * mean_h
    }

    /// Covariance with `other` given the (N, H) covariance matrix.
    pub fn covariance(&self, other: &ObservableCoeffs, nh: &[[f64; 2]; 2]) -> f64 {
        let u = [self.n, self.h];
        let v = [other.n, other.h];
        (0..2).map(|i| (0..2).map(|j| u[i] * nh[i][j] * v[j]).sum::<f64>()).sum()
    }
}

/// Optimal observables for single and joint estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalObservables {
    pub o_beta: ObservableCoeffs,
    pub o_mu: ObservableCoeffs,
    pub o_lambda1: ObservableCoeffs,
    pub o_lambda2: ObservableCoeffs,
    pub diag: JointDiag,
}

/// Covariance of (N, H) implied by F at `pt`.
///
/// Δ²N = F_μμ/β², Cov(N, H) = μΔ²N − F_βμ/β and Δ²(μN − H) = F_ββ.
pub fn nh_covariance(f: &FisherMatrix2, pt: &ThermoPoint) -> [[f64; 2]; 2] {
    let (b, mu) = (pt.beta, pt.mu);
    let vn = f.f_mm / (b * b);
    let cnh = mu * vn - f.f_bm / b;
    let vh = f.f_bb + 2.0 * mu * cnh - mu * mu * vn;
    [[vn, cnh], [cnh, vh]]
}

/// Affine coefficients of O_β, O_μ and the joint O_λ₁, O_λ₂.
///
/// The joint observables are O_λj = λ̄_j + L_λj/F_λj with
/// L_λ = R·diag(β₀, μ₀)·(μN − H − ⟨μN − H⟩, β(N − ⟨N⟩)).
pub fn optimal_observable_coeffs(
    f: &FisherMatrix2,
    pt: &ThermoPoint,
    sc: &ScaleConstants,
    means: (f64, f64),
) -> Result<OptimalObservables> {
    if !(f.f_bb > 0.0 && f.f_mm > 0.0) {
        return Err(Error::SingularFisher("diagonal Fisher entries must be positive".into()));
    }
    let (b, mu) = (pt.beta, pt.mu);
    let (n0, h0) = means;
    let g0 = mu * n0 - h0;
    let o_mu = ObservableCoeffs { constant: mu - b * n0 / f.f_mm, n: b / f.f_mm, h: 0.0 };
    let o_beta = ObservableCoeffs { constant: b - g0 / f.f_bb, n: mu / f.f_bb, h: -1.0 / f.f_bb };

    cramer_rao_inverse(f)?;
    let diag = joint_diagonalize(f, sc)?;
    let lam = diag.rotate(b / sc.beta0, mu / sc.mu0);
    let joint = |j: usize, fl: f64| {
        let [r1, r2] = diag.r_matrix[j];
        ObservableCoeffs {
            constant: lam[j] - (r1 * sc.beta0 * g0 + r2 * sc.mu0 * b * n0) / fl,
            n: (r1 * sc.beta0 * mu + r2 * sc.mu0 * b) / fl,
            h: -r1 * sc.beta0 / fl,
        }
    };
    Ok(OptimalObservables {
        o_beta,
        o_mu,
        o_lambda1: joint(0, diag.f_lambda1),
        o_lambda2: joint(1, diag.f_lambda2),
        diag,
    })
}
