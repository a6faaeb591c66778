use proptest::prelude::*;
use qgf_core::estimation::*;
use qgf_core::lattice_sums::{discrete_moments, ModeCutoff};
use qgf_core::{FisherMatrix2, GasSpec, Statistics, ThermoPoint, UnitSystem};

mod common;
use common::{min_eig, sample_cov};

fn box1(stat: Statistics, l: f64) -> GasSpec {
    GasSpec::isotropic_box(stat, 1, l, 1.0, UnitSystem::Reduced).unwrap()
}

fn psd() -> impl Strategy<Value = FisherMatrix2> {
    // F = AᵀA with a random 2×2 A, scaled over several decades
    (prop::array::uniform4(-1.0f64..1.0), -3.0f64..3.0, -3.0f64..3.0).prop_filter_map("rank", |(a, sb, sm)| {
        let (p, q, r, s) = (a[0], a[1], a[2], a[3]);
        let f = FisherMatrix2::new(
            (p * p + r * r) * 10f64.powf(2.0 * sb),
            (p * q + r * s) * 10f64.powf(sb + sm),
            (q * q + s * s) * 10f64.powf(2.0 * sm),
        );
        ((p * s - q * r).abs() > 1e-3).then_some(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn joint_diag_orthogonal_and_diagonalizing(f in psd(), b0 in 0.1f64..10.0, m0 in 0.1f64..10.0) {
        let sc = ScaleConstants::new(b0, m0).unwrap();
        let jd = joint_diagonalize(&f, &sc).unwrap();
        let r = jd.r_matrix;
        for i in 0..2 {
            for j in 0..2 {
                let dot = r[i][0] * r[j][0] + r[i][1] * r[j][1];
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() < 1e-12);
            }
        }
        prop_assert!(jd.f_lambda1 <= jd.f_lambda2);
        let fb = sc.rescale(&f);
        let m = [[fb.f_bb, fb.f_bm], [fb.f_bm, fb.f_mm]];
        let rot = |i: usize, j: usize| -> f64 {
            (0..2).map(|k| (0..2).map(|l| r[i][k] * m[k][l] * r[j][l]).sum::<f64>()).sum()
        };
        let scale = jd.f_lambda2.abs();
        prop_assert!(rot(0, 1).abs() <= 1e-10 * scale);
        prop_assert!((rot(0, 0) - jd.f_lambda1).abs() <= 1e-10 * scale);
        prop_assert!((rot(1, 1) - jd.f_lambda2).abs() <= 1e-10 * scale);
        // roots of λ² − tr λ + det
        let (tr, det) = (fb.f_bb + fb.f_mm, fb.f_bb * fb.f_mm - fb.f_bm * fb.f_bm);
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let (r1, r2) = (det / (0.5 * (tr + disc)), 0.5 * (tr + disc));
        prop_assert!((jd.f_lambda1 - r1).abs() <= 1e-12 * scale.max(1.0) + 1e-9 * r1.abs());
        prop_assert!((jd.f_lambda2 - r2).abs() <= 1e-12 * r2);
        prop_assert!((jd.f_lambda1 + jd.f_lambda2 - tr).abs() <= 1e-12 * tr);
    }

    #[test]
    fn inverse_is_inverse(f in psd()) {
        if let Ok(c) = cramer_rao_inverse(&f) {
            let i00 = f.f_bb * c.var_beta + f.f_bm * c.cov;
            let i01 = f.f_bb * c.cov + f.f_bm * c.var_mu;
            let i11 = f.f_bm * c.cov + f.f_mm * c.var_mu;
            let cond = normalized_condition(&f);
            let tol = 1e-10 * cond.max(1.0);
            prop_assert!((i00 - 1.0).abs() < tol && (i11 - 1.0).abs() < tol);
            prop_assert!(i01.abs() <= tol * (f.f_bb * c.cov).abs().max((f.f_bm * c.var_mu).abs()));
            prop_assert!(c.var_beta > 0.0 && c.var_mu > 0.0 && c.var_beta * c.var_mu >= c.cov * c.cov);
        }
    }
}

#[test]
fn single_parameter_bound() {
    let c = cramer_rao_inverse(&FisherMatrix2::new(2.0, 0.0, 5.0)).unwrap();
    assert!((c.var_mu - 0.2).abs() < 1e-15);
}

#[test]
fn sampler_mean_and_variance() {
    let spec = box1(Statistics::Bose, 6.0);
    let pt = ThermoPoint::from_log_fugacity(1.0, -0.4).unwrap();
    let dm = discrete_moments(&spec, &pt, ModeCutoff::auto(32)).unwrap();
    let b = sample_grand_canonical(&spec, &pt, 100_000, 11, ModeCutoff::auto(32)).unwrap();
    let sigma = (dm.var_n / 1e5).sqrt();
    assert!((b.mean_n() - dm.mean_n).abs() < 4.0 * sigma, "{} {}", b.mean_n(), dm.mean_n);
    let big = sample_grand_canonical(&spec, &pt, 1_000_000, 12, ModeCutoff::auto(32)).unwrap();
    let want = dm.fisher.f_mm / (pt.beta * pt.beta);
    assert!(((big.var_n() - want) / want).abs() < 0.05, "{} {}", big.var_n(), want);
}

#[test]
fn sampler_fermi_trap_mean() {
    let spec = GasSpec::isotropic_trap(Statistics::Fermi, 2, 0.5, 1.0, UnitSystem::Reduced).unwrap();
    let pt = ThermoPoint::new(1.0, 2.0).unwrap();
    let dm = discrete_moments(&spec, &pt, ModeCutoff::auto(32)).unwrap();
    let b = sample_grand_canonical(&spec, &pt, 100_000, 5, ModeCutoff::auto(32)).unwrap();
    let sigma = (dm.var_n / 1e5).sqrt();
    assert!((b.mean_n() - dm.mean_n).abs() < 4.0 * sigma);
}

#[test]
fn sampler_deterministic_across_thread_counts() {
    let spec = GasSpec::isotropic_box(Statistics::Bose, 2, 3.0, 1.0, UnitSystem::Reduced).unwrap();
    let pt = ThermoPoint::from_log_fugacity(1.0, -0.2).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sample_grand_canonical(&spec, &pt, 5000, 99, ModeCutoff::auto(16)).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a, b);
    let mut x = Vec::new();
    let mut y = Vec::new();
    a.write_binary(&mut x).unwrap();
    run(3).write_binary(&mut y).unwrap();
    assert_eq!(x, y);
    let other = sample_grand_canonical(&spec, &pt, 5000, 100, ModeCutoff::auto(16)).unwrap();
    assert_ne!(a.draws, other.draws);
}

#[test]
fn cutoff_too_small_when_truncating() {
    let spec = box1(Statistics::Bose, 50.0);
    let pt = ThermoPoint::from_log_fugacity(1.0, -0.1).unwrap();
    let err = sample_grand_canonical(&spec, &pt, 10, 1, ModeCutoff::truncate(2)).unwrap_err();
    assert!(matches!(err, qgf_core::Error::CutoffTooSmall { .. }));
}

#[test]
fn ml_within_crb_scaled_tolerance() {
    for stat in [Statistics::Bose, Statistics::Fermi] {
        let spec = box1(stat, 5.0);
        let truth = ThermoPoint::new(1.0, -0.3).unwrap();
        let b = sample_grand_canonical(&spec, &truth, 100_000, 21, ModeCutoff::auto(32)).unwrap();
        let init = ThermoPoint::new(0.5, -1.0).unwrap();
        let (est, rep) = max_likelihood_estimate(&b, &spec, &init).unwrap();
        assert!(rep.negative_definite);
        let f = ModeModel::new(&spec, b.max_index).unwrap().moments(truth.beta, truth.mu).fisher;
        let c = cramer_rao_inverse(&f).unwrap().scale(1e-5);
        assert!((est.beta - truth.beta).abs() < 4.0 * c.var_beta.sqrt(), "{stat:?} {est:?}");
        assert!((est.mu - truth.mu).abs() < 4.0 * c.var_mu.sqrt(), "{stat:?} {est:?}");
    }
}

#[test]
fn single_parameter_estimators_unbiased() {
    let spec = box1(Statistics::Bose, 5.0);
    let truth = ThermoPoint::new(1.0, -0.3).unwrap();
    let model = ModeModel::new(&spec, 32).unwrap();
    let f = model.moments(truth.beta, truth.mu).fisher;
    let (m, reps) = (2000usize, 100u64);
    let mut mus = Vec::new();
    let mut betas = Vec::new();
    for r in 0..reps {
        let b = sample_grand_canonical(&spec, &truth, m, 1000 + r, ModeCutoff::truncate(32)).unwrap();
        mus.push(estimate_mu_known_beta(&b, &spec, truth.beta).unwrap());
        betas.push(estimate_beta_known_mu(&b, &spec, truth.mu).unwrap());
    }
    let n = reps as f64;
    let mean_mu = mus.iter().sum::<f64>() / n;
    let mean_beta = betas.iter().sum::<f64>() / n;
    let se_mu = (1.0 / (m as f64 * f.f_mm) / n).sqrt();
    let se_beta = (1.0 / (m as f64 * f.f_bb) / n).sqrt();
    assert!((mean_mu - truth.mu).abs() < 3.0 * se_mu, "{mean_mu}");
    assert!((mean_beta - truth.beta).abs() < 3.0 * se_beta, "{mean_beta}");
    let var_beta = betas.iter().map(|b| (b - mean_beta).powi(2)).sum::<f64>() / (n - 1.0);
    let ratio = var_beta * m as f64 * f.f_bb;
    // 100 replications: sampling error of a variance is about 14%
    assert!((0.6..1.4).contains(&ratio), "{ratio}");
}

#[test]
fn out_of_model_range_reported() {
    let spec = box1(Statistics::Fermi, 2.0);
    let draws = vec![Draw { n: 0, e: 0.0 }; 4];
    let b = SampleBatch::from_draws(draws, 0, String::new(), 8).unwrap();
    let init = ThermoPoint::new(1.0, 0.0).unwrap();
    assert!(matches!(max_likelihood_estimate(&b, &spec, &init), Err(qgf_core::Error::OutOfModelRange(_))));
}

#[test]
fn hckr_anisotropic_exponent() {
    for n in [1u32, 2, 4] {
        let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5, 1e6, 1e7]
            .iter()
            .map(|&num| {
                let spec = anisotropic_trap_spec(1.0, 10.0, n, num, 1.0, UnitSystem::Reduced).unwrap();
                let s = fermi_level_spacing(&spec, num, LevelScenario::AnisotropicTrap(n)).unwrap();
                (num.ln(), hckr_bound(&HckrQuery::new(1, s.delta).unwrap()).ln())
            })
            .collect();
        let slope = (pts[4].1 - pts[0].1) / (pts[4].0 - pts[0].0);
        let want = 2.0 * n as f64 / (n as f64 + 2.0);
        assert!((slope - want).abs() < 1e-9, "n={n}: {slope}");
    }
}

#[test]
fn crb_sandwich_over_grid() {
    let r = UnitSystem::Reduced;
    let grid = [
        (box1(Statistics::Bose, 5.0), -0.3),
        (box1(Statistics::Fermi, 5.0), 0.5),
        (GasSpec::isotropic_trap(Statistics::Bose, 2, 1.0, 1.0, r).unwrap(), -0.5),
    ];
    let (m, reps) = (2000usize, 400u64);
    let mf = m as f64;
    for (k, (spec, x)) in grid.iter().enumerate() {
        let truth = ThermoPoint::from_log_fugacity(1.0, *x).unwrap();
        let mut joint = Vec::new();
        let mut mus = Vec::new();
        let mut max_index = 0;
        for rep in 0..reps {
            let b = sample_grand_canonical(spec, &truth, m, 50_000 * k as u64 + rep, ModeCutoff::auto(32)).unwrap();
            max_index = b.max_index;
            let (est, _) = max_likelihood_estimate(&b, spec, &truth).unwrap();
            joint.push((est.beta, est.mu));
            mus.push(estimate_mu_known_beta(&b, spec, truth.beta).unwrap());
        }
        let f = ModeModel::new(spec, max_index).unwrap().moments(truth.beta, truth.mu).fisher;
        let n = reps as f64;
        let [cbb, cbm, cmm] = sample_cov(&joint);
        let crb = cramer_rao_inverse(&f).unwrap().scale(1.0 / mf);
        // most negative direction of the excess, against its sampling spread
        let (lam, (vx, vy)) = min_eig(cbb - crb.var_beta, cbm - crb.cov, cmm - crb.var_mu);
        let spread = (2.0 / (n - 1.0)).sqrt() * (vx * vx * cbb + 2.0 * vx * vy * cbm + vy * vy * cmm);
        assert!(lam >= -3.0 * spread, "point {k}: {lam} vs {spread}");
        // single-parameter μ estimator
        let mean = mus.iter().sum::<f64>() / n;
        let var = mus.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let ratio = var * mf * f.f_mm;
        assert!((ratio - 1.0).abs() <= 0.15, "point {k}: ratio {ratio}");
        assert!((mean - truth.mu).abs() < 3.0 * (var / n).sqrt(), "point {k}: bias");
    }
}
