use std::f64::consts::PI;

use qgf_core::gas_model::{fisher_continuum, mean_particle_number};
use qgf_core::lattice_sums::*;
use qgf_core::{Confinement, GasSpec, Statistics, ThermoPoint, UnitSystem};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn three_dimensional_constant_converges() {
    let c256 = lattice_constant(3, 256).unwrap();
    let c128 = lattice_constant(3, 128).unwrap();
    assert!((16.4..=16.6).contains(&c256), "{c256}");
    assert!(rel(c128, c256) < 1e-3, "{c128} {c256}");
}

#[test]
fn constants_converge_for_each_dimension() {
    for d in 1..=3 {
        let a = lattice_constant(d, 128).unwrap();
        let b = lattice_constant(d, 256).unwrap();
        assert!(rel(a, b) < 1e-3, "d={d}: {a} {b}");
    }
}

#[test]
fn truncated_sums_grow_with_cutoff() {
    for d in 1..=3 {
        let mut last = 0.0;
        for m in [4, 8, 16, 32] {
            let s = lattice_sum(d, m, LatticeConvention::Full, TailPolicy::Truncate).unwrap();
            assert!(s > last);
            last = s;
        }
    }
}

#[test]
fn one_dimensional_box_number_near_zero_mu() {
    let l = 200.0;
    let spec = GasSpec::isotropic_box(Statistics::Bose, 1, l, 1.0, UnitSystem::Reduced).unwrap();
    let beta = 1.0;
    let lam = spec.thermal_wavelength(beta);
    let gap = (2.0 * PI).powi(2) / (2.0 * l * l);
    let pt = ThermoPoint::new(beta, -1e-3 * gap).unwrap();
    let exact = discrete_sum_n(&spec, &pt, ModeCutoff::auto(64)).unwrap();
    let lead = dominant_mean_n_1d(&spec, &pt).unwrap();
    // next-order corrections scale like L/λ_T, far below ⟨N⟩
    assert!(rel(exact, lead) < 1e-3, "{exact} {lead}");
    let excited = exact + 1.0 / (beta * pt.mu);
    assert!(rel(excited, PI * l * l / (3.0 * lam * lam)) < 0.03, "{excited}");
}

#[test]
fn one_dimensional_trap_number_near_zero_mu() {
    let spec = GasSpec::isotropic_trap(Statistics::Bose, 1, 1e-4, 1.0, UnitSystem::Reduced).unwrap();
    let pt = ThermoPoint::new(1.0, -1e-7).unwrap();
    let exact = discrete_sum_n(&spec, &pt, ModeCutoff::auto(1 << 16)).unwrap();
    let lead = dominant_mean_n_1d(&spec, &pt).unwrap();
    assert!(rel(exact, lead) < 0.05, "{exact} {lead}");
}

#[test]
fn box_dominant_fisher_matches_sum() {
    for d in 1..=3 {
        let l = 20.0;
        let spec = GasSpec::isotropic_box(Statistics::Bose, d, l, 1.0, UnitSystem::Reduced).unwrap();
        let gap = (2.0 * PI).powi(2) / (2.0 * l * l);
        let pt = ThermoPoint::new(1.0, -0.05 * gap).unwrap();
        let exact = discrete_sum_fmm(&spec, &pt, ModeCutoff::auto(16)).unwrap();
        let lead = box_dominant_fisher_mm(&spec, &pt).unwrap();
        assert!(rel(exact, lead) < 0.1, "d={d}: {exact} {lead}");
    }
}

#[test]
fn harmonic_2d_estimate_within_twenty_percent() {
    let w = 1e-6;
    let spec = GasSpec::isotropic_trap(Statistics::Bose, 2, w, 1.0, UnitSystem::Reduced).unwrap();
    let pt = ThermoPoint::new(1.0, -0.5 * w).unwrap();
    let exact = discrete_sum_fmm(&spec, &pt, ModeCutoff::auto(1 << 20)).unwrap();
    let lead = harmonic_discrete_fmm_2d(&spec, &pt).unwrap();
    assert!(rel(lead, exact) < 0.2, "{exact} {lead}");
}

#[test]
fn ground_mode_separates() {
    let spec = GasSpec::isotropic_box(Statistics::Bose, 2, 10.0, 1.0, UnitSystem::Reduced).unwrap();
    let pt = ThermoPoint::new(1.0, -0.01).unwrap();
    let cut = ModeCutoff::auto(32);
    let total = discrete_sum_fmm_detailed(&spec, &pt, cut).unwrap();
    let modes = enumerate_modes(&spec, total.max_index).unwrap();
    let excited: f64 = modes
        .iter()
        .filter(|(e, _)| *e > 0.0)
        .map(|(e, w)| {
            let x = pt.beta * (e - pt.mu);
            w * pt.beta * pt.beta * x.exp() / x.exp_m1().powi(2)
        })
        .sum();
    let ground = ground_mode_fmm(&spec, &pt).unwrap();
    assert!(rel(total.value - ground, excited) < 1e-12);
}

#[test]
fn continuum_limit_as_box_grows() {
    let pt = ThermoPoint::from_log_fugacity(1.0, -0.5).unwrap();
    let mut last = f64::INFINITY;
    for l in [1.5, 3.0, 6.0, 12.0] {
        let spec = GasSpec::isotropic_box(Statistics::Bose, 3, l, 1.0, UnitSystem::Reduced).unwrap();
        let exact = discrete_sum_fmm(&spec, &pt, ModeCutoff::auto(16)).unwrap();
        let cont = fisher_continuum(&spec, &pt).unwrap().f_mm;
        let err = rel(exact, cont);
        assert!(err < last, "L={l}: {err} after {last}");
        last = err;
    }
    assert!(last < 1e-3, "{last}");
}

#[test]
fn continuum_limit_as_trap_opens() {
    let pt = ThermoPoint::from_log_fugacity(1.0, -0.5).unwrap();
    let mut last = f64::INFINITY;
    for w in [0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125] {
        let spec = GasSpec::isotropic_trap(Statistics::Fermi, 3, w, 1.0, UnitSystem::Reduced).unwrap();
        let exact = discrete_sum_n(&spec, &pt, ModeCutoff::auto(64)).unwrap();
        let cont = mean_particle_number(&spec, &pt).unwrap();
        let err = rel(exact, cont);
        assert!(err < last, "w={w}: {err} after {last}");
        last = err;
    }
    assert!(last < 1e-2, "{last}");
}

#[test]
fn dirichlet_ground_energy() {
    let spec = GasSpec::new(Statistics::Bose, Confinement::DirichletBox, &[1.0, 2.0], 1.0, UnitSystem::Reduced).unwrap();
    let e0 = ground_energy(&spec);
    assert!(rel(e0, PI * PI / 2.0 * (1.0 + 0.25)) < 1e-14);
    let modes = enumerate_modes(&spec, 4).unwrap();
    let min = modes.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    assert!(rel(min, e0) < 1e-14);
}
