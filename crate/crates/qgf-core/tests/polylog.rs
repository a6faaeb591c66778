use proptest::prelude::*;
use qgf_core::polylog::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{polylog_oracle as oracle, rel};

#[test]
fn oracle_equivalence_on_200_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let s = rng.gen_range(-0.5..4.0);
        let z = match i % 4 {
            0 => rng.gen_range(0.0..0.99),
            1 => -rng.gen_range(-4.0f64..12.0).exp(),
            2 => rng.gen_range(-0.5..0.5),
            _ => -rng.gen_range(0.5..10.0),
        };
        let v = polylog(s, z).unwrap().value;
        let o = oracle(s, z);
        let e = rel(v, o);
        assert!(e <= 1e-6, "s={s} z={z}: {v} vs {o}");
        worst = worst.max(e);
    }
    assert!(worst < 1e-6);
}

#[test]
fn oracle_agrees_with_exact_values() {
    // Li_1(z) = -ln(1-z), Li_0(z) = z/(1-z)
    for z in [-5.0, -0.3, 0.4, 0.9] {
        assert!(rel(oracle(1.0, z), -(1.0f64 - z).ln()) < 1e-10);
        assert!(rel(oracle(0.0, z), z / (1.0 - z)) < 1e-10);
    }
}

fn fd_derivative(s: f64, z: f64) -> f64 {
    let h = 1e-4 * z.abs().max(1e-3).min(1.0 - z);
    z * (polylog(s, z + h).unwrap().value - polylog(s, z - h).unwrap().value) / (2.0 * h)
}

#[test]
fn derivative_identity_on_200_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let s = rng.gen_range(0.5..4.0);
        let z = rng.gen_range(-10.0..0.99);
        let lhs = fd_derivative(s, z);
        let rhs = polylog(s - 1.0, z).unwrap().value;
        assert!(rel(lhs, rhs) <= 1e-5, "s={s} z={z}: {lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_identity(s in 0.5f64..4.0, z in -10.0f64..0.99) {
        prop_assume!(z.abs() > 1e-6);
        let lhs = fd_derivative(s, z);
        let rhs = polylog(s - 1.0, z).unwrap().value;
        prop_assert!(rel(lhs, rhs) <= 1e-5);
    }

    #[test]
    fn increasing_on_unit_interval(s in -0.5f64..4.0, z in 0.001f64..0.98, dz in 1e-4f64..0.01) {
        let a = polylog(s, z).unwrap().value;
        let b = polylog(s, z + dz).unwrap().value;
        prop_assert!(b > a);
    }

    #[test]
    fn sign_follows_argument(s in -0.5f64..4.0, z in -50.0f64..0.99) {
        prop_assume!(z != 0.0);
        let v = polylog(s, z).unwrap().value;
        let ok = if z < 0.0 { v < 0.0 } else { v > 0.0 };
        prop_assert!(ok);
    }

    #[test]
    fn fermi_crossover_continuity(s in -0.5f64..4.0, dx in 0.0f64..5.0) {
        let x = CONFIG.fermi_crossover_x + dx;
        let full = li_neg_exp(s, x).unwrap();
        let asym = polylog_fermi_large(s, x).unwrap();
        prop_assert!((full.value - asym.value).abs() <= full.abs_error + asym.abs_error);
    }

    #[test]
    fn bose_crossover_continuity(s in -0.5f64..0.99, x in -0.05f64..-1e-8) {
        prop_assume!(x > -CONFIG.bose_x_small);
        let full = li_exp(s, x).unwrap();
        let sing = polylog_bose_singular(s, x).unwrap();
        prop_assert!((full.value - sing.value).abs() <= full.abs_error + sing.abs_error);
    }

    #[test]
    fn direct_radius_boundary(s in -0.5f64..4.0, eps in 1e-9f64..1e-6) {
        for z in [CONFIG.direct_radius, -CONFIG.direct_radius] {
            let a = polylog(s, z - eps).unwrap();
            let b = polylog(s, z + eps).unwrap();
            let slope_room = 10.0 * eps * (1.0 + a.value.abs());
            prop_assert!((a.value - b.value).abs() <= a.abs_error + b.abs_error + slope_room);
        }
    }
}

#[test]
fn integer_orders_at_crossover() {
    for s in [1.0, 2.0, 3.0, 4.0] {
        let x = CONFIG.fermi_crossover_x;
        let full = li_neg_exp(s, x).unwrap();
        let asym = polylog_fermi_large(s, x).unwrap();
        assert!((full.value - asym.value).abs() <= full.abs_error + asym.abs_error, "s={s}");
    }
}
