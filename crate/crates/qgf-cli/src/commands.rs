//! Subcommand bodies. Each returns a table; `run` writes it out.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use qgf_core::condensate::*;
use qgf_core::eos::{continuum_bound, continuum_fisher_bound_mm, ground_bound, ground_state_fisher_mm};
use qgf_core::estimation::*;
use qgf_core::gas_model::*;
use qgf_core::interactions::{contact_fisher_mm, ContactSpec};
use qgf_core::{classify_regime, solve_mu, Error, ModeCutoff, Regime, UnitSystem};
use rayon::prelude::*;

use crate::args::*;
use crate::error::{argument, CliError};
use crate::quantity::{parse, Dim};
use crate::table::{fmt_num, Cell, Table};

pub const FISHER_SCHEMA: &str = "qgf.fisher.v1";
pub const SCAN_THERMAL_SCHEMA: &str = "qgf.scan.thermal.v1";
pub const SCAN_BOUNDS_SCHEMA: &str = "qgf.scan.bounds.v1";
pub const SCAN_SLAB_SCHEMA: &str = "qgf.scan.slab.v1";
pub const SCAN_CONTACT_SCHEMA: &str = "qgf.scan.contact.v1";
pub const SAMPLE_SCHEMA: &str = "qgf.sample.v1";
pub const BEC_GAS_SCHEMA: &str = "qgf.bec.gas.v1";
pub const BEC_SLAB_SCHEMA: &str = "qgf.bec.slab.v1";
pub const BEC_ISOBARIC_SCHEMA: &str = "qgf.bec.isobaric.v1";
pub const REGIME_SCHEMA: &str = "qgf.regime.v1";

const GAS_COLUMNS: [&str; 6] = ["statistics", "confinement", "dim", "species", "mass_kg", "extent_si"];
const PARTICLE_COLUMNS: [&str; 2] = ["species", "mass_kg"];

fn columns(parts: &[&[&'static str]]) -> Vec<&'static str> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

fn statistics_name(s: Statistics) -> &'static str {
    match s {
        Statistics::Bose => "bose",
        Statistics::Fermi => "fermi",
    }
}

fn confinement_name(c: Confinement) -> &'static str {
    match c {
        Confinement::PeriodicBox => "box",
        Confinement::DirichletBox => "dirichlet",
        Confinement::HarmonicTrap => "trap",
    }
}

/// Resolved gas configuration in SI: lengths in m, frequencies in rad/s.
fn gas_echo(g: &Gas) -> Vec<Cell> {
    let extent: Vec<String> = g.spec.geometry.iter().map(|v| fmt_num(*v)).collect();
    vec![
        statistics_name(g.spec.statistics).into(),
        confinement_name(g.spec.confinement).into(),
        g.spec.dim().into(),
        g.particle.name.as_str().into(),
        g.particle.mass.into(),
        extent.join(";").into(),
    ]
}

fn particle_echo(p: &Particle) -> Vec<Cell> {
    vec![p.name.as_str().into(), p.mass.into()]
}

fn rel_temp_error(beta: f64, f_bb: f64) -> f64 {
    1.0 / (beta * f_bb.sqrt())
}

fn si_temperature(beta: f64) -> f64 {
    UnitSystem::SI.temperature_from_beta(beta)
}

pub fn fisher(a: &FisherArgs) -> Result<Table, CliError> {
    let gas = a.gas.resolve()?;
    let spec = &gas.spec;
    let mut t = Table::new(columns(&[
        &["schema"],
        &GAS_COLUMNS,
        &["temperature_K", "target_n", "beta_per_J", "mu_J", "beta_mu", "mean_n"],
        &["f_bb", "f_bm", "f_mm", "rel_temp_error", "regime", "continuum_valid", "low_t_fermi"],
    ]));
    let mut row = vec![Cell::from(FISHER_SCHEMA)];
    row.extend(gas_echo(&gas));
    if a.condensed {
        if spec.statistics != Statistics::Bose {
            return argument("--condensed needs --stat bose");
        }
        if a.state.mu.is_some() || a.state.beta_mu.is_some() {
            return argument("--condensed fixes μ itself; give --N instead of --mu/--beta-mu");
        }
        let temp = a.state.temperature()?;
        let beta = UnitSystem::SI.beta_from_temperature(temp);
        let f_bb = condensed_fisher_bb(spec, beta)?;
        let (mu, f_bm, f_mm) = match a.state.n {
            Some(n) => {
                let cs = CondensedState::new(spec, temp, n, a.symmetry_breaking)?;
                let f = condensed_fisher(spec, &cs, n)?;
                (Some(cs.mu_eff), Some(f.f_bm), Some(f.f_mm))
            }
            None => (None, None, None),
        };
        row.extend([
            temp.into(),
            a.state.n.into(),
            beta.into(),
            mu.into(),
            mu.map(|m| beta * m).into(),
            a.state.n.into(),
            f_bb.into(),
            f_bm.into(),
            f_mm.into(),
            rel_temp_error(beta, f_bb).into(),
            "condensed".into(),
            false.into(),
            false.into(),
        ]);
    } else {
        let (pt, source) = a.state.resolve(spec)?;
        let mean_n = mean_particle_number(spec, &pt)?;
        let f = fisher_continuum(spec, &pt)?;
        let report = classify_regime(spec, &pt, mean_n)?;
        let target = match source {
            MuSource::Target(n) => Some(n),
            MuSource::Given => None,
        };
        let x = pt.log_fugacity();
        row.extend([
            si_temperature(pt.beta).into(),
            target.into(),
            pt.beta.into(),
            pt.mu.into(),
            x.into(),
            mean_n.into(),
            f.f_bb.into(),
            f.f_bm.into(),
            f.f_mm.into(),
            rel_temp_error(pt.beta, f.f_bb).into(),
            report.regime.name().into(),
            matches!(report.regime, Regime::Classical | Regime::QuantumContinuum).into(),
            (spec.statistics == Statistics::Fermi && x >= 10.0).into(),
        ]);
    }
    t.push(row);
    Ok(t)
}

fn grid(range: &Range, dim: Option<Dim>) -> Result<Vec<f64>, CliError> {
    let read = |s: &str| match dim {
        Some(d) => parse(s, d),
        None => s.trim().parse::<f64>().map_err(|_| CliError::Argument(format!("cannot read '{s}' as a number"))),
    };
    let (a, b) = (read(&range.from)?, read(&range.to)?);
    let n = range.points;
    if n == 0 {
        return argument("--points must be at least 1");
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    if !range.linear && !(a > 0.0 && b > 0.0) {
        return argument("a logarithmic grid needs positive end points (or pass --linear)");
    }
    Ok((0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if range.linear {
                a + (b - a) * s
            } else {
                a * (b / a).powf(s)
            }
        })
        .collect())
}

/// One row of a temperature or size sweep. Failures become a status code.
fn thermal_row(gas: &Gas, temp: f64, n: f64) -> Vec<Cell> {
    let spec = &gas.spec;
    let beta = UnitSystem::SI.beta_from_temperature(temp);
    // classical reference at its own chemical potential, ⟨N⟩ = A e^{βμ}
    let classical = ThermoPoint::from_log_fugacity(beta, (n / spec.prefactor(beta)).ln())
        .and_then(|pt| classical_fisher(spec, &pt))
        .map(|(_, f)| rel_temp_error(beta, f.f_bb))
        .ok();
    let mut row = vec![Cell::from(SCAN_THERMAL_SCHEMA)];
    row.extend(gas_echo(gas));
    row.extend([temp.into(), n.into(), beta.into()]);
    let solved = solve_mu(spec, beta, n).and_then(|pt| {
        let f = fisher_continuum(spec, &pt)?;
        let report = classify_regime(spec, &pt, n)?;
        Ok((pt, f, report))
    });
    match solved {
        Ok((pt, f, report)) => {
            let low_t = fisher_lowt_fermi(spec, &pt).ok().map(|l| rel_temp_error(beta, l.f_bb));
            row.extend([
                pt.mu.into(),
                pt.log_fugacity().into(),
                f.f_bb.into(),
                f.f_bm.into(),
                f.f_mm.into(),
                rel_temp_error(beta, f.f_bb).into(),
                classical.into(),
                low_t.into(),
                report.regime.name().into(),
                "ok".into(),
            ]);
        }
        Err(e) => {
            row.extend(std::iter::repeat(Cell::Empty).take(5));
            row.extend([Cell::Empty, classical.into(), Cell::Empty]);
            let regime = if matches!(e, Error::NoSolution(_)) { "condensed" } else { "" };
            row.extend([regime.into(), e.code().into()]);
        }
    }
    row
}

fn thermal_table() -> Table {
    Table::new(columns(&[
        &["schema"],
        &GAS_COLUMNS,
        &["temperature_K", "target_n", "beta_per_J", "mu_J", "beta_mu", "f_bb", "f_bm", "f_mm"],
        &["rel_temp_error", "rel_temp_error_classical", "rel_temp_error_low_t", "regime", "status"],
    ]))
}

fn extend_rows(t: &mut Table, rows: Vec<Vec<Cell>>) {
    for r in rows {
        t.push(r);
    }
}

pub fn scan(a: &ScanArgs) -> Result<Table, CliError> {
    match &a.kind {
        ScanKind::Temperature { gas, n, range } => {
            let gas = gas.resolve()?;
            let temps = grid(range, Some(Dim::Temperature))?;
            let mut t = thermal_table();
            extend_rows(&mut t, temps.par_iter().map(|&temp| thermal_row(&gas, temp, *n)).collect());
            Ok(t)
        }
        ScanKind::Size { gas, t: temp, n, range } => {
            let temp = temperature(temp)?;
            let dim = if gas.conf == ConfArg::Trap { Dim::Frequency } else { Dim::Length };
            let sizes = grid(range, Some(dim))?;
            let gases = sizes.iter().map(|&s| gas.resolve_isotropic(s)).collect::<Result<Vec<_>, _>>()?;
            let mut t = thermal_table();
            extend_rows(&mut t, gases.par_iter().map(|g| thermal_row(g, temp, *n)).collect());
            Ok(t)
        }
        ScanKind::Bounds { conf, range } => bounds_scan(*conf, range),
        ScanKind::Slab { particle, rho, alpha, ell, range } => {
            slab_scan(&particle.resolve()?, rho, alpha, ell.as_deref(), range)
        }
        ScanKind::Contact { particle, l_x, t: temp, c, range } => {
            contact_scan(&particle.resolve()?, l_x, temp, c, range)
        }
    }
}

fn bounds_scan(conf: ConfArg, range: &Range) -> Result<Table, CliError> {
    let ns = grid(range, None)?;
    let mut t = Table::new(vec!["schema", "confinement", "n", "shot_noise", "t0_envelope", "bound_d1", "bound_d2", "bound_d3"]);
    // the bounds scale as β², so they are tabulated at β = 1
    let pt = ThermoPoint::new(1.0, -1.0)?;
    let specs: Vec<GasSpec> = (1..=3)
        .map(|d| GasSpec::new(Statistics::Bose, conf.confinement(), &vec![1.0; d], 1.0, UnitSystem::Reduced))
        .collect::<Result<_, _>>()?;
    for n in ns {
        let mut row: Vec<Cell> = vec![SCAN_BOUNDS_SCHEMA.into(), confinement_name(conf.confinement()).into(), n.into()];
        row.push(n.into());
        row.push(ground_state_fisher_mm(1.0, n).into());
        for sp in &specs {
            row.push(continuum_fisher_bound_mm(sp, &pt, n).ok().into());
        }
        t.push(row);
    }
    Ok(t)
}

fn slab_scan(p: &Particle, rho: &str, alpha: &str, ell: Option<&str>, range: &Range) -> Result<Table, CliError> {
    let rho = parse(rho, Dim::Density)?;
    let alpha = parse(alpha, Dim::InverseLength)?;
    let ell = match ell {
        Some(l) => SlabLength::Fixed(parse(l, Dim::Length)?),
        None => SlabLength::ThermalWavelength,
    };
    let slab = SlabSpec::new(rho, alpha, ell, UnitSystem::SI)?;
    let (t3, t2) = slab_critical_temperatures(&slab, p.mass)?;
    let ns = grid(range, None)?;
    let mut t = Table::new(columns(&[
        &["schema"],
        &PARTICLE_COLUMNS,
        &["rho_m3", "alpha_m1", "ell_m", "curve", "temperature_K", "n", "f_mm_over_beta2", "status"],
    ]));
    let h = UnitSystem::SI.hbar();
    let lambda = |temp: f64| (2.0 * std::f64::consts::PI * h * h / (p.mass * UnitSystem::SI.kb() * temp)).sqrt();
    let curves = [("t_c3d", t3), ("half_t_c3d", t3 / 2.0), ("t_c2d", t2)];
    for n in ns {
        let head = |curve: &str, temp: Option<f64>| {
            let mut r = vec![Cell::from(SCAN_SLAB_SCHEMA)];
            r.extend(particle_echo(p));
            let l = match ell {
                SlabLength::Fixed(l) => Some(l),
                SlabLength::ThermalWavelength => temp.filter(|t| *t > 0.0).map(lambda),
            };
            r.extend([rho.into(), alpha.into(), l.into(), curve.into(), temp.into(), n.into()]);
            r
        };
        let mut r = head("classical", None);
        r.extend([n.into(), "ok".into()]);
        t.push(r);
        for (name, temp) in curves {
            let mut r = head(name, Some(temp));
            let beta = UnitSystem::SI.beta_from_temperature(temp);
            match slab_fisher_per_particle(&slab, p.mass, temp, n) {
                Ok(v) => r.extend([(n * v / (beta * beta)).into(), "ok".into()]),
                Err(e) => r.extend([Cell::Empty, e.code().into()]),
            }
            t.push(r);
        }
        let mut r = head("zero_temperature", Some(0.0));
        r.extend([(n + n * n).into(), "ok".into()]);
        t.push(r);
    }
    Ok(t)
}

fn contact_scan(p: &Particle, l_x: &str, temp: &str, couplings: &[f64], range: &Range) -> Result<Table, CliError> {
    let l = parse(l_x, Dim::Length)?;
    let temp = temperature(temp)?;
    let beta = UnitSystem::SI.beta_from_temperature(temp);
    if let Some(c) = couplings.iter().find(|c| !(**c >= 0.0)) {
        return argument(format!("couplings must be non-negative, got {c}"));
    }
    let ns = grid(range, None)?;
    let mut t = Table::new(columns(&[
        &["schema"],
        &PARTICLE_COLUMNS,
        &["l_x_m", "temperature_K", "curve", "c_Jm", "n"],
        &["f_mm_over_beta2", "ideal_over_beta2", "correction_over_beta2", "weak_coupling", "degenerate", "breakdown"],
    ]));
    let b2 = beta * beta;
    for n in ns {
        let head = |curve: &str, c: Option<f64>| {
            let mut r = vec![Cell::from(SCAN_CONTACT_SCHEMA)];
            r.extend(particle_echo(p));
            r.extend([l.into(), temp.into(), curve.into(), c.into(), n.into()]);
            r
        };
        let lam = ContactSpec::at_fixed_length(0.0, n, beta, l, p.mass, UnitSystem::SI)?.thermal_wavelength();
        for &c in couplings {
            let cs = ContactSpec::at_fixed_length(c, n, beta, l, p.mass, UnitSystem::SI)?;
            let f = contact_fisher_mm(&cs, n)?;
            let mut r = head("coupling", Some(c));
            r.extend([
                (f.value / b2).into(),
                (f.ideal / b2).into(),
                (f.correction / b2).into(),
                f.flags.weak_coupling.into(),
                f.flags.degenerate.into(),
                f.flags.breakdown.into(),
            ]);
            t.push(r);
        }
        let rho = n / l;
        for (curve, v) in [
            ("shot_noise", n),
            ("continuum_1d", lam * lam * rho * rho * n / (2.0 * std::f64::consts::PI)),
            ("zero_temperature", n + n * n),
        ] {
            let mut r = head(curve, None);
            r.push(v.into());
            r.extend(std::iter::repeat(Cell::Empty).take(5));
            t.push(r);
        }
    }
    Ok(t)
}

fn read_batch(path: &Path, seed: u64, max_index: usize) -> Result<SampleBatch, CliError> {
    let mut f = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    let mut head = Vec::new();
    let got = f.by_ref().take(4).read_to_end(&mut head)?;
    magic[..got].copy_from_slice(&head);
    let whole = std::io::Cursor::new(head).chain(f);
    let draws = if &magic == BATCH_MAGIC { read_binary(whole)? } else { read_csv(BufReader::new(whole))? };
    Ok(SampleBatch::from_draws(draws, seed, String::new(), max_index)?)
}

fn write_batch(batch: &SampleBatch, path: &Path, format: BatchFormat) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        BatchFormat::Binary => batch.write_binary(&mut w)?,
        BatchFormat::Csv => batch.write_csv(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

pub fn sample(a: &SampleArgs) -> Result<Table, CliError> {
    let gas = a.gas.resolve()?;
    let spec = &gas.spec;
    let (pt, _) = a.state.resolve(spec)?;
    let mut t = Table::new(columns(&[
        &["schema"],
        &GAS_COLUMNS,
        &["temperature_K", "beta_per_J", "mu_J", "m", "replications", "seed", "max_index", "spec_hash"],
        &["beta_hat", "mu_hat", "emp_var_beta", "emp_cov", "emp_var_mu", "crb_var_beta", "crb_cov", "crb_var_mu"],
        &["ratio_var_beta", "ratio_var_mu", "single_mu_var", "single_mu_ratio", "ml_iterations", "ml_fallback", "batch_path"],
    ]));
    let mut row = vec![Cell::from(SAMPLE_SCHEMA)];
    row.extend(gas_echo(&gas));
    row.extend([si_temperature(pt.beta).into(), pt.beta.into(), pt.mu.into()]);

    if let Some(path) = &a.batch_in {
        let batch = read_batch(path, a.seed, a.max_index)?;
        let (est, rep) = max_likelihood_estimate(&batch, spec, &pt)?;
        let f = ModeModel::new(spec, batch.max_index)?.moments(est.beta, est.mu).fisher;
        let crb = cramer_rao_inverse(&f)?.scale(1.0 / batch.m as f64);
        row.extend([batch.m.into(), 1u64.into(), a.seed.into(), batch.max_index.into(), Cell::Empty]);
        row.extend([est.beta.into(), est.mu.into(), Cell::Empty, Cell::Empty, Cell::Empty]);
        row.extend([crb.var_beta.into(), crb.cov.into(), crb.var_mu.into()]);
        row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
        row.extend([rep.iterations.into(), rep.fallback.into(), path.display().to_string().into()]);
        t.push(row);
        return Ok(t);
    }

    if a.reps == 0 || a.m == 0 {
        return argument("--m and --reps must be positive");
    }
    let cutoff = if a.strict_cutoff { ModeCutoff::truncate(a.max_index) } else { ModeCutoff::auto(a.max_index) };
    let mut joint = Vec::new();
    let mut singles = Vec::new();
    let mut iterations = 0;
    let mut fallback = false;
    let mut first: Option<SampleBatch> = None;
    for r in 0..a.reps {
        let batch = sample_grand_canonical(spec, &pt, a.m, a.seed.wrapping_add(r), cutoff)?;
        let (est, rep) = max_likelihood_estimate(&batch, spec, &pt)?;
        joint.push((est.beta, est.mu));
        singles.push(estimate_mu_known_beta(&batch, spec, pt.beta)?);
        iterations = iterations.max(rep.iterations);
        fallback |= rep.fallback;
        if first.is_none() {
            first = Some(batch);
        }
    }
    let first = first.expect("at least one replication");
    let f = ModeModel::new(spec, first.max_index)?.moments(pt.beta, pt.mu).fisher;
    let mf = a.m as f64;
    let crb = cramer_rao_inverse(&f)?.scale(1.0 / mf);
    let n = joint.len() as f64;
    let mean_b = joint.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_m = joint.iter().map(|p| p.1).sum::<f64>() / n;
    let (emp, single) = if joint.len() >= 2 {
        let c = |g: &dyn Fn(&(f64, f64)) -> f64| joint.iter().map(g).sum::<f64>() / (n - 1.0);
        let emp = [c(&|p| (p.0 - mean_b).powi(2)), c(&|p| (p.0 - mean_b) * (p.1 - mean_m)), c(&|p| (p.1 - mean_m).powi(2))];
        let ms = singles.iter().sum::<f64>() / n;
        let vs = singles.iter().map(|v| (v - ms).powi(2)).sum::<f64>() / (n - 1.0);
        (Some(emp), Some(vs))
    } else {
        (None, None)
    };
    if let Some(path) = &a.batch_out {
        write_batch(&first, path, a.batch_format)?;
    }
    row.extend([a.m.into(), a.reps.into(), a.seed.into(), first.max_index.into(), first.spec_hash.as_str().into()]);
    row.extend([mean_b.into(), mean_m.into()]);
    row.extend([emp.map(|e| e[0]).into(), emp.map(|e| e[1]).into(), emp.map(|e| e[2]).into()]);
    row.extend([crb.var_beta.into(), crb.cov.into(), crb.var_mu.into()]);
    row.extend([emp.map(|e| e[0] / crb.var_beta).into(), emp.map(|e| e[2] / crb.var_mu).into()]);
    row.extend([single.into(), single.map(|v| v * mf * f.f_mm).into()]);
    row.extend([iterations.into(), fallback.into()]);
    row.push(a.batch_out.as_ref().map_or(Cell::Empty, |p| p.display().to_string().into()));
    t.push(row);
    Ok(t)
}

pub fn bec(a: &BecArgs) -> Result<Table, CliError> {
    let p = a.particle.resolve()?;
    match a.kind {
        BecKind::Gas => {
            let conf = a.conf.ok_or_else(|| CliError::Argument("--conf is required".into()))?;
            let n = a.n.ok_or_else(|| CliError::Argument("--N is required".into()))?;
            let g = geometry(conf, a.d, a.l.as_deref(), a.omega.as_deref())?;
            let spec = GasSpec::new(Statistics::Bose, conf.confinement(), &g, p.mass, UnitSystem::SI)?;
            let t_c = critical_temperature(&spec, spec.density(n))?;
            let gas = Gas { spec, particle: p };
            let mut t = Table::new(columns(&[
                &["schema"],
                &GAS_COLUMNS,
                &["n", "t_c_K", "temperature_K", "condensate_fraction", "beta_per_J", "mu_eff_J"],
                &["f_bb", "f_bm", "f_mm", "rel_temp_error", "symmetry_breaking"],
            ]));
            let mut row = vec![Cell::from(BEC_GAS_SCHEMA)];
            row.extend(gas_echo(&gas));
            row.extend([n.into(), t_c.into()]);
            match &a.t {
                Some(s) => {
                    let temp = temperature(s)?;
                    let cs = CondensedState::new(&gas.spec, temp, n, a.symmetry_breaking)?;
                    let f = condensed_fisher(&gas.spec, &cs, n)?;
                    let beta = cs.beta(UnitSystem::SI);
                    row.extend([temp.into(), cs.fraction.into(), beta.into(), cs.mu_eff.into()]);
                    row.extend([f.f_bb.into(), f.f_bm.into(), f.f_mm.into(), rel_temp_error(beta, f.f_bb).into()]);
                }
                None => row.extend(std::iter::repeat(Cell::Empty).take(8)),
            }
            row.push(a.symmetry_breaking.into());
            t.push(row);
            Ok(t)
        }
        BecKind::Slab => {
            let (Some(rho), Some(alpha)) = (&a.rho, &a.alpha) else {
                return argument("--kind slab needs --rho and --alpha");
            };
            let rho = parse(rho, Dim::Density)?;
            let alpha = parse(alpha, Dim::InverseLength)?;
            let slab = SlabSpec::new(rho, alpha, SlabLength::ThermalWavelength, UnitSystem::SI)?;
            let (t3, t2) = slab_critical_temperatures(&slab, p.mass)?;
            let mut t = Table::new(columns(&[&["schema"], &PARTICLE_COLUMNS, &["rho_m3", "alpha_m1", "t_c3d_K", "t_c2d_K"]]));
            let mut row = vec![Cell::from(BEC_SLAB_SCHEMA)];
            row.extend(particle_echo(&p));
            row.extend([rho.into(), alpha.into(), t3.into(), t2.into()]);
            t.push(row);
            Ok(t)
        }
        BecKind::Isobaric => {
            let pressure = a.pressure.ok_or_else(|| CliError::Argument("--kind isobaric needs --pressure".into()))?;
            let t_c = isobaric_transition(pressure, p.mass, UnitSystem::SI)?;
            let mut t = Table::new(columns(&[
                &["schema"],
                &PARTICLE_COLUMNS,
                &["pressure_N_per_m", "t_c_K", "temperature_K", "density_m2"],
            ]));
            let mut row = vec![Cell::from(BEC_ISOBARIC_SCHEMA)];
            row.extend(particle_echo(&p));
            row.extend([pressure.into(), t_c.into()]);
            match &a.t {
                Some(s) => {
                    let temp = temperature(s)?;
                    row.extend([temp.into(), isobaric_density(temp, pressure, p.mass, UnitSystem::SI)?.into()]);
                }
                None => row.extend([Cell::Empty, Cell::Empty]),
            }
            t.push(row);
            Ok(t)
        }
    }
}

pub fn regime(a: &RegimeArgs) -> Result<Table, CliError> {
    let gas = a.gas.resolve()?;
    let spec = &gas.spec;
    let mut t = Table::new(columns(&[
        &["schema"],
        &GAS_COLUMNS,
        &["temperature_K", "target_n", "beta_per_J", "mu_J", "beta_mu", "mean_n", "fugacity", "neg_beta_mu"],
        &["continuum_bound", "ground_bound", "regime"],
    ]));
    let mut row = vec![Cell::from(REGIME_SCHEMA)];
    row.extend(gas_echo(&gas));
    match a.state.resolve(spec) {
        Ok((pt, source)) => {
            let mean_n = mean_particle_number(spec, &pt)?;
            let r = classify_regime(spec, &pt, mean_n)?;
            let target = match source {
                MuSource::Target(n) => Some(n),
                MuSource::Given => None,
            };
            row.extend([si_temperature(pt.beta).into(), target.into(), pt.beta.into(), pt.mu.into()]);
            row.extend([pt.log_fugacity().into(), mean_n.into(), r.fugacity.into(), (-pt.log_fugacity()).into()]);
            row.extend([r.continuum_bound.into(), r.ground_bound.into(), r.regime.name().into()]);
        }
        // a Bose target above the continuum maximum has condensed
        Err(CliError::Core(Error::NoSolution(_))) if a.state.n.is_some() => {
            let n = a.state.n.unwrap_or_default();
            let temp = a.state.temperature()?;
            let beta = UnitSystem::SI.beta_from_temperature(temp);
            row.extend([temp.into(), n.into(), beta.into()]);
            row.extend(std::iter::repeat(Cell::Empty).take(5));
            row.extend([continuum_bound(spec, beta).into(), ground_bound(n).into(), Regime::Condensed.name().into()]);
        }
        Err(e) => return Err(e),
    }
    t.push(row);
    Ok(t)
}
