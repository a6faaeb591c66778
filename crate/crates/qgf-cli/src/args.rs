//! Command-line definitions and their resolution into core types.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgf_core::{Confinement, GasSpec, Species, Statistics, ThermoPoint, UnitSystem};

use crate::error::{argument, CliError};
use crate::quantity::{parse, parse_list, Dim};
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "qgf", version, about = "Fisher information and thermometry bounds for quantum gases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fisher matrix of one thermodynamic state.
    Fisher(FisherArgs),
    /// Parameter sweeps behind the figure datasets.
    Scan(ScanArgs),
    /// Monte Carlo batches and estimator report.
    Sample(SampleArgs),
    /// Condensation temperatures and condensed-phase Fisher entries.
    Bec(BecArgs),
    /// Regime classification of one state.
    Regime(RegimeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Bose,
    Fermi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConfArg {
    Box,
    Dirichlet,
    Trap,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Species and mass, shared by every command that needs a particle.
#[derive(Debug, Clone, Args)]
pub struct ParticleArgs {
    /// Li6, Na23 or Rb87.
    #[arg(long)]
    pub species: Option<String>,
    /// Mass in kg, overrides --species.
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GasArgs {
    #[arg(long, value_enum)]
    pub stat: StatArg,
    #[arg(long, value_enum)]
    pub conf: ConfArg,
    /// Dimension. A single --L or --omega value is repeated d times.
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub particle: ParticleArgs,
    /// Box side lengths, e.g. 20um or 10um,10um,40um.
    #[arg(long = "L")]
    pub l: Option<String>,
    /// Trap frequencies, e.g. 0.65,1.2,1.81Hz (Hz is a cycle frequency).
    #[arg(long)]
    pub omega: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Temperature, e.g. 1uK.
    #[arg(long = "T")]
    pub t: Option<String>,
    /// Target mean particle number; μ is solved from the equation of state.
    #[arg(long = "N")]
    pub n: Option<f64>,
    /// Chemical potential in J.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Dimensionless βμ.
    #[arg(long, allow_negative_numbers = true)]
    pub beta_mu: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FisherArgs {
    #[command(flatten)]
    pub gas: GasArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Condensed-phase entries (Bose, below T_c).
    #[arg(long)]
    pub condensed: bool,
    /// Drop ground-mode number fluctuations in the condensed phase.
    #[arg(long)]
    pub symmetry_breaking: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(subcommand)]
    pub kind: ScanKind,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Range {
    /// First grid value (with unit suffix where relevant).
    #[arg(long)]
    pub from: String,
    /// Last grid value.
    #[arg(long)]
    pub to: String,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Evenly spaced instead of logarithmic grid.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum ScanKind {
    /// Sweep temperature at fixed ⟨N⟩ and geometry.
    Temperature {
        #[command(flatten)]
        gas: GasArgs,
        #[arg(long = "N")]
        n: f64,
        #[command(flatten)]
        range: Range,
    },
    /// Sweep the isotropic box side (or trap frequency) at fixed T and ⟨N⟩.
    Size {
        #[command(flatten)]
        gas: GasArgs,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "N")]
        n: f64,
        #[command(flatten)]
        range: Range,
    },
    /// Continuum F_μμ/β² bounds for d = 1, 2, 3 against ⟨N⟩.
    Bounds {
        #[arg(long, value_enum)]
        conf: ConfArg,
        #[command(flatten)]
        range: Range,
    },
    /// Slab F_μμ/β² against ⟨N⟩ for the characteristic temperatures.
    Slab {
        #[command(flatten)]
        particle: ParticleArgs,
        /// Density, e.g. 13e12cm-3.
        #[arg(long)]
        rho: String,
        /// Anisotropy exponent, e.g. 10um-1.
        #[arg(long)]
        alpha: String,
        /// Characteristic length; defaults to λ_T.
        #[arg(long)]
        ell: Option<String>,
        #[command(flatten)]
        range: Range,
    },
    /// Weakly interacting 1D gas, F_μμ/β² against ⟨N⟩ per coupling.
    Contact {
        #[command(flatten)]
        particle: ParticleArgs,
        #[arg(long = "Lx")]
        l_x: String,
        #[arg(long = "T")]
        t: String,
        /// Couplings in J·m.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        c: Vec<f64>,
        #[command(flatten)]
        range: Range,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BatchFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub gas: GasArgs,
    /// True state for sampling; starting point when reading a batch.
    #[command(flatten)]
    pub state: StateArgs,
    /// Draws per batch.
    #[arg(long, default_value_t = 10_000)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Mode cutoff per axis (box) or level cutoff (trap).
    #[arg(long, default_value_t = 64)]
    pub max_index: usize,
    /// Fail instead of enlarging a cutoff that leaves a visible tail.
    #[arg(long)]
    pub strict_cutoff: bool,
    /// Write the first batch here.
    #[arg(long)]
    pub batch_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BatchFormat::Binary)]
    pub batch_format: BatchFormat,
    /// Estimate from an existing batch instead of sampling.
    #[arg(long, conflicts_with_all = ["batch_out", "reps"])]
    pub batch_in: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BecKind {
    Gas,
    Slab,
    Isobaric,
}

#[derive(Debug, Clone, Args)]
pub struct BecArgs {
    #[arg(long, value_enum, default_value_t = BecKind::Gas)]
    pub kind: BecKind,
    #[arg(long, value_enum)]
    pub conf: Option<ConfArg>,
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[arg(long = "L")]
    pub l: Option<String>,
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long = "N")]
    pub n: Option<f64>,
    #[arg(long = "T")]
    pub t: Option<String>,
    #[arg(long)]
    pub symmetry_breaking: bool,
    /// Slab density.
    #[arg(long)]
    pub rho: Option<String>,
    /// Slab anisotropy exponent.
    #[arg(long)]
    pub alpha: Option<String>,
    /// 2D isobaric pressure in N/m.
    #[arg(long)]
    pub pressure: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegimeArgs {
    #[command(flatten)]
    pub gas: GasArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl StatArg {
    pub fn statistics(self) -> Statistics {
        match self {
            StatArg::Bose => Statistics::Bose,
            StatArg::Fermi => Statistics::Fermi,
        }
    }
}

impl ConfArg {
    pub fn confinement(self) -> Confinement {
        match self {
            ConfArg::Box => Confinement::PeriodicBox,
            ConfArg::Dirichlet => Confinement::DirichletBox,
            ConfArg::Trap => Confinement::HarmonicTrap,
        }
    }
}

/// Resolved particle: display name and mass in kg.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub name: String,
    pub mass: f64,
}

impl ParticleArgs {
    pub fn resolve(&self) -> Result<Particle, CliError> {
        let species = match &self.species {
            Some(s) => Some(Species::parse(s).ok_or_else(|| {
                CliError::Argument(format!("unknown species '{s}', expected one of Li6, Na23, Rb87"))
            })?),
            None => None,
        };
        match (species, self.mass) {
            (_, Some(m)) if !(m > 0.0 && m.is_finite()) => argument(format!("mass must be positive, got {m}")),
            (Some(sp), Some(m)) => Ok(Particle { name: format!("{}(mass override)", sp.name()), mass: m }),
            (None, Some(m)) => Ok(Particle { name: "custom".into(), mass: m }),
            (Some(sp), None) => Ok(Particle { name: sp.name().into(), mass: sp.mass() }),
            (None, None) => argument("give --species or --mass"),
        }
    }
}

/// Geometry list expanded to `d` entries.
pub fn geometry(conf: ConfArg, d: Option<usize>, l: Option<&str>, omega: Option<&str>) -> Result<Vec<f64>, CliError> {
    let g = match (conf, l, omega) {
        (ConfArg::Trap, _, Some(w)) => parse_list(w, Dim::Frequency)?,
        (ConfArg::Trap, _, None) => return argument("a trap needs --omega"),
        (_, Some(l), _) => parse_list(l, Dim::Length)?,
        (_, None, _) => return argument("a box needs --L"),
    };
    match (d, g.len()) {
        (None, _) => Ok(g),
        (Some(d), 1) => Ok(vec![g[0]; d]),
        (Some(d), n) if n == d => Ok(g),
        (Some(d), n) => argument(format!("--d {d} does not match {n} geometry values")),
    }
}

/// Resolved gas with the particle it was built from.
#[derive(Debug, Clone)]
pub struct Gas {
    pub spec: GasSpec,
    pub particle: Particle,
}

impl GasArgs {
    pub fn resolve(&self) -> Result<Gas, CliError> {
        let particle = self.particle.resolve()?;
        let g = geometry(self.conf, self.d, self.l.as_deref(), self.omega.as_deref())?;
        let spec = GasSpec::new(self.stat.statistics(), self.conf.confinement(), &g, particle.mass, UnitSystem::SI)?;
        Ok(Gas { spec, particle })
    }

    /// Gas with every axis set to `extent`; --L/--omega may be omitted if --d is given.
    pub fn resolve_isotropic(&self, extent: f64) -> Result<Gas, CliError> {
        let particle = self.particle.resolve()?;
        let d = match self.d {
            Some(d) => d,
            None => geometry(self.conf, None, self.l.as_deref(), self.omega.as_deref())?.len(),
        };
        let spec = GasSpec::new(self.stat.statistics(), self.conf.confinement(), &vec![extent; d], particle.mass, UnitSystem::SI)?;
        Ok(Gas { spec, particle })
    }
}

pub fn temperature(s: &str) -> Result<f64, CliError> {
    let t = parse(s, Dim::Temperature)?;
    if !(t > 0.0) {
        return argument(format!("temperature must be positive, got {s}"));
    }
    Ok(t)
}

/// How the chemical potential was fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuSource {
    Target(f64),
    Given,
}

impl StateArgs {
    pub fn temperature(&self) -> Result<f64, CliError> {
        match &self.t {
            Some(t) => temperature(t),
            None => argument("--T is required"),
        }
    }

    /// Thermodynamic point from --T and one of --N, --mu, --beta-mu.
    pub fn resolve(&self, spec: &GasSpec) -> Result<(ThermoPoint, MuSource), CliError> {
        let t = self.temperature()?;
        let beta = UnitSystem::SI.beta_from_temperature(t);
        let given = [self.n.is_some(), self.mu.is_some(), self.beta_mu.is_some()].iter().filter(|b| **b).count();
        if given != 1 {
            return argument("give exactly one of --N, --mu, --beta-mu");
        }
        let mu = match (self.n, self.mu, self.beta_mu) {
            (Some(n), _, _) => {
                let pt = qgf_core::solve_mu(spec, beta, n)?;
                return Ok((pt, MuSource::Target(n)));
            }
            (_, Some(mu), _) => mu,
            (_, _, Some(x)) => x / beta,
            _ => unreachable!(),
        };
        if spec.statistics == Statistics::Bose && mu >= 0.0 {
            return Err(CliError::MuDomain(mu));
        }
        Ok((ThermoPoint::new(beta, mu)?, MuSource::Given))
    }
}
