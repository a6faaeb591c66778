//! Physical constants, unit systems and the species table.

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (exact).
pub const K_B_SI: f64 = 1.380_649e-23;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;

/// SI, or reduced units with ℏ = k_B = 1 (masses then usually set to 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    #[default]
    SI,
    Reduced,
}

impl UnitSystem {
    pub fn hbar(self) -> f64 {
        match self {
            UnitSystem::SI => HBAR_SI,
            UnitSystem::Reduced => 1.0,
        }
    }

    pub fn kb(self) -> f64 {
        match self {
            UnitSystem::SI => K_B_SI,
            UnitSystem::Reduced => 1.0,
        }
    }

    /// β = 1/(k_B T).
    pub fn beta_from_temperature(self, t: f64) -> f64 {
        1.0 / (self.kb() * t)
    }

    pub fn temperature_from_beta(self, beta: f64) -> f64 {
        1.0 / (self.kb() * beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Li6,
    Na23,
    Rb87,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::Li6, Species::Na23, Species::Rb87];

    /// Atomic mass in kg.
    pub fn mass(self) -> f64 {
        let u = match self {
            Species::Li6 => 6.015_122_887_4,
            Species::Na23 => 22.989_769_282,
            Species::Rb87 => 86.909_180_527,
        };
        u * AMU
    }

    pub fn name(self) -> &'static str {
        match self {
            Species::Li6 => "Li6",
            Species::Na23 => "Na23",
            Species::Rb87 => "Rb87",
        }
    }

    pub fn parse(s: &str) -> Option<Species> {
        Species::ALL.into_iter().find(|sp| sp.name() == s)
    }
}
