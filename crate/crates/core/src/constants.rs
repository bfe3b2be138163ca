//! Physical constants (CODATA 2018 exact/recommended values).

/// Tag written into report provenance.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";

/// Newtonian constant of gravitation, m^3 kg^-1 s^-2.
pub const G: f64 = 6.674_30e-11;
/// Speed of light in vacuum, m s^-1 (exact).
pub const C: f64 = 299_792_458.0;
/// Reduced Planck constant, J s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J K^-1 (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Nominal solar mass, kg.
pub const SOLAR_MASS: f64 = 1.988_92e30;

/// A consistent set of the four constants entering horizon thermodynamics.
///
/// [`Constants::SI`] is the CODATA set. [`Constants::GEOMETRIZED`] sets all
/// four to one, which is convenient for algebraic identity checks.
/// [`Constants::HORIZON`] takes `G = 1/2` so that a unit mass has `r_g = 1`,
/// matching the dimensionless units used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub g: f64,
    pub c: f64,
    pub hbar: f64,
    pub k_b: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        g: G,
        c: C,
        hbar: HBAR,
        k_b: K_B,
    };

    pub const GEOMETRIZED: Constants = Constants {
        g: 1.0,
        c: 1.0,
        hbar: 1.0,
        k_b: 1.0,
    };

    pub const HORIZON: Constants = Constants {
        g: 0.5,
        c: 1.0,
        hbar: 1.0,
        k_b: 1.0,
    };
}

impl Default for Constants {
    fn default() -> Self {
        Constants::SI
    }
}
