//! Excitation and absorption probabilities of an infalling two-level atom
//! coupled to one outgoing field mode.
//!
//! Two independent routes are provided. The numeric route evaluates the
//! first-order amplitude
//!
//! ```text
//! P_exc = (g^2 / omega^2) | int_0^inf dx exp(-i nu phi(x)) exp(-i x) |^2
//! ```
//!
//! by regulated quadrature extrapolated to zero regulator. The closed form
//! is the large-`omega` asymptote
//!
//! ```text
//! P_exc = 4 pi g^2 nu / (omega^2 (1 + 2 nu/omega)^2) * 1 / (e^(4 pi nu) - 1).
//! ```
//!
//! Absorption follows from `nu -> -nu`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitSystem;
use crate::quadrature::{self, RegulatedSettings};
use crate::special;
use crate::trajectory::InfallTrajectory;

/// Probabilities above this value strain first-order perturbation theory.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// One outgoing field mode, frequencies in units of `c / r_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub nu: f64,
    /// Angular index; only enters the potential diagnostic.
    pub ell: u32,
    /// Atom-field coupling.
    pub g: f64,
}

impl ModeSpec {
    pub fn new(nu: f64, ell: u32, g: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::domain(
                "ModeSpec::new",
                format!("mode frequency must be positive, got {nu}"),
            ));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::domain(
                "ModeSpec::new",
                format!("coupling must be positive, got {g}"),
            ));
        }
        Ok(ModeSpec { nu, ell, g })
    }

    /// Mode with a given `xi = 2 pi nu`.
    pub fn from_xi(xi: f64, ell: u32, g: f64) -> Result<Self> {
        Self::new(xi / (2.0 * PI), ell, g)
    }

    /// `xi = 2 pi nu r_g / c`, i.e. `2 pi nu` in dimensionless units.
    pub fn xi(&self) -> f64 {
        2.0 * PI * self.nu
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub omega: f64,
}

impl AtomSpec {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(
                "AtomSpec::new",
                format!("transition frequency must be positive, got {omega}"),
            ));
        }
        Ok(AtomSpec { omega })
    }

    /// Whether the large-`omega` asymptotics are expected to hold for `mode`.
    pub fn asymptotic_regime(&self, mode: &ModeSpec) -> bool {
        self.omega >= 10.0 && self.omega >= 10.0 * mode.nu
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    /// Largest regulator; the ladder halves from here when `eps_ladder`
    /// is empty.
    pub regulator_eps: f64,
    pub eps_ladder: Vec<f64>,
    pub ladder_len: usize,
    pub x_max: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub panel_width: f64,
    pub gauss_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            regulator_eps: 1e-2,
            eps_ladder: Vec::new(),
            ladder_len: 5,
            x_max: None,
            abs_tol: 1e-12,
            rel_tol: 1e-6,
            panel_width: 1.0,
            gauss_order: 24,
        }
    }
}

impl QuadratureConfig {
    /// The explicit ladder, or `regulator_eps` halved `ladder_len - 1` times.
    pub fn ladder(&self) -> Vec<f64> {
        if !self.eps_ladder.is_empty() {
            return self.eps_ladder.clone();
        }
        (0..self.ladder_len)
            .map(|k| self.regulator_eps / 2f64.powi(k as i32))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let ladder = self.ladder();
        if ladder.len() < 2 {
            return Err(Error::domain(
                "QuadratureConfig",
                "extrapolation needs at least two regulator values",
            ));
        }
        if ladder.iter().any(|&e| !(e > 0.0)) || ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::domain(
                "QuadratureConfig",
                "regulator ladder must be positive and strictly decreasing",
            ));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::domain("QuadratureConfig", "tolerances must be positive"));
        }
        if !(self.panel_width > 0.0) || self.gauss_order < 2 {
            return Err(Error::domain(
                "QuadratureConfig",
                "panel width must be positive and Gauss order at least 2",
            ));
        }
        Ok(())
    }

    fn settings(&self) -> RegulatedSettings {
        RegulatedSettings {
            eps_ladder: self.ladder(),
            abs_tol: self.abs_tol,
            x_max: self.x_max,
            x_split: 1.0,
            panel_width: self.panel_width,
            order: self.gauss_order,
        }
    }
}

/// A probability with its quality flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probability {
    pub value: f64,
    /// Error estimate (zero for closed forms).
    pub error: f64,
    /// Extrapolation error within `rel_tol` (always true for closed forms).
    pub converged: bool,
    /// `value < PERTURBATIVE_LIMIT`.
    pub perturbative: bool,
}

impl Probability {
    fn exact(value: f64) -> Self {
        Probability {
            value,
            error: 0.0,
            converged: true,
            perturbative: value < PERTURBATIVE_LIMIT,
        }
    }
}

/// Value of the phase function; `x = 0` is a logarithmic singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Finite(f64),
    LogSingular,
}

impl Phase {
    pub fn value(self) -> Option<f64> {
        match self {
            Phase::Finite(v) => Some(v),
            Phase::LogSingular => None,
        }
    }
}

/// `(1 + 3x/(2 omega))^(1/3)` and that quantity minus one, the latter free
/// of cancellation for small `x / omega`.
fn cube_root_parts(x: f64, omega: f64) -> (f64, f64) {
    let l = (1.5 * x / omega).ln_1p() / 3.0;
    (l.exp(), l.exp_m1())
}

fn phase_unchecked(x: f64, omega: f64) -> f64 {
    let (c, cm1) = cube_root_parts(x, omega);
    x / omega + c * c + 2.0 * c + 2.0 * cm1.ln()
}

/// `phi(x) = x/omega + u^2 + 2u + 2 ln(u - 1)`, `u = (1 + 3x/(2 omega))^(1/3)`.
pub fn phase_phi(x: f64, omega: f64) -> Result<Phase> {
    if !(omega > 0.0) || !(x >= 0.0) {
        return Err(Error::domain(
            "phase_phi",
            format!("need x >= 0 and omega > 0, got x = {x}, omega = {omega}"),
        ));
    }
    if x == 0.0 {
        return Ok(Phase::LogSingular);
    }
    Ok(Phase::Finite(phase_unchecked(x, omega)))
}

/// Leading large-`omega` form `3 + 2 ln(x / 2 omega) + 2x / omega`.
pub fn phase_phi_leading(x: f64, omega: f64) -> f64 {
    3.0 + 2.0 * (x / (2.0 * omega)).ln() + 2.0 * x / omega
}

/// Amplitude integral `int_0^inf exp(-i nu_signed phi(x) - i x) dx`;
/// `nu_signed < 0` gives the absorption amplitude.
pub fn amplitude_integral(
    omega: f64,
    nu_signed: f64,
    cfg: &QuadratureConfig,
) -> Result<quadrature::Extrapolated> {
    cfg.validate()?;
    quadrature::regulated_half_line(
        |x| Complex64::new(0.0, -(nu_signed * phase_unchecked(x, omega) + x)).exp(),
        &cfg.settings(),
    )
}

fn probability_from_amplitude(
    amp: &quadrature::Extrapolated,
    prefactor: f64,
    rel_tol: f64,
) -> Probability {
    let norm = amp.value.norm();
    let value = prefactor * norm * norm;
    let error = prefactor * (2.0 * norm * amp.error + amp.error * amp.error);
    Probability {
        value,
        error,
        converged: error <= rel_tol * value,
        perturbative: value < PERTURBATIVE_LIMIT,
    }
}

fn check_inputs(op: &'static str, atom: &AtomSpec, mode: &ModeSpec) -> Result<()> {
    if !(atom.omega > 0.0 && mode.nu > 0.0 && mode.g > 0.0) {
        return Err(Error::domain(
            op,
            format!(
                "need omega, nu, g > 0, got omega = {}, nu = {}, g = {}",
                atom.omega, mode.nu, mode.g
            ),
        ));
    }
    Ok(())
}

/// Excitation probability by regulated quadrature.
pub fn excitation_probability_numeric(
    atom: &AtomSpec,
    mode: &ModeSpec,
    cfg: &QuadratureConfig,
) -> Result<Probability> {
    check_inputs("excitation_probability_numeric", atom, mode)?;
    let amp = amplitude_integral(atom.omega, mode.nu, cfg)?;
    Ok(probability_from_amplitude(
        &amp,
        (mode.g / atom.omega).powi(2),
        cfg.rel_tol,
    ))
}

/// Which closed-form expression to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormVariant {
    /// Keeps the `(1 + 2 nu/omega)^-2` factor.
    #[default]
    Full,
    /// `omega >> nu`: the factor is dropped.
    AtomDominant,
}

/// Large-`omega` closed form of the excitation probability.
pub fn excitation_probability_closed_form(
    atom: &AtomSpec,
    mode: &ModeSpec,
    variant: ClosedFormVariant,
) -> Result<Probability> {
    check_inputs("excitation_probability_closed_form", atom, mode)?;
    let nu = mode.nu;
    let planck = 4.0 * PI * nu * special::planck_factor(4.0 * PI * nu);
    let base = (mode.g / atom.omega).powi(2) * planck;
    let value = match variant {
        ClosedFormVariant::Full => base / (1.0 + 2.0 * nu / atom.omega).powi(2),
        ClosedFormVariant::AtomDominant => base,
    };
    Ok(Probability::exact(value))
}

/// The `omega >> nu` closed form in SI inputs: coupling and transition
/// frequency in rad/s, mode frequency in rad/s.
pub fn excitation_probability_dimensional(
    g_si: f64,
    omega_si: f64,
    nu_si: f64,
    units: &UnitSystem,
) -> Result<f64> {
    if !(g_si > 0.0 && omega_si > 0.0 && nu_si > 0.0) {
        return Err(Error::domain(
            "excitation_probability_dimensional",
            "coupling and frequencies must be positive",
        ));
    }
    let x = 4.0 * PI * units.r_g_meters * nu_si / crate::constants::C;
    Ok(g_si * g_si / (omega_si * omega_si) * x * special::planck_factor(x))
}

/// Method selector for [`absorption_probability`].
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Numeric(QuadratureConfig),
    Closed(ClosedFormVariant),
}

/// Absorption probability.
///
/// Numeric: the amplitude integral with `nu -> -nu`. Closed:
/// `e^(4 pi nu) P_exc` for the selected variant.
pub fn absorption_probability(
    atom: &AtomSpec,
    mode: &ModeSpec,
    method: &Method,
) -> Result<Probability> {
    check_inputs("absorption_probability", atom, mode)?;
    match method {
        Method::Numeric(cfg) => {
            let amp = amplitude_integral(atom.omega, -mode.nu, cfg)?;
            Ok(probability_from_amplitude(
                &amp,
                (mode.g / atom.omega).powi(2),
                cfg.rel_tol,
            ))
        }
        Method::Closed(variant) => {
            let exc = excitation_probability_closed_form(atom, mode, *variant)?;
            Ok(Probability::exact((4.0 * PI * mode.nu).exp() * exc.value))
        }
    }
}

/// Excitation probability with the integrand assembled directly from the
/// infall closed forms `tau(r)`, `t(r)` and `r*(r)`, including the chosen
/// integration constants.
///
/// Integrates `g^2 | int dr sqrt(r) exp(i [nu (t - r*) + omega tau]) |^2`
/// in the variable `x = (2 omega / 3)(r^(3/2) - 1)`.
pub fn excitation_probability_along_trajectory(
    atom: &AtomSpec,
    mode: &ModeSpec,
    trajectory: &InfallTrajectory,
    cfg: &QuadratureConfig,
) -> Result<Probability> {
    check_inputs("excitation_probability_along_trajectory", atom, mode)?;
    cfg.validate()?;
    let omega = atom.omega;
    let nu = mode.nu;
    let amp = quadrature::regulated_half_line(
        |x| {
            // sqrt(r) = (1 + 3x/(2 omega))^(1/3).
            let (_, s_m1) = cube_root_parts(x, omega);
            let p = trajectory.point_from_sqrt_offset(s_m1);
            Complex64::new(0.0, nu * (p.t - p.r_star) + omega * p.tau).exp()
        },
        &cfg.settings(),
    )?;
    // dr sqrt(r) = (2/3) d(r^(3/2)) = dx / omega.
    Ok(probability_from_amplitude(
        &amp,
        (mode.g / omega).powi(2),
        cfg.rel_tol,
    ))
}

/// Regge-Wheeler potential with the angular eigenvalue `-l(l+1)`:
/// `V = (1 - 1/r)(1/r^3 + l(l+1)/r^2)`.
pub fn effective_potential(r: f64, ell: u32) -> Result<f64> {
    if !(r > 1.0) {
        return Err(Error::domain(
            "effective_potential",
            format!("radius must exceed the horizon, got {r}"),
        ));
    }
    let l = ell as f64;
    Ok((1.0 - 1.0 / r) * (1.0 / r.powi(3) + l * (l + 1.0) / (r * r)))
}

/// Location and height of the potential barrier, by golden-section search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialPeak {
    pub r: f64,
    pub v_max: f64,
}

pub fn potential_peak(ell: u32, tol: f64) -> Result<PotentialPeak> {
    // The barrier sits between r = 4/3 (l = 0) and r = 3/2 (l -> inf).
    let v = |r: f64| effective_potential(r, ell).unwrap_or(f64::NEG_INFINITY);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1.0 + 1e-9, 4.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (v(c), v(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = v(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = v(d);
        }
    }
    let r = 0.5 * (a + b);
    Ok(PotentialPeak {
        r,
        v_max: effective_potential(r, ell)?,
    })
}

/// `V_max / nu^2`: small values justify dropping the potential.
pub fn high_frequency_validity(mode: &ModeSpec) -> Result<f64> {
    let peak = potential_peak(mode.ell, 1e-10)?;
    Ok(peak.v_max / (mode.nu * mode.nu))
}
