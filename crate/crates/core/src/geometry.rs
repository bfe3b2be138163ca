//! Schwarzschild horizon quantities and the dimensionless unit system.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{self, Constants};
use crate::error::{Error, Result};

/// How quantities are presented at the boundary of the program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Dimensionless,
    #[serde(rename = "si")]
    SI,
}

/// Scale factors between the dimensionless system (`r_g = c = 1`) and SI.
///
/// Lengths are measured in `r_g`, times in `r_g / c`, angular frequencies in
/// `c / r_g` and accelerations in `c^2 / r_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub r_g_meters: f64,
    pub mode: UnitMode,
}

impl UnitSystem {
    pub fn new(r_g_meters: f64, mode: UnitMode) -> Result<Self> {
        if !(r_g_meters > 0.0 && r_g_meters.is_finite()) {
            return Err(Error::domain(
                "UnitSystem::new",
                format!("r_g must be positive and finite, got {r_g_meters}"),
            ));
        }
        Ok(UnitSystem { r_g_meters, mode })
    }

    pub fn for_mass_kg(mass_kg: f64, mode: UnitMode) -> Result<Self> {
        Self::new(gravitational_radius(mass_kg)?, mode)
    }

    fn time_scale(&self) -> f64 {
        self.r_g_meters / constants::C
    }

    pub fn length_to_si(&self, r: f64) -> f64 {
        r * self.r_g_meters
    }

    pub fn length_from_si(&self, meters: f64) -> f64 {
        meters / self.r_g_meters
    }

    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.time_scale()
    }

    pub fn time_from_si(&self, seconds: f64) -> f64 {
        seconds / self.time_scale()
    }

    pub fn frequency_to_si(&self, nu: f64) -> f64 {
        nu / self.time_scale()
    }

    pub fn frequency_from_si(&self, rad_per_s: f64) -> f64 {
        rad_per_s * self.time_scale()
    }

    pub fn acceleration_to_si(&self, a: f64) -> f64 {
        a * constants::C * constants::C / self.r_g_meters
    }

    /// Frequency in the presentation units selected by `mode`.
    pub fn present_frequency(&self, nu: f64) -> f64 {
        match self.mode {
            UnitMode::Dimensionless => nu,
            UnitMode::SI => self.frequency_to_si(nu),
        }
    }
}

fn check_mass(op: &'static str, mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("mass must be positive, got {mass}")))
    }
}

/// `2 G M / c^2` in meters.
pub fn gravitational_radius(mass_kg: f64) -> Result<f64> {
    check_mass("gravitational_radius", mass_kg)?;
    Ok(2.0 * constants::G * mass_kg / (constants::C * constants::C))
}

/// Hawking temperature in kelvin for a mass in kilograms.
pub fn hawking_temperature(mass_kg: f64) -> Result<f64> {
    Ok(BlackHole::new(mass_kg, Constants::SI)?.hawking_temperature())
}

/// Horizon area in square meters for a mass in kilograms.
pub fn horizon_area(mass_kg: f64) -> Result<f64> {
    Ok(BlackHole::new(mass_kg, Constants::SI)?.area())
}

/// Entropy rate of the hole evaluated through both algebraic forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRate {
    /// `k_B (8 pi G / hbar c) M dM/dt`
    pub via_mass: f64,
    /// `(k_B c^3 / 4 hbar G) dA/dt`
    pub via_area: f64,
    pub area_rate: f64,
}

/// A Schwarzschild hole of a given mass, with the constant set its mass is
/// expressed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHole {
    mass: f64,
    constants: Constants,
}

impl BlackHole {
    pub fn new(mass: f64, constants: Constants) -> Result<Self> {
        check_mass("BlackHole::new", mass)?;
        Ok(BlackHole { mass, constants })
    }

    pub fn solar(solar_masses: f64) -> Result<Self> {
        Self::new(solar_masses * constants::SOLAR_MASS, Constants::SI)
    }

    /// Unit mass in [`Constants::HORIZON`]: `r_g = c = hbar = k_B = 1`.
    pub fn horizon_units() -> Self {
        BlackHole {
            mass: 1.0,
            constants: Constants::HORIZON,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn gravitational_radius(&self) -> f64 {
        let k = &self.constants;
        2.0 * k.g * self.mass / (k.c * k.c)
    }

    /// `4 pi r_g^2`.
    pub fn area(&self) -> f64 {
        let r_g = self.gravitational_radius();
        4.0 * PI * r_g * r_g
    }

    /// `16 pi G^2 M^2 / c^4`, written out independently of [`Self::area`].
    pub fn area_from_mass(&self) -> f64 {
        let k = &self.constants;
        16.0 * PI * k.g * k.g * self.mass * self.mass / k.c.powi(4)
    }

    pub fn hawking_temperature(&self) -> f64 {
        let k = &self.constants;
        k.hbar * k.c.powi(3) / (8.0 * PI * k.k_b * k.g * self.mass)
    }

    /// `k_B c^3 / (4 hbar G)`: entropy per unit horizon area.
    pub fn entropy_per_area(&self) -> f64 {
        let k = &self.constants;
        k.k_b * k.c.powi(3) / (4.0 * k.hbar * k.g)
    }

    /// `dA/dt = 32 pi G^2 M dM/dt / c^4`.
    pub fn area_rate(&self, mass_rate: f64) -> f64 {
        let k = &self.constants;
        32.0 * PI * k.g * k.g * self.mass * mass_rate / k.c.powi(4)
    }

    pub fn entropy_rate(&self, mass_rate: f64) -> EntropyRate {
        let k = &self.constants;
        let via_mass = k.k_b * 8.0 * PI * k.g / (k.hbar * k.c) * self.mass * mass_rate;
        let area_rate = self.area_rate(mass_rate);
        EntropyRate {
            via_mass,
            via_area: self.entropy_per_area() * area_rate,
            area_rate,
        }
    }

    pub fn unit_system(&self, mode: UnitMode) -> Result<UnitSystem> {
        UnitSystem::new(self.gravitational_radius(), mode)
    }
}

/// Entropy rate for an SI mass and mass rate.
pub fn bh_entropy_rate(mass_kg: f64, mass_rate: f64) -> Result<EntropyRate> {
    Ok(BlackHole::new(mass_kg, Constants::SI)?.entropy_rate(mass_rate))
}

/// Regge-Wheeler coordinate `r* = r + ln(r - 1)`, dimensionless.
pub fn tortoise(r: f64) -> Result<f64> {
    if !(r > 1.0) {
        return Err(Error::domain(
            "tortoise",
            format!("radius must exceed the horizon (r > 1), got {r}"),
        ));
    }
    Ok(r + (r - 1.0).ln())
}

/// `r*` as a function of the horizon offset `delta = r - 1`. Keeps full
/// precision when `r` is too close to one to be represented as `1 + delta`.
pub fn tortoise_from_offset(delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::domain(
            "tortoise_from_offset",
            format!("horizon offset must be positive, got {delta}"),
        ));
    }
    Ok(1.0 + delta + delta.ln())
}

/// Horizon offset `delta = r - 1` with `1 + delta + ln(delta) = r_star`.
///
/// Newton iteration on `s = ln(delta)`, where the residual is convex and
/// increasing, with a bisection fallback.
pub fn tortoise_inverse_offset(r_star: f64) -> Result<f64> {
    if !r_star.is_finite() {
        return Err(Error::domain(
            "tortoise_inverse",
            format!("r* must be finite, got {r_star}"),
        ));
    }
    let f = |s: f64| 1.0 + s.exp() + s - r_star;
    let df = |s: f64| s.exp() + 1.0;

    let seed = (r_star - 1.0).max((r_star - 1.0).exp());
    let mut s = if seed > 0.0 && r_star > 2.0 {
        seed.ln()
    } else {
        r_star - 1.0
    };
    for _ in 0..100 {
        let step = f(s) / df(s);
        s -= step;
        if step.abs() <= 1e-15 * s.abs().max(1.0) {
            return Ok(s.exp());
        }
    }

    // Bisection: f(r* - 1) = e^(r* - 1) > 0, so the root lies below.
    let mut hi = if r_star > 2.0 { r_star.ln() } else { r_star - 1.0 };
    let mut lo = hi - 1.0;
    let mut width = 1.0;
    while f(lo) >= 0.0 {
        width *= 2.0;
        lo = hi - width;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    if f(s).abs() > 1e-9 * r_star.abs().max(1.0) {
        return Err(Error::NonConvergence {
            op: "tortoise_inverse",
            msg: format!("residual {} at r* = {r_star}", f(s)),
        });
    }
    Ok(s.exp())
}

/// Radius `r > 1` with `tortoise(r) = r_star`.
pub fn tortoise_inverse(r_star: f64) -> Result<f64> {
    Ok(1.0 + tortoise_inverse_offset(r_star)?)
}

/// Proper acceleration of a static observer at `r_bar`, dimensionless
/// (`c = r_g = 1`): `a = (1/2) (1 - 1/r_bar)^(-1/2)`.
pub fn rindler_static_acceleration(r_bar: f64) -> Result<f64> {
    if !(r_bar > 1.0) {
        return Err(Error::domain(
            "rindler_static_acceleration",
            format!("r_bar must exceed the horizon, got {r_bar}"),
        ));
    }
    Ok(0.5 / (1.0 - 1.0 / r_bar).sqrt())
}

/// Acceleration `c^2 / z_bar` of a fixed Rindler coordinate, dimensionless.
pub fn rindler_acceleration_from_z(z_bar: f64) -> Result<f64> {
    if !(z_bar > 0.0) {
        return Err(Error::domain(
            "rindler_acceleration_from_z",
            format!("z_bar must be positive, got {z_bar}"),
        ));
    }
    Ok(1.0 / z_bar)
}

/// Near-horizon Rindler coordinate map `r_bar = 1 + z_bar^2 / 4`.
pub fn radius_from_rindler_z(z_bar: f64) -> f64 {
    1.0 + 0.25 * z_bar * z_bar
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solar_mass_temperature_and_area() {
        // Independent high-precision evaluation with CODATA-2018 constants.
        let t = hawking_temperature(constants::SOLAR_MASS).unwrap();
        assert_relative_eq!(t, 6.168_677_824_358_302e-8, max_relative = 1e-12);
        let a = horizon_area(constants::SOLAR_MASS).unwrap();
        assert_relative_eq!(a, 1.096_561_820_541_234_7e8, max_relative = 1e-12);
    }

    #[test]
    fn temperature_scales_inversely_with_mass() {
        let m = 3.0e31;
        let t1 = hawking_temperature(m).unwrap();
        let t2 = hawking_temperature(2.0 * m).unwrap();
        assert_eq!(t1, 2.0 * t2);
        let p1 = t1 * m;
        let p10 = hawking_temperature(10.0 * m).unwrap() * 10.0 * m;
        assert_relative_eq!(p1, p10, max_relative = 1e-12);
    }

    #[test]
    fn area_scaling_and_definition() {
        let bh = BlackHole::new(5.0e30, Constants::SI).unwrap();
        let bh2 = BlackHole::new(1.0e31, Constants::SI).unwrap();
        assert_relative_eq!(bh2.area(), 4.0 * bh.area(), max_relative = 1e-14);
        let r_g = bh.gravitational_radius();
        assert_relative_eq!(bh.area() / (4.0 * PI * r_g * r_g), 1.0, max_relative = 1e-15);
        assert_relative_eq!(bh.area(), bh.area_from_mass(), max_relative = 1e-14);
    }

    #[test]
    fn non_positive_mass_rejected() {
        assert!(hawking_temperature(0.0).is_err());
        assert!(horizon_area(-1.0).is_err());
        assert!(BlackHole::new(f64::NAN, Constants::SI).is_err());
    }

    #[test]
    fn entropy_rate_forms_agree() {
        let bh = BlackHole::new(1.0, Constants::GEOMETRIZED).unwrap();
        let rate = bh.entropy_rate(1e-6);
        assert_relative_eq!(rate.via_mass, rate.via_area, max_relative = 1e-12);
        assert_eq!(bh.entropy_rate(0.0).via_mass, 0.0);
        assert!(bh.entropy_rate(-1e-3).via_area < 0.0);

        let si = bh_entropy_rate(constants::SOLAR_MASS, 1e3).unwrap();
        assert_relative_eq!(si.via_mass, si.via_area, max_relative = 1e-12);
    }

    #[test]
    fn entropy_per_area_is_mass_independent() {
        let ratios: Vec<f64> = [1e29, 2e30, 7e33]
            .iter()
            .map(|&m| {
                let r = bh_entropy_rate(m, 1.0).unwrap();
                r.via_mass / r.area_rate
            })
            .collect();
        let k = &Constants::SI;
        let expected = k.k_b * k.c.powi(3) / (4.0 * k.hbar * k.g);
        for r in ratios {
            assert_relative_eq!(r, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn tortoise_examples() {
        assert_eq!(tortoise(2.0).unwrap(), 2.0);
        let e = std::f64::consts::E;
        assert_relative_eq!(tortoise(1.0 + e).unwrap(), 2.0 + e, max_relative = 1e-15);
        assert!(tortoise(1.0).is_err());
        assert!(tortoise(0.5).is_err());
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let r = 1.0 + 10f64.powi(-k);
            let rs = tortoise(r).unwrap();
            assert!(rs < prev);
            prev = rs;
        }
        assert!(prev < -24.0);
    }

    #[test]
    fn tortoise_inverse_round_trips() {
        assert_relative_eq!(tortoise_inverse(2.0).unwrap(), 2.0, max_relative = 1e-14);
        for r in [1.001, 1.5, 10.0, 1e4] {
            let back = tortoise_inverse(tortoise(r).unwrap()).unwrap();
            assert_relative_eq!(back, r, max_relative = 1e-10);
        }
        for rs in [-700.0, -20.0, -3.0, 0.0, 1.5, 40.0, 1e6] {
            let d = tortoise_inverse_offset(rs).unwrap();
            let resid = tortoise_from_offset(d).unwrap() - rs;
            assert!(resid.abs() < 1e-12 * rs.abs().max(1.0), "r*={rs} resid={resid}");
        }
    }

    #[test]
    fn tortoise_inverse_deep_horizon_matches_bisection() {
        // Plain bisection on delta in log space as an independent oracle.
        let rs: f64 = -20.0;
        let (mut lo, mut hi) = (-40.0f64, 0.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 1.0 + mid.exp() + mid > rs {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = (0.5 * (lo + hi)).exp();
        let d = tortoise_inverse_offset(rs).unwrap();
        assert_relative_eq!(d, oracle, max_relative = 1e-12);
        // delta ~ e^(r* - 1) for deep r*.
        assert_relative_eq!(d, (rs - 1.0).exp(), max_relative = 1e-8);
    }

    #[test]
    fn tortoise_derivative_positive() {
        let h = 1e-6;
        for i in 0..20 {
            let r = 1.05 + 0.5 * i as f64 * (1.0 + i as f64);
            let fd = (tortoise(r + h).unwrap() - tortoise(r - h).unwrap()) / (2.0 * h);
            let exact = 1.0 + 1.0 / (r - 1.0);
            assert!(fd > 0.0);
            assert_relative_eq!(fd, exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn static_acceleration_limits() {
        let far = rindler_static_acceleration(1e12).unwrap();
        assert_relative_eq!(far, 0.5, max_relative = 1e-11);
        let mut prev = 0.0;
        for k in 1..10 {
            let a = rindler_static_acceleration(1.0 + 10f64.powi(-k)).unwrap();
            assert!(a > prev);
            prev = a;
        }
        assert!(prev > 1e3);
        assert!(rindler_static_acceleration(1.0).is_err());
    }

    #[test]
    fn near_horizon_acceleration_matches_rindler_form() {
        // a(r_bar(z)) = sqrt(1 + z^2/4)/z = 1/z + z/8 - z^3/128 + ...
        // Much smaller z loses digits forming r_bar = 1 + z^2/4.
        for z in [0.02, 0.05, 0.1] {
            let a = rindler_static_acceleration(radius_from_rindler_z(z)).unwrap();
            let rindler = rindler_acceleration_from_z(z).unwrap();
            assert_relative_eq!(a, rindler, max_relative = z * z);
            let series = 1.0 / z + z / 8.0;
            assert!((a - series).abs() < z.powi(3));
        }
    }

    #[test]
    fn unit_round_trips() {
        let us = UnitSystem::for_mass_kg(constants::SOLAR_MASS, UnitMode::SI).unwrap();
        for v in [1e-6, 0.3, 1.0, 42.0, 1e9] {
            assert_relative_eq!(us.length_from_si(us.length_to_si(v)), v, max_relative = 1e-12);
            assert_relative_eq!(us.time_from_si(us.time_to_si(v)), v, max_relative = 1e-12);
            assert_relative_eq!(
                us.frequency_from_si(us.frequency_to_si(v)),
                v,
                max_relative = 1e-12
            );
        }
        assert!(UnitSystem::new(0.0, UnitMode::SI).is_err());
    }
}
