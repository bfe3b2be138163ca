//! Worldlines: radial free fall from rest at infinity (dimensionless
//! Schwarzschild coordinates) and uniformly accelerated motion in flat space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry;
use crate::ode::Dopri5;

/// Closest approach to the horizon used for coordinate-time integration.
pub const HORIZON_CUTOFF: f64 = 1.0 + 1e-6;

/// `sqrt(r) - 1` without cancellation near `r = 1`.
fn sqrt_r_minus_one(r: f64) -> f64 {
    (r - 1.0) / (r.sqrt() + 1.0)
}

/// Radial infall from rest at infinity, parameterised by the areal radius.
///
/// The two offsets are the free integration constants of the proper-time
/// and coordinate-time closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfallTrajectory {
    pub tau_offset: f64,
    pub t_offset: f64,
}

impl Default for InfallTrajectory {
    /// Horizon crossing at `tau = 0`; `t = 0` at `r = 4`.
    fn default() -> Self {
        InfallTrajectory {
            tau_offset: 2.0 / 3.0,
            t_offset: 16.0 / 3.0 + 4.0 - 3f64.ln(),
        }
    }
}

/// Closed-form state at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfallPoint {
    pub r: f64,
    pub tau: f64,
    pub t: f64,
    pub r_star: f64,
}

/// One point of a sampled infall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicSample {
    pub r: f64,
    pub tau: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicRun {
    pub samples: Vec<GeodesicSample>,
    /// Integration stopped before `r_end` (horizon cutoff or step collapse).
    pub truncated: bool,
    pub max_residual_tau: f64,
    pub max_residual_t: f64,
}

impl InfallTrajectory {
    pub fn new(tau_offset: f64, t_offset: f64) -> Self {
        InfallTrajectory {
            tau_offset,
            t_offset,
        }
    }

    /// `tau(r) = -(2/3) r^(3/2) + tau_offset`.
    pub fn proper_time_at(&self, r: f64) -> Result<f64> {
        if !(r >= 1.0) {
            return Err(Error::domain(
                "proper_time_at",
                format!("radius must satisfy r >= 1, got {r}"),
            ));
        }
        Ok(-2.0 / 3.0 * r.powf(1.5) + self.tau_offset)
    }

    /// `t(r) = -(2/3) r^(3/2) - 2 sqrt(r) - ln((sqrt(r)-1)/(sqrt(r)+1)) + t_offset`.
    pub fn coordinate_time_at(&self, r: f64) -> Result<f64> {
        if !(r > 1.0) {
            return Err(Error::domain(
                "coordinate_time_at",
                format!("coordinate time diverges at the horizon; need r > 1, got {r}"),
            ));
        }
        Ok(self.coordinate_time_unchecked(r))
    }

    fn coordinate_time_unchecked(&self, r: f64) -> f64 {
        let s = r.sqrt();
        -2.0 / 3.0 * r * s - 2.0 * s - (sqrt_r_minus_one(r) / (s + 1.0)).ln() + self.t_offset
    }

    pub fn tortoise_at(&self, r: f64) -> Result<f64> {
        geometry::tortoise(r)
    }

    /// `d tau / dr = -sqrt(r)`.
    pub fn dtau_dr(r: f64) -> f64 {
        -r.sqrt()
    }

    /// `dt / dr = -r^(3/2) / (r - 1)`.
    pub fn dt_dr(r: f64) -> f64 {
        -r * r.sqrt() / (r - 1.0)
    }

    /// Closed forms evaluated from `s = sqrt(r) - 1 > 0`, which stays exact
    /// arbitrarily close to the horizon.
    pub fn point_from_sqrt_offset(&self, s: f64) -> InfallPoint {
        let sqrt_r = 1.0 + s;
        let r = sqrt_r * sqrt_r;
        let r32 = r * sqrt_r;
        InfallPoint {
            r,
            tau: -2.0 / 3.0 * r32 + self.tau_offset,
            t: -2.0 / 3.0 * r32 - 2.0 * sqrt_r - (s / (sqrt_r + 1.0)).ln() + self.t_offset,
            r_star: r + (s * (sqrt_r + 1.0)).ln(),
        }
    }

    /// Phase `nu (t - r*) + omega tau` seen by an atom at `r`, for an
    /// outgoing mode of frequency `nu`.
    pub fn mode_phase(&self, r: f64, nu: f64, omega: f64) -> Result<f64> {
        let t = self.coordinate_time_at(r)?;
        let rs = geometry::tortoise(r)?;
        let tau = self.proper_time_at(r)?;
        Ok(nu * (t - rs) + omega * tau)
    }

    /// Adaptive integration of the geodesic equations in `r`, from
    /// `r_start` inward to `r_end`, starting from the closed-form values.
    pub fn integrate_geodesic(&self, r_start: f64, r_end: f64, tol: f64) -> Result<GeodesicRun> {
        if !(r_end > 1.0 && r_end <= r_start && r_start.is_finite()) {
            return Err(Error::domain(
                "integrate_geodesic",
                format!("need 1 < r_end <= r_start, got r_start = {r_start}, r_end = {r_end}"),
            ));
        }
        if !(tol > 0.0) {
            return Err(Error::domain("integrate_geodesic", "tolerance must be positive"));
        }
        let target = r_end.max(HORIZON_CUTOFF);
        let y0 = [
            self.proper_time_at(r_start)?,
            self.coordinate_time_at(r_start)?,
        ];
        let mut samples = vec![GeodesicSample {
            r: r_start,
            tau: y0[0],
            t: y0[1],
        }];
        let solver = Dopri5 {
            rtol: tol,
            atol: tol,
            h_min: 1e-13,
            ..Dopri5::default()
        };
        let run = solver.integrate(
            |r, _, dy| {
                dy[0] = Self::dtau_dr(r);
                dy[1] = Self::dt_dr(r);
            },
            r_start,
            target,
            &y0,
            |_| true,
            |r, y| {
                samples.push(GeodesicSample {
                    r,
                    tau: y[0],
                    t: y[1],
                })
            },
        )?;

        let mut max_tau = 0.0f64;
        let mut max_t = 0.0f64;
        for s in &samples {
            max_tau = max_tau.max((s.tau - self.proper_time_at(s.r)?).abs());
            max_t = max_t.max((s.t - self.coordinate_time_unchecked(s.r)).abs());
        }
        Ok(GeodesicRun {
            samples,
            truncated: run.truncated || target > r_end,
            max_residual_tau: max_tau,
            max_residual_t: max_t,
        })
    }
}

/// An event in the two-dimensional Minkowski plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub z: f64,
}

/// Constant proper acceleration `a` with `z(0) = c^2 / a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceleratedWorldline {
    a: f64,
    c: f64,
}

impl AcceleratedWorldline {
    pub fn new(a: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && c > 0.0) {
            return Err(Error::domain(
                "AcceleratedWorldline::new",
                format!("acceleration and c must be positive, got a = {a}, c = {c}"),
            ));
        }
        Ok(AcceleratedWorldline { a, c })
    }

    pub fn acceleration(&self) -> f64 {
        self.a
    }

    /// `t = (c/a) sinh(a tau / c)`, `z = (c^2/a) cosh(a tau / c)`.
    pub fn event(&self, tau: f64) -> Event {
        let phi = self.a * tau / self.c;
        Event {
            t: self.c / self.a * phi.sinh(),
            z: self.c * self.c / self.a * phi.cosh(),
        }
    }

    /// Coordinate velocity `dz/dt = c tanh(a tau / c)`.
    pub fn velocity(&self, tau: f64) -> f64 {
        self.c * (self.a * tau / self.c).tanh()
    }

    /// `(c^2/a)^2`, the invariant `z^2 - c^2 t^2` along the worldline.
    pub fn hyperbola_invariant(&self) -> f64 {
        (self.c * self.c / self.a).powi(2)
    }
}

/// Convenience form with `c = 1`.
pub fn accelerated_event(a: f64, tau: f64) -> Result<Event> {
    Ok(AcceleratedWorldline::new(a, 1.0)?.event(tau))
}

/// Rindler coordinates `(t_bar, z_bar)` with parameter `a_bar` to Minkowski.
pub fn rindler_to_minkowski(t_bar: f64, z_bar: f64, a_bar: f64, c: f64) -> Result<Event> {
    if !(z_bar > 0.0) {
        return Err(Error::domain(
            "rindler_to_minkowski",
            format!("z_bar must be positive, got {z_bar}"),
        ));
    }
    let phi = a_bar * t_bar / c;
    Ok(Event {
        t: z_bar / c * phi.sinh(),
        z: z_bar * phi.cosh(),
    })
}
