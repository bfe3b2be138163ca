//! Radiation entropy, the entropy flux carried away from the cavity and the
//! entropy/area bookkeeping of the hole.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::BlackHole;
use crate::master_equation::{thermal_populations, FockPopulations};

/// Populations below this are left out of logarithms.
pub const LOG_FLOOR: f64 = 1e-300;
/// L-infinity distance to the thermal state below which the steady-state
/// rate approximation is trusted.
pub const NEAR_STEADY_TOL: f64 = 1e-3;

fn xlnx(p: f64) -> f64 {
    if p > LOG_FLOOR {
        p * p.ln()
    } else {
        0.0
    }
}

/// `-sum p ln p` in units of `k_B`, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(p: &[f64]) -> f64 {
    // 0 - x rather than -x keeps a pure state at +0.
    0.0 - p.iter().map(|&v| xlnx(v)).sum::<f64>()
}

/// Entropy of the untruncated thermal state at `xi`, units of `k_B`.
pub fn thermal_entropy(xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::DegenerateMode(format!("xi = {xi}")));
    }
    let n = 1.0 / (2.0 * xi).exp_m1();
    Ok((n + 1.0) * n.ln_1p() - xlnx(n))
}

/// `-sum p_dot ln p` at the current populations.
pub fn entropy_rate_full(p: &[f64], p_dot: &[f64]) -> f64 {
    -p.iter()
        .zip(p_dot)
        .filter(|(&v, _)| v > LOG_FLOOR)
        .map(|(&v, &d)| d * v.ln())
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyEntropyRate {
    /// `-sum p_dot ln p_ss`, including the normalization constant.
    pub sum_form: f64,
    /// `2 xi dn/dt`.
    pub reduced_form: f64,
    pub n_dot: f64,
    /// `sum p_dot`; the reduced form assumes this vanishes.
    pub trace_rate: f64,
    /// Distance of `p` from the thermal state at `xi` is below
    /// [`NEAR_STEADY_TOL`].
    pub near_steady: bool,
    /// The reduced form is usable (trace preserved).
    pub reduced_valid: bool,
}

impl SteadyEntropyRate {
    /// The preferred estimate: reduced form when valid, else the sum form.
    pub fn value(&self) -> f64 {
        if self.reduced_valid {
            self.reduced_form
        } else {
            self.sum_form
        }
    }
}

/// Entropy rate with the logarithm taken at the thermal state, in units of
/// `k_B` per unit time.
pub fn entropy_rate_steady(
    p: &FockPopulations,
    p_dot: &[f64],
    xi: f64,
) -> Result<SteadyEntropyRate> {
    let n = p.as_slice().len();
    if p_dot.len() != n {
        return Err(Error::domain(
            "entropy_rate_steady",
            format!("rate vector has {} entries, populations {n}", p_dot.len()),
        ));
    }
    let ss = thermal_populations(xi, n - 1)?;
    let ln_norm = (-(-2.0 * xi).exp_m1()).ln();
    let mut sum_form = 0.0;
    let mut n_dot = 0.0;
    let mut trace_rate = 0.0;
    let mut abs_rate = 0.0;
    for (k, &d) in p_dot.iter().enumerate() {
        let kf = k as f64;
        sum_form -= d * (ln_norm - 2.0 * xi * kf);
        n_dot += kf * d;
        trace_rate += d;
        abs_rate += d.abs();
    }
    let near_steady = p.linf_distance(&ss) < NEAR_STEADY_TOL;
    Ok(SteadyEntropyRate {
        sum_form,
        reduced_form: 2.0 * xi * n_dot,
        n_dot,
        trace_rate,
        near_steady,
        reduced_valid: trace_rate.abs() <= 1e-12 * abs_rate.max(f64::MIN_POSITIVE),
    })
}

/// Outgoing photon flux of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeFlux {
    /// Angular frequency in the units of the hole's constant set.
    pub nu: f64,
    /// Photons per unit time, non-negative.
    pub n_dot: f64,
}

/// `(4 pi k_B r_g / c) sum nu n_dot`.
pub fn hbar_entropy_flux(modes: &[ModeFlux], bh: &BlackHole) -> Result<f64> {
    check_fluxes(modes)?;
    let k = bh.constants();
    let r_g = bh.gravitational_radius();
    let sum: f64 = modes.iter().map(|m| m.nu * m.n_dot).sum();
    Ok(4.0 * PI * k.k_b * r_g / k.c * sum)
}

/// `2 sum xi n_dot` with `xi = 2 pi nu` in dimensionless units, `k_B` = 1.
pub fn hbar_entropy_flux_dimensionless(modes: &[ModeFlux]) -> Result<f64> {
    check_fluxes(modes)?;
    Ok(modes.iter().map(|m| 2.0 * (2.0 * PI * m.nu) * m.n_dot).sum())
}

fn check_fluxes(modes: &[ModeFlux]) -> Result<()> {
    for m in modes {
        if !(m.n_dot >= 0.0) || !(m.nu > 0.0) {
            return Err(Error::domain(
                "hbar_entropy_flux",
                format!("need nu > 0 and n_dot >= 0, got nu = {}, n_dot = {}", m.nu, m.n_dot),
            ));
        }
    }
    Ok(())
}

/// One row of the flux ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct LedgerEntry {
    pub nu: f64,
    pub n_dot: f64,
    pub m_dot_p: f64,
    pub A_dot_p: f64,
    pub S_dot_p: f64,
    pub S_dot_from_area: f64,
}

impl LedgerEntry {
    pub fn relative_residual(&self) -> f64 {
        relative_gap(self.S_dot_p, self.S_dot_from_area)
    }
}

/// Per-mode and summed entropy/area accounting.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct FluxLedger {
    pub modes: Vec<LedgerEntry>,
    pub m_dot_p: f64,
    pub A_dot_p: f64,
    pub S_dot_p: f64,
    pub S_dot_from_area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct AreaLaw {
    pub A_dot_p: f64,
    pub S_dot_from_area: f64,
}

/// `hbar sum nu n_dot / c^2`.
pub fn radiated_mass_rate(modes: &[ModeFlux], bh: &BlackHole) -> f64 {
    let k = bh.constants();
    k.hbar * modes.iter().map(|m| m.nu * m.n_dot).sum::<f64>() / (k.c * k.c)
}

/// Area rate from the radiated mass and the entropy it implies.
pub fn area_rate_and_entropy_law(modes: &[ModeFlux], bh: &BlackHole) -> Result<AreaLaw> {
    check_fluxes(modes)?;
    let a_dot = bh.area_rate(radiated_mass_rate(modes, bh));
    Ok(AreaLaw {
        A_dot_p: a_dot,
        S_dot_from_area: bh.entropy_per_area() * a_dot,
    })
}

impl FluxLedger {
    pub fn new(modes: &[ModeFlux], bh: &BlackHole) -> Result<Self> {
        let mut rows = Vec::with_capacity(modes.len());
        for m in modes {
            let one = std::slice::from_ref(m);
            let law = area_rate_and_entropy_law(one, bh)?;
            rows.push(LedgerEntry {
                nu: m.nu,
                n_dot: m.n_dot,
                m_dot_p: radiated_mass_rate(one, bh),
                A_dot_p: law.A_dot_p,
                S_dot_p: hbar_entropy_flux(one, bh)?,
                S_dot_from_area: law.S_dot_from_area,
            });
        }
        let law = area_rate_and_entropy_law(modes, bh)?;
        Ok(FluxLedger {
            modes: rows,
            m_dot_p: radiated_mass_rate(modes, bh),
            A_dot_p: law.A_dot_p,
            S_dot_p: hbar_entropy_flux(modes, bh)?,
            S_dot_from_area: law.S_dot_from_area,
        })
    }

    pub fn fluxes(&self) -> Vec<ModeFlux> {
        self.modes
            .iter()
            .map(|m| ModeFlux {
                nu: m.nu,
                n_dot: m.n_dot,
            })
            .collect()
    }

    /// Largest relative gap between the flux and area routes, per mode and
    /// summed.
    pub fn max_relative_residual(&self) -> f64 {
        self.modes
            .iter()
            .map(LedgerEntry::relative_residual)
            .fold(relative_gap(self.S_dot_p, self.S_dot_from_area), f64::max)
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct MassBudget {
    pub M_dot: f64,
    pub A_dot_total: f64,
    pub A_dot_atom: f64,
    pub A_dot_p: f64,
}

/// Mass and area rates from infalling atoms plus radiated photons.
pub fn mass_budget(m_dot_atom: f64, ledger: &FluxLedger, bh: &BlackHole) -> MassBudget {
    let m_dot = m_dot_atom + ledger.m_dot_p;
    // (2 dM/M) A
    let per_mass = 2.0 * bh.area() / bh.mass();
    MassBudget {
        M_dot: m_dot,
        A_dot_total: per_mass * m_dot,
        A_dot_atom: per_mass * m_dot_atom,
        A_dot_p: per_mass * ledger.m_dot_p,
    }
}
