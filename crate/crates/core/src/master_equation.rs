//! Coarse-grained photon-number dynamics of one cavity mode driven by the
//! infalling atom beam.
//!
//! Only the diagonal of the field density matrix is represented: the
//! generator couples populations to populations and never feeds coherences.
//!
//! ```text
//! dp_n/dt = -G_e [(n+1) p_n - n p_{n-1}] - (G_a + kappa) [n p_n - (n+1) p_{n+1}]
//! ```
//!
//! The Fock space is truncated at `N` with a reflecting boundary (no
//! emission out of level `N`), so total probability is conserved exactly
//! and the truncated geometric distribution is an exact fixed point.

use serde::Serialize;

use crate::entropy;
use crate::error::{Error, Result};
use crate::excitation::{AtomSpec, ModeSpec};
use crate::geometry::BlackHole;
use crate::ode::Dopri5;

/// Tail level that triggers growth of the truncation during evolution.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Tail level used to size the initial truncation.
pub const INITIAL_TAIL_TOL: f64 = 1e-12;
/// Smallest truncation ever used.
pub const MIN_TRUNCATION: usize = 20;
/// Most negative population accepted during stepping.
pub const POSITIVITY_FLOOR: f64 = -1e-12;

/// Emission/absorption rates of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeKinetics {
    pub xi: f64,
    /// `R = xi / sinh(xi)`.
    pub suppression: f64,
    pub gamma_e: f64,
    pub gamma_a: f64,
    pub injection_rate_r: f64,
    /// Zero-temperature cavity leakage rate.
    pub kappa_leak: f64,
}

/// `xi / sinh(xi)`, equal to one at `xi = 0`.
pub fn suppression_factor(xi: f64) -> f64 {
    if xi.abs() < 1e-8 {
        1.0 - xi * xi / 6.0
    } else {
        xi / xi.sinh()
    }
}

/// Rates `G_{e,a} = r (g/omega)^2 R e^(-/+ xi)` for one mode.
pub fn mode_rates(atom: &AtomSpec, mode: &ModeSpec, injection_rate_r: f64) -> Result<ModeKinetics> {
    if !(injection_rate_r > 0.0 && injection_rate_r.is_finite()) {
        return Err(Error::domain(
            "mode_rates",
            format!("injection rate must be positive, got {injection_rate_r}"),
        ));
    }
    if !(atom.omega > 0.0 && mode.g > 0.0) {
        return Err(Error::domain("mode_rates", "omega and g must be positive"));
    }
    let xi = mode.xi();
    if !(xi > 0.0) {
        return Err(Error::DegenerateMode(format!(
            "xi = {xi}: emission and absorption rates coincide"
        )));
    }
    let base = injection_rate_r * (mode.g / atom.omega).powi(2);
    let suppression = suppression_factor(xi);
    Ok(ModeKinetics {
        xi,
        suppression,
        gamma_e: base * suppression * (-xi).exp(),
        gamma_a: base * suppression * xi.exp(),
        injection_rate_r,
        kappa_leak: 0.0,
    })
}

impl ModeKinetics {
    /// Rates given directly.
    pub fn from_rates(gamma_e: f64, gamma_a: f64, kappa_leak: f64) -> Result<Self> {
        if !(gamma_e >= 0.0 && gamma_a >= 0.0 && kappa_leak >= 0.0) {
            return Err(Error::domain("ModeKinetics::from_rates", "rates must be non-negative"));
        }
        let xi = if gamma_e > 0.0 {
            0.5 * (gamma_a / gamma_e).ln()
        } else {
            f64::INFINITY
        };
        Ok(ModeKinetics {
            xi,
            suppression: suppression_factor(xi),
            gamma_e,
            gamma_a,
            injection_rate_r: 1.0,
            kappa_leak,
        })
    }

    pub fn with_leakage(mut self, kappa_leak: f64) -> Result<Self> {
        if !(kappa_leak >= 0.0) {
            return Err(Error::domain("with_leakage", "leakage rate must be non-negative"));
        }
        self.kappa_leak = kappa_leak;
        Ok(self)
    }

    /// All rates multiplied by `factor` (a different injection rate).
    pub fn scaled(mut self, factor: f64) -> Self {
        self.gamma_e *= factor;
        self.gamma_a *= factor;
        self.kappa_leak *= factor;
        self.injection_rate_r *= factor;
        self
    }

    /// Effective downward rate `G_a + kappa`.
    pub fn gamma_down(&self) -> f64 {
        self.gamma_a + self.kappa_leak
    }

    /// Relaxation rate of the mean photon number.
    pub fn relaxation_rate(&self) -> f64 {
        self.gamma_down() - self.gamma_e
    }

    /// Stationary mean photon number `G_e / (G_a + kappa - G_e)`.
    pub fn stationary_mean(&self) -> Result<f64> {
        let gap = self.relaxation_rate();
        if !(gap > 0.0) {
            return Err(Error::DegenerateMode(
                "absorption does not exceed emission; no steady state".into(),
            ));
        }
        Ok(self.gamma_e / gap)
    }
}

/// Diagonal density matrix `p_0 ..= p_N` of one mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockPopulations {
    p: Vec<f64>,
    /// Cumulative photon number emitted through the leakage channel.
    pub leaked_photons: f64,
}

impl FockPopulations {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::domain("FockPopulations::new", "need at least one level"));
        }
        if let Some((n, v)) = p.iter().enumerate().find(|(_, &v)| !(v >= 0.0)) {
            return Err(Error::domain(
                "FockPopulations::new",
                format!("population p_{n} = {v} is negative or NaN"),
            ));
        }
        Ok(FockPopulations {
            p,
            leaked_photons: 0.0,
        })
    }

    pub fn vacuum(n_max: usize) -> Self {
        let mut p = vec![0.0; n_max + 1];
        p[0] = 1.0;
        FockPopulations {
            p,
            leaked_photons: 0.0,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// Truncation level `N`.
    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn total_probability(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(n, &p)| n as f64 * p)
            .sum()
    }

    pub fn tail(&self) -> f64 {
        *self.p.last().unwrap()
    }

    /// Von Neumann entropy in units of `k_B`.
    pub fn entropy(&self) -> f64 {
        entropy::von_neumann_entropy(&self.p)
    }

    /// Extend the truncation to `n_max` with empty levels.
    pub fn grow_to(&mut self, n_max: usize) {
        if n_max > self.n_max() {
            self.p.resize(n_max + 1, 0.0);
        }
    }

    /// L-infinity distance; missing levels count as zero.
    pub fn linf_distance(&self, other: &[f64]) -> f64 {
        let n = self.p.len().max(other.len());
        (0..n)
            .map(|i| {
                let a = self.p.get(i).copied().unwrap_or(0.0);
                let b = other.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `out = M p` for the truncated generator.
pub fn apply_generator(p: &[f64], k: &ModeKinetics, out: &mut [f64]) {
    let n_max = p.len() - 1;
    let up = k.gamma_e;
    let down = k.gamma_down();
    for n in 0..=n_max {
        let nf = n as f64;
        let mut d = 0.0;
        if n < n_max {
            d -= up * (nf + 1.0) * p[n];
            d += down * (nf + 1.0) * p[n + 1];
        }
        if n > 0 {
            d += up * nf * p[n - 1];
            d -= down * nf * p[n];
        }
        out[n] = d;
    }
}

/// Population rates `dp/dt` at `p`.
pub fn population_rates(p: &FockPopulations, k: &ModeKinetics) -> Vec<f64> {
    let mut out = vec![0.0; p.p.len()];
    apply_generator(&p.p, k, &mut out);
    out
}

/// Population rates of the leakage channel alone.
pub fn leakage_rates(p: &FockPopulations, kappa_leak: f64) -> Vec<f64> {
    let k = ModeKinetics {
        xi: f64::INFINITY,
        suppression: 0.0,
        gamma_e: 0.0,
        gamma_a: 0.0,
        injection_rate_r: 0.0,
        kappa_leak,
    };
    population_rates(p, &k)
}

/// `max_n |dp_n/dt|`.
pub fn stationarity_residual(p: &FockPopulations, k: &ModeKinetics) -> f64 {
    population_rates(p, k)
        .into_iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Truncation with thermal tail below `tail_tol`.
pub fn truncation_for(xi: f64, tail_tol: f64) -> usize {
    let needed = (-tail_tol.ln() / (2.0 * xi)).ceil();
    if needed.is_finite() && needed > MIN_TRUNCATION as f64 {
        needed as usize
    } else {
        MIN_TRUNCATION
    }
}

/// Untruncated thermal values `e^(-2 xi n)(1 - e^(-2 xi))` for `n = 0..=n_max`.
pub fn thermal_populations(xi: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(xi > 0.0) {
        return Err(Error::DegenerateMode(format!(
            "xi = {xi}: no normalizable steady state"
        )));
    }
    let norm = -(-2.0 * xi).exp_m1();
    Ok((0..=n_max)
        .map(|n| (-2.0 * xi * n as f64).exp() * norm)
        .collect())
}

/// Thermal steady state truncated where the tail drops below `tail_tol`,
/// renormalized to unit total probability.
pub fn steady_state(xi: f64, tail_tol: f64) -> Result<FockPopulations> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::domain("steady_state", "tail tolerance must lie in (0, 1)"));
    }
    let mut p = thermal_populations(xi, truncation_for(xi, tail_tol))?;
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    FockPopulations::new(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveOptions {
    pub t_final: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Number of equally spaced output intervals.
    pub samples: usize,
    /// Grow the truncation by half whenever `p_N` exceeds this.
    pub tail_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            t_final: 1.0,
            rtol: 1e-10,
            atol: 1e-20,
            samples: 10,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionSample {
    pub t: f64,
    pub populations: FockPopulations,
}

impl EvolutionSample {
    pub fn n_mean(&self) -> f64 {
        self.populations.mean_photon_number()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evolution {
    /// Includes the initial state at `t = 0`.
    pub samples: Vec<EvolutionSample>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub regrowths: usize,
}

impl Evolution {
    pub fn last(&self) -> &FockPopulations {
        &self.samples.last().unwrap().populations
    }
}

/// Positivity step bound `1 / (2 (G_a + G_e + kappa)(N + 1))`.
pub fn step_bound(k: &ModeKinetics, n_max: usize) -> f64 {
    let total = k.gamma_a + k.gamma_e + k.kappa_leak;
    if total > 0.0 {
        1.0 / (2.0 * total * (n_max as f64 + 1.0))
    } else {
        f64::INFINITY
    }
}

/// Integrate the population equations with an embedded Runge-Kutta pair.
pub fn evolve(p0: &FockPopulations, k: &ModeKinetics, opts: &EvolveOptions) -> Result<Evolution> {
    if !(opts.t_final >= 0.0 && opts.t_final.is_finite()) {
        return Err(Error::domain("evolve", "t_final must be finite and non-negative"));
    }
    if opts.samples == 0 {
        return Err(Error::domain("evolve", "need at least one output interval"));
    }
    if !(opts.tail_tol > 0.0) {
        return Err(Error::domain("evolve", "tail tolerance must be positive"));
    }
    let mut state = p0.clone();
    let mut out = Evolution {
        samples: vec![EvolutionSample {
            t: 0.0,
            populations: state.clone(),
        }],
        accepted_steps: 0,
        rejected_steps: 0,
        regrowths: 0,
    };
    if opts.t_final == 0.0 {
        return Ok(out);
    }
    let dt_out = opts.t_final / opts.samples as f64;
    for i in 0..opts.samples {
        let t0 = i as f64 * dt_out;
        let t1 = if i + 1 == opts.samples {
            opts.t_final
        } else {
            (i + 1) as f64 * dt_out
        };
        loop {
            let (next, acc, rej, tail_hit) = integrate_segment(&state, k, t0, t1, opts)?;
            out.accepted_steps += acc;
            out.rejected_steps += rej;
            if tail_hit {
                let n_new = state.n_max() + (state.n_max() / 2).max(1);
                state.grow_to(n_new);
                out.regrowths += 1;
                continue;
            }
            state = next;
            break;
        }
        out.samples.push(EvolutionSample {
            t: t1,
            populations: state.clone(),
        });
    }
    Ok(out)
}

fn integrate_segment(
    state: &FockPopulations,
    k: &ModeKinetics,
    t0: f64,
    t1: f64,
    opts: &EvolveOptions,
) -> Result<(FockPopulations, usize, usize, bool)> {
    let n_max = state.n_max();
    let tail_tol = opts.tail_tol;
    let mut tail_hit = false;
    // Append the leaked photon number as an extra component.
    let mut y0 = state.p.clone();
    y0.push(state.leaked_photons);
    let solver = Dopri5 {
        rtol: opts.rtol,
        atol: opts.atol,
        h_max: step_bound(k, n_max),
        h_min: 1e-14 * (t1 - t0).abs().max(1e-300),
        ..Dopri5::default()
    };
    let kappa = k.kappa_leak;
    let run = solver.integrate(
        |_, y, dy| {
            let (p, leaked) = y.split_at(n_max + 1);
            let (dp, dleaked) = dy.split_at_mut(n_max + 1);
            apply_generator(p, k, dp);
            let mean: f64 = p.iter().enumerate().map(|(n, &v)| n as f64 * v).sum();
            let _ = leaked;
            dleaked[0] = kappa * mean;
        },
        t0,
        t1,
        &y0,
        |y| y[..=n_max].iter().all(|&v| v >= POSITIVITY_FLOOR),
        |_, y| {
            if y[n_max] > tail_tol {
                tail_hit = true;
            }
        },
    )?;
    if run.truncated {
        return Err(Error::Positivity {
            t: run.t,
            msg: "step size collapsed while keeping populations non-negative".into(),
        });
    }
    let mut y = run.y;
    let leaked = y.pop().unwrap();
    // Clear round-off negatives admitted by the floor.
    y.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok((
        FockPopulations {
            p: y,
            leaked_photons: leaked,
        },
        run.accepted,
        run.rejected,
        tail_hit,
    ))
}

/// `exp(M t) p0` by scaling and squaring of a Taylor series on the dense
/// generator. Intended for small truncations as an independent check.
pub fn propagate_expm(p0: &FockPopulations, k: &ModeKinetics, t: f64) -> Result<FockPopulations> {
    let n = p0.p.len();
    if n > 400 {
        return Err(Error::domain("propagate_expm", "truncation too large for dense exponential"));
    }
    let mut a = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        apply_generator(&e, k, &mut col);
        for i in 0..n {
            a[i * n + j] = col[i] * t;
        }
    }
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    a.iter_mut().for_each(|v| *v *= scale);

    let mut result = identity(n);
    let mut term = identity(n);
    for m in 1..=30 {
        term = matmul(&term, &a, n);
        term.iter_mut().for_each(|v| *v /= m as f64);
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
        if term.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result, n);
    }
    let p: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| result[i * n + j] * p0.p[j]).sum())
        .collect();
    Ok(FockPopulations {
        p,
        leaked_photons: p0.leaked_photons,
    })
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            let ail = a[i * n + l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += ail * b[l * n + j];
            }
        }
    }
    c
}

/// Steady-state Boltzmann exponent compared with the Hawking temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemperatureEquivalence {
    /// `2 xi` from the dimensionless mode frequency.
    pub boltzmann_dimensionless: f64,
    /// `hbar nu / (k_B T_BH)` with the physical mode frequency.
    pub boltzmann_physical: f64,
    pub ratio: f64,
}

/// `2 xi / (hbar nu / k_B T_BH)`; identically one.
pub fn hawking_temperature_equivalence(mode: &ModeSpec, bh: &BlackHole) -> TemperatureEquivalence {
    let k = bh.constants();
    let nu_physical = mode.nu * k.c / bh.gravitational_radius();
    let boltzmann_dimensionless = 2.0 * mode.xi();
    let boltzmann_physical = k.hbar * nu_physical / (k.k_b * bh.hawking_temperature());
    TemperatureEquivalence {
        boltzmann_dimensionless,
        boltzmann_physical,
        ratio: boltzmann_dimensionless / boltzmann_physical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excitation::{excitation_probability_closed_form, ClosedFormVariant};
    use approx::assert_relative_eq;

    fn kinetics(xi: f64) -> ModeKinetics {
        ModeKinetics::from_rates(1.0, (2.0 * xi).exp(), 0.0).unwrap()
    }

    #[test]
    fn detailed_balance_ratio_of_rates() {
        let atom = AtomSpec::new(100.0).unwrap();
        for xi in [0.5, 1.0, 3.0] {
            let mode = ModeSpec::from_xi(xi, 0, 1.0).unwrap();
            let k = mode_rates(&atom, &mode, 1e4).unwrap();
            assert_relative_eq!(k.gamma_a / k.gamma_e, (2.0 * xi).exp(), max_relative = 1e-12);
            let k2 = mode_rates(&atom, &mode, 2e4).unwrap();
            assert_relative_eq!(k2.gamma_e, 2.0 * k.gamma_e, max_relative = 1e-15);
            assert_relative_eq!(k2.gamma_a, 2.0 * k.gamma_a, max_relative = 1e-15);
        }
    }

    #[test]
    fn emission_rate_is_beam_times_probability() {
        let atom = AtomSpec::new(100.0).unwrap();
        let r = 37.0;
        for nu in [0.05, 0.3, 1.2] {
            let mode = ModeSpec::new(nu, 0, 0.7).unwrap();
            let k = mode_rates(&atom, &mode, r).unwrap();
            let p = excitation_probability_closed_form(&atom, &mode, ClosedFormVariant::AtomDominant)
                .unwrap()
                .value;
            assert_relative_eq!(k.gamma_e, r * p, max_relative = 1e-12);
        }
    }

    #[test]
    fn suppression_in_unit_interval() {
        assert_eq!(suppression_factor(0.0), 1.0);
        for xi in [1e-9, 1e-3, 0.5, 3.0, 30.0] {
            let r = suppression_factor(xi);
            assert!(r > 0.0 && r <= 1.0);
        }
        assert_relative_eq!(suppression_factor(1e-4), 1.0, max_relative = 1e-8);
    }

    #[test]
    fn steady_state_examples() {
        let xi = 2f64.ln() / 2.0;
        let raw = thermal_populations(xi, 10).unwrap();
        assert_relative_eq!(raw[0], 0.5, max_relative = 1e-15);
        assert_relative_eq!(raw[1], 0.25, max_relative = 1e-15);

        for xi in [0.5, 1.0, 2.0] {
            let n = 30;
            let raw = thermal_populations(xi, n).unwrap();
            let sum: f64 = raw.iter().sum();
            assert_relative_eq!(sum, 1.0 - (-2.0 * xi * (n as f64 + 1.0)).exp(), max_relative = 1e-12);
            let ss = steady_state(xi, 1e-14).unwrap();
            assert_relative_eq!(
                ss.mean_photon_number(),
                1.0 / (2.0 * xi).exp_m1(),
                max_relative = 1e-10
            );
            assert!(ss.tail() < 1e-14);
            assert!(ss.n_max() >= truncation_for(xi, 1e-14));
        }
        assert!(steady_state(0.0, 1e-12).is_err());
        assert!(steady_state(-1.0, 1e-12).is_err());
    }

    #[test]
    fn residual_examples() {
        let xi = 1.0;
        let k = kinetics(xi);
        let ss = steady_state(xi, 1e-12).unwrap();
        assert!(stationarity_residual(&ss, &k) < 1e-12 * k.gamma_a);

        let vac = FockPopulations::vacuum(20);
        let rates = population_rates(&vac, &k);
        assert_eq!(rates[0], -k.gamma_e);
        assert_eq!(rates[1], k.gamma_e);
        assert_eq!(stationarity_residual(&vac, &k), k.gamma_e);
    }

    #[test]
    fn zero_time_evolution_is_identity() {
        let p0 = FockPopulations::vacuum(20);
        let ev = evolve(
            &p0,
            &kinetics(1.0),
            &EvolveOptions {
                t_final: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(ev.last(), &p0);
    }

    #[test]
    fn evolution_matches_matrix_exponential() {
        let k = kinetics(0.7).with_leakage(0.05).unwrap();
        let p0 = FockPopulations::vacuum(24);
        let t = 1.5;
        let ev = evolve(
            &p0,
            &k,
            &EvolveOptions {
                t_final: t,
                rtol: 1e-12,
                atol: 1e-20,
                samples: 3,
                tail_tol: 1.0,
            },
        )
        .unwrap();
        let ex = propagate_expm(&p0, &k, t).unwrap();
        assert!(ev.last().linf_distance(ex.as_slice()) < 1e-10);
    }

    #[test]
    fn truncation_regrows_when_tail_fills() {
        // Nearly balanced rates push mass to high n quickly.
        let k = ModeKinetics::from_rates(1.0, 1.05, 0.0).unwrap();
        let ev = evolve(
            &FockPopulations::vacuum(5),
            &k,
            &EvolveOptions {
                t_final: 3.0,
                samples: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(ev.regrowths > 0);
        assert!(ev.last().n_max() > 5);
        assert!((ev.last().total_probability() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn leakage_accumulates_photons() {
        let xi = 1.0;
        let k = kinetics(xi).with_leakage(0.1).unwrap();
        let ss = steady_state(xi, 1e-12).unwrap();
        let n0 = ss.mean_photon_number();
        let ev = evolve(
            &ss,
            &k,
            &EvolveOptions {
                t_final: 1e-3,
                samples: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(ev.last().leaked_photons, 0.1 * n0 * 1e-3, max_relative = 1e-3);
    }

    #[test]
    fn hawking_equivalence_is_unity() {
        let bh = BlackHole::solar(1.0).unwrap();
        for nu in [0.01, 0.5, 3.0] {
            let eq = hawking_temperature_equivalence(&ModeSpec::new(nu, 0, 1.0).unwrap(), &bh);
            assert_relative_eq!(eq.ratio, 1.0, max_relative = 1e-12);
        }
    }
}
