//! End-to-end scenario runs: excitation sweep, mode kinetics, evolution to
//! the thermal state and entropy bookkeeping, with global consistency checks.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, ScenarioConfig};
use crate::constants::CONSTANTS_VERSION;
use crate::entropy::{FluxLedger, ModeFlux};
use crate::error::Result;
use crate::excitation::{
    absorption_probability, excitation_probability_closed_form, excitation_probability_numeric,
    AtomSpec, ClosedFormVariant, Method, ModeSpec,
};
use crate::geometry::{tortoise, BlackHole, UnitMode};
use crate::master_equation::{
    evolve, hawking_temperature_equivalence, mode_rates, stationarity_residual,
    thermal_populations, truncation_for, EvolveOptions, FockPopulations, ModeKinetics,
    INITIAL_TAIL_TOL,
};
use crate::output::{ensure_dir, format_float, write_csv, write_json, CsvTable};
use crate::trajectory::InfallTrajectory;

/// Bound on the numeric/closed-form relative gap.
pub const MAX_REL_DIFF: f64 = 0.02;
/// Bound on the L-infinity distance of evolved and thermal populations.
pub const STEADY_LINF_TOL: f64 = 1e-8;
/// Bound on the flux/area entropy-rate relative gap.
pub const AREA_LAW_TOL: f64 = 1e-10;
/// Detailed balance is compared on levels at least this populated.
pub const DETAILED_BALANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Trajectory,
    Excite,
    Evolve,
    Entropy,
    Report,
}

impl Stage {
    fn trajectory(self) -> bool {
        matches!(self, Stage::Trajectory | Stage::Report)
    }
    fn excite(self) -> bool {
        matches!(self, Stage::Excite | Stage::Report)
    }
    fn kinetics(self) -> bool {
        matches!(self, Stage::Evolve | Stage::Entropy | Stage::Report)
    }
    fn evolve(self) -> bool {
        matches!(self, Stage::Evolve | Stage::Report)
    }
    fn entropy(self) -> bool {
        matches!(self, Stage::Entropy | Stage::Report)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub r: f64,
    pub tau: f64,
    pub t: f64,
    pub r_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub r_start: f64,
    pub r_end: f64,
    pub tol: f64,
    pub samples: usize,
    pub truncated: bool,
    pub max_residual_tau: f64,
    pub max_residual_t: f64,
    #[serde(skip)]
    pub rows: Vec<TrajectoryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct ExciteRecord {
    pub omega: f64,
    pub nu: f64,
    pub xi: f64,
    pub P_exc_numeric: f64,
    pub P_exc_err: f64,
    pub P_exc_closed: f64,
    pub P_abs_closed: f64,
    pub rel_diff: f64,
    pub converged: bool,
    pub perturbative: bool,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveRow {
    pub t: f64,
    pub n_mean: f64,
    pub s_over_kb: f64,
    pub residual: f64,
    pub total_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionSummary {
    pub t_final: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub regrowths: usize,
    pub n_max: usize,
    pub steady_linf: f64,
    pub detailed_balance_rel: f64,
    #[serde(skip)]
    pub rows: Vec<EvolveRow>,
    #[serde(skip)]
    pub final_state: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRecord {
    pub omega: f64,
    pub nu: f64,
    pub xi: f64,
    pub status: String,
    pub kinetics: Option<ModeKinetics>,
    pub hawking_ratio: f64,
    /// Stationary mean photon number with leakage switched on.
    pub n_bar_leaky: f64,
    /// Photon flux through the leakage channel at that state.
    pub n_dot: f64,
    pub evolution: Option<EvolutionSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyRecord {
    pub omega: f64,
    pub units: UnitMode,
    pub dimensionless: FluxLedger,
    pub si: FluxLedger,
    pub max_relative_residual: f64,
}

impl EntropyRecord {
    pub fn selected(&self) -> &FluxLedger {
        match self.units {
            UnitMode::Dimensionless => &self.dimensionless,
            UnitMode::SI => &self.si,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalChecks {
    pub max_rel_diff: Option<f64>,
    pub rel_diff_ok: bool,
    pub quadrature_converged: bool,
    pub max_steady_linf: Option<f64>,
    pub steady_ok: bool,
    pub max_detailed_balance_rel: Option<f64>,
    pub max_hawking_ratio_error: Option<f64>,
    pub entropy_area_residual: Option<f64>,
    pub entropy_ok: bool,
    pub trajectory_ok: bool,
    pub mode_errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub constants_version: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub stage: Stage,
    pub provenance: Provenance,
    pub trajectory: Option<TrajectoryRecord>,
    pub excitation: Vec<ExciteRecord>,
    pub modes: Vec<ModeRecord>,
    pub entropy: Vec<EntropyRecord>,
    pub checks: GlobalChecks,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        let c = &self.checks;
        c.rel_diff_ok && c.steady_ok && c.entropy_ok && c.trajectory_ok && c.mode_errors == 0
    }

    /// 0 when every check passes, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }
}

/// Run every stage.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    run_stage(cfg, Stage::Report)
}

pub fn run_stage(cfg: &ScenarioConfig, stage: Stage) -> Result<RunReport> {
    cfg.validate()?;
    let atoms = cfg.atoms()?;
    let modes = cfg.modes()?;
    let bh = cfg.black_hole()?;
    let mut pairs: Vec<(AtomSpec, ModeSpec)> = atoms
        .iter()
        .flat_map(|a| modes.iter().map(move |m| (*a, *m)))
        .collect();
    pairs.sort_by(|a, b| {
        a.0.omega
            .total_cmp(&b.0.omega)
            .then(a.1.nu.total_cmp(&b.1.nu))
    });

    let trajectory = if stage.trajectory() {
        Some(run_trajectory(cfg)?)
    } else {
        None
    };

    let excitation: Vec<ExciteRecord> = if stage.excite() {
        pairs
            .par_iter()
            .map(|(a, m)| excite_one(cfg, a, m))
            .collect()
    } else {
        Vec::new()
    };

    let mode_records: Vec<ModeRecord> = if stage.kinetics() {
        pairs
            .par_iter()
            .map(|(a, m)| mode_one(cfg, &bh, a, m, stage.evolve()))
            .collect()
    } else {
        Vec::new()
    };

    let entropy = if stage.entropy() {
        entropy_records(cfg, &bh, &atoms, &mode_records)?
    } else {
        Vec::new()
    };

    let checks = global_checks(&trajectory, &excitation, &mode_records, &entropy);
    Ok(RunReport {
        stage,
        provenance: Provenance {
            config_hash: cfg.hash(),
            constants_version: CONSTANTS_VERSION,
            version: crate::VERSION,
        },
        trajectory,
        excitation,
        modes: mode_records,
        entropy,
        checks,
    })
}

fn run_trajectory(cfg: &ScenarioConfig) -> Result<TrajectoryRecord> {
    let tr = &cfg.trajectory;
    let run = InfallTrajectory::default().integrate_geodesic(tr.r_start, tr.r_end, tr.tol)?;
    let rows = run
        .samples
        .iter()
        .map(|s| {
            Ok(TrajectoryRow {
                r: s.r,
                tau: s.tau,
                t: s.t,
                r_star: tortoise(s.r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryRecord {
        r_start: tr.r_start,
        r_end: tr.r_end,
        tol: tr.tol,
        samples: rows.len(),
        truncated: run.truncated,
        max_residual_tau: run.max_residual_tau,
        max_residual_t: run.max_residual_t,
        rows,
    })
}

fn excite_one(cfg: &ScenarioConfig, atom: &AtomSpec, mode: &ModeSpec) -> ExciteRecord {
    let mut rec = ExciteRecord {
        omega: atom.omega,
        nu: mode.nu,
        xi: mode.xi(),
        P_exc_numeric: f64::NAN,
        P_exc_err: f64::NAN,
        P_exc_closed: f64::NAN,
        P_abs_closed: f64::NAN,
        rel_diff: f64::NAN,
        converged: false,
        perturbative: false,
        status: "ok".into(),
    };
    let result = (|| -> Result<()> {
        let closed = excitation_probability_closed_form(atom, mode, ClosedFormVariant::Full)?;
        let abs = absorption_probability(atom, mode, &Method::Closed(ClosedFormVariant::Full))?;
        rec.P_exc_closed = closed.value;
        rec.P_abs_closed = abs.value;
        let num = excitation_probability_numeric(atom, mode, &cfg.quadrature)?;
        rec.P_exc_numeric = num.value;
        rec.P_exc_err = num.error;
        rec.converged = num.converged;
        rec.perturbative = num.perturbative;
        rec.rel_diff = (num.value - closed.value).abs() / closed.value;
        Ok(())
    })();
    if let Err(e) = result {
        rec.status = format!("omega={} nu={}: {e}", atom.omega, mode.nu);
    }
    rec
}

fn mode_one(
    cfg: &ScenarioConfig,
    bh: &BlackHole,
    atom: &AtomSpec,
    mode: &ModeSpec,
    with_evolution: bool,
) -> ModeRecord {
    let mut rec = ModeRecord {
        omega: atom.omega,
        nu: mode.nu,
        xi: mode.xi(),
        status: "ok".into(),
        kinetics: None,
        hawking_ratio: hawking_temperature_equivalence(mode, bh).ratio,
        n_bar_leaky: f64::NAN,
        n_dot: f64::NAN,
        evolution: None,
    };
    let result = (|| -> Result<()> {
        let k = mode_rates(atom, mode, cfg.beam.injection_rate)?;
        rec.kinetics = Some(k);
        let kappa = cfg.evolution.kappa_ratio * k.gamma_a;
        let leaky = k.with_leakage(kappa)?;
        rec.n_bar_leaky = leaky.stationary_mean()?;
        rec.n_dot = kappa * rec.n_bar_leaky;
        if with_evolution && cfg.evolution.enabled {
            rec.evolution = Some(evolve_mode(cfg, &k)?);
        }
        Ok(())
    })();
    if let Err(e) = result {
        rec.status = format!("omega={} nu={}: {e}", atom.omega, mode.nu);
    }
    rec
}

/// Evolve from the vacuum without leakage and compare with the thermal state.
fn evolve_mode(cfg: &ScenarioConfig, k: &ModeKinetics) -> Result<EvolutionSummary> {
    let ev_cfg = &cfg.evolution;
    let t_final = match ev_cfg.t_final {
        Some(t) => t,
        None => ev_cfg.relaxation_times / k.relaxation_rate(),
    };
    let p0 = FockPopulations::vacuum(truncation_for(k.xi, INITIAL_TAIL_TOL));
    let opts = EvolveOptions {
        t_final,
        rtol: ev_cfg.rtol,
        atol: ev_cfg.atol,
        samples: ev_cfg.samples,
        tail_tol: ev_cfg.tail_tol,
    };
    let ev = evolve(&p0, k, &opts)?;
    let rows = ev
        .samples
        .iter()
        .map(|s| EvolveRow {
            t: s.t,
            n_mean: s.populations.mean_photon_number(),
            s_over_kb: s.populations.entropy(),
            residual: stationarity_residual(&s.populations, k),
            total_prob: s.populations.total_probability(),
        })
        .collect();
    let last = ev.last();
    let thermal = thermal_populations(k.xi, last.n_max())?;
    Ok(EvolutionSummary {
        t_final,
        accepted_steps: ev.accepted_steps,
        rejected_steps: ev.rejected_steps,
        regrowths: ev.regrowths,
        n_max: last.n_max(),
        steady_linf: last.linf_distance(&thermal),
        detailed_balance_rel: detailed_balance_error(last.as_slice(), k),
        rows,
        final_state: last.as_slice().to_vec(),
    })
}

/// `max |G_e p_n - G_a p_(n+1)| / (G_a p_(n+1))` over levels above
/// [`DETAILED_BALANCE_FLOOR`]. The common factor `n + 1` cancels.
pub fn detailed_balance_error(p: &[f64], k: &ModeKinetics) -> f64 {
    p.windows(2)
        .filter(|w| w[1] >= DETAILED_BALANCE_FLOOR)
        .map(|w| (k.gamma_e * w[0] - k.gamma_a * w[1]).abs() / (k.gamma_a * w[1]))
        .fold(0.0, f64::max)
}

fn entropy_records(
    cfg: &ScenarioConfig,
    bh: &BlackHole,
    atoms: &[AtomSpec],
    modes: &[ModeRecord],
) -> Result<Vec<EntropyRecord>> {
    let units = bh.unit_system(UnitMode::SI)?;
    let horizon = BlackHole::horizon_units();
    let mut out = Vec::new();
    for atom in atoms {
        let fluxes: Vec<ModeFlux> = modes
            .iter()
            .filter(|m| m.omega == atom.omega && m.n_dot.is_finite())
            .map(|m| ModeFlux {
                nu: m.nu,
                n_dot: m.n_dot,
            })
            .collect();
        let si_fluxes: Vec<ModeFlux> = fluxes
            .iter()
            .map(|f| ModeFlux {
                nu: units.frequency_to_si(f.nu),
                n_dot: f.n_dot / units.time_to_si(1.0),
            })
            .collect();
        let dimensionless = FluxLedger::new(&fluxes, &horizon)?;
        let si = FluxLedger::new(&si_fluxes, bh)?;
        let max_relative_residual = dimensionless
            .max_relative_residual()
            .max(si.max_relative_residual());
        out.push(EntropyRecord {
            omega: atom.omega,
            units: cfg.black_hole.units,
            dimensionless,
            si,
            max_relative_residual,
        });
    }
    Ok(out)
}

fn max_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |acc, v| {
        Some(match acc {
            None => v,
            Some(a) if v.is_nan() || a.is_nan() => f64::NAN,
            Some(a) => a.max(v),
        })
    })
}

fn global_checks(
    trajectory: &Option<TrajectoryRecord>,
    excitation: &[ExciteRecord],
    modes: &[ModeRecord],
    entropy: &[EntropyRecord],
) -> GlobalChecks {
    let max_rel_diff = max_of(excitation.iter().map(|e| e.rel_diff));
    let evolutions: Vec<&EvolutionSummary> =
        modes.iter().filter_map(|m| m.evolution.as_ref()).collect();
    let max_steady_linf = max_of(evolutions.iter().map(|e| e.steady_linf));
    let max_db = max_of(evolutions.iter().map(|e| e.detailed_balance_rel));
    let max_hawking = max_of(modes.iter().map(|m| (m.hawking_ratio - 1.0).abs()));
    let entropy_area_residual = max_of(entropy.iter().map(|e| e.max_relative_residual));
    let mode_errors = excitation.iter().filter(|e| e.status != "ok").count()
        + modes.iter().filter(|m| m.status != "ok").count();
    GlobalChecks {
        max_rel_diff,
        rel_diff_ok: max_rel_diff.is_none_or(|v| v <= MAX_REL_DIFF),
        quadrature_converged: excitation.iter().all(|e| e.converged),
        max_steady_linf,
        steady_ok: max_steady_linf.is_none_or(|v| v < STEADY_LINF_TOL),
        max_detailed_balance_rel: max_db,
        max_hawking_ratio_error: max_hawking,
        entropy_area_residual,
        entropy_ok: entropy_area_residual.is_none_or(|v| v < AREA_LAW_TOL),
        trajectory_ok: trajectory.as_ref().is_none_or(|t| !t.truncated),
        mode_errors,
    }
}

/// Write the files belonging to the report's stage into `dir`.
pub fn emit_outputs(report: &RunReport, cfg: &ScenarioConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let out = &cfg.outputs;
    let prec = out.precision;
    let mut written = Vec::new();

    if out.wants(Format::Csv) {
        if let Some(tr) = &report.trajectory {
            let mut t = CsvTable::new("trajectory", &["r", "tau", "t", "r_star"]);
            for r in &tr.rows {
                t.push(vec![r.r, r.tau, r.t, r.r_star]);
            }
            written.push(write_csv(dir, "trajectory.csv", &t, prec)?);
        }
        if !report.excitation.is_empty() {
            let mut t = CsvTable::new(
                "excite",
                &[
                    "omega",
                    "nu",
                    "xi",
                    "P_exc_numeric",
                    "P_exc_err",
                    "P_exc_closed",
                    "P_abs_closed",
                    "rel_diff",
                ],
            );
            for e in &report.excitation {
                t.push(vec![
                    e.omega,
                    e.nu,
                    e.xi,
                    e.P_exc_numeric,
                    e.P_exc_err,
                    e.P_exc_closed,
                    e.P_abs_closed,
                    e.rel_diff,
                ]);
            }
            written.push(write_csv(dir, "excite.csv", &t, prec)?);
        }
        for (i, m) in report.modes.iter().enumerate() {
            let Some(ev) = &m.evolution else { continue };
            let mut t = CsvTable::new("evolve", &["t", "n_mean", "S_over_kB", "residual", "total_prob"])
                .meta("omega", format_float(m.omega, 17))
                .meta("nu", format_float(m.nu, 17));
            for r in &ev.rows {
                t.push(vec![r.t, r.n_mean, r.s_over_kb, r.residual, r.total_prob]);
            }
            written.push(write_csv(dir, &format!("evolve_{i:03}.csv"), &t, prec)?);

            let mut t = CsvTable::new("steady_state", &["n", "p_n"])
                .meta("omega", format_float(m.omega, 17))
                .meta("nu", format_float(m.nu, 17));
            for (n, p) in ev.final_state.iter().enumerate() {
                t.push(vec![n as f64, *p]);
            }
            written.push(write_csv(dir, &format!("steady_state_{i:03}.csv"), &t, prec)?);
        }
        for (i, e) in report.entropy.iter().enumerate() {
            let mut t = CsvTable::new(
                "entropy",
                &["nu", "n_dot", "S_dot_p", "A_dot_p", "S_dot_from_area"],
            )
            .meta("omega", format_float(e.omega, 17))
            .meta("units", match e.units {
                UnitMode::Dimensionless => "dimensionless",
                UnitMode::SI => "si",
            });
            for r in &e.selected().modes {
                t.push(vec![r.nu, r.n_dot, r.S_dot_p, r.A_dot_p, r.S_dot_from_area]);
            }
            written.push(write_csv(dir, &format!("entropy_{i:03}.csv"), &t, prec)?);
        }
    }

    if out.wants(Format::Json) {
        if !report.entropy.is_empty() {
            let ledgers: Vec<&FluxLedger> = report.entropy.iter().map(|e| e.selected()).collect();
            written.push(write_json(dir, "ledger.json", &ledgers)?);
        }
        written.push(write_json(dir, "report.json", report)?);
    }
    Ok(written)
}
