//! Subcommand bodies. Each returns data; printing and exit codes live in
//! `main`.

use std::path::PathBuf;

use envelope_witness::dephasing::{
    dephasing_envelope, dephasing_witness, x_trajectory, CoherenceTrajectory, DecoherenceFunction,
};
use envelope_witness::exchange::{z_observed, ExchangeParams};
use envelope_witness::linalg::{joint_from_parts, BlochVector, JointState, Mat3};
use envelope_witness::oracle::brute_force_envelope;
use envelope_witness::states::{make_state, ExampleSpec};
use envelope_witness::witness::{witness_check, Envelope, WitnessReport, WitnessSample};
use rayon::prelude::*;

use crate::error::{config_err, Result};
use crate::grid::{Grid, TimeAxis};
use crate::ingest::read_trajectory;
use crate::table::{Cell, Table};

/// Inclusion slack for the brute-force vs analytic comparison.
pub const ORACLE_SLACK: f64 = 1e-12;

/// Value-column names recognised when reading an exchange trajectory.
pub const Z_COLUMNS: &[&str] = &["z", "z_corr", "observed", "value"];
/// Value-column names recognised when reading a coherence trajectory.
pub const X_COLUMNS: &[&str] = &["x", "observed", "value"];
/// Value-column names recognised when reading a decoherence table.
pub const GAMMA_COLUMNS: &[&str] = &["gamma", "Gamma", "value"];

/// Table plus the witness verdict it was built from.
#[derive(Debug, Clone)]
pub struct Run {
    pub table: Table,
    pub report: WitnessReport,
}

fn check_coupling(coupling: f64) -> Result<ExchangeParams> {
    if !(coupling.is_finite() && coupling > 0.0) {
        return config_err(format!("coupling J must be positive, got {coupling}"));
    }
    Ok(ExchangeParams::new(coupling))
}

fn check_tol(tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol >= 0.0) {
        return config_err(format!(
            "tolerance must be a non-negative number, got {tol}"
        ));
    }
    Ok(tol)
}

#[derive(Debug, Clone)]
pub struct EnvelopeConfig {
    pub coupling: f64,
    pub s: BlochVector,
    pub axis: TimeAxis,
}

/// Columns `t, alpha, z_min, z_max, emax_x, emax_y, emax_z`. The extremal
/// environment is left empty where the interval has collapsed.
pub fn cmd_envelope(cfg: &EnvelopeConfig) -> Result<Table> {
    let params = check_coupling(cfg.coupling)?;
    let envelope = Envelope::new(cfg.s, params)?;
    let rows: Vec<Vec<Cell>> = cfg
        .axis
        .samples(cfg.coupling)
        .par_iter()
        .map(|&(t, alpha)| {
            let p = envelope.at(t);
            let e = p.argmax;
            vec![
                t.into(),
                alpha.into(),
                p.z_min.into(),
                p.z_max.into(),
                e.map(|v| v.x).into(),
                e.map(|v| v.y).into(),
                e.map(|v| v.z).into(),
            ]
        })
        .collect();
    let mut table = Table::new(vec![
        "t", "alpha", "z_min", "z_max", "emax_x", "emax_y", "emax_z",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct ExampleConfig {
    pub coupling: f64,
    pub spec: ExampleSpec,
    pub axis: TimeAxis,
    pub tol: f64,
}

/// Correlated trajectory of a canonical family against the envelope of its
/// own calibrated marginal.
pub fn cmd_example(cfg: &ExampleConfig) -> Result<Run> {
    let state = make_state(&cfg.spec)?;
    exchange_run(&state, cfg.coupling, &cfg.axis, cfg.tol)
}

#[derive(Debug, Clone)]
pub struct TrajectoryConfig {
    pub coupling: f64,
    pub s: BlochVector,
    pub e: BlochVector,
    pub correlation: Mat3,
    pub axis: TimeAxis,
    pub tol: f64,
}

/// Same as [`cmd_example`] for an arbitrary `(s, e, C)` state.
pub fn cmd_trajectory(cfg: &TrajectoryConfig) -> Result<Run> {
    let state = JointState::new(joint_from_parts(cfg.s, cfg.e, &cfg.correlation))?;
    exchange_run(&state, cfg.coupling, &cfg.axis, cfg.tol)
}

/// Columns `t, alpha, z_corr, z_min, z_max, margin, violated`.
fn exchange_run(state: &JointState, coupling: f64, axis: &TimeAxis, tol: f64) -> Result<Run> {
    let params = check_coupling(coupling)?;
    let tol = check_tol(tol)?;
    let envelope = Envelope::new(state.system_bloch(), params)?;
    let samples = axis.samples(coupling);
    let evaluated = samples
        .par_iter()
        .map(|&(t, alpha)| {
            let z = z_observed(state, &params, t)?;
            let p = envelope.at(t);
            Ok((alpha, WitnessSample::new(t, z, p.z_min, p.z_max)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(vec![
        "t", "alpha", "z_corr", "z_min", "z_max", "margin", "violated",
    ]);
    for (alpha, s) in &evaluated {
        table.push(vec![
            s.t.into(),
            (*alpha).into(),
            s.observed.into(),
            s.lower.into(),
            s.upper.into(),
            s.margin.into(),
            s.violated(tol).into(),
        ]);
    }
    let report = WitnessReport::from_samples(evaluated.into_iter().map(|(_, s)| s).collect(), tol);
    Ok(Run { table, report })
}

#[derive(Debug, Clone)]
pub struct WitnessConfig {
    pub coupling: f64,
    pub s: BlochVector,
    pub data: PathBuf,
    pub tol: f64,
}

pub fn cmd_witness(cfg: &WitnessConfig) -> Result<WitnessReport> {
    let params = check_coupling(cfg.coupling)?;
    let tol = check_tol(cfg.tol)?;
    let data = read_trajectory(&cfg.data, Z_COLUMNS)?.in_time(cfg.coupling);
    Ok(witness_check(&data, cfg.s, &params, tol)?)
}

/// Columns `t, observed, lower, upper, margin, violated`.
pub fn report_table(report: &WitnessReport) -> Table {
    let mut table = Table::new(vec![
        "t", "observed", "lower", "upper", "margin", "violated",
    ]);
    for s in &report.samples {
        table.push(vec![
            s.t.into(),
            s.observed.into(),
            s.lower.into(),
            s.upper.into(),
            s.margin.into(),
            s.violated(report.tol).into(),
        ]);
    }
    table
}

pub fn load_gamma_table(path: &std::path::Path) -> Result<DecoherenceFunction> {
    let tr = read_trajectory(path, GAMMA_COLUMNS)?;
    Ok(DecoherenceFunction::table(&tr.samples)?)
}

#[derive(Debug, Clone)]
pub enum CoherenceSource {
    Simulated { x0: f64, grid: Grid },
    Data(PathBuf),
}

#[derive(Debug, Clone)]
pub struct DephasingConfig {
    pub gamma: DecoherenceFunction,
    pub source: CoherenceSource,
    pub tol: f64,
}

/// Columns `t, envelope, x, margin, violated`.
pub fn cmd_dephasing(cfg: &DephasingConfig) -> Result<Run> {
    let tol = check_tol(cfg.tol)?;
    let trajectory = match &cfg.source {
        CoherenceSource::Simulated { x0, grid } => x_trajectory(*x0, &cfg.gamma, &grid.points())?,
        CoherenceSource::Data(path) => {
            let samples = read_trajectory(path, X_COLUMNS)?.samples;
            let x0 = samples.first().map_or(0.0, |s| s.1);
            CoherenceTrajectory { samples, x0 }
        }
    };
    let report = dephasing_witness(&trajectory, &cfg.gamma, tol)?;
    let mut table = Table::new(vec!["t", "envelope", "x", "margin", "violated"]);
    for s in &report.samples {
        table.push(vec![
            s.t.into(),
            dephasing_envelope(&cfg.gamma, s.t)?.into(),
            s.observed.into(),
            s.margin.into(),
            s.violated(tol).into(),
        ]);
    }
    Ok(Run { table, report })
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub coupling: f64,
    pub s: BlochVector,
    pub axis: TimeAxis,
    pub resolution: usize,
    /// Pulls both analytic endpoints inwards by this amount. Only useful to
    /// check that the comparison can fail.
    pub analytic_shrink: f64,
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub table: Table,
    pub failures: usize,
    /// Largest distance between a brute-force endpoint and its analytic
    /// counterpart.
    pub max_gap: f64,
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Columns `t, alpha, z_min, z_max, bf_min, bf_max, gap, included`.
pub fn cmd_oracle_check(cfg: &OracleConfig) -> Result<OracleOutcome> {
    let params = check_coupling(cfg.coupling)?;
    let envelope = Envelope::new(cfg.s, params)?;
    let rows = cfg
        .axis
        .samples(cfg.coupling)
        .par_iter()
        .map(|&(t, alpha)| {
            let p = envelope.at(t);
            let (z_min, z_max) = (p.z_min + cfg.analytic_shrink, p.z_max - cfg.analytic_shrink);
            let (lo, hi) = brute_force_envelope(cfg.s, &params, t, cfg.resolution)?;
            let included = lo >= z_min - ORACLE_SLACK && hi <= z_max + ORACLE_SLACK;
            let gap = (z_max - hi).abs().max((lo - z_min).abs());
            Ok((t, alpha, z_min, z_max, lo, hi, gap, included))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(vec![
        "t", "alpha", "z_min", "z_max", "bf_min", "bf_max", "gap", "included",
    ]);
    let mut failures = 0;
    let mut max_gap = 0.0_f64;
    for (t, alpha, z_min, z_max, lo, hi, gap, included) in rows {
        failures += usize::from(!included);
        max_gap = max_gap.max(gap);
        table.push(vec![
            t.into(),
            alpha.into(),
            z_min.into(),
            z_max.into(),
            lo.into(),
            hi.into(),
            gap.into(),
            included.into(),
        ]);
    }
    Ok(OracleOutcome {
        table,
        failures,
        max_gap,
    })
}

/// One-paragraph human summary of a verdict.
pub fn summarize(report: &WitnessReport) -> String {
    let mut out = if report.certified {
        format!(
            "CERTIFIED: initial system-environment correlations detected ({} of {} samples outside the factorized envelope, tol {:e})",
            report.violated_count(),
            report.samples.len(),
            report.tol
        )
    } else {
        format!(
            "not certified: all {} samples are compatible with a product preparation (tol {:e}); this does not show the state was uncorrelated",
            report.samples.len(),
            report.tol
        )
    };
    if let Some(m) = report.max_violation {
        out.push_str(&format!(
            "\nlargest margin {:.6e} at t = {:.6e}",
            m.margin, m.t
        ));
    }
    for iv in &report.violation_intervals {
        out.push_str(&format!(
            "\nviolation interval [{:.6e}, {:.6e}]",
            iv.start, iv.end
        ));
    }
    out
}
