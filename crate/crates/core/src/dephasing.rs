//! Pure dephasing of the system qubit by an infinite bosonic bath.
//!
//! Work is done in the frame co-rotating with the qubit splitting, so a
//! product preparation only loses coherence: `ρ_01(t) = ρ_01(0) e^{−Γ(t)}`
//! and `x(t) = x(0) e^{−Γ(t)}`. Because `|x(0)| ≤ 1`, every product
//! preparation obeys `|x(t)| ≤ e^{−Γ(t)}`.
//!
//! `Γ(t)` is supplied by the caller; nothing here derives it from a
//! spectral density.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{validate_density, ComplexMatrix, DensityTolerance};
use crate::witness::{WitnessReport, WitnessSample};

/// Decoherence function `Γ(t)` with `Γ(0) = 0` and `Γ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecoherenceFunction {
    /// Piecewise-linear interpolation of `(t, Γ)` samples starting at
    /// `(0, 0)`. Times outside the table are an error.
    Table { times: Vec<f64>, values: Vec<f64> },
    /// `Γ(t) = κ t^η`.
    PowerLaw { kappa: f64, eta: f64 },
    /// `Γ(t) = κ t`.
    Linear { rate: f64 },
}

impl DecoherenceFunction {
    pub fn table(points: &[(f64, f64)]) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidDecoherence(msg));
        if points.is_empty() {
            return invalid("empty table".into());
        }
        if points.iter().any(|(t, g)| !t.is_finite() || !g.is_finite()) {
            return Err(Error::NonFinite("decoherence table entry"));
        }
        if points[0] != (0.0, 0.0) {
            return invalid(format!(
                "table must start at (0, 0), got ({}, {})",
                points[0].0, points[0].1
            ));
        }
        if let Some(&(t, value)) = points.iter().find(|(_, g)| *g < 0.0) {
            return Err(Error::NegativeDecoherence { t, value });
        }
        if let Some(w) = points.windows(2).find(|w| w[1].0 <= w[0].0) {
            return invalid(format!(
                "table times must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            ));
        }
        Ok(Self::Table {
            times: points.iter().map(|p| p.0).collect(),
            values: points.iter().map(|p| p.1).collect(),
        })
    }

    pub fn power_law(kappa: f64, eta: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0 && eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidDecoherence(format!(
                "power law needs κ > 0 and η > 0, got κ = {kappa}, η = {eta}"
            )));
        }
        Ok(Self::PowerLaw { kappa, eta })
    }

    pub fn linear(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidDecoherence(format!(
                "linear rate must be non-negative, got {rate}"
            )));
        }
        Ok(Self::Linear { rate })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::NonFinite("time"));
        }
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let value = match self {
            Self::Linear { rate } => rate * t,
            Self::PowerLaw { kappa, eta } => kappa * t.powf(*eta),
            Self::Table { times, values } => {
                let last = *times.last().expect("validated table is non-empty");
                if t > last {
                    return Err(Error::OutOfTableRange(t));
                }
                // First index with times[i] >= t.
                let i = times.partition_point(|&x| x < t);
                if times[i] == t {
                    values[i]
                } else {
                    let (t0, t1) = (times[i - 1], times[i]);
                    let (g0, g1) = (values[i - 1], values[i]);
                    g0 + (g1 - g0) * (t - t0) / (t1 - t0)
                }
            }
        };
        if value < 0.0 || value.is_nan() {
            return Err(Error::NegativeDecoherence { t, value });
        }
        Ok(value)
    }
}

impl FromStr for DecoherenceFunction {
    type Err = Error;

    /// `linear:κ` or `power:κ,η`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidDecoherence(format!(
                "cannot parse '{s}' (expected linear:RATE or power:KAPPA,ETA)"
            ))
        };
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (kind.trim(), nums.as_slice()) {
            ("linear", [rate]) => Self::linear(*rate),
            ("power", [kappa, eta]) => Self::power_law(*kappa, *eta),
            _ => Err(bad()),
        }
    }
}

/// Observed or simulated `x(t) = ⟨σ_x⟩(t)` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceTrajectory {
    pub samples: Vec<(f64, f64)>,
    pub x0: f64,
}

/// Reduced state after dephasing: populations kept, coherences scaled by
/// `e^{−Γ(t)}`.
pub fn dephased_state(
    rho0: &ComplexMatrix,
    gamma: &DecoherenceFunction,
    t: f64,
) -> Result<ComplexMatrix> {
    if (rho0.rows(), rho0.cols()) != (2, 2) {
        return Err(Error::Dimension {
            expected: "2x2",
            rows: rho0.rows(),
            cols: rho0.cols(),
        });
    }
    validate_density(rho0, &DensityTolerance::default()).map_err(Error::InvalidDensity)?;
    let decay = (-gamma.eval(t)?).exp();
    let mut rho = rho0.clone();
    rho[(0, 1)] *= decay;
    rho[(1, 0)] *= decay;
    Ok(rho)
}

pub fn x_trajectory(
    x0: f64,
    gamma: &DecoherenceFunction,
    times: &[f64],
) -> Result<CoherenceTrajectory> {
    if x0.is_nan() || x0.abs() > 1.0 {
        return Err(Error::InvalidCoherence(x0));
    }
    let samples = times
        .iter()
        .map(|&t| Ok((t, x0 * (-gamma.eval(t)?).exp())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceTrajectory { samples, x0 })
}

/// `e^{−Γ(t)}`, the largest `|x(t)|` any product preparation can show.
pub fn dephasing_envelope(gamma: &DecoherenceFunction, t: f64) -> Result<f64> {
    Ok((-gamma.eval(t)?).exp())
}

/// Certified iff `|x(t)| > e^{−Γ(t)} + tol` at some sample.
pub fn dephasing_witness(
    observed: &CoherenceTrajectory,
    gamma: &DecoherenceFunction,
    tol: f64,
) -> Result<WitnessReport> {
    let samples = observed
        .samples
        .iter()
        .map(|&(t, x)| {
            if !x.is_finite() {
                return Err(Error::NonFinite("observed coherence"));
            }
            let bound = dephasing_envelope(gamma, t)?;
            Ok(WitnessSample::new(t, x, -bound, bound))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessReport::from_samples(samples, tol))
}
