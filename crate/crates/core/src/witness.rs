//! Factorized envelope for `z(t)` and the one-sided correlation witness.
//!
//! For a fixed calibrated system vector `s`, the signal of a product
//! preparation is affine in the environment vector:
//! `z(t) = b(t) + a(t)·e` with `b = c² s_z` and
//! `a = (−c d s_y, c d s_x, d²)`. Its range over the Bloch ball is
//! `b ± |a|`, attained by the pure environment states `±a/|a|`.
//!
//! A report with `certified == false` only says the sampled values are
//! compatible with some product preparation. It is never evidence that the
//! initial state was uncorrelated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::ExchangeParams;
use crate::linalg::BlochVector;
use crate::states::{closed_form_z, ExampleSpec, Family};
use crate::BLOCH_NORM_TOL;

/// Extrema of `f(e) = a·e + b` over `|e| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineExtrema {
    pub min: f64,
    pub max: f64,
    /// `a/|a|`, or `None` when `a = 0` and every `e` is extremal.
    pub argmax: Option<BlochVector>,
}

impl AffineExtrema {
    pub fn is_degenerate(&self) -> bool {
        self.argmax.is_none()
    }
}

pub fn affine_extrema(a: BlochVector, b: f64) -> AffineExtrema {
    let norm = a.norm();
    AffineExtrema {
        min: b - norm,
        max: b + norm,
        argmax: (norm > 0.0).then(|| BlochVector::new(a.x / norm, a.y / norm, a.z / norm)),
    }
}

/// Envelope value at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub t: f64,
    pub z_min: f64,
    pub z_max: f64,
    /// Pure environment state reaching `z_max`; `None` when the interval has
    /// collapsed (`d = 0`).
    pub argmax: Option<BlochVector>,
}

impl EnvelopePoint {
    /// Pure environment state reaching `z_min`.
    pub fn argmin(&self) -> Option<BlochVector> {
        self.argmax.map(|e| -e)
    }

    pub fn contains(&self, z: f64, tol: f64) -> bool {
        z >= self.z_min - tol && z <= self.z_max + tol
    }

    /// `max(z_min − z, z − z_max)`; positive means outside.
    pub fn margin(&self, z: f64) -> f64 {
        (self.z_min - z).max(z - self.z_max)
    }
}

/// Set of signals `z(t)` reachable from product preparations sharing a
/// calibrated system vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    s: BlochVector,
    params: ExchangeParams,
}

impl Envelope {
    pub fn new(s: BlochVector, params: ExchangeParams) -> Result<Self> {
        s.validate(BLOCH_NORM_TOL)?;
        Ok(Self { s, params })
    }

    pub fn system_bloch(&self) -> BlochVector {
        self.s
    }

    pub fn params(&self) -> ExchangeParams {
        self.params
    }

    /// `(a(t), b(t))` with `z = b + a·e` for product preparations.
    pub fn coefficients(&self, t: f64) -> (BlochVector, f64) {
        let (c, d) = self.params.phases(t);
        let s = self.s;
        let a = BlochVector::new(-c * d * s.y, c * d * s.x, d * d);
        (a, c * c * s.z)
    }

    pub fn at(&self, t: f64) -> EnvelopePoint {
        let (c, d) = self.params.phases(t);
        let s = self.s;
        let transverse = s.x * s.x + s.y * s.y;
        let half_width = d.abs() * (d * d + c * c * transverse).sqrt();
        let centre = c * c * s.z;
        let (a, b) = self.coefficients(t);
        EnvelopePoint {
            t,
            z_min: centre - half_width,
            z_max: centre + half_width,
            argmax: affine_extrema(a, b).argmax,
        }
    }
}

/// Closed-form envelope `c² s_z ± |d|·sqrt(d² + c²(s_x² + s_y²))`.
pub fn envelope_heisenberg(
    s: BlochVector,
    params: &ExchangeParams,
    t: f64,
) -> Result<EnvelopePoint> {
    Ok(Envelope::new(s, *params)?.at(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessSample {
    pub t: f64,
    pub observed: f64,
    pub lower: f64,
    pub upper: f64,
    /// `max(lower − observed, observed − upper)`.
    pub margin: f64,
}

impl WitnessSample {
    pub fn new(t: f64, observed: f64, lower: f64, upper: f64) -> Self {
        Self {
            t,
            observed,
            lower,
            upper,
            margin: (lower - observed).max(observed - upper),
        }
    }

    pub fn violated(&self, tol: f64) -> bool {
        self.margin > tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxMargin {
    pub t: f64,
    pub margin: f64,
}

/// Per-sample margins and the one-sided verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub samples: Vec<WitnessSample>,
    pub violation_intervals: Vec<TimeInterval>,
    /// At least one sample lies outside the envelope by more than `tol`.
    pub certified: bool,
    /// Sample with the largest signed margin, violated or not.
    pub max_violation: Option<MaxMargin>,
    pub tol: f64,
}

impl WitnessReport {
    /// Builds the report from bounded samples, sorted by time.
    pub fn from_samples(mut samples: Vec<WitnessSample>, tol: f64) -> Self {
        samples.sort_by(|a, b| a.t.total_cmp(&b.t));
        let certified = samples.iter().any(|s| s.violated(tol));
        let max_violation = samples
            .iter()
            .max_by(|a, b| a.margin.total_cmp(&b.margin))
            .map(|s| MaxMargin {
                t: s.t,
                margin: s.margin,
            });
        Self {
            violation_intervals: violation_intervals(&samples, tol),
            samples,
            certified,
            max_violation,
            tol,
        }
    }

    pub fn violated_count(&self) -> usize {
        self.samples.iter().filter(|s| s.violated(self.tol)).count()
    }
}

/// Maximal runs of violated samples. Interior endpoints are placed where the
/// linearly interpolated margin crosses `tol`; runs touching either end of
/// the grid stop at the first/last sample time.
pub fn violation_intervals(samples: &[WitnessSample], tol: f64) -> Vec<TimeInterval> {
    let crossing = |a: &WitnessSample, b: &WitnessSample| {
        let frac = (tol - a.margin) / (b.margin - a.margin);
        a.t + frac * (b.t - a.t)
    };

    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for (i, cur) in samples.iter().enumerate() {
        let on = cur.violated(tol);
        match (start, on) {
            (None, true) => {
                start = Some(if i == 0 {
                    cur.t
                } else {
                    crossing(&samples[i - 1], cur)
                });
            }
            (Some(s), false) => {
                out.push(TimeInterval {
                    start: s,
                    end: crossing(&samples[i - 1], cur),
                });
                start = None;
            }
            _ => {}
        }
    }
    if let (Some(s), Some(last)) = (start, samples.last()) {
        out.push(TimeInterval {
            start: s,
            end: last.t,
        });
    }
    out
}

/// Compares observed `(t, z)` pairs with the envelope of `s`.
pub fn witness_check(
    observed: &[(f64, f64)],
    s: BlochVector,
    params: &ExchangeParams,
    tol: f64,
) -> Result<WitnessReport> {
    let envelope = Envelope::new(s, *params)?;
    let samples = observed
        .iter()
        .map(|&(t, z)| {
            if !t.is_finite() || !z.is_finite() {
                return Err(Error::NonFinite("observed sample"));
            }
            let env = envelope.at(t);
            Ok(WitnessSample::new(t, z, env.z_min, env.z_max))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessReport::from_samples(samples, tol))
}

/// `n` times strictly inside one swap period, `2Jt ∈ (0, π)`.
pub fn half_period_grid(params: &ExchangeParams, n: usize) -> Vec<f64> {
    let span = std::f64::consts::PI / (2.0 * params.coupling);
    (1..=n).map(|i| span * i as f64 / (n + 1) as f64).collect()
}

/// Times on `grid` where the maximally-mixed/entangled mixture of weight `p`
/// leaves the blank-marginal envelope `±sin²(2Jt)`.
pub fn violation_times_example3(
    p: f64,
    params: &ExchangeParams,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<TimeInterval>> {
    let spec = ExampleSpec::new(Family::MaxMixedEntangledMixture, p)?;
    let observed = grid
        .iter()
        .map(|&t| (t, closed_form_z(&spec, params, t)))
        .collect::<Vec<_>>();
    Ok(witness_check(&observed, BlochVector::ZERO, params, tol)?.violation_intervals)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::exchange::z_factorized;
    use crate::DEFAULT_WITNESS_TOL;

    const P: ExchangeParams = ExchangeParams { coupling: 1.3 };

    #[test]
    fn affine_extrema_cases() {
        let r = affine_extrema(BlochVector::Z, 0.0);
        assert_eq!((r.min, r.max, r.argmax), (-1.0, 1.0, Some(BlochVector::Z)));

        let r = affine_extrema(BlochVector::ZERO, 0.3);
        assert_eq!((r.min, r.max), (0.3, 0.3));
        assert!(r.is_degenerate());

        let r = affine_extrema(BlochVector::new(3.0, 4.0, 0.0), 1.0);
        assert_eq!((r.min, r.max), (-4.0, 6.0));
        assert!(
            r.argmax
                .unwrap()
                .max_abs_diff(BlochVector::new(0.6, 0.8, 0.0))
                < 1e-16
        );
    }

    #[test]
    fn blank_marginal_envelope_is_sin_squared() {
        for i in 0..50 {
            let t = 0.07 * i as f64;
            let env = envelope_heisenberg(BlochVector::ZERO, &P, t).unwrap();
            let w = (2.0 * P.coupling * t).sin().powi(2);
            assert!((env.z_max - w).abs() < 1e-15);
            assert!((env.z_min + w).abs() < 1e-15);
        }
    }

    #[test]
    fn polarized_envelope() {
        let p = 0.45;
        for i in 0..50 {
            let t = 0.07 * i as f64;
            let env = envelope_heisenberg(BlochVector::new(0.0, 0.0, p), &P, t).unwrap();
            let (c, d) = P.phases(t);
            assert!((env.z_max - (c * c * p + d * d)).abs() < 1e-15);
            assert!((env.z_min - (c * c * p - d * d)).abs() < 1e-15);
        }
    }

    #[test]
    fn envelope_collapses_at_start() {
        let s = BlochVector::new(0.3, 0.4, -0.5);
        let env = envelope_heisenberg(s, &P, 0.0).unwrap();
        assert_eq!((env.z_min, env.z_max), (s.z, s.z));
        assert!(env.argmax.is_none());
    }

    #[test]
    fn envelope_opens_fully_at_swap() {
        let s = BlochVector::new(0.3, 0.4, -0.5);
        let env = envelope_heisenberg(s, &P, PI / (4.0 * P.coupling)).unwrap();
        assert!((env.z_min + 1.0).abs() < 1e-15 && (env.z_max - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_environment_reaches_bounds() {
        let s = BlochVector::new(0.3, -0.6, 0.2);
        for i in 1..40 {
            let t = 0.09 * i as f64;
            let env = envelope_heisenberg(s, &P, t).unwrap();
            let emax = env.argmax.unwrap();
            assert!((emax.norm() - 1.0).abs() < 1e-15);
            assert!((z_factorized(s, emax, &P, t).unwrap() - env.z_max).abs() < 1e-13);
            assert!(
                (z_factorized(s, env.argmin().unwrap(), &P, t).unwrap() - env.z_min).abs() < 1e-13
            );
        }
    }

    #[test]
    fn envelope_rejects_invalid_s() {
        assert!(envelope_heisenberg(BlochVector::new(1.0, 1.0, 0.0), &P, 0.1).is_err());
    }

    #[test]
    fn bell_witness_at_reference_time() {
        let t_star = 3.0 * PI / (8.0 * P.coupling);
        let report =
            witness_check(&[(t_star, 1.0)], BlochVector::ZERO, &P, DEFAULT_WITNESS_TOL).unwrap();
        assert!(report.certified);
        let s = report.samples[0];
        assert!((s.lower + 0.5).abs() < 1e-15 && (s.upper - 0.5).abs() < 1e-15);
        assert!((s.margin - 0.5).abs() < 1e-15);
    }

    #[test]
    fn factorized_data_is_never_certified() {
        let s = BlochVector::new(0.2, 0.1, 0.3);
        let e = BlochVector::new(-0.5, 0.4, 0.2);
        let data: Vec<_> = (0..200)
            .map(|i| {
                let t = 0.013 * i as f64;
                (t, z_factorized(s, e, &P, t).unwrap())
            })
            .collect();
        let report = witness_check(&data, s, &P, DEFAULT_WITNESS_TOL).unwrap();
        assert!(!report.certified);
        assert!(report.samples.iter().all(|x| x.margin <= 0.0));
        assert!(report.violation_intervals.is_empty());
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        let r = witness_check(&[(0.0, f64::NAN)], BlochVector::ZERO, &P, 1e-9);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn interval_endpoints_are_interpolated() {
        let samples = vec![
            WitnessSample::new(0.0, 0.0, -1.0, 1.0), // margin -1
            WitnessSample::new(1.0, 2.0, -1.0, 1.0), // margin 1
            WitnessSample::new(2.0, 2.0, -1.0, 1.0), // margin 1
            WitnessSample::new(3.0, 0.0, -1.0, 1.0), // margin -1
        ];
        let iv = violation_intervals(&samples, 0.0);
        assert_eq!(
            iv,
            vec![TimeInterval {
                start: 0.5,
                end: 2.5
            }]
        );

        let edge = violation_intervals(&samples[1..3], 0.0);
        assert_eq!(
            edge,
            vec![TimeInterval {
                start: 1.0,
                end: 2.0
            }]
        );
    }

    #[test]
    fn report_sorts_and_tracks_max_margin() {
        let samples = vec![
            WitnessSample::new(2.0, 0.0, -1.0, 1.0),
            WitnessSample::new(1.0, 0.8, -1.0, 0.5),
        ];
        let r = WitnessReport::from_samples(samples, 1e-9);
        assert_eq!(r.samples[0].t, 1.0);
        let m = r.max_violation.unwrap();
        assert_eq!(m.t, 1.0);
        assert!((m.margin - 0.3).abs() < 1e-15);
        assert_eq!(r.violated_count(), 1);
    }

    #[test]
    fn example3_flat_signal_never_violates() {
        let grid = half_period_grid(&P, 2000);
        assert!(
            violation_times_example3(1.0, &P, &grid, DEFAULT_WITNESS_TOL)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn example3_violations_for_strong_entanglement() {
        let grid = half_period_grid(&P, 2000);
        let iv = violation_times_example3(0.1, &P, &grid, DEFAULT_WITNESS_TOL).unwrap();
        assert!(!iv.is_empty());
        let total: f64 = iv.iter().map(|i| i.end - i.start).sum();
        // |0.9 sin 4Jt| > sin² 2Jt ⇔ |tan 2Jt| < 1.8 on (0, π): a large share of the period.
        let span = PI / (2.0 * P.coupling);
        assert!(total > 0.5 * span);
    }

    #[test]
    fn example3_rejects_bad_weight() {
        assert!(violation_times_example3(1.2, &P, &[0.1], 1e-9).is_err());
    }
}
