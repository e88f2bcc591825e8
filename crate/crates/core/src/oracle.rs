//! Brute-force checks for the closed forms.
//!
//! Nothing here uses the `c·I + i·d·SWAP` factorization, the partial-swap
//! law or the envelope formula: the propagator is a generic Taylor
//! exponential of the generator `iJtK`, and the envelope is found by
//! evolving every pure environment state on a Fibonacci sphere.

use crate::error::{Error, Result};
use crate::exchange::{exchange_operator, ExchangeParams};
use crate::linalg::{density_from_bloch, partial_trace_env, pauli, BlochVector, ComplexMatrix};
use num_complex::Complex64;

pub const MIN_RESOLUTION: usize = 8;

/// `exp(M)` by scaling and squaring of a truncated Taylor series.
pub fn expm(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(m.is_square());
    let n = m.rows();
    let norm = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale_real(0.5_f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(iJtK)` evaluated numerically.
pub fn matrix_exponential_unitary(params: &ExchangeParams, t: f64) -> ComplexMatrix {
    let generator = exchange_operator().scale(Complex64::new(0.0, params.alpha(t)));
    expm(&generator)
}

/// `dim − |Tr(U₁†U₂)|`; zero iff the unitaries agree up to a global phase.
pub fn phase_insensitive_distance(u1: &ComplexMatrix, u2: &ComplexMatrix) -> f64 {
    u1.rows() as f64 - (&u1.adjoint() * u2).trace().norm()
}

/// `n` nearly uniform unit vectors on the golden-angle spiral.
pub fn fibonacci_sphere(n: usize) -> Vec<BlochVector> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (sin, cos) = (golden_angle * i as f64).sin_cos();
            BlochVector::new(r * cos, r * sin, z)
        })
        .collect()
}

/// Sampling directions for a given resolution: the union of Fibonacci
/// spheres of size `resolution`, `resolution/2`, `resolution/4`, … down to
/// [`MIN_RESOLUTION`]. The chain for `2n` contains the chain for `n`, so
/// doubling the resolution can only tighten the brute-force interval.
pub fn nested_directions(resolution: usize) -> Vec<BlochVector> {
    std::iter::successors(Some(resolution), |&n| Some(n / 2))
        .take_while(|&n| n >= MIN_RESOLUTION)
        .flat_map(fibonacci_sphere)
        .collect()
}

/// Range of `z(t)` over product preparations with pure environments drawn
/// from [`nested_directions`], each evolved through the full 4×4 state with
/// [`matrix_exponential_unitary`].
pub fn brute_force_envelope(
    s: BlochVector,
    params: &ExchangeParams,
    t: f64,
    resolution: usize,
) -> Result<(f64, f64)> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidResolution(resolution));
    }
    let rho_s = density_from_bloch(s)?;
    let u = matrix_exponential_unitary(params, t);
    let u_dag = u.adjoint();
    let sz = pauli(2);

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for e in nested_directions(resolution) {
        let rho = rho_s.kron(&density_from_bloch(e)?);
        let evolved = &(&u * &rho) * &u_dag;
        let z = partial_trace_env(&evolved)?.expectation(&sz).re;
        lo = lo.min(z);
        hi = hi.max(z);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::exchange::exchange_unitary;
    use crate::linalg::hermitian_eigenvalues;

    const J: ExchangeParams = ExchangeParams { coupling: 1.1 };

    #[test]
    fn identity_at_start() {
        assert_eq!(
            matrix_exponential_unitary(&J, 0.0),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn exponential_is_unitary_and_matches_closed_form() {
        for i in 0..100 {
            let t = -5.0 + 0.1 * i as f64;
            let u = matrix_exponential_unitary(&J, t);
            assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
            assert!(phase_insensitive_distance(&u, &exchange_unitary(&J, t)) < 1e-10);
        }
    }

    #[test]
    fn exponential_of_diagonal_matches_scalar_exp() {
        let m = ComplexMatrix::diag(&[Complex64::new(0.3, 2.0), Complex64::new(-1.5, 0.1)]);
        let e = expm(&m);
        assert!((e[(0, 0)] - Complex64::new(0.3, 2.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - Complex64::new(-1.5, 0.1).exp()).norm() < 1e-14);
    }

    #[test]
    fn exchange_spectrum() {
        let ev = hermitian_eigenvalues(&exchange_operator());
        let want = [-3.0, 1.0, 1.0, 1.0];
        for (g, w) in ev.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        // Tr exp(iθK) = 3e^{iθ} + e^{−3iθ}.
        let theta = 0.37;
        let u = matrix_exponential_unitary(&ExchangeParams::new(1.0), theta);
        let want = Complex64::from_polar(3.0, theta) + Complex64::from_polar(1.0, -3.0 * theta);
        assert!((u.trace() - want).norm() < 1e-12);
    }

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let pts = fibonacci_sphere(500);
        assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-14));
        let mean = pts.iter().fold(BlochVector::ZERO, |a, &p| a + p) * (1.0 / 500.0);
        assert!(mean.norm() < 0.01);
    }

    #[test]
    fn nested_directions_are_nested() {
        let small = nested_directions(100);
        let big = nested_directions(200);
        assert_eq!(small.len(), 100 + 50 + 25 + 12);
        assert!(small.iter().all(|p| big.contains(p)));
    }

    #[test]
    fn blank_marginal_at_full_swap() {
        let (lo, hi) =
            brute_force_envelope(BlochVector::ZERO, &J, PI / (4.0 * J.coupling), 1000).unwrap();
        assert!((lo + 1.0).abs() < 0.01 && (hi - 1.0).abs() < 0.01);
        assert!(lo >= -1.0 - 1e-12 && hi <= 1.0 + 1e-12);
    }

    #[test]
    fn no_evolution_at_start() {
        let (lo, hi) = brute_force_envelope(BlochVector::Z, &J, 0.0, 64).unwrap();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polarized_quarter_swap() {
        // c² = d² = ½: bounds 0.25 ± 0.5.
        let s = BlochVector::new(0.0, 0.0, 0.5);
        let (lo, hi) = brute_force_envelope(s, &J, PI / (8.0 * J.coupling), 2000).unwrap();
        assert!((lo + 0.25).abs() < 0.01, "{lo}");
        assert!((hi - 0.75).abs() < 0.01, "{hi}");
    }

    #[test]
    fn resolution_floor() {
        assert!(matches!(
            brute_force_envelope(BlochVector::ZERO, &J, 0.1, 7),
            Err(Error::InvalidResolution(7))
        ));
        assert!(brute_force_envelope(BlochVector::ZERO, &J, 0.1, 8).is_ok());
    }
}
