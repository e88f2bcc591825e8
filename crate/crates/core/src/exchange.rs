//! Isotropic Heisenberg exchange between the system qubit and a single
//! environment qubit.
//!
//! The exchange operator `K = σ⃗_S·σ⃗_E = 2·SWAP − I` satisfies
//! `K² = 3I − 2K`, so its exponential collapses onto the span of `I` and
//! `SWAP`. The propagator used throughout is
//!
//! ```text
//! U(t) = exp(+iJtK) = e^{-iJt} (c·I + i·d·SWAP),   c = cos 2Jt, d = sin 2Jt
//! ```
//!
//! and the global phase is dropped. Under this sign convention a product
//! preparation moves along the partial-swap arc
//!
//! ```text
//! s(t) = c² s + d² e + c d (s × e).
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{
    bloch_from_density, density_from_bloch, partial_trace_env, pauli, BlochVector, ComplexMatrix,
    JointState,
};
use crate::BLOCH_NORM_TOL;

/// Exchange coupling `J` (inverse time units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeParams {
    pub coupling: f64,
}

impl ExchangeParams {
    pub fn new(coupling: f64) -> Self {
        Self { coupling }
    }

    /// Dimensionless time `α = Jt`.
    pub fn alpha(&self, t: f64) -> f64 {
        self.coupling * t
    }

    /// Physical time for a given `α`.
    pub fn time_of(&self, alpha: f64) -> f64 {
        alpha / self.coupling
    }

    /// `(c, d) = (cos 2Jt, sin 2Jt)`.
    pub fn phases(&self, t: f64) -> (f64, f64) {
        let (d, c) = (2.0 * self.alpha(t)).sin_cos();
        (c, d)
    }
}

impl Default for ExchangeParams {
    fn default() -> Self {
        Self { coupling: 1.0 }
    }
}

pub fn swap_operator() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
}

/// `K = Σ_j σ_j ⊗ σ_j`.
pub fn exchange_operator() -> ComplexMatrix {
    (0..3).fold(ComplexMatrix::zeros(4, 4), |acc, j| {
        &acc + &pauli(j).kron(&pauli(j))
    })
}

/// `c·I + i·d·SWAP`, the exchange propagator up to a global phase.
pub fn exchange_unitary(params: &ExchangeParams, t: f64) -> ComplexMatrix {
    let (c, d) = params.phases(t);
    let id = ComplexMatrix::identity(4).scale_real(c);
    let swap = swap_operator().scale(Complex64::new(0.0, d));
    &id + &swap
}

/// `U(t) ρ U†(t)`.
pub fn evolve_joint(state: &JointState, params: &ExchangeParams, t: f64) -> Result<JointState> {
    let u = exchange_unitary(params, t);
    JointState::new(state.rho().conjugate_by(&u))
}

/// Reduced system Bloch vector of an evolved product state, in closed form.
pub fn partial_swap_bloch(
    s: BlochVector,
    e: BlochVector,
    params: &ExchangeParams,
    t: f64,
) -> Result<BlochVector> {
    s.validate(BLOCH_NORM_TOL)?;
    e.validate(BLOCH_NORM_TOL)?;
    let (c, d) = params.phases(t);
    Ok(s * (c * c) + e * (d * d) + s.cross(e) * (c * d))
}

/// `z(t) = c² s_z + d² e_z + c d (s_x e_y − s_y e_x)` for product states.
pub fn z_factorized(
    s: BlochVector,
    e: BlochVector,
    params: &ExchangeParams,
    t: f64,
) -> Result<f64> {
    s.validate(BLOCH_NORM_TOL)?;
    e.validate(BLOCH_NORM_TOL)?;
    let (c, d) = params.phases(t);
    Ok(c * c * s.z + d * d * e.z + c * d * (s.x * e.y - s.y * e.x))
}

/// System Bloch vector after full joint evolution; valid for any
/// (possibly correlated) initial state.
pub fn system_bloch_at(state: &JointState, params: &ExchangeParams, t: f64) -> Result<BlochVector> {
    let u = exchange_unitary(params, t);
    let evolved = state.rho().conjugate_by(&u);
    bloch_from_density(&partial_trace_env(&evolved)?)
}

/// `⟨σ_z^S⟩(t)` from full joint evolution.
pub fn z_observed(state: &JointState, params: &ExchangeParams, t: f64) -> Result<f64> {
    Ok(system_bloch_at(state, params, t)?.z)
}

/// Part of `s(t)` not explained by the partial-swap law of the initial
/// marginals: full evolution minus `partial_swap_bloch(s, e)`.
///
/// Vanishes for every product state. The converse does not hold pointwise:
/// at `t = 0` the deviation is zero for every state.
pub fn deviation_vector(
    state: &JointState,
    params: &ExchangeParams,
    t: f64,
) -> Result<BlochVector> {
    let full = system_bloch_at(state, params, t)?;
    let pswap = partial_swap_bloch(state.system_bloch(), state.env_bloch(), params, t)?;
    Ok(full - pswap)
}

/// `ρ_S ⊗ ρ_E` evolved and reduced, i.e. the route [`partial_swap_bloch`]
/// is meant to shortcut.
pub fn evolve_product_bloch(
    s: BlochVector,
    e: BlochVector,
    params: &ExchangeParams,
    t: f64,
) -> Result<BlochVector> {
    let rho = density_from_bloch(s)?.kron(&density_from_bloch(e)?);
    let evolved = rho.conjugate_by(&exchange_unitary(params, t));
    bloch_from_density(&partial_trace_env(&evolved)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    use super::*;
    use crate::linalg::{joint_from_parts, ComplexMatrix};

    const J: ExchangeParams = ExchangeParams { coupling: 0.7 };

    fn bell() -> JointState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ket = [
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(0.0, h),
            Complex64::new(0.0, 0.0),
        ];
        JointState::new(ComplexMatrix::outer(&ket)).unwrap()
    }

    #[test]
    fn exchange_operator_quadratic_identity() {
        let k = exchange_operator();
        let k2 = &k * &k;
        let residual = &(&k2 + &k.scale_real(2.0)) - &ComplexMatrix::identity(4).scale_real(3.0);
        assert!(residual.max_abs() < 1e-14);
        assert!(k.trace().norm() < 1e-15);
    }

    #[test]
    fn exchange_operator_is_two_swap_minus_identity() {
        let expected = &swap_operator().scale_real(2.0) - &ComplexMatrix::identity(4);
        assert_eq!(exchange_operator(), expected);
    }

    #[test]
    fn unitary_endpoints() {
        assert_eq!(exchange_unitary(&J, 0.0), ComplexMatrix::identity(4));
        // 2Jt = π/2: a full SWAP up to a phase.
        let u = exchange_unitary(&J, FRAC_PI_4 / J.coupling);
        let overlap = (&swap_operator().adjoint() * &u).trace().norm();
        assert!((overlap - 4.0).abs() < 1e-14);
    }

    #[test]
    fn unitarity_on_a_grid() {
        for i in 0..100 {
            let t = -3.0 + 0.0613 * i as f64;
            let u = exchange_unitary(&J, t);
            let uu = &u.adjoint() * &u;
            assert!(
                uu.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13,
                "t = {t}"
            );
        }
    }

    #[test]
    fn maximally_mixed_is_stationary() {
        let mixed = JointState::new(ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        for t in [0.0, 0.3, 1.1, 5.0] {
            let out = evolve_joint(&mixed, &J, t).unwrap();
            assert!(out.rho().max_abs_diff(mixed.rho()) < 1e-15);
        }
    }

    #[test]
    fn full_swap_exchanges_marginals() {
        let s = BlochVector::new(0.2, -0.3, 0.5);
        let e = BlochVector::new(-0.6, 0.1, 0.4);
        let state = JointState::product(s, e).unwrap();
        let swapped = JointState::product(e, s).unwrap();
        let out = evolve_joint(&state, &J, FRAC_PI_4 / J.coupling).unwrap();
        assert!(out.rho().max_abs_diff(swapped.rho()) < 1e-15);
    }

    #[test]
    fn bell_marginal_populations() {
        let state = bell();
        for i in 0..50 {
            let t = 0.05 * i as f64;
            let out = evolve_joint(&state, &J, t).unwrap();
            let red = out.system_marginal();
            let p0 = 0.5 * (1.0 - (4.0 * J.coupling * t).sin());
            assert!((red[(0, 0)].re - p0).abs() < 1e-14);
            assert!((red[(1, 1)].re - (1.0 - p0)).abs() < 1e-14);
            assert!(red[(0, 1)].norm() < 1e-15);
        }
    }

    #[test]
    fn evolution_preserves_spectrum() {
        let s = BlochVector::new(0.3, 0.1, -0.2);
        let state = JointState::product(s, BlochVector::Y).unwrap();
        let before = crate::linalg::hermitian_eigenvalues(state.rho());
        let after =
            crate::linalg::hermitian_eigenvalues(evolve_joint(&state, &J, 0.77).unwrap().rho());
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_swap_special_cases() {
        let s = BlochVector::new(0.1, 0.5, -0.3);
        let e = BlochVector::new(0.4, -0.2, 0.6);
        assert_eq!(partial_swap_bloch(s, e, &J, 0.0).unwrap(), s);
        let at_swap = partial_swap_bloch(s, e, &J, FRAC_PI_4 / J.coupling).unwrap();
        assert!(at_swap.max_abs_diff(e) < 1e-15);

        let t = 0.41;
        let (c, d) = J.phases(t);
        let v = partial_swap_bloch(BlochVector::Z, BlochVector::X, &J, t).unwrap();
        assert!(v.max_abs_diff(BlochVector::new(d * d, c * d, c * c)) < 1e-15);
        assert!(
            v.max_abs_diff(evolve_product_bloch(BlochVector::Z, BlochVector::X, &J, t).unwrap())
                < 1e-15
        );
    }

    #[test]
    fn partial_swap_rejects_invalid_vectors() {
        let bad = BlochVector::new(0.8, 0.8, 0.0);
        assert!(partial_swap_bloch(bad, BlochVector::ZERO, &J, 0.1).is_err());
        assert!(z_factorized(BlochVector::ZERO, bad, &J, 0.1).is_err());
    }

    #[test]
    fn z_factorized_reductions() {
        let t = 0.93;
        let (c, d) = J.phases(t);
        let p = 0.35;
        let ez = -0.7;
        let s = BlochVector::new(0.0, 0.0, p);
        let e = BlochVector::new(0.0, 0.0, ez);
        assert!((z_factorized(s, e, &J, t).unwrap() - (c * c * p + d * d * ez)).abs() < 1e-15);
        assert!((z_factorized(BlochVector::ZERO, e, &J, t).unwrap() - d * d * ez).abs() < 1e-15);
        assert!((z_factorized(s, BlochVector::ZERO, &J, t).unwrap() - c * c * p).abs() < 1e-15);

        let s = BlochVector::new(0.3, -0.4, 0.2);
        let e = BlochVector::new(-0.5, 0.6, 0.1);
        let z = z_factorized(s, e, &J, t).unwrap();
        assert!((z - partial_swap_bloch(s, e, &J, t).unwrap().z).abs() < 1e-14);
    }

    #[test]
    fn bell_signal() {
        let state = bell();
        for i in 0..40 {
            let t = 0.1 * i as f64;
            let z = z_observed(&state, &J, t).unwrap();
            assert!((z + (4.0 * J.coupling * t).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn deviation_vanishes_for_products() {
        let state = JointState::product(
            BlochVector::new(0.3, 0.2, 0.1),
            BlochVector::new(0.0, -0.5, 0.5),
        )
        .unwrap();
        for i in 0..20 {
            let dev = deviation_vector(&state, &J, 0.17 * i as f64).unwrap();
            assert!(dev.norm() < 1e-14);
        }
    }

    #[test]
    fn bell_deviation_at_quarter_period() {
        // 2Jt = π/4: z_obs = −sin(π/2) = −1 while the marginals predict 0.
        let t = PI / 8.0 / J.coupling;
        let dev = deviation_vector(&bell(), &J, t).unwrap();
        assert!((dev.z + 1.0).abs() < 1e-14);
    }

    #[test]
    fn deviation_is_zero_at_start_even_when_correlated() {
        let dev = deviation_vector(&bell(), &J, 0.0).unwrap();
        assert!(dev.norm() < 1e-15);
    }

    #[test]
    fn deviation_of_max_mixed_is_zero() {
        let mixed = JointState::new(joint_from_parts(
            BlochVector::ZERO,
            BlochVector::ZERO,
            &[[0.0; 3]; 3],
        ))
        .unwrap();
        assert!(deviation_vector(&mixed, &J, FRAC_PI_2).unwrap().norm() < 1e-15);
    }

    #[test]
    fn signal_period() {
        let state = bell();
        let period = PI / J.coupling;
        for i in 0..30 {
            let t = 0.11 * i as f64;
            let a = z_observed(&state, &J, t).unwrap();
            let b = z_observed(&state, &J, t + period).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }
}
