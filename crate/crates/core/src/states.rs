//! The three canonical correlated preparations and their closed-form signals.
//!
//! All three are built on `|Ψ⟩ = (|01⟩ + i|10⟩)/√2`. The relative phase `i`
//! fixes the sign of the oscillating term in `z(t)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::ExchangeParams;
use crate::linalg::{ComplexMatrix, JointState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `|Ψ⟩⟨Ψ|`.
    Bell,
    /// `p|01⟩⟨01| + (1 − p)|Ψ⟩⟨Ψ|`.
    ProductEntangledMixture,
    /// `p I₄/4 + (1 − p)|Ψ⟩⟨Ψ|`.
    MaxMixedEntangledMixture,
}

impl Family {
    pub const ALL: [Family; 3] = [
        Family::Bell,
        Family::ProductEntangledMixture,
        Family::MaxMixedEntangledMixture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bell => "bell",
            Family::ProductEntangledMixture => "product-entangled-mixture",
            Family::MaxMixedEntangledMixture => "maxmixed-entangled-mixture",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown family '{s}' (expected one of: bell, product-entangled-mixture, maxmixed-entangled-mixture)"
                )
            })
    }
}

/// A family together with its mixing weight. `p` is ignored for `Bell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleSpec {
    pub family: Family,
    pub p: f64,
}

impl ExampleSpec {
    pub fn new(family: Family, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidWeight(p));
        }
        Ok(Self { family, p })
    }

    pub fn bell() -> Self {
        Self {
            family: Family::Bell,
            p: 0.0,
        }
    }

    fn weight(&self) -> f64 {
        match self.family {
            Family::Bell => 0.0,
            _ => self.p,
        }
    }
}

/// Amplitudes of `(|01⟩ + i|10⟩)/√2`.
pub fn entangled_ket() -> [Complex64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
        Complex64::new(0.0, h),
        Complex64::new(0.0, 0.0),
    ]
}

pub fn make_state(spec: &ExampleSpec) -> Result<JointState> {
    ExampleSpec::new(spec.family, spec.p)?;
    let psi = ComplexMatrix::outer(&entangled_ket());
    let p = spec.weight();
    let admixture = match spec.family {
        Family::Bell => return JointState::new(psi),
        Family::ProductEntangledMixture => {
            let mut ket01 = [Complex64::new(0.0, 0.0); 4];
            ket01[1] = Complex64::new(1.0, 0.0);
            ComplexMatrix::outer(&ket01)
        }
        Family::MaxMixedEntangledMixture => ComplexMatrix::identity(4).scale_real(0.25),
    };
    JointState::new(&admixture.scale_real(p) + &psi.scale_real(1.0 - p))
}

/// Closed-form `⟨σ_z^S⟩(t)`:
///
/// * bell: `−sin 4Jt`
/// * product/entangled mixture: `p cos 4Jt + (p − 1) sin 4Jt`
/// * maximally-mixed/entangled mixture: `(p − 1) sin 4Jt`
pub fn closed_form_z(spec: &ExampleSpec, params: &ExchangeParams, t: f64) -> f64 {
    let (s4, c4) = (4.0 * params.alpha(t)).sin_cos();
    let p = spec.weight();
    match spec.family {
        Family::Bell => -s4,
        Family::ProductEntangledMixture => p * c4 + (p - 1.0) * s4,
        Family::MaxMixedEntangledMixture => (p - 1.0) * s4,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::exchange::z_observed;
    use crate::linalg::BlochVector;

    const J: ExchangeParams = ExchangeParams { coupling: 0.9 };

    #[test]
    fn bell_marginals_are_blank() {
        let st = make_state(&ExampleSpec::bell()).unwrap();
        assert!(st.system_bloch().norm() < 1e-15);
        assert!(st.env_bloch().norm() < 1e-15);
        assert_eq!(closed_form_z(&ExampleSpec::bell(), &J, 0.0), 0.0);
    }

    #[test]
    fn product_mixture_calibration() {
        for p in [0.0, 0.2, 0.5, 1.0] {
            let spec = ExampleSpec::new(Family::ProductEntangledMixture, p).unwrap();
            let st = make_state(&spec).unwrap();
            assert!(
                st.system_bloch()
                    .max_abs_diff(BlochVector::new(0.0, 0.0, p))
                    < 1e-15
            );
            let red = st.system_marginal();
            assert!((red[(0, 0)].re - (1.0 + p) / 2.0).abs() < 1e-15);
            assert!((red[(1, 1)].re - (1.0 - p) / 2.0).abs() < 1e-15);
            assert!((closed_form_z(&spec, &J, 0.0) - p).abs() < 1e-15);
        }
    }

    #[test]
    fn max_mixed_mixture_at_one_is_identity() {
        let spec = ExampleSpec::new(Family::MaxMixedEntangledMixture, 1.0).unwrap();
        let st = make_state(&spec).unwrap();
        assert!(
            st.rho()
                .max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25))
                < 1e-16
        );
        assert!(st.tensor().is_product(1e-12));
        for t in [0.0, 0.4, 2.0] {
            assert_eq!(closed_form_z(&spec, &J, t), 0.0);
        }
    }

    #[test]
    fn invalid_weight_is_rejected() {
        assert!(matches!(
            ExampleSpec::new(Family::ProductEntangledMixture, -0.1),
            Err(Error::InvalidWeight(_))
        ));
        let sneaky = ExampleSpec {
            family: Family::MaxMixedEntangledMixture,
            p: 1.5,
        };
        assert!(make_state(&sneaky).is_err());
    }

    #[test]
    fn reference_time_values() {
        let t_star = 3.0 * PI / (8.0 * J.coupling);
        assert!((closed_form_z(&ExampleSpec::bell(), &J, t_star) - 1.0).abs() < 1e-15);
        let p = 0.25;
        let spec = ExampleSpec::new(Family::ProductEntangledMixture, p).unwrap();
        assert!((closed_form_z(&spec, &J, t_star) - (1.0 - p)).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_match_full_evolution() {
        for family in Family::ALL {
            for p in [0.0, 0.1, 0.2, 1.0 / 3.0, 0.4, 0.6, 0.8, 1.0] {
                let spec = ExampleSpec::new(family, p).unwrap();
                let st = make_state(&spec).unwrap();
                for i in 0..200 {
                    let t = 0.031 * i as f64;
                    let full = z_observed(&st, &J, t).unwrap();
                    assert!((full - closed_form_z(&spec, &J, t)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn product_mixture_at_zero_matches_bell() {
        let spec = ExampleSpec::new(Family::ProductEntangledMixture, 0.0).unwrap();
        for i in 0..100 {
            let t = 0.05 * i as f64;
            assert_eq!(
                closed_form_z(&spec, &J, t),
                closed_form_z(&ExampleSpec::bell(), &J, t)
            );
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("ghz".parse::<Family>().is_err());
    }
}
