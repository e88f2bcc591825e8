#![allow(dead_code)]

use envelope_witness::linalg::{BlochVector, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the unit ball.
pub fn ball(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// Uniform point on the unit sphere.
pub fn sphere(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = ball(rng);
        let n = v.norm();
        if n > 1e-3 {
            return v * (1.0 / n);
        }
    }
}

/// Random full-rank two-qubit state `G G† / Tr(G G†)`.
pub fn joint_state(rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_row_major(
        4,
        4,
        (0..16)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    gg.scale_real(1.0 / tr)
}

pub fn product_state(s: BlochVector, e: BlochVector) -> ComplexMatrix {
    envelope_witness::linalg::density_from_bloch(s)
        .unwrap()
        .kron(&envelope_witness::linalg::density_from_bloch(e).unwrap())
}
