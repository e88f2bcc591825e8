//! Small dense complex linear algebra and the state ↔ Bloch / correlation
//! tensor bijections for one- and two-qubit density matrices.
//!
//! Only 2×2 and 4×4 matrices are ever built by this crate, so everything is
//! stored densely in row-major order and no attempt is made at blocking or
//! sparsity.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::{BLOCH_NORM_TOL, DEFAULT_PSD_TOL};

pub type Mat3 = [[f64; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count must equal rows * cols"
        );
        Self { rows, cols, data }
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_row_major(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Projector `|ψ⟩⟨ψ|` onto a (not necessarily normalized) ket.
    pub fn outer(ket: &[Complex64]) -> Self {
        let n = ket.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// `A ρ A†`.
    pub fn conjugate_by(&self, unitary: &Self) -> Self {
        &(unitary * self) * &unitary.adjoint()
    }

    /// Largest entrywise modulus of `self - other`.
    ///
    /// Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M†|` entrywise; infinite for non-square matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `Tr[self · op]`.
    pub fn expectation(&self, op: &Self) -> Complex64 {
        assert_eq!(self.cols, op.rows);
        assert_eq!(self.rows, op.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * op[(k, i)];
            }
        }
        acc
    }

    fn expect_dims(&self, rows: usize, cols: usize, expected: &'static str) -> Result<()> {
        if self.rows == rows && self.cols == cols {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut m = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        m
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Pauli matrix for axis 0 (x), 1 (y) or 2 (z).
pub fn pauli(axis: usize) -> ComplexMatrix {
    match axis {
        0 => ComplexMatrix::from_row_major(2, 2, vec![ZERO, ONE, ONE, ZERO]),
        1 => ComplexMatrix::from_row_major(2, 2, vec![ZERO, -I, I, ZERO]),
        2 => ComplexMatrix::from_row_major(2, 2, vec![ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli axis must be 0, 1 or 2, got {axis}"),
    }
}

pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli(0), pauli(1), pauli(2)]
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Real 3-vector parameterizing a qubit state `½(I + v·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const X: Self = Self::new(1.0, 0.0, 0.0);
    pub const Y: Self = Self::new(0.0, 1.0, 0.0);
    pub const Z: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Checks `|v| ≤ 1 + tol`.
    pub fn validate(self, tol: f64) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NonFinite("Bloch vector component"));
        }
        let norm = self.norm();
        if norm > 1.0 + tol {
            Err(Error::InvalidBloch { norm })
        } else {
            Ok(self)
        }
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Index<usize> for BlochVector {
    type Output = f64;
    fn index(&self, axis: usize) -> &f64 {
        match axis {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Bloch axis must be 0, 1 or 2, got {axis}"),
        }
    }
}

/// Two-point Pauli correlations `C_jk = Tr[ρ σ_j⊗σ_k]` and their deviation
/// `T = C − s eᵀ` from the product form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor {
    pub correlation: Mat3,
    pub deviation: Mat3,
}

impl CorrelationTensor {
    pub fn new(correlation: Mat3, s: BlochVector, e: BlochVector) -> Self {
        let mut deviation = [[0.0; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                deviation[j][k] = correlation[j][k] - s[j] * e[k];
            }
        }
        Self {
            correlation,
            deviation,
        }
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviation
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `T = 0` entrywise within `tol`.
    pub fn is_product(&self, tol: f64) -> bool {
        self.max_deviation() < tol
    }
}

/// Tolerances used when validating a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTolerance {
    pub hermiticity: f64,
    pub trace: f64,
    pub eigenvalue: f64,
}

impl DensityTolerance {
    /// Default Hermiticity and trace slack with a custom eigenvalue floor.
    pub fn psd(eigenvalue: f64) -> Self {
        Self {
            eigenvalue,
            ..Self::default()
        }
    }
}

impl Default for DensityTolerance {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            trace: 1e-12,
            eigenvalue: DEFAULT_PSD_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DensityViolation {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("not Hermitian (max |ρ − ρ†| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("trace is {re}{im:+}i, not 1")]
    Trace { re: f64, im: f64 },
    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("non-finite entry")]
    NonFinite,
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// 2×2 uses the closed form; larger matrices go through nalgebra's
/// Hermitian eigensolver on the Hermitian part `(M + M†)/2`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    assert!(m.is_square(), "eigenvalues need a square matrix");
    if m.rows() == 2 {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        return vec![mean - radius, mean + radius];
    }
    let n = m.rows();
    let herm = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut values: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Checks Hermiticity, unit trace and positive semidefiniteness, naming the
/// first violated condition.
pub fn validate_density(
    rho: &ComplexMatrix,
    tol: &DensityTolerance,
) -> std::result::Result<(), DensityViolation> {
    if !rho.is_square() {
        return Err(DensityViolation::NotSquare {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    if rho
        .entries()
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(DensityViolation::NonFinite);
    }
    let defect = rho.hermiticity_defect();
    if defect > tol.hermiticity {
        return Err(DensityViolation::NotHermitian { defect });
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > tol.trace {
        return Err(DensityViolation::Trace {
            re: tr.re,
            im: tr.im,
        });
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -tol.eigenvalue {
        return Err(DensityViolation::NegativeEigenvalue { value: min });
    }
    Ok(())
}

pub fn is_valid_density(rho: &ComplexMatrix, tol: &DensityTolerance) -> bool {
    validate_density(rho, tol).is_ok()
}

/// `Tr_E[ρ_SE]` for a 4×4 joint state, system first.
pub fn partial_trace_env(rho_se: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho_se.expect_dims(4, 4, "4x4")?;
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for k in 0..2 {
            out[(i, k)] = (0..2).map(|j| rho_se[(2 * i + j, 2 * k + j)]).sum();
        }
    }
    Ok(out)
}

/// `½(I + v·σ)`.
pub fn density_from_bloch(v: BlochVector) -> Result<ComplexMatrix> {
    v.validate(BLOCH_NORM_TOL)?;
    let mut rho = ComplexMatrix::identity(2);
    for (axis, sigma) in paulis().iter().enumerate() {
        rho = &rho + &sigma.scale_real(v[axis]);
    }
    Ok(rho.scale_real(0.5))
}

/// `v_j = Tr[ρ σ_j]` for a Hermitian 2×2 matrix.
pub fn bloch_from_density(rho: &ComplexMatrix) -> Result<BlochVector> {
    rho.expect_dims(2, 2, "2x2")?;
    let defect = rho.hermiticity_defect();
    if defect > DensityTolerance::default().hermiticity {
        return Err(Error::InvalidDensity(DensityViolation::NotHermitian {
            defect,
        }));
    }
    let [sx, sy, sz] = paulis();
    Ok(BlochVector::new(
        rho.expectation(&sx).re,
        rho.expectation(&sy).re,
        rho.expectation(&sz).re,
    ))
}

/// Reassembles `¼(I⊗I + s·σ⊗I + I⊗e·σ + Σ C_jk σ_j⊗σ_k)`.
///
/// The result is Hermitian with unit trace but is not necessarily positive;
/// check it with [`validate_density`].
pub fn joint_from_parts(s: BlochVector, e: BlochVector, correlation: &Mat3) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let sig = paulis();
    let mut rho = ComplexMatrix::identity(4);
    for j in 0..3 {
        rho = &rho + &sig[j].kron(&id).scale_real(s[j]);
        rho = &rho + &id.kron(&sig[j]).scale_real(e[j]);
        for k in 0..3 {
            rho = &rho + &sig[j].kron(&sig[k]).scale_real(correlation[j][k]);
        }
    }
    rho.scale_real(0.25)
}

/// A validated two-qubit density matrix with its Bloch decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    rho: ComplexMatrix,
    s: BlochVector,
    e: BlochVector,
    tensor: CorrelationTensor,
}

impl JointState {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(rho, &DensityTolerance::default())
    }

    pub fn with_tolerance(rho: ComplexMatrix, tol: &DensityTolerance) -> Result<Self> {
        rho.expect_dims(4, 4, "4x4")?;
        validate_density(&rho, tol).map_err(Error::InvalidDensity)?;

        let id = ComplexMatrix::identity(2);
        let sig = paulis();
        let mut s = [0.0; 3];
        let mut e = [0.0; 3];
        let mut correlation = [[0.0; 3]; 3];
        for j in 0..3 {
            s[j] = rho.expectation(&sig[j].kron(&id)).re;
            e[j] = rho.expectation(&id.kron(&sig[j])).re;
            for k in 0..3 {
                correlation[j][k] = rho.expectation(&sig[j].kron(&sig[k])).re;
            }
        }
        let s = BlochVector::from_array(s);
        let e = BlochVector::from_array(e);
        Ok(Self {
            tensor: CorrelationTensor::new(correlation, s, e),
            rho,
            s,
            e,
        })
    }

    /// `ρ_S ⊗ ρ_E` from two Bloch vectors.
    pub fn product(s: BlochVector, e: BlochVector) -> Result<Self> {
        let rho = density_from_bloch(s)?.kron(&density_from_bloch(e)?);
        Self::new(rho)
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn system_bloch(&self) -> BlochVector {
        self.s
    }

    pub fn env_bloch(&self) -> BlochVector {
        self.e
    }

    pub fn tensor(&self) -> &CorrelationTensor {
        &self.tensor
    }

    pub fn system_marginal(&self) -> ComplexMatrix {
        partial_trace_env(&self.rho).expect("JointState always holds a 4x4 matrix")
    }

    pub fn into_rho(self) -> ComplexMatrix {
        self.rho
    }
}

/// Full Bloch decomposition of a valid two-qubit state.
pub fn joint_decompose(rho_se: &ComplexMatrix) -> Result<JointState> {
    JointState::new(rho_se.clone())
}
