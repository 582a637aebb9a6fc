//! Small dense complex matrices (dimension 2 or 4), density-matrix validation
//! and the canonical test states.
//!
//! Basis ordering is fixed throughout the crate:
//!
//! * two qubits: `|++⟩, |+−⟩, |−+⟩, |−−⟩` with `+` meaning `m = +1/2`;
//! * spin-3/2 qudit: `m = 3/2, 1/2, −1/2, −3/2` (descending).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Smallest eigenvalue accepted by the positivity check.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Default tolerance for the hermiticity and trace checks.
pub const DEFAULT_STATE_TOLERANCE: f64 = 1e-12;

/// Which Hilbert-space labelling a 4×4 (or 2×2) matrix is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// A single spin-1/2.
    Qubit,
    /// Two spin-1/2 particles, lexicographic with `m = +1/2` first.
    TwoQubit,
    /// One spin-3/2 particle, `m` descending.
    #[serde(rename = "qudit_3_2")]
    Qudit,
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Qubit => 2,
            Basis::TwoQubit | Basis::Qudit => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Qubit => "qubit",
            Basis::TwoQubit => "two_qubit",
            Basis::Qudit => "qudit_3_2",
        }
    }
}

/// Dense square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        if dim == 2 || dim == 4 {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension(dim))
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub(crate) fn zeros2() -> Self {
        Self {
            dim: 2,
            data: [ZERO; 16],
        }
    }

    pub(crate) fn zeros4() -> Self {
        Self {
            dim: 4,
            data: [ZERO; 16],
        }
    }

    /// Builds a matrix from row-major entries. Rejects NaN/Inf.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        Self::check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let mut m = Self::zeros(dim)?;
        for (k, z) in entries.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite {
                    row: k / dim,
                    col: k % dim,
                });
            }
            m.data[k] = *z;
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(*d, 0.0);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(r, c)] = self[(c, r)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for r in 0..n {
            for c in 0..n {
                acc += self.data[r * n + c] * other.data[c * n + r];
            }
        }
        acc
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for z in out.data[..self.dim * self.dim].iter_mut() {
            *z *= s;
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, s: C64, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim * self.dim;
        for (a, b) in self.data[..n].iter_mut().zip(&other.data[..n]) {
            *a += s * b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |a_ij − conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let herm = (*self + self.adjoint()).scale_real(0.5);
        let m = DMatrix::from_fn(n, n, |r, c| herm[(r, c)]);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.dim && c < self.dim, "index out of bounds");
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.dim && c < self.dim, "index out of bounds");
        &mut self.data[r * self.dim + c]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim * self.dim;
        for (a, b) in self.data[..n].iter_mut().zip(&rhs.data[..n]) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim * self.dim;
        for (a, b) in self.data[..n].iter_mut().zip(&rhs.data[..n]) {
            *a -= b;
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product of two 2×2 matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim,
            });
        }
    }
    let mut out = ComplexMatrix::zeros4();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn kron2(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    kron(a, b).expect("2x2 operands")
}

/// Pauli matrix `σ_x`, `σ_y` or `σ_z` for `axis` 0, 1, 2.
pub fn pauli(axis: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros2();
    match axis {
        0 => {
            m[(0, 1)] = ONE;
            m[(1, 0)] = ONE;
        }
        1 => {
            m[(0, 1)] = -I;
            m[(1, 0)] = I;
        }
        2 => {
            m[(0, 0)] = ONE;
            m[(1, 1)] = -ONE;
        }
        _ => panic!("pauli axis must be 0, 1 or 2"),
    }
    m
}

/// `k·σ` for a real 3-vector.
pub fn sigma_dot(k: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros2();
    m[(0, 0)] = C64::new(k[2], 0.0);
    m[(1, 1)] = C64::new(-k[2], 0.0);
    m[(0, 1)] = C64::new(k[0], -k[1]);
    m[(1, 0)] = C64::new(k[0], k[1]);
    m
}

/// Outcome of the three density-matrix checks, with the raw defects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive
    }
}

/// Checks hermiticity and trace against `tol`, positivity against [`PSD_TOLERANCE`].
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> ValidationReport {
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - ONE).norm();
    let min_eigenvalue = m.hermitian_eigenvalues()[0];
    ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        hermitian: hermiticity_defect <= tol,
        unit_trace: trace_defect <= tol,
        positive: min_eigenvalue >= -PSD_TOLERANCE,
    }
}

/// A validated quantum state together with the basis its entries refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    basis: Basis,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, basis: Basis) -> Result<Self> {
        Self::with_tolerance(mat, basis, DEFAULT_STATE_TOLERANCE)
    }

    pub fn with_tolerance(mat: ComplexMatrix, basis: Basis, tol: f64) -> Result<Self> {
        if mat.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: mat.dim(),
            });
        }
        let report = validate_density(&mat, tol);
        if !report.passed() {
            return Err(Error::InvalidState(format!(
                "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
                report.hermiticity_defect, report.trace_defect, report.min_eigenvalue
            )));
        }
        Ok(Self { mat, basis })
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        let d = basis.dim();
        let mat = ComplexMatrix::identity(d)
            .expect("basis dimension")
            .scale_real(1.0 / d as f64);
        Self { mat, basis }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// The same numbers read in another basis of equal dimension.
    pub fn reinterpret(&self, basis: Basis) -> Result<Self> {
        if basis.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: basis.dim(),
            });
        }
        Ok(Self {
            mat: self.mat,
            basis,
        })
    }
}

/// The Werner-form matrix for any `p`, without domain or positivity checks.
pub fn werner_matrix(p: f64) -> ComplexMatrix {
    let a = (1.0 + p) / 4.0;
    let b = (1.0 - p) / 4.0;
    let mut m = ComplexMatrix::from_real_diagonal(&[a, b, b, a]).expect("dim 4");
    m[(0, 3)] = C64::new(p / 2.0, 0.0);
    m[(3, 0)] = C64::new(p / 2.0, 0.0);
    m
}

/// Werner state on two qubits, valid for `−1/3 ≤ p ≤ 1`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(-1.0 / 3.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            min: -1.0 / 3.0,
            max: 1.0,
        });
    }
    DensityMatrix::new(werner_matrix(p), Basis::TwoQubit)
}

/// `GG†/Tr(GG†)` with complex Gaussian `G`, deterministic in `seed`.
///
/// Dimension 4 states are labelled two-qubit; reinterpret as needed.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    let basis = match dim {
        2 => Basis::Qubit,
        4 => Basis::TwoQubit,
        d => return Err(Error::UnsupportedDimension(d)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ComplexMatrix::zeros(dim)?;
    for r in 0..dim {
        for c in 0..dim {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            g[(r, c)] = C64::new(re, im);
        }
    }
    let gg = g * g.adjoint();
    let mut rho = gg.scale_real(1.0 / gg.trace().re);
    // GG† is Hermitian up to roundoff; make it exact.
    rho = (rho + rho.adjoint()).scale_real(0.5);
    DensityMatrix::new(rho, basis)
}

/// Matrix JSON exchange format: `{"dim", "re", "im", "basis"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix, basis: Option<Basis>) -> Self {
        let n = m.dim();
        let re = (0..n)
            .map(|r| (0..n).map(|c| m[(r, c)].re).collect())
            .collect();
        let im = (0..n)
            .map(|r| (0..n).map(|c| m[(r, c)].im).collect())
            .collect();
        Self {
            dim: n,
            re,
            im,
            basis,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::check_dim(self.dim)?;
        let n = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Format(format!("re/im must both be {n}x{n}")));
        }
        if let Some(b) = self.basis {
            if b.dim() != n {
                return Err(Error::Format(format!(
                    "basis {} does not have dimension {n}",
                    b.name()
                )));
            }
        }
        let entries: Vec<C64> = (0..n * n)
            .map(|k| C64::new(self.re[k / n][k % n], self.im[k / n][k % n]))
            .collect();
        ComplexMatrix::from_row_major(n, &entries)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}
