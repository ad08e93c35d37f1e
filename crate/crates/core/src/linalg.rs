//! Small dense complex vectors and matrices.
//!
//! Inner products conjugate the *first* argument, so `x.dot(y)` is `x†y`.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VecError {
    #[error("complex vector must have at least one entry")]
    Empty,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
}

/// A finite, non-empty complex column vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self, VecError> {
        if entries.is_empty() {
            return Err(VecError::Empty);
        }
        if let Some(i) = entries.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(VecError::NonFinite(i));
        }
        Ok(Self(entries))
    }

    /// Builds a vector from `[re, im]` pairs.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self, VecError> {
        Self::new(pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.0.iter().map(|c| [c.re, c.im]).collect()
    }

    /// Unit basis vector `e_k` of length `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        assert!(k < n, "basis index out of range");
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    /// `self† other`.
    pub fn dot(&self, other: &ComplexVec) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Euclidean norm, scaled to avoid overflow on large entries.
    pub fn norm(&self) -> f64 {
        let scale = self.0.iter().fold(0.0_f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let ssq: f64 = self
            .0
            .iter()
            .map(|c| (c.re / scale).powi(2) + (c.im / scale).powi(2))
            .sum();
        scale * ssq.sqrt()
    }

    pub fn scale(&self, k: Complex64) -> ComplexVec {
        ComplexVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn scale_real(&self, k: f64) -> ComplexVec {
        ComplexVec(self.0.iter().map(|c| c * k).collect())
    }

    /// Returns `self / ‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<ComplexVec> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    /// `self + k·other`.
    pub fn axpy(&self, k: Complex64, other: &ComplexVec) -> ComplexVec {
        debug_assert_eq!(self.len(), other.len());
        ComplexVec(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    /// Outer product `scale · self self†` as a Hermitian matrix.
    pub fn outer(&self, scale: f64) -> CMatrix {
        let n = self.len();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.0[i] * self.0[j].conj() * scale);
            }
        }
        CMatrix { dim: n, data }
    }

    /// Some unit vector orthogonal to `self`; `None` when the length is 1
    /// or `self` is zero.
    pub fn orthogonal_unit(&self) -> Option<ComplexVec> {
        let unit = self.normalized()?;
        if self.len() < 2 {
            return None;
        }
        // Project out `unit` from the basis vector least aligned with it.
        let k = (0..self.len())
            .min_by(|&i, &j| unit.0[i].norm().total_cmp(&unit.0[j].norm()))
            .unwrap_or(0);
        let e = ComplexVec::basis(self.len(), k);
        let proj = unit.dot(&e);
        e.axpy(-proj, &unit).normalized()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexVec) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise distance to `other` after removing the best global phase,
    /// i.e. `min_φ max_k |self_k − e^{iφ} other_k|` evaluated at the
    /// least-squares phase.
    pub fn phase_aligned_diff(&self, other: &ComplexVec) -> f64 {
        let inner = other.dot(self);
        let phase = if inner.norm() > 0.0 {
            inner / inner.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.max_abs_diff(&other.scale(phase))
    }
}

impl fmt::Debug for ComplexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for ComplexVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for &ComplexVec {
    type Output = ComplexVec;
    fn add(self, rhs: &ComplexVec) -> ComplexVec {
        self.axpy(Complex64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &ComplexVec {
    type Output = ComplexVec;
    fn sub(self, rhs: &ComplexVec) -> ComplexVec {
        self.axpy(Complex64::new(-1.0, 0.0), rhs)
    }
}

impl Serialize for ComplexVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        ComplexVec::from_pairs(&pairs).map_err(D::Error::custom)
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: &[ComplexVec]) -> Self {
        let dim = cols.len();
        assert!(cols.iter().all(|c| c.len() == dim), "columns must form a square matrix");
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                data[i * dim + j] = col[i];
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &ComplexVec) -> ComplexVec {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        ComplexVec(
            (0..n)
                .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
                .collect(),
        )
    }

    /// `v† M v`; real for Hermitian `M`.
    pub fn quad_form(&self, v: &ComplexVec) -> f64 {
        v.dot(&self.mul_vec(v)).re
    }

    /// Largest modulus of `M - M†`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &CMatrix, beta: f64) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * alpha + b * beta)
                .collect(),
        }
    }
}

impl Mul<&ComplexVec> for &CMatrix {
    type Output = ComplexVec;
    fn mul(self, rhs: &ComplexVec) -> ComplexVec {
        self.mul_vec(rhs)
    }
}
