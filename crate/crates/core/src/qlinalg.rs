//! 2×2 quaternionic matrices acting on the right vector space ℍ².

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Relative guard for the Study determinant: inversion is refused below
/// `EPS_D · scale⁴` where `scale` is the largest entry norm.
pub const EPS_D: f64 = 1e-12;

/// Homogeneous coordinates in ℍ². Scalars act on the right.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QVec2 {
    pub v1: Quaternion,
    pub v2: Quaternion,
}

impl QVec2 {
    pub const fn new(v1: Quaternion, v2: Quaternion) -> Self {
        Self { v1, v2 }
    }

    pub const E1: Self = Self::new(Quaternion::ONE, Quaternion::ZERO);
    pub const E2: Self = Self::new(Quaternion::ZERO, Quaternion::ONE);

    /// Right scalar multiplication `v λ`.
    pub fn scale_right(self, lambda: Quaternion) -> Self {
        Self::new(self.v1 * lambda, self.v2 * lambda)
    }

    pub fn norm_sqr(self) -> f64 {
        self.v1.norm_sqr() + self.v2.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// Quaternionic hermitian product `v* w = conj(v1) w1 + conj(v2) w2`.
    pub fn hdot(self, w: Self) -> Quaternion {
        self.v1.conj() * w.v1 + self.v2.conj() * w.v2
    }
}

impl Add for QVec2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v1 + o.v1, self.v2 + o.v2)
    }
}

impl Sub for QVec2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v1 - o.v1, self.v2 - o.v2)
    }
}

impl Neg for QVec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v1, -self.v2)
    }
}

impl Mul<f64> for QVec2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.v1 * s, self.v2 * s)
    }
}

/// A 2×2 matrix with quaternion entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QMat2 {
    pub a11: Quaternion,
    pub a12: Quaternion,
    pub a21: Quaternion,
    pub a22: Quaternion,
}

impl QMat2 {
    pub const fn new(a11: Quaternion, a12: Quaternion, a21: Quaternion, a22: Quaternion) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub const IDENTITY: Self = Self::diag(Quaternion::ONE, Quaternion::ONE);
    pub const ZERO: Self = Self::diag(Quaternion::ZERO, Quaternion::ZERO);

    pub const fn diag(a: Quaternion, d: Quaternion) -> Self {
        Self::new(a, Quaternion::ZERO, Quaternion::ZERO, d)
    }

    pub const fn off_diag(b: Quaternion, c: Quaternion) -> Self {
        Self::new(Quaternion::ZERO, b, c, Quaternion::ZERO)
    }

    pub fn from_columns(v: QVec2, w: QVec2) -> Self {
        Self::new(v.v1, w.v1, v.v2, w.v2)
    }

    pub fn col1(self) -> QVec2 {
        QVec2::new(self.a11, self.a21)
    }

    pub fn col2(self) -> QVec2 {
        QVec2::new(self.a12, self.a22)
    }

    pub fn apply(self, v: QVec2) -> QVec2 {
        QVec2::new(
            self.a11 * v.v1 + self.a12 * v.v2,
            self.a21 * v.v1 + self.a22 * v.v2,
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Study determinant
    /// `|a11|²|a22|² + |a12|²|a21|² − 2 Re(conj(a11) a12 conj(a22) a21)`.
    pub fn study_det(self) -> f64 {
        let cross = self.a11.conj() * self.a12 * self.a22.conj() * self.a21;
        self.a11.norm_sqr() * self.a22.norm_sqr() + self.a12.norm_sqr() * self.a21.norm_sqr()
            - 2.0 * cross.re()
    }

    /// Largest entry norm.
    pub fn scale(self) -> f64 {
        self.a11
            .norm()
            .max(self.a12.norm())
            .max(self.a21.norm())
            .max(self.a22.norm())
    }

    /// Largest componentwise absolute value over all entries.
    pub fn max_abs(self) -> f64 {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .flat_map(|q| q.to_array())
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Closed-form inverse with prefactor `1/𝒟(A)`.
    pub fn inv(self) -> Result<Self> {
        let det = self.study_det();
        let s = self.scale();
        if !(det > EPS_D * s.powi(4)) || s == 0.0 {
            return Err(Error::SingularMatrix { det });
        }
        Ok(self.adjugate() * (1.0 / det))
    }

    /// The numerator of the closed-form inverse: `A · adjugate(A) = 𝒟(A) I`.
    pub fn adjugate(self) -> Self {
        let (a11, a12, a21, a22) = (self.a11, self.a12, self.a21, self.a22);
        let b11 = a11.conj() * a22.norm_sqr() - a21.conj() * a22 * a12.conj();
        let b12 = a21.conj() * a12.norm_sqr() - a11.conj() * a12 * a22.conj();
        let b21 = a12.conj() * a21.norm_sqr() - a22.conj() * a21 * a11.conj();
        let b22 = a22.conj() * a11.norm_sqr() - a12.conj() * a11 * a21.conj();
        Self::new(b11, b12, b21, b22)
    }

    pub fn trace(self) -> Quaternion {
        self.a11 + self.a22
    }

    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    /// The complex 4×4 image: every entry replaced by its 2×2 complex block.
    pub fn complex_image(self) -> Matrix4<Complex64> {
        let blocks = [[self.a11, self.a12], [self.a21, self.a22]];
        Matrix4::from_fn(|r, c| blocks[r / 2][c / 2].to_cmat()[r % 2][c % 2])
    }

    /// Inverse of [`QMat2::complex_image`] on matrices of quaternionic block type.
    /// Off-pattern parts are projected away.
    pub fn from_complex_image(m: &Matrix4<Complex64>) -> Self {
        let block = |br: usize, bc: usize| {
            let x = (m[(2 * br, 2 * bc)] + m[(2 * br + 1, 2 * bc + 1)].conj()) * 0.5;
            let y = (m[(2 * br, 2 * bc + 1)] - m[(2 * br + 1, 2 * bc)].conj()) * 0.5;
            Quaternion::new(x.re, x.im, y.re, y.im)
        };
        Self::new(block(0, 0), block(0, 1), block(1, 0), block(1, 1))
    }

    pub fn is_finite(self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }
}

impl Add for QMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Sub for QMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Neg for QMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl Mul for QMat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<QVec2> for QMat2 {
    type Output = QVec2;
    fn mul(self, v: QVec2) -> QVec2 {
        self.apply(v)
    }
}

impl Mul<f64> for QMat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }
}

/// Study determinant of the matrix with columns `v`, `w`. For `v2 = w2 = 1`
/// it is the squared Euclidean distance `|v1 − w1|²`.
pub fn study_pair(v: QVec2, w: QVec2) -> f64 {
    QMat2::from_columns(v, w).study_det()
}
