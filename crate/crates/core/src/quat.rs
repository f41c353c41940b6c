//! Quaternions and their two complex models.
//!
//! A quaternion `q = w + x i + y j + z k` is identified with the complex pair
//! `q = a + b j` where `a = w + x i` and `b = y + z i`, and with the complex
//! 2×2 matrix `[[a, b], [-conj(b), conj(a)]]`.

use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative guard used when inverting quaternions.
pub const EPS_Q: f64 = 1e-12;

/// An element of the quaternions, stored by components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Purely imaginary quaternion `x i + y j + z k`.
    pub const fn imaginary(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    /// Embeds a complex number `a + b i` into the complex line spanned by 1 and i.
    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Scalar part as a quaternion.
    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    /// Euclidean inner product on the underlying 4-space.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Cross product of the imaginary parts, returned as an imaginary quaternion.
    pub fn cross(self, other: Self) -> Self {
        Self::imaginary(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Inverse `conj(q) / |q|²`, refused when `|q| <= 1e-12`.
    pub fn inv(self) -> Result<Self> {
        self.inv_scaled(0.0)
    }

    /// Inverse with the guard `1e-12 · (1 + scale)`, where `scale` is the
    /// magnitude of the quantities `q` is compared against.
    pub fn inv_scaled(self, scale: f64) -> Result<Self> {
        let n2 = self.norm_sqr();
        let norm = n2.sqrt();
        if !(norm > EPS_Q * (1.0 + scale.abs())) {
            return Err(Error::NearZeroQuaternion { norm });
        }
        Ok(self.conj() / n2)
    }

    /// Unit quaternion in the direction of `self`.
    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if !(n > EPS_Q) {
            return Err(Error::NearZeroQuaternion { norm: n });
        }
        Ok(self / n)
    }

    pub fn split(self) -> ComplexPair {
        ComplexPair {
            x: Complex64::new(self.w, self.x),
            y: Complex64::new(self.y, self.z),
        }
    }

    pub fn join(p: ComplexPair) -> Self {
        Self::new(p.x.re, p.x.im, p.y.re, p.y.im)
    }

    /// The complex 2×2 matrix `[[x, y], [-conj(y), conj(x)]]` of `q = x + y j`.
    pub fn to_cmat(self) -> [[Complex64; 2]; 2] {
        let ComplexPair { x, y } = self.split();
        [[x, y], [-y.conj(), x.conj()]]
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// The model `q = x + y j` with complex `x`, `y`. Note `j x = conj(x) j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPair {
    pub x: Complex64,
    pub y: Complex64,
}

impl ComplexPair {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y }
    }
}

impl From<Quaternion> for ComplexPair {
    fn from(q: Quaternion) -> Self {
        q.split()
    }
}

impl From<ComplexPair> for Quaternion {
    fn from(p: ComplexPair) -> Self {
        Quaternion::join(p)
    }
}

/// Product computed entirely in the complex model:
/// `(a + b j)(c + d j) = (ac - b conj(d)) + (ad + b conj(c)) j`.
impl Mul for ComplexPair {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            x: self.x * o.x - self.y * o.y.conj(),
            y: self.x * o.y + self.y * o.x.conj(),
        }
    }
}
