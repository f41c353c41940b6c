//! Quaternionic hermitian forms as vectors of the Minkowski space R⁶₁.
//!
//! A form is stored as `(s11, s22, s12)` and stands for the hermitian matrix
//! `[[s11, s12], [conj(s12), s22]]`, so that `s(v, w) = v* S w`.
//! Points of ℍP¹ become null vectors, oriented 3-spheres unit spacelike ones.

use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridMap;
use crate::qlinalg::{QMat2, QVec2};
use crate::quat::Quaternion;

/// Below this ratio `|s11| / ‖s‖` a unit form is read as a plane.
pub const EPS_PLANE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HermForm {
    pub s11: f64,
    pub s22: f64,
    pub s12: Quaternion,
}

impl HermForm {
    pub const ZERO: Self = Self::new(0.0, 0.0, Quaternion::ZERO);

    pub const fn new(s11: f64, s22: f64, s12: Quaternion) -> Self {
        Self { s11, s22, s12 }
    }

    /// Hermitian part `(A + A*)/2` of a quaternionic matrix.
    pub fn from_qmat(a: QMat2) -> Self {
        Self::new(a.a11.re(), a.a22.re(), (a.a12 + a.a21.conj()) * 0.5)
    }

    pub fn to_qmat(self) -> QMat2 {
        QMat2::new(
            Quaternion::real(self.s11),
            self.s12,
            self.s12.conj(),
            Quaternion::real(self.s22),
        )
    }

    /// Coordinates `(s11, s22, s12.w, s12.x, s12.y, s12.z)`.
    pub fn to_array(self) -> [f64; 6] {
        [
            self.s11, self.s22, self.s12.w, self.s12.x, self.s12.y, self.s12.z,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], Quaternion::new(a[2], a[3], a[4], a[5]))
    }

    /// The six standard basis forms, in the order of [`HermForm::to_array`].
    pub fn basis() -> [Self; 6] {
        std::array::from_fn(|k| {
            let mut a = [0.0; 6];
            a[k] = 1.0;
            Self::from_array(a)
        })
    }

    /// Gram matrix of [`HermForm::basis`] under [`lorentz`].
    pub fn gram() -> [[f64; 6]; 6] {
        let b = Self::basis();
        std::array::from_fn(|r| std::array::from_fn(|c| lorentz(b[r], b[c])))
    }

    /// `det(s) = s11 s22 − |s12|²`.
    pub fn det(self) -> f64 {
        self.s11 * self.s22 - self.s12.norm_sqr()
    }

    /// Frobenius norm of the matrix, used to make residuals scale free.
    pub fn norm(self) -> f64 {
        (self.s11 * self.s11 + self.s22 * self.s22 + 2.0 * self.s12.norm_sqr()).sqrt()
    }

    /// Quadratic form `s(v, v) = s11|v1|² + 2 Re(conj(v1) s12 v2) + s22|v2|²`.
    pub fn eval(self, v: QVec2) -> f64 {
        self.s11 * v.v1.norm_sqr()
            + 2.0 * (v.v1.conj() * self.s12 * v.v2).re()
            + self.s22 * v.v2.norm_sqr()
    }

    /// `s(v, w) + s(w, v) = 2 Re(v* S w)`.
    pub fn polar(self, v: QVec2, w: QVec2) -> f64 {
        let sw = QVec2::new(
            Quaternion::real(self.s11) * w.v1 + self.s12 * w.v2,
            self.s12.conj() * w.v1 + Quaternion::real(self.s22) * w.v2,
        );
        2.0 * v.hdot(sw).re()
    }

    /// Pullback `A* S A`; on points it acts by `A⁻¹`.
    pub fn act(self, a: QMat2) -> Self {
        Self::from_qmat(a.adjoint() * self.to_qmat() * a)
    }

    pub fn is_finite(self) -> bool {
        self.s11.is_finite() && self.s22.is_finite() && self.s12.is_finite()
    }
}

impl Add for HermForm {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.s11 + o.s11, self.s22 + o.s22, self.s12 + o.s12)
    }
}

impl Sub for HermForm {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.s11 - o.s11, self.s22 - o.s22, self.s12 - o.s12)
    }
}

impl Neg for HermForm {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.s11, -self.s22, -self.s12)
    }
}

impl Mul<f64> for HermForm {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self::new(self.s11 * c, self.s22 * c, self.s12 * c)
    }
}

impl Sum for HermForm {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// Lorentz product, the polarization of `⟨s,s⟩ = |s12|² − s11 s22`:
/// `⟨s,t⟩ = Re(s12 conj(t12)) − (s11 t22 + s22 t11)/2`.
pub fn lorentz(s: HermForm, t: HermForm) -> f64 {
    s.s12.dot(t.s12) - 0.5 * (s.s11 * t.s22 + s.s22 * t.s11)
}

/// Null form `[[|v2|², −v1 conj(v2)], [−v2 conj(v1), |v1|²]]` of the point `v ℍ`.
///
/// With this normalization `⟨s_v, s⟩ = −s(v,v)/2` and
/// `⟨s_v, s_w⟩ = −𝒟(v,w)/2`.
pub fn point_to_form(v: QVec2) -> Result<HermForm> {
    if v.is_zero() || !(v.v1.is_finite() && v.v2.is_finite()) {
        return Err(Error::NotProjectivePoint);
    }
    Ok(HermForm::new(
        v.v2.norm_sqr(),
        v.v1.norm_sqr(),
        -(v.v1 * v.v2.conj()),
    ))
}

/// A 3-sphere or hyperplane of Euclidean 4-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereSpec {
    Plane { n: Quaternion, d: f64 },
    Sphere { m: Quaternion, r: f64 },
}

/// The unit form of a plane `[[0, −n], [−conj(n), 2d]]` or sphere
/// `(1/r)[[1, −m], [−conj(m), |m|² − r²]]`.
pub fn sphere_to_form(sphere: SphereSpec) -> HermForm {
    match sphere {
        SphereSpec::Plane { n, d } => HermForm::new(0.0, 2.0 * d, -n),
        SphereSpec::Sphere { m, r } => HermForm::new(1.0, m.norm_sqr() - r * r, -m) * (1.0 / r),
    }
}

/// Reads a spacelike form as a sphere or plane, after rescaling to unit length.
/// Spheres are reported with positive radius regardless of orientation.
pub fn form_to_sphere(s: HermForm) -> Result<SphereSpec> {
    let nn = lorentz(s, s);
    if !(nn > 0.0) {
        return Err(Error::NotSphereForm { norm_sqr: nn });
    }
    let s = s * (1.0 / nn.sqrt());
    if s.s11.abs() < EPS_PLANE * s.norm() {
        Ok(SphereSpec::Plane {
            n: -s.s12,
            d: 0.5 * s.s22,
        })
    } else {
        let s = if s.s11 < 0.0 { -s } else { s };
        Ok(SphereSpec::Sphere {
            m: -s.s12 * (1.0 / s.s11),
            r: 1.0 / s.s11,
        })
    }
}

/// Increment of `F·s` across an edge with connection value `Φ`, given that
/// `F·s` is constant: `−(S Φ + Φ* S)`.
pub fn form_derivative(fs_const: HermForm, phi: QMat2) -> HermForm {
    let s = fs_const.to_qmat();
    -HermForm::from_qmat(s * phi + phi.adjoint() * s)
}

/// Scale-free envelope residuals of a map against a sphere congruence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeResidual {
    /// `max |s(f,f)| / (|f|² ‖s‖)` over vertices.
    pub incidence: f64,
    /// `max |s(f,df) + s(df,f)| / (|f| |df| ‖s‖)` over edges.
    pub tangency: f64,
}

pub fn envelope_residual(f: &GridMap<QVec2>, s: &GridMap<HermForm>) -> Result<EnvelopeResidual> {
    if f.domain() != s.domain() {
        return Err(Error::DomainMismatch);
    }
    let d = f.domain();
    let incidence = (0..d.len())
        .into_par_iter()
        .map(|k| {
            let (v, sk) = (f.values()[k], s.values()[k]);
            let scale = v.norm_sqr() * sk.norm();
            if scale > 0.0 {
                sk.eval(v).abs() / scale
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);
    let edge = |v: QVec2, w: QVec2, sk: HermForm| {
        let dv = w - v;
        let scale = v.norm() * dv.norm() * sk.norm();
        if scale > 0.0 {
            sk.polar(v, dv).abs() / scale
        } else {
            0.0
        }
    };
    let tangency = (0..d.ny)
        .into_par_iter()
        .map(|j| {
            let mut m: f64 = 0.0;
            for i in 0..d.nx {
                if i + 1 < d.nx {
                    m = m.max(edge(f[(i, j)], f[(i + 1, j)], s[(i, j)]));
                }
                if j + 1 < d.ny {
                    m = m.max(edge(f[(i, j)], f[(i, j + 1)], s[(i, j)]));
                }
            }
            m
        })
        .reduce(|| 0.0, f64::max);
    Ok(EnvelopeResidual {
        incidence,
        tangency,
    })
}
