//! Points of the quaternionic projective line ℍP¹ ≅ S⁴.

use crate::error::{Error, Result};
use crate::qlinalg::{study_pair, QMat2, QVec2, EPS_D};
use crate::quat::Quaternion;

/// Threshold `|v2| ≤ EPS_AFF · |v|` marking the point at infinity.
pub const EPS_AFF: f64 = 1e-10;

/// A point `v ℍ` given by a homogeneous representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub rep: QVec2,
    /// Whether `rep` is in the canonical gauge (see [`HPoint::canonical`]).
    pub normalized: bool,
}

impl HPoint {
    pub fn new(rep: QVec2) -> Result<Self> {
        if rep.is_zero() || !(rep.v1.is_finite() && rep.v2.is_finite()) {
            return Err(Error::NotProjectivePoint);
        }
        Ok(Self {
            rep,
            normalized: false,
        })
    }

    pub fn from_affine(h: Quaternion) -> Self {
        Self {
            rep: QVec2::new(h, Quaternion::ONE),
            normalized: false,
        }
    }

    pub fn infinity() -> Self {
        Self {
            rep: QVec2::E1,
            normalized: true,
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.rep.v2.norm() <= EPS_AFF * self.rep.norm()
    }

    /// Affine coordinate `v1 v2⁻¹`.
    pub fn to_affine(&self) -> Result<Quaternion> {
        if self.is_infinity() {
            return Err(Error::PointAtInfinity);
        }
        Ok(self.rep.v1 * self.rep.v2.inv()?)
    }

    /// Representative with `|v| = 1` and, away from infinity, `v2` real positive.
    /// Meant for display and serialization only.
    pub fn canonical(&self) -> Self {
        let v = self.rep;
        let v = if self.is_infinity() {
            v
        } else {
            let n2 = v.v2.norm();
            v.scale_right(v.v2.conj() * (1.0 / n2))
        };
        Self {
            rep: v * (1.0 / v.norm()),
            normalized: true,
        }
    }

    /// Scale-free coincidence test `𝒟(a,b) / (|a|²|b|²) ≤ tol`.
    pub fn same_point(&self, other: &Self, tol: f64) -> bool {
        let d = study_pair(self.rep, other.rep);
        d <= tol * self.rep.norm_sqr() * other.rep.norm_sqr()
    }
}

/// Applies `A` to the representative; in the affine chart
/// `h ↦ (a11 h + a12)(a21 h + a22)⁻¹`.
pub fn moebius_apply(a: QMat2, p: HPoint) -> Result<HPoint> {
    let det = a.study_det();
    if !(det > EPS_D * a.scale().powi(4)) {
        return Err(Error::SingularMoebius { det });
    }
    HPoint::new(a * p.rep)
}

/// Squared magnitude of the cross ratio,
/// `𝒟(h1,h2) 𝒟(h3,h4) / (𝒟(h2,h3) 𝒟(h4,h1))`.
pub fn cross_ratio_sq(h1: HPoint, h2: HPoint, h3: HPoint, h4: HPoint) -> Result<f64> {
    let rel =
        |a: HPoint, b: HPoint| study_pair(a.rep, b.rep) / (a.rep.norm_sqr() * b.rep.norm_sqr());
    let (d23, d41) = (rel(h2, h3), rel(h4, h1));
    if d23 <= 1e-24 || d41 <= 1e-24 {
        return Err(Error::DegenerateQuadruple);
    }
    Ok(rel(h1, h2) * rel(h3, h4) / (d23 * d41))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> HPoint {
        HPoint::from_affine(Quaternion::real(x))
    }

    #[test]
    fn affine_round_trip() {
        let p = HPoint::from_affine(Quaternion::ZERO);
        assert_eq!(p.rep, QVec2::E2);
        assert_eq!(p.to_affine().unwrap(), Quaternion::ZERO);
        let lam = Quaternion::new(0.3, -1.2, 0.4, 2.0);
        let q = HPoint::new(QVec2::new(Quaternion::I * lam, lam)).unwrap();
        assert!(q.to_affine().unwrap().max_abs_diff(Quaternion::I) < 1e-15);
        assert!(matches!(
            HPoint::infinity().to_affine(),
            Err(Error::PointAtInfinity)
        ));
    }

    #[test]
    fn translation_and_inversion() {
        let b = Quaternion::new(1.0, 2.0, 0.0, -1.0);
        let t = QMat2::new(Quaternion::ONE, b, Quaternion::ZERO, Quaternion::ONE);
        let h = Quaternion::J;
        let out = moebius_apply(t, HPoint::from_affine(h)).unwrap();
        assert!(out.to_affine().unwrap().max_abs_diff(h + b) < 1e-15);

        let swap = QMat2::off_diag(Quaternion::ONE, Quaternion::ONE);
        let zero = moebius_apply(swap, HPoint::from_affine(Quaternion::ZERO)).unwrap();
        assert!(zero.is_infinity());
        let hk = Quaternion::new(1.0, 1.0, 0.0, 1.0);
        let inv = moebius_apply(swap, HPoint::from_affine(hk)).unwrap();
        assert!(inv.to_affine().unwrap().max_abs_diff(hk.inv().unwrap()) < 1e-15);
    }

    #[test]
    fn cross_ratio_examples() {
        let v = cross_ratio_sq(real(0.0), real(1.0), real(2.0), real(3.0)).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(
            cross_ratio_sq(real(1.0), real(1.0), real(2.0), real(3.0)).unwrap(),
            0.0
        );
        assert!(matches!(
            cross_ratio_sq(real(0.0), real(1.0), real(1.0), real(3.0)),
            Err(Error::DegenerateQuadruple)
        ));
    }

    #[test]
    fn canonical_gauge() {
        let p = HPoint::new(QVec2::new(
            Quaternion::I,
            Quaternion::new(0.0, 0.0, 2.0, 0.0),
        ))
        .unwrap();
        let c = p.canonical();
        assert!((c.rep.norm() - 1.0).abs() < 1e-15);
        assert!(c.rep.v2.im().norm() < 1e-15 && c.rep.v2.re() > 0.0);
        assert!(c.same_point(&p, 1e-14));
    }
}
