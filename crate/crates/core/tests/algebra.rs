use curvedflat::minkowski::{lorentz, point_to_form};
use curvedflat::projective::{cross_ratio_sq, moebius_apply};
use curvedflat::qlinalg::study_pair;
use curvedflat::{HPoint, HermForm, QMat2, QVec2, Quaternion};
use num_complex::Complex64;
use proptest::prelude::*;

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0..1.0f64).prop_map(Quaternion::from_array)
}

fn qmat() -> impl Strategy<Value = QMat2> {
    (quat(), quat(), quat(), quat()).prop_map(|(a, b, c, d)| QMat2::new(a, b, c, d))
}

fn qvec() -> impl Strategy<Value = QVec2> {
    (quat(), quat()).prop_map(|(a, b)| QVec2::new(a, b))
}

fn herm() -> impl Strategy<Value = HermForm> {
    (-1.0..1.0f64, -1.0..1.0f64, quat()).prop_map(|(a, b, c)| HermForm::new(a, b, c))
}

/// Hamilton product written out componentwise.
fn hamilton(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Determinant of a 4×4 complex matrix by cofactor expansion.
fn det4(m: [[Complex64; 4]; 4]) -> Complex64 {
    fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    (0..4)
        .map(|k| {
            let minor = std::array::from_fn(|r| {
                std::array::from_fn(|cc| m[r + 1][if cc < k { cc } else { cc + 1 }])
            });
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            m[0][k] * det3(minor) * sign
        })
        .sum()
}

fn complex_det(a: QMat2) -> f64 {
    let blk = |q: Quaternion| {
        let (al, be) = (c(q.w, q.x), c(q.y, q.z));
        [[al, be], [-be.conj(), al.conj()]]
    };
    let e = [[blk(a.a11), blk(a.a12)], [blk(a.a21), blk(a.a22)]];
    det4(std::array::from_fn(|r| {
        std::array::from_fn(|cc| e[r / 2][cc / 2][r % 2][cc % 2])
    }))
    .re
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn product_matches_hamilton(p in quat(), q in quat()) {
        prop_assert!((p * q).max_abs_diff(hamilton(p, q)) < 1e-15);
    }

    #[test]
    fn norm_is_multiplicative(p in quat(), q in quat()) {
        prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-14);
        prop_assert!(((p * q).conj()).max_abs_diff(q.conj() * p.conj()) < 1e-15);
    }

    #[test]
    fn quaternion_inverse(q in quat()) {
        prop_assume!(q.norm() > 1e-3);
        let qi = q.inv().unwrap();
        prop_assert!((q * qi).max_abs_diff(Quaternion::ONE) < 1e-12);
        prop_assert!((qi * q).max_abs_diff(Quaternion::ONE) < 1e-12);
    }

    #[test]
    fn study_det_against_cofactor_expansion(a in qmat()) {
        prop_assert!(rel(a.study_det(), complex_det(a)) < 1e-12);
    }

    #[test]
    fn study_det_multiplicative(a in qmat(), b in qmat()) {
        prop_assert!(rel((a * b).study_det(), a.study_det() * b.study_det()) < 1e-12);
    }

    #[test]
    fn study_det_real_scaling(a in qmat(), t in 0.1..3.0f64) {
        prop_assert!(rel((a * t).study_det(), t.powi(4) * a.study_det()) < 1e-12);
    }

    #[test]
    fn adjugate_is_inverse_times_det(a in qmat()) {
        let d = a.study_det();
        let prod = a * a.adjugate();
        prop_assert!((prod - QMat2::IDENTITY * d).max_abs() < 1e-12);
    }

    #[test]
    fn inverse_both_sides(a in qmat()) {
        prop_assume!(a.study_det() > 0.05);
        let ai = a.inv().unwrap();
        prop_assert!((a * ai - QMat2::IDENTITY).max_abs() < 1e-10);
        prop_assert!((ai * a - QMat2::IDENTITY).max_abs() < 1e-10);
    }

    #[test]
    fn complex_image_is_a_homomorphism(a in qmat(), b in qmat()) {
        let lhs = (a * b).complex_image();
        let rhs = a.complex_image() * b.complex_image();
        prop_assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-14));
        prop_assert!((QMat2::from_complex_image(&a.complex_image()) - a).max_abs() == 0.0);
    }

    #[test]
    fn point_forms_are_null(v in qvec()) {
        prop_assume!(v.norm() > 1e-3);
        let s = point_to_form(v).unwrap();
        prop_assert!(lorentz(s, s).abs() < 1e-14);
        prop_assert!(s.det().abs() < 1e-14);
    }

    #[test]
    fn point_form_pairing_is_half_study(v in qvec(), w in qvec()) {
        prop_assume!(v.norm() > 1e-3 && w.norm() > 1e-3);
        let p = lorentz(point_to_form(v).unwrap(), point_to_form(w).unwrap());
        let d = study_pair(v, w);
        prop_assert!((p + 0.5 * d).abs() < 1e-12 * (1.0 + d.abs()));
    }

    #[test]
    fn lorentz_polarizes_determinant(s in herm(), t in herm()) {
        prop_assert!((lorentz(s, s) + s.det()).abs() < 1e-14);
        let polar = 0.5 * ((s + t).det() - s.det() - t.det());
        prop_assert!((lorentz(s, t) + polar).abs() < 1e-14);
    }

    #[test]
    fn action_scales_lorentz_product(a in qmat(), s in herm(), t in herm()) {
        let d = a.study_det();
        let lhs = lorentz(s.act(a), t.act(a));
        prop_assert!((lhs - d * lorentz(s, t)).abs() < 1e-12);
    }

    #[test]
    fn action_is_contravariant(a in qmat(), b in qmat(), s in herm()) {
        // (AB)* s (AB) = B* (A* s A) B
        let lhs = s.act(a * b);
        let rhs = s.act(a).act(b);
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn cross_ratio_pair_symmetries(p in prop::array::uniform4(quat())) {
        let h = p.map(HPoint::from_affine);
        let base = cross_ratio_sq(h[0], h[1], h[2], h[3]).unwrap();
        prop_assume!(base.is_finite() && base > 1e-6 && base < 1e6);
        // swapping both pairs and reversing the order keep the value
        let swapped = cross_ratio_sq(h[1], h[0], h[3], h[2]).unwrap();
        let reversed = cross_ratio_sq(h[3], h[2], h[1], h[0]).unwrap();
        prop_assert!((swapped - base).abs() < 1e-9 * base);
        prop_assert!((reversed - base).abs() < 1e-9 * base);
    }

    #[test]
    fn moebius_composes(a in qmat(), b in qmat(), p in quat()) {
        prop_assume!(a.study_det() > 0.05 && b.study_det() > 0.05);
        let x = HPoint::from_affine(p);
        let lhs = moebius_apply(a * b, x).unwrap();
        let rhs = moebius_apply(a, moebius_apply(b, x).unwrap()).unwrap();
        prop_assert!(lhs.same_point(&rhs, 1e-9));
    }

    #[test]
    fn affine_round_trip(p in quat()) {
        let back = HPoint::from_affine(p).to_affine().unwrap();
        prop_assert!(back.max_abs_diff(p) < 1e-15);
    }
}

#[test]
fn lorentz_signature() {
    let basis = HermForm::basis();
    let gram = nalgebra::Matrix6::from_fn(|r, c| lorentz(basis[r], basis[c]));
    let eig = nalgebra::SymmetricEigen::new(gram).eigenvalues;
    assert_eq!(eig.iter().filter(|e| **e > 1e-12).count(), 5);
    assert_eq!(eig.iter().filter(|e| **e < -1e-12).count(), 1);
}

#[test]
fn translation_acts_on_affine_points() {
    // [[1, t], [0, 1]] moves h to h + t
    let t = Quaternion::new(0.3, -1.0, 2.0, 0.5);
    let a = QMat2::new(Quaternion::ONE, t, Quaternion::ZERO, Quaternion::ONE);
    let h = Quaternion::new(1.0, 2.0, -0.5, 0.25);
    let moved = moebius_apply(a, HPoint::from_affine(h))
        .unwrap()
        .to_affine()
        .unwrap();
    assert!(moved.max_abs_diff(h + t) < 1e-15);
    // infinity is fixed
    assert!(moebius_apply(a, HPoint::infinity()).unwrap().is_infinity());
}

#[test]
fn inversion_swaps_zero_and_infinity() {
    let a = QMat2::new(
        Quaternion::ZERO,
        Quaternion::ONE,
        Quaternion::ONE,
        Quaternion::ZERO,
    );
    assert!(moebius_apply(a, HPoint::from_affine(Quaternion::ZERO))
        .unwrap()
        .is_infinity());
    let h = Quaternion::new(0.0, 0.0, 2.0, 0.0);
    let img = moebius_apply(a, HPoint::from_affine(h))
        .unwrap()
        .to_affine()
        .unwrap();
    assert!(img.max_abs_diff(h.inv().unwrap()) < 1e-15);
}

#[test]
fn singular_inverse_rejected() {
    let v = QVec2::new(Quaternion::ONE, Quaternion::J);
    let a = QMat2::from_columns(v, v.scale_right(Quaternion::K));
    assert!(a.study_det().abs() < 1e-15);
    assert!(a.inv().is_err());
}
