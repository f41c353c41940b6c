use curvedflat::frames::{
    curved_flat_residual, extract_pair, gauge, integrate_frame, maurer_cartan_residual, transport,
    ConnectionForm, GaugePair,
};
use curvedflat::grid::{
    christoffel_residual, closedness_residual, exterior_d, integrate_potential,
};
use curvedflat::minkowski::point_to_form;
use curvedflat::projective::moebius_apply;
use curvedflat::transforms::{christoffel_pair_check, ChristoffelPair, WeierstrassData};
use curvedflat::{EdgeForm, GridDomain, GridMap, HPoint, HermForm, QMat2, Quaternion};
use num_complex::Complex64;
use proptest::prelude::*;

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0..1.0f64).prop_map(Quaternion::from_array)
}

fn grid(n: usize) -> GridDomain {
    GridDomain::rect(Complex64::new(-0.5, 0.25), 1.5, 1.0, n, n + 2).unwrap()
}

fn random_map() -> impl Strategy<Value = GridMap<Quaternion>> {
    prop::collection::vec(quat(), 7 * 9).prop_map(|v| GridMap::from_vec(grid(7), v).unwrap())
}

/// Points as unit-norm null forms; defined at infinity too.
fn unit_form(p: &HPoint) -> HermForm {
    let s = point_to_form(p.rep).unwrap();
    s * (1.0 / s.norm())
}

fn enneper(n: usize) -> WeierstrassData {
    WeierstrassData::sample(
        GridDomain::unit_square(n).unwrap(),
        |z| z,
        |_| Complex64::new(1.0, 0.0),
    )
}

proptest! {
    #[test]
    fn exact_forms_integrate_back(f in random_map(), i0 in 0usize..7, j0 in 0usize..9) {
        let df = exterior_d(&f);
        prop_assert!(closedness_residual(&df) < 1e-12);
        let pot = integrate_potential(&df, (i0, j0), f.get(i0, j0));
        prop_assert!(pot.path_residual < 1e-12);
        prop_assert!(pot.map.max_distance(&f).unwrap() < 1e-12);
    }

    #[test]
    fn christoffel_residual_is_symmetric(f in random_map(), g in random_map()) {
        let a = christoffel_residual(&f, &g).unwrap();
        let b = christoffel_residual(&g, &f).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn constant_connection_integrates_to_powers(m in prop::array::uniform4(quat())) {
        // the same matrix on every edge: F(i, j) = T^(i + j)
        let d = GridDomain::unit_square(5).unwrap();
        let a = QMat2::new(m[0], m[1], m[2], m[3]) * 0.1;
        let phi = ConnectionForm::new(EdgeForm::from_fns(d, |_, _| a, |_, _| a));
        let frame = integrate_frame(&phi, QMat2::IDENTITY, (0, 0)).unwrap();
        prop_assert!(frame.holonomy_residual < 1e-14);
        let t = transport(a);
        let mut p = QMat2::IDENTITY;
        for k in 0..=8 {
            for i in 0..=k.min(4) {
                if k - i <= 4 {
                    prop_assert!((frame.f.get(i, k - i) - p).max_abs() < 1e-13);
                }
            }
            p = p * t;
        }
    }
}

#[test]
fn non_closed_form_detected() {
    // y dx: circulation −1 per unit area on every plaquette
    let d = grid(9);
    let w = EdgeForm::from_fns(d, |i, j| d.mid_x(i, j).im * d.hx, |_, _| 0.0);
    assert!((closedness_residual(&w) - 1.0).abs() < 1e-12);
    let pot = integrate_potential(&w, (0, 0), 0.0);
    assert!(pot.path_residual > 0.1);
}

#[test]
fn homothetic_copy_is_flagged() {
    let d = grid(9);
    let f = GridMap::from_fn(d, |_, _, z| {
        Quaternion::imaginary(z.re, z.im, z.re * z.re - z.im * z.im)
    });
    let check = christoffel_pair_check(&f, &f.map(|q| *q * 2.0)).unwrap();
    assert!(check.is_homothetic());
    assert!((check.homothety.0 - 2.0).abs() < 1e-12);
}

#[test]
fn associated_family_is_not_a_christoffel_pair() {
    // rotating the Weierstrass data by a phase gives a non-parallel partner
    let n = 33;
    let d = GridDomain::unit_square(n).unwrap();
    let rot = WeierstrassData::sample(d, |z| z, |_| Complex64::from_polar(1.0, 1.0));
    let a = curvedflat::transforms::minimal_from_weierstrass(&enneper(n)).unwrap();
    let b = curvedflat::transforms::minimal_from_weierstrass(&rot).unwrap();
    let good = christoffel_pair_check(&a.gauss_map, &a.surface).unwrap();
    let bad = christoffel_pair_check(&a.gauss_map, &b.surface).unwrap();
    assert!(good.parallelism < 1e-2, "{good:?}");
    assert!(bad.parallelism > 0.5, "{bad:?}");
    assert!(!good.is_homothetic() && !bad.is_homothetic());
}

#[test]
fn curved_flat_family_converges() {
    let res = |n: usize| {
        let phi = ChristoffelPair::from_weierstrass(&enneper(n))
            .unwrap()
            .connection();
        let mc = maurer_cartan_residual(&phi);
        [curved_flat_residual(&phi), mc.gauss_ricci, mc.codazzi]
    };
    let (a, b) = (res(17), res(33));
    for k in 0..3 {
        let order = (a[k] / b[k]).log2();
        assert!(order > 1.8, "component {k}: {} -> {}", a[k], b[k]);
    }
}

#[test]
fn left_multiplication_moves_points_by_moebius() {
    let pair = ChristoffelPair::from_weierstrass(&enneper(17)).unwrap();
    let phi = pair.connection();
    let a = QMat2::new(
        Quaternion::new(1.0, 0.2, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.5, 0.0),
        Quaternion::new(0.0, 0.0, 0.0, -0.3),
        Quaternion::new(0.8, 0.0, 0.1, 0.0),
    );
    let plain = integrate_frame(&phi, QMat2::IDENTITY, (0, 0)).unwrap();
    let moved = integrate_frame(&phi, a, (0, 0)).unwrap();
    let (f, fh) = extract_pair(&plain).unwrap();
    let (g, gh) = extract_pair(&moved).unwrap();
    for k in 0..f.values().len() {
        let img = moebius_apply(a, f.values()[k]).unwrap();
        assert!(img.same_point(&g.values()[k], 1e-10));
        let img = moebius_apply(a, fh.values()[k]).unwrap();
        assert!(img.same_point(&gh.values()[k], 1e-10));
    }
}

#[test]
fn gauge_changes_points_only_at_second_order() {
    // unit-quaternion gauge: extracted points agree with the original up to O(h²)
    let defect = |n: usize| {
        let pair = ChristoffelPair::from_weierstrass(&enneper(n)).unwrap();
        let phi = pair.connection();
        let d = *phi.phi.domain();
        let rot = |t: f64, axis: Quaternion| Quaternion::real(t.cos()) + axis * t.sin();
        let g = GaugePair {
            lambda: GridMap::from_fn(d, |_, _, z| rot(0.4 * z.re + 0.2 * z.im, Quaternion::I)),
            lambda_hat: GridMap::from_fn(d, |_, _, z| rot(0.3 * z.re * z.im, Quaternion::K)),
        };
        let f0 = QMat2::diag(g.lambda.get(0, 0), g.lambda_hat.get(0, 0));
        let a = integrate_frame(&phi, QMat2::IDENTITY, (0, 0)).unwrap();
        let b = integrate_frame(&gauge(&phi, &g).unwrap(), f0, (0, 0)).unwrap();
        let (p, _) = extract_pair(&a).unwrap();
        let (q, _) = extract_pair(&b).unwrap();
        p.values()
            .iter()
            .zip(q.values())
            .map(|(x, y)| (unit_form(x) - unit_form(y)).norm())
            .fold(0.0, f64::max)
    };
    let (a, b) = (defect(17), defect(33));
    assert!(a < 1e-2 && (a / b).log2() > 1.8, "{a} -> {b}");
}
