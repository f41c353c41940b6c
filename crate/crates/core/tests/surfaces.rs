use std::f64::consts::FRAC_PI_2;

use curvedflat::minkowski::{envelope_residual, point_to_form};
use curvedflat::transforms::{
    bryant_surface, christoffel_transform, columns, darboux_from_pair, darboux_pair,
    geometry_report, goursat_transform, minimal_from_weierstrass, pencil_spheres, similarity_align,
    space_form_project, ChristoffelPair, NormalSource, SpaceForm, WeierstrassData,
};
use curvedflat::{Error, GridDomain, GridMap, HPoint, HermForm, QMat2, Quaternion};
use num_complex::Complex64;

fn one(_: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn enneper(n: usize) -> WeierstrassData {
    WeierstrassData::sample(GridDomain::unit_square(n).unwrap(), |z| z, one)
}

fn unit_form(p: &HPoint) -> HermForm {
    let s = point_to_form(p.rep).unwrap();
    s * (1.0 / s.norm())
}

fn max_form_distance(a: &GridMap<HPoint>, b: &GridMap<HPoint>) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (unit_form(x) - unit_form(y)).norm())
        .fold(0.0, f64::max)
}

#[test]
fn enneper_matches_closed_form() {
    // x = Re(z − z³/3)/2, y = Re(i(z + z³/3))/2, z = Re(z²)/2
    let n = 33;
    let m = minimal_from_weierstrass(&enneper(n)).unwrap();
    let exact = GridMap::from_fn(*m.surface.domain(), |_, _, z| {
        let z3 = z * z * z;
        let i = Complex64::new(0.0, 1.0);
        Quaternion::imaginary(
            ((z - z3 / 3.0) * 0.5).re,
            ((z + z3 / 3.0) * i * 0.5).re,
            (z * z * 0.5).re,
        )
    });
    let a = similarity_align(&exact, &m.surface).unwrap();
    assert!((a.scale - 1.0).abs() < 1e-12, "{}", a.scale);
    assert!(a.sup_distance < 1e-12, "{}", a.sup_distance);
    assert!(m.scalar_part < 1e-15);
}

#[test]
fn gauss_map_dual_converges_to_surface() {
    let dist = |n: usize| {
        let m = minimal_from_weierstrass(&enneper(n)).unwrap();
        let t = christoffel_transform(&m.gauss_map).unwrap();
        similarity_align(&t.dual, &m.surface).unwrap().sup_distance
    };
    let (a, b) = (dist(33), dist(65));
    assert!(b < 1e-3 && (a / b).log2() > 1.8, "{a} -> {b}");
}

#[test]
fn poles_are_reported() {
    let d = GridDomain::unit_square(17).unwrap();
    let data = WeierstrassData::sample(d, |z| 1.0 / z, one);
    assert_eq!(data.first_pole(), Some((8, 8)));
    assert!(matches!(
        minimal_from_weierstrass(&data),
        Err(Error::PoleInDomain { i: 8, j: 8 })
    ));
}

#[test]
fn goursat_singular_parameter_rejected() {
    // a = i equals the Gauss map at z = 0, so a + conj(f0) vanishes there
    let m = minimal_from_weierstrass(&enneper(17)).unwrap();
    let r = goursat_transform(&m.gauss_map, &m.surface, Quaternion::I);
    assert!(matches!(r, Err(Error::GoursatSingularity { .. })), "{r:?}");
}

#[test]
fn enneper_has_zero_mean_curvature() {
    let res = |n: usize| {
        let m = minimal_from_weierstrass(&enneper(n)).unwrap();
        let r = geometry_report(&m.surface, NormalSource::Tangent, FRAC_PI_2).unwrap();
        let h = r.h.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        (h, r.codazzi_residual)
    };
    let (a, b) = (res(33), res(65));
    // central differences are exact on the cubic patch up to rounding
    assert!(a.0 < 1e-10 && b.0 < 1e-10, "H {} -> {}", a.0, b.0);
    assert!((a.1 / b.1).log2() > 1.8, "Codazzi {} -> {}", a.1, b.1);
}

#[test]
fn round_sphere_report() {
    // Mercator chart: conformal curvature-line coordinates with e^u = sech x
    let res = |n: usize| {
        let d = GridDomain::rect(Complex64::new(-1.0, 0.0), 2.0, 2.0, n, n).unwrap();
        let f = GridMap::from_fn(d, |_, _, z| {
            let s = 1.0 / z.re.cosh();
            Quaternion::imaginary(s * z.im.cos(), s * z.im.sin(), z.re.tanh())
        });
        geometry_report(&f, NormalSource::Tangent, FRAC_PI_2).unwrap()
    };
    let (a, b) = (res(33), res(65));
    assert!((b.mean_h().abs() - 1.0).abs() < 1e-3, "{}", b.mean_h());
    assert!(b.h_spread() < 1e-2);
    assert!((a.gauss_residual / b.gauss_residual).log2() > 1.8);
    // e^u = sech x at the centre of the chart
    let mid = b.u.domain().nx / 2;
    assert!(b.u.get(mid, mid).abs() < 1e-3);
}

#[test]
fn constant_gauss_map_gives_horosphere() {
    for g in [Complex64::new(0.0, 0.0), Complex64::new(0.5, -0.25)] {
        let data = WeierstrassData::sample(GridDomain::unit_square(17).unwrap(), move |_| g, one);
        let b = bryant_surface(&data, QMat2::IDENTITY).unwrap();
        assert!(b.report.mean_curvature_deviation < 1e-10, "{g}");
        assert!((b.report.kappa + 1.0).abs() < 1e-10);
        // flat: K = κ + k1 k2 = −1 + 1
        assert!(b.report.gauss_residual < 1e-6, "{}", b.report.gauss_residual);
    }
}

#[test]
fn euclidean_gauge_round_trip() {
    let sf = SpaceForm::euclidean();
    assert_eq!(sf.kappa, 0.0);
    let d = GridDomain::unit_square(9).unwrap();
    let h = GridMap::from_fn(d, |_, _, z| {
        Quaternion::imaginary(z.re, z.im, z.re * z.im - 0.3)
    });
    let y = space_form_project(&h.map(|q| HPoint::from_affine(*q)), &sf).unwrap();
    for (p, s) in h.values().iter().zip(y.values()) {
        assert!((s.s11 - 1.0).abs() < 1e-12);
        assert!((s.s12 + *p).norm() < 1e-10);
        assert!((s.s22 - p.norm_sqr()).abs() < 1e-10);
    }
}

#[test]
fn spectral_parameter_absorbs_partner_scaling() {
    // (f0, c² f̂0) at ρ and (f0, f̂0) at √c·ρ differ by the constant gauge diag(1, 1/c)
    let n = 33;
    let m = minimal_from_weierstrass(&enneper(n)).unwrap();
    let (c, rho) = (1.7f64, 0.8);
    let scaled = m.surface.map(|q| *q * (c * c));
    let a = darboux_pair(&m.gauss_map, &scaled, rho, QMat2::IDENTITY).unwrap();
    let g = QMat2::diag(Quaternion::ONE, Quaternion::real(1.0 / c));
    let b = darboux_pair(&m.gauss_map, &m.surface, c.sqrt() * rho, g).unwrap();
    assert!(max_form_distance(&a.f, &b.f) < 1e-10);
    assert!(max_form_distance(&a.f_hat, &b.f_hat) < 1e-10);
}

#[test]
fn envelope_survives_moebius_change_of_initial_frame() {
    let pair = ChristoffelPair::from_weierstrass(&enneper(33)).unwrap();
    let a = QMat2::new(
        Quaternion::new(0.9, 0.0, 0.3, 0.0),
        Quaternion::new(0.0, 0.4, 0.0, 0.0),
        Quaternion::new(0.2, 0.0, 0.0, 0.1),
        Quaternion::new(1.1, 0.0, 0.0, 0.0),
    );
    for f_init in [QMat2::IDENTITY, a] {
        let dp = darboux_from_pair(&pair, 1.0, f_init).unwrap();
        let s = pencil_spheres(&pair, &dp.frame, 0.0).unwrap();
        let (c1, c2) = columns(&dp.frame);
        for c in [c1, c2] {
            let e = envelope_residual(&c, &s).unwrap();
            assert!(e.incidence < 1e-4 && e.tangency < 1e-4, "{e:?}");
        }
    }
}
