//! Darboux pairs from the spectral family of curved flats of a Christoffel pair.
//!
//! For a Christoffel pair `(f₀, f̂₀)` the connection
//! `Φρ = [[0, ρ² df̂₀], [ρ² d f̄₀, 0]]` is flat for every `ρ`; the columns of its
//! frame form a Darboux pair enveloping the pencil sphere congruence
//! `s_c = F⁻¹·[[0, n_c], [n̄_c, 0]]`, where `n_c` runs through the unit normals
//! of the pair.

use rayon::prelude::*;

use super::geometry::normal_planes;
use super::weierstrass::{minimal_from_weierstrass, WeierstrassData};
use crate::error::{Error, Result};
use crate::frames::{
    curved_flat_residual, extract_pair, integrate_frame, maurer_cartan_residual, spectral_scale,
    ConnectionForm, Frame, MaurerCartanResidual,
};
use crate::grid::{christoffel_residual_forms, exterior_d, EdgeForm, GridMap};
use crate::minkowski::{lorentz, point_to_form, HermForm};
use crate::projective::HPoint;
use crate::qlinalg::{QMat2, QVec2};
use crate::quat::Quaternion;

/// Christoffel residual above which a pair is not accepted for integration.
pub const CHRISTOFFEL_THRESHOLD: f64 = 0.05;

/// A Christoffel pair with the differentials used to build connections.
#[derive(Debug, Clone)]
pub struct ChristoffelPair {
    pub f0: GridMap<Quaternion>,
    pub f_hat0: GridMap<Quaternion>,
    /// `d f̄₀` as edge values.
    pub d_bar: EdgeForm<Quaternion>,
    /// `d f̂₀` as edge values.
    pub d_hat: EdgeForm<Quaternion>,
    /// Orthonormal normal-plane basis `(n1, n2)` at each vertex.
    pub normals: GridMap<(Quaternion, Quaternion)>,
}

impl ChristoffelPair {
    /// Differentials by edge differences, normals by central differences of `f0`.
    pub fn from_maps(f0: &GridMap<Quaternion>, f_hat0: &GridMap<Quaternion>) -> Result<Self> {
        if f0.domain() != f_hat0.domain() {
            return Err(Error::DomainMismatch);
        }
        Ok(Self {
            d_bar: exterior_d(&f0.map(|q| q.conj())),
            d_hat: exterior_d(f_hat0),
            normals: normal_planes(f0)?,
            f0: f0.clone(),
            f_hat0: f_hat0.clone(),
        })
    }

    /// Gauss map and minimal surface of holomorphic data, with differentials
    /// taken from the closed-form blocks and normals `(1, f₀)`.
    pub fn from_weierstrass(data: &WeierstrassData) -> Result<Self> {
        let minimal = minimal_from_weierstrass(data)?;
        let phi = data.pair_connection()?;
        Ok(Self {
            d_bar: phi.phi.map(|m| m.a21),
            d_hat: phi.phi.map(|m| m.a12),
            normals: minimal.gauss_map.map(|n| (Quaternion::ONE, *n)),
            f0: minimal.gauss_map,
            f_hat0: minimal.surface,
        })
    }

    pub fn connection(&self) -> ConnectionForm {
        ConnectionForm::off_diagonal(&self.d_hat, &self.d_bar).expect("same domain")
    }

    pub fn residual(&self) -> Result<f64> {
        christoffel_residual_forms(&self.d_bar.map(|q| q.conj()), &self.d_hat)
    }

    /// Pencil normal `cos θ n1 + sin θ n2`.
    pub fn pencil_normal(&self, theta: f64) -> GridMap<Quaternion> {
        let (c, s) = (theta.cos(), theta.sin());
        self.normals.map(|(n1, n2)| *n1 * c + *n2 * s)
    }
}

/// Residuals and geometric diagnostics of a Darboux pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxReport {
    pub christoffel: f64,
    pub curved_flat: f64,
    pub maurer_cartan: MaurerCartanResidual,
    pub holonomy: f64,
    pub study_drift: f64,
    pub trace_defect: f64,
    /// `max |e^{2u} e^{−2u} − 1|` of the two induced metrics.
    pub conformal_product: f64,
    /// Largest relative mixed second-fundamental-form component of either
    /// surface with respect to the pencil spheres at `θ ∈ {0, π/2}`.
    pub mixed_second_form: f64,
}

#[derive(Debug, Clone)]
pub struct DarbouxPair {
    pub f: GridMap<HPoint>,
    pub f_hat: GridMap<HPoint>,
    pub frame: Frame,
    pub rho: f64,
    pub connection: ConnectionForm,
    pub report: DarbouxReport,
}

/// Integrates `Φρ` of the pair from `F(corner) = f_init`.
pub fn darboux_from_pair(pair: &ChristoffelPair, rho: f64, f_init: QMat2) -> Result<DarbouxPair> {
    let christoffel = pair.residual()?;
    if !(christoffel <= CHRISTOFFEL_THRESHOLD) {
        return Err(Error::ChristoffelPrecondition {
            residual: christoffel,
            threshold: CHRISTOFFEL_THRESHOLD,
        });
    }
    let connection = spectral_scale(&pair.connection(), rho);
    let frame = integrate_frame(&connection, f_init, (0, 0))?;
    let (f, f_hat) = extract_pair(&frame)?;
    let mut mixed: f64 = 0.0;
    for theta in [0.0, std::f64::consts::FRAC_PI_2] {
        let s = pencil_spheres(pair, &frame, theta)?;
        for col in [&f, &f_hat] {
            mixed = mixed.max(mixed_second_form(col, &s)?);
        }
    }
    let report = DarbouxReport {
        christoffel,
        curved_flat: curved_flat_residual(&connection),
        maurer_cartan: maurer_cartan_residual(&connection),
        holonomy: frame.holonomy_residual,
        study_drift: frame.study_drift(),
        trace_defect: connection.trace_defect(),
        conformal_product: conformal_product(&frame, rho)?,
        mixed_second_form: mixed,
    };
    Ok(DarbouxPair {
        f,
        f_hat,
        frame,
        rho,
        connection,
        report,
    })
}

/// Darboux pair of a Christoffel pair given by vertex samples.
pub fn darboux_pair(
    f0: &GridMap<Quaternion>,
    f_hat0: &GridMap<Quaternion>,
    rho: f64,
    f_init: QMat2,
) -> Result<DarbouxPair> {
    darboux_from_pair(&ChristoffelPair::from_maps(f0, f_hat0)?, rho, f_init)
}

/// The sphere congruence `F⁻¹·[[0, n_θ], [n̄_θ, 0]]` enveloped by both columns.
pub fn pencil_spheres(
    pair: &ChristoffelPair,
    frame: &Frame,
    theta: f64,
) -> Result<GridMap<HermForm>> {
    let n = pair.pencil_normal(theta);
    if n.domain() != frame.f.domain() {
        return Err(Error::DomainMismatch);
    }
    n.try_map(|i, j, n| Ok(HermForm::new(0.0, 0.0, *n).act(frame.inv_at(i, j)?)))
}

/// Lifts normalized to unit trace.
fn lifts(p: &GridMap<HPoint>) -> Result<GridMap<HermForm>> {
    p.try_map(|_, _, q| {
        let s = point_to_form(q.rep)?;
        Ok(s * (1.0 / (s.s11 + s.s22)))
    })
}

/// Largest mixed entry `|⟨∂x∂y s_f, s⟩|` of the second fundamental form with
/// respect to `s`, relative to the diagonal entries and `sqrt(EG)`, over
/// interior vertices by central differences.
pub fn mixed_second_form(f: &GridMap<HPoint>, s: &GridMap<HermForm>) -> Result<f64> {
    if f.domain() != s.domain() {
        return Err(Error::DomainMismatch);
    }
    let d = *f.domain();
    let y = lifts(f)?;
    let inner = d.interior()?;
    Ok((0..inner.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = inner.coords(k);
            let (i, j) = (i + 1, j + 1);
            let yx = (y.get(i + 1, j) - y.get(i - 1, j)) * (0.5 / d.hx);
            let yy = (y.get(i, j + 1) - y.get(i, j - 1)) * (0.5 / d.hy);
            let yxy = (y.get(i + 1, j + 1) - y.get(i + 1, j - 1) - y.get(i - 1, j + 1)
                + y.get(i - 1, j - 1))
                * (0.25 / (d.hx * d.hy));
            let yxx =
                (y.get(i + 1, j) - y.get(i, j) * 2.0 + y.get(i - 1, j)) * (1.0 / (d.hx * d.hx));
            let yyy =
                (y.get(i, j + 1) - y.get(i, j) * 2.0 + y.get(i, j - 1)) * (1.0 / (d.hy * d.hy));
            let sv = s.get(i, j);
            let scale = (lorentz(yx, yx) * lorentz(yy, yy))
                .abs()
                .sqrt()
                .max(lorentz(yxx, sv).abs())
                .max(lorentz(yyy, sv).abs());
            if scale > 0.0 {
                lorentz(yxy, sv).abs() / scale
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max))
}

fn mean_metric(y: &GridMap<HermForm>, i: usize, j: usize) -> f64 {
    let d = y.domain();
    let yx = (y.get(i + 1, j) - y.get(i - 1, j)) * (0.5 / d.hx);
    let yy = (y.get(i, j + 1) - y.get(i, j - 1)) * (0.5 / d.hy);
    0.5 * (lorentz(yx, yx) + lorentz(yy, yy))
}

/// `max |e^{2u} e^{−2u} − 1|` over interior vertices, where the two factors are
/// the induced metrics of `s_f` and `s_f̂ / 𝒟(F)` divided by `ρ⁴` each.
pub fn conformal_product(frame: &Frame, rho: f64) -> Result<f64> {
    let sf = frame.f.try_map(|_, _, m| point_to_form(m.col1()))?;
    let sfh = frame
        .f
        .try_map(|_, _, m| Ok(point_to_form(m.col2())? * (1.0 / m.study_det())))?;
    let inner = frame.f.domain().interior()?;
    let r8 = rho.powi(8);
    Ok((0..inner.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = inner.coords(k);
            let p = mean_metric(&sf, i + 1, j + 1) * mean_metric(&sfh, i + 1, j + 1) / r8;
            (p - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max))
}

/// Distance of the rescaled frame at small `ρ` from the triangular limits
/// `[[1, 0], [f̄₀ − f̄₀(base), 1]]` (rescaling `F21/ρ²`, `F12 ρ²`) and
/// `[[1, f̂₀ − f̂₀(base)], [0, 1]]` (rescaling `F12/ρ²`, `F21 ρ²`), where the
/// limits are potentials of the pair's edge differentials. Returns the larger
/// of the two sup-norm distances. The frame must start at the identity.
pub fn limit_defect(pair: &ChristoffelPair, frame: &Frame, rho: f64) -> Result<f64> {
    let base = frame.base;
    let fb = crate::grid::integrate_potential(&pair.d_bar, base, Quaternion::ZERO).map;
    let fh = crate::grid::integrate_potential(&pair.d_hat, base, Quaternion::ZERO).map;
    let r2 = rho * rho;
    let lower = frame.f.zip_with(&fb, |m, b| {
        let scaled = QMat2::new(m.a11, m.a12 * r2, m.a21 * (1.0 / r2), m.a22);
        let target = QMat2::new(Quaternion::ONE, Quaternion::ZERO, *b, Quaternion::ONE);
        (scaled - target).max_abs()
    })?;
    let upper = frame.f.zip_with(&fh, |m, b| {
        let scaled = QMat2::new(m.a11, m.a12 * (1.0 / r2), m.a21 * r2, m.a22);
        let target = QMat2::new(Quaternion::ONE, *b, Quaternion::ZERO, Quaternion::ONE);
        (scaled - target).max_abs()
    })?;
    let sup = |g: &GridMap<f64>| g.values().iter().fold(0.0f64, |a, b| a.max(*b));
    Ok(sup(&lower).max(sup(&upper)))
}

/// Homogeneous coordinates of the columns, for callers that need raw vectors.
pub fn columns(frame: &Frame) -> (GridMap<QVec2>, GridMap<QVec2>) {
    (frame.f.map(|m| m.col1()), frame.f.map(|m| m.col2()))
}
