//! Mean curvature one surfaces in hyperbolic space from holomorphic data.

use super::darboux::{darboux_from_pair, pencil_spheres, ChristoffelPair, DarbouxReport};
use super::spaceform::{
    constant_vector, constraint_defect, space_form_gauss_residual, space_form_mean_curvature,
    space_form_project, SpaceForm,
};
use super::weierstrass::WeierstrassData;
use crate::error::Result;
use crate::frames::Frame;
use crate::grid::GridMap;
use crate::minkowski::{lorentz, point_to_form, HermForm};
use crate::projective::HPoint;
use crate::qlinalg::QMat2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BryantReport {
    pub darboux: DarbouxReport,
    /// Largest relative deviation of the transported `N(p)` from its mean.
    pub constant_vector_drift: f64,
    /// `max |⟨N(p), s_f(p)⟩| / (‖N‖ tr s_f)`: the Gauss map lies at infinity.
    pub boundary_defect: f64,
    /// The same with the averaged `N`.
    pub boundary_defect_mean: f64,
    /// `max |⟨s₁, y⟩|` of the projected surface.
    pub s1_defect: f64,
    pub kappa: f64,
    /// `max |H − 1|` over interior vertices.
    pub mean_curvature_deviation: f64,
    /// Gauss-equation residual `K = κ + det II / det I` of the projected surface.
    pub gauss_residual: f64,
}

#[derive(Debug, Clone)]
pub struct BryantSurface {
    /// The surface `f̂` (second frame column).
    pub surface: GridMap<HPoint>,
    /// Its hyperbolic Gauss map `f` (first frame column).
    pub gauss: GridMap<HPoint>,
    pub frame: Frame,
    pub space_form: SpaceForm,
    /// Points of the surface normalized into the space form.
    pub projected: GridMap<HermForm>,
    /// Mean curvature at interior vertices.
    pub mean_curvature: GridMap<f64>,
    pub report: BryantReport,
}

/// Integrates `[[0, ½ a ω̄ j a], [−2 a⁻¹ dg j a⁻¹, 0]]` from `F(corner) = f_init`
/// and projects the second column into the hyperbolic space of the constant
/// vector `N = F⁻¹·[[0, f₀], [f̄₀, 1]]`.
pub fn bryant_surface(data: &WeierstrassData, f_init: QMat2) -> Result<BryantSurface> {
    let pair = ChristoffelPair::from_weierstrass(data)?;
    let dp = darboux_from_pair(&pair, 1.0, f_init)?;
    // the unit sphere has mean curvature −1 with respect to its outward normal
    let cv = constant_vector(&pair, &dp, -1.0, 0.0)?;
    let sf = cv.space_form;

    let sfs = dp.f.try_map(|_, _, p| point_to_form(p.rep))?;
    let ratio = |n: HermForm, s: HermForm| lorentz(n, s).abs() / (n.norm() * (s.s11 + s.s22));
    let boundary_defect = cv
        .field
        .zip_with(&sfs, |n, s| ratio(*n, *s))?
        .values()
        .iter()
        .fold(0.0, |a: f64, b| a.max(*b));
    let boundary_defect_mean = sfs
        .values()
        .iter()
        .map(|s| ratio(sf.n, *s))
        .fold(0.0, f64::max);

    let projected = space_form_project(&dp.f_hat, &sf)?;
    let (s1_defect, _) = constraint_defect(&projected, &sf);
    let orient = pencil_spheres(&pair, &dp.frame, std::f64::consts::FRAC_PI_2)?;
    let mean_curvature = space_form_mean_curvature(&projected, &sf, Some(&orient))?;
    let mean_curvature_deviation = mean_curvature
        .values()
        .iter()
        .map(|h| (h - 1.0).abs())
        .fold(0.0, f64::max);
    let gauss_residual = space_form_gauss_residual(&projected, &sf)?;

    Ok(BryantSurface {
        surface: dp.f_hat,
        gauss: dp.f,
        report: BryantReport {
            darboux: dp.report,
            constant_vector_drift: cv.drift,
            boundary_defect,
            boundary_defect_mean,
            s1_defect,
            kappa: sf.kappa,
            mean_curvature_deviation,
            gauss_residual,
        },
        frame: dp.frame,
        space_form: sf,
        projected,
        mean_curvature,
    })
}
