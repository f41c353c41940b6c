//! Space forms `M³_N = {y | ⟨N,y⟩ = 1, ⟨s₁,y⟩ = 0}` inside the light-cone model.

use nalgebra::Matrix5;
use rayon::prelude::*;

use super::darboux::{ChristoffelPair, DarbouxPair};
use crate::error::{Error, Result};
use crate::grid::{Field, GridMap};
use crate::minkowski::{lorentz, point_to_form, HermForm};
use crate::projective::HPoint;
use crate::quat::Quaternion;

/// A space form given by its constant vector `N` and the fixed 3-sphere `s₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    pub n: HermForm,
    pub s1: HermForm,
    /// Sectional curvature `−⟨N,N⟩`.
    pub kappa: f64,
}

impl SpaceForm {
    pub fn new(n: HermForm, s1: HermForm) -> Self {
        Self {
            n,
            s1,
            kappa: -lorentz(n, n),
        }
    }

    /// Flat gauge `N = [[0,0],[0,−2]]` on the hyperplane `Im ℍ`: points are
    /// normalized to `[[1, −h], [−h̄, |h|²]]`.
    pub fn euclidean() -> Self {
        Self::new(
            HermForm::new(0.0, -2.0, Quaternion::ZERO),
            HermForm::new(0.0, 0.0, -Quaternion::ONE),
        )
    }

    /// Export chart: a Poincaré ball when the curvature is negative, the
    /// affine chart otherwise.
    ///
    /// For `κ = −1/R² < 0` the points `x = y − R² N` of the space form lie on
    /// the two-sheeted hyperboloid `⟨x,x⟩ = −R²` inside `span(N, s₁)^⊥`. The ball origin
    /// `e₀` is the unit timelike projection of the identity form (falling back
    /// to the basis form with the most negative projection), and `e₁, e₂, e₃`
    /// complete it to an orthonormal basis by Gram–Schmidt over the standard
    /// basis forms.
    pub fn chart(&self) -> Chart {
        if !(self.kappa < 0.0) {
            return Chart::Affine;
        }
        let radius = (-1.0 / self.kappa).sqrt();
        let fixed = [self.n * (radius * 1.0), self.s1];
        let reject = |v: HermForm, basis: &[HermForm]| {
            basis.iter().fold(v, |v, e| {
                let ee = lorentz(*e, *e);
                v - *e * (lorentz(v, *e) / ee)
            })
        };
        let basis = HermForm::basis();
        let mut candidates = vec![HermForm::new(1.0, 1.0, Quaternion::ZERO)];
        candidates.extend(basis);
        let origin = candidates
            .iter()
            .map(|c| reject(*c, &fixed))
            .filter(|v| lorentz(*v, *v) < -1e-12)
            .min_by(|a, b| {
                let q = |v: &HermForm| lorentz(*v, *v) / v.norm().powi(2);
                q(a).total_cmp(&q(b))
            });
        let Some(origin) = origin else {
            return Chart::Affine;
        };
        let e0 = origin * (1.0 / (-lorentz(origin, origin)).sqrt());
        let mut frame = vec![fixed[0], fixed[1], e0];
        let mut axes = Vec::new();
        while axes.len() < 3 {
            let next = basis
                .iter()
                .map(|c| reject(*c, &frame))
                .max_by(|a, b| lorentz(*a, *a).total_cmp(&lorentz(*b, *b)))
                .filter(|v| lorentz(*v, *v) > 1e-12);
            let Some(v) = next else {
                return Chart::Affine;
            };
            let v = v * (1.0 / lorentz(v, v).sqrt());
            frame.push(v);
            axes.push(v);
        }
        Chart::PoincareBall {
            n: self.n,
            radius,
            origin: e0,
            axes: [axes[0], axes[1], axes[2]],
        }
    }
}

/// Maps normalized points of a space form to three coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Chart {
    /// Imaginary part of the affine coordinate `h = v1 v2⁻¹`.
    Affine,
    /// `ξ_k / (R + t)` with `x = y − R² N`, `t = |⟨x, e₀⟩|`, `ξ_k = ⟨x, e_k⟩`:
    /// the unit ball bounded by the infinity sphere. Both sheets of the
    /// hyperboloid (the two sides of the sphere `N`) map onto the ball.
    PoincareBall {
        n: HermForm,
        radius: f64,
        origin: HermForm,
        axes: [HermForm; 3],
    },
}

impl Chart {
    pub fn apply(&self, y: HermForm) -> Option<[f64; 3]> {
        match self {
            Chart::Affine => {
                if !(y.s11.abs() > 1e-300) {
                    return None;
                }
                let h = -y.s12 * (1.0 / y.s11);
                h.is_finite().then_some([h.x, h.y, h.z])
            }
            Chart::PoincareBall {
                n,
                radius,
                origin,
                axes,
            } => {
                let scale = lorentz(*n, y);
                if !(scale.abs() > 1e-300) {
                    return None;
                }
                let x = y * (1.0 / scale) - *n * (radius * radius);
                let t = lorentz(x, *origin).abs();
                let b = axes.map(|e| lorentz(x, e) / (radius + t));
                b.iter().all(|v| v.is_finite()).then_some(b)
            }
        }
    }

    pub fn description(&self) -> String {
        let arr = |f: &HermForm| {
            let a = f.to_array();
            format!(
                "[{}, {}, {}, {}, {}, {}]",
                a[0], a[1], a[2], a[3], a[4], a[5]
            )
        };
        match self {
            Chart::Affine => "affine chart: (x, y, z) = Im(v1 v2^-1)".to_string(),
            Chart::PoincareBall {
                n,
                radius,
                origin,
                axes,
            } => format!(
                "Poincare ball chart: x = y/<N,y> - R^2 N, (x1, x2, x3) = <x, e_k> / (R + |<x, e0>|), \
                 forms as [s11, s22, s12.w, s12.x, s12.y, s12.z], N = {}, R = {}, e0 = {}, e1 = {}, e2 = {}, e3 = {}",
                arr(n),
                radius,
                arr(origin),
                arr(&axes[0]),
                arr(&axes[1]),
                arr(&axes[2])
            ),
        }
    }
}

/// The frame-transported constant vector of a parallel constant-mean-curvature pair.
#[derive(Debug, Clone)]
pub struct ConstantVector {
    /// `N(p) = F(p)⁻¹·[[−Ĥ/ρ², m], [m̄, −H/ρ²]]` at every vertex.
    pub field: GridMap<HermForm>,
    /// `s₁(p) = F(p)⁻¹·[[0, μ], [μ̄, 0]]` with `μ` the first normal-plane vector.
    pub s1_field: GridMap<HermForm>,
    /// Largest relative deviation of `N(p)` from its mean.
    pub drift: f64,
    pub s1_drift: f64,
    /// Largest `||m|² − 1|` of the normal `m = −H f₀ − Ĥ f̂₀ + m₀`.
    pub unit_defect: f64,
    pub space_form: SpaceForm,
}

fn drift(field: &GridMap<HermForm>) -> (HermForm, f64) {
    let mean = field.mean();
    let scale = mean.norm().max(1e-300);
    let dev = field
        .values()
        .par_iter()
        .map(|v| (*v - mean).magnitude())
        .reduce(|| 0.0, f64::max);
    (mean, dev / scale)
}

/// Builds `N` for a Darboux pair whose Christoffel data has mean curvatures
/// `h` (of `f₀`) and `h_hat` (of `f̂₀`), both measured against the pair's second
/// normal `n2`. The constant `m₀` makes `m` equal `±n2` at the base vertex,
/// with the sign that keeps `m` closest to unit length.
pub fn constant_vector(
    pair: &ChristoffelPair,
    dp: &DarbouxPair,
    h: f64,
    h_hat: f64,
) -> Result<ConstantVector> {
    let base = dp.frame.base;
    let raw = pair
        .f0
        .zip_with(&pair.f_hat0, |a, b| -(*a * h) - *b * h_hat)?;
    let nu = pair.normals[base].1;
    let unit_dev = |sign: f64| {
        let m0 = nu * sign - raw[base];
        raw.values()
            .iter()
            .map(|v| ((*v + m0).norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    };
    let sign = if unit_dev(1.0) <= unit_dev(-1.0) {
        1.0
    } else {
        -1.0
    };
    let unit_defect = unit_dev(sign);
    let m0 = nu * sign - raw[base];
    let r2 = dp.rho * dp.rho;
    let frame = &dp.frame;
    let field = raw.try_map(|i, j, v| {
        Ok(HermForm::new(-h_hat / r2, -h / r2, *v + m0).act(frame.inv_at(i, j)?))
    })?;
    let s1_field = pair
        .normals
        .try_map(|i, j, n| Ok(HermForm::new(0.0, 0.0, n.0).act(frame.inv_at(i, j)?)))?;
    let (n_mean, drift_n) = drift(&field);
    let (s1_mean, drift_s1) = drift(&s1_field);
    let s1_len = lorentz(s1_mean, s1_mean).sqrt();
    Ok(ConstantVector {
        field,
        s1_field,
        drift: drift_n,
        s1_drift: drift_s1,
        unit_defect,
        space_form: SpaceForm::new(n_mean, s1_mean * (1.0 / s1_len)),
    })
}

/// Normalizes the point forms of `p` to `⟨N, y⟩ = 1`.
pub fn space_form_project(p: &GridMap<HPoint>, sf: &SpaceForm) -> Result<GridMap<HermForm>> {
    let nn = sf.n.norm();
    p.try_map(|i, j, q| {
        let s = point_to_form(q.rep)?;
        let c = lorentz(sf.n, s);
        if !(c.abs() > 1e-12 * nn * s.norm()) {
            return Err(Error::SpaceFormInfinity { i, j });
        }
        Ok(s * (1.0 / c))
    })
}

/// Largest `|⟨s₁, y⟩|` and `|⟨N, y⟩ − 1|` over a projected surface.
pub fn constraint_defect(y: &GridMap<HermForm>, sf: &SpaceForm) -> (f64, f64) {
    y.values().iter().fold((0.0f64, 0.0f64), |(a, b), v| {
        (
            a.max(lorentz(sf.s1, *v).abs()),
            b.max((lorentz(sf.n, *v) - 1.0).abs()),
        )
    })
}

fn gdot(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a[2] * b[2] + a[3] * b[3] + a[4] * b[4] + a[5] * b[5] - 0.5 * (a[0] * b[1] + a[1] * b[0])
}

fn lowered(a: [f64; 6]) -> [f64; 6] {
    [-0.5 * a[1], -0.5 * a[0], a[2], a[3], a[4], a[5]]
}

/// Vector orthogonal (in the Lorentz product) to five given vectors.
fn lorentz_normal(rows: [[f64; 6]; 5]) -> [f64; 6] {
    let low = rows.map(lowered);
    std::array::from_fn(|k| {
        let minor = Matrix5::from_fn(|r, c| low[r][if c < k { c } else { c + 1 }]);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    })
}

/// First and second fundamental forms `(E, F, G, L, M, N)` at interior
/// vertices, by central differences in R⁶₁ with the unit normal taken inside
/// the space form (oriented by `orient` when given).
fn fundamental_forms(
    y: &GridMap<HermForm>,
    sf: &SpaceForm,
    orient: Option<&GridMap<HermForm>>,
) -> Result<GridMap<[f64; 6]>> {
    let d = *y.domain();
    let inner = d.interior()?;
    let yv = y.map(|v| v.to_array());
    let (nv, s1v) = (sf.n.to_array(), sf.s1.to_array());
    let sub = |a: [f64; 6], b: [f64; 6], c: f64| -> [f64; 6] {
        std::array::from_fn(|k| (a[k] - b[k]) * c)
    };
    GridMap::try_from_fn(inner, |i, j, _| {
        let (i, j) = (i + 1, j + 1);
        let c = yv.get(i, j);
        let yx = sub(yv.get(i + 1, j), yv.get(i - 1, j), 0.5 / d.hx);
        let yy = sub(yv.get(i, j + 1), yv.get(i, j - 1), 0.5 / d.hy);
        let yxx: [f64; 6] = std::array::from_fn(|k| {
            (yv.get(i + 1, j)[k] - 2.0 * c[k] + yv.get(i - 1, j)[k]) / (d.hx * d.hx)
        });
        let yyy: [f64; 6] = std::array::from_fn(|k| {
            (yv.get(i, j + 1)[k] - 2.0 * c[k] + yv.get(i, j - 1)[k]) / (d.hy * d.hy)
        });
        let yxy: [f64; 6] = std::array::from_fn(|k| {
            (yv.get(i + 1, j + 1)[k] - yv.get(i + 1, j - 1)[k] - yv.get(i - 1, j + 1)[k]
                + yv.get(i - 1, j - 1)[k])
                / (4.0 * d.hx * d.hy)
        });
        let t = lorentz_normal([c, nv, s1v, yx, yy]);
        let tt = gdot(&t, &t);
        if !(tt > 0.0) {
            return Err(Error::NotImmersed { i, j });
        }
        let mut scale = 1.0 / tt.sqrt();
        if let Some(o) = orient {
            if gdot(&t, &o.get(i, j).to_array()) < 0.0 {
                scale = -scale;
            }
        }
        let t: [f64; 6] = t.map(|v| v * scale);
        let (e, f, g) = (gdot(&yx, &yx), gdot(&yx, &yy), gdot(&yy, &yy));
        if !(e * g - f * f > 0.0) {
            return Err(Error::NotImmersed { i, j });
        }
        Ok([e, f, g, gdot(&yxx, &t), gdot(&yxy, &t), gdot(&yyy, &t)])
    })
}

/// Mean curvature of a surface in a space form at interior vertices, by
/// central differences in R⁶₁. The unit normal is taken inside the space form;
/// when `orient` is given, it is oriented so that `⟨t, orient⟩ > 0`.
pub fn space_form_mean_curvature(
    y: &GridMap<HermForm>,
    sf: &SpaceForm,
    orient: Option<&GridMap<HermForm>>,
) -> Result<GridMap<f64>> {
    Ok(fundamental_forms(y, sf, orient)?
        .map(|[e, f, g, l, m, n]| (e * n - 2.0 * f * m + g * l) / (2.0 * (e * g - f * f))))
}

/// Gauss equation `K = κ + det II / det I` for a conformally parametrized
/// surface in a space form: the intrinsic curvature is `−Δu / e^{2u}` with
/// `e^{2u} = √(EG − F²)`. Returns the largest defect over vertices two cells
/// away from the boundary.
pub fn space_form_gauss_residual(y: &GridMap<HermForm>, sf: &SpaceForm) -> Result<f64> {
    let ff = fundamental_forms(y, sf, None)?;
    let d = *ff.domain();
    let area = ff.map(|[e, f, g, ..]| (e * g - f * f).sqrt());
    let u = area.map(|a| 0.5 * a.ln());
    let inner = d.interior()?;
    let defect = GridMap::from_fn(inner, |i, j, _| {
        let (i, j) = (i + 1, j + 1);
        let c = u.get(i, j);
        let lap = (u.get(i + 1, j) - 2.0 * c + u.get(i - 1, j)) / (d.hx * d.hx)
            + (u.get(i, j + 1) - 2.0 * c + u.get(i, j - 1)) / (d.hy * d.hy);
        let [e, f, g, l, m, n] = ff.get(i, j);
        let intrinsic = -lap / area.get(i, j);
        let extrinsic = sf.kappa + (l * n - m * m) / (e * g - f * f);
        (intrinsic - extrinsic).abs()
    });
    Ok(defect.values().iter().fold(0.0, |a: f64, b| a.max(*b)))
}
