//! Christoffel duality and surface alignment.

use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;

use super::geometry::partials;
use crate::error::{Error, Result};
use crate::grid::{
    christoffel_residual, closedness_residual, exterior_d, integrate_potential, EdgeForm, GridMap,
};
use crate::quat::Quaternion;

/// Largest conformality or orthogonality defect accepted as isothermic.
pub const ISOTHERMIC_TOLERANCE: f64 = 0.05;

/// Relative deviation below which `df̂ = c·df` counts as homothetic.
pub const HOMOTHETY_TOLERANCE: f64 = 1e-6;

/// Diagnostics for conformal curvature-line coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermicDefect {
    /// `max | |fx| / |fy| − 1 |`.
    pub conformality: f64,
    /// `max |fx · fy| / (|fx| |fy|)`.
    pub orthogonality: f64,
}

pub fn isothermic_defect(f: &GridMap<Quaternion>) -> Result<IsothermicDefect> {
    let (fx, fy) = partials(f);
    let d = *f.domain();
    let per_vertex: Vec<Result<(f64, f64)>> = (0..d.len())
        .into_par_iter()
        .map(|k| {
            let (a, b) = (fx.values()[k], fy.values()[k]);
            let (na, nb) = (a.norm(), b.norm());
            if na == 0.0 || nb == 0.0 {
                let (i, j) = d.coords(k);
                return Err(Error::NotImmersed { i, j });
            }
            Ok(((na / nb - 1.0).abs(), a.dot(b).abs() / (na * nb)))
        })
        .collect();
    let mut out = IsothermicDefect {
        conformality: 0.0,
        orthogonality: 0.0,
    };
    for r in per_vertex {
        let (c, o) = r?;
        out.conformality = out.conformality.max(c);
        out.orthogonality = out.orthogonality.max(o);
    }
    Ok(out)
}

/// Result of [`christoffel_transform`].
#[derive(Debug, Clone)]
pub struct ChristoffelTransform {
    pub dual: GridMap<Quaternion>,
    pub differential: EdgeForm<Quaternion>,
    pub closedness: f64,
    pub path_residual: f64,
    /// `christoffel_residual(f0, dual)` at the working resolution.
    pub residual: f64,
    /// The same residual on the grid with every other vertex, when available.
    pub coarse_residual: Option<f64>,
    pub isothermic: IsothermicDefect,
}

impl ChristoffelTransform {
    /// Observed convergence order between the coarse and working grids.
    pub fn order(&self) -> Option<f64> {
        self.coarse_residual.map(|c| (c / self.residual).log2())
    }
}

fn coordinate_dual(f0: &GridMap<Quaternion>) -> Result<EdgeForm<Quaternion>> {
    let d = *f0.domain();
    let df = exterior_d(f0);
    let (hx2, hy2) = (d.hx * d.hx, d.hy * d.hy);
    EdgeForm::try_from_fns(
        d,
        |i, j| {
            df.x(i, j)
                .inv_scaled(d.hx)
                .map(|q| q * hx2)
                .map_err(|_| Error::NotImmersed { i, j })
        },
        |i, j| {
            df.y(i, j)
                .inv_scaled(d.hy)
                .map(|q| q * -hy2)
                .map_err(|_| Error::NotImmersed { i, j })
        },
    )
}

/// Best real factor `c` with `β ≈ c α` and the relative deviation of the fit.
pub fn homothety_fit(alpha: &EdgeForm<Quaternion>, beta: &EdgeForm<Quaternion>) -> (f64, f64) {
    let pairs = || {
        alpha
            .x_values()
            .iter()
            .chain(alpha.y_values())
            .zip(beta.x_values().iter().chain(beta.y_values()))
    };
    let (num, den) = pairs().fold((0.0, 0.0), |(n, d), (a, b)| {
        (n + a.dot(*b), d + a.norm_sqr())
    });
    let c = if den > 0.0 { num / den } else { 0.0 };
    let dev = pairs().fold(0.0f64, |m, (a, b)| m.max((*b - *a * c).norm()));
    let scale = beta.max_magnitude();
    (c, if scale > 0.0 { dev / scale } else { 0.0 })
}

/// Builds the coordinate dual `ωx = (∂x f₀)⁻¹ hx`, `ωy = −(∂y f₀)⁻¹ hy`, integrates
/// it from the corner and measures the Christoffel residual of the result.
pub fn christoffel_transform(f0: &GridMap<Quaternion>) -> Result<ChristoffelTransform> {
    let d = *f0.domain();
    let isothermic = isothermic_defect(f0)?;
    if isothermic.conformality > ISOTHERMIC_TOLERANCE
        || isothermic.orthogonality > ISOTHERMIC_TOLERANCE
    {
        return Err(Error::NotIsothermic {
            h: d.h(),
            conformality: isothermic.conformality,
            orthogonality: isothermic.orthogonality,
        });
    }
    let differential = coordinate_dual(f0)?;
    let (_, deviation) = homothety_fit(&exterior_d(f0), &differential);
    if deviation < HOMOTHETY_TOLERANCE {
        return Err(Error::HomotheticPair { deviation });
    }
    let closedness = closedness_residual(&differential);
    let pot = integrate_potential(&differential, (0, 0), Quaternion::ZERO);
    let residual = christoffel_residual(f0, &pot.map)?;
    let coarse_residual = match (f0.coarsen(), pot.map.coarsen()) {
        (Some(a), Some(b)) if a.domain().nx >= 3 && a.domain().ny >= 3 => {
            Some(christoffel_residual(&a, &b)?)
        }
        _ => None,
    };
    Ok(ChristoffelTransform {
        dual: pot.map,
        differential,
        closedness,
        path_residual: pot.path_residual,
        residual,
        coarse_residual,
        isothermic,
    })
}

/// Largest `|Im(conj(Δf) Δf̂)| / (|Δf| |Δf̂|)` over edges: zero when
/// corresponding edges are parallel, as for Christoffel partners in
/// curvature-line coordinates.
pub fn edge_parallelism(f: &GridMap<Quaternion>, f_hat: &GridMap<Quaternion>) -> Result<f64> {
    let df = exterior_d(f);
    let dg = exterior_d(f_hat);
    let per_edge = df.zip_with(&dg, |a, b| {
        let s = a.norm() * b.norm();
        if s > 0.0 {
            (a.conj() * *b).im().norm() / s
        } else {
            0.0
        }
    })?;
    Ok(per_edge
        .x_values()
        .iter()
        .chain(per_edge.y_values())
        .fold(0.0, |m, v| m.max(*v)))
}

/// All checks distinguishing a Christoffel pair from look-alikes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCheck {
    /// Wedge characterization (see [`christoffel_residual`]).
    pub residual: f64,
    /// Edge parallelism in the given coordinates (see [`edge_parallelism`]).
    pub parallelism: f64,
    /// Best homothety factor and its relative misfit.
    pub homothety: (f64, f64),
}

impl PairCheck {
    pub fn is_homothetic(&self) -> bool {
        self.homothety.1 < HOMOTHETY_TOLERANCE
    }
}

pub fn christoffel_pair_check(
    f: &GridMap<Quaternion>,
    f_hat: &GridMap<Quaternion>,
) -> Result<PairCheck> {
    Ok(PairCheck {
        residual: christoffel_residual(f, f_hat)?,
        parallelism: edge_parallelism(f, f_hat)?,
        homothety: homothety_fit(&exterior_d(f), &exterior_d(f_hat)),
    })
}

/// Least-squares similarity `q ≈ s R p + t` (orthogonal `R`, reflections
/// allowed) between two sampled surfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub scale: f64,
    pub rotation: Matrix4<f64>,
    pub translation: Vector4<f64>,
    /// Largest pointwise distance after alignment.
    pub sup_distance: f64,
}

impl Alignment {
    pub fn apply(&self, p: Quaternion) -> Quaternion {
        let v = self.rotation * Vector4::from(p.to_array()) * self.scale + self.translation;
        Quaternion::new(v[0], v[1], v[2], v[3])
    }
}

pub fn similarity_align(p: &GridMap<Quaternion>, q: &GridMap<Quaternion>) -> Result<Alignment> {
    if p.domain() != q.domain() {
        return Err(Error::DomainMismatch);
    }
    let to_v = |x: &Quaternion| Vector4::from(x.to_array());
    let n = p.values().len() as f64;
    let mp = p.values().iter().map(to_v).sum::<Vector4<f64>>() / n;
    let mq = q.values().iter().map(to_v).sum::<Vector4<f64>>() / n;
    let mut cov = Matrix4::zeros();
    let mut var = 0.0;
    for (a, b) in p.values().iter().zip(q.values()) {
        let (pa, qb) = (to_v(a) - mp, to_v(b) - mq);
        cov += qb * pa.transpose();
        var += pa.norm_squared();
    }
    let svd = cov.svd(true, true);
    let (u, vt) = (svd.u.expect("u requested"), svd.v_t.expect("v requested"));
    let rotation = u * vt;
    let scale = if var > 0.0 {
        svd.singular_values.sum() / var
    } else {
        0.0
    };
    let translation = mq - rotation * mp * scale;
    let mut al = Alignment {
        scale,
        rotation,
        translation,
        sup_distance: 0.0,
    };
    al.sup_distance = p
        .values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (al.apply(*a) - *b).norm())
        .fold(0.0, f64::max);
    Ok(al)
}
