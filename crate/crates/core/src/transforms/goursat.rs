//! Goursat-type transformation of Christoffel pairs.

use crate::error::{Error, Result};
use crate::grid::{
    christoffel_residual, closedness_residual, exterior_d, integrate_potential, EdgeForm, GridMap,
};
use crate::quat::Quaternion;

/// Result of [`goursat_transform`].
#[derive(Debug, Clone)]
pub struct GoursatTransform {
    /// `(a + f̄₀)⁻¹ d f̄₀ (a + f̄₀)⁻¹`, the differential of the new `f̄₀`.
    pub omega: EdgeForm<Quaternion>,
    /// `(a + f̄₀) d f̂₀ (a + f̄₀)`, the differential of the new `f̂₀`.
    pub omega_hat: EdgeForm<Quaternion>,
    pub f0: GridMap<Quaternion>,
    pub f_hat0: GridMap<Quaternion>,
    /// Closedness of `omega` and `omega_hat` per unit area.
    pub closedness: (f64, f64),
    pub christoffel_residual: f64,
}

/// Conjugates the differentials of a Christoffel pair by `a + f̄₀` (midpoint
/// values) and integrates the two resulting forms from the corner.
pub fn goursat_transform(
    f0: &GridMap<Quaternion>,
    f_hat0: &GridMap<Quaternion>,
    a: Quaternion,
) -> Result<GoursatTransform> {
    if f0.domain() != f_hat0.domain() {
        return Err(Error::DomainMismatch);
    }
    let d = *f0.domain();
    let guard = 1e-12 * (1.0 + a.norm());
    let m = f0.map(|f| a + f.conj());
    if let Some(k) = m.values().iter().position(|v| v.norm() <= guard) {
        let (i, j) = d.coords(k);
        return Err(Error::GoursatSingularity { i, j });
    }
    let dfb = exterior_d(&f0.map(|q| q.conj()));
    let dfh = exterior_d(f_hat0);
    let edge = |p: (usize, usize), q: (usize, usize), e: Quaternion, eh: Quaternion| {
        let mid = (m[p] + m[q]) * 0.5;
        let inv = mid
            .inv_scaled(a.norm())
            .map_err(|_| Error::GoursatSingularity { i: p.0, j: p.1 })?;
        Ok((inv * e * inv, mid * eh * mid))
    };
    let forms = EdgeForm::try_from_fns(
        d,
        |i, j| edge((i, j), (i + 1, j), dfb.x(i, j), dfh.x(i, j)),
        |i, j| edge((i, j), (i, j + 1), dfb.y(i, j), dfh.y(i, j)),
    )?;
    let omega = forms.map(|p| p.0);
    let omega_hat = forms.map(|p| p.1);
    let closedness = (closedness_residual(&omega), closedness_residual(&omega_hat));
    let f0_new = integrate_potential(&omega, (0, 0), Quaternion::ZERO)
        .map
        .map(|q| q.conj());
    let f_hat_new = integrate_potential(&omega_hat, (0, 0), Quaternion::ZERO).map;
    let christoffel_residual = christoffel_residual(&f0_new, &f_hat_new)?;
    Ok(GoursatTransform {
        omega,
        omega_hat,
        f0: f0_new,
        f_hat0: f_hat_new,
        closedness,
        christoffel_residual,
    })
}
