//! Pointwise differential-geometric helpers shared by the transforms.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::grid::GridMap;
use crate::quat::Quaternion;

/// Partial derivatives by central differences, with second-order one-sided
/// stencils on the boundary (first order when a direction has two vertices).
pub fn partials(f: &GridMap<Quaternion>) -> (GridMap<Quaternion>, GridMap<Quaternion>) {
    let d = *f.domain();
    let along = |at: &dyn Fn(usize) -> Quaternion, k: usize, n: usize, h: f64| {
        if n == 2 {
            (at(1) - at(0)) * (1.0 / h)
        } else if k == 0 {
            (at(0) * -3.0 + at(1) * 4.0 - at(2)) * (0.5 / h)
        } else if k == n - 1 {
            (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) * (0.5 / h)
        } else {
            (at(k + 1) - at(k - 1)) * (0.5 / h)
        }
    };
    let fx = GridMap::from_fn(d, |i, j, _| along(&|k| f.get(k, j), i, d.nx, d.hx));
    let fy = GridMap::from_fn(d, |i, j, _| along(&|k| f.get(i, k), j, d.ny, d.hy));
    (fx, fy)
}

fn det4(a: Quaternion, b: Quaternion, c: Quaternion, e: Quaternion) -> f64 {
    Matrix4::from_columns(&[
        a.to_array().into(),
        b.to_array().into(),
        c.to_array().into(),
        e.to_array().into(),
    ])
    .determinant()
}

fn reject(v: Quaternion, basis: &[Quaternion]) -> Quaternion {
    basis.iter().fold(v, |v, e| v - *e * v.dot(*e))
}

/// Orthonormal basis `(n1, n2)` of the normal plane spanned at a point with
/// tangent vectors `fx`, `fy`. `n1` is the normalized projection of 1 (so it is
/// 1 itself for surfaces in Im ℍ); `n2` completes `(n1, fx, fy, n2)` to a
/// positively oriented frame, which for surfaces in Im ℍ makes it `fx × fy / |fx × fy|`.
pub fn normal_plane(fx: Quaternion, fy: Quaternion) -> Option<(Quaternion, Quaternion)> {
    let e1 = fx.normalize().ok()?;
    let e2 = reject(fy, &[e1]).normalize().ok()?;
    let candidates = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let pick = |basis: &[Quaternion]| {
        candidates
            .iter()
            .map(|c| reject(*c, basis))
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .and_then(|v| v.normalize().ok())
    };
    let n1 = {
        let r = reject(Quaternion::ONE, &[e1, e2]);
        if r.norm() > 1e-8 {
            r.normalize().ok()?
        } else {
            pick(&[e1, e2])?
        }
    };
    let n2 = pick(&[e1, e2, n1])?;
    let n2 = if det4(n1, e1, e2, n2) < 0.0 { -n2 } else { n2 };
    Some((n1, n2))
}

/// Normal-plane bases of a surface at every vertex.
pub fn normal_planes(f: &GridMap<Quaternion>) -> Result<GridMap<(Quaternion, Quaternion)>> {
    let (fx, fy) = partials(f);
    fx.zip_with(&fy, |a, b| normal_plane(*a, *b))?
        .try_map(|i, j, n| n.ok_or(Error::NotImmersed { i, j }))
}
