//! First and second fundamental forms of sampled surfaces in conformal
//! curvature-line coordinates, and the classical structure equations they obey.

use num_complex::Complex64;
use rayon::prelude::*;

use super::geometry::normal_plane;
use crate::error::{Error, Result};
use crate::grid::{exterior_d, wedge, EdgeForm, GridMap};
use crate::quat::Quaternion;

/// Where the surface normal comes from.
#[derive(Debug, Clone, Copy)]
pub enum NormalSource<'a> {
    /// Orientation of the tangent plane (`fx × fy` for surfaces in Im ℍ).
    Tangent,
    /// A prescribed unit normal field, e.g. the partner's normal.
    Given(&'a GridMap<Quaternion>),
}

/// Fundamental forms and structure-equation residuals on interior vertices.
///
/// With `e^{2u} = (|fx|² + |fy|²)/2` and `L, N` the diagonal second-form
/// entries along the pencil normal `n_θ = cos θ n1 + sin θ n2`,
/// `H = (L + N)/(2e^{2u})` is the mean curvature and `Ĥ = (N − L)/2` the
/// mean curvature of the Christoffel partner with metric `e^{−2u}|dz|²`.
#[derive(Debug, Clone)]
pub struct GeometryReport {
    pub u: GridMap<f64>,
    pub h: GridMap<f64>,
    pub h_hat: GridMap<f64>,
    pub q1: GridMap<Complex64>,
    pub q2: GridMap<Complex64>,
    /// `η = ½(u_x dy − u_y dx)` on the interior grid.
    pub eta: EdgeForm<f64>,
    /// `max |¼Δu + ¼(H² e^{2u} − Ĥ² e^{−2u})|`.
    pub gauss_residual: f64,
    /// `max |dH ∧ e^u dz − dĤ ∧ e^{−u} dz̄|` per unit area.
    pub codazzi_residual: f64,
    /// `max |M| / e^{2u}` for the mixed second-form entry.
    pub curvature_line_residual: f64,
    /// `max | |fx|² − |fy|² | / e^{2u}`.
    pub conformality: f64,
    /// `max |fx · fy| / e^{2u}`.
    pub orthogonality: f64,
}

fn spread(m: &GridMap<f64>) -> f64 {
    let (lo, hi) = m
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(*v), b.max(*v))
        });
    hi - lo
}

fn mean(m: &GridMap<f64>) -> f64 {
    m.values().iter().sum::<f64>() / m.values().len() as f64
}

impl GeometryReport {
    pub fn h_spread(&self) -> f64 {
        spread(&self.h)
    }

    pub fn h_hat_spread(&self) -> f64 {
        spread(&self.h_hat)
    }

    pub fn mean_h(&self) -> f64 {
        mean(&self.h)
    }

    pub fn mean_h_hat(&self) -> f64 {
        mean(&self.h_hat)
    }
}

struct Local {
    e2u: f64,
    ii: [(f64, f64, f64); 2],
    theta_ii: (f64, f64, f64),
    conformality: f64,
    orthogonality: f64,
}

pub fn geometry_report(
    surface: &GridMap<Quaternion>,
    normal: NormalSource<'_>,
    theta: f64,
) -> Result<GeometryReport> {
    let d = *surface.domain();
    let inner = d.interior()?;
    if let NormalSource::Given(n) = normal {
        if n.domain() != &d {
            return Err(Error::DomainMismatch);
        }
    }
    let f = |i: usize, j: usize| surface.get(i, j);
    let locals = GridMap::try_from_fn(inner, |i, j, _| {
        let (i, j) = (i + 1, j + 1);
        let fx = (f(i + 1, j) - f(i - 1, j)) * (0.5 / d.hx);
        let fy = (f(i, j + 1) - f(i, j - 1)) * (0.5 / d.hy);
        let fxx = (f(i + 1, j) - f(i, j) * 2.0 + f(i - 1, j)) * (1.0 / (d.hx * d.hx));
        let fyy = (f(i, j + 1) - f(i, j) * 2.0 + f(i, j - 1)) * (1.0 / (d.hy * d.hy));
        let fxy = (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1))
            * (0.25 / (d.hx * d.hy));
        let e2u = 0.5 * (fx.norm_sqr() + fy.norm_sqr());
        let (n1, n2) = normal_plane(fx, fy).ok_or(Error::NotImmersed { i, j })?;
        let (n1, n2) = match normal {
            NormalSource::Tangent => (n1, n2),
            NormalSource::Given(g) => {
                let nu = g.get(i, j);
                let t = [fx.normalize()?, {
                    let e1 = fx.normalize()?;
                    (fy - e1 * fy.dot(e1)).normalize()?
                }];
                let first = t.iter().fold(Quaternion::ONE, |v, e| v - *e * v.dot(*e));
                let first = first - nu * first.dot(nu);
                (first.normalize().unwrap_or(n1), nu)
            }
        };
        let second = |n: Quaternion| (fxx.dot(n), fxy.dot(n), fyy.dot(n));
        let nt = n1 * theta.cos() + n2 * theta.sin();
        Ok(Local {
            e2u,
            ii: [second(n1), second(n2)],
            theta_ii: second(nt),
            conformality: (fx.norm_sqr() - fy.norm_sqr()).abs() / e2u,
            orthogonality: fx.dot(fy).abs() / e2u,
        })
    })?;

    let u = locals.map(|l| 0.5 * l.e2u.ln());
    let h = locals.map(|l| (l.theta_ii.0 + l.theta_ii.2) / (2.0 * l.e2u));
    let h_hat = locals.map(|l| 0.5 * (l.theta_ii.2 - l.theta_ii.0));
    let fit = |l: &Local, k: usize| {
        let eu = l.e2u.sqrt();
        let (a, _, c) = l.ii[k];
        (-(a + c) / (4.0 * eu), (a - c) / (4.0 * eu))
    };
    let q1 = locals.map(|l| Complex64::new(fit(l, 0).0, -fit(l, 1).0));
    let q2 = locals.map(|l| Complex64::new(fit(l, 0).1, fit(l, 1).1));
    let max_of = |g: &(dyn Fn(&Local) -> f64 + Sync)| {
        locals.values().par_iter().map(g).reduce(|| 0.0, f64::max)
    };
    let curvature_line_residual = max_of(&|l| l.theta_ii.1.abs().max(l.ii[0].1.abs()) / l.e2u);
    let conformality = max_of(&|l| l.conformality);
    let orthogonality = max_of(&|l| l.orthogonality);

    // Gauss equation on vertices with a full neighbourhood inside the interior grid.
    let (ni, nj) = (inner.nx, inner.ny);
    let gauss_residual = if ni >= 3 && nj >= 3 {
        (0..(ni - 2) * (nj - 2))
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % (ni - 2) + 1, k / (ni - 2) + 1);
                let lap = (u.get(i + 1, j) - 2.0 * u.get(i, j) + u.get(i - 1, j)) / (d.hx * d.hx)
                    + (u.get(i, j + 1) - 2.0 * u.get(i, j) + u.get(i, j - 1)) / (d.hy * d.hy);
                let l = &locals[(i, j)];
                let (hh, hhat) = (h.get(i, j), h_hat.get(i, j));
                (0.25 * lap + 0.25 * (hh * hh * l.e2u - hhat * hhat / l.e2u)).abs()
            })
            .reduce(|| 0.0, f64::max)
    } else {
        0.0
    };

    let codazzi_residual = {
        let dh = exterior_d(&h.map(|v| Complex64::new(*v, 0.0)));
        let dhh = exterior_d(&h_hat.map(|v| Complex64::new(*v, 0.0)));
        let eu = u.map(|v| v.exp());
        let mid = |g: &GridMap<f64>, p: (usize, usize), q: (usize, usize)| 0.5 * (g[p] + g[q]);
        let dz = EdgeForm::from_fns(
            inner,
            |i, j| Complex64::new(mid(&eu, (i, j), (i + 1, j)) * d.hx, 0.0),
            |i, j| Complex64::new(0.0, mid(&eu, (i, j), (i, j + 1)) * d.hy),
        );
        let emu = u.map(|v| (-v).exp());
        let dzb = EdgeForm::from_fns(
            inner,
            |i, j| Complex64::new(mid(&emu, (i, j), (i + 1, j)) * d.hx, 0.0),
            |i, j| Complex64::new(0.0, -mid(&emu, (i, j), (i, j + 1)) * d.hy),
        );
        let a = wedge(&dh, &dz)?;
        let b = wedge(&dhh, &dzb)?;
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
            / d.area()
    };

    let (ux, uy) = {
        let du = |i: usize, j: usize, dir: usize| {
            let (n, h) = if dir == 0 { (ni, d.hx) } else { (nj, d.hy) };
            let idx = if dir == 0 { i } else { j };
            let lo = idx.saturating_sub(1);
            let hi = (idx + 1).min(n - 1);
            let at = |k: usize| if dir == 0 { u.get(k, j) } else { u.get(i, k) };
            (at(hi) - at(lo)) / ((hi - lo) as f64 * h)
        };
        (
            GridMap::from_fn(inner, |i, j, _| du(i, j, 0)),
            GridMap::from_fn(inner, |i, j, _| du(i, j, 1)),
        )
    };
    let eta = EdgeForm::from_fns(
        inner,
        |i, j| -0.25 * (uy.get(i, j) + uy.get(i + 1, j)) * d.hx,
        |i, j| 0.25 * (ux.get(i, j) + ux.get(i, j + 1)) * d.hy,
    );

    Ok(GeometryReport {
        u,
        h,
        h_hat,
        q1,
        q2,
        eta,
        gauss_residual,
        codazzi_residual,
        curvature_line_residual,
        conformality,
        orthogonality,
    })
}
