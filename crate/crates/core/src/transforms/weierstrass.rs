//! Minimal surfaces in Im ℍ from holomorphic data `(g, ω)`.
//!
//! With `a = i + g j` the surface has differential `df̂₀ = ½ a ω̄ j a` and Gauss
//! map `f₀ = a i a⁻¹`. The lower block `−2 a⁻¹ dg j a⁻¹` equals `d f̄₀`, so the
//! pair (Gauss map, surface) is a Christoffel pair.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::ConnectionForm;
use crate::grid::{closedness_residual, integrate_potential, EdgeForm, GridDomain, GridMap};
use crate::quat::Quaternion;

/// Values of `|g|` or `|ω|` above this are treated as poles.
pub const POLE_GUARD: f64 = 1e6;

/// Relative closedness (per unit length) above which data is rejected.
const CLOSEDNESS_TOLERANCE: f64 = 10.0;

/// Holomorphic data sampled on a grid.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub g: GridMap<Complex64>,
    /// Coefficient of `ω = omega·dz`.
    pub omega: GridMap<Complex64>,
    pub pole_mask: GridMap<bool>,
    /// Exact `(g, omega)` at edge midpoints, when the data came from functions.
    pub midpoints: Option<EdgeForm<(Complex64, Complex64)>>,
}

fn is_pole(g: Complex64, w: Complex64) -> bool {
    !(g.norm() <= POLE_GUARD && w.norm() <= POLE_GUARD)
}

impl WeierstrassData {
    /// Wraps vertex samples; the edge forms then use vertex averages.
    pub fn new(g: GridMap<Complex64>, omega: GridMap<Complex64>) -> Result<Self> {
        let pole_mask = g.zip_with(&omega, |g, w| is_pole(*g, *w))?;
        Ok(Self {
            g,
            omega,
            pole_mask,
            midpoints: None,
        })
    }

    /// Samples functions at vertices and edge midpoints. A pole at an edge
    /// midpoint masks both endpoints of the edge.
    pub fn sample<G, W>(domain: GridDomain, g: G, omega: W) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Sync,
        W: Fn(Complex64) -> Complex64 + Sync,
    {
        let gv = GridMap::from_fn(domain, |_, _, z| g(z));
        let wv = GridMap::from_fn(domain, |_, _, z| omega(z));
        let mids = EdgeForm::from_fns(
            domain,
            |i, j| {
                let z = domain.mid_x(i, j);
                (g(z), omega(z))
            },
            |i, j| {
                let z = domain.mid_y(i, j);
                (g(z), omega(z))
            },
        );
        let mut data = Self::new(gv, wv).expect("same domain");
        let mask = GridMap::from_fn(domain, |i, j, _| {
            let hit = |e: Option<(Complex64, Complex64)>| e.is_some_and(|(g, w)| is_pole(g, w));
            data.pole_mask.get(i, j)
                || hit((i + 1 < domain.nx).then(|| mids.x(i, j)))
                || hit((i > 0).then(|| mids.x(i - 1, j)))
                || hit((j + 1 < domain.ny).then(|| mids.y(i, j)))
                || hit((j > 0).then(|| mids.y(i, j - 1)))
        });
        data.pole_mask = mask;
        data.midpoints = Some(mids);
        data
    }

    pub fn domain(&self) -> &GridDomain {
        self.g.domain()
    }

    /// First masked vertex in row-major order.
    pub fn first_pole(&self) -> Option<(usize, usize)> {
        self.pole_mask
            .values()
            .iter()
            .position(|m| *m)
            .map(|k| self.domain().coords(k))
    }

    fn require_pole_free(&self) -> Result<()> {
        match self.first_pole() {
            Some((i, j)) => Err(Error::PoleInDomain { i, j }),
            None => Ok(()),
        }
    }

    /// `(g, ω)` at the midpoint of an x-edge (`dir = 0`) or y-edge (`dir = 1`).
    fn mid(&self, dir: usize, i: usize, j: usize) -> (Complex64, Complex64) {
        match (&self.midpoints, dir) {
            (Some(m), 0) => m.x(i, j),
            (Some(m), _) => m.y(i, j),
            (None, 0) => (
                (self.g.get(i, j) + self.g.get(i + 1, j)) * 0.5,
                (self.omega.get(i, j) + self.omega.get(i + 1, j)) * 0.5,
            ),
            (None, _) => (
                (self.g.get(i, j) + self.g.get(i, j + 1)) * 0.5,
                (self.omega.get(i, j) + self.omega.get(i, j + 1)) * 0.5,
            ),
        }
    }

    /// Integrals of `df̂₀` over the edges: Simpson's rule when midpoint
    /// samples exist, the trapezoidal rule otherwise.
    pub fn surface_differential(&self) -> EdgeForm<Quaternion> {
        let d = *self.domain();
        let dzb = [Complex64::new(d.hx, 0.0), Complex64::new(0.0, -d.hy)];
        let integrand = |g: Complex64, w: Complex64, dir: usize| {
            let a = spinor(g);
            a * Quaternion::from_complex(w.conj() * dzb[dir]) * Quaternion::J * a * 0.5
        };
        let edge = |dir: usize, p: (usize, usize), q: (usize, usize), i: usize, j: usize| {
            let ends =
                integrand(self.g[p], self.omega[p], dir) + integrand(self.g[q], self.omega[q], dir);
            if self.midpoints.is_some() {
                let (gm, wm) = self.mid(dir, i, j);
                (ends + integrand(gm, wm, dir) * 4.0) * (1.0 / 6.0)
            } else {
                ends * 0.5
            }
        };
        EdgeForm::from_fns(
            d,
            |i, j| edge(0, (i, j), (i + 1, j), i, j),
            |i, j| edge(1, (i, j), (i, j + 1), i, j),
        )
    }

    /// The Christoffel-pair connection `[[0, df̂₀], [d f̄₀, 0]]` with both blocks
    /// evaluated by the midpoint rule: `½ a ω̄ j a` and `−2 a⁻¹ Δg j a⁻¹`.
    pub fn pair_connection(&self) -> Result<ConnectionForm> {
        self.require_pole_free()?;
        let d = *self.domain();
        let dzb = [Complex64::new(d.hx, 0.0), Complex64::new(0.0, -d.hy)];
        let blocks =
            |dir: usize, i: usize, j: usize, dg: Complex64| -> Result<(Quaternion, Quaternion)> {
                let (gm, wm) = self.mid(dir, i, j);
                let a = spinor(gm);
                let ai = a.inv()?;
                let upper =
                    a * Quaternion::from_complex(wm.conj() * dzb[dir]) * Quaternion::J * a * 0.5;
                let lower = ai * Quaternion::from_complex(dg) * Quaternion::J * ai * -2.0;
                Ok((upper, lower))
            };
        let form = EdgeForm::try_from_fns(
            d,
            |i, j| blocks(0, i, j, self.g.get(i + 1, j) - self.g.get(i, j)),
            |i, j| blocks(1, i, j, self.g.get(i, j + 1) - self.g.get(i, j)),
        )?;
        Ok(ConnectionForm::new(
            form.map(|(b, c)| crate::qlinalg::QMat2::off_diag(*b, *c)),
        ))
    }

    /// Pointwise Gauss map `a i a⁻¹`.
    pub fn gauss_map(&self) -> GridMap<Quaternion> {
        self.g.map(|g| gauss_point(*g))
    }
}

/// `a = i + g j`.
pub fn spinor(g: Complex64) -> Quaternion {
    Quaternion::I + Quaternion::from_complex(g) * Quaternion::J
}

/// `(i + g j) i (i + g j)⁻¹ = [(1 − |g|²) i + 2 g j] / (1 + |g|²)`.
pub fn gauss_point(g: Complex64) -> Quaternion {
    let n2 = g.norm_sqr();
    let c = 1.0 / (1.0 + n2);
    Quaternion::imaginary((1.0 - n2) * c, 2.0 * g.re * c, 2.0 * g.im * c)
}

/// A minimal surface with its Gauss map.
#[derive(Debug, Clone)]
pub struct MinimalSurface {
    /// The surface `f̂₀`.
    pub surface: GridMap<Quaternion>,
    /// The Gauss map `f₀`, unit imaginary.
    pub gauss_map: GridMap<Quaternion>,
    pub differential: EdgeForm<Quaternion>,
    /// Closedness of the edge differential per unit area.
    pub closedness: f64,
    pub path_residual: f64,
    /// Largest scalar part of the surface (zero for surfaces in Im ℍ).
    pub scalar_part: f64,
}

/// Integrates the Weierstrass differential from the corner vertex.
pub fn minimal_from_weierstrass(data: &WeierstrassData) -> Result<MinimalSurface> {
    data.require_pole_free()?;
    let d = *data.domain();
    let differential = data.surface_differential();
    let closedness = closedness_residual(&differential);
    let size = differential.max_magnitude() / d.h();
    if !(closedness <= CLOSEDNESS_TOLERANCE * d.h() * size.max(1.0)) {
        return Err(Error::NotHolomorphic {
            h: d.h(),
            residual: closedness,
        });
    }
    let pot = integrate_potential(&differential, (0, 0), Quaternion::ZERO);
    let scalar_part = pot.map.map(|q| q.w).max_magnitude();
    Ok(MinimalSurface {
        gauss_map: data.gauss_map(),
        surface: pot.map,
        differential,
        closedness,
        path_residual: pot.path_residual,
        scalar_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_point_matches_conjugation() {
        for g in [
            Complex64::new(0.3, -1.2),
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.5),
        ] {
            let a = spinor(g);
            let direct = a * Quaternion::I * a.inv().unwrap();
            assert!(direct.max_abs_diff(gauss_point(g)) < 1e-15);
        }
    }

    #[test]
    fn constant_gauss_map_gives_plane() {
        let d = GridDomain::unit_square(9).unwrap();
        let data = WeierstrassData::sample(
            d,
            |_| Complex64::new(0.0, 0.0),
            |_| Complex64::new(1.0, 0.0),
        );
        let m = minimal_from_weierstrass(&data).unwrap();
        assert!(m.gauss_map.values().iter().all(|q| *q == Quaternion::I));
        // the surface lies in the plane orthogonal to i
        assert!(m
            .surface
            .values()
            .iter()
            .all(|q| q.x.abs() < 1e-15 && q.w.abs() < 1e-15));
    }

    #[test]
    fn poles_are_masked_and_rejected() {
        let d = GridDomain::unit_square(9).unwrap();
        let data = WeierstrassData::sample(d, |z| z.inv(), |_| Complex64::new(1.0, 0.0));
        assert_eq!(data.first_pole(), Some((4, 4)));
        assert!(matches!(
            minimal_from_weierstrass(&data),
            Err(Error::PoleInDomain { i: 4, j: 4 })
        ));
    }

    #[test]
    fn non_holomorphic_data_rejected() {
        let d = GridDomain::unit_square(33).unwrap();
        let data = WeierstrassData::sample(d, |z| z.conj(), |_| Complex64::new(1.0, 0.0));
        assert!(matches!(
            minimal_from_weierstrass(&data),
            Err(Error::NotHolomorphic { .. })
        ));
    }
}
