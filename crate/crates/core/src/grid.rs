//! Discrete calculus on rectangular parameter grids.
//!
//! Vertex `(i, j)` sits at `z0 + i·hx + j·i·hy`. Values are stored row by row
//! (index `j·nx + i`). One-forms live on edges: `ex(i, j)` on the edge from
//! `(i, j)` to `(i+1, j)`, `ey(i, j)` on the edge from `(i, j)` to `(i, j+1)`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::minkowski::HermForm;
use crate::qlinalg::{QMat2, QVec2};
use crate::quat::Quaternion;

/// Values that can be sampled on a grid: a real vector space with a norm.
pub trait Field:
    Copy
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

/// Fields with an associative (possibly noncommutative) product.
pub trait Algebra: Field + Mul<Output = Self> {}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for Quaternion {
    fn zero() -> Self {
        Quaternion::ZERO
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for QVec2 {
    fn zero() -> Self {
        QVec2::default()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for QMat2 {
    fn zero() -> Self {
        QMat2::ZERO
    }
    fn magnitude(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }
}

impl Field for HermForm {
    fn zero() -> Self {
        HermForm::ZERO
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Algebra for f64 {}
impl Algebra for Complex64 {}
impl Algebra for Quaternion {}
impl Algebra for QMat2 {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDomain {
    pub z0: Complex64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridDomain {
    pub fn new(z0: Complex64, hx: f64, hy: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::GridTooSmall { nx, ny, min: 2 });
        }
        assert!(hx > 0.0 && hy > 0.0, "grid steps must be positive");
        Ok(Self { z0, hx, hy, nx, ny })
    }

    /// The rectangle with lower-left corner `corner` and the given extent,
    /// sampled with `nx × ny` vertices.
    pub fn rect(corner: Complex64, width: f64, height: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::GridTooSmall { nx, ny, min: 2 });
        }
        Self::new(
            corner,
            width / (nx - 1) as f64,
            height / (ny - 1) as f64,
            nx,
            ny,
        )
    }

    /// `[-1, 1]²` with `n × n` vertices.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::rect(Complex64::new(-1.0, -1.0), 2.0, 2.0, n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    pub fn vertex(&self, i: usize, j: usize) -> Complex64 {
        self.z0 + Complex64::new(i as f64 * self.hx, j as f64 * self.hy)
    }

    /// Midpoint of the x-edge starting at `(i, j)`.
    pub fn mid_x(&self, i: usize, j: usize) -> Complex64 {
        self.vertex(i, j) + 0.5 * self.hx
    }

    /// Midpoint of the y-edge starting at `(i, j)`.
    pub fn mid_y(&self, i: usize, j: usize) -> Complex64 {
        self.vertex(i, j) + Complex64::new(0.0, 0.5 * self.hy)
    }

    pub fn area(&self) -> f64 {
        self.hx * self.hy
    }

    /// Larger of the two steps.
    pub fn h(&self) -> f64 {
        self.hx.max(self.hy)
    }

    /// Domain of the vertices with a full 3×3 neighbourhood.
    pub fn interior(&self) -> Result<Self> {
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::GridTooSmall {
                nx: self.nx,
                ny: self.ny,
                min: 3,
            });
        }
        Self::new(
            self.vertex(1, 1),
            self.hx,
            self.hy,
            self.nx - 2,
            self.ny - 2,
        )
    }

    /// Every other vertex; requires odd vertex counts.
    pub fn coarsen(&self) -> Option<Self> {
        if self.nx.is_multiple_of(2) || self.ny.is_multiple_of(2) || self.nx < 3 || self.ny < 3 {
            return None;
        }
        Some(Self {
            z0: self.z0,
            hx: 2.0 * self.hx,
            hy: 2.0 * self.hy,
            nx: self.nx.div_ceil(2),
            ny: self.ny.div_ceil(2),
        })
    }

    /// Halved steps over the same rectangle.
    pub fn refine(&self) -> Self {
        Self {
            z0: self.z0,
            hx: 0.5 * self.hx,
            hy: 0.5 * self.hy,
            nx: 2 * self.nx - 1,
            ny: 2 * self.ny - 1,
        }
    }
}

fn check_same(a: &GridDomain, b: &GridDomain) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DomainMismatch)
    }
}

/// Values sampled at the vertices of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap<T> {
    domain: GridDomain,
    values: Vec<T>,
}

impl<T: Send + Sync> GridMap<T> {
    pub fn from_vec(domain: GridDomain, values: Vec<T>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DomainMismatch);
        }
        Ok(Self { domain, values })
    }

    /// Samples `f(i, j, z)` at every vertex.
    pub fn from_fn<F>(domain: GridDomain, f: F) -> Self
    where
        F: Fn(usize, usize, Complex64) -> T + Sync,
    {
        let values = (0..domain.len())
            .into_par_iter()
            .map(|k| {
                let (i, j) = domain.coords(k);
                f(i, j, domain.vertex(i, j))
            })
            .collect();
        Self { domain, values }
    }

    /// Fallible sampling; the first error in row-major order is returned.
    pub fn try_from_fn<F>(domain: GridDomain, f: F) -> Result<Self>
    where
        F: Fn(usize, usize, Complex64) -> Result<T> + Sync,
    {
        let values: Vec<Result<T>> = (0..domain.len())
            .into_par_iter()
            .map(|k| {
                let (i, j) = domain.coords(k);
                f(i, j, domain.vertex(i, j))
            })
            .collect();
        let values = values.into_iter().collect::<Result<Vec<T>>>()?;
        Ok(Self { domain, values })
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map<U: Send + Sync, F: Fn(&T) -> U + Sync>(&self, f: F) -> GridMap<U> {
        GridMap {
            domain: self.domain,
            values: self.values.par_iter().map(&f).collect(),
        }
    }

    pub fn try_map<U: Send + Sync, F: Fn(usize, usize, &T) -> Result<U> + Sync>(
        &self,
        f: F,
    ) -> Result<GridMap<U>> {
        let d = self.domain;
        GridMap::try_from_fn(d, |i, j, _| f(i, j, &self.values[d.index(i, j)]))
    }

    pub fn zip_with<U: Send + Sync, V: Send + Sync, F: Fn(&T, &U) -> V + Sync>(
        &self,
        other: &GridMap<U>,
        f: F,
    ) -> Result<GridMap<V>> {
        check_same(&self.domain, &other.domain)?;
        Ok(GridMap {
            domain: self.domain,
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }
}

impl<T: Copy + Send + Sync> GridMap<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[self.domain.index(i, j)]
    }

    /// Every other vertex of an odd-sized grid.
    pub fn coarsen(&self) -> Option<GridMap<T>> {
        let d = self.domain.coarsen()?;
        Some(GridMap::from_fn(d, |i, j, _| self.get(2 * i, 2 * j)))
    }

    /// Restriction to [`GridDomain::interior`].
    pub fn interior(&self) -> Result<GridMap<T>> {
        let d = self.domain.interior()?;
        Ok(GridMap::from_fn(d, |i, j, _| self.get(i + 1, j + 1)))
    }
}

impl<T: Field> GridMap<T> {
    pub fn max_magnitude(&self) -> f64 {
        self.values
            .par_iter()
            .map(|v| v.magnitude())
            .reduce(|| 0.0, f64::max)
    }

    /// Largest pointwise distance to `other`.
    pub fn max_distance(&self, other: &GridMap<T>) -> Result<f64> {
        check_same(&self.domain, &other.domain)?;
        Ok(self
            .values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(a, b)| (*a - *b).magnitude())
            .reduce(|| 0.0, f64::max))
    }

    pub fn mean(&self) -> T {
        let n = self.values.len() as f64;
        self.values.iter().fold(T::zero(), |a, b| a + *b) * (1.0 / n)
    }
}

impl<T> Index<(usize, usize)> for GridMap<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.values[j * self.domain.nx + i]
    }
}

/// A discrete 1-form: one value per edge, standing for the integral over it.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeForm<T> {
    domain: GridDomain,
    ex: Vec<T>,
    ey: Vec<T>,
}

fn edge_values<T: Send, FX, FY>(domain: GridDomain, fx: FX, fy: FY) -> (Vec<T>, Vec<T>)
where
    FX: Fn(usize, usize) -> T + Sync,
    FY: Fn(usize, usize) -> T + Sync,
{
    let nxm = domain.nx - 1;
    let ex = (0..nxm * domain.ny)
        .into_par_iter()
        .map(|k| fx(k % nxm, k / nxm))
        .collect();
    let ey = (0..domain.nx * (domain.ny - 1))
        .into_par_iter()
        .map(|k| fy(k % domain.nx, k / domain.nx))
        .collect();
    (ex, ey)
}

impl<T: Copy + Send + Sync> EdgeForm<T> {
    /// Builds a form from edge functions `fx(i, j)` (for `i < nx − 1`) and
    /// `fy(i, j)` (for `j < ny − 1`).
    pub fn from_fns<FX, FY>(domain: GridDomain, fx: FX, fy: FY) -> Self
    where
        FX: Fn(usize, usize) -> T + Sync,
        FY: Fn(usize, usize) -> T + Sync,
    {
        let (ex, ey) = edge_values(domain, fx, fy);
        Self { domain, ex, ey }
    }

    /// Fallible variant of [`EdgeForm::from_fns`]; x-edges are checked first.
    pub fn try_from_fns<FX, FY>(domain: GridDomain, fx: FX, fy: FY) -> Result<Self>
    where
        FX: Fn(usize, usize) -> Result<T> + Sync,
        FY: Fn(usize, usize) -> Result<T> + Sync,
    {
        let (ex, ey) = edge_values(domain, fx, fy);
        Ok(Self {
            domain,
            ex: ex.into_iter().collect::<Result<Vec<T>>>()?,
            ey: ey.into_iter().collect::<Result<Vec<T>>>()?,
        })
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn x(&self, i: usize, j: usize) -> T {
        self.ex[j * (self.domain.nx - 1) + i]
    }

    pub fn y(&self, i: usize, j: usize) -> T {
        self.ey[j * self.domain.nx + i]
    }

    pub fn x_values(&self) -> &[T] {
        &self.ex
    }

    pub fn y_values(&self) -> &[T] {
        &self.ey
    }

    pub fn map<U: Copy + Send + Sync, F: Fn(&T) -> U + Sync>(&self, f: F) -> EdgeForm<U> {
        EdgeForm {
            domain: self.domain,
            ex: self.ex.par_iter().map(&f).collect(),
            ey: self.ey.par_iter().map(&f).collect(),
        }
    }

    pub fn zip_with<U, V, F>(&self, other: &EdgeForm<U>, f: F) -> Result<EdgeForm<V>>
    where
        U: Copy + Send + Sync,
        V: Copy + Send + Sync,
        F: Fn(&T, &U) -> V + Sync,
    {
        check_same(&self.domain, &other.domain)?;
        let zip = |a: &[T], b: &[U]| {
            a.par_iter()
                .zip(b.par_iter())
                .map(|(p, q)| f(p, q))
                .collect()
        };
        Ok(EdgeForm {
            domain: self.domain,
            ex: zip(&self.ex, &other.ex),
            ey: zip(&self.ey, &other.ey),
        })
    }
}

impl<T: Field> EdgeForm<T> {
    pub fn max_magnitude(&self) -> f64 {
        self.ex
            .par_iter()
            .chain(self.ey.par_iter())
            .map(|v| v.magnitude())
            .reduce(|| 0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| *v * c)
    }
}

/// One value per plaquette `(i, j)`, the cell with lower-left vertex `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plaquettes<T> {
    domain: GridDomain,
    values: Vec<T>,
}

impl<T: Copy + Send + Sync> Plaquettes<T> {
    pub fn from_fn<F: Fn(usize, usize) -> T + Sync>(domain: GridDomain, f: F) -> Self {
        let nxm = domain.nx - 1;
        let values = (0..nxm * (domain.ny - 1))
            .into_par_iter()
            .map(|k| f(k % nxm, k / nxm))
            .collect();
        Self { domain, values }
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * (self.domain.nx - 1) + i]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map<U: Copy + Send + Sync, F: Fn(&T) -> U + Sync>(&self, f: F) -> Plaquettes<U> {
        Plaquettes {
            domain: self.domain,
            values: self.values.par_iter().map(&f).collect(),
        }
    }
}

impl<T: Field> Plaquettes<T> {
    pub fn max_magnitude(&self) -> f64 {
        self.values
            .par_iter()
            .map(|v| v.magnitude())
            .reduce(|| 0.0, f64::max)
    }
}

/// Edge differences of a vertex map.
pub fn exterior_d<T: Field>(f: &GridMap<T>) -> EdgeForm<T> {
    EdgeForm::from_fns(
        f.domain,
        |i, j| f.get(i + 1, j) - f.get(i, j),
        |i, j| f.get(i, j + 1) - f.get(i, j),
    )
}

/// Plaquette values of the discrete wedge product, products kept in the
/// written order:
/// `½[αx(i,j) βy(i+1,j) + αx(i,j+1) βy(i,j)] − ½[αy(i,j) βx(i,j+1) + αy(i+1,j) βx(i,j)]`.
pub fn wedge<T: Algebra>(alpha: &EdgeForm<T>, beta: &EdgeForm<T>) -> Result<Plaquettes<T>> {
    check_same(&alpha.domain, &beta.domain)?;
    Ok(Plaquettes::from_fn(alpha.domain, |i, j| {
        (alpha.x(i, j) * beta.y(i + 1, j) + alpha.x(i, j + 1) * beta.y(i, j)
            - alpha.y(i, j) * beta.x(i, j + 1)
            - alpha.y(i + 1, j) * beta.x(i, j))
            * 0.5
    }))
}

/// Discrete exterior derivative of a 1-form: the circulation around each plaquette.
pub fn circulation<T: Field>(omega: &EdgeForm<T>) -> Plaquettes<T> {
    Plaquettes::from_fn(omega.domain, |i, j| {
        omega.x(i, j) + omega.y(i + 1, j) - omega.x(i, j + 1) - omega.y(i, j)
    })
}

/// Largest plaquette circulation per unit area.
pub fn closedness_residual<T: Field>(omega: &EdgeForm<T>) -> f64 {
    circulation(omega).max_magnitude() / omega.domain.area()
}

/// A potential of a 1-form and the discrepancy between two integration paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    pub map: GridMap<T>,
    /// Largest difference between row-then-column and column-then-row integration.
    pub path_residual: f64,
}

fn integrate_rows_first<T: Field>(omega: &EdgeForm<T>, base: (usize, usize), value0: T) -> Vec<T> {
    let d = omega.domain;
    let (i0, j0) = base;
    let mut row = vec![value0; d.nx];
    for i in i0 + 1..d.nx {
        row[i] = row[i - 1] + omega.x(i - 1, j0);
    }
    for i in (0..i0).rev() {
        row[i] = row[i + 1] - omega.x(i, j0);
    }
    let columns: Vec<Vec<T>> = (0..d.nx)
        .into_par_iter()
        .map(|i| {
            let mut col = vec![row[i]; d.ny];
            for j in j0 + 1..d.ny {
                col[j] = col[j - 1] + omega.y(i, j - 1);
            }
            for j in (0..j0).rev() {
                col[j] = col[j + 1] - omega.y(i, j);
            }
            col
        })
        .collect();
    (0..d.len())
        .map(|k| {
            let (i, j) = d.coords(k);
            columns[i][j]
        })
        .collect()
}

fn integrate_columns_first<T: Field>(
    omega: &EdgeForm<T>,
    base: (usize, usize),
    value0: T,
) -> Vec<T> {
    let d = omega.domain;
    let (i0, j0) = base;
    let mut col = vec![value0; d.ny];
    for j in j0 + 1..d.ny {
        col[j] = col[j - 1] + omega.y(i0, j - 1);
    }
    for j in (0..j0).rev() {
        col[j] = col[j + 1] - omega.y(i0, j);
    }
    let mut out = vec![value0; d.len()];
    for j in 0..d.ny {
        let k0 = d.index(i0, j);
        out[k0] = col[j];
        for i in i0 + 1..d.nx {
            out[d.index(i, j)] = out[d.index(i - 1, j)] + omega.x(i - 1, j);
        }
        for i in (0..i0).rev() {
            out[d.index(i, j)] = out[d.index(i + 1, j)] - omega.x(i, j);
        }
    }
    out
}

/// Integrates `omega` from `base` (value `value0`) along the base row, then up
/// and down every column.
pub fn integrate_potential<T: Field>(
    omega: &EdgeForm<T>,
    base: (usize, usize),
    value0: T,
) -> Potential<T> {
    let d = omega.domain;
    assert!(
        base.0 < d.nx && base.1 < d.ny,
        "base vertex outside the grid"
    );
    let a = integrate_rows_first(omega, base, value0);
    let b = integrate_columns_first(omega, base, value0);
    let path_residual = a
        .par_iter()
        .zip(b.par_iter())
        .map(|(p, q)| (*p - *q).magnitude())
        .reduce(|| 0.0, f64::max);
    Potential {
        map: GridMap {
            domain: d,
            values: a,
        },
        path_residual,
    }
}

/// Christoffel-pair defect `|d f̄ ∧ d f̂| + |d f̂ ∧ d f̄|` per plaquette, divided
/// by the largest edge lengths of both differentials around that plaquette.
/// Symmetric in its arguments.
pub fn christoffel_residual(f: &GridMap<Quaternion>, f_hat: &GridMap<Quaternion>) -> Result<f64> {
    check_same(&f.domain, &f_hat.domain)?;
    christoffel_residual_forms(&exterior_d(f), &exterior_d(f_hat))
}

fn local_scale<T: Field>(w: &EdgeForm<T>, i: usize, j: usize) -> f64 {
    w.x(i, j)
        .magnitude()
        .max(w.x(i, j + 1).magnitude())
        .max(w.y(i, j).magnitude())
        .max(w.y(i + 1, j).magnitude())
}

/// [`christoffel_residual`] for given differentials `df`, `df̂`.
pub fn christoffel_residual_forms(
    df: &EdgeForm<Quaternion>,
    dfh: &EdgeForm<Quaternion>,
) -> Result<f64> {
    check_same(&df.domain, &dfh.domain)?;
    let dfb = df.map(|q| q.conj());
    let dfhb = dfh.map(|q| q.conj());
    let w1 = wedge(&dfb, dfh)?;
    let w2 = wedge(dfh, &dfb)?;
    // The reversed orders give the conjugate defects; including them makes
    // the measure exactly symmetric under swapping the two maps.
    let w3 = wedge(&dfhb, df)?;
    let w4 = wedge(df, &dfhb)?;
    let nxm = df.domain.nx - 1;
    Ok((0..w1.values.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nxm, k / nxm);
            let scale = local_scale(df, i, j) * local_scale(dfh, i, j);
            if scale == 0.0 {
                return 0.0;
            }
            let x = w1.values[k].norm() + w2.values[k].norm();
            let y = w3.values[k].norm() + w4.values[k].norm();
            x.max(y) / scale
        })
        .reduce(|| 0.0, f64::max))
}
