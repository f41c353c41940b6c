//! Connection forms with values in 2×2 quaternionic matrices and the frames
//! they integrate to.
//!
//! A frame `F = (f, f̂)` carries a point pair in its columns; its connection
//! form `Φ = F⁻¹ dF` splits into the diagonal part `k` (stabilizer of the
//! pair) and the off-diagonal part `p`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{circulation, wedge, EdgeForm, Field, GridMap, Plaquettes};
use crate::projective::HPoint;
use crate::qlinalg::{QMat2, EPS_D};
use crate::quat::Quaternion;

/// A discrete `gl(2, ℍ)`-valued 1-form; edge values approximate `∫ F⁻¹ dF`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForm {
    pub phi: EdgeForm<QMat2>,
}

impl ConnectionForm {
    pub fn new(phi: EdgeForm<QMat2>) -> Self {
        Self { phi }
    }

    /// Assembles `[[φ, ψ̂], [ψ, φ̂]]` from its four blocks.
    pub fn from_blocks(
        phi: &EdgeForm<Quaternion>,
        psi_hat: &EdgeForm<Quaternion>,
        psi: &EdgeForm<Quaternion>,
        phi_hat: &EdgeForm<Quaternion>,
    ) -> Result<Self> {
        let top = phi.zip_with(psi_hat, |a, b| (*a, *b))?;
        let bottom = psi.zip_with(phi_hat, |c, d| (*c, *d))?;
        Ok(Self::new(top.zip_with(&bottom, |(a, b), (c, d)| {
            QMat2::new(*a, *b, *c, *d)
        })?))
    }

    /// Off-diagonal connection `[[0, B], [C, 0]]`.
    pub fn off_diagonal(b: &EdgeForm<Quaternion>, c: &EdgeForm<Quaternion>) -> Result<Self> {
        Ok(Self::new(b.zip_with(c, |b, c| QMat2::off_diag(*b, *c))?))
    }

    /// Largest `|Re tr Φ|` per unit length; zero for `sl(2, ℍ)`-valued forms.
    pub fn trace_defect(&self) -> f64 {
        let h = self.phi.domain().h();
        self.phi.map(|m| m.trace().re()).max_magnitude() / h
    }
}

/// Cartan splitting into diagonal (`k`) and off-diagonal (`p`) parts.
pub fn kp_split(phi: &ConnectionForm) -> (ConnectionForm, ConnectionForm) {
    let k = phi.phi.map(|m| QMat2::diag(m.a11, m.a22));
    let p = phi.phi.map(|m| QMat2::off_diag(m.a12, m.a21));
    (ConnectionForm::new(k), ConnectionForm::new(p))
}

/// Largest plaquette norm of `Φp ∧ Φp` per unit area.
pub fn curved_flat_residual(phi: &ConnectionForm) -> f64 {
    let (_, p) = kp_split(phi);
    let w = wedge(&p.phi, &p.phi).expect("same domain");
    w.max_magnitude() / phi.phi.domain().area()
}

/// Block norms of the structure equation `dΦ + Φ ∧ Φ` per unit area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaurerCartanResidual {
    /// Diagonal blocks.
    pub gauss_ricci: f64,
    /// Off-diagonal blocks.
    pub codazzi: f64,
}

/// Plaquette values of `dΦ + Φ ∧ Φ`.
pub fn structure_defect(phi: &ConnectionForm) -> Plaquettes<QMat2> {
    let d = circulation(&phi.phi);
    let w = wedge(&phi.phi, &phi.phi).expect("same domain");
    Plaquettes::from_fn(*phi.phi.domain(), |i, j| d.get(i, j) + w.get(i, j))
}

pub fn maurer_cartan_residual(phi: &ConnectionForm) -> MaurerCartanResidual {
    let m = structure_defect(phi);
    let area = phi.phi.domain().area();
    let (gr, cz) = m
        .values()
        .par_iter()
        .map(|m| {
            (
                (m.a11.norm_sqr() + m.a22.norm_sqr()).sqrt(),
                (m.a12.norm_sqr() + m.a21.norm_sqr()).sqrt(),
            )
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    MaurerCartanResidual {
        gauss_ricci: gr / area,
        codazzi: cz / area,
    }
}

/// Second-order transport across an edge, `I + Φ + Φ²/2`.
pub fn transport(phi: QMat2) -> QMat2 {
    QMat2::IDENTITY + phi + phi * phi * 0.5
}

/// An integrated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub f: GridMap<QMat2>,
    pub base: (usize, usize),
    /// Largest relative mismatch `‖Tx Ty' − Ty Tx'‖` over plaquettes.
    pub holonomy_residual: f64,
}

impl Frame {
    /// `F(i,j)⁻¹` without the conditioning guard of [`QMat2::inv`]: integrated
    /// frames may grow large while remaining invertible, and their
    /// degeneration is checked during integration.
    pub fn inv_at(&self, i: usize, j: usize) -> Result<QMat2> {
        let m = self.f.get(i, j);
        let det = m.study_det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::FrameDegeneration { i, j, det });
        }
        Ok(m.adjugate() * (1.0 / det))
    }

    /// Largest relative deviation of `𝒟(F)` from its value at the base vertex.
    pub fn study_drift(&self) -> f64 {
        let d0 = self.f[self.base].study_det();
        self.f
            .values()
            .par_iter()
            .map(|m| (m.study_det() - d0).abs() / d0)
            .reduce(|| 0.0, f64::max)
    }
}

// Relative to the initial frame: entries may grow along the grid while the
// frame stays well conditioned, so an absolute scale test would misfire.
fn check_invertible(m: QMat2, det0: f64, i: usize, j: usize) -> Result<QMat2> {
    let det = m.study_det();
    if !(det > EPS_D * det0) || !m.is_finite() {
        return Err(Error::FrameDegeneration { i, j, det });
    }
    Ok(m)
}

/// Integrates `dF = F Φ` from `F(base) = f0`, first along the base row and
/// then along every column (columns run in parallel; the result does not
/// depend on the thread count).
pub fn integrate_frame(phi: &ConnectionForm, f0: QMat2, base: (usize, usize)) -> Result<Frame> {
    let d = *phi.phi.domain();
    let (i0, j0) = base;
    assert!(i0 < d.nx && j0 < d.ny, "base vertex outside the grid");
    let det0 = f0.study_det();
    if !(det0 > EPS_D * f0.scale().powi(4)) {
        return Err(Error::SingularMatrix { det: det0 });
    }
    let forward = |m: QMat2, e: QMat2| m * transport(e);
    let backward = |m: QMat2, e: QMat2| m * transport(-e);

    let mut row = vec![f0; d.nx];
    for i in i0 + 1..d.nx {
        row[i] = check_invertible(forward(row[i - 1], phi.phi.x(i - 1, j0)), det0, i, j0)?;
    }
    for i in (0..i0).rev() {
        row[i] = check_invertible(backward(row[i + 1], phi.phi.x(i, j0)), det0, i, j0)?;
    }
    let columns: Vec<Result<Vec<QMat2>>> = (0..d.nx)
        .into_par_iter()
        .map(|i| {
            let mut col = vec![row[i]; d.ny];
            for j in j0 + 1..d.ny {
                col[j] = check_invertible(forward(col[j - 1], phi.phi.y(i, j - 1)), det0, i, j)?;
            }
            for j in (0..j0).rev() {
                col[j] = check_invertible(backward(col[j + 1], phi.phi.y(i, j)), det0, i, j)?;
            }
            Ok(col)
        })
        .collect();
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let f = GridMap::from_fn(d, |i, j, _| columns[i][j]);

    let holonomy_residual = Plaquettes::from_fn(d, |i, j| {
        let a = transport(phi.phi.x(i, j)) * transport(phi.phi.y(i + 1, j));
        let b = transport(phi.phi.y(i, j)) * transport(phi.phi.x(i, j + 1));
        (a - b).magnitude() / a.magnitude().max(1.0)
    })
    .values()
    .iter()
    .fold(0.0, |m: f64, v| m.max(*v));

    Ok(Frame {
        f,
        base,
        holonomy_residual,
    })
}

/// Vertex gauge functions `(λ, λ̂)`, acting by `(f, f̂) ↦ (f λ, f̂ λ̂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePair {
    pub lambda: GridMap<Quaternion>,
    pub lambda_hat: GridMap<Quaternion>,
}

/// Gauge transformation `Φ ↦ G⁻¹ Φ G + G⁻¹ dG` with `G = diag(λ, λ̂)`.
/// `G` is evaluated at edge midpoints (vertex averages), `dG` by differences.
pub fn gauge(phi: &ConnectionForm, g: &GaugePair) -> Result<ConnectionForm> {
    let d = *phi.phi.domain();
    if g.lambda.domain() != &d || g.lambda_hat.domain() != &d {
        return Err(Error::DomainMismatch);
    }
    for k in 0..d.len() {
        let (i, j) = d.coords(k);
        if g.lambda.values()[k].norm() == 0.0 || g.lambda_hat.values()[k].norm() == 0.0 {
            return Err(Error::SingularGauge { i, j });
        }
    }
    let apply = |e: QMat2, p: (usize, usize), q: (usize, usize)| -> Result<QMat2> {
        let (l0, l1) = (g.lambda[p], g.lambda[q]);
        let (m0, m1) = (g.lambda_hat[p], g.lambda_hat[q]);
        let l = (l0 + l1) * 0.5;
        let m = (m0 + m1) * 0.5;
        let li = l
            .inv()
            .map_err(|_| Error::SingularGauge { i: p.0, j: p.1 })?;
        let mi = m
            .inv()
            .map_err(|_| Error::SingularGauge { i: p.0, j: p.1 })?;
        Ok(QMat2::new(
            li * e.a11 * l + li * (l1 - l0),
            li * e.a12 * m,
            mi * e.a21 * l,
            mi * e.a22 * m + mi * (m1 - m0),
        ))
    };
    Ok(ConnectionForm::new(EdgeForm::try_from_fns(
        d,
        |i, j| apply(phi.phi.x(i, j), (i, j), (i + 1, j)),
        |i, j| apply(phi.phi.y(i, j), (i, j), (i, j + 1)),
    )?))
}

/// Spectral deformation `Φk + ρ² Φp`.
pub fn spectral_scale(phi: &ConnectionForm, rho: f64) -> ConnectionForm {
    let r2 = rho * rho;
    ConnectionForm::new(
        phi.phi
            .map(|m| QMat2::new(m.a11, m.a12 * r2, m.a21 * r2, m.a22)),
    )
}

/// The two columns of a frame as points of ℍP¹.
pub fn extract_pair(frame: &Frame) -> Result<(GridMap<HPoint>, GridMap<HPoint>)> {
    let f = frame.f.try_map(|_, _, m| HPoint::new(m.col1()))?;
    let f_hat = frame.f.try_map(|_, _, m| HPoint::new(m.col2()))?;
    Ok((f, f_hat))
}
