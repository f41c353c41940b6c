//! The pipelines behind each subcommand.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use curvedflat::frames::{curved_flat_residual, maurer_cartan_residual};
use curvedflat::grid::christoffel_residual;
use curvedflat::minkowski::envelope_residual;
use curvedflat::projective::cross_ratio_sq;
use curvedflat::transforms::{
    bryant_surface, christoffel_transform, columns, darboux_from_pair, goursat_transform,
    minimal_from_weierstrass, pencil_spheres, similarity_align, Chart, ChristoffelPair,
    WeierstrassData,
};
use curvedflat::{GridDomain, GridMap, HPoint, QMat2, Quaternion};
use num_complex::Complex64;

use crate::config::{parse_quaternion, PipelineConfig};
use crate::error::CliError;
use crate::obj::fmt_g17;
use crate::report::{convergence, value_check, Check};

pub const COMMANDS: &[&str] = &[
    "minimal",
    "christoffel",
    "goursat",
    "darboux",
    "bryant",
    "validate",
    "crossratio",
];

/// A mesh ready for export.
pub struct Mesh {
    /// Names the chart applied to the points.
    pub chart: String,
    pub points: Vec<Option<[f64; 3]>>,
    pub nx: usize,
    pub ny: usize,
}

/// What a command produced.
#[derive(Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    /// Free-form result lines for the summary and standard output.
    pub lines: Vec<String>,
    pub mesh: Option<Mesh>,
    /// Sampled quaternion grids to store next to the mesh.
    pub grids: Vec<(PathBuf, GridMap<Quaternion>)>,
    /// Domain actually evaluated, when it differs from the configured one.
    pub domain: Option<GridDomain>,
}

fn core(command: &'static str) -> impl Fn(curvedflat::Error) -> CliError {
    move |source| CliError::Core { command, source }
}

fn domain(cfg: &PipelineConfig, nx: usize) -> Result<GridDomain, CliError> {
    let ny = ((cfg.ny - 1) * (nx - 1)).div_ceil(cfg.nx - 1) + 1;
    GridDomain::rect(cfg.corner, cfg.width, cfg.height, nx, ny).map_err(core("domain"))
}

fn data(cfg: &PipelineConfig, d: GridDomain) -> WeierstrassData {
    WeierstrassData::sample(d, |z| cfg.g.eval(z), |z| cfg.omega.eval(z))
}

fn imaginary(q: Quaternion) -> Option<[f64; 3]> {
    q.is_finite().then_some([q.x, q.y, q.z])
}

fn affine_mesh(points: &GridMap<HPoint>) -> Mesh {
    let d = points.domain();
    Mesh {
        chart: Chart::Affine.description(),
        points: points
            .values()
            .iter()
            .map(|p| p.to_affine().ok().and_then(imaginary))
            .collect(),
        nx: d.nx,
        ny: d.ny,
    }
}

fn quaternion_mesh(f: &GridMap<Quaternion>) -> Mesh {
    let d = f.domain();
    Mesh {
        chart: "imaginary part: (x, y, z) = Im f".to_string(),
        points: f.values().iter().map(|q| imaginary(*q)).collect(),
        nx: d.nx,
        ny: d.ny,
    }
}

fn with_out(cfg: &PipelineConfig, suffix: &str) -> PathBuf {
    let mut s = cfg.out.clone().into_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn dispatch(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    match cfg.command.as_str() {
        "minimal" => minimal(cfg),
        "christoffel" => christoffel(cfg),
        "goursat" => goursat(cfg),
        "darboux" => darboux(cfg),
        "bryant" => bryant(cfg),
        "validate" => validate(cfg),
        "crossratio" => crossratio(cfg),
        other => Err(CliError::Config(format!("unknown command '{other}'"))),
    }
}

fn minimal(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    let mut closed = Vec::new();
    let mut pair = Vec::new();
    for &n in &cfg.levels {
        let d = domain(cfg, n)?;
        let m = minimal_from_weierstrass(&data(cfg, d)).map_err(core("minimal"))?;
        closed.push((n, d.h(), m.closedness));
        let r = christoffel_residual(&m.gauss_map, &m.surface).map_err(core("minimal"))?;
        pair.push((n, d.h(), r));
    }
    let d = domain(cfg, cfg.nx)?;
    let m = minimal_from_weierstrass(&data(cfg, d)).map_err(core("minimal"))?;
    let mut out = Outcome::default();
    out.checks.extend(convergence("closedness", &closed, 1.8));
    out.checks
        .extend(convergence("christoffel_residual", &pair, 1.8));
    out.lines
        .push(format!("largest scalar part: {:.3e}", m.scalar_part));
    out.lines
        .push(format!("path residual: {:.3e}", m.path_residual));
    out.mesh = Some(quaternion_mesh(&m.surface));
    out.grids.push((with_out(cfg, ".qgrid"), m.surface));
    out.grids.push((with_out(cfg, "_gauss.qgrid"), m.gauss_map));
    Ok(out)
}

fn christoffel(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    let mut res = Vec::new();
    let mut dist = Vec::new();
    let run = |n: usize| -> Result<_, CliError> {
        let d = domain(cfg, n)?;
        let m = minimal_from_weierstrass(&data(cfg, d)).map_err(core("christoffel"))?;
        let t = christoffel_transform(&m.gauss_map).map_err(core("christoffel"))?;
        let al = similarity_align(&t.dual, &m.surface).map_err(core("christoffel"))?;
        Ok((d.h(), t, al))
    };
    let mut last = None;
    for &n in &cfg.levels {
        let (h, t, al) = run(n)?;
        res.push((n, h, t.residual));
        dist.push((n, h, al.sup_distance));
        if n == cfg.nx {
            last = Some((t, al));
        }
    }
    let (t, al) = match last {
        Some(v) => v,
        None => run(cfg.nx).map(|(_, t, al)| (t, al))?,
    };
    let mut out = Outcome::default();
    out.checks
        .extend(convergence("christoffel_residual", &res, 1.8));
    out.checks
        .extend(convergence("aligned_distance", &dist, 1.8));
    out.lines.push(format!(
        "conformality {:.3e}, orthogonality {:.3e}",
        t.isothermic.conformality, t.isothermic.orthogonality
    ));
    out.lines.push(format!("alignment scale {:.6}", al.scale));
    let aligned = t.dual.map(|q| al.apply(*q));
    out.mesh = Some(quaternion_mesh(&aligned));
    out.grids
        .push((with_out(cfg, ".qgrid"), t.dual.map(|q| *q * cfg.scale)));
    Ok(out)
}

fn goursat(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    let (mut c1, mut c2, mut cr) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &cfg.levels {
        let d = domain(cfg, n)?;
        let m = minimal_from_weierstrass(&data(cfg, d)).map_err(core("goursat"))?;
        let g = goursat_transform(&m.gauss_map, &m.surface, cfg.a).map_err(core("goursat"))?;
        c1.push((n, d.h(), g.closedness.0));
        c2.push((n, d.h(), g.closedness.1));
        cr.push((n, d.h(), g.christoffel_residual));
    }
    let d = domain(cfg, cfg.nx)?;
    let m = minimal_from_weierstrass(&data(cfg, d)).map_err(core("goursat"))?;
    let g = goursat_transform(&m.gauss_map, &m.surface, cfg.a).map_err(core("goursat"))?;
    let mut out = Outcome::default();
    out.checks.extend(convergence("closedness_omega", &c1, 1.8));
    out.checks
        .extend(convergence("closedness_omega_hat", &c2, 1.8));
    out.checks
        .extend(convergence("christoffel_residual", &cr, 1.8));
    out.mesh = Some(quaternion_mesh(&g.f_hat0));
    out.grids.push((with_out(cfg, ".qgrid"), g.f0));
    out.grids.push((with_out(cfg, "_hat.qgrid"), g.f_hat0));
    Ok(out)
}

fn darboux(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    let names = [
        "curved_flat",
        "maurer_cartan_gauss_ricci",
        "maurer_cartan_codazzi",
        "holonomy",
        "envelope_f_theta",
        "envelope_f_hat_theta",
    ];
    let mut rows: Vec<Vec<(usize, f64, f64)>> = vec![Vec::new(); names.len()];
    let run = |n: usize| -> Result<_, CliError> {
        let d = domain(cfg, n)?;
        let pair = ChristoffelPair::from_weierstrass(&data(cfg, d)).map_err(core("darboux"))?;
        let dp = darboux_from_pair(&pair, cfg.rho, QMat2::IDENTITY).map_err(core("darboux"))?;
        Ok((d, pair, dp))
    };
    let mut main = None;
    for &n in &cfg.levels {
        let (d, pair, dp) = run(n)?;
        let s = pencil_spheres(&pair, &dp.frame, cfg.theta).map_err(core("darboux"))?;
        let (c1, c2) = columns(&dp.frame);
        let e1 = envelope_residual(&c1, &s).map_err(core("darboux"))?;
        let e2 = envelope_residual(&c2, &s).map_err(core("darboux"))?;
        let mc = maurer_cartan_residual(&dp.connection);
        let values = [
            curved_flat_residual(&dp.connection),
            mc.gauss_ricci,
            mc.codazzi,
            dp.frame.holonomy_residual,
            e1.tangency.max(e1.incidence),
            e2.tangency.max(e2.incidence),
        ];
        for (r, v) in rows.iter_mut().zip(values) {
            r.push((n, d.h(), v));
        }
        if n == cfg.nx {
            main = Some(dp);
        }
    }
    let dp = match main {
        Some(dp) => dp,
        None => run(cfg.nx)?.2,
    };
    let mut out = Outcome::default();
    for (k, (name, r)) in names.iter().zip(&rows).enumerate() {
        let min_order = if k >= 4 { 0.9 } else { 1.8 };
        out.checks.extend(convergence(name, r, min_order));
    }
    let d = dp.frame.f.domain();
    out.checks.push(value_check(
        "conformal_product",
        d.nx,
        d.h(),
        dp.report.conformal_product,
        1e-2,
    ));
    out.lines
        .push(format!("rho = {}, theta = {}", cfg.rho, cfg.theta));
    out.lines.push(format!(
        "study determinant drift {:.3e}",
        dp.report.study_drift
    ));
    out.lines.push(format!(
        "mixed second form {:.3e}",
        dp.report.mixed_second_form
    ));
    out.mesh = Some(affine_mesh(&dp.f_hat));
    Ok(out)
}

fn bryant(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    let mut mc = Vec::new();
    let mut gauss = Vec::new();
    for &n in &cfg.levels {
        let d = domain(cfg, n)?;
        let b = bryant_surface(&data(cfg, d), QMat2::IDENTITY).map_err(core("bryant"))?;
        mc.push((n, d.h(), b.report.mean_curvature_deviation));
        gauss.push((n, d.h(), b.report.gauss_residual));
    }
    let d = domain(cfg, cfg.nx)?;
    let b = bryant_surface(&data(cfg, d), QMat2::IDENTITY).map_err(core("bryant"))?;
    let r = b.report;
    let mut out = Outcome::default();
    out.checks
        .extend(convergence("mean_curvature_deviation", &mc, 1.8));
    out.checks
        .extend(convergence("gauss_equation", &gauss, 1.8));
    out.checks.push(value_check(
        "mean_curvature",
        d.nx,
        d.h(),
        r.mean_curvature_deviation,
        5e-3,
    ));
    out.checks.push(value_check(
        "gauss_map_at_infinity",
        d.nx,
        d.h(),
        r.boundary_defect,
        1e-8,
    ));
    out.checks.push(value_check(
        "space_form_constraint",
        d.nx,
        d.h(),
        r.s1_defect,
        1e-10,
    ));
    let hs = b.mean_curvature.values();
    let mean = hs.iter().sum::<f64>() / hs.len() as f64;
    out.lines.push(format!(
        "H = {mean:.3} ± {:.1e}",
        r.mean_curvature_deviation
    ));
    out.lines.push(format!("kappa = {:.6}", r.kappa));
    out.lines.push(format!(
        "constant vector drift {:.3e}",
        r.constant_vector_drift
    ));
    let chart = b.space_form.chart();
    out.mesh = Some(Mesh {
        chart: chart.description(),
        points: b
            .projected
            .values()
            .iter()
            .map(|y| chart.apply(*y))
            .collect(),
        nx: d.nx,
        ny: d.ny,
    });
    Ok(out)
}

fn validate(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    let pairs: Vec<(GridMap<Quaternion>, GridMap<Quaternion>)> = match (&cfg.surface, &cfg.partner)
    {
        (Some(s), Some(p)) => {
            let (f, g) = (read_qgrid(s)?, read_qgrid(p)?);
            let coarse = f.coarsen().zip(g.coarsen()).ok_or_else(|| {
                CliError::Config("stored grids cannot be coarsened (need odd sizes)".into())
            })?;
            vec![coarse, (f, g)]
        }
        (None, None) => cfg
            .levels
            .iter()
            .map(|&n| {
                let m = minimal_from_weierstrass(&data(cfg, domain(cfg, n)?))
                    .map_err(core("validate"))?;
                Ok((m.gauss_map, m.surface))
            })
            .collect::<Result<_, CliError>>()?,
        _ => {
            return Err(CliError::Config(
                "validate needs both surface and partner".into(),
            ))
        }
    };
    let samples = pairs
        .iter()
        .map(|(f, g)| {
            let d = f.domain();
            Ok((
                d.nx,
                d.h(),
                christoffel_residual(f, g).map_err(core("validate"))?,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut out = Outcome::default();
    if cfg.surface.is_some() {
        out.domain = pairs.last().map(|(f, _)| *f.domain());
    }
    out.checks
        .extend(convergence("christoffel_residual", &samples, 1.8));
    if let [.., (_, _, a), (_, _, b)] = samples[..] {
        out.lines.push(format!("convergence factor {:.4}", a / b));
    }
    Ok(out)
}

fn crossratio(cfg: &PipelineConfig) -> Result<Outcome, CliError> {
    if cfg.positional.len() != 4 {
        return Err(CliError::Config("crossratio takes four points".into()));
    }
    let pts = cfg
        .positional
        .iter()
        .map(|s| match s.trim() {
            "inf" | "infinity" => Ok(HPoint::infinity()),
            s => parse_quaternion(s).map(HPoint::from_affine),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let v = cross_ratio_sq(pts[0], pts[1], pts[2], pts[3]).map_err(core("crossratio"))?;
    Ok(Outcome {
        lines: vec![format!("{v:.15}")],
        ..Outcome::default()
    })
}

/// Writes a quaternion grid: a domain line, then one `w x y z` line per vertex.
pub fn write_qgrid(path: &Path, f: &GridMap<Quaternion>) -> Result<(), CliError> {
    let d = f.domain();
    let mut s = format!(
        "domain {} {} {} {} {} {}\n",
        fmt_g17(d.z0.re),
        fmt_g17(d.z0.im),
        fmt_g17(d.hx),
        fmt_g17(d.hy),
        d.nx,
        d.ny
    );
    for q in f.values() {
        writeln!(
            s,
            "{} {} {} {}",
            fmt_g17(q.w),
            fmt_g17(q.x),
            fmt_g17(q.y),
            fmt_g17(q.z)
        )
        .unwrap();
    }
    std::fs::write(path, s).map_err(|e| CliError::io(path, e))
}

pub fn read_qgrid(path: &Path) -> Result<GridMap<Quaternion>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |m: &str| CliError::Config(format!("{}: {m}", path.display()));
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
    if head.len() != 7 || head[0] != "domain" {
        return Err(bad("missing domain line"));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad("malformed number"));
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad("malformed size"));
    let d = GridDomain::new(
        Complex64::new(num(head[1])?, num(head[2])?),
        num(head[3])?,
        num(head[4])?,
        int(head[5])?,
        int(head[6])?,
    )
    .map_err(core("validate"))?;
    let values = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v = l
                .split_whitespace()
                .map(num)
                .collect::<Result<Vec<_>, _>>()?;
            match v[..] {
                [w, x, y, z] => Ok(Quaternion::new(w, x, y, z)),
                _ => Err(bad("expected four numbers per vertex")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    GridMap::from_vec(d, values).map_err(|_| bad("vertex count does not match the domain"))
}
