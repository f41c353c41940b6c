//! Command-line pipelines over the `curvedflat` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod obj;
pub mod report;

use std::path::Path;

pub use config::PipelineConfig;
pub use error::CliError;
pub use expr::{parse_expr, Expr};

use commands::{dispatch, write_qgrid, Outcome};

/// Runs a configured pipeline, writes its artifacts and returns the process
/// exit status: 0 when every check passes, 1 otherwise.
pub fn run(cfg: &PipelineConfig) -> Result<i32, CliError> {
    let outcome = dispatch(cfg)?;
    if cfg.command == "crossratio" {
        for l in &outcome.lines {
            println!("{l}");
        }
        return Ok(0);
    }
    write_artifacts(cfg, &outcome)?;
    print!("{}", summary(cfg, &outcome));
    Ok(if outcome.checks.iter().all(|c| c.pass) {
        0
    } else {
        1
    })
}

fn summary(cfg: &PipelineConfig, outcome: &Outcome) -> String {
    let mut s = format!("curvedflat {}\n", cfg.command);
    let (corner, size, n) = match &outcome.domain {
        Some(d) => (
            d.z0,
            (d.hx * (d.nx - 1) as f64, d.hy * (d.ny - 1) as f64),
            (d.nx, d.ny),
        ),
        None => (cfg.corner, (cfg.width, cfg.height), (cfg.nx, cfg.ny)),
    };
    s += &format!(
        "domain: corner {} {}, {} x {}, {} x {} vertices\n",
        corner.re, corner.im, size.0, size.1, n.0, n.1
    );
    s += &format!("g = {}\nomega = {}\n", cfg.g, cfg.omega);
    if let Some(m) = &outcome.mesh {
        s += &format!("chart: {}\n", m.chart);
    }
    s += "\n";
    s += &report::table(&outcome.checks);
    for l in &outcome.lines {
        s += l;
        s.push('\n');
    }
    s
}

fn write_artifacts(cfg: &PipelineConfig, outcome: &Outcome) -> Result<(), CliError> {
    let path = |ext: &str| {
        let mut p = cfg.out.clone().into_os_string();
        p.push(ext);
        std::path::PathBuf::from(p)
    };
    if let Some(parent) = cfg.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        if !parent.exists() {
            return Err(CliError::io(
                parent,
                std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "output directory does not exist",
                ),
            ));
        }
    }
    if let Some(m) = &outcome.mesh {
        let header = vec![
            format!("curvedflat {}", cfg.command),
            format!("chart: {}", m.chart),
        ];
        obj::export_obj(&path(".obj"), &header, &m.points, m.nx, m.ny)?;
    }
    let write = |p: &Path, text: String| std::fs::write(p, text).map_err(|e| CliError::io(p, e));
    write(&path(".csv"), report::csv(&outcome.checks))?;
    write(&path(".txt"), summary(cfg, outcome))?;
    for (p, grid) in &outcome.grids {
        write_qgrid(p, grid)?;
    }
    Ok(())
}
