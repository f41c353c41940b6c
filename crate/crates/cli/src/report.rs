//! Residual checks and their CSV and text renderings.

use std::fmt::Write as _;

use crate::obj::fmt_g17;

/// Residuals at or below this level count as exact; order estimates between
/// rounding-level values are meaningless.
pub const ROUNDING_FLOOR: f64 = 1e-12;

pub const CSV_HEADER: &str = "check,level,h,residual,order_estimate,pass";

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Vertices per side of the grid the residual was measured on.
    pub level: usize,
    pub h: f64,
    pub residual: f64,
    pub order: Option<f64>,
    pub pass: bool,
}

/// Residual below a fixed tolerance.
pub fn value_check(name: &str, level: usize, h: f64, residual: f64, tol: f64) -> Check {
    Check {
        name: name.to_string(),
        level,
        h,
        residual,
        order: None,
        pass: residual < tol,
    }
}

/// One row per level; rows after the first carry the observed order against
/// the previous level and pass when it reaches `min_order`.
pub fn convergence(name: &str, samples: &[(usize, f64, f64)], min_order: f64) -> Vec<Check> {
    samples
        .iter()
        .enumerate()
        .map(|(k, &(level, h, residual))| {
            let order = (k > 0).then(|| {
                let (_, h0, r0) = samples[k - 1];
                (r0 / residual).ln() / (h0 / h).ln()
            });
            let pass = residual <= ROUNDING_FLOOR
                || order.map_or(residual.is_finite(), |p| p >= min_order);
            Check {
                name: name.to_string(),
                level,
                h,
                residual,
                order,
                pass,
            }
        })
        .collect()
}

pub fn csv(checks: &[Check]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for c in checks {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            c.name,
            c.level,
            fmt_g17(c.h),
            fmt_g17(c.residual),
            c.order.map(fmt_g17).unwrap_or_default(),
            c.pass
        )
        .unwrap();
    }
    s
}

pub fn table(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let order = c
            .order
            .map(|p| format!("{p:6.2}"))
            .unwrap_or_else(|| "     -".into());
        writeln!(
            s,
            "{:<28} n={:<4} h={:.4e}  residual={:.4e}  order={}  {}",
            c.name,
            c.level,
            c.h,
            c.residual,
            order,
            if c.pass { "ok" } else { "FAIL" }
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_sequence() {
        let rows = convergence("r", &[(33, 0.0625, 4e-3), (65, 0.03125, 1e-3)], 1.8);
        assert_eq!(rows[0].order, None);
        assert!((rows[1].order.unwrap() - 2.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.pass));
        let slow = convergence("r", &[(33, 0.0625, 4e-3), (65, 0.03125, 2e-3)], 1.8);
        assert!(!slow[1].pass);
    }

    #[test]
    fn csv_schema() {
        let text = csv(&[value_check("x", 65, 0.03125, 0.5, 1.0)]);
        assert_eq!(
            text,
            "check,level,h,residual,order_estimate,pass\nx,65,0.03125,0.5,,true\n"
        );
    }
}
