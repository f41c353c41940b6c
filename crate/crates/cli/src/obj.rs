//! Wavefront OBJ output for grid surfaces.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

/// Formats like C's `%.17g`, which round-trips every double.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    const P: i32 = 17;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..P).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        trim(&format!("{:.*}", (P - 1 - exp) as usize, x))
    }
}

/// OBJ text for an `nx × ny` row-major grid. Masked vertices (`None`) are
/// written at the origin to keep indices stable, and every triangle touching
/// one is skipped. Quads split into `(i,j)-(i+1,j)-(i+1,j+1)` and
/// `(i,j)-(i+1,j+1)-(i,j+1)`.
pub fn obj_text(header: &[String], points: &[Option<[f64; 3]>], nx: usize, ny: usize) -> String {
    assert_eq!(points.len(), nx * ny, "point count does not match the grid");
    let mut s = String::new();
    for line in header {
        writeln!(s, "# {line}").unwrap();
    }
    for p in points {
        let [x, y, z] = p.unwrap_or([0.0; 3]);
        writeln!(s, "v {} {} {}", fmt_g17(x), fmt_g17(y), fmt_g17(z)).unwrap();
    }
    let idx = |i: usize, j: usize| j * nx + i;
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            for tri in [[a, b, c], [a, c, d]] {
                if tri.iter().all(|k| points[*k].is_some()) {
                    writeln!(s, "f {} {} {}", tri[0] + 1, tri[1] + 1, tri[2] + 1).unwrap();
                }
            }
        }
    }
    s
}

pub fn export_obj(
    path: &Path,
    header: &[String],
    points: &[Option<[f64; 3]>],
    nx: usize,
    ny: usize,
) -> Result<(), CliError> {
    std::fs::write(path, obj_text(header, points, nx, ny)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (123456789.0, "123456789"),
            (1e17, "1e+17"),
            (0.0001, "0.0001"),
            (1.0 / 3.0, "0.33333333333333331"),
            (-0.0, "-0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g17(x), want, "{x}");
        }
    }

    #[test]
    fn one_quad() {
        let pts: Vec<_> = (0..4)
            .map(|k| Some([(k % 2) as f64, (k / 2) as f64, 0.0]))
            .collect();
        let text = obj_text(&[], &pts, 2, 2);
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(
            text,
            "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 4\nf 1 4 3\n"
        );
    }

    #[test]
    fn masked_vertices_drop_their_faces() {
        let mut pts: Vec<_> = (0..9).map(|k| Some([k as f64, 0.0, 0.0])).collect();
        pts[8] = None;
        let text = obj_text(&[], &pts, 3, 3);
        // the corner vertex touches both triangles of one quad
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 6);
    }
}
