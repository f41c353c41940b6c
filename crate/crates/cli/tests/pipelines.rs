use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_curvedflat");

fn run(args: &[&str], dir: &Path, threads: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env("CURVEDFLAT_THREADS", threads)
        .output()
        .expect("spawn curvedflat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Obj {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

fn read_obj(path: &Path) -> Obj {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut obj = Obj {
        vertices: Vec::new(),
        faces: Vec::new(),
    };
    for line in text.lines() {
        let mut it = line.split(' ');
        match it.next() {
            Some("v") => {
                let v: Vec<f64> = it.map(|t| t.parse().unwrap()).collect();
                obj.vertices.push([v[0], v[1], v[2]]);
            }
            Some("f") => {
                let f: Vec<usize> = it.map(|t| t.parse().unwrap()).collect();
                obj.faces.push([f[0], f[1], f[2]]);
            }
            Some("#") => {}
            other => panic!("unexpected OBJ line {other:?}"),
        }
    }
    obj
}

fn normal(obj: &Obj, f: [usize; 3]) -> [f64; 3] {
    let [a, b, c] = f.map(|k| obj.vertices[k - 1]);
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    n.map(|x| x / len)
}

#[test]
fn minimal_writes_mesh_report_and_grids() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["minimal", "--nx", "33", "--levels", "17,33", "--out", "enn"],
        dir.path(),
        "2",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("curvedflat minimal\n"));

    let obj = read_obj(&dir.path().join("enn.obj"));
    assert_eq!(obj.vertices.len(), 33 * 33);
    assert_eq!(obj.faces.len(), 2 * 32 * 32);
    assert!(obj
        .faces
        .iter()
        .flatten()
        .all(|k| (1..=33 * 33).contains(k)));
    // first quad, split along its diagonal
    assert_eq!(obj.faces[0], [1, 2, 35]);
    assert_eq!(obj.faces[1], [1, 35, 34]);

    let csv = std::fs::read_to_string(dir.path().join("enn.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("check,level,h,residual,order_estimate,pass")
    );
    for l in lines {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols.len(), 6, "{l}");
        assert_eq!(cols[5], "true", "{l}");
    }
    for f in ["enn.txt", "enn.qgrid", "enn_gauss.qgrid"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn plane_faces_share_one_normal() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "minimal", "--g", "0", "--nx", "17", "--levels", "9,17", "--out", "plane",
        ],
        dir.path(),
        "1",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let obj = read_obj(&dir.path().join("plane.obj"));
    let n0 = normal(&obj, obj.faces[0]);
    for f in &obj.faces {
        let n = normal(&obj, *f);
        let dot: f64 = n.iter().zip(n0).map(|(a, b)| a * b).sum();
        assert!((dot - 1.0).abs() < 1e-12, "face {f:?}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["darboux", "--nx", "17", "--levels", "17,33", "--out", out];
    let codes: Vec<_> = [("a", "1"), ("b", "3")]
        .into_iter()
        .map(|(out, threads)| run(&args(out), dir.path(), threads).status.code())
        .collect();
    assert_eq!(codes[0], codes[1]);
    assert_ne!(codes[0], Some(2));
    for ext in ["obj", "csv"] {
        let a = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert!(a == b, "{ext} differs");
    }
}

#[test]
fn command_line_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# coarse run\nnx = 17\nlevels = 9, 17\nout = fromfile\n",
    )
    .unwrap();
    let o = run(&["minimal", "--config", "run.cfg"], dir.path(), "1");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        read_obj(&dir.path().join("fromfile.obj")).vertices.len(),
        17 * 17
    );

    let o = run(
        &[
            "minimal", "--config", "run.cfg", "--nx=33", "--levels", "17,33",
        ],
        dir.path(),
        "1",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        read_obj(&dir.path().join("fromfile.obj")).vertices.len(),
        33 * 33
    );
}

#[test]
fn validate_reads_stored_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["minimal", "--nx", "33", "--levels", "17,33", "--out", "m"],
        dir.path(),
        "1",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(
        &[
            "validate",
            "--surface",
            "m.qgrid",
            "--partner",
            "m_gauss.qgrid",
            "--out",
            "v",
        ],
        dir.path(),
        "1",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("33 x 33 vertices"), "{text}");
    assert_eq!(text.matches("christoffel_residual").count(), 2, "{text}");
    let factor: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("convergence factor "))
        .unwrap()
        .parse()
        .unwrap();
    // second order: halving h divides the residual by about four
    assert!((3.5..4.5).contains(&factor), "{factor}");
}

#[test]
fn bryant_reports_mean_curvature_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bryant", "--levels", "33,65"], dir.path(), "4");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("H = ")).unwrap();
    assert!(line.starts_with("H = 1.00"), "{line}");
    let header = std::fs::read_to_string(dir.path().join("bryant.obj")).unwrap();
    assert!(header
        .lines()
        .any(|l| l.starts_with("# chart: Poincare ball")));
}

#[test]
fn failed_threshold_exits_one() {
    // 33 vertices is too coarse for the mean-curvature tolerance
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["bryant", "--nx", "33", "--levels", "17,33"],
        dir.path(),
        "2",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("mean_curvature ") && l.ends_with("FAIL")));
    assert!(dir.path().join("bryant.obj").exists());
}

#[test]
fn errors_exit_two_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["minimal", "--bogus", "1"], "unknown key 'bogus'"),
        (&["minimal", "--g", "(z"], "byte 2"),
        (&["minimal", "--g", "sin(z)"], "sin"),
        (
            &["minimal", "--g", "1/z", "--nx", "17", "--levels", "9,17"],
            "minimal: pole",
        ),
        (&["minimal", "--nx", "2"], "at least 9"),
        (&["crossratio", "0", "1", "2"], "crossratio"),
    ];
    for (args, needle) in cases {
        let o = run(args, dir.path(), "1");
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(
            err.starts_with("error: ") && err.contains(needle),
            "{args:?}: {err}"
        );
    }
}

#[test]
fn unknown_command_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sphere"], dir.path(), "1");
    assert!(!o.status.success());
}

#[test]
fn crossratio_prints_values() {
    let dir = tempfile::tempdir().unwrap();
    for (args, expected) in [
        (["0", "1", "2", "3"], 1.0 / 9.0),
        (["0", "1", "2", "inf"], 1.0),
        (["i", "j", "k", "-i"], 0.5),
    ] {
        let mut a = vec!["crossratio"];
        a.extend(args);
        let o = run(&a, dir.path(), "1");
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: f64 = stdout(&o).trim().parse().unwrap();
        assert!((v - expected).abs() < 1e-12, "{args:?}: {v}");
    }
}

#[test]
fn scale_rescales_stored_partner() {
    let dir = tempfile::tempdir().unwrap();
    let grid = |out: &str, scale: &str| {
        let args = [
            "christoffel",
            "--nx",
            "33",
            "--levels",
            "17,33",
            "--scale",
            scale,
            "--out",
            out,
        ];
        let o = run(&args, dir.path(), "1");
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = std::fs::read_to_string(dir.path().join(format!("{out}.qgrid"))).unwrap();
        text.lines()
            .skip(1)
            .flat_map(|l| {
                l.split(' ')
                    .map(|t| t.parse::<f64>().unwrap())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let (a, b) = (grid("one", "1"), grid("three", "-3"));
    assert!(a
        .iter()
        .zip(&b)
        .all(|(x, y)| (y + 3.0 * x).abs() <= 1e-12 * (1.0 + x.abs())));
    let o = run(&["christoffel", "--scale", "0"], dir.path(), "1");
    assert_eq!(o.status.code(), Some(2));
}
