use std::path::Path;
use std::process::{Command, Output};

use morley_ns::mesh::load_mesh;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morley-ns"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn mesh_gen_writes_a_loadable_mesh() {
    let dir = tempfile::tempdir().unwrap();
    for (family, domain, cells) in [("trap", "unit", 16), ("cvt", "unit", 16), ("tri", "lshape", 24)] {
        let out = bin(
            &["mesh", "gen", "--family", family, "--n", "4", "--domain", domain, "-o", "m.txt"],
            dir.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mesh = load_mesh(dir.path().join("m.txt")).unwrap();
        let want = if domain == "lshape" { 4 * cells } else { cells * if family == "tri" { 2 } else { 1 } };
        assert_eq!(mesh.num_cells(), want, "{family}");
    }
}

#[test]
fn kovasznay_run_writes_error_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["run", "--test", "kovasznay", "--family", "square", "--levels", "4,8", "--nu", "1", "--out", "res"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let errors = dir.path().join("res/errors_kovasznay_square_nu1e0.csv");
    let rows = csv_rows(&errors);
    assert_eq!(rows[0][0], "h");
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 16));
    let r2: f64 = rows[2][2].parse().unwrap();
    assert!((0.7..1.3).contains(&r2), "R2 = {r2}");
    let fields = dir.path().join("res/fields_kovasznay_square_n8_nu1e0.csv");
    assert_eq!(csv_rows(&fields).len(), 1 + 101 * 101);
    let listed = String::from_utf8(out.stdout).unwrap();
    assert_eq!(listed.lines().count(), 2);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.cfg"),
        "# cavity on a coarse mesh\ntest = cavity\nlevels = 8\nnu = 1\n",
    )
    .unwrap();
    let out = bin(&["run", "--config", "c.cfg", "--set", "family=square", "--out", "."], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.path().join("cavity_square_nu1e0.csv"));
    assert_eq!(rows[0].join(","), "nu,newton_iters,vortex_x,vortex_y,psi_min");
    let psi_min: f64 = rows[1][4].parse().unwrap();
    assert!(psi_min < 0.0);
}

#[test]
fn robustness_report_lists_every_viscosity() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["run", "--test", "robustness", "--levels", "4", "--nu", "1,0.001"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.path().join("robustness_square.csv"));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].join(","), "nu,h,E2_psi,newton_iters");
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "test = kovasznay\nlevels = 8, 4\n").unwrap();
    for args in [
        &["run", "--config", "bad.cfg"][..],
        &["run", "--test", "kovasznay", "--set", "bogus=1"],
        &["run", "--test", "nope"],
        &["run", "--test", "lshaped", "--family", "square"],
        &["run"],
        &["mesh", "gen", "--family", "hex", "--n", "4", "-o", "m.txt"],
    ] {
        let out = bin(args, dir.path());
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("error"), "{args:?}: {err}");
        assert!(!err.contains("panicked"), "{args:?}: {err}");
    }
}
