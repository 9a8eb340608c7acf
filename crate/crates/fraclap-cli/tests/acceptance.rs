//! Acceptance criterion 10: reruns from an emitted manifest are bit-exact.

use std::path::Path;
use std::process::Command;

fn fraclap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fraclap"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

/// Criterion 10: `gl` and `verify` rerun from the same manifest produce
/// bit-identical outputs.
#[test]
fn criterion_10_determinism() {
    let base = tempfile::tempdir().unwrap();
    let d1 = base.path().join("gl1");
    let d2 = base.path().join("gl2");

    let status = fraclap()
        .args(["gl", "--seed", "12345", "--grid-n", "128"])
        .arg("--out")
        .arg(&d1)
        .status()
        .unwrap();
    assert!(status.success());
    let status = fraclap()
        .args(["gl", "--config"])
        .arg(d1.join("manifest.toml"))
        .arg("--out")
        .arg(&d2)
        .status()
        .unwrap();
    assert!(status.success());
    let gl_ok = read(&d1.join("trace.txt")) == read(&d2.join("trace.txt"))
        && read(&d1.join("steady.fld")) == read(&d2.join("steady.fld"))
        && read(&d1.join("manifest.toml")) == read(&d2.join("manifest.toml"));

    // a reduced verify config keeps the rerun fast; determinism is what is
    // under test, not the suite size
    let cfg = base.path().join("verify.toml");
    std::fs::write(
        &cfg,
        "[verify]\nkato_fields = 200\ngl_scalar_runs = 8\ngl_vector_runs = 2\nsearch_restarts = 1500\n",
    )
    .unwrap();
    let v1 = base.path().join("v1");
    let v2 = base.path().join("v2");
    let status = fraclap()
        .args(["verify", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&v1)
        .status()
        .unwrap();
    assert!(status.success(), "verify suite must pass");
    let status = fraclap()
        .args(["verify", "--config"])
        .arg(v1.join("manifest.toml"))
        .arg("--out")
        .arg(&v2)
        .status()
        .unwrap();
    assert!(status.success());
    let verify_ok = read(&v1.join("reports.txt")) == read(&v2.join("reports.txt"))
        && read(&v1.join("manifest.toml")) == read(&v2.join("manifest.toml"));

    println!(
        "criterion 10: {} - gl and verify reruns bit-identical (gl: {gl_ok}, verify: {verify_ok})",
        if gl_ok && verify_ok { "PASS" } else { "FAIL" }
    );
    assert!(gl_ok && verify_ok);
}
