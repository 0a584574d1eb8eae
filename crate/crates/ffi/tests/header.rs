//! The generated header compiles and links from C.

use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("include/twopoint_wave.h"),
    )
    .unwrap();
    for name in [
        "typedef struct TpwSystem TpwSystem;",
        "typedef struct TpwTrajectory TpwTrajectory;",
        "typedef struct TpwScenario TpwScenario;",
        "TPW_STATUS_OK = 0",
        "TPW_STATUS_DOMAIN",
        "tpw_last_error_message",
        "tpw_validate_params",
        "tpw_derive_constants",
        "tpw_system_new",
        "tpw_simulate",
        "tpw_scenario_run",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = target_dir();
    let lib = dir.join("libtwopoint_wave_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
