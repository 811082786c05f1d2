//! Helpers for the acceptance suite in `tests/acceptance.rs`.

use std::env;
use std::path::PathBuf;
use std::process::Command;

/// Path of the `fastlight` binary in the same target directory as the running
/// test, building it first if it is absent.
pub fn fastlight_binary() -> std::io::Result<PathBuf> {
    let exe = env::current_exe()?;
    let profile_dir = exe
        .parent()
        .and_then(|deps| deps.parent())
        .ok_or_else(|| std::io::Error::other("test executable has no target directory"))?;
    let bin = profile_dir.join(format!("fastlight{}", env::consts::EXE_SUFFIX));
    if !bin.exists() {
        let cargo = env::var("CARGO").unwrap_or_else(|_| "cargo".into());
        let mut cmd = Command::new(cargo);
        cmd.args(["build", "-p", "fastlight-cli", "--bin", "fastlight"]);
        if profile_dir.ends_with("release") {
            cmd.arg("--release");
        }
        let status = cmd.status()?;
        if !status.success() {
            return Err(std::io::Error::other(format!(
                "building fastlight failed: {status}"
            )));
        }
    }
    Ok(bin)
}
