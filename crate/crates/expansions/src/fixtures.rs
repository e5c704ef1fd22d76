//! Pinned empirical constants. The directory comes from `FIXTURES_DIR`,
//! falling back to the crate's own `fixtures/`.

use std::path::{Path, PathBuf};

use expansions_core::contfrac::{log_grid, roy_check, ContFracError};
use serde::{Deserialize, Serialize};

pub const FILE_NAME: &str = "empirical.json";

/// Parameters of the pinned simultaneous-approximation run.
pub const ROY_A: u64 = 1;
pub const ROY_B: u64 = 2;
pub const ROY_X_MIN: u64 = 10;
pub const ROY_X_MAX: u64 = 10_000;
pub const ROY_PER_DECADE: u32 = 4;
pub const ROY_PRECISION_BITS: u64 = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoyFixture {
    pub a: u64,
    pub b: u64,
    pub x_grid: Vec<u64>,
    pub precision_bits: u64,
    pub c_emp: f64,
    pub s: Vec<f64>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Empirical {
    pub roy: RoyFixture,
}

pub fn fixtures_dir() -> PathBuf {
    std::env::var_os("FIXTURES_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

pub fn roy_grid() -> Vec<u64> {
    log_grid(ROY_X_MIN, ROY_X_MAX, ROY_PER_DECADE)
}

/// Recomputes every pinned quantity from scratch.
pub fn compute() -> Result<Empirical, ContFracError> {
    let grid = roy_grid();
    let r = roy_check(ROY_A, ROY_B, &grid, ROY_PRECISION_BITS)?;
    Ok(Empirical {
        roy: RoyFixture {
            a: ROY_A,
            b: ROY_B,
            x_grid: grid,
            precision_bits: ROY_PRECISION_BITS,
            c_emp: r.c_emp,
            s: r.rows.iter().map(|row| row.s).collect(),
            provenance: format!(
                "exhaustive search over 1 <= x0 <= X of max(||x0 xi||, ||x0 xi^2||) * X^(1/phi), \
                 xi = [0; A, B, A, A, B, ...] from the Fibonacci word with A={ROY_A}, B={ROY_B}, \
                 {ROY_PRECISION_BITS}-bit fixed point; written by `expansions fixtures pin`"
            ),
        },
    })
}

pub fn load(dir: &Path) -> anyhow::Result<Empirical> {
    let path = dir.join(FILE_NAME);
    let text = std::fs::read_to_string(&path).map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn store(dir: &Path, e: &Empirical) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(FILE_NAME);
    let mut text = serde_json::to_string_pretty(e)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Differences between the pinned and recomputed values, empty when they agree.
pub fn compare(pinned: &Empirical, fresh: &Empirical) -> Vec<String> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
    let mut out = Vec::new();
    let (p, f) = (&pinned.roy, &fresh.roy);
    if (p.a, p.b, &p.x_grid, p.precision_bits) != (f.a, f.b, &f.x_grid, f.precision_bits) {
        out.push("roy parameters differ".to_string());
    }
    if !close(p.c_emp, f.c_emp) {
        out.push(format!("roy c_emp pinned {} recomputed {}", p.c_emp, f.c_emp));
    }
    if p.s.len() != f.s.len() || p.s.iter().zip(&f.s).any(|(a, b)| !close(*a, *b)) {
        out.push("roy s(X) series differs".to_string());
    }
    out
}
