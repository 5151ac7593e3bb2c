use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;

/// Writes `rows` as CSV: header from the row type's field order, RFC 4180
/// quoting, LF line endings.
pub fn write_csv<T: Serialize>(cfg: &ExperimentConfig, command: &str, rows: &[T]) -> Result<()> {
    let dest = cfg
        .output
        .clone()
        .unwrap_or_else(|| cfg.out_dir().join(format!("{command}.csv")));
    if dest == Path::new("-") {
        return emit(io::stdout().lock(), rows);
    }
    if let Some(parent) = dest.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let file = File::create(&dest).with_context(|| format!("creating {}", dest.display()))?;
    emit(file, rows).with_context(|| format!("writing {}", dest.display()))
}

fn emit<T: Serialize, W: Write>(w: W, rows: &[T]) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir.to_path_buf())
}

/// Runs `f`, returning its value and the elapsed milliseconds when timing is
/// enabled.
pub fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let v = f();
    (v, timing.then(|| start.elapsed().as_secs_f64() * 1e3))
}
