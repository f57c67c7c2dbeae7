//! Metadata, tables and file plumbing shared by the commands.
//!
//! CSV: comma separated, `#` metadata lines, `.` decimals, floats in
//! shortest round-trip form. JSON carries the same metadata object.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use resfluor::AtomDriveParams;
use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

pub const TOOL: &str = "resfluor";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<&'static str>,
}

impl Metadata {
    pub fn new(command: &'static str, params: Option<&AtomDriveParams>) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command,
            gamma: params.map(|p| p.gamma),
            omega: params.map(|p| p.omega),
            delta: params.map(|p| p.delta),
            seed: None,
            generator: None,
        }
    }

    fn csv_lines(&self) -> Vec<String> {
        let mut lines = vec![format!(
            "# tool={} version={} command={}",
            self.tool, self.version, self.command
        )];
        if let (Some(g), Some(o), Some(d)) = (self.gamma, self.omega, self.delta) {
            lines.push(format!(
                "# gamma={} omega={} delta={}",
                fmt(g),
                fmt(o),
                fmt(d)
            ));
        }
        if let Some(seed) = self.seed {
            let generator = self.generator.unwrap_or("");
            lines.push(format!("# seed={seed} generator={generator}"));
        }
        lines
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt(x: f64) -> String {
    format!("{x:?}")
}

/// Row-major numeric table.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TableDocument<'a> {
    metadata: &'a Metadata,
    columns: &'a [&'static str],
    rows: &'a [Vec<f64>],
}

pub fn write_table(
    meta: &Metadata,
    table: &Table,
    format: Format,
    mut out: impl Write,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            for line in meta.csv_lines() {
                writeln!(out, "{line}")?;
            }
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|&x| fmt(x)).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            let doc = TableDocument {
                metadata: meta,
                columns: &table.columns,
                rows: &table.rows,
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    out.flush()
}

pub fn write_json<T: Serialize>(value: &T, mut out: impl Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

/// Relative paths are taken relative to `out_dir` when it is set.
pub fn resolve(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// One destination per parameter set: the path itself for a single set,
/// otherwise `stem_omega<Ω>_delta<δ>.ext` next to it.
pub fn destinations(path: Option<&Path>, sets: &[AtomDriveParams]) -> Vec<Option<PathBuf>> {
    match path {
        None => vec![None; sets.len()],
        Some(p) if sets.len() == 1 => vec![Some(p.to_path_buf())],
        Some(p) => sets
            .iter()
            .map(|s| {
                let stem = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let mut name = format!("{stem}_omega{}_delta{}", fmt(s.omega), fmt(s.delta));
                if let Some(ext) = p.extension() {
                    name.push('.');
                    name.push_str(&ext.to_string_lossy());
                }
                Some(p.with_file_name(name))
            })
            .collect(),
    }
}

/// Runs `write` against the file at `path` (parent directories created) or
/// against stdout.
pub fn emit<F>(path: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
            }
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w).map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match write(&mut lock) {
                // a closed pipe (`| head`) is not an error for a data tool
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(|e| CliError::io(Path::new("<stdout>"), e)),
            }
        }
    }
}
