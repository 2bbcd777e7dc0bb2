//! File formats: binary field snapshots, trace CSV export, and the run
//! manifest.
//!
//! Snapshot layout: one ASCII header line
//! `GRAVICAT-WF v1 <dim> <n> <box_length> <unit_system>` followed by
//! little-endian 64-bit float pairs (re, im) in row-major grid order
//! (`GRAVICAT-POT v1 …` with single floats for potential fields). The
//! box length is printed with 17 significant digits so a write→read→write
//! cycle is bit-exact. Grid samples sit at half-cell offsets from the box
//! center (x_i = (i + ½ − n/2)·dx).
//!
//! CSV floats are fixed 17-significant-digit scientific notation, making
//! re-runs with identical configs byte-identical.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::UnitSystem;
use crate::potentials::PotentialField;
use crate::propagate::EvolutionTrace;
use crate::wavefunction::WaveFunction;

const WF_MAGIC: &str = "GRAVICAT-WF";
const POT_MAGIC: &str = "GRAVICAT-POT";

/// Format a float with 17 significant digits (round-trips f64 exactly).
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_header(
    out: &mut impl Write,
    magic: &str,
    grid: &Grid,
    unit_system: UnitSystem,
    path: &Path,
) -> Result<()> {
    writeln!(
        out,
        "{magic} v1 {} {} {} {unit_system}",
        grid.dim(),
        grid.n(),
        format_f64(grid.box_length())
    )
    .map_err(|e| Error::io(path.display().to_string(), e))
}

fn parse_header(line: &str, magic: &str) -> Result<(Grid, UnitSystem)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let bad = |msg: &str| Error::Snapshot(format!("{msg}: `{line}`"));
    if fields.len() != 6 || fields[0] != magic || fields[1] != "v1" {
        return Err(bad(&format!("expected `{magic} v1 dim n L unit_system`")));
    }
    let dim: usize = fields[2].parse().map_err(|_| bad("bad dim"))?;
    let n: usize = fields[3].parse().map_err(|_| bad("bad n"))?;
    let box_length: f64 = fields[4].parse().map_err(|_| bad("bad box length"))?;
    let unit_system: UnitSystem = fields[5].parse().map_err(|_| bad("bad unit system"))?;
    let grid = match dim {
        1 => Grid::new_1d(n, box_length)?,
        3 => Grid::new_3d(n, box_length)?,
        _ => return Err(bad("dim must be 1 or 3")),
    };
    Ok((grid, unit_system))
}

/// Write a wavefunction snapshot.
pub fn write_wavefunction(
    path: &Path,
    psi: &WaveFunction,
    unit_system: UnitSystem,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut out = BufWriter::new(file);
    write_header(&mut out, WF_MAGIC, psi.grid(), unit_system, path)?;
    let mut buf = Vec::with_capacity(psi.amplitudes().len() * 16);
    for a in psi.amplitudes() {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }
    out.write_all(&buf)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a wavefunction snapshot. The amplitudes are restored bit-exactly
/// (no renormalization).
pub fn read_wavefunction(path: &Path) -> Result<(WaveFunction, UnitSystem)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    reader
        .read_line(&mut line)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let (grid, unit_system) = parse_header(line.trim_end(), WF_MAGIC)?;
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    if bytes.len() != grid.len() * 16 {
        return Err(Error::Snapshot(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            grid.len() * 16
        )));
    }
    let amps: Vec<Complex64> = bytes
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    let wf = WaveFunction::from_raw_parts(grid, amps)?;
    Ok((wf, unit_system))
}

/// Write a potential-field snapshot.
pub fn write_potential(
    path: &Path,
    field: &PotentialField,
    unit_system: UnitSystem,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut out = BufWriter::new(file);
    write_header(&mut out, POT_MAGIC, field.grid(), unit_system, path)?;
    let mut buf = Vec::with_capacity(field.values().len() * 8);
    for v in field.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a potential-field snapshot back as raw values.
pub fn read_potential(path: &Path) -> Result<(Grid, Vec<f64>, UnitSystem)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    reader
        .read_line(&mut line)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let (grid, unit_system) = parse_header(line.trim_end(), POT_MAGIC)?;
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    if bytes.len() != grid.len() * 8 {
        return Err(Error::Snapshot(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            grid.len() * 8
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((grid, values, unit_system))
}

/// Render a trace as CSV. Columns: time, norm, energy_total,
/// energy_kinetic, energy_potential, centroid per axis, lobe_separation
/// (empty when untracked), and re/im of each reference overlap.
pub fn trace_to_csv(trace: &EvolutionTrace, dim: usize) -> String {
    let n_refs = trace.overlaps.first().map_or(0, |row| row.len());
    let mut header: Vec<String> = vec![
        "time".into(),
        "norm".into(),
        "energy_total".into(),
        "energy_kinetic".into(),
        "energy_potential".into(),
    ];
    match dim {
        1 => header.push("centroid_x".into()),
        _ => {
            header.push("centroid_x".into());
            header.push("centroid_y".into());
            header.push("centroid_z".into());
        }
    }
    header.push("lobe_separation".into());
    header.push("core_separation".into());
    for i in 0..n_refs {
        header.push(format!("overlap{i}_re"));
        header.push(format!("overlap{i}_im"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for k in 0..trace.len() {
        let mut row: Vec<String> = vec![
            format_f64(trace.times[k]),
            format_f64(trace.norms[k]),
            format_f64(trace.energy_total[k]),
            format_f64(trace.energy_kinetic[k]),
            format_f64(trace.energy_potential[k]),
        ];
        for c in &trace.centroids[k] {
            row.push(format_f64(*c));
        }
        row.push(
            trace.lobe_separations[k]
                .map(format_f64)
                .unwrap_or_default(),
        );
        row.push(
            trace.core_separations[k]
                .map(format_f64)
                .unwrap_or_default(),
        );
        for ov in &trace.overlaps[k] {
            row.push(format_f64(ov.re));
            row.push(format_f64(ov.im));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub code_version: String,
    pub config_hash: String,
    pub created_unix: u64,
    pub wall_seconds: f64,
    pub files: BTreeMap<String, ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Guard file preventing two runs from sharing an output directory.
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    pub fn acquire(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        let path = dir.join(".gravicat.lock");
        match std::fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(OutputLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::Io {
                path: path.display().to_string(),
                source: std::io::Error::new(
                    std::io::ErrorKind::AlreadyExists,
                    "output directory is locked by another run (remove .gravicat.lock if stale)",
                ),
            }),
            Err(e) => Err(Error::io(path.display().to_string(), e)),
        }
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

/// Writes the report, traces and snapshots into one directory, then a
/// manifest referencing every emitted file by relative path and checksum.
pub struct OutputWriter {
    dir: PathBuf,
    files: BTreeMap<String, ManifestEntry>,
    started: std::time::Instant,
    _lock: OutputLock,
}

impl OutputWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        let lock = OutputLock::acquire(dir)?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            files: BTreeMap::new(),
            started: std::time::Instant::now(),
            _lock: lock,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::io(parent.display().to_string(), e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| Error::io(path.display().to_string(), e))?;
        self.files.insert(
            name.to_string(),
            ManifestEntry {
                path: name.to_string(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len() as u64,
            },
        );
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Snapshot(format!("json serialization: {e}")))?;
        self.write_bytes(name, text.as_bytes())
    }

    /// Register an already-written file (e.g. a binary snapshot).
    pub fn register(&mut self, name: &str) -> Result<()> {
        let path = self.dir.join(name);
        let bytes = std::fs::read(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
        self.files.insert(
            name.to_string(),
            ManifestEntry {
                path: name.to_string(),
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            },
        );
        Ok(())
    }

    /// Finalize the run: write `manifest.json` and return the manifest.
    pub fn finish(self, config_hash: &str) -> Result<Manifest> {
        let manifest = Manifest {
            schema_version: 1,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config_hash.to_string(),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            wall_seconds: self.started.elapsed().as_secs_f64(),
            files: self.files.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Snapshot(format!("manifest serialization: {e}")))?;
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, text).map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(manifest)
    }
}
