//! Run configuration: a sectioned key-value text format, flag overrides,
//! and the resolved [`RunConfig`] consumed by the CLI.
//!
//! Format rules: `[section]` headers, `key = value` pairs, `#` comments,
//! blank lines ignored. Unknown sections or keys are rejected with their
//! line number. `mass` accepts an optional unit suffix (`kg` or `g`) in SI
//! mode; everything else is plain numbers or tokens. A config written by
//! [`RunConfig::to_config_text`] parses back to the identical config.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format_f64;
use crate::params::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Soliton,
    Evolve,
    Cat,
    OrthoTime,
    Telegraph,
    Witness,
    Planck,
    Janossy,
    Scaling,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::Soliton => "soliton",
            Subcommand::Evolve => "evolve",
            Subcommand::Cat => "cat",
            Subcommand::OrthoTime => "ortho-time",
            Subcommand::Telegraph => "telegraph",
            Subcommand::Witness => "witness",
            Subcommand::Planck => "planck",
            Subcommand::Janossy => "janossy",
            Subcommand::Scaling => "scaling",
        }
    }
}

/// Initial state selector for `evolve`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    Soliton,
    Cat,
    Gaussian,
    /// Load from a snapshot file.
    Snapshot(PathBuf),
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    // [params]
    pub unit_system: UnitSystem,
    pub mass: f64,
    pub alpha: f64,
    // [grid]
    pub dim: usize,
    pub grid_n: usize,
    pub box_length: f64,
    // [experiment]
    pub ell: f64,
    pub softening: f64,
    pub ortho_threshold: f64,
    pub seed: u64,
    pub shots: usize,
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub record_every: usize,
    pub relax_tol: f64,
    pub initial: InitialState,
    pub gaussian_width: f64,
    pub gaussian_center: f64,
    // [output]
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub dry_run: bool,
}

impl RunConfig {
    /// Documented defaults for a subcommand (see README for the full key
    /// table with units).
    pub fn defaults(subcommand: Subcommand) -> Self {
        let (dim, grid_n, box_length) = match subcommand {
            Subcommand::Soliton | Subcommand::Evolve => (3, 64, 24.0),
            Subcommand::Janossy => (1, 512, 40.0),
            _ => (1, 4096, 160.0),
        };
        RunConfig {
            subcommand,
            unit_system: UnitSystem::Dimensionless,
            mass: 1.0,
            alpha: 1.0,
            dim,
            grid_n,
            box_length,
            ell: 10.0,
            softening: 0.03,
            ortho_threshold: 0.1,
            seed: 42,
            shots: 1000,
            dt: None,
            t_max: None,
            record_every: 20,
            relax_tol: 1e-10,
            initial: InitialState::Soliton,
            gaussian_width: 1.0,
            gaussian_center: 0.0,
            output_dir: PathBuf::from("out"),
            dry_run: false,
        }
    }

    /// Serialize to the config text format; parsing the result restores
    /// this config exactly.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# gravicat run configuration ({})\n", self.subcommand.name()));
        out.push_str("[params]\n");
        out.push_str(&format!("unit_system = {}\n", self.unit_system));
        out.push_str(&format!("mass = {}\n", format_f64(self.mass)));
        out.push_str(&format!("alpha = {}\n", format_f64(self.alpha)));
        out.push_str("\n[grid]\n");
        out.push_str(&format!("dim = {}\n", self.dim));
        out.push_str(&format!("n = {}\n", self.grid_n));
        out.push_str(&format!("box_length = {}\n", format_f64(self.box_length)));
        out.push_str("\n[experiment]\n");
        out.push_str(&format!("ell = {}\n", format_f64(self.ell)));
        out.push_str(&format!("softening = {}\n", format_f64(self.softening)));
        out.push_str(&format!(
            "ortho_threshold = {}\n",
            format_f64(self.ortho_threshold)
        ));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("shots = {}\n", self.shots));
        if let Some(dt) = self.dt {
            out.push_str(&format!("dt = {}\n", format_f64(dt)));
        }
        if let Some(t_max) = self.t_max {
            out.push_str(&format!("t_max = {}\n", format_f64(t_max)));
        }
        out.push_str(&format!("record_every = {}\n", self.record_every));
        out.push_str(&format!("relax_tol = {}\n", format_f64(self.relax_tol)));
        let initial = match &self.initial {
            InitialState::Soliton => "soliton".to_string(),
            InitialState::Cat => "cat".to_string(),
            InitialState::Gaussian => "gaussian".to_string(),
            InitialState::Snapshot(p) => format!("snapshot:{}", p.display()),
        };
        out.push_str(&format!("initial = {initial}\n"));
        out.push_str(&format!(
            "gaussian_width = {}\n",
            format_f64(self.gaussian_width)
        ));
        out.push_str(&format!(
            "gaussian_center = {}\n",
            format_f64(self.gaussian_center)
        ));
        out.push_str("\n[output]\n");
        out.push_str(&format!("dir = {}\n", self.output_dir.display()));
        out
    }

    /// Hash of the canonical config text; identical configs hash equal.
    pub fn hash(&self) -> String {
        crate::io::sha256_hex(self.to_config_text().as_bytes())
    }

    /// Apply `key = value` from `location` (a file line or a flag name).
    pub fn set_key(&mut self, section: &str, key: &str, value: &str, location: &str) -> Result<()> {
        let bad = |message: String| Error::Config {
            location: location.to_string(),
            message,
        };
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| bad(format!("`{key}` expects a number, got `{v}`")))
                .and_then(|x| {
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(bad(format!("`{key}` must be finite")))
                    }
                })
        };
        let parse_usize = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| bad(format!("`{key}` expects a non-negative integer, got `{v}`")))
        };
        let positive = |x: f64| -> Result<f64> {
            if x > 0.0 {
                Ok(x)
            } else {
                Err(bad(format!("`{key}` must be strictly positive, got {x}")))
            }
        };
        match (section, key) {
            ("params", "unit_system") => {
                self.unit_system = value.parse().map_err(|e: String| bad(e))?;
            }
            ("params", "mass") => {
                let mut parts = value.split_whitespace();
                let number = parts.next().unwrap_or("");
                let unit = parts.next();
                if parts.next().is_some() {
                    return Err(bad(format!("`mass` has trailing tokens in `{value}`")));
                }
                let raw = positive(parse_f64(number)?)?;
                self.mass = match unit {
                    None | Some("kg") => raw,
                    Some("g") => {
                        if self.unit_system != UnitSystem::Si {
                            return Err(bad(
                                "mass unit suffixes are only meaningful in SI mode".into(),
                            ));
                        }
                        raw * 1e-3
                    }
                    Some(other) => {
                        return Err(bad(format!("unknown mass unit `{other}` (use kg or g)")))
                    }
                };
            }
            ("params", "alpha") => {
                let v = parse_f64(value)?;
                if v < 0.0 {
                    return Err(bad("`alpha` must be >= 0".into()));
                }
                self.alpha = v;
            }
            ("grid", "dim") => {
                let d = parse_usize(value)?;
                if d != 1 && d != 3 {
                    return Err(bad(format!("`dim` must be 1 or 3, got {d}")));
                }
                self.dim = d;
            }
            ("grid", "n") => self.grid_n = parse_usize(value)?,
            ("grid", "box_length") => self.box_length = positive(parse_f64(value)?)?,
            ("experiment", "ell") => self.ell = positive(parse_f64(value)?)?,
            ("experiment", "softening") => self.softening = positive(parse_f64(value)?)?,
            ("experiment", "ortho_threshold") => {
                let v = parse_f64(value)?;
                if !(0.0 < v && v < 1.0) {
                    return Err(bad("`ortho_threshold` must lie in (0, 1)".into()));
                }
                self.ortho_threshold = v;
            }
            ("experiment", "seed") => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| bad(format!("`seed` expects an integer, got `{value}`")))?;
            }
            ("experiment", "shots") => self.shots = parse_usize(value)?,
            ("experiment", "dt") => self.dt = Some(positive(parse_f64(value)?)?),
            ("experiment", "t_max") => self.t_max = Some(positive(parse_f64(value)?)?),
            ("experiment", "record_every") => {
                let v = parse_usize(value)?;
                if v == 0 {
                    return Err(bad("`record_every` must be >= 1".into()));
                }
                self.record_every = v;
            }
            ("experiment", "relax_tol") => self.relax_tol = positive(parse_f64(value)?)?,
            ("experiment", "initial") => {
                self.initial = match value {
                    "soliton" => InitialState::Soliton,
                    "cat" => InitialState::Cat,
                    "gaussian" => InitialState::Gaussian,
                    other => {
                        if let Some(path) = other.strip_prefix("snapshot:") {
                            InitialState::Snapshot(PathBuf::from(path))
                        } else {
                            return Err(bad(format!(
                                "`initial` must be soliton|cat|gaussian|snapshot:<path>, got `{other}`"
                            )));
                        }
                    }
                };
            }
            ("experiment", "gaussian_width") => {
                self.gaussian_width = positive(parse_f64(value)?)?
            }
            ("experiment", "gaussian_center") => self.gaussian_center = parse_f64(value)?,
            ("output", "dir") => self.output_dir = PathBuf::from(value),
            _ => {
                return Err(bad(format!("unknown key `[{section}] {key}`")));
            }
        }
        Ok(())
    }

    /// Final cross-field validation.
    pub fn validate(&self) -> Result<()> {
        let err = |message: String| Error::Config {
            location: "resolved config".into(),
            message,
        };
        if self.subcommand == Subcommand::Planck && self.unit_system != UnitSystem::Si {
            return Err(err(
                "the planck subcommand needs `unit_system = SI` and a mass in kg".into(),
            ));
        }
        match self.subcommand {
            Subcommand::Telegraph
            | Subcommand::Witness
            | Subcommand::OrthoTime
            | Subcommand::Cat
            | Subcommand::Scaling
            | Subcommand::Janossy
                if self.dim != 1 =>
            {
                return Err(err(format!(
                    "`{}` runs on 1D grids (set [grid] dim = 1)",
                    self.subcommand.name()
                )));
            }
            _ => {}
        }
        if !self.grid_n.is_power_of_two() || self.grid_n < 16 {
            return Err(err(format!(
                "grid n must be a power of two >= 16, got {}",
                self.grid_n
            )));
        }
        Ok(())
    }
}

/// Parse a config file on top of the defaults for `subcommand`.
pub fn parse_config_file(path: &Path, subcommand: Subcommand) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config_text(&text, subcommand, &path.display().to_string())
}

pub fn parse_config_text(text: &str, subcommand: Subcommand, source: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(subcommand);
    let mut section = String::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    const SECTIONS: [&str; 4] = ["params", "grid", "experiment", "output"];
    for (idx, raw) in text.lines().enumerate() {
        let location = format!("{source}:{}", idx + 1);
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if !SECTIONS.contains(&name) {
                return Err(Error::Config {
                    location,
                    message: format!("unknown section `[{name}]`"),
                });
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            location: location.clone(),
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if section.is_empty() {
            return Err(Error::Config {
                location,
                message: format!("key `{key}` appears before any [section]"),
            });
        }
        if !seen.insert((section.clone(), key.to_string())) {
            return Err(Error::Config {
                location,
                message: format!("duplicate key `[{section}] {key}`"),
            });
        }
        cfg.set_key(&section, key, value, &location)?;
    }
    Ok(cfg)
}
