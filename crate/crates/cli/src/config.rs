//! Flat `key = value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored. Later assignments win, and
//! command-line `--key=value` overrides are applied after the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use fracsym::parabolic::{GammaExponent, Sampling};
use fracsym::presets::Preset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(key: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError(format!("invalid value for `{key}`: {reason}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Interval,
    Rectangle,
}

/// Every key the driver understands, with its default.
pub const KEYS: &[(&str, &str)] = &[
    ("domain", "rectangle"),
    ("resolution", "32"),
    ("nx", ""),
    ("ny", ""),
    ("lx", "1"),
    ("ly", "1"),
    ("shells", ""),
    ("sigma", "0.5"),
    ("c", "0"),
    ("Q", ""),
    ("gamma", ""),
    ("source", "eigenmode:1"),
    ("zero_mean", "auto"),
    ("seed", "0"),
    ("y_samples", "0,0.1,1"),
    ("c_tol", "10"),
    ("tolerance", ""),
    ("split_mode", "false"),
    ("gamma_exponent", "sigma"),
    ("T", "1"),
    ("n", "16"),
    ("u0", "eigenmode:1"),
    ("f", "zero"),
    ("sampling", "midpoint"),
    ("extension_y", ""),
    ("modes", "5"),
    ("dtn_y", "0.1,0.01,0.001"),
    ("lp", "1,2,4,inf"),
    ("out", "out"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub domain: DomainKind,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub shells: usize,
    pub sigma: f64,
    pub c: f64,
    /// `None` means the per-domain default.
    pub q: Option<f64>,
    /// Overrides the `γ` derived from `Q`.
    pub gamma: Option<f64>,
    pub source: Preset,
    /// `None`: project to zero mean exactly when `c = 0`.
    pub zero_mean: Option<bool>,
    pub seed: u64,
    pub y_samples: Vec<f64>,
    pub c_tol: f64,
    pub tolerance: Option<f64>,
    pub split_mode: bool,
    pub gamma_exponent: GammaExponent,
    pub t_end: f64,
    pub n: usize,
    pub u0: Preset,
    pub f: Preset,
    pub sampling: Sampling,
    pub extension_y: Vec<f64>,
    pub modes: usize,
    pub dtn_y: Vec<f64>,
    pub lp: Vec<f64>,
    pub out: PathBuf,
}

/// Parses `key = value` lines.
pub fn parse_flat(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected `key = value`, got `{line}`", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_flat(&text)
}

/// Splits `--key=value` overrides from the raw arguments. Keys listed in
/// `flags` are left for the argument parser.
pub fn split_overrides(args: Vec<String>, flags: &[&str]) -> (Vec<String>, Vec<(String, String)>) {
    let mut rest = Vec::with_capacity(args.len());
    let mut overrides = Vec::new();
    for arg in args {
        if let Some((k, v)) = arg.strip_prefix("--").and_then(|a| a.split_once('=')) {
            if !flags.contains(&k) {
                overrides.push((k.replace('-', "_"), v.to_string()));
                continue;
            }
        }
        rest.push(arg);
    }
    (rest, overrides)
}

struct Values<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Values<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str).filter(|s| !s.is_empty())
    }

    fn default_of(key: &str) -> &'static str {
        KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d).unwrap_or("")
    }

    fn text(&self, key: &str) -> &str {
        self.raw(key).unwrap_or(Self::default_of(key))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let s = self.text(key);
        s.parse().map_err(|e| bad(key, format!("`{s}`: {e}")))
    }

    fn optional<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(_) => self.parse(key).map(Some),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.text(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| match s {
                "inf" | "infinity" => Ok(f64::INFINITY),
                _ => s.parse::<f64>().map_err(|e| bad(key, format!("`{s}`: {e}"))),
            })
            .collect()
    }

    fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        match self.text(key) {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            other => Err(bad(key, format!("expected a boolean, got `{other}`"))),
        }
    }

    /// A preset, where a bare `random` takes its seed from `seed`.
    fn preset(&self, key: &str, seed: u64) -> Result<Preset, ConfigError> {
        let s = self.text(key);
        if s == "random" {
            return Ok(Preset::Random { seed });
        }
        s.parse().map_err(|e| bad(key, e))
    }
}

impl ExperimentConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<ExperimentConfig, ConfigError> {
        if let Some(unknown) = map.keys().find(|k| !KEYS.iter().any(|(known, _)| known == k)) {
            return Err(ConfigError(format!("unknown config key `{unknown}`")));
        }
        let v = Values { map };
        let domain = match v.text("domain") {
            "interval" => DomainKind::Interval,
            "rectangle" | "square" => DomainKind::Rectangle,
            other => return Err(bad("domain", format!("expected `interval` or `rectangle`, got `{other}`"))),
        };
        let resolution: usize = v.parse("resolution")?;
        let nx = v.optional("nx")?.unwrap_or(resolution);
        let ny = v.optional("ny")?.unwrap_or(resolution);
        let seed: u64 = v.parse("seed")?;
        let zero_mean = match v.text("zero_mean") {
            "auto" => None,
            _ => Some(v.flag("zero_mean")?),
        };
        let cfg = ExperimentConfig {
            domain,
            nx,
            ny,
            lx: v.parse("lx")?,
            ly: v.parse("ly")?,
            shells: v.optional("shells")?.unwrap_or(nx),
            sigma: v.parse("sigma")?,
            c: v.parse("c")?,
            q: v.optional("Q")?,
            gamma: v.optional("gamma")?,
            source: v.preset("source", seed)?,
            zero_mean,
            seed,
            y_samples: v.list("y_samples")?,
            c_tol: v.parse("c_tol")?,
            tolerance: v.optional("tolerance")?,
            split_mode: v.flag("split_mode")?,
            gamma_exponent: v.parse("gamma_exponent")?,
            t_end: v.parse("T")?,
            n: v.parse("n")?,
            u0: v.preset("u0", seed)?,
            f: v.preset("f", seed.wrapping_add(1))?,
            sampling: v.parse("sampling")?,
            extension_y: v.list("extension_y")?,
            modes: v.parse("modes")?,
            dtn_y: v.list("dtn_y")?,
            lp: v.list("lp")?,
            out: PathBuf::from(v.text("out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(bad("sigma", format!("must lie in (0, 1), got {}", self.sigma)));
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(bad("c", format!("must be nonnegative, got {}", self.c)));
        }
        if let Some(q) = self.q {
            if !(q.is_finite() && q > 0.0) {
                return Err(bad("Q", format!("must be positive, got {q}")));
            }
        }
        if let Some(g) = self.gamma {
            if !(g.is_finite() && g > 0.0) {
                return Err(bad("gamma", format!("must be positive, got {g}")));
            }
        }
        for (key, n) in [("nx", self.nx), ("ny", self.ny), ("shells", self.shells)] {
            if n < 2 {
                return Err(bad(key, format!("must be at least 2, got {n}")));
            }
        }
        for (key, l) in [("lx", self.lx), ("ly", self.ly)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(bad(key, format!("must be positive, got {l}")));
            }
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(bad("T", format!("must be positive, got {}", self.t_end)));
        }
        if self.n < 1 {
            return Err(bad("n", "need at least one time step"));
        }
        if !(self.c_tol.is_finite() && self.c_tol >= 0.0) {
            return Err(bad("c_tol", format!("must be nonnegative, got {}", self.c_tol)));
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(bad("tolerance", format!("must be nonnegative, got {t}")));
            }
        }
        for (key, ys) in [("y_samples", &self.y_samples), ("extension_y", &self.extension_y), ("dtn_y", &self.dtn_y)] {
            if let Some(y) = ys.iter().find(|y| !(y.is_finite() && **y >= 0.0)) {
                return Err(bad(key, format!("heights must be finite and nonnegative, got {y}")));
            }
        }
        if self.dtn_y.contains(&0.0) {
            return Err(bad("dtn_y", "heights must be positive"));
        }
        if let Some(p) = self.lp.iter().find(|p| !(**p >= 1.0)) {
            return Err(bad("lp", format!("exponents must be at least 1, got {p}")));
        }
        Ok(())
    }

    /// Zero-mean projection of the source: explicit, or automatic when `c = 0`.
    pub fn project_source(&self) -> bool {
        self.zero_mean.unwrap_or(self.c == 0.0)
    }
}
