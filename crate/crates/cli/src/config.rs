//! `key = value` experiment configuration.
//!
//! Lines starting with `#` are comments. Lists are comma-separated. Every key
//! is optional; missing keys take the per-experiment defaults of
//! [`ExperimentConfig::defaults`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::{CliError, Result};

/// Largest frequency or degree accepted in any grid.
pub const MAX_LAMBDA: f64 = 4096.0;

/// Largest breadth-first word length for the ball enumeration.
pub const MAX_WORD_LENGTH: usize = knlab::deckgroup::MAX_WORD_LENGTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    KnScaling,
    RestrictionScaling,
    GramWindow,
    ToponogovCone,
    DeckCounts,
    EscapeTimes,
    NodalSuite,
    SaturationContrast,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::KnScaling,
        Experiment::RestrictionScaling,
        Experiment::GramWindow,
        Experiment::ToponogovCone,
        Experiment::DeckCounts,
        Experiment::EscapeTimes,
        Experiment::NodalSuite,
        Experiment::SaturationContrast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::KnScaling => "kn-scaling",
            Experiment::RestrictionScaling => "restriction-scaling",
            Experiment::GramWindow => "gram-window",
            Experiment::ToponogovCone => "toponogov-cone",
            Experiment::DeckCounts => "deck-counts",
            Experiment::EscapeTimes => "escape-times",
            Experiment::NodalSuite => "nodal-suite",
            Experiment::SaturationContrast => "saturation-contrast",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                CliError::Config(format!("unknown experiment `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Sphere,
    Torus,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Sphere => "sphere",
            Model::Torus => "torus",
        }
    }
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Model::Sphere),
            "torus" => Ok(Model::Torus),
            _ => Err(CliError::Config(format!("unknown model `{s}`; expected sphere or torus"))),
        }
    }
}

/// Which eigenfunctions an experiment samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Seeded random unit vectors in the torus window `[λ, λ + 1/log λ]`.
    Window,
    /// Torus plane wave `e^{iλx₁}/(2π)`.
    PlaneWave,
    /// Torus `√2 sin(kx₁)/(2π)`.
    Sine,
    HighestWeight,
    Zonal,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Window => "window",
            Family::PlaneWave => "plane-wave",
            Family::Sine => "sine",
            Family::HighestWeight => "highest-weight",
            Family::Zonal => "zonal",
        }
    }

    pub fn model(self) -> Model {
        match self {
            Family::Window | Family::PlaneWave | Family::Sine => Model::Torus,
            Family::HighestWeight | Family::Zonal => Model::Sphere,
        }
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        [Family::Window, Family::PlaneWave, Family::Sine, Family::HighestWeight, Family::Zonal]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown mode family `{s}`")))
    }
}

/// Parameters of one experiment run. Fields an experiment does not use are
/// ignored by it but still enter the config hash.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: Model,
    pub families: Vec<Family>,
    /// Frequencies (torus) or degrees (sphere), strictly increasing.
    pub lambda_grid: Vec<f64>,
    /// Second index grid (zonal degrees in `nodal-suite`).
    pub index_grid: Vec<f64>,
    /// Tube halfwidth is `multiplier · λ^{-1/2}`.
    pub multiplier: f64,
    pub base_points: usize,
    pub directions: usize,
    /// Quadrature nodes per wavelength.
    pub resolution: f64,
    /// Segment lengths for tube studies.
    pub lengths: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub kappa: f64,
    pub inflation: f64,
    pub deltas: Vec<f64>,
    pub word_length: usize,
    pub displacement_cap: f64,
    pub k_max: u32,
    /// Tube radii `R` for the annulus counts.
    pub tube_radii: Vec<f64>,
    /// Also report the annulus counts at `R = diam D`.
    pub include_diameter: bool,
    pub exponents: Vec<f64>,
    pub out: PathBuf,
    pub seed: u64,
}

fn pi_over_ten() -> f64 {
    std::f64::consts::PI / 10.0
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let mut c = Self {
            experiment,
            model: Model::Torus,
            families: vec![Family::Window],
            lambda_grid: vec![64.0, 128.0, 256.0, 512.0],
            index_grid: Vec::new(),
            multiplier: 1.0,
            base_points: 8,
            directions: 16,
            resolution: 6.0,
            lengths: vec![pi_over_ten()],
            t_grid: vec![2.0, 4.0, 6.0],
            r_grid: vec![0.5, 1.0],
            kappa: 1.0,
            inflation: 1.5,
            deltas: vec![0.1, 0.25],
            word_length: 12,
            displacement_cap: 12.5,
            k_max: 4,
            tube_radii: vec![0.5, 1.0],
            include_diameter: true,
            exponents: vec![4.0, 6.0],
            out: PathBuf::from("out"),
            seed: 0,
        };
        match experiment {
            Experiment::KnScaling | Experiment::ToponogovCone | Experiment::DeckCounts => {}
            Experiment::RestrictionScaling => {
                c.model = Model::Sphere;
                c.families = vec![Family::HighestWeight, Family::Zonal];
                c.lambda_grid = vec![16.0, 32.0, 64.0, 128.0, 256.0];
                c.resolution = 12.0;
            }
            Experiment::GramWindow => {
                c.lambda_grid = vec![64.0, 128.0, 256.0, 512.0, 1024.0];
                c.lengths = vec![pi_over_ten(), 1.0];
            }
            Experiment::EscapeTimes => c.lambda_grid = vec![100.0, 400.0, 1600.0],
            Experiment::NodalSuite => {
                c.families = vec![Family::Sine, Family::Zonal];
                c.lambda_grid = vec![5.0, 10.0, 20.0];
                c.index_grid = vec![8.0, 16.0, 32.0, 64.0];
                c.resolution = 20.0;
            }
            Experiment::SaturationContrast => {
                c.model = Model::Sphere;
                c.families = vec![Family::HighestWeight];
                c.lambda_grid = vec![16.0, 32.0, 64.0, 128.0, 256.0];
                c.resolution = 8.0;
            }
        }
        c
    }

    /// Parses a config file body. `experiment` is required unless given by `fallback`.
    pub fn parse(text: &str, fallback: Option<Experiment>) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut experiment = fallback;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "experiment" {
                if fallback.is_none() {
                    experiment = Some(value.parse()?);
                }
            } else {
                pairs.push((n + 1, key.to_owned(), value.to_owned()));
            }
        }
        let experiment = experiment.ok_or_else(|| CliError::Config("no experiment named".into()))?;
        let mut config = Self::defaults(experiment);
        for (line, key, value) in pairs {
            config.set(&key, &value).map_err(|e| CliError::Config(format!("line {line}: {e}")))?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path, fallback: Option<Experiment>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, fallback)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => self.model = value.parse()?,
            "families" | "family" => self.families = list(value, str::parse)?,
            "lambda_grid" => self.lambda_grid = numbers(value)?,
            "index_grid" => self.index_grid = numbers(value)?,
            "multiplier" => self.multiplier = number(value)?,
            "base_points" => self.base_points = integer(value)?,
            "directions" => self.directions = integer(value)?,
            "resolution" => self.resolution = number(value)?,
            "lengths" => self.lengths = numbers(value)?,
            "t_grid" => self.t_grid = numbers(value)?,
            "r_grid" => self.r_grid = numbers(value)?,
            "kappa" => self.kappa = number(value)?,
            "inflation" => self.inflation = number(value)?,
            "deltas" => self.deltas = numbers(value)?,
            "word_length" => self.word_length = integer(value)?,
            "displacement_cap" => self.displacement_cap = number(value)?,
            "k_max" => self.k_max = integer(value)?,
            "tube_radii" => self.tube_radii = numbers(value)?,
            "include_diameter" => {
                self.include_diameter = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("`{value}` is not true or false")))?
            }
            "exponents" => self.exponents = numbers(value)?,
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = integer(value)?,
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let grids: [(&str, &[f64]); 8] = [
            ("lambda_grid", &self.lambda_grid),
            ("index_grid", &self.index_grid),
            ("lengths", &self.lengths),
            ("t_grid", &self.t_grid),
            ("r_grid", &self.r_grid),
            ("deltas", &self.deltas),
            ("tube_radii", &self.tube_radii),
            ("exponents", &self.exponents),
        ];
        for (name, grid) in grids {
            if grid.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(CliError::Config(format!("{name} must be strictly increasing")));
            }
            if grid.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Config(format!("{name} contains a non-finite value")));
            }
        }
        if self.lambda_grid.is_empty() {
            return Err(CliError::Config("lambda_grid is empty".into()));
        }
        for grid in [&self.lambda_grid, &self.index_grid] {
            if grid.iter().any(|&l| !(l > 0.0) || l > MAX_LAMBDA) {
                return Err(CliError::Config(format!("grid values must lie in (0, {MAX_LAMBDA}]")));
            }
        }
        if self.word_length > MAX_WORD_LENGTH {
            return Err(CliError::Config(format!("word_length {} exceeds {MAX_WORD_LENGTH}", self.word_length)));
        }
        if self.families.is_empty() {
            return Err(CliError::Config("families is empty".into()));
        }
        if !(self.multiplier > 0.0) || !(self.resolution > 0.0) || self.base_points == 0 || self.directions == 0 {
            return Err(CliError::Config("multiplier, resolution and family counts must be positive".into()));
        }
        Ok(())
    }

    /// Canonical `key = value` form; two configs with equal canonical text
    /// describe the same run.
    pub fn canonical(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let families: Vec<&str> = self.families.iter().map(|f| f.name()).collect();
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("experiment", self.experiment.name().into());
        put("model", self.model.name().into());
        put("families", families.join(", "));
        put("lambda_grid", join(&self.lambda_grid));
        put("index_grid", join(&self.index_grid));
        put("multiplier", format!("{:?}", self.multiplier));
        put("base_points", self.base_points.to_string());
        put("directions", self.directions.to_string());
        put("resolution", format!("{:?}", self.resolution));
        put("lengths", join(&self.lengths));
        put("t_grid", join(&self.t_grid));
        put("r_grid", join(&self.r_grid));
        put("kappa", format!("{:?}", self.kappa));
        put("inflation", format!("{:?}", self.inflation));
        put("deltas", join(&self.deltas));
        put("word_length", self.word_length.to_string());
        put("displacement_cap", format!("{:?}", self.displacement_cap));
        put("k_max", self.k_max.to_string());
        put("tube_radii", join(&self.tube_radii));
        put("include_diameter", self.include_diameter.to_string());
        put("exponents", join(&self.exponents));
        put("seed", self.seed.to_string());
        s
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    /// The output directory is not part of the hash.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn list<T>(value: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn numbers(value: &str) -> Result<Vec<f64>> {
    list(value, number)
}

/// A number, or one of the constants `pi`, `pi/N`, `N*pi`.
fn number(value: &str) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let bad = || CliError::Config(format!("`{value}` is not a number"));
    if let Some(rest) = value.strip_prefix("pi") {
        if rest.is_empty() {
            return Ok(pi);
        }
        let denom: f64 = rest.strip_prefix('/').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        return Ok(pi / denom);
    }
    if let Some(factor) = value.strip_suffix("*pi") {
        return factor.trim().parse::<f64>().map(|f| f * pi).map_err(|_| bad());
    }
    value.parse().map_err(|_| bad())
}

fn integer<T: FromStr>(value: &str) -> Result<T> {
    value.parse().map_err(|_| CliError::Config(format!("`{value}` is not a nonnegative integer")))
}
