//! Experiment driver for `knlab`: configuration, the named scaling studies,
//! and their CSV, SVG and summary outputs.
//!
//! ```no_run
//! use knlab_cli::config::{Experiment, ExperimentConfig};
//!
//! let mut config = ExperimentConfig::defaults(Experiment::ToponogovCone);
//! config.out = "out".into();
//! let written = knlab_cli::execute(&config).unwrap();
//! println!("{}", written.csv.display());
//! ```

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};

pub mod config;
pub mod experiments;
pub mod fit;
pub mod svg;
pub mod table;

use config::{Experiment, ExperimentConfig};
use fit::ScalingFit;
use svg::Plot;
use table::{Provenance, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error(transparent)]
    Lab(#[from] knlab::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// A named pass/fail invariant evaluated during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Everything an experiment produces before it is written to disk.
#[derive(Debug, Clone)]
pub struct Report {
    pub experiment: Experiment,
    pub table: Table,
    pub plot: Plot,
    pub fits: Vec<(String, ScalingFit)>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn fit(&self, name: &str) -> Option<&ScalingFit> {
        self.fits.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn summary(&self, provenance: &Provenance) -> String {
        let mut s = provenance.header_line();
        s.push('\n');
        for (name, f) in &self.fits {
            s.push_str(&format!("fit {name}: {f}\n"));
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("check {}: {verdict} ({})\n", c.name, c.detail));
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

/// Paths written by [`execute`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Written {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub summary: PathBuf,
}

pub fn provenance(config: &ExperimentConfig) -> Provenance {
    Provenance {
        version: VERSION.to_owned(),
        config_hash: config.hash(),
        seed: config.seed,
        experiment: config.experiment.name().to_owned(),
    }
}

/// Validates the config and runs the experiment without touching the disk.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    experiments::run(config)
}

/// Writes `<experiment>.csv`, `<experiment>.svg` and `<experiment>-summary.txt` into `dir`.
pub fn write_report(report: &Report, config: &ExperimentConfig, dir: &Path) -> Result<Written> {
    fs::create_dir_all(dir)?;
    let p = provenance(config);
    let name = config.experiment.name();
    let written = Written {
        csv: dir.join(format!("{name}.csv")),
        svg: dir.join(format!("{name}.svg")),
        summary: dir.join(format!("{name}-summary.txt")),
    };
    fs::write(&written.csv, table::to_csv(&report.table, &p)?)?;
    let mut svg = report.plot.render();
    svg.insert_str(svg.find('\n').map_or(0, |i| i + 1), &format!("<!-- {} -->\n", p.header_line().trim_start_matches("# ")));
    fs::write(&written.svg, svg)?;
    fs::write(&written.summary, report.summary(&p))?;
    Ok(written)
}

/// Runs the experiment and writes its outputs into `config.out`. Nothing is
/// written when the config is invalid or the run fails.
pub fn execute(config: &ExperimentConfig) -> Result<Written> {
    let report = run_experiment(config)?;
    write_report(&report, config, &config.out)
}
