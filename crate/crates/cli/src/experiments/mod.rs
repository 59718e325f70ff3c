//! The named studies. Each returns a [`Report`]; grid points are computed in
//! parallel and collected in grid order so that output does not depend on
//! the number of worker threads.

mod deck;
mod geometry;
mod nodal;
mod spectral;
mod tubes;

use knlab::eigenbasis::{BasisKey, EigenMode};
use knlab::manifolds::{ManifoldModel, Point};
use knlab::spectral::WindowSpectrum;
use knlab::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Experiment, ExperimentConfig, Family, Model};
use crate::fit::{fit_scaling, ScalingFit, Transform};
use crate::{CliError, Report, Result};

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    match config.experiment {
        Experiment::KnScaling => tubes::kn_scaling(config),
        Experiment::RestrictionScaling => tubes::restriction_scaling(config),
        Experiment::SaturationContrast => tubes::saturation_contrast(config),
        Experiment::GramWindow => spectral::gram_window(config),
        Experiment::ToponogovCone => geometry::toponogov_cone(config),
        Experiment::EscapeTimes => geometry::escape_times(config),
        Experiment::DeckCounts => deck::deck_counts(config),
        Experiment::NodalSuite => nodal::nodal_suite(config),
    }
}

fn model(m: Model, segment_length: Option<f64>) -> ManifoldModel {
    let base = match m {
        Model::Sphere => ManifoldModel::sphere(),
        Model::Torus => ManifoldModel::flat_torus(),
    };
    match segment_length {
        Some(l) => base.with_segment_length(l),
        None => base,
    }
}

fn index(value: f64, family: Family) -> Result<i64> {
    if value.fract() != 0.0 {
        return Err(CliError::Config(format!("{family:?} needs integer indices, got {value}")));
    }
    Ok(value as i64)
}

/// Unit vector in the window `[λ, λ + 1/log λ]` with coefficients uniform in
/// the unit square before normalization.
fn random_window_mode(lambda: f64, rng: &mut ChaCha8Rng) -> Result<EigenMode> {
    let w = WindowSpectrum::default_torus(lambda)?;
    let raw: Vec<Complex64> = w
        .lattice
        .iter()
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let terms = w.lattice.iter().zip(&raw).map(|(&k, z)| (BasisKey::Torus { k }, z / norm)).collect();
    Ok(EigenMode::from_coefficients(terms, lambda)?)
}

/// The mode of `family` at grid value `value`. Window modes draw from `rng`.
fn mode_for(family: Family, value: f64, rng: &mut ChaCha8Rng) -> Result<EigenMode> {
    Ok(match family {
        Family::Window => return random_window_mode(value, rng),
        Family::PlaneWave => EigenMode::plane_wave([index(value, family)?, 0])?,
        Family::Sine => EigenMode::torus_sine(index(value, family)?)?,
        Family::HighestWeight => EigenMode::highest_weight(index(value, family)? as u32)?,
        Family::Zonal => EigenMode::zonal(index(value, family)? as u32)?,
    })
}

fn equator(length: f64) -> Result<knlab::manifolds::GeodesicSegment> {
    Ok(ManifoldModel::sphere().segment(Point::new(std::f64::consts::FRAC_PI_2, 0.0), [0.0, 1.0], length)?)
}

fn torus_axis(length: f64) -> Result<knlab::manifolds::GeodesicSegment> {
    Ok(ManifoldModel::flat_torus().segment(Point::new(0.0, 0.0), [1.0, 0.0], length)?)
}

/// Fits when the series allows it; otherwise records why not.
fn try_fit(
    fits: &mut Vec<(String, ScalingFit)>,
    notes: &mut Vec<String>,
    name: &str,
    series: &[(f64, f64)],
    transform: Transform,
) {
    match fit_scaling(series, transform) {
        Ok(f) => fits.push((name.to_owned(), f)),
        Err(e) => notes.push(format!("no fit for {name}: {e}")),
    }
}
