use std::f64::consts::{FRAC_PI_2, TAU};

use knlab::eigenbasis::EigenMode;
use knlab::spectral::{c_lambda, window_gram_norm, WindowSpectrum};
use knlab::tubes::{kn_norm, restriction_mass, tube_mass, GeodesicFamily, Tube};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{equator, mode_for, model, torus_axis, try_fit};
use crate::config::{ExperimentConfig, Family, Model};
use crate::fit::Transform;
use crate::svg::Plot;
use crate::table::Table;
use crate::{Check, CliError, Report, Result};

fn modes(config: &ExperimentConfig, family: Family) -> Result<Vec<(f64, EigenMode)>> {
    if family.model() != config.model {
        return Err(CliError::Config(format!("family {family:?} does not live on the {:?}", config.model)));
    }
    // One generator per family, consumed in grid order.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    config.lambda_grid.iter().map(|&v| Ok((v, mode_for(family, v, &mut rng)?))).collect()
}

/// Largest window-projector norm² over tubes of `length` in the given directions.
fn max_gram(lambda: f64, length: f64, multiplier: f64, angles: &[f64]) -> Result<f64> {
    let spectrum = WindowSpectrum::default_torus(lambda)?;
    let torus = model(Model::Torus, None);
    let norms: Vec<f64> = angles
        .par_iter()
        .map(|&a| {
            let seg = torus.segment_at_angle(knlab::manifolds::Point::new(0.0, 0.0), a, length)?;
            Ok(window_gram_norm(&spectrum, &Tube::kn(seg, lambda, multiplier))?.norm_sq())
        })
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().fold(0.0, f64::max))
}

pub fn kn_scaling(config: &ExperimentConfig) -> Result<Report> {
    let length = config.lengths.first().copied();
    let m = model(config.model, length);
    let mut table = Table::new(&[
        "family",
        "lambda",
        "frequency",
        "kn_sq",
        "argmax_segment",
        "family_size",
        "gram_norm_sq",
        "reference",
        "kn_sq_over_reference",
    ]);
    let mut plot = Plot::new("Kakeya-Nikodym norm squared", "lambda", "kn^2", true, true);
    let (mut fits, mut checks, mut notes) = (Vec::new(), Vec::new(), Vec::new());
    let mut angles: Vec<f64> = (0..config.directions).map(|j| TAU * j as f64 / config.directions as f64).collect();
    for extra in [0.0, FRAC_PI_2] {
        if !angles.iter().any(|a| (a - extra).abs() < 1e-15) {
            angles.push(extra);
        }
    }
    for &family in &config.families {
        let mut series = Vec::new();
        let mut bounded = true;
        for (value, mode) in modes(config, family)? {
            let mut fam = GeodesicFamily::grid(&m, config.base_points, config.directions)?;
            fam.segments.extend(GeodesicFamily::mode_adapted(&m, &mode)?.segments);
            let kn = kn_norm(&mode, &fam, config.resolution, config.multiplier)?;
            let lambda = mode.frequency();
            let gram = if family == Family::Window {
                max_gram(lambda, m.segment_length(), config.multiplier, &angles)?
            } else {
                f64::NAN
            };
            if family == Family::Window {
                bounded &= kn.max_mass <= gram * (1.0 + 1e-9);
            }
            let reference = c_lambda(lambda);
            table.push(vec![
                format!("{family:?}").into(),
                value.into(),
                lambda.into(),
                kn.max_mass.into(),
                kn.argmax.into(),
                fam.len().into(),
                gram.into(),
                reference.into(),
                (kn.max_mass / reference).into(),
            ]);
            series.push((lambda, kn.max_mass));
        }
        let name = format!("{family:?}");
        try_fit(&mut fits, &mut notes, &format!("kn_sq {name} vs log lambda"), &series, Transform::LogLambda);
        try_fit(&mut fits, &mut notes, &format!("kn_sq {name} vs log log lambda"), &series, Transform::LogLogLambda);
        checks.push(Check::new(
            format!("kn_sq {name} at most 1"),
            series.iter().all(|&(_, v)| v <= 1.0 + 1e-9),
            "tube mass never exceeds the total mass",
        ));
        if family == Family::Window {
            checks.push(Check::new(
                "kn_sq Window bounded by window projector norm",
                bounded,
                "sup of tube masses of a unit window function is at most the Gram norm squared",
            ));
        }
        plot.add(&name, series);
    }
    let reference: Vec<(f64, f64)> = table.values("frequency", |_| true).into_iter().map(|l| (l, c_lambda(l))).collect();
    plot.add("(log lambda)^-1/2", reference);
    notes.push("Family maxima are lower bounds for the supremum over all segments.".into());
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}

pub fn restriction_scaling(config: &ExperimentConfig) -> Result<Report> {
    let m = model(config.model, config.lengths.first().copied().filter(|_| config.model == Model::Torus));
    let mut table = Table::new(&["family", "index", "frequency", "restriction", "argmax_segment", "reference", "normalized"]);
    let mut plot = Plot::new("Geodesic restriction mass over sqrt(lambda)", "lambda", "mass / lambda^1/2", true, true);
    let (mut fits, mut checks, mut notes) = (Vec::new(), Vec::new(), Vec::new());
    for &family in &config.families {
        let mut series = Vec::new();
        for (value, mode) in modes(config, family)? {
            let fam = GeodesicFamily::mode_adapted(&m, &mode)?;
            let masses: Vec<f64> = fam
                .segments
                .par_iter()
                .map(|s| restriction_mass(&mode, s, config.resolution))
                .collect::<knlab::Result<_>>()?;
            let (argmax, best) = masses
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            let lambda = mode.frequency();
            let reference = lambda.sqrt();
            table.push(vec![
                format!("{family:?}").into(),
                value.into(),
                lambda.into(),
                best.into(),
                argmax.into(),
                reference.into(),
                (best / reference).into(),
            ]);
            series.push((lambda, best / reference));
        }
        let name = format!("{family:?}");
        try_fit(&mut fits, &mut notes, &format!("normalized restriction {name} vs log lambda"), &series, Transform::LogLambda);
        let (lo, hi) = series.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &(_, v)| (a.min(v), b.max(v)));
        checks.push(Check::new(
            format!("restriction {name} within a uniform multiple of sqrt(lambda)"),
            hi <= 10.0 * lo,
            format!("max/min of mass/lambda^1/2 = {:.4}", hi / lo),
        ));
        plot.add(&name, series);
    }
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}

pub fn saturation_contrast(config: &ExperimentConfig) -> Result<Report> {
    let length = config.lengths.first().copied().unwrap_or(std::f64::consts::PI / 10.0);
    let mut table = Table::new(&["degree", "frequency", "hw_fraction", "window_dimension", "gram_norm_sq", "reference"]);
    let (mut fits, mut checks, mut notes) = (Vec::new(), Vec::new(), Vec::new());
    let rows: Vec<(f64, f64, f64, usize, f64)> = config
        .lambda_grid
        .par_iter()
        .map(|&k| {
            let e = EigenMode::highest_weight(super::index(k, Family::HighestWeight)? as u32)?;
            let eps = config.multiplier * k.powf(-0.5);
            let fraction = tube_mass(&e, &Tube::new(equator(TAU)?, eps), config.resolution)?;
            let spectrum = WindowSpectrum::default_torus(k)?;
            let gram = window_gram_norm(&spectrum, &Tube::kn(torus_axis(length)?, k, config.multiplier))?;
            Ok((k, e.frequency(), fraction, spectrum.dimension(), gram.norm_sq()))
        })
        .collect::<Result<_>>()?;
    for &(k, freq, fraction, dim, gram) in &rows {
        table.push(vec![k.into(), freq.into(), fraction.into(), dim.into(), gram.into(), c_lambda(k).into()]);
    }
    let fractions: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.2)).collect();
    let grams: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.4)).collect();
    try_fit(&mut fits, &mut notes, "hw_fraction vs log lambda", &fractions, Transform::LogLambda);
    try_fit(&mut fits, &mut notes, "gram_norm_sq vs log log lambda", &grams, Transform::LogLogLambda);
    try_fit(&mut fits, &mut notes, "gram_norm_sq vs log lambda", &grams, Transform::LogLambda);
    checks.push(Check::new(
        "hw_fraction bounded below by 0.3",
        fractions.iter().all(|&(_, f)| f >= 0.3),
        format!("min = {:.6}", fractions.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)),
    ));
    if let [.., a, b] = fractions.as_slice() {
        checks.push(Check::new(
            "hw_fraction converges",
            (b.1 - a.1).abs() < 0.02,
            format!("|f({}) - f({})| = {:.3e}", b.0, a.0, (b.1 - a.1).abs()),
        ));
    }
    checks.push(Check::new(
        "gram_norm_sq decreases",
        grams.windows(2).all(|w| w[1].1 < w[0].1),
        "torus window projector norm squared over the same frequencies",
    ));
    let mut plot = Plot::new("Saturation contrast", "lambda", "tube mass", true, true);
    plot.add("sphere highest weight, equatorial band", fractions);
    plot.add("torus window projector norm^2", grams);
    notes.push(format!("torus tubes have length {length}; sphere bands cover the full equator"));
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}
