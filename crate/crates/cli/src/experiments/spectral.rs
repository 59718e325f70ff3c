use std::f64::consts::{PI, TAU};

use knlab::spectral::{c_lambda, window_gram_norm, GramNorm, WindowSpectrum};
use knlab::tubes::Tube;
use rayon::prelude::*;

use super::{torus_axis, try_fit};
use crate::config::ExperimentConfig;
use crate::fit::Transform;
use crate::svg::Plot;
use crate::table::Table;
use crate::{Check, Report, Result};

/// Eigenvalues may undershoot 0 or overshoot 1 by rounding only.
const SPECTRUM_SLACK: f64 = 1e-9;

pub fn gram_window(config: &ExperimentConfig) -> Result<Report> {
    let mut table = Table::new(&[
        "lambda",
        "tube",
        "length",
        "halfwidth",
        "dimension",
        "norm_sq",
        "eigenvalue_min",
        "eigenvalue_max",
        "lanczos_estimate",
        "reference",
    ]);
    // (λ, tube label, length, halfwidth); the last tube per λ covers the torus.
    let mut jobs = Vec::new();
    for &lambda in &config.lambda_grid {
        for &length in &config.lengths {
            jobs.push((lambda, format!("L={length:.6}"), length, config.multiplier * lambda.powf(-0.5)));
        }
        jobs.push((lambda, "full".to_owned(), TAU, PI));
    }
    let results: Vec<GramNorm> = jobs
        .par_iter()
        .map(|(lambda, _, length, eps)| {
            let spectrum = WindowSpectrum::default_torus(*lambda)?;
            Ok(window_gram_norm(&spectrum, &Tube::new(torus_axis(*length)?, *eps))?)
        })
        .collect::<Result<_>>()?;

    let (mut fits, mut notes) = (Vec::new(), Vec::new());
    let mut plot = Plot::new("Window projector norm squared into a tube", "lambda", "norm^2", true, true);
    let mut in_unit = true;
    let mut full_ok = true;
    let mut krylov_ok = true;
    for ((lambda, label, length, eps), g) in jobs.iter().zip(&results) {
        in_unit &= g.eigenvalue_min >= -SPECTRUM_SLACK && g.eigenvalue_max <= 1.0 + SPECTRUM_SLACK;
        krylov_ok &= (g.lanczos_estimate - g.eigenvalue_max).abs() <= 1e-9 * g.eigenvalue_max.max(1e-300);
        if label == "full" {
            full_ok &= (g.norm - 1.0).abs() <= 1e-9;
        }
        table.push(vec![
            (*lambda).into(),
            label.as_str().into(),
            (*length).into(),
            (*eps).into(),
            g.dimension.into(),
            g.norm_sq().into(),
            g.eigenvalue_min.into(),
            g.eigenvalue_max.into(),
            g.lanczos_estimate.into(),
            c_lambda(*lambda).into(),
        ]);
    }
    for &length in &config.lengths {
        let series: Vec<(f64, f64)> = jobs
            .iter()
            .zip(&results)
            .filter(|((_, label, l, _), _)| label != "full" && *l == length)
            .map(|((lambda, ..), g)| (*lambda, g.norm_sq()))
            .collect();
        let name = format!("L={length:.6}");
        try_fit(&mut fits, &mut notes, &format!("norm_sq {name} vs log log lambda"), &series, Transform::LogLogLambda);
        try_fit(&mut fits, &mut notes, &format!("norm_sq {name} vs log lambda"), &series, Transform::LogLambda);
        plot.add(&name, series);
    }
    let reference = config.lambda_grid.iter().map(|&l| (l, c_lambda(l))).collect();
    plot.add("(log lambda)^-1/2", reference);
    let mut checks = vec![
        Check::new("gram eigenvalues in [0, 1]", in_unit, format!("slack {SPECTRUM_SLACK}")),
        Check::new("full-manifold tube has norm 1", full_ok, "tolerance 1e-9"),
        Check::new("lanczos iteration agrees with the eigensolver", krylov_ok, "relative tolerance 1e-9"),
    ];
    for &length in &config.lengths {
        let norms: Vec<f64> = jobs
            .iter()
            .zip(&results)
            .filter(|((_, label, l, _), _)| label != "full" && *l == length)
            .map(|(_, g)| g.norm)
            .collect();
        checks.push(Check::new(
            format!("norm non-increasing along the grid at L={length:.6}"),
            norms.windows(2).all(|w| w[1] <= w[0]),
            format!("{norms:.4?}"),
        ));
    }
    notes.push("window [lambda, lambda + 1/log lambda]; tubes along x2 = 0 from the origin".into());
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}
