use knlab::manifolds::ManifoldModel;
use knlab::toponogov::{cone_half_angle, verify_cone_containment, ConeSpec, ContainmentSampling};
use knlab::tubes::{escape_time, Tube};
use rayon::prelude::*;

use super::try_fit;
use crate::config::ExperimentConfig;
use crate::fit::Transform;
use crate::svg::Plot;
use crate::table::Table;
use crate::{Check, CliError, Report, Result};

/// Curvature used for the Euclidean-limit column.
const KAPPA_LIMIT: f64 = 1e-6;

fn cone_model(kappa: f64) -> Result<ManifoldModel> {
    if kappa == 1.0 {
        Ok(ManifoldModel::hyperbolic_plane())
    } else if kappa == 0.0 {
        Ok(ManifoldModel::euclidean_plane())
    } else {
        Err(CliError::Config(format!("cone containment is sampled for kappa 0 or 1, got {kappa}")))
    }
}

pub fn toponogov_cone(config: &ExperimentConfig) -> Result<Report> {
    let model = cone_model(config.kappa)?;
    let axis = model.segment(model.point(0.0, 1.0)?, [0.0, 1.0], 1.0)?;
    let mut jobs = Vec::new();
    for &t in &config.t_grid {
        for &r in &config.r_grid {
            jobs.push((t, r));
        }
    }
    let sampling = ContainmentSampling::default();
    let rows: Vec<_> = jobs
        .par_iter()
        .map(|&(t, r)| {
            let cone = ConeSpec::new(t, r, config.kappa)?;
            let report = verify_cone_containment(&model, &axis, &cone, &sampling)?;
            let inflated = verify_cone_containment(&model, &axis, &cone.inflated(config.inflation), &sampling)?;
            let limit = cone_half_angle(t, r, KAPPA_LIMIT)?;
            Ok((t, r, cone.theta, limit, report, inflated))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "t",
        "r",
        "kappa",
        "theta",
        "theta_kappa_1e-6",
        "theta_flat",
        "rays",
        "violations",
        "max_excess",
        "extremal_excess",
        "inflated_violations",
    ]);
    let mut plot = Plot::new("Cone aperture", "T", "theta_T", false, true);
    let mut contained = true;
    let mut sharp = true;
    for &(t, r, theta, limit, report, inflated) in &rows {
        contained &= report.violation_count == 0;
        sharp &= inflated.violation_count >= 1;
        table.push(vec![
            t.into(),
            r.into(),
            config.kappa.into(),
            theta.into(),
            limit.into(),
            (2.0 * (0.5 * r / t).asin()).into(),
            report.rays.into(),
            report.violation_count.into(),
            report.max_excess.into(),
            report.extremal_excess.into(),
            inflated.violation_count.into(),
        ]);
    }
    for &r in &config.r_grid {
        let series = rows.iter().filter(|row| row.1 == r).map(|row| (row.0, row.2)).collect();
        plot.add(&format!("R = {r}"), series);
    }
    let checks = vec![
        Check::new("cone stays in the tube", contained, format!("slack {}", knlab::toponogov::VIOLATION_SLACK)),
        Check::new(
            "inflated cone leaves the tube",
            sharp,
            format!("aperture scaled by {}", config.inflation),
        ),
    ];
    let notes = vec![format!(
        "{} vertices x {} angles x 4 orientations, {} steps per ray",
        sampling.vertices.len(),
        sampling.angles,
        sampling.steps
    )];
    Ok(Report { experiment: config.experiment, table, plot, fits: Vec::new(), checks, notes })
}

pub fn escape_times(config: &ExperimentConfig) -> Result<Report> {
    let models = [("flat", ManifoldModel::euclidean_plane()), ("hyperbolic", ManifoldModel::hyperbolic_plane())];
    let mut jobs = Vec::new();
    for (mi, _) in models.iter().enumerate() {
        for &lambda in &config.lambda_grid {
            for &delta in &config.deltas {
                jobs.push((mi, lambda, delta));
            }
        }
    }
    let rows: Vec<_> = jobs
        .par_iter()
        .map(|&(mi, lambda, delta)| {
            let (name, model) = &models[mi];
            let theta = lambda.powf(-0.5 + delta);
            let eps = config.multiplier * lambda.powf(-0.5);
            let r = 1.0 / (theta * lambda);
            let axis = model.segment(model.point(0.0, 1.0)?, [0.0, 1.0], 1.0)?;
            let t = escape_time(model, &Tube::new(axis, eps), theta, r)?.time().unwrap_or(f64::INFINITY);
            let closed = if *name == "flat" { (eps + r) / theta.sin() } else { ((eps + r).sinh() / theta.sin()).asinh() };
            Ok((*name, lambda, delta, theta, eps, r, t, closed))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "model",
        "lambda",
        "delta",
        "theta",
        "halfwidth",
        "ball_radius",
        "escape_time",
        "closed_form",
        "lower_bound",
        "relative_error",
    ]);
    let mut flat_close = true;
    let mut lower_ok = true;
    let mut plot = Plot::new("Escape time", "lambda", "escape time", true, true);
    for &(name, lambda, delta, theta, eps, r, t, closed) in &rows {
        let lower = lambda.powf(-0.5) / theta;
        let rel = (t - closed).abs() / closed;
        if name == "flat" {
            flat_close &= rel <= 0.1;
            lower_ok &= t >= 0.9 * lower;
        }
        table.push(vec![
            name.into(),
            lambda.into(),
            delta.into(),
            theta.into(),
            eps.into(),
            r.into(),
            t.into(),
            closed.into(),
            lower.into(),
            rel.into(),
        ]);
    }
    let (mut fits, mut notes) = (Vec::new(), Vec::new());
    for (name, _) in &models {
        for &delta in &config.deltas {
            let series: Vec<(f64, f64)> =
                rows.iter().filter(|row| row.0 == *name && row.2 == delta).map(|row| (row.1, row.6)).collect();
            try_fit(&mut fits, &mut notes, &format!("escape {name} delta={delta} vs log lambda"), &series, Transform::LogLambda);
            plot.add(&format!("{name}, delta = {delta}"), series);
        }
    }
    let checks = vec![
        Check::new("flat escape matches (eps + r)/sin theta", flat_close, "within 10%"),
        Check::new("flat escape at least 0.9 lambda^-1/2 / theta", lower_ok, "theta = lambda^(-1/2 + delta)"),
    ];
    notes.push("hyperbolic closed form asinh(sinh(eps + r)/sin theta) is reported, not asserted".into());
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}
