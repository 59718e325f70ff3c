use std::f64::consts::PI;

use knlab::eigenbasis::EigenMode;
use knlab::norms_nodal::{nodal_length, NodalReport};
use rayon::prelude::*;

use super::{index, try_fit};
use crate::config::{ExperimentConfig, Family};
use crate::fit::Transform;
use crate::svg::Plot;
use crate::table::Table;
use crate::{Check, CliError, Report, Result};

/// Grid values for each family: torus sines use `lambda_grid`, sphere
/// families use `index_grid`.
fn grid(config: &ExperimentConfig, family: Family) -> &[f64] {
    match family.model() {
        crate::config::Model::Torus => &config.lambda_grid,
        crate::config::Model::Sphere => &config.index_grid,
    }
}

pub fn nodal_suite(config: &ExperimentConfig) -> Result<Report> {
    let mut jobs = Vec::new();
    for &family in &config.families {
        for &v in grid(config, family) {
            let mode = match family {
                Family::Sine => EigenMode::torus_sine(index(v, family)?)?,
                Family::Zonal => EigenMode::zonal(index(v, family)? as u32)?,
                _ => return Err(CliError::Config(format!("nodal sets need a real family, got {family:?}"))),
            };
            jobs.push((family, v, mode));
        }
    }
    let reports: Vec<NodalReport> =
        jobs.par_iter().map(|(_, _, m)| nodal_length(m, config.resolution)).collect::<knlab::Result<_>>()?;
    let mut table = Table::new(&[
        "family",
        "index",
        "frequency",
        "nodal_length",
        "l1",
        "hezari_sogge_ratio",
        "colding_minicozzi_ratio",
        "sign_change_fraction",
        "exact_length",
    ]);
    let (mut fits, mut checks, mut notes) = (Vec::new(), Vec::new(), Vec::new());
    let mut plot = Plot::new("Nodal length", "lambda", "|Z| / (lambda |e|_1^2)", true, false);
    for &family in &config.families {
        let rows: Vec<(f64, &NodalReport)> =
            jobs.iter().zip(&reports).filter(|(j, _)| j.0 == family).map(|(j, r)| (j.1, r)).collect();
        for &(v, r) in &rows {
            let exact = if family == Family::Sine { 4.0 * PI * v } else { f64::NAN };
            table.push(vec![
                format!("{family:?}").into(),
                v.into(),
                r.lambda.into(),
                r.length.into(),
                r.l1.into(),
                r.hezari_sogge_ratio().into(),
                r.colding_minicozzi_ratio().into(),
                r.sign_change_fraction.into(),
                exact.into(),
            ]);
        }
        let name = format!("{family:?}");
        let ratios: Vec<(f64, f64)> = rows.iter().map(|(_, r)| (r.lambda, r.hezari_sogge_ratio())).collect();
        let lengths: Vec<(f64, f64)> = rows.iter().map(|(_, r)| (r.lambda, r.length)).collect();
        try_fit(&mut fits, &mut notes, &format!("nodal length {name} vs log lambda"), &lengths, Transform::LogLambda);
        try_fit(&mut fits, &mut notes, &format!("hezari-sogge ratio {name} vs log log lambda"), &ratios, Transform::LogLogLambda);
        if let Some(&(_, floor)) = ratios.first() {
            checks.push(Check::new(
                format!("hezari-sogge ratio {name} bounded below"),
                floor > 0.0 && ratios.iter().all(|&(_, q)| q >= 0.9 * floor),
                format!("floor 0.9 x {floor:.6} from the smallest frequency"),
            ));
        }
        let cm: Vec<f64> = rows.iter().map(|(_, r)| r.colding_minicozzi_ratio()).collect();
        if let Some(&first) = cm.first() {
            checks.push(Check::new(
                format!("colding-minicozzi ratio {name} bounded below"),
                cm.iter().all(|&q| q >= 0.9 * first),
                format!("first value {first:.6}"),
            ));
        }
        if family == Family::Sine {
            let worst = rows.iter().map(|(v, r)| (r.length / (4.0 * PI * v) - 1.0).abs()).fold(0.0, f64::max);
            checks.push(Check::new("sine nodal length within 1% of 4 pi k", worst <= 0.01, format!("max relative error {worst:.3e}")));
        }
        plot.add(&name, ratios);
    }
    notes.push("log-factor trends are reported as fits only".into());
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}
