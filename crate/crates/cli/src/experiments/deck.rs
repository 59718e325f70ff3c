use knlab::deckgroup::{
    annulus_counts, ball_counts, bolza_generators, enumerate_with, octagon_radii, AnnulusTable, DomainSample,
    EnumerationOptions, DEDUP_TOLERANCE,
};
use knlab::manifolds::{GeodesicSegment, ManifoldModel};

use super::try_fit;
use crate::config::ExperimentConfig;
use crate::fit::Transform;
use crate::svg::Plot;
use crate::table::Table;
use crate::{Check, Report, Result};

/// Depth bound for tube-restricted enumeration; the displacement cap is the
/// binding constraint there.
const TUBE_WORD_LENGTH: usize = 200;

fn imaginary_axis() -> Result<GeodesicSegment> {
    let h = ManifoldModel::hyperbolic_plane();
    Ok(h.segment(h.point(0.0, 1.0)?, [0.0, 1.0], 1.0)?)
}

/// Whether `tube_count(k)/2^k` stays within `4×` its value at the smallest
/// nonempty `k`, over the certified rows.
fn linear_growth(table: &AnnulusTable) -> (bool, f64) {
    let rows: Vec<_> = table.rows.iter().filter(|r| r.tube_certified && r.tube_count > 0).collect();
    let Some(first) = rows.first() else { return (false, f64::NAN) };
    let base = first.tube_count as f64 / 2f64.powi(first.k as i32);
    let worst = rows.iter().map(|r| r.tube_count as f64 / 2f64.powi(r.k as i32) / base).fold(0.0, f64::max);
    (worst <= 4.0, worst)
}

pub fn deck_counts(config: &ExperimentConfig) -> Result<Report> {
    let gens = bolza_generators();
    let (inradius, circumradius) = octagon_radii(&gens);
    let mesh = DomainSample::octagon(inradius, circumradius, 256, 16).mesh;
    let axis = imaginary_axis()?;
    let ball = enumerate_with(
        &gens,
        &EnumerationOptions {
            max_word_length: config.word_length,
            displacement_cap: Some(config.displacement_cap),
            axis_tube: None,
            tolerance: DEDUP_TOLERANCE,
        },
    )?;
    let certified = ball.certified_radius();
    let mut table = Table::new(&["kind", "tube_radius", "x", "count", "tube_count", "per_2k", "certified"]);
    let (mut fits, mut checks, mut notes) = (Vec::new(), Vec::new(), Vec::new());

    let radii: Vec<f64> = (7..).map(|i| 0.5 * i as f64).take_while(|&r| r <= certified).collect();
    let balls = ball_counts(&ball, &radii);
    for &(r, n) in &balls {
        table.push(vec!["ball".into(), f64::NAN.into(), r.into(), n.into(), f64::NAN.into(), f64::NAN.into(), true.into()]);
    }
    let series: Vec<(f64, f64)> = balls.iter().map(|&(r, n)| (r, n as f64)).collect();
    try_fit(&mut fits, &mut notes, "ball count vs radius (exponential)", &series, Transform::Linear);
    if let Some(f) = fits.last().map(|(_, f)| *f) {
        checks.push(Check::new(
            "ball counts grow exponentially",
            f.slope > 0.0 && f.r_squared > 0.9,
            format!("rate {:.4}, r2 {:.4}", f.slope, f.r_squared),
        ));
    }
    let all = annulus_counts(&ball, &axis, 0.0, config.k_max);
    for row in &all.rows {
        table.push(vec![
            "annulus".into(),
            f64::NAN.into(),
            row.k.into(),
            row.all_count.into(),
            f64::NAN.into(),
            (row.all_count as f64 / 2f64.powi(row.k as i32)).into(),
            row.all_certified.into(),
        ]);
    }

    let mut plot = Plot::new("Deck transformations per dyadic annulus", "2^k", "count", true, true);
    plot.add(
        "all elements",
        all.rows.iter().filter(|r| r.all_certified && r.all_count > 0).map(|r| (2f64.powi(r.k as i32), r.all_count as f64)).collect(),
    );
    let mut tube_radii: Vec<(f64, bool)> = config.tube_radii.iter().map(|&r| (r, true)).collect();
    if config.include_diameter {
        tube_radii.push((ball.diam_d(), false));
    }
    let cap = 2f64.powi(config.k_max as i32 + 1) + circumradius + 1.0;
    for (radius, asserted) in tube_radii {
        let e = enumerate_with(
            &gens,
            &EnumerationOptions {
                max_word_length: TUBE_WORD_LENGTH,
                displacement_cap: Some(cap),
                axis_tube: Some(radius + mesh + 1e-6),
                tolerance: DEDUP_TOLERANCE,
            },
        )?;
        let t = annulus_counts(&e, &axis, radius, config.k_max);
        for row in &t.rows {
            table.push(vec![
                "tube".into(),
                radius.into(),
                row.k.into(),
                f64::NAN.into(),
                row.tube_count.into(),
                (row.tube_count as f64 / 2f64.powi(row.k as i32)).into(),
                row.tube_certified.into(),
            ]);
        }
        let series: Vec<(f64, f64)> = t
            .rows
            .iter()
            .filter(|r| r.tube_certified && r.tube_count > 0)
            .map(|r| (2f64.powi(r.k as i32), r.tube_count as f64))
            .collect();
        let label = format!("R = {radius:.4}");
        try_fit(&mut fits, &mut notes, &format!("tube count {label} vs log 2^k"), &series, Transform::LogLambda);
        let (ok, worst) = linear_growth(&t);
        let suffix = if asserted { "" } else { " (diameter, informative)" };
        checks.push(Check::new(
            format!("tube counts O(2^k) at {label}{suffix}"),
            ok,
            format!("max ratio to the first nonempty row {worst:.3}"),
        ));
        plot.add(&format!("meeting T_R, {label}"), series);
    }
    notes.push(format!(
        "ball enumeration: word length {}, cap {}, {} elements, certified radius {certified:.4}",
        config.word_length,
        config.displacement_cap,
        ball.len()
    ));
    notes.push(format!("diam D = {:.6}, sampling mesh {mesh:.4}", ball.diam_d()));
    Ok(Report { experiment: config.experiment, table, plot, fits, checks, notes })
}
