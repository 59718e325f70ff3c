//! Lᵖ norms on the global quadrature grids, the Hölder chain that turns an
//! Lᵖ bound into an L¹ lower bound, and nodal-set lengths by marching squares.

mod contour;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

pub use contour::{contour_length, ContourGrid, ContourLength};

use crate::eigenbasis::EigenMode;
use crate::error::{invalid, Error, Result};
use crate::manifolds::ModelKind;
use crate::quadrature::{SphereGrid, TorusGrid};
use crate::tubes::MIN_RESOLUTION;

/// Smallest grid density (points per wavelength) accepted for nodal sets.
pub const MIN_NODAL_RESOLUTION: f64 = 20.0;

/// Largest fraction of grid cells allowed to contain a sign change.
pub const MAX_SIGN_CHANGE_FRACTION: f64 = 0.3;

/// Offset (in cells) of the torus nodal grid, chosen irrational so that grid
/// nodes avoid rational nodal lines.
const TORUS_NODAL_OFFSET: f64 = 0.381_966_011_250_105;

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub mode_id: String,
    pub lambda: f64,
    pub p: f64,
    pub value: f64,
    /// `λ^{(1/2)(1/2 − 1/p)}`, the universal two-dimensional growth rate.
    pub reference: f64,
    pub resolution: f64,
}

/// `∫ g(e(x)) dV` with the model's global product rule. Rows are summed
/// in a fixed order, so results do not depend on the thread count.
pub fn global_integral(mode: &EigenMode, resolution: f64, g: impl Fn(Complex64) -> f64 + Sync) -> Result<f64> {
    if !(resolution >= MIN_RESOLUTION) {
        return Err(invalid(format!("resolution {resolution} below {MIN_RESOLUTION}")));
    }
    let lambda = mode.frequency();
    let degree = mode.max_degree() as usize;
    match mode.model() {
        ModelKind::Sphere2 => {
            let grid = SphereGrid::for_degree(degree, lambda, resolution);
            let rows: Vec<f64> = grid
                .rings
                .par_iter()
                .map(|&(colat, w)| {
                    let mut row = vec![Complex64::new(0.0, 0.0); grid.longitudes.len()];
                    mode.evaluate_ring(colat, &grid.longitudes, &mut row);
                    w * row.iter().map(|&v| g(v)).sum::<f64>()
                })
                .collect();
            Ok(rows.iter().sum::<f64>() * grid.longitude_weight)
        }
        _ => {
            let n = (4 * degree + 16).max((resolution * lambda).ceil() as usize);
            let grid = TorusGrid::new(n);
            let xs: Vec<f64> = (0..n).map(|j| grid.coordinate(j)).collect();
            let rows: Vec<f64> = xs
                .par_iter()
                .map(|&x2| {
                    let mut row = vec![Complex64::new(0.0, 0.0); n];
                    mode.evaluate_ring(x2, &xs, &mut row);
                    row.iter().map(|&v| g(v)).sum::<f64>()
                })
                .collect();
            Ok(rows.iter().sum::<f64>() * grid.cell_area())
        }
    }
}

/// `‖e‖_p` for `1 ≤ p < ∞`.
pub fn lp_norm(mode: &EigenMode, p: f64, resolution: f64) -> Result<NormReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("exponent p = {p} outside [1, ∞)")));
    }
    let integral = global_integral(mode, resolution, |v| v.norm().powf(p))?;
    let lambda = mode.frequency();
    Ok(NormReport {
        mode_id: mode.to_string(),
        lambda,
        p,
        value: integral.powf(1.0 / p),
        reference: lambda.powf(0.5 * (0.5 - 1.0 / p)),
        resolution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderRecord {
    /// `‖e‖₁^{(p−2)/(2(p−1))} ‖e‖_p^{p/(2(p−1))}`, which is at least `‖e‖₂ = 1`.
    pub product: f64,
    pub holds: bool,
    /// `λ^{-1/4} (λ^{-(1/2)(1/2−1/p)} ‖e‖_p)^{-p/(p−2)}`, a lower bound for `‖e‖₁`.
    pub derived_lower_bound: f64,
    pub l1: f64,
}

/// Checks `1 ≤ ‖e‖₁^{(p−2)/(2(p−1))} ‖e‖_p^{p/(2(p−1))}` (relative slack `1e-6`).
pub fn holder_chain(l1: &NormReport, lp: &NormReport) -> Result<HolderRecord> {
    if l1.p != 1.0 || !(lp.p > 2.0) {
        return Err(Error::Inconsistent(format!("need an L¹ and an Lᵖ report with p > 2, got p = {} and {}", l1.p, lp.p)));
    }
    if l1.mode_id != lp.mode_id || l1.resolution != lp.resolution {
        return Err(Error::Inconsistent("norms come from different modes or resolutions".into()));
    }
    let p = lp.p;
    let product = l1.value.powf((p - 2.0) / (2.0 * (p - 1.0))) * lp.value.powf(p / (2.0 * (p - 1.0)));
    let lambda = lp.lambda;
    let derived_lower_bound =
        lambda.powf(-0.25) * (lambda.powf(-0.5 * (0.5 - 1.0 / p)) * lp.value).powf(-p / (p - 2.0));
    Ok(HolderRecord {
        product,
        holds: 1.0 <= product * (1.0 + 1e-6),
        derived_lower_bound,
        l1: l1.value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodalReport {
    pub mode_id: String,
    pub lambda: f64,
    /// Grid points per wavelength.
    pub resolution: f64,
    pub length: f64,
    pub l1: f64,
    pub sign_change_fraction: f64,
}

impl NodalReport {
    /// `|Z| / (λ ‖e‖₁²)`.
    pub fn hezari_sogge_ratio(&self) -> f64 {
        hezari_sogge_ratio(self)
    }

    /// `|Z| λ^{-1/2}`.
    pub fn colding_minicozzi_ratio(&self) -> f64 {
        self.length / self.lambda.sqrt()
    }
}

/// `|Z| / (λ ‖e‖₁²)`.
pub fn hezari_sogge_ratio(report: &NodalReport) -> f64 {
    report.length / (report.lambda * report.l1 * report.l1)
}

/// Length of the zero set of a real mode by marching squares on the chart
/// grid, with `‖e‖₁` from the global quadrature.
pub fn nodal_length(mode: &EigenMode, per_wavelength: f64) -> Result<NodalReport> {
    if !mode.is_real() {
        return Err(invalid("nodal sets need a real-valued mode"));
    }
    if !(per_wavelength >= MIN_NODAL_RESOLUTION) {
        return Err(invalid(format!("nodal grid needs ≥ {MIN_NODAL_RESOLUTION} points per wavelength")));
    }
    let lambda = mode.frequency();
    let grid = match mode.model() {
        ModelKind::Sphere2 => {
            let rows = (0.5 * per_wavelength * lambda).ceil() as usize;
            let a = (0..rows).map(|i| (i as f64 + 0.5) * PI / rows as f64).collect();
            ContourGrid::new(a, None, uniform(2 * rows, 0.0), Some(TAU))
        }
        _ => {
            let n = (per_wavelength * lambda).ceil() as usize;
            ContourGrid::new(uniform(n, TORUS_NODAL_OFFSET), Some(TAU), uniform(n, TORUS_NODAL_OFFSET), Some(TAU))
        }
    };
    let values: Vec<f64> = grid
        .a
        .par_iter()
        .flat_map_iter(|&a| {
            let mut row = vec![Complex64::new(0.0, 0.0); grid.b.len()];
            mode.evaluate_ring(a, &grid.b, &mut row);
            row.into_iter().map(|v| v.re)
        })
        .collect();
    let metric: fn(f64) -> (f64, f64) = match mode.model() {
        ModelKind::Sphere2 => |a: f64| (1.0, a.sin().powi(2)),
        _ => |_| (1.0, 1.0),
    };
    let contour = contour_length(&grid, &values, metric)?;
    // |e| has kinks along Z, so the L¹ rule converges only at second order.
    let l1 = lp_norm(mode, 1.0, 2.0 * per_wavelength)?.value;
    Ok(NodalReport {
        mode_id: mode.to_string(),
        lambda,
        resolution: per_wavelength,
        length: contour.length,
        l1,
        sign_change_fraction: contour.sign_change_fraction,
    })
}

fn uniform(n: usize, offset: f64) -> Vec<f64> {
    (0..n).map(|j| (j as f64 + offset) * TAU / n as f64).collect()
}
