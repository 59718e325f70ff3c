//! Least-squares scaling fits of `log value` against a transformed abscissa.

use std::fmt;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `x ↦ x`; an exponential law `value ∝ e^{slope·x}`.
    Linear,
    /// `λ ↦ log λ`; a power law `value ∝ λ^{slope}`.
    LogLambda,
    /// `λ ↦ log log λ`; `value ∝ (log λ)^{slope}`.
    LogLogLambda,
}

impl Transform {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Linear => x,
            Transform::LogLambda => x.ln(),
            Transform::LogLogLambda => x.ln().ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Linear => "x",
            Transform::LogLambda => "log lambda",
            Transform::LogLogLambda => "log log lambda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub transform: Transform,
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, in `[0, 1]`.
    pub r_squared: f64,
}

impl fmt::Display for ScalingFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "transform = {}, slope = {:.6}, intercept = {:.6}, r2 = {:.6}",
            self.transform.name(),
            self.slope,
            self.intercept,
            self.r_squared
        )
    }
}

/// Fits `log value = intercept + slope · transform(x)`.
pub fn fit_scaling(series: &[(f64, f64)], transform: Transform) -> Result<ScalingFit> {
    if series.len() < 3 {
        return Err(CliError::Fit(format!("need at least 3 points, got {}", series.len())));
    }
    let mut xs = Vec::with_capacity(series.len());
    let mut ys = Vec::with_capacity(series.len());
    for &(x, v) in series {
        if !(v > 0.0) {
            return Err(CliError::Fit(format!("value {v} at x = {x} is not positive")));
        }
        let t = transform.apply(x);
        if !t.is_finite() {
            return Err(CliError::Fit(format!("abscissa {x} is outside the domain of `{}`", transform.name())));
        }
        xs.push(t);
        ys.push(v.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(CliError::Fit("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    // A constant series is fitted exactly by a flat line.
    let r_squared = if ss_tot <= f64::EPSILON * f64::EPSILON * n { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(ScalingFit { transform, slope, intercept, r_squared })
}
