//! Cone-into-tube comparison geometry.
//!
//! For a complete geodesic `γ̃` in a surface with `-κ² ≤ K ≤ 0`, every
//! geodesic ray of length `T` leaving `γ̃` at angle at most `θ_T` stays in the
//! tube `T_R(γ̃)`, where `sin(θ_T/2) = sinh(κR/2)/sinh(κT)`. This module
//! evaluates that aperture, solves the isosceles hinge that proves it, and
//! checks containment by direct sampling.

use crate::error::{invalid, Error, Result};
use crate::manifolds::{GeodesicSegment, ManifoldModel, ModelKind, Point};

/// Slack above which a sampled point counts as outside the tube.
pub const VIOLATION_SLACK: f64 = 1e-6;

/// Aperture `θ` of the cone of rays of length `T` guaranteed to stay within
/// distance `R` of the axis: `2 asin(sinh(κR/2)/sinh(κT))`, and
/// `2 asin(R/(2T))` for `κ = 0`.
pub fn cone_half_angle(t: f64, r: f64, kappa: f64) -> Result<f64> {
    if !(t > 0.0) || !(r >= 0.0) || !(kappa >= 0.0) {
        return Err(invalid(format!("cone needs T > 0, R ≥ 0, κ ≥ 0; got T={t}, R={r}, κ={kappa}")));
    }
    let ratio = if kappa == 0.0 {
        0.5 * r / t
    } else {
        (0.5 * kappa * r).sinh() / (kappa * t).sinh()
    };
    if ratio > 1.0 {
        return Err(Error::Domain(format!("sin(θ/2) = {ratio} > 1: tube wider than the ball reaches")));
    }
    Ok(2.0 * ratio.asin())
}

/// Opposite side of the hyperbolic isosceles triangle with legs `T` and apex
/// angle `Θ`: `2 asinh(sin(Θ/2) sinh T)`.
pub fn isosceles_opposite_length(t: f64, apex_angle: f64) -> Result<f64> {
    if !(t > 0.0) || !(0.0..=std::f64::consts::PI).contains(&apex_angle) {
        return Err(invalid(format!("isosceles triangle needs T > 0 and 0 ≤ Θ ≤ π; got T={t}, Θ={apex_angle}")));
    }
    Ok(2.0 * ((0.5 * apex_angle).sin() * t.sinh()).asinh())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    pub t: f64,
    pub r: f64,
    pub kappa: f64,
    /// Aperture; [`ConeSpec::new`] sets it to [`cone_half_angle`].
    pub theta: f64,
}

impl ConeSpec {
    pub fn new(t: f64, r: f64, kappa: f64) -> Result<Self> {
        let theta = cone_half_angle(t, r, kappa)?;
        Ok(Self { t, r, kappa, theta })
    }

    /// Same cone with the aperture scaled by `factor`.
    pub fn inflated(self, factor: f64) -> Self {
        Self { theta: self.theta * factor, ..self }
    }
}

/// Opposite side of a geodesic hinge in the model and its two comparison values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hinge {
    pub model: f64,
    pub hyperbolic: f64,
    pub flat: f64,
}

impl Hinge {
    /// `ℓ_flat ≤ ℓ_model ≤ ℓ_hyperbolic` up to `slack`.
    pub fn sandwiched(&self, slack: f64) -> bool {
        self.flat <= self.model + slack && self.model <= self.hyperbolic + slack
    }
}

/// Shoots two geodesics of length `T` from `apex` at angle `Θ` and compares
/// the distance between their endpoints with the flat and hyperbolic values.
/// The torus is lifted to the plane so that the hinge never wraps.
pub fn hinge_comparison(model: &ManifoldModel, apex: Point, t: f64, apex_angle: f64) -> Result<Hinge> {
    let hyperbolic = isosceles_opposite_length(t, apex_angle)?;
    let plane;
    let model = if model.kind() == ModelKind::FlatTorus2 {
        plane = ManifoldModel::euclidean_plane();
        &plane
    } else {
        model
    };
    let a = model.segment_at_angle(apex, 0.0, t)?;
    let b = model.segment_at_angle(apex, apex_angle, t)?;
    let ell = model.distance(&model.geodesic_point(&a, t), &model.geodesic_point(&b, t));
    Ok(Hinge {
        model: ell,
        hyperbolic,
        flat: 2.0 * t * (0.5 * apex_angle).sin(),
    })
}

/// Sampling densities for [`verify_cone_containment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentSampling {
    /// Arclength positions `t₀` of the cone vertices `γ̃(t₀)`.
    pub vertices: Vec<f64>,
    /// Angles per vertex, uniform in `[0, θ]` including both ends.
    pub angles: usize,
    /// Arclength steps per ray.
    pub steps: usize,
}

impl Default for ContainmentSampling {
    fn default() -> Self {
        Self { vertices: vec![0.0, 0.5, 1.0], angles: 200, steps: 400 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainmentReport {
    /// Largest `d(x, γ̃) − R` over all sampled points.
    pub max_excess: f64,
    /// Rays with some point farther than `R + 1e-6` from the axis.
    pub violation_count: usize,
    pub rays: usize,
    /// `max d(x, γ̃) − R` along the rays at angle exactly `θ`.
    pub extremal_excess: f64,
}

/// Samples the cone `C(θ; T)` from vertices on `axis` (treated as a complete
/// geodesic) and measures how far it leaves the tube `T_R(axis)`.
///
/// Each sampled angle `φ` is used in all four orientations (`±φ` about the
/// forward and the backward tangent), so a geodesic through the vertex at
/// angle at most `θ` to the axis is covered in both directions.
pub fn verify_cone_containment(
    model: &ManifoldModel,
    axis: &GeodesicSegment,
    cone: &ConeSpec,
    sampling: &ContainmentSampling,
) -> Result<ContainmentReport> {
    if sampling.angles < 2 || sampling.steps == 0 {
        return Err(invalid("containment sampling needs at least 2 angles and 1 step"));
    }
    let mut report = ContainmentReport {
        max_excess: f64::NEG_INFINITY,
        violation_count: 0,
        rays: 0,
        extremal_excess: f64::NEG_INFINITY,
    };
    let axis_angle = axis.direction[1].atan2(axis.direction[0]);
    for &t0 in &sampling.vertices {
        let vertex = model.geodesic_point(axis, t0);
        let tangent = model.axis_direction_at(&vertex, axis)?;
        let base_angle = tangent[1].atan2(tangent[0]);
        debug_assert!(model.kind() != ModelKind::EuclideanPlane || (base_angle - axis_angle).abs() < 1e-12);
        for i in 0..sampling.angles {
            let phi = cone.theta * i as f64 / (sampling.angles - 1) as f64;
            for offset in [phi, -phi, std::f64::consts::PI + phi, std::f64::consts::PI - phi] {
                let ray = model.segment_at_angle(vertex, base_angle + offset, cone.t)?;
                let excess = (1..=sampling.steps)
                    .map(|j| {
                        let s = cone.t * j as f64 / sampling.steps as f64;
                        model.distance_to_geodesic(&model.geodesic_point(&ray, s), axis, true) - cone.r
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                report.rays += 1;
                report.max_excess = report.max_excess.max(excess);
                if excess > VIOLATION_SLACK {
                    report.violation_count += 1;
                }
                if i == sampling.angles - 1 {
                    report.extremal_excess = report.extremal_excess.max(excess);
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientAngle {
    /// Unoriented angle in `[0, π/2]` between the direction from `x` to `y`
    /// and the axis direction at `x`.
    pub angle: f64,
    /// `min_± |v ± a|` for the unit vectors `v` and `a`.
    pub chordal: f64,
}

/// Angle between `∇_x d(x, y)` (up to sign) and the axis direction
/// transported to `x`.
pub fn gradient_angle(model: &ManifoldModel, x: &Point, y: &Point, axis: &GeodesicSegment) -> Result<GradientAngle> {
    let v = model.direction_towards(x, y)?;
    let a = model.axis_direction_at(x, axis)?;
    let dot = v[0] * a[0] + v[1] * a[1];
    let minus = (v[0] - a[0]).hypot(v[1] - a[1]);
    let plus = (v[0] + a[0]).hypot(v[1] + a[1]);
    Ok(GradientAngle {
        angle: dot.abs().min(1.0).acos(),
        chordal: minus.min(plus),
    })
}

#[cfg(test)]
mod tests;
