//! Geodesic tubes `T_ε(γ)`, their L² masses, Kakeya–Nikodym norms over
//! finite geodesic families, restriction masses and ball escape times.
//!
//! A tube is the Fermi rectangle `{exp_{γ(s)}(u ν(s)) : 0 ≤ s ≤ L, |u| ≤ ε}`
//! (no end caps), integrated with the exact area element `J(u) du ds`:
//! `1` on flat models, `cos u` on the sphere, `cosh u` on the hyperbolic plane.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;

use crate::eigenbasis::{EigenMode, ModeFamily};
use crate::error::{invalid, Result};
use crate::manifolds::{GeodesicSegment, ManifoldModel, ModelKind, Point};
use crate::quadrature::composite;

/// Smallest accepted quadrature resolution (nodes per wavelength).
pub const MIN_RESOLUTION: f64 = 6.0;

/// Bisection tolerance for escape times.
pub const ESCAPE_TOLERANCE: f64 = 1e-8;

/// Escape times are searched up to this arclength.
pub const ESCAPE_HORIZON: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tube {
    pub geodesic: GeodesicSegment,
    pub halfwidth: f64,
}

impl Tube {
    pub fn new(geodesic: GeodesicSegment, halfwidth: f64) -> Self {
        Self { geodesic, halfwidth }
    }

    /// Halfwidth `multiplier · λ^{-1/2}`.
    pub fn kn(geodesic: GeodesicSegment, lambda: f64, multiplier: f64) -> Self {
        Self::new(geodesic, multiplier / lambda.sqrt())
    }
}

/// Finite sample of the segment space used in place of the supremum over all
/// segments. Results over a family are lower bounds for the true supremum.
#[derive(Debug, Clone)]
pub struct GeodesicFamily {
    pub segments: Vec<GeodesicSegment>,
    pub description: String,
}

impl GeodesicFamily {
    pub fn singleton(seg: GeodesicSegment) -> Self {
        Self { segments: vec![seg], description: "singleton".into() }
    }

    /// `base_points × directions` grid of segments of the model's family length.
    /// Sphere base points follow a Fibonacci lattice; torus base points a
    /// rectangular grid.
    pub fn grid(model: &ManifoldModel, base_points: usize, directions: usize) -> Result<Self> {
        let len = model.segment_length();
        let bases: Vec<Point> = match model.kind() {
            ModelKind::Sphere2 => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..base_points)
                    .map(|i| {
                        let z = 1.0 - (2.0 * i as f64 + 1.0) / base_points as f64;
                        Point::new(z.acos(), (golden * i as f64).rem_euclid(TAU))
                    })
                    .collect()
            }
            ModelKind::FlatTorus2 => {
                let cols = (base_points as f64).sqrt().ceil() as usize;
                let rows = base_points.div_ceil(cols);
                (0..base_points)
                    .map(|i| {
                        let (r, c) = (i / cols, i % cols);
                        Point::new(TAU * c as f64 / cols as f64, TAU * r as f64 / rows as f64)
                    })
                    .collect()
            }
            _ => return Err(invalid("geodesic families are defined on the sphere and the torus")),
        };
        let mut segments = Vec::with_capacity(bases.len() * directions);
        for b in &bases {
            for j in 0..directions {
                let angle = TAU * j as f64 / directions as f64;
                segments.push(model.segment_at_angle(*b, angle, len)?);
            }
        }
        Ok(Self {
            segments,
            description: format!("{base_points} base points x {directions} directions, length {len}"),
        })
    }

    /// Candidates adapted to the mode: equatorial and polar segments on the
    /// sphere, coordinate-circle segments on the torus.
    pub fn mode_adapted(model: &ManifoldModel, mode: &EigenMode) -> Result<Self> {
        let len = model.segment_length();
        let mut segments = Vec::new();
        match model.kind() {
            ModelKind::Sphere2 => {
                for j in 0..16 {
                    let lon = TAU * j as f64 / 16.0;
                    segments.push(model.segment(Point::new(FRAC_PI_2, lon), [0.0, 1.0], len)?);
                }
                // Segments centered on the north pole.
                for j in 0..8 {
                    let lon = PI * j as f64 / 8.0;
                    segments.push(model.segment(Point::new(0.5 * len, lon), [-1.0, 0.0], len)?);
                }
                if let ModeFamily::Zonal { .. } | ModeFamily::SphereHarmonic { .. } = mode.family() {
                    segments.push(model.segment(Point::new(PI - 0.5 * len, 0.0), [1.0, 0.0], len)?);
                }
            }
            ModelKind::FlatTorus2 => {
                for j in 0..8 {
                    let c = TAU * j as f64 / 8.0;
                    segments.push(model.segment(Point::new(0.0, c), [1.0, 0.0], len)?);
                    segments.push(model.segment(Point::new(c, 0.0), [0.0, 1.0], len)?);
                }
            }
            _ => return Err(invalid("geodesic families are defined on the sphere and the torus")),
        }
        Ok(Self { segments, description: "mode-adapted candidates".into() })
    }

    /// The default family: 32 base points × 64 directions plus mode-adapted candidates.
    pub fn default_for(model: &ManifoldModel, mode: &EigenMode) -> Result<Self> {
        let mut fam = Self::grid(model, 32, 64)?;
        let extra = Self::mode_adapted(model, mode)?;
        fam.segments.extend(extra.segments);
        fam.description = format!("{} + {}", fam.description, extra.description);
        Ok(fam)
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

pub(crate) fn model_for(mode: &EigenMode) -> ManifoldModel {
    match mode.model() {
        ModelKind::Sphere2 => ManifoldModel::sphere(),
        _ => ManifoldModel::flat_torus(),
    }
}

fn node_spacing(lambda: f64, resolution: f64) -> Result<f64> {
    if !(resolution >= MIN_RESOLUTION) {
        return Err(invalid(format!("resolution {resolution} below {MIN_RESOLUTION}")));
    }
    Ok(TAU / lambda.max(1.0) / resolution)
}

/// `∫_{T_ε(γ)} |e|² dV` by tensor Gauss–Legendre quadrature in Fermi coordinates.
pub fn tube_mass(mode: &EigenMode, tube: &Tube, resolution: f64) -> Result<f64> {
    let model = model_for(mode);
    let eps = tube.halfwidth;
    if !(eps > 0.0) || eps > model.max_halfwidth() + 1e-12 {
        return Err(invalid(format!(
            "halfwidth {eps} outside (0, {}] for the {} chart",
            model.max_halfwidth(),
            model.kind().name()
        )));
    }
    let h = node_spacing(mode.frequency(), resolution)?;
    let seg = &tube.geodesic;
    let s_nodes = composite(0.0, seg.length, h, 1);
    let u_nodes = composite(-eps, eps, h, 2);
    let mass: f64 = s_nodes
        .iter()
        .map(|&(s, ws)| {
            u_nodes
                .iter()
                .map(|&(u, wu)| {
                    let p = model.fermi_point(seg, s, u);
                    wu * model.fermi_jacobian(u) * mode.evaluate(&p).norm_sqr()
                })
                .sum::<f64>()
                * ws
        })
        .sum();
    Ok(mass)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnNorm {
    /// `(max tube mass)^{1/2}`.
    pub value: f64,
    pub max_mass: f64,
    pub argmax: usize,
    pub segment: GeodesicSegment,
}

/// Kakeya–Nikodym norm over a finite family, tubes of halfwidth
/// `multiplier · λ^{-1/2}`. Tubes are evaluated in parallel.
pub fn kn_norm(mode: &EigenMode, family: &GeodesicFamily, resolution: f64, multiplier: f64) -> Result<KnNorm> {
    if family.is_empty() {
        return Err(invalid("empty geodesic family"));
    }
    let masses: Vec<f64> = family
        .segments
        .par_iter()
        .map(|seg| tube_mass(mode, &Tube::kn(*seg, mode.frequency(), multiplier), resolution))
        .collect::<Result<_>>()?;
    let (argmax, &max_mass) = masses
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty family");
    Ok(KnNorm {
        value: max_mass.sqrt(),
        max_mass,
        argmax,
        segment: family.segments[argmax],
    })
}

/// `∫_γ |e|² ds` by composite Gauss–Legendre quadrature along arclength.
pub fn restriction_mass(mode: &EigenMode, seg: &GeodesicSegment, resolution: f64) -> Result<f64> {
    let model = model_for(mode);
    let h = node_spacing(mode.frequency(), resolution)?;
    Ok(composite(0.0, seg.length, h, 1)
        .iter()
        .map(|&(s, w)| w * mode.evaluate(&model.geodesic_point(seg, s)).norm_sqr())
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Escape {
    At(f64),
    /// The ball never clears the tube within [`ESCAPE_HORIZON`].
    Never,
}

impl Escape {
    pub fn time(self) -> Option<f64> {
        match self {
            Escape::At(t) => Some(t),
            Escape::Never => None,
        }
    }
}

/// Smallest `t` at which the ball of radius `r` centered at arclength `t` on
/// the geodesic launched from the tube's base at angle `θ` to its core lies
/// outside the (extended) tube: `d(center, γ) > ε + r`.
pub fn escape_time(model: &ManifoldModel, tube: &Tube, theta: f64, ball_radius: f64) -> Result<Escape> {
    if !(theta > 0.0 && theta <= FRAC_PI_2 + 1e-15) {
        return Err(invalid(format!("launch angle {theta} outside (0, π/2]")));
    }
    if !(ball_radius >= 0.0) {
        return Err(invalid("ball radius must be nonnegative"));
    }
    let axis = tube.geodesic;
    let [d0, d1] = axis.direction;
    let (s, c) = theta.sin_cos();
    let launch = model.segment(axis.base, [c * d0 - s * d1, s * d0 + c * d1], ESCAPE_HORIZON)?;
    let target = tube.halfwidth + ball_radius;
    let excess = |t: f64| model.distance_to_geodesic(&model.geodesic_point(&launch, t), &axis, true) - target;
    let step = (target / 8.0).clamp(1e-4, 0.01);
    let mut lo = 0.0;
    let mut hi = None;
    let mut t = step;
    while t <= ESCAPE_HORIZON {
        if excess(t) > 0.0 {
            hi = Some(t);
            break;
        }
        lo = t;
        t += step;
    }
    let Some(mut hi) = hi else { return Ok(Escape::Never) };
    while hi - lo > ESCAPE_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Escape::At(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests;
