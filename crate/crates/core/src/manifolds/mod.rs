//! Closed-form geometry of the model surfaces.
//!
//! Points are exchanged in fixed charts:
//!
//! | model | chart | metric |
//! |-------|-------|--------|
//! | [`ModelKind::Sphere2`] | colatitude `θ ∈ [0, π]`, longitude `φ ∈ [0, 2π)` | `dθ² + sin²θ dφ²` |
//! | [`ModelKind::FlatTorus2`] | `(x₁, x₂) ∈ [0, 2π)²` | `dx₁² + dx₂²` |
//! | [`ModelKind::EuclideanPlane`] | `(x₁, x₂) ∈ ℝ²` | `dx₁² + dx₂²` |
//! | [`ModelKind::HyperbolicPlane`], [`ModelKind::HyperbolicQuotient`] | `(x, y)`, `y > 0` | `(dx² + dy²)/y²` |
//!
//! Tangent directions are given by their components in the orthonormal frame
//! of the chart (`∂θ, ∂φ / sin θ` on the sphere, `y∂x, y∂y` on the half-plane),
//! so a unit direction is a Euclidean unit vector.

pub mod hyperbolic;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;

use crate::deckgroup::{self, EnumerationOptions, GroupEnumeration};
use crate::error::{invalid, Result};
use hyperbolic::Mobius;

/// Tolerance on `‖direction‖ = 1`.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Golden-section tolerance for segment-restricted distances.
pub const SEGMENT_SEARCH_TOLERANCE: f64 = 1e-10;

/// Uniform seeds for the segment-restricted distance search.
pub const SEGMENT_SEARCH_SEEDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Unit round sphere, `K = +1`.
    Sphere2,
    /// `ℝ² / 2πℤ²`, `K = 0`.
    FlatTorus2,
    /// The universal cover of the flat torus.
    EuclideanPlane,
    /// Upper half-plane, `K = -1`.
    HyperbolicPlane,
    /// Bolza surface `ℍ²/Γ`, points given by lifts in the half-plane.
    HyperbolicQuotient,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Sphere2 => "sphere",
            ModelKind::FlatTorus2 => "torus",
            ModelKind::EuclideanPlane => "plane",
            ModelKind::HyperbolicPlane => "hyperbolic",
            ModelKind::HyperbolicQuotient => "bolza",
        }
    }
}

/// A point in the model's chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub coords: [f64; 2],
}

impl Point {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { coords: [a, b] }
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    fn as_complex(&self) -> Complex64 {
        Complex64::new(self.coords[0], self.coords[1])
    }

    fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

/// Unit-speed geodesic segment `s ↦ γ(s)`, `0 ≤ s ≤ length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub base: Point,
    pub direction: [f64; 2],
    pub length: f64,
}

/// Distance on the quotient, with a flag saying whether the deck orbit that
/// was searched is provably large enough to contain the minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedDistance {
    pub value: f64,
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct ManifoldModel {
    kind: ModelKind,
    curvature_lower: f64,
    injectivity_radius: f64,
    segment_length: f64,
    deck: Option<Arc<GroupEnumeration>>,
}

impl ManifoldModel {
    pub fn sphere() -> Self {
        Self {
            kind: ModelKind::Sphere2,
            curvature_lower: 1.0,
            injectivity_radius: PI,
            segment_length: 1.0,
            deck: None,
        }
    }

    pub fn flat_torus() -> Self {
        Self {
            kind: ModelKind::FlatTorus2,
            curvature_lower: 0.0,
            injectivity_radius: PI,
            segment_length: (PI / 10.0).min(1.0),
            deck: None,
        }
    }

    pub fn euclidean_plane() -> Self {
        Self {
            kind: ModelKind::EuclideanPlane,
            curvature_lower: 0.0,
            injectivity_radius: f64::INFINITY,
            segment_length: 1.0,
            deck: None,
        }
    }

    pub fn hyperbolic_plane() -> Self {
        Self {
            kind: ModelKind::HyperbolicPlane,
            curvature_lower: -1.0,
            injectivity_radius: f64::INFINITY,
            segment_length: 1.0,
            deck: None,
        }
    }

    /// The Bolza surface with a deck orbit enumerated up to `word_cutoff`
    /// letters (pruned at displacement `radius`).
    pub fn bolza_quotient(word_cutoff: usize, radius: f64) -> Result<Self> {
        let enumeration = deckgroup::enumerate_with(
            &deckgroup::bolza_generators(),
            &EnumerationOptions {
                max_word_length: word_cutoff,
                displacement_cap: Some(radius),
                ..EnumerationOptions::default()
            },
        )?;
        let inj = 0.5 * deckgroup::bolza_systole();
        Ok(Self {
            kind: ModelKind::HyperbolicQuotient,
            curvature_lower: -1.0,
            injectivity_radius: inj,
            segment_length: (inj / 10.0).min(1.0),
            deck: Some(Arc::new(enumeration)),
        })
    }

    /// Bolza surface with the default cutoff (10 letters, displacement 12.5).
    pub fn bolza_default() -> Result<Self> {
        Self::bolza_quotient(10, 12.5)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Lower bound on the sectional curvature.
    pub fn curvature_lower(&self) -> f64 {
        self.curvature_lower
    }

    /// `κ` with `K ≥ -κ²` (zero for nonnegatively curved models).
    pub fn kappa(&self) -> f64 {
        (-self.curvature_lower).max(0.0).sqrt()
    }

    /// The (constant) Gauss curvature.
    pub fn gauss_curvature(&self) -> f64 {
        match self.kind {
            ModelKind::Sphere2 => 1.0,
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane => 0.0,
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => -1.0,
        }
    }

    pub fn injectivity_radius(&self) -> f64 {
        self.injectivity_radius
    }

    /// Length of the segments making up the geodesic family.
    pub fn segment_length(&self) -> f64 {
        self.segment_length
    }

    pub fn with_segment_length(mut self, length: f64) -> Self {
        self.segment_length = length;
        self
    }

    pub fn deck(&self) -> Option<&GroupEnumeration> {
        self.deck.as_deref()
    }

    /// Largest Fermi halfwidth for which the tube chart is injective.
    pub fn max_halfwidth(&self) -> f64 {
        match self.kind {
            ModelKind::Sphere2 => FRAC_PI_2,
            ModelKind::FlatTorus2 => PI,
            ModelKind::EuclideanPlane | ModelKind::HyperbolicPlane => f64::INFINITY,
            ModelKind::HyperbolicQuotient => self.injectivity_radius,
        }
    }

    /// Validates and normalizes chart coordinates.
    pub fn point(&self, a: f64, b: f64) -> Result<Point> {
        if !a.is_finite() || !b.is_finite() {
            return Err(invalid("non-finite coordinates"));
        }
        match self.kind {
            ModelKind::Sphere2 => {
                if !(0.0..=PI).contains(&a) {
                    return Err(invalid(format!("colatitude {a} outside [0, π]")));
                }
                Ok(Point::new(a, b.rem_euclid(TAU)))
            }
            ModelKind::FlatTorus2 => Ok(Point::new(a.rem_euclid(TAU), b.rem_euclid(TAU))),
            ModelKind::EuclideanPlane => Ok(Point::new(a, b)),
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => {
                if b <= 0.0 {
                    return Err(invalid(format!("half-plane point needs y > 0, got {b}")));
                }
                Ok(Point::new(a, b))
            }
        }
    }

    pub fn segment(&self, base: Point, direction: [f64; 2], length: f64) -> Result<GeodesicSegment> {
        let base = self.point(base.coords[0], base.coords[1])?;
        let norm = direction[0].hypot(direction[1]);
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(invalid(format!("direction has norm {norm}, expected 1")));
        }
        if !(length >= 0.0) {
            return Err(invalid(format!("segment length {length} < 0")));
        }
        if self.kind == ModelKind::Sphere2 && base.coords[0].sin() < 1e-9 {
            return Err(invalid("sphere frame undefined at the poles"));
        }
        Ok(GeodesicSegment { base, direction, length })
    }

    /// Segment from `base` in direction at `angle` (radians) in the orthonormal frame.
    pub fn segment_at_angle(&self, base: Point, angle: f64, length: f64) -> Result<GeodesicSegment> {
        self.segment(base, [angle.cos(), angle.sin()], length)
    }

    /// `γ(s)`. Any real `s` is accepted (extension past the endpoints).
    pub fn geodesic_point(&self, seg: &GeodesicSegment, s: f64) -> Point {
        self.fermi_point(seg, s, 0.0)
    }

    /// `exp_{γ(s)}(u ν(s))` with `ν` the left unit normal of `γ`.
    pub fn fermi_point(&self, seg: &GeodesicSegment, s: f64, u: f64) -> Point {
        let [d0, d1] = seg.direction;
        match self.kind {
            ModelKind::Sphere2 => {
                let p = sphere::to_xyz(seg.base);
                let v = sphere::frame_vector(seg.base, seg.direction);
                let n = sphere::cross(p, v);
                let (ss, cs) = s.sin_cos();
                let (su, cu) = u.sin_cos();
                let g = sphere::lin2(cs, p, ss, v);
                sphere::from_xyz(sphere::lin2(cu, g, su, n))
            }
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane => {
                let x = seg.base.coords[0] + s * d0 - u * d1;
                let y = seg.base.coords[1] + s * d1 + u * d0;
                if self.kind == ModelKind::FlatTorus2 {
                    Point::new(x.rem_euclid(TAU), y.rem_euclid(TAU))
                } else {
                    Point::new(x, y)
                }
            }
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => {
                let frame = Mobius::frame_at(seg.base.as_complex(), seg.direction);
                let w = Complex64::new(-u.tanh(), 1.0 / u.cosh()) * s.exp();
                Point::from_complex(frame.apply(w))
            }
        }
    }

    /// Area element of Fermi coordinates, `J(u)` in `dA = J(u) du ds`.
    pub fn fermi_jacobian(&self, u: f64) -> f64 {
        match self.kind {
            ModelKind::Sphere2 => u.cos(),
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane => 1.0,
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => u.cosh(),
        }
    }

    /// Geodesic distance.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        self.distance_certified(p, q).value
    }

    /// Geodesic distance; on the quotient the flag reports whether the
    /// enumerated orbit provably contains the minimizing deck element.
    pub fn distance_certified(&self, p: &Point, q: &Point) -> CertifiedDistance {
        let value = match self.kind {
            ModelKind::Sphere2 => {
                let a = sphere::to_xyz(*p);
                let b = sphere::to_xyz(*q);
                sphere::norm(sphere::cross(a, b)).atan2(sphere::dot(a, b))
            }
            ModelKind::FlatTorus2 => {
                let (dx, dy) = torus_offset(p, q);
                dx.hypot(dy)
            }
            ModelKind::EuclideanPlane => (p.x() - q.x()).hypot(p.y() - q.y()),
            ModelKind::HyperbolicPlane => hyperbolic::distance(p.as_complex(), q.as_complex()),
            ModelKind::HyperbolicQuotient => return self.quotient_distance(p, q),
        };
        CertifiedDistance { value, certified: true }
    }

    fn quotient_distance(&self, p: &Point, q: &Point) -> CertifiedDistance {
        let deck = self.deck.as_ref().expect("quotient model carries its deck group");
        let zp = p.as_complex();
        let zq = q.as_complex();
        let value = deck
            .elements()
            .iter()
            .map(|e| hyperbolic::distance(zp, e.matrix.apply(zq)))
            .fold(f64::INFINITY, f64::min);
        let i = Complex64::i();
        let reach = hyperbolic::distance(i, zp) + hyperbolic::distance(i, zq) + value;
        CertifiedDistance { value, certified: reach <= deck.certified_radius() }
    }

    /// Lift of `q` closest to `p` (identity except on the torus and quotient).
    fn nearest_lift(&self, p: &Point, q: &Point) -> Point {
        match self.kind {
            ModelKind::FlatTorus2 => {
                let (dx, dy) = torus_offset(p, q);
                Point::new(p.x() + dx, p.y() + dy)
            }
            ModelKind::HyperbolicQuotient => {
                let deck = self.deck.as_ref().expect("quotient model carries its deck group");
                let zp = p.as_complex();
                let zq = q.as_complex();
                let best = deck
                    .elements()
                    .iter()
                    .map(|e| e.matrix.apply(zq))
                    .min_by(|a, b| {
                        hyperbolic::distance(zp, *a).total_cmp(&hyperbolic::distance(zp, *b))
                    })
                    .unwrap_or(zq);
                Point::from_complex(best)
            }
            _ => *q,
        }
    }

    /// Distance from `p` to `seg`; with `extended` the segment is treated as
    /// the complete geodesic through it (on the torus: its lift through the
    /// base point, tested against the nine nearest translates of `p`).
    pub fn distance_to_geodesic(&self, p: &Point, seg: &GeodesicSegment, extended: bool) -> f64 {
        if !extended {
            return self.distance_to_segment(p, seg);
        }
        match self.kind {
            ModelKind::Sphere2 => {
                let a = sphere::to_xyz(seg.base);
                let v = sphere::frame_vector(seg.base, seg.direction);
                let n = sphere::cross(a, v);
                sphere::dot(sphere::to_xyz(*p), n).abs().clamp(0.0, 1.0).asin()
            }
            ModelKind::FlatTorus2 => {
                let [d0, d1] = seg.direction;
                let mut best = f64::INFINITY;
                for i in -1..=1 {
                    for j in -1..=1 {
                        let x = p.x() + TAU * i as f64 - seg.base.x();
                        let y = p.y() + TAU * j as f64 - seg.base.y();
                        best = best.min((x * d1 - y * d0).abs());
                    }
                }
                best
            }
            ModelKind::EuclideanPlane => {
                let [d0, d1] = seg.direction;
                ((p.x() - seg.base.x()) * d1 - (p.y() - seg.base.y()) * d0).abs()
            }
            ModelKind::HyperbolicPlane => {
                let inv = Mobius::frame_at(seg.base.as_complex(), seg.direction).inverse();
                hyperbolic::distance_to_imaginary_axis(inv.apply(p.as_complex()))
            }
            ModelKind::HyperbolicQuotient => {
                let deck = self.deck.as_ref().expect("quotient model carries its deck group");
                let inv = Mobius::frame_at(seg.base.as_complex(), seg.direction).inverse();
                let z = p.as_complex();
                deck.elements()
                    .iter()
                    .map(|e| hyperbolic::distance_to_imaginary_axis(inv.apply(e.matrix.apply(z))))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Segment-restricted distance: 64 uniform seeds, then golden-section
    /// refinement of `s ↦ d(p, γ(s))` around the best seed.
    fn distance_to_segment(&self, p: &Point, seg: &GeodesicSegment) -> f64 {
        let f = |s: f64| self.distance(p, &self.geodesic_point(seg, s));
        if seg.length == 0.0 {
            return f(0.0);
        }
        let n = SEGMENT_SEARCH_SEEDS;
        let h = seg.length / n as f64;
        let (best_i, best) = (0..=n)
            .map(|i| (i, f(i as f64 * h)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty seeds");
        let lo = (best_i as f64 - 1.0).max(0.0) * h;
        let hi = (best_i as f64 + 1.0).min(n as f64) * h;
        best.min(golden_section_min(f, lo, hi, SEGMENT_SEARCH_TOLERANCE))
    }

    /// Initial unit direction (orthonormal frame at `x`) of the minimizing geodesic to `y`.
    pub fn direction_towards(&self, x: &Point, y: &Point) -> Result<[f64; 2]> {
        let y = self.nearest_lift(x, y);
        if self.distance(x, &y) < 1e-14 {
            return Err(invalid("direction undefined for coincident points"));
        }
        Ok(match self.kind {
            ModelKind::Sphere2 => {
                let a = sphere::to_xyz(*x);
                let b = sphere::to_xyz(y);
                let t = sphere::lin2(1.0, b, -sphere::dot(a, b), a);
                sphere::frame_components(*x, t)?
            }
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane => {
                let dx = y.x() - x.x();
                let dy = y.y() - x.y();
                let n = dx.hypot(dy);
                [dx / n, dy / n]
            }
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => {
                let angle = hyperbolic::initial_direction(x.as_complex(), y.as_complex());
                [angle.cos(), angle.sin()]
            }
        })
    }

    /// Tangent of the complete geodesic through `axis`, transported to `x`
    /// along the normal geodesic from its foot point (the Fermi `∂s` field).
    pub fn axis_direction_at(&self, x: &Point, axis: &GeodesicSegment) -> Result<[f64; 2]> {
        match self.kind {
            ModelKind::Sphere2 => {
                let a = sphere::to_xyz(axis.base);
                let v = sphere::frame_vector(axis.base, axis.direction);
                let n = sphere::cross(a, v);
                let p = sphere::to_xyz(*x);
                let foot = sphere::lin2(1.0, p, -sphere::dot(p, n), n);
                let nf = sphere::norm(foot);
                if nf < 1e-12 {
                    return Err(invalid("point is a pole of the axis"));
                }
                let t = sphere::cross(n, sphere::scale(1.0 / nf, foot));
                sphere::frame_components(*x, t)
            }
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane => Ok(axis.direction),
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => {
                let frame = Mobius::frame_at(axis.base.as_complex(), axis.direction);
                let w = frame.inverse().apply(x.as_complex());
                let dw = Complex64::new(frame.c, 0.0) * w + frame.d;
                let rot = (dw * dw).inv();
                let angle = w.arg() + rot.arg();
                Ok([angle.cos(), angle.sin()])
            }
        }
    }

    /// Diagonal metric coefficients `(E, G)` of the chart at `p`.
    pub fn metric_diag(&self, p: &Point) -> (f64, f64) {
        match self.kind {
            ModelKind::Sphere2 => (1.0, p.x().sin().powi(2)),
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane => (1.0, 1.0),
            ModelKind::HyperbolicPlane | ModelKind::HyperbolicQuotient => {
                let g = 1.0 / (p.y() * p.y());
                (g, g)
            }
        }
    }

    /// Gauss curvature from finite differences of the chart metric, by
    /// `K = -(1/2√(EG)) [∂u(G_u/√(EG)) + ∂v(E_v/√(EG))]`.
    pub fn gauss_curvature_fd(&self, p: &Point, h: f64) -> f64 {
        let e = |u: f64, v: f64| self.metric_diag(&Point::new(u, v)).0;
        let g = |u: f64, v: f64| self.metric_diag(&Point::new(u, v)).1;
        let root = |u: f64, v: f64| (e(u, v) * g(u, v)).sqrt();
        let gu_over = |u: f64, v: f64| (g(u + h, v) - g(u - h, v)) / (2.0 * h) / root(u, v);
        let ev_over = |u: f64, v: f64| (e(u, v + h) - e(u, v - h)) / (2.0 * h) / root(u, v);
        let (u, v) = (p.x(), p.y());
        let d1 = (gu_over(u + h, v) - gu_over(u - h, v)) / (2.0 * h);
        let d2 = (ev_over(u, v + h) - ev_over(u, v - h)) / (2.0 * h);
        -(d1 + d2) / (2.0 * root(u, v))
    }
}

fn torus_offset(p: &Point, q: &Point) -> (f64, f64) {
    let wrap = |d: f64| {
        let d = d.rem_euclid(TAU);
        if d > PI {
            d - TAU
        } else {
            d
        }
    };
    (wrap(q.x() - p.x()), wrap(q.y() - p.y()))
}

/// Minimizes `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    fc.min(fd).min(f(0.5 * (lo + hi)))
}

/// Embedding of the sphere chart in ℝ³.
pub(crate) mod sphere {
    use super::Point;
    use crate::error::{invalid, Result};
    use std::f64::consts::TAU;

    pub type V3 = [f64; 3];

    pub fn to_xyz(p: Point) -> V3 {
        let (st, ct) = p.coords[0].sin_cos();
        let (sp, cp) = p.coords[1].sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn from_xyz(v: V3) -> Point {
        let r = v[0].hypot(v[1]);
        Point::new(r.atan2(v[2]), v[1].atan2(v[0]).rem_euclid(TAU))
    }

    /// `(e_θ, e_φ)` at `p`.
    pub fn frame(p: Point) -> (V3, V3) {
        let (st, ct) = p.coords[0].sin_cos();
        let (sp, cp) = p.coords[1].sin_cos();
        ([ct * cp, ct * sp, -st], [-sp, cp, 0.0])
    }

    pub fn frame_vector(p: Point, d: [f64; 2]) -> V3 {
        let (et, ep) = frame(p);
        lin2(d[0], et, d[1], ep)
    }

    pub fn frame_components(p: Point, t: V3) -> Result<[f64; 2]> {
        if p.coords[0].sin() < 1e-12 {
            return Err(invalid("sphere frame undefined at the poles"));
        }
        let (et, ep) = frame(p);
        let a = dot(t, et);
        let b = dot(t, ep);
        let n = a.hypot(b);
        if n == 0.0 {
            return Err(invalid("zero tangent vector"));
        }
        Ok([a / n, b / n])
    }

    pub fn dot(a: V3, b: V3) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(a: V3, b: V3) -> V3 {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn norm(a: V3) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn scale(s: f64, a: V3) -> V3 {
        [s * a[0], s * a[1], s * a[2]]
    }

    pub fn lin2(s: f64, a: V3, t: f64, b: V3) -> V3 {
        [s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]]
    }
}

#[cfg(test)]
mod tests;
