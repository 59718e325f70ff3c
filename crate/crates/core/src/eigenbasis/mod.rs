//! Explicit L²-normalized Laplace eigenfunctions and quasimodes on the unit
//! sphere and on the flat torus `ℝ²/2πℤ²`.
//!
//! Every mode has a spectral expansion in an orthonormal eigenbasis
//! ([`BasisKey`]): spherical harmonics `Y_l^m` on the sphere and plane waves
//! `e^{ik·x}/(2π)` on the torus. Quasimodes are stored directly in that
//! expansion, which makes `‖(Δ + λ²)ψ‖₂` exactly computable.

mod descriptor;
pub mod legendre;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::manifolds::{ModelKind, Point};
use crate::quadrature::GaussLegendre;
use legendre::normalized_legendre;

/// Largest degree / lattice norm accepted.
pub const MAX_DEGREE: u32 = 4096;

/// An element of the orthonormal eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKey {
    /// `Y_l^m`, eigenvalue `l(l+1)`.
    Sphere { l: u32, m: i32 },
    /// `e^{ik·x}/(2π)`, eigenvalue `|k|²`.
    Torus { k: [i64; 2] },
}

impl BasisKey {
    pub fn frequency(&self) -> f64 {
        match *self {
            BasisKey::Sphere { l, .. } => (l as f64 * (l as f64 + 1.0)).sqrt(),
            BasisKey::Torus { k } => (k[0] as f64).hypot(k[1] as f64),
        }
    }

    pub fn model(&self) -> ModelKind {
        match self {
            BasisKey::Sphere { .. } => ModelKind::Sphere2,
            BasisKey::Torus { .. } => ModelKind::FlatTorus2,
        }
    }

    pub fn evaluate(&self, p: &Point) -> Complex64 {
        match *self {
            BasisKey::Sphere { l, m } => spherical_harmonic(l, m, p.coords[0], p.coords[1]),
            BasisKey::Torus { k } => plane_wave(k, p),
        }
    }
}

/// One plane wave `c · e^{ik·x}/(2π)` of a torus mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusTerm {
    pub k: [i64; 2],
    pub c: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeFamily {
    SphereHarmonic { l: u32, m: i32 },
    /// `N_k sin^k θ cos kφ`, the normalized `Re(x₁ + i x₂)^k`.
    HighestWeight { k: u32 },
    Zonal { l: u32 },
    TorusWave { terms: Vec<TorusTerm> },
    /// Finite combination of basis functions, not necessarily at one frequency.
    Quasimode { terms: Vec<(BasisKey, Complex64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    model: ModelKind,
    family: ModeFamily,
    frequency: f64,
    /// `N_k` for highest-weight modes.
    scale: f64,
}

fn spherical_harmonic(l: u32, m: i32, colat: f64, lon: f64) -> Complex64 {
    let am = m.unsigned_abs();
    let p = normalized_legendre(l, am, colat);
    let y = Complex64::from_polar(p, am as f64 * lon);
    if m < 0 {
        let sign = if am % 2 == 1 { -1.0 } else { 1.0 };
        y.conj() * sign
    } else {
        y
    }
}

fn plane_wave(k: [i64; 2], p: &Point) -> Complex64 {
    let phase = k[0] as f64 * p.coords[0] + k[1] as f64 * p.coords[1];
    Complex64::from_polar(1.0 / TAU, phase)
}

/// `N_k = (π ∫_{-1}^{1} (1 - x²)^k dx)^{-1/2}` by Gauss–Legendre quadrature
/// (exact: the integrand is a polynomial of degree `2k`).
pub fn highest_weight_normalization(k: u32) -> f64 {
    let rule = GaussLegendre::new(k as usize + 1);
    let integral = rule.integrate(-1.0, 1.0, |x| {
        let t = 1.0 - x * x;
        if t <= 0.0 {
            0.0
        } else {
            (k as f64 * t.ln()).exp()
        }
    });
    1.0 / (PI * integral).sqrt()
}

fn check_degree(d: u32) -> Result<()> {
    if d > MAX_DEGREE {
        return Err(invalid(format!("degree {d} exceeds {MAX_DEGREE}")));
    }
    Ok(())
}

impl EigenMode {
    pub fn sphere_harmonic(l: u32, m: i32) -> Result<Self> {
        check_degree(l)?;
        if m.unsigned_abs() > l {
            return Err(invalid(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(Self {
            model: ModelKind::Sphere2,
            family: ModeFamily::SphereHarmonic { l, m },
            frequency: BasisKey::Sphere { l, m }.frequency(),
            scale: 1.0,
        })
    }

    pub fn zonal(l: u32) -> Result<Self> {
        check_degree(l)?;
        Ok(Self {
            model: ModelKind::Sphere2,
            family: ModeFamily::Zonal { l },
            frequency: BasisKey::Sphere { l, m: 0 }.frequency(),
            scale: 1.0,
        })
    }

    pub fn highest_weight(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(invalid("highest-weight degree must be at least 1"));
        }
        check_degree(k)?;
        Ok(Self {
            model: ModelKind::Sphere2,
            family: ModeFamily::HighestWeight { k },
            frequency: BasisKey::Sphere { l: k, m: 0 }.frequency(),
            scale: highest_weight_normalization(k),
        })
    }

    /// Torus eigenfunction `Σ c_j e^{ik_j·x}/(2π)`; all `|k_j|` must agree and
    /// `Σ|c_j|² = 1`. Repeated lattice vectors are merged.
    pub fn torus_wave(terms: Vec<TorusTerm>) -> Result<Self> {
        let terms = merge_torus_terms(terms);
        let first = terms.first().ok_or_else(|| invalid("torus wave needs at least one term"))?;
        let norm_sq = first.k[0] * first.k[0] + first.k[1] * first.k[1];
        for t in &terms {
            if t.k[0] * t.k[0] + t.k[1] * t.k[1] != norm_sq {
                return Err(invalid("all lattice vectors of a torus eigenfunction must share |k|"));
            }
            if t.k[0].unsigned_abs() > MAX_DEGREE as u64 || t.k[1].unsigned_abs() > MAX_DEGREE as u64 {
                return Err(invalid("lattice vector exceeds the degree cap"));
            }
        }
        let mass: f64 = terms.iter().map(|t| t.c.norm_sqr()).sum();
        if (mass - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("coefficients have Σ|c|² = {mass}, expected 1")));
        }
        if norm_sq == 0 {
            return Err(invalid("the constant mode has frequency 0"));
        }
        Ok(Self {
            model: ModelKind::FlatTorus2,
            frequency: (norm_sq as f64).sqrt(),
            family: ModeFamily::TorusWave { terms },
            scale: 1.0,
        })
    }

    /// Single plane wave `e^{ik·x}/(2π)`.
    pub fn plane_wave(k: [i64; 2]) -> Result<Self> {
        Self::torus_wave(vec![TorusTerm { k, c: Complex64::new(1.0, 0.0) }])
    }

    /// `√2 sin(k x₁)/(2π)`.
    pub fn torus_sine(k: i64) -> Result<Self> {
        let c = Complex64::new(0.0, -0.5 * std::f64::consts::SQRT_2);
        Self::torus_wave(vec![
            TorusTerm { k: [k, 0], c },
            TorusTerm { k: [-k, 0], c: -c },
        ])
    }

    /// Combination of basis functions taken at face value, with nominal
    /// frequency `lambda`. No (qm) check; see [`make_quasimode`].
    pub fn from_coefficients(terms: Vec<(BasisKey, Complex64)>, lambda: f64) -> Result<Self> {
        let terms = merge_coefficients(terms);
        let model = terms.first().map(|t| t.0.model()).ok_or_else(|| invalid("empty combination"))?;
        if terms.iter().any(|t| t.0.model() != model) {
            return Err(invalid("combination mixes sphere and torus basis functions"));
        }
        if !(lambda > 0.0) {
            return Err(invalid("frequency must be positive"));
        }
        Ok(Self {
            model,
            family: ModeFamily::Quasimode { terms },
            frequency: lambda,
            scale: 1.0,
        })
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn family(&self) -> &ModeFamily {
        &self.family
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn is_quasimode(&self) -> bool {
        matches!(self.family, ModeFamily::Quasimode { .. })
    }

    /// Largest basis degree involved (sets quadrature sizes).
    pub fn max_degree(&self) -> u32 {
        self.spectral_coefficients()
            .iter()
            .map(|(key, _)| match *key {
                BasisKey::Sphere { l, .. } => l,
                BasisKey::Torus { k } => k[0].unsigned_abs().max(k[1].unsigned_abs()) as u32,
            })
            .max()
            .unwrap_or(0)
    }

    /// Whether the mode is real-valued.
    pub fn is_real(&self) -> bool {
        match &self.family {
            ModeFamily::HighestWeight { .. } | ModeFamily::Zonal { .. } => true,
            ModeFamily::SphereHarmonic { m, .. } => *m == 0,
            _ => {
                let coeffs = self.spectral_coefficients();
                coeffs.iter().all(|(key, c)| {
                    let partner = match *key {
                        BasisKey::Torus { k } => BasisKey::Torus { k: [-k[0], -k[1]] },
                        BasisKey::Sphere { l, m } => BasisKey::Sphere { l, m: -m },
                    };
                    let sign = match *key {
                        BasisKey::Sphere { m, .. } if m % 2 != 0 => -1.0,
                        _ => 1.0,
                    };
                    let found = coeffs.iter().find(|t| t.0 == partner).map(|t| t.1);
                    found.is_some_and(|d| (d - c.conj() * sign).norm() < 1e-12)
                })
            }
        }
    }

    /// Expansion in the orthonormal eigenbasis.
    pub fn spectral_coefficients(&self) -> Vec<(BasisKey, Complex64)> {
        match &self.family {
            ModeFamily::SphereHarmonic { l, m } => vec![(BasisKey::Sphere { l: *l, m: *m }, Complex64::new(1.0, 0.0))],
            ModeFamily::Zonal { l } => vec![(BasisKey::Sphere { l: *l, m: 0 }, Complex64::new(1.0, 0.0))],
            ModeFamily::HighestWeight { k } => {
                // sin^k θ cos kφ ∝ (-1)^k Y_k^k + Y_k^{-k}
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let sign = if k % 2 == 1 { -h } else { h };
                vec![
                    (BasisKey::Sphere { l: *k, m: -(*k as i32) }, Complex64::new(h, 0.0)),
                    (BasisKey::Sphere { l: *k, m: *k as i32 }, Complex64::new(sign, 0.0)),
                ]
            }
            ModeFamily::TorusWave { terms } => terms.iter().map(|t| (BasisKey::Torus { k: t.k }, t.c)).collect(),
            ModeFamily::Quasimode { terms } => terms.clone(),
        }
    }

    /// `‖ψ‖₂` from the expansion.
    pub fn l2_norm(&self) -> f64 {
        self.spectral_coefficients().iter().map(|t| t.1.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖(Δ + λ²)ψ‖₂` from the expansion, with `λ` the nominal frequency.
    pub fn residual_norm(&self, lambda: f64) -> f64 {
        self.spectral_coefficients()
            .iter()
            .map(|(key, c)| {
                let lj = key.frequency();
                c.norm_sqr() * (lambda * lambda - lj * lj).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn evaluate(&self, p: &Point) -> Complex64 {
        match &self.family {
            ModeFamily::SphereHarmonic { l, m } => spherical_harmonic(*l, *m, p.coords[0], p.coords[1]),
            ModeFamily::Zonal { l } => Complex64::new(normalized_legendre(*l, 0, p.coords[0]), 0.0),
            ModeFamily::HighestWeight { k } => {
                Complex64::new(self.scale * sin_power(p.coords[0], *k) * (*k as f64 * p.coords[1]).cos(), 0.0)
            }
            ModeFamily::TorusWave { terms } => terms.iter().map(|t| t.c * plane_wave(t.k, p)).sum(),
            ModeFamily::Quasimode { terms } => terms.iter().map(|(key, c)| c * key.evaluate(p)).sum(),
        }
    }

    /// Values on a latitude ring of the sphere (or a row `x₂ = const` of the
    /// torus), sharing the colatitude-dependent factors.
    pub fn evaluate_ring(&self, first: f64, seconds: &[f64], out: &mut [Complex64]) {
        debug_assert_eq!(seconds.len(), out.len());
        match (&self.family, self.model) {
            (ModeFamily::HighestWeight { k }, _) => {
                let a = self.scale * sin_power(first, *k);
                for (o, &phi) in out.iter_mut().zip(seconds) {
                    *o = Complex64::new(a * (*k as f64 * phi).cos(), 0.0);
                }
            }
            (_, ModelKind::Sphere2) => {
                out.fill(Complex64::new(0.0, 0.0));
                for (key, c) in self.spectral_coefficients() {
                    let BasisKey::Sphere { l, m } = key else { continue };
                    let am = m.unsigned_abs();
                    let mut p = normalized_legendre(l, am, first);
                    if m < 0 && am % 2 == 1 {
                        p = -p;
                    }
                    let mf = m as f64;
                    for (o, &phi) in out.iter_mut().zip(seconds) {
                        *o += c * Complex64::from_polar(p, mf * phi);
                    }
                }
            }
            _ => {
                for (o, &s) in out.iter_mut().zip(seconds) {
                    *o = self.evaluate(&Point::new(s, first));
                }
            }
        }
    }
}

fn sin_power(colat: f64, k: u32) -> f64 {
    let s = colat.sin();
    if s <= 0.0 {
        0.0
    } else {
        (k as f64 * s.ln()).exp()
    }
}

fn merge_torus_terms(terms: Vec<TorusTerm>) -> Vec<TorusTerm> {
    let mut out: Vec<TorusTerm> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| o.k == t.k) {
            Some(o) => o.c += t.c,
            None => out.push(t),
        }
    }
    out.retain(|t| t.c.norm_sqr() > 0.0);
    out
}

fn merge_coefficients(terms: Vec<(BasisKey, Complex64)>) -> Vec<(BasisKey, Complex64)> {
    let mut map = std::collections::BTreeMap::new();
    for (key, c) in terms {
        *map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
    }
    map.into_iter().filter(|(_, c)| c.norm_sqr() > 0.0).collect()
}

/// `‖ψ‖₂ + (log λ / λ) ‖(Δ + λ²)ψ‖₂`.
pub fn qm_value(mode: &EigenMode, lambda: f64) -> f64 {
    mode.l2_norm() + lambda.ln() / lambda * mode.residual_norm(lambda)
}

/// Default quasimode window width `1 / log λ`.
pub fn default_window(lambda: f64) -> f64 {
    1.0 / lambda.ln()
}

/// Weighted combination `Σ w_j e_j` tagged as a quasimode at frequency `λ`.
/// Rejected when `Σ|w_j|² > 1` or when the (qm) quantity exceeds one.
pub fn make_quasimode(modes: &[EigenMode], weights: &[Complex64], lambda: f64) -> Result<EigenMode> {
    if modes.len() != weights.len() || modes.is_empty() {
        return Err(invalid("need one weight per mode"));
    }
    let total: f64 = weights.iter().map(|w| w.norm_sqr()).sum();
    if total > 1.0 + 1e-12 {
        return Err(invalid(format!("Σ|w|² = {total} exceeds 1")));
    }
    if !(lambda > 1.0) {
        return Err(invalid("quasimode frequency must exceed 1"));
    }
    let terms = modes
        .iter()
        .zip(weights)
        .flat_map(|(m, w)| m.spectral_coefficients().into_iter().map(move |(k, c)| (k, c * w)))
        .collect();
    let psi = EigenMode::from_coefficients(terms, lambda)?;
    let value = qm_value(&psi, lambda);
    if value > 1.0 + 1e-12 {
        return Err(Error::QuasimodeRejected { value });
    }
    Ok(psi)
}

/// `(Δ + λ²)e` at `p` by centered second differences with step `h` in the chart.
pub fn laplacian_residual(mode: &EigenMode, p: &Point, h: f64) -> Complex64 {
    let (a, b) = (p.coords[0], p.coords[1]);
    let f = |u: f64, v: f64| mode.evaluate(&Point::new(u, v));
    let f0 = f(a, b);
    let faa = (f(a + h, b) - f0 * 2.0 + f(a - h, b)) / (h * h);
    let fbb = (f(a, b + h) - f0 * 2.0 + f(a, b - h)) / (h * h);
    let lap = match mode.model {
        ModelKind::Sphere2 => {
            let fa = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
            let s = a.sin();
            faa + fa * (a.cos() / s) + fbb / (s * s)
        }
        _ => faa + fbb,
    };
    lap + f0 * mode.frequency.powi(2)
}
