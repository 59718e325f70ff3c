//! Spectral filters `ρ(T(λ − P))` in coefficient space, shrinking spectral
//! windows on the torus and the operator norm of the window projector into a
//! tube, computed as the top eigenvalue of a Gram matrix.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigenbasis::{qm_value, BasisKey, EigenMode};
use crate::error::{invalid, Error, Result};
use crate::manifolds::{ManifoldModel, Point};
use crate::quadrature::composite;
use crate::tubes::{Tube, MIN_RESOLUTION};

/// Coefficients in the orthonormal eigenbasis.
pub type Coefficients = Vec<(BasisKey, Complex64)>;

/// Time profile of a filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterProfile {
    /// `ρ(s) = (sin(s/4)/(s/4))²`. Its Fourier transform is the triangle
    /// `ρ̂(t) = 4 (1/2 − |t|)₊`, supported in `[−1/2, 1/2]`.
    SquaredSinc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFilter {
    pub profile: FilterProfile,
    /// Time scale `T`.
    pub time_scale: f64,
}

impl SpectralFilter {
    pub fn new(time_scale: f64) -> Result<Self> {
        if !(time_scale > 0.0) {
            return Err(invalid(format!("filter time scale {time_scale} must be positive")));
        }
        Ok(Self { profile: FilterProfile::SquaredSinc, time_scale })
    }

    /// `T = c log λ`.
    pub fn logarithmic(c: f64, lambda: f64) -> Result<Self> {
        Self::new(c * lambda.ln())
    }

    /// `ρ(s)`.
    pub fn rho(&self, s: f64) -> f64 {
        match self.profile {
            FilterProfile::SquaredSinc => {
                let x = 0.25 * s;
                if x.abs() < 1e-8 {
                    1.0 - x * x / 3.0
                } else {
                    (x.sin() / x).powi(2)
                }
            }
        }
    }

    /// `χ(s) = |ρ(s)|²`, whose Fourier transform lives in `[−1, 1]`.
    pub fn chi(&self, s: f64) -> f64 {
        self.rho(s).powi(2)
    }

    /// `ρ̂(t)` with the convention `ρ(s) = ∫ ρ̂(t) e^{its} dt`.
    pub fn fourier_transform(&self, t: f64) -> f64 {
        match self.profile {
            FilterProfile::SquaredSinc => 4.0 * (0.5 - t.abs()).max(0.0),
        }
    }

    /// Support of `ρ̂`, `[−a, a]`.
    pub fn fourier_support(&self) -> f64 {
        0.5
    }

    /// Multiplier `ρ(T(λ − λ_j))`.
    pub fn multiplier(&self, lambda: f64, lambda_j: f64) -> f64 {
        self.rho(self.time_scale * (lambda - lambda_j))
    }
}

/// `c_j ↦ ρ(T(λ − λ_j)) c_j`.
pub fn apply_filter(filter: &SpectralFilter, lambda: f64, coefficients: &[(BasisKey, Complex64)]) -> Coefficients {
    coefficients
        .iter()
        .map(|&(key, c)| (key, c * filter.multiplier(lambda, key.frequency())))
        .collect()
}

/// All torus lattice points with `|k|` in `[λ, λ + w]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpectrum {
    pub lambda: f64,
    pub width: f64,
    pub lattice: Vec<[i64; 2]>,
}

impl WindowSpectrum {
    /// Exhaustive window on the torus; `width` defaults to `1/log λ` in callers.
    pub fn torus(lambda: f64, width: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(width >= 0.0) || lambda + width > crate::eigenbasis::MAX_DEGREE as f64 {
            return Err(invalid(format!("window [{lambda}, {}] outside the supported range", lambda + width)));
        }
        let hi = lambda + width;
        let r = hi.floor() as i64;
        let mut lattice = Vec::new();
        let mut nearest = f64::INFINITY;
        for a in -r - 1..=r + 1 {
            for b in -r - 1..=r + 1 {
                let f = (a as f64).hypot(b as f64);
                if f >= lambda && f <= hi {
                    lattice.push([a, b]);
                } else if (f - lambda).abs() < (nearest - lambda).abs() {
                    nearest = f;
                }
            }
        }
        if lattice.is_empty() {
            // Points beyond the scanned square only matter if nothing was closer.
            let above = ((hi.ceil()) as i64).max(1) as f64;
            if (above - lambda).abs() < (nearest - lambda).abs() {
                nearest = above;
            }
            return Err(Error::EmptyWindow { lo: lambda, hi, nearest });
        }
        Ok(Self { lambda, width, lattice })
    }

    /// Window `[λ, λ + 1/log λ]`.
    pub fn default_torus(lambda: f64) -> Result<Self> {
        Self::torus(lambda, crate::eigenbasis::default_window(lambda))
    }

    pub fn dimension(&self) -> usize {
        self.lattice.len()
    }

    pub fn modes(&self) -> Vec<EigenMode> {
        self.lattice
            .iter()
            .map(|&k| EigenMode::plane_wave(k).expect("window within the degree cap"))
            .collect()
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn check_torus_tube(tube: &Tube) -> Result<()> {
    if tube.geodesic.base.coords.iter().any(|c| !c.is_finite()) || !(tube.halfwidth > 0.0) {
        return Err(invalid("tube needs a finite base point and positive halfwidth"));
    }
    Ok(())
}

/// `G_jl = ∫_tube e_j ē_l dA` in closed form: on the Fermi rectangle
/// `x = b + s d + u n` the integrand is `e^{iΔ·x}/(4π²)` with `Δ = k_j − k_l`,
/// which factors into two one-dimensional exponential integrals.
pub fn window_gram(spectrum: &WindowSpectrum, tube: &Tube) -> Result<DMatrix<Complex64>> {
    check_torus_tube(tube)?;
    let seg = &tube.geodesic;
    let [d0, d1] = seg.direction;
    let (len, eps) = (seg.length, tube.halfwidth);
    let b = seg.base.coords;
    let n = spectrum.dimension();
    Ok(DMatrix::from_fn(n, n, |j, l| {
        let kj = spectrum.lattice[j];
        let kl = spectrum.lattice[l];
        let delta = [(kj[0] - kl[0]) as f64, (kj[1] - kl[1]) as f64];
        let alpha = delta[0] * d0 + delta[1] * d1;
        let beta = -delta[0] * d1 + delta[1] * d0;
        let phase = delta[0] * b[0] + delta[1] * b[1] + 0.5 * alpha * len;
        let modulus = len * sinc(0.5 * alpha * len) * 2.0 * eps * sinc(beta * eps) / (TAU * TAU);
        Complex64::from_polar(1.0, phase) * modulus
    }))
}

/// The same Gram matrix by tensor Gauss–Legendre quadrature in Fermi coordinates.
pub fn window_gram_quadrature(spectrum: &WindowSpectrum, tube: &Tube, resolution: f64) -> Result<DMatrix<Complex64>> {
    check_torus_tube(tube)?;
    if !(resolution >= MIN_RESOLUTION) {
        return Err(invalid(format!("resolution {resolution} below {MIN_RESOLUTION}")));
    }
    let model = ManifoldModel::flat_torus();
    let h = TAU / (spectrum.lambda + spectrum.width) / resolution;
    let nodes: Vec<(Point, f64)> = composite(0.0, tube.geodesic.length, h, 1)
        .iter()
        .flat_map(|&(s, ws)| {
            composite(-tube.halfwidth, tube.halfwidth, h, 2)
                .into_iter()
                .map(move |(u, wu)| (s, u, ws * wu))
        })
        .map(|(s, u, w)| (model.fermi_point(&tube.geodesic, s, u), w))
        .collect();
    let n = spectrum.dimension();
    let values: Vec<Vec<Complex64>> = spectrum
        .lattice
        .iter()
        .map(|&k| nodes.iter().map(|(p, _)| BasisKey::Torus { k }.evaluate(p)).collect())
        .collect();
    Ok(DMatrix::from_fn(n, n, |j, l| {
        nodes
            .iter()
            .enumerate()
            .map(|(i, (_, w))| values[j][i] * values[l][i].conj() * *w)
            .sum()
    }))
}

/// Top eigenvalue of a Hermitian positive semidefinite matrix by power
/// iteration on a fixed starting vector.
pub fn power_iteration(matrix: &DMatrix<Complex64>, tolerance: f64, max_iterations: usize) -> f64 {
    let n = matrix.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * ((i * 7919) % 17) as f64, 0.05 * (i % 5) as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let mut estimate = 0.0;
    for _ in 0..max_iterations {
        let w = matrix * &v;
        let rayleigh = v.dotc(&w).re;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(norm, 0.0);
        if (rayleigh - estimate).abs() <= tolerance * rayleigh.abs().max(1e-300) {
            return rayleigh;
        }
        estimate = rayleigh;
    }
    estimate
}

/// Top eigenvalue of a Hermitian matrix by Lanczos with full
/// reorthogonalization, stopping when the largest Ritz value settles to
/// `tolerance` (relative) or the Krylov space is exhausted.
pub fn lanczos_top_eigenvalue(matrix: &DMatrix<Complex64>, tolerance: f64) -> f64 {
    let n = matrix.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * ((i * 7919) % 17) as f64, 0.05 * (i % 5) as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut previous = f64::NEG_INFINITY;
    loop {
        let mut w = matrix * &v;
        alpha.push(v.dotc(&w).re);
        basis.push(v);
        // Two passes of Gram–Schmidt keep the basis orthonormal to rounding.
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&w);
                w -= q * c;
            }
        }
        let m = alpha.len();
        let ritz = SymmetricTridiagonal { alpha: &alpha, beta: &beta }.top_eigenvalue();
        let b = w.norm();
        if m == n || b <= 1e-14 * ritz.abs().max(1e-300) || (m % 5 == 0 && (ritz - previous).abs() <= tolerance * ritz.abs()) {
            return ritz;
        }
        if m % 5 == 0 {
            previous = ritz;
        }
        beta.push(b);
        v = w / Complex64::new(b, 0.0);
    }
}

struct SymmetricTridiagonal<'a> {
    alpha: &'a [f64],
    beta: &'a [f64],
}

impl SymmetricTridiagonal<'_> {
    fn top_eigenvalue(&self) -> f64 {
        let m = self.alpha.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                self.alpha[i]
            } else if i.abs_diff(j) == 1 {
                self.beta[i.min(j)]
            } else {
                0.0
            }
        });
        t.symmetric_eigenvalues().max()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramNorm {
    /// `‖E_window‖_{L²(M) → L²(tube)}`, the square root of the top eigenvalue.
    pub norm: f64,
    pub eigenvalue_max: f64,
    pub eigenvalue_min: f64,
    /// Top eigenvalue from Lanczos iteration, an independent check.
    pub lanczos_estimate: f64,
    pub dimension: usize,
}

impl GramNorm {
    pub fn norm_sq(&self) -> f64 {
        self.eigenvalue_max
    }
}

/// Operator norm of the window projector into the tube, from the dense
/// Hermitian eigensolve of the closed-form Gram matrix.
pub fn window_gram_norm(spectrum: &WindowSpectrum, tube: &Tube) -> Result<GramNorm> {
    let gram = window_gram(spectrum, tube)?;
    let eigenvalues = gram.clone().symmetric_eigenvalues();
    let eigenvalue_max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eigenvalue_min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let lanczos_estimate = lanczos_top_eigenvalue(&gram, 1e-14);
    Ok(GramNorm {
        norm: eigenvalue_max.max(0.0).sqrt(),
        eigenvalue_max,
        eigenvalue_min,
        lanczos_estimate,
        dimension: spectrum.dimension(),
    })
}

/// The (qm) left side `‖ψ‖₂ + (log λ/λ)‖(Δ + λ²)ψ‖₂` in coefficient space.
pub fn quasimode_value(psi: &EigenMode, lambda: f64) -> f64 {
    qm_value(psi, lambda)
}

/// `c(λ) = (log λ)^{-1/2}`, the two-dimensional improvement factor.
pub fn c_lambda(lambda: f64) -> f64 {
    lambda.ln().powf(-0.5)
}

#[cfg(test)]
mod tests;
