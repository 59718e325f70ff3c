//! Gauss–Legendre rules, composite panels and global grids on the model surfaces.

use std::f64::consts::PI;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the three-term recurrence, seeded with
    /// Tricomi's asymptotic guesses. Exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let k = i as f64 + 1.0;
            let mut x = (PI * (k - 0.25) / (nf + 0.5)).cos()
                * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights affinely mapped onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel order used by [`composite`].
pub const PANEL_ORDER: usize = 10;

/// Composite Gauss–Legendre nodes on `[a, b]` whose largest gap between
/// neighbouring nodes (across panel boundaries too) is at most `max_spacing`,
/// using at least `min_panels` panels.
pub fn composite(a: f64, b: f64, max_spacing: f64, min_panels: usize) -> Vec<(f64, f64)> {
    let length = (b - a).abs();
    if length == 0.0 {
        return Vec::new();
    }
    let rule = GaussLegendre::new(PANEL_ORDER);
    let x = rule.nodes();
    // Largest gap as a fraction of the panel length.
    let interior = x.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let gap = 0.5 * interior.max(2.0 * (1.0 + x[0]));
    let panels = ((length * gap / max_spacing).ceil() as usize).max(min_panels.max(1));
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * PANEL_ORDER);
    for j in 0..panels {
        let lo = a + j as f64 * h;
        out.extend(rule.on_interval(lo, lo + h));
    }
    out
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times the
/// trapezoid rule in longitude. Integrates `f dA` with total area `4π`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    /// Colatitudes with their weights (already including the `d(cos θ)` Jacobian).
    pub rings: Vec<(f64, f64)>,
    /// Uniform longitudes.
    pub longitudes: Vec<f64>,
    pub longitude_weight: f64,
}

impl SphereGrid {
    pub fn new(n_colat: usize, n_lon: usize) -> Self {
        let gl = GaussLegendre::new(n_colat);
        let rings = gl
            .nodes()
            .iter()
            .zip(gl.weights())
            .map(|(&x, &w)| (x.clamp(-1.0, 1.0).acos(), w))
            .collect();
        let longitudes = (0..n_lon).map(|j| 2.0 * PI * j as f64 / n_lon as f64).collect();
        Self {
            rings,
            longitudes,
            longitude_weight: 2.0 * PI / n_lon as f64,
        }
    }

    /// Grid fine enough for harmonics up to degree `degree` raised to moderate
    /// powers, and at least `per_wavelength` nodes per wavelength `2π/λ`.
    pub fn for_degree(degree: usize, lambda: f64, per_wavelength: f64) -> Self {
        let by_degree = 4 * degree + 16;
        let by_wavelength = (per_wavelength * lambda / 2.0).ceil() as usize;
        let n = by_degree.max(by_wavelength);
        Self::new(n, 2 * n)
    }
}

/// Periodic trapezoid grid on the torus `[0, 2π)²`, shifted by `offset` cells.
#[derive(Debug, Clone)]
pub struct TorusGrid {
    pub n: usize,
    pub offset: f64,
}

impl TorusGrid {
    pub fn new(n: usize) -> Self {
        Self { n, offset: 0.0 }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        (j as f64 + self.offset) * self.spacing()
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }
}
