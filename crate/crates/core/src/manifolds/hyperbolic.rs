//! Upper half-plane helpers: Möbius transformations and closed-form distances.

use num_complex::Complex64;
use std::ops::Mul;

/// A real 2×2 matrix acting on the upper half-plane by `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// Translation by `t` along the imaginary axis, `diag(e^{t/2}, e^{-t/2})`.
    pub fn axial_translation(t: f64) -> Self {
        Self::new((0.5 * t).exp(), 0.0, 0.0, (-0.5 * t).exp())
    }

    /// Rotation about `i` turning tangent vectors at `i` counterclockwise by `angle`.
    pub fn rotation_about_i(angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self::new(c, s, -s, c)
    }

    /// The orientation-preserving isometry sending `i` to `z` with tangent
    /// direction "up" at `i` mapped to the unit direction `(dx, dy)` at `z`.
    pub fn frame_at(z: Complex64, direction: [f64; 2]) -> Self {
        let sy = z.im.sqrt();
        let lift = Self::new(sy, z.re / sy, 0.0, 1.0 / sy);
        let psi = direction[1].atan2(direction[0]);
        lift * Self::rotation_about_i(psi - std::f64::consts::FRAC_PI_2)
    }

    /// Representative with first nonzero entry positive.
    pub fn sign_normalized(self) -> Self {
        let first = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|v| *v != 0.0)
            .unwrap_or(1.0);
        if first < 0.0 {
            Self::new(-self.a, -self.b, -self.c, -self.d)
        } else {
            self
        }
    }

    /// Entrywise max distance between sign-normalized representatives.
    pub fn matrix_distance(&self, other: &Self) -> f64 {
        let p = self.sign_normalized();
        let q = other.sign_normalized();
        [p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `d(i, α·i)`.
    pub fn displacement(&self) -> f64 {
        distance(Complex64::i(), self.apply(Complex64::i()))
    }
}

impl Mul for Mobius {
    type Output = Mobius;

    fn mul(self, r: Mobius) -> Mobius {
        Mobius::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Hyperbolic distance, `2 asinh(|p - q| / (2 sqrt(y_p y_q)))`.
pub fn distance(p: Complex64, q: Complex64) -> f64 {
    2.0 * ((p - q).norm() / (2.0 * (p.im * q.im).sqrt())).asinh()
}

/// Distance from `z` to the imaginary axis.
pub fn distance_to_imaginary_axis(z: Complex64) -> f64 {
    (z.re.abs() / z.im).asinh()
}

/// Unit tangent direction (angle in the conformal chart) at `from` of the
/// geodesic running to `to`.
pub fn initial_direction(from: Complex64, to: Complex64) -> f64 {
    // Move `from` to i by an affine map (direction preserving), then use the
    // Cayley transform where geodesics through the origin are straight.
    let w = (to - from.re) / from.im;
    let disk = (w - Complex64::i()) / (w + Complex64::i());
    // Cayley has derivative -i/2 at i, so z-directions are i times disk directions.
    let dir = Complex64::i() * disk;
    dir.im.atan2(dir.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_maps_i_and_direction() {
        let z = Complex64::new(0.3, 2.0);
        let dir = [0.6, -0.8];
        let f = Mobius::frame_at(z, dir);
        assert!((f.det() - 1.0).abs() < 1e-14);
        assert!((f.apply(Complex64::i()) - z).norm() < 1e-14);
        // Push a short vertical step through the map.
        let h: f64 = 1e-7;
        let p = f.apply(Complex64::new(0.0, (h).exp()));
        let v = (p - z) / h;
        let v = v / v.norm();
        assert!((v.re - dir[0]).abs() < 1e-6 && (v.im - dir[1]).abs() < 1e-6);
    }

    #[test]
    fn axial_translation_displacement() {
        for t in [0.1, 1.0, 5.0] {
            assert!((Mobius::axial_translation(t).displacement() - t).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_direction_vertical_and_horizontal() {
        let up = initial_direction(Complex64::i(), Complex64::new(0.0, 3.0));
        assert!((up - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // Geodesic from i to 1+i: semicircle centered at 1/2 ... heading right and up.
        let a = initial_direction(Complex64::i(), Complex64::new(1.0, 1.0));
        assert!(a > 0.0 && a < std::f64::consts::FRAC_PI_2);
    }
}
