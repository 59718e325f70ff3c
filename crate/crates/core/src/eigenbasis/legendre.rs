//! Orthonormalized associated Legendre functions by the standard three-term
//! recurrence, carried with a separate logarithmic scale so that
//! `sin^m θ` factors for large `m` neither underflow nor overflow mid-recurrence.

use std::f64::consts::PI;

const RESCALE: f64 = 1e150;

/// `P̄_l^m(cos θ)` with `Y_l^m(θ, φ) = P̄_l^m(cos θ) e^{imφ}` orthonormal on the
/// unit sphere (Condon–Shortley phase included). Requires `0 ≤ m ≤ l`.
pub fn normalized_legendre(l: u32, m: u32, colatitude: f64) -> f64 {
    debug_assert!(m <= l);
    let (s, x) = colatitude.sin_cos();
    let s = s.abs();
    if m > 0 && s == 0.0 {
        return 0.0;
    }
    // log |P̄_m^m|
    let mut log_scale = 0.5 * ((2 * m + 1) as f64 / (4.0 * PI)).ln();
    for k in 1..=m {
        let kf = k as f64;
        log_scale += 0.5 * ((2.0 * kf - 1.0) / (2.0 * kf)).ln();
    }
    if m > 0 {
        log_scale += m as f64 * s.ln();
    }
    let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
    let mut p_prev = sign; // P̄_m^m / e^{log_scale}
    if l == m {
        return finish(p_prev, log_scale);
    }
    let mf = m as f64;
    let mut p = x * (2.0 * mf + 3.0).sqrt() * p_prev; // P̄_{m+1}^m
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lm1 = lf - 1.0;
        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
        let next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
        if p.abs() > RESCALE {
            p /= RESCALE;
            p_prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    finish(p, log_scale)
}

fn finish(value: f64, log_scale: f64) -> f64 {
    if value == 0.0 {
        return 0.0;
    }
    let log_total = value.abs().ln() + log_scale;
    if log_total < -745.0 {
        0.0
    } else {
        value.signum() * log_total.exp()
    }
}

/// Legendre polynomial `P_l(x)`.
pub fn legendre_polynomial(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return 1.0;
    }
    for k in 2..=l {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        let th = 0.7f64;
        let (s, c) = th.sin_cos();
        let y00 = (1.0 / (4.0 * PI)).sqrt();
        assert!((normalized_legendre(0, 0, th) - y00).abs() < 1e-15);
        let y10 = (3.0 / (4.0 * PI)).sqrt() * c;
        assert!((normalized_legendre(1, 0, th) - y10).abs() < 1e-15);
        let y11 = -(3.0 / (8.0 * PI)).sqrt() * s;
        assert!((normalized_legendre(1, 1, th) - y11).abs() < 1e-15);
        let y22 = 0.25 * (15.0 / (2.0 * PI)).sqrt() * s * s;
        assert!((normalized_legendre(2, 2, th) - y22).abs() < 1e-15);
        let y20 = 0.25 * (5.0 / PI).sqrt() * (3.0 * c * c - 1.0);
        assert!((normalized_legendre(2, 0, th) - y20).abs() < 1e-15);
    }

    #[test]
    fn zonal_matches_legendre_polynomial() {
        for l in [3u32, 17, 200] {
            for th in [0.1f64, 1.0, 2.5] {
                let want = ((2 * l + 1) as f64 / (4.0 * PI)).sqrt() * legendre_polynomial(l, th.cos());
                assert!((normalized_legendre(l, 0, th) - want).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn huge_order_stays_finite() {
        let v = normalized_legendre(4096, 4000, 0.3);
        assert!(v.is_finite());
        let w = normalized_legendre(4096, 4096, std::f64::consts::FRAC_PI_2);
        assert!(w.is_finite() && w.abs() > 0.0);
    }
}
