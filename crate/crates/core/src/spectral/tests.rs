use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::eigenbasis::make_quasimode;
use crate::manifolds::GeodesicSegment;
use crate::quadrature::GaussLegendre;
use crate::tubes::tube_mass;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn seg(x: f64, y: f64, angle: f64, length: f64) -> GeodesicSegment {
    ManifoldModel::flat_torus().segment_at_angle(Point::new(x, y), angle, length).unwrap()
}

fn inner(a: &Coefficients, b: &Coefficients) -> Complex64 {
    a.iter()
        .map(|(k, x)| b.iter().filter(|(l, _)| l == k).map(|(_, y)| x * y.conj()).sum::<Complex64>())
        .sum()
}

#[test]
fn default_profile() {
    let f = SpectralFilter::new(2.0).unwrap();
    assert_eq!(f.rho(0.0), 1.0);
    for m in 1..5 {
        assert!(f.rho(4.0 * PI * m as f64).abs() < 1e-30);
    }
    // ρ(s) = ∫ ρ̂(t) e^{its} dt with the triangle supported in [-1/2, 1/2].
    let rule = GaussLegendre::new(30);
    for s in [0.0, 0.7, 3.0, 11.0, 40.0] {
        let back = rule.integrate(-0.5, 0.0, |t| f.fourier_transform(t) * (t * s).cos())
            + rule.integrate(0.0, 0.5, |t| f.fourier_transform(t) * (t * s).cos());
        assert!((back - f.rho(s)).abs() < 1e-13, "s = {s}");
    }
    assert_eq!(f.fourier_transform(0.5), 0.0);
    assert_eq!(f.fourier_transform(-0.7), 0.0);
    assert_eq!(f.fourier_support(), 0.5);
    assert!((f.chi(3.0) - f.rho(3.0).powi(2)).abs() < 1e-16);
    assert!(SpectralFilter::new(0.0).is_err());
    let g = SpectralFilter::logarithmic(1.0, 100.0).unwrap();
    assert!((g.time_scale - 100f64.ln()).abs() < 1e-15);
}

#[test]
fn filter_examples() {
    let lambda = 10.0;
    let filter = SpectralFilter::logarithmic(1.0, lambda).unwrap();
    let on = vec![(BasisKey::Torus { k: [6, 8] }, c(0.3, -0.4))];
    assert_eq!(apply_filter(&filter, lambda, &on), on);
    // T(λ - λ_j) = 8π is a zero of ρ.
    let filter = SpectralFilter::new(8.0 * PI / (13.0 - 10.0)).unwrap();
    let off = vec![(BasisKey::Torus { k: [5, 12] }, c(1.0, 0.0))];
    assert!(apply_filter(&filter, 10.0, &off)[0].1.norm() < 1e-30);
    let zero = vec![(BasisKey::Torus { k: [1, 0] }, c(0.0, 0.0))];
    assert_eq!(apply_filter(&filter, 10.0, &zero)[0].1, c(0.0, 0.0));
}

#[test]
fn empty_window_names_a_neighbour() {
    match WindowSpectrum::torus(1.5, 0.1) {
        Err(Error::EmptyWindow { lo, hi, nearest }) => {
            assert_eq!(lo, 1.5);
            assert!((hi - 1.6).abs() < 1e-15);
            assert!((nearest - 2f64.sqrt()).abs() < 1e-15);
            assert!(WindowSpectrum::torus(nearest, 0.1).is_ok());
        }
        other => panic!("expected an empty window, got {other:?}"),
    }
}

#[test]
fn window_is_exhaustive() {
    let w = WindowSpectrum::torus(5.0, 1e-9).unwrap();
    assert_eq!(w.dimension(), 12);
    let w = WindowSpectrum::default_torus(64.0).unwrap();
    for k in &w.lattice {
        let f = (k[0] as f64).hypot(k[1] as f64);
        assert!(f >= 64.0 && f <= 64.0 + 1.0 / 64f64.ln());
    }
    let brute = (-70i64..=70)
        .flat_map(|a| (-70i64..=70).map(move |b| (a as f64).hypot(b as f64)))
        .filter(|&f| f >= 64.0 && f <= 64.0 + 1.0 / 64f64.ln())
        .count();
    assert_eq!(brute, w.dimension());
}

#[test]
fn one_class_window_matches_the_two_by_two_formula() {
    let k = 9i64;
    let spectrum = WindowSpectrum { lambda: 9.0, width: 0.0, lattice: vec![[k, 0], [-k, 0]] };
    let (len, eps) = (0.8, 0.2);
    let tube = Tube::new(seg(0.3, 1.0, 0.0, len), eps);
    let g = window_gram_norm(&spectrum, &tube).unwrap();
    let area = 2.0 * eps * len / (4.0 * PI * PI);
    // Off-diagonal: e^{2ik b} ∫_0^L e^{2iks} ds · 2ε / (4π²).
    let kf = k as f64;
    let off = Complex64::from_polar(1.0, 2.0 * kf * 0.3) * (Complex64::from_polar(1.0, 2.0 * kf * len) - 1.0)
        / c(0.0, 2.0 * kf)
        * (2.0 * eps / (4.0 * PI * PI));
    assert!((g.eigenvalue_max - (area + off.norm())).abs() < 1e-15);
    assert!((g.eigenvalue_min - (area - off.norm())).abs() < 1e-15);
}

#[test]
fn full_manifold_tube_is_the_identity() {
    for lambda in [64.0, 200.0] {
        let w = WindowSpectrum::default_torus(lambda).unwrap();
        let tube = Tube::new(seg(0.4, 2.0, 0.0, TAU), PI);
        let g = window_gram_norm(&w, &tube).unwrap();
        assert!((g.norm - 1.0).abs() < 1e-9);
        assert!((g.eigenvalue_min - 1.0).abs() < 1e-9);
    }
}

#[test]
fn closed_form_matches_quadrature() {
    let w = WindowSpectrum::torus(20.0, 0.3).unwrap();
    for (angle, len) in [(0.0, 1.0), (0.7, PI / 10.0), (2.1, 2.3)] {
        let tube = Tube::new(seg(1.1, 5.0, angle, len), 0.2);
        let a = window_gram(&w, &tube).unwrap();
        let b = window_gram_quadrature(&w, &tube, 8.0).unwrap();
        assert!((a - b).camax() < 1e-12, "angle {angle}");
    }
}

#[test]
fn gram_spectrum_lies_in_the_unit_interval() {
    for lambda in [64.0, 128.0, 256.0] {
        let w = WindowSpectrum::default_torus(lambda).unwrap();
        let tube = Tube::new(seg(0.0, 0.0, 0.0, PI / 10.0), lambda.powf(-0.5));
        let g = window_gram_norm(&w, &tube).unwrap();
        assert!(g.eigenvalue_min >= -1e-9 && g.eigenvalue_max <= 1.0 + 1e-9);
        assert!((g.lanczos_estimate - g.eigenvalue_max).abs() < 1e-12 * g.eigenvalue_max);
        let gram = window_gram(&w, &tube).unwrap();
        assert!((&gram - gram.adjoint()).camax() < 1e-15);
        let power = power_iteration(&gram, 1e-13, 50_000);
        assert!((power - g.eigenvalue_max).abs() < 1e-6 * g.eigenvalue_max, "{power} vs {}", g.eigenvalue_max);
    }
}

#[test]
fn window_functions_are_dominated_by_the_gram_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = WindowSpectrum::default_torus(40.0).unwrap();
    let tube = Tube::new(seg(2.0, 1.0, 0.4, PI / 10.0), 40f64.powf(-0.5));
    let norm_sq = window_gram_norm(&w, &tube).unwrap().norm_sq();
    for _ in 0..20 {
        let raw: Vec<Complex64> = w.lattice.iter().map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let n = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let terms = w.lattice.iter().zip(&raw).map(|(&k, z)| (BasisKey::Torus { k }, z / n)).collect();
        let f = EigenMode::from_coefficients(terms, 40.0).unwrap();
        assert!(tube_mass(&f, &tube, 8.0).unwrap() <= norm_sq * (1.0 + 1e-9));
    }
}

#[test]
fn power_iteration_on_a_known_matrix() {
    let m = DMatrix::from_fn(3, 3, |i, j| if i == j { c([1.0, 3.0, 2.0][i], 0.0) } else { c(0.0, 0.0) });
    assert!((power_iteration(&m, 1e-14, 10_000) - 3.0).abs() < 1e-10);
    assert_eq!(power_iteration(&DMatrix::zeros(2, 2), 1e-12, 10), 0.0);
    assert!((lanczos_top_eigenvalue(&m, 1e-14) - 3.0).abs() < 1e-14);
    assert_eq!(lanczos_top_eigenvalue(&DMatrix::zeros(0, 0), 1e-14), 0.0);
    let h = DMatrix::from_fn(6, 6, |i, j| c(1.0 / (1 + i + j) as f64, if i == j { 0.0 } else { 0.1 * (i as f64 - j as f64) }));
    let top = h.clone().symmetric_eigenvalues().max();
    assert!((lanczos_top_eigenvalue(&h, 1e-15) - top).abs() < 1e-13);
}

#[test]
fn quasimode_value_examples() {
    let e = EigenMode::plane_wave([3, 4]).unwrap();
    assert_eq!(quasimode_value(&e, 5.0), 1.0);
    let half = make_quasimode(std::slice::from_ref(&e), &[c(0.5, 0.0)], 5.0).unwrap();
    assert_eq!(quasimode_value(&half, 5.0), 0.5);
    let q = EigenMode::from_coefficients(vec![(BasisKey::Torus { k: [100, 0] }, c(0.6, 0.0)), (BasisKey::Torus { k: [101, 0] }, c(0.0, 0.3))], 100.0).unwrap();
    let direct = (0.36f64 + 0.09).sqrt() + 100f64.ln() / 100.0 * (0.09 * (10000.0f64 - 10201.0).powi(2)).sqrt();
    assert!((quasimode_value(&q, 100.0) - direct).abs() < 1e-12);
    assert!((c_lambda(f64::exp(4.0)) - 0.5).abs() < 1e-15);
}

proptest! {
    #[test]
    fn filter_reproduces_and_is_self_adjoint(t in 0.1..20.0f64, re in prop::array::uniform4(-1.0..1.0f64), im in prop::array::uniform4(-1.0..1.0f64)) {
        let filter = SpectralFilter::new(t).unwrap();
        let keys = [[5, 0], [3, 4], [6, 1], [2, 7]].map(|k| BasisKey::Torus { k });
        let f: Coefficients = keys.iter().zip(re.iter().zip(&im)).map(|(&k, (&a, &b))| (k, c(a, b))).collect();
        let g: Coefficients = keys.iter().zip(im.iter().zip(&re)).map(|(&k, (&a, &b))| (k, c(a, -b))).collect();
        let lhs = inner(&apply_filter(&filter, 5.3, &f), &g);
        let rhs = inner(&f, &apply_filter(&filter, 5.3, &g));
        prop_assert!((lhs - rhs).norm() < 1e-12);
        let at_five: Coefficients = f.iter().take(2).cloned().collect();
        prop_assert_eq!(apply_filter(&filter, 5.0, &at_five), at_five);
    }
}
