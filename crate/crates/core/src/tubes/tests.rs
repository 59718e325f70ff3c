use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;

use super::*;
use crate::eigenbasis::{highest_weight_normalization, TorusTerm};
use crate::quadrature::GaussLegendre;
use crate::Complex64;

fn equator(length: f64) -> GeodesicSegment {
    ManifoldModel::sphere().segment(Point::new(FRAC_PI_2, 0.0), [0.0, 1.0], length).unwrap()
}

fn torus_axis(length: f64) -> GeodesicSegment {
    ManifoldModel::flat_torus().segment(Point::new(0.0, 0.0), [1.0, 0.0], length).unwrap()
}

/// Highest-weight mass in the equatorial band `|u| ≤ ε`, reduced to one
/// dimension: `π N_k² ∫ cos^{2k+1} u du`.
fn band_fraction(k: u32, eps: f64) -> f64 {
    let n = highest_weight_normalization(k);
    let rule = GaussLegendre::new(400);
    PI * n * n * rule.integrate(-eps, eps, |u| u.cos().powi(2 * k as i32 + 1))
}

#[test]
fn torus_plane_wave_tube_mass() {
    for lambda in [100i64, 400, 1600] {
        let e = EigenMode::plane_wave([lambda, 0]).unwrap();
        let eps = (lambda as f64).powf(-0.5);
        let got = tube_mass(&e, &Tube::new(torus_axis(1.0), eps), 8.0).unwrap();
        let want = 2.0 * eps / (4.0 * PI * PI);
        assert!((got - want).abs() < 1e-6 * want, "λ = {lambda}: {got} vs {want}");
    }
    let e = EigenMode::plane_wave([100, 0]).unwrap();
    let got = tube_mass(&e, &Tube::new(torus_axis(1.0), 0.1), 6.0).unwrap();
    assert!((got - 0.005_066_059_182_116_889).abs() < 1e-12);
}

#[test]
fn tube_covering_the_manifold_has_unit_mass() {
    let torus = EigenMode::torus_sine(6).unwrap();
    let m = tube_mass(&torus, &Tube::new(torus_axis(TAU), PI), 8.0).unwrap();
    assert!((m - 1.0).abs() < 1e-12, "{m}");
    for e in [EigenMode::highest_weight(10).unwrap(), EigenMode::zonal(7).unwrap()] {
        let m = tube_mass(&e, &Tube::new(equator(TAU), FRAC_PI_2), 8.0).unwrap();
        assert!((m - 1.0).abs() < 1e-10, "{e}: {m}");
    }
}

#[test]
fn highest_weight_equatorial_fraction() {
    let frozen = [
        (16, 0.854_264_805_776_193),
        (64, 0.845_652_925_695_340),
        (256, 0.843_442_693_451_183),
    ];
    for (k, want) in frozen {
        let e = EigenMode::highest_weight(k).unwrap();
        let eps = (k as f64).powf(-0.5);
        let got = tube_mass(&e, &Tube::new(equator(TAU), eps), 8.0).unwrap();
        assert!((got - want).abs() < 1e-9, "k = {k}: {got}");
        assert!((band_fraction(k, eps) - want).abs() < 1e-12);
    }
}

#[test]
fn rejects_bad_tubes() {
    let e = EigenMode::zonal(4).unwrap();
    assert!(tube_mass(&e, &Tube::new(equator(1.0), 2.0), 8.0).is_err());
    assert!(tube_mass(&e, &Tube::new(equator(1.0), 0.1), 5.0).is_err());
    assert!(tube_mass(&e, &Tube::new(equator(1.0), 0.0), 8.0).is_err());
}

#[test]
fn plane_wave_kn_norm_is_family_independent() {
    let model = ManifoldModel::flat_torus();
    let e = EigenMode::plane_wave([0, 144]).unwrap();
    let family = GeodesicFamily::default_for(&model, &e).unwrap();
    assert_eq!(family.len(), 32 * 64 + 16);
    let kn = kn_norm(&e, &family, 6.0, 1.0).unwrap();
    let want = 2.0 / 12.0 * model.segment_length() / (4.0 * PI * PI);
    assert!((kn.max_mass - want).abs() < 1e-9 * want);
}

#[test]
fn highest_weight_kn_maximizer_is_equatorial() {
    let model = ManifoldModel::sphere();
    let e = EigenMode::highest_weight(32).unwrap();
    let family = GeodesicFamily::default_for(&model, &e).unwrap();
    let kn = kn_norm(&e, &family, 6.0, 1.0).unwrap();
    let seg = kn.segment;
    assert!((seg.base.x() - FRAC_PI_2).abs() < 1e-12 && seg.direction[0].abs() < 1e-12);
    // One unit of the equator starting at a crest of cos²(kφ).
    let n = highest_weight_normalization(32);
    let rule = GaussLegendre::new(200);
    let phi = rule.integrate(0.0, 1.0, |p| (32.0 * p).cos().powi(2));
    let eps = e.frequency().powf(-0.5);
    let u = rule.integrate(-eps, eps, |u| u.cos().powi(65));
    assert!((kn.max_mass - n * n * phi * u).abs() < 1e-9, "{} {}", kn.max_mass, n * n * phi * u);
}

#[test]
fn singleton_family() {
    let e = EigenMode::zonal(20).unwrap();
    let seg = equator(1.0);
    let kn = kn_norm(&e, &GeodesicFamily::singleton(seg), 6.0, 1.0).unwrap();
    let mass = tube_mass(&e, &Tube::kn(seg, e.frequency(), 1.0), 6.0).unwrap();
    assert_eq!(kn.value, mass.sqrt());
    assert!(kn_norm(&e, &GeodesicFamily { segments: vec![], description: String::new() }, 6.0, 1.0).is_err());
}

#[test]
fn restriction_examples() {
    let e = EigenMode::plane_wave([7, -24]).unwrap();
    let m = restriction_mass(&e, &torus_axis(1.0), 6.0).unwrap();
    assert!((m - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);

    let k = 40u32;
    let e = EigenMode::highest_weight(k).unwrap();
    let n2 = highest_weight_normalization(k).powi(2);
    let full = restriction_mass(&e, &equator(TAU), 12.0).unwrap();
    assert!((full - PI * n2).abs() < 1e-12);
    let unit = restriction_mass(&e, &equator(1.0), 12.0).unwrap();
    let kf = k as f64;
    assert!((unit - n2 * (0.5 + (2.0 * kf).sin() / (4.0 * kf))).abs() < 1e-12, "{unit} {}", n2 * (0.5 + (2.0 * kf).sin() / (4.0 * kf)));
}

#[test]
fn resolution_doubling_converges() {
    let cases = [
        (EigenMode::highest_weight(128).unwrap(), equator(1.0)),
        (EigenMode::zonal(64).unwrap(), ManifoldModel::sphere().segment(Point::new(0.5, 0.3), [-0.6, 0.8], 1.0).unwrap()),
        (
            EigenMode::torus_wave(vec![
                TorusTerm { k: [0, 256], c: Complex64::new(0.6, 0.0) },
                TorusTerm { k: [256, 0], c: Complex64::new(0.0, 0.8) },
            ])
            .unwrap(),
            ManifoldModel::flat_torus().segment_at_angle(Point::new(1.0, 2.0), 0.3, PI / 10.0).unwrap(),
        ),
    ];
    for (e, seg) in cases {
        let tube = Tube::kn(seg, e.frequency(), 1.0);
        let a = tube_mass(&e, &tube, 6.0).unwrap();
        let b = tube_mass(&e, &tube, 12.0).unwrap();
        assert!((a - b).abs() < 1e-6 * b, "{e}: {a} vs {b}");
    }
}

#[test]
fn escape_time_examples() {
    let torus = ManifoldModel::flat_torus();
    let tube = Tube::new(torus_axis(1.0), 0.1);
    let t = escape_time(&torus, &tube, 0.2, 0.01).unwrap().time().unwrap();
    assert!((t - 0.11 / 0.2f64.sin()).abs() < 1e-7);
    assert!((t - 0.553_683).abs() < 1e-6);

    let h = ManifoldModel::hyperbolic_plane();
    let axis = h.segment(Point::new(0.0, 1.0), [0.0, 1.0], 1.0).unwrap();
    let t = escape_time(&h, &Tube::new(axis, 0.1), 0.2, 0.01).unwrap().time().unwrap();
    // Along the ray at angle θ, sinh d(γ(t), axis) = sinh t sin θ.
    let closed = (0.11f64.sinh() / 0.2f64.sin()).asinh();
    assert!((t - closed).abs() < 1e-7);
    assert!(t <= 0.11 / 0.2f64.sin());

    let sphere = ManifoldModel::sphere();
    for (model, seg) in [(&torus, torus_axis(1.0)), (&h, axis), (&sphere, equator(1.0))] {
        let t = escape_time(model, &Tube::new(seg, 0.1), FRAC_PI_2, 0.0).unwrap().time().unwrap();
        assert!((t - 0.1).abs() < 1e-7, "{:?}", model.kind());
    }
    assert!(escape_time(&torus, &tube, 0.0, 0.01).is_err());
    assert!(escape_time(&torus, &tube, 2.0, 0.01).is_err());
}

#[test]
fn escape_never_happens_along_a_parallel_great_circle() {
    // Launched almost along the equator, the great circle stays within ε + r for a long time.
    let sphere = ManifoldModel::sphere();
    let e = escape_time(&sphere, &Tube::new(equator(1.0), 0.5), 1e-3, 0.1).unwrap();
    assert_eq!(e, Escape::Never);
}

#[test]
fn escape_time_lower_bound_on_the_flat_model() {
    let torus = ManifoldModel::flat_torus();
    for lambda in [100.0f64, 400.0, 1600.0] {
        for delta in [0.1, 0.25, 0.4] {
            let theta = lambda.powf(-0.5 + delta);
            let eps = lambda.powf(-0.5);
            let r = 1.0 / (theta * lambda);
            let t = escape_time(&torus, &Tube::new(torus_axis(1.0), eps), theta, r).unwrap().time().unwrap();
            assert!(t >= 0.9 * eps / theta, "λ = {lambda}, δ = {delta}");
            assert!((t - (eps + r) / theta.sin()).abs() < 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tube_mass_is_monotone_and_bounded(colat in 0.2..2.9f64, lon in 0.0..TAU, angle in 0.0..TAU, e1 in 0.01..0.4f64, e2 in 0.01..0.4f64, l in 2u32..24) {
        let model = ManifoldModel::sphere();
        let seg = model.segment_at_angle(Point::new(colat, lon), angle, 1.0).unwrap();
        let e = EigenMode::sphere_harmonic(l, (l / 2) as i32).unwrap();
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let a = tube_mass(&e, &Tube::new(seg, lo), 6.0).unwrap();
        let b = tube_mass(&e, &Tube::new(seg, hi), 6.0).unwrap();
        prop_assert!(a <= b + 1e-12);
        prop_assert!(b <= 1.0 + 1e-6);
    }
}
