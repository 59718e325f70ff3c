use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn imaginary_axis() -> (ManifoldModel, GeodesicSegment) {
    let h = ManifoldModel::hyperbolic_plane();
    let axis = h.segment(Point::new(0.0, 1.0), [0.0, 1.0], 1.0).unwrap();
    (h, axis)
}

#[test]
fn cone_angle_examples() {
    let theta = cone_half_angle(3.0, 1.0, 1.0).unwrap();
    assert!((theta - 0.104_080_073_998_880_4).abs() < 1e-15);
    for (t, k) in [(1.0, 0.0), (3.0, 1.0), (7.0, 0.5)] {
        assert_eq!(cone_half_angle(t, 0.0, k).unwrap(), 0.0);
    }
    let flat = cone_half_angle(3.0, 1.0, 0.0).unwrap();
    assert!((flat - 2.0 * (1.0f64 / 6.0).asin()).abs() < 1e-15);
    assert!((cone_half_angle(3.0, 1.0, 1e-6).unwrap() - flat).abs() <= 1e-9);
}

#[test]
fn cone_angle_domain_errors() {
    assert!(matches!(cone_half_angle(1.0, 3.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(cone_half_angle(0.5, 2.0, 1.0), Err(Error::Domain(_))));
    assert!(cone_half_angle(0.0, 1.0, 1.0).is_err());
    assert!(cone_half_angle(1.0, -1.0, 1.0).is_err());
    assert!(ConeSpec::new(1.0, 3.0, 0.0).is_err());
}

#[test]
fn cone_angle_is_monotone() {
    for &r in &[0.25, 0.5, 1.0, 2.0] {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let t = 1.5 + 0.25 * i as f64;
            let theta = cone_half_angle(t, r, 1.0).unwrap();
            assert!(theta < prev);
            prev = theta;
        }
    }
    for &t in &[2.0, 4.0, 6.0] {
        let mut prev = -1.0;
        for i in 1..40 {
            let theta = cone_half_angle(t, 0.05 * i as f64, 1.0).unwrap();
            assert!(theta > prev);
            prev = theta;
        }
    }
}

#[test]
fn isosceles_examples() {
    assert_eq!(isosceles_opposite_length(3.0, 0.0).unwrap(), 0.0);
    for t in [1.0, 2.0, 4.0, 6.0, 9.0] {
        for r in [0.1, 0.5, 1.0, 1.7] {
            let theta = cone_half_angle(t, r, 1.0).unwrap();
            let ell = isosceles_opposite_length(t, theta).unwrap();
            assert!((ell - r).abs() <= 1e-12, "T = {t}, R = {r}: {ell}");
        }
    }
    // Geodesic shooting in the half-plane model.
    let (h, _) = imaginary_axis();
    let apex = Point::new(0.3, 0.7);
    let a = h.segment_at_angle(apex, 0.4, 2.0).unwrap();
    let b = h.segment_at_angle(apex, 0.4 + FRAC_PI_6, 2.0).unwrap();
    let shot = h.distance(&h.geodesic_point(&a, 2.0), &h.geodesic_point(&b, 2.0));
    let want = 2.0 * ((PI / 12.0).sin() * 2f64.sinh()).asinh();
    assert!((isosceles_opposite_length(2.0, FRAC_PI_6).unwrap() - want).abs() < 1e-15);
    assert!((shot - want).abs() < 1e-10);
    assert!(isosceles_opposite_length(1.0, 4.0).is_err());
}

#[test]
fn hinge_examples() {
    let torus = ManifoldModel::flat_torus();
    let hinge = hinge_comparison(&torus, Point::new(1.0, 1.0), 5.0, 2.0).unwrap();
    assert!((hinge.model - hinge.flat).abs() < 1e-10);

    let (h, _) = imaginary_axis();
    let hinge = hinge_comparison(&h, Point::new(-0.4, 2.0), 3.0, 1.2).unwrap();
    assert!((hinge.model - hinge.hyperbolic).abs() < 1e-8);

    let s = ManifoldModel::sphere();
    let hinge = hinge_comparison(&s, Point::new(1.0, 0.5), 1.0, FRAC_PI_3).unwrap();
    let oracle = (1f64.cos().powi(2) + 1f64.sin().powi(2) * FRAC_PI_3.cos()).acos();
    assert!((hinge.model - oracle).abs() < 1e-12);
    assert!(hinge.model < hinge.flat);
    assert!(!hinge.sandwiched(1e-8));
}

#[test]
fn hinge_sandwich_on_grids() {
    let (h, _) = imaginary_axis();
    let models = [ManifoldModel::flat_torus(), ManifoldModel::euclidean_plane(), h];
    for model in &models {
        for i in 0..5 {
            for j in 0..5 {
                let t = 0.5 + 1.5 * i as f64;
                let angle = 0.1 + 0.7 * j as f64;
                let hinge = hinge_comparison(model, Point::new(0.2, 1.3), t, angle).unwrap();
                assert!(hinge.sandwiched(1e-8), "{:?} T = {t}, Θ = {angle}: {hinge:?}", model.kind());
            }
        }
    }
}

#[test]
fn hyperbolic_cone_containment() {
    let (h, axis) = imaginary_axis();
    let sampling = ContainmentSampling { angles: 50, steps: 100, ..Default::default() };
    for t in [2.0, 4.0, 6.0] {
        for r in [0.5, 1.0] {
            let cone = ConeSpec::new(t, r, 1.0).unwrap();
            let report = verify_cone_containment(&h, &axis, &cone, &sampling).unwrap();
            assert_eq!(report.violation_count, 0, "T = {t}, R = {r}");
            assert_eq!(report.rays, 3 * 50 * 4);
            // The extremal ray reaches asinh(sinh T sin θ), just short of R.
            let closed = (t.sinh() * cone.theta.sin()).asinh() - r;
            assert!((report.extremal_excess - closed).abs() < 1e-9);
            assert!(closed < 0.0 && closed > -0.1 * r);
            let wide = verify_cone_containment(&h, &axis, &cone.inflated(1.5), &sampling).unwrap();
            assert!(wide.violation_count > 0);
            let closed_wide = (t.sinh() * (1.5 * cone.theta).sin()).asinh() - r;
            assert!((wide.max_excess - closed_wide).abs() < 1e-9);
        }
    }
}

#[test]
fn flat_cone_containment() {
    let plane = ManifoldModel::euclidean_plane();
    let axis = plane.segment(Point::new(0.0, 0.0), [1.0, 0.0], 1.0).unwrap();
    let cone = ConeSpec::new(3.0, 1.0, 0.0).unwrap();
    let report = verify_cone_containment(&plane, &axis, &cone, &ContainmentSampling { angles: 20, steps: 50, ..Default::default() }).unwrap();
    assert_eq!(report.violation_count, 0);
    // The extremal chord has length 2T sin(θ/2) = R.
    assert!((2.0 * cone.t * (0.5 * cone.theta).sin() - cone.r).abs() < 1e-15);
    assert!((report.extremal_excess - (cone.t * cone.theta.sin() - cone.r)).abs() < 1e-12);
}

#[test]
fn gradient_angle_examples() {
    let (h, axis) = imaginary_axis();
    let x = Point::new(0.0, 1.0);
    let ahead = gradient_angle(&h, &x, &Point::new(0.0, 5.0), &axis).unwrap();
    assert!(ahead.angle < 1e-12 && ahead.chordal < 1e-12);
    // y on the geodesic orthogonal to the axis through x.
    let side = h.fermi_point(&axis, 0.0, 0.8);
    let g = gradient_angle(&h, &x, &side, &axis).unwrap();
    assert!((g.angle - FRAC_PI_2).abs() < 1e-10);
    assert!((g.chordal - 2f64.sqrt()).abs() < 1e-10);
    assert!(gradient_angle(&h, &x, &x, &axis).is_err());
}

#[test]
fn gradient_angle_outside_the_tube() {
    let (h, axis) = imaginary_axis();
    let (t, r) = (4.0, 1.0);
    let theta = cone_half_angle(t, r, 1.0).unwrap();
    let floor = 2.0 * (0.5 * theta).sin() * (1.0 - 1e-6);
    let x = Point::new(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tested = 0;
    while tested < 1000 {
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let dist = rng.random_range(0.1..t);
        let y = h.geodesic_point(&h.segment_at_angle(x, angle, dist).unwrap(), dist);
        if h.distance_to_geodesic(&y, &axis, true) <= r {
            continue;
        }
        tested += 1;
        let g = gradient_angle(&h, &x, &y, &axis).unwrap();
        assert!(g.chordal >= floor, "{g:?}");
    }
}

proptest! {
    #[test]
    fn gradient_angle_recovers_the_launch_angle(angle in 0.05..1.5f64, dist in 0.1..4.0f64, t0 in -1.0..1.0f64) {
        let (h, axis) = imaginary_axis();
        let x = h.geodesic_point(&axis, t0);
        let y = h.geodesic_point(&h.segment_at_angle(x, FRAC_PI_2 + angle, dist).unwrap(), dist);
        let g = gradient_angle(&h, &x, &y, &axis).unwrap();
        prop_assert!((g.angle - angle).abs() < 1e-8);
    }
}
