use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;

use super::*;

fn models() -> Vec<ManifoldModel> {
    vec![
        ManifoldModel::sphere(),
        ManifoldModel::flat_torus(),
        ManifoldModel::euclidean_plane(),
        ManifoldModel::hyperbolic_plane(),
    ]
}

fn bolza() -> &'static ManifoldModel {
    static MODEL: std::sync::OnceLock<ManifoldModel> = std::sync::OnceLock::new();
    MODEL.get_or_init(|| ManifoldModel::bolza_default().unwrap())
}

/// Maps a pair of unit-interval numbers to a point of the model away from
/// chart singularities.
fn sample_point(model: &ManifoldModel, u: f64, v: f64) -> Point {
    match model.kind() {
        ModelKind::Sphere2 => Point::new(0.05 + u * (PI - 0.1), v * TAU),
        ModelKind::FlatTorus2 => Point::new(u * TAU, v * TAU),
        ModelKind::EuclideanPlane => Point::new(8.0 * u - 4.0, 8.0 * v - 4.0),
        _ => Point::new(1.6 * u - 0.8, (1.6 * v - 0.8).exp()),
    }
}

#[test]
fn geodesic_point_examples() {
    let torus = ManifoldModel::flat_torus();
    let seg = torus.segment(Point::new(0.0, 0.0), [1.0, 0.0], 1.0).unwrap();
    let p = torus.geodesic_point(&seg, FRAC_PI_2);
    assert!((p.x() - FRAC_PI_2).abs() < 1e-15 && p.y().abs() < 1e-15);

    let h = ManifoldModel::hyperbolic_plane();
    let seg = h.segment(Point::new(0.0, 1.0), [0.0, 1.0], 1.0).unwrap();
    for t in [0.3, 1.0, 2.5] {
        let p = h.geodesic_point(&seg, t);
        assert!(p.x().abs() < 1e-12 && (p.y() - t.exp()).abs() < 1e-12 * t.exp());
    }

    let s = ManifoldModel::sphere();
    let seg = s.segment(Point::new(FRAC_PI_2, 0.4), [0.0, 1.0], 1.0).unwrap();
    let p = s.geodesic_point(&seg, TAU);
    assert!(s.distance(&p, &seg.base) < 1e-12);
}

#[test]
fn distance_examples() {
    let h = ManifoldModel::hyperbolic_plane();
    assert!((h.distance(&Point::new(0.0, 1.0), &Point::new(0.0, 1f64.exp())) - 1.0).abs() < 1e-14);
    let t = ManifoldModel::flat_torus();
    assert!((t.distance(&Point::new(0.0, 0.0), &Point::new(TAU - 0.1, 0.0)) - 0.1).abs() < 1e-14);
    let s = ManifoldModel::sphere();
    assert!((s.distance(&Point::new(0.3, 1.0), &Point::new(PI - 0.3, 1.0 + PI)) - PI).abs() < 1e-12);
}

#[test]
fn distance_to_geodesic_examples() {
    let h = ManifoldModel::hyperbolic_plane();
    let axis = h.segment(Point::new(0.0, 1.0), [0.0, 1.0], 1.0).unwrap();
    let p = Point::new(1.0, 1.0);
    let got = h.distance_to_geodesic(&p, &axis, true);
    assert!((got - 0.881_373_587_019_543).abs() < 1e-12);
    // Brute force over a dense sample of the axis.
    let brute = (-4000..=4000)
        .map(|j| h.distance(&p, &Point::new(0.0, (j as f64 * 1e-3).exp())))
        .fold(f64::INFINITY, f64::min);
    assert!((got - brute).abs() < 1e-6);

    let t = ManifoldModel::flat_torus();
    let seg = t.segment(Point::new(0.0, 0.0), [1.0, 0.0], 2.0).unwrap();
    assert!((t.distance_to_geodesic(&Point::new(1.0, 0.3), &seg, false) - 0.3).abs() < 1e-10);

    for model in models() {
        let base = sample_point(&model, 0.4, 0.6);
        let seg = model.segment_at_angle(base, 0.7, 1.0).unwrap();
        let on = model.geodesic_point(&seg, 0.37);
        assert!(model.distance_to_geodesic(&on, &seg, false) < 1e-9, "{:?}", model.kind());
        assert!(model.distance_to_geodesic(&on, &seg, true) < 1e-9, "{:?}", model.kind());
    }
}

#[test]
fn segment_distance_matches_extended_near_the_middle() {
    for model in models() {
        let base = sample_point(&model, 0.3, 0.2);
        let seg = model.segment_at_angle(base, 1.1, 1.0).unwrap();
        let p = model.fermi_point(&seg, 0.5, 0.05);
        let a = model.distance_to_geodesic(&p, &seg, false);
        let b = model.distance_to_geodesic(&p, &seg, true);
        assert!((a - 0.05).abs() < 1e-9 && (b - 0.05).abs() < 1e-9, "{:?}: {a} {b}", model.kind());
    }
}

#[test]
fn rejects_bad_input() {
    let s = ManifoldModel::sphere();
    assert!(s.segment(Point::new(1.0, 0.0), [1.0, 1e-5], 1.0).is_err());
    assert!(s.segment(Point::new(0.0, 0.0), [1.0, 0.0], 1.0).is_err());
    assert!(s.point(4.0, 0.0).is_err());
    let h = ManifoldModel::hyperbolic_plane();
    assert!(h.point(0.0, -1.0).is_err());
    assert!(h.segment(Point::new(0.0, 1.0), [0.0, 1.0], -1.0).is_err());
}

#[test]
fn segment_lengths_follow_injectivity_radius() {
    let torus = ManifoldModel::flat_torus();
    assert_eq!(torus.segment_length(), (torus.injectivity_radius() / 10.0).min(1.0));
    let q = bolza();
    assert!((q.segment_length() - q.injectivity_radius() / 10.0).abs() < 1e-15);
    assert!((q.injectivity_radius() - (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-12);
    assert_eq!(ManifoldModel::sphere().segment_length(), 1.0);
}

#[test]
fn curvature_lower_bounds() {
    for model in models() {
        assert!(model.curvature_lower() <= model.gauss_curvature());
        for (u, v) in [(0.2, 0.3), (0.5, 0.9), (0.8, 0.1)] {
            let p = sample_point(&model, u, v);
            let k = model.gauss_curvature_fd(&p, 1e-3);
            assert!((k - model.gauss_curvature()).abs() < 1e-4, "{:?}: {k}", model.kind());
        }
    }
}

#[test]
fn quotient_distance_is_certified_near_the_base_point() {
    let q = bolza();
    let p = Point::new(0.1, 1.2);
    let d = q.distance_certified(&p, &p);
    assert!(d.value < 1e-12 && d.certified);
    // A deck translate of p is the same point of the surface.
    let g = q.deck().unwrap().elements()[3].matrix;
    let gp = Point::from_complex(g.apply(p.as_complex()));
    let d = q.distance_certified(&p, &gp);
    assert!(d.value < 1e-9, "{}", d.value);
    // Below the injectivity radius the quotient is locally the plane.
    let r = Point::new(0.3, 0.9);
    let plane = ManifoldModel::hyperbolic_plane().distance(&p, &r);
    assert!((q.distance(&p, &r) - plane).abs() < 1e-12);
    // Far points of the cover are close on the surface.
    let far = Point::new(0.0, 30.0);
    let dq = q.distance_certified(&Point::new(0.0, 1.0), &far);
    assert!(dq.value <= 2.0 * q.deck().unwrap().circumradius() + 1e-9);
    assert!(!q.distance_certified(&Point::new(0.0, 1e-6), &far).certified);
}

#[test]
fn direction_towards_points_along_the_geodesic() {
    for model in models() {
        let x = sample_point(&model, 0.45, 0.35);
        let y = sample_point(&model, 0.55, 0.4);
        let d = model.direction_towards(&x, &y).unwrap();
        let seg = model.segment(x, d, 1.0).unwrap();
        let dist = model.distance(&x, &y);
        let z = model.geodesic_point(&seg, dist);
        assert!(model.distance(&z, &y) < 1e-9, "{:?}", model.kind());
        assert!(model.direction_towards(&x, &x).is_err());
    }
}

#[test]
fn golden_section_finds_minimum() {
    let m = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-10);
    assert!((m - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn distance_is_symmetric(u1 in 0.0..1.0f64, v1 in 0.0..1.0f64, u2 in 0.0..1.0f64, v2 in 0.0..1.0f64) {
        for model in models() {
            let p = sample_point(&model, u1, v1);
            let q = sample_point(&model, u2, v2);
            prop_assert!((model.distance(&p, &q) - model.distance(&q, &p)).abs() <= 1e-12);
        }
    }

    #[test]
    fn triangle_inequality(a in prop::array::uniform6(0.0..1.0f64)) {
        for model in models() {
            let p = sample_point(&model, a[0], a[1]);
            let q = sample_point(&model, a[2], a[3]);
            let r = sample_point(&model, a[4], a[5]);
            prop_assert!(model.distance(&p, &r) <= model.distance(&p, &q) + model.distance(&q, &r) + 1e-10);
        }
    }

    #[test]
    fn geodesics_have_unit_speed(u in 0.0..1.0f64, v in 0.0..1.0f64, angle in 0.0..TAU, s in -1.0..1.0f64, ds in -1.4..1.4f64) {
        for model in models() {
            let seg = model.segment_at_angle(sample_point(&model, u, v), angle, 1.0).unwrap();
            let a = model.geodesic_point(&seg, s);
            let b = model.geodesic_point(&seg, s + ds);
            prop_assert!((model.distance(&a, &b) - ds.abs()).abs() <= 1e-9, "{:?}", model.kind());
        }
    }

    #[test]
    fn fermi_points_sit_at_normal_distance(u in 0.0..1.0f64, v in 0.0..1.0f64, angle in 0.0..TAU, s in 0.0..1.0f64, w in -1.2..1.2f64) {
        for model in models() {
            let seg = model.segment_at_angle(sample_point(&model, u, v), angle, 1.0).unwrap();
            let p = model.fermi_point(&seg, s, w);
            let d = model.distance_to_geodesic(&p, &seg, true);
            if model.kind() == ModelKind::FlatTorus2 {
                // Other windings of the closed-up line may come closer.
                prop_assert!(d <= w.abs() + 1e-9);
            } else {
                prop_assert!((d - w.abs()).abs() <= 1e-9, "{:?}", model.kind());
            }
        }
    }

    #[test]
    fn quotient_distance_never_exceeds_cover_distance(a in prop::array::uniform4(0.0..1.0f64)) {
        let q = bolza();
        let h = ManifoldModel::hyperbolic_plane();
        let p = sample_point(&h, a[0], a[1]);
        let r = sample_point(&h, a[2], a[3]);
        let dq = q.distance_certified(&p, &r);
        prop_assert!(dq.value <= h.distance(&p, &r) + 1e-12);
        prop_assert!(dq.value <= 2.0 * q.deck().unwrap().circumradius() + 1e-9);
        prop_assert!(dq.certified);
    }
}
