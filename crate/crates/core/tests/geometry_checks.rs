mod common;

use std::f64::consts::{PI, TAU};

use common::{brioschi, d1, simpson};
use mylar_core::geometry::{embed, fundamental_forms, gauss_curvature, metric, SurfacePoint};
use mylar_core::specfun::{ellip_e, ellip_f, EllipticArgs};
use mylar_core::BalloonParams;
use proptest::prelude::*;

fn point(u: f64, v: f64) -> SurfacePoint {
    SurfacePoint::new(u, v)
}

#[test]
fn metric_from_embedding_matches_first_form() {
    let p = BalloonParams::new(1.4, 1.0, 1.0).unwrap();
    let h = 1e-4;
    for k in 0..=40 {
        let u = -2.0 + 0.1 * k as f64;
        let v = 0.37 * k as f64;
        let xu: Vec<f64> = (0..3).map(|i| d1(&|s: f64| embed(point(s, v), &p).unwrap()[i], u, h)).collect();
        let xv: Vec<f64> = (0..3).map(|i| d1(&|s: f64| embed(point(u, s), &p).unwrap()[i], v, h)).collect();
        let e: f64 = xu.iter().map(|a| a * a).sum();
        let g: f64 = xv.iter().map(|a| a * a).sum();
        let f: f64 = xu.iter().zip(&xv).map(|(a, b)| a * b).sum();
        let m = metric(u, &p);
        assert!((e - m.g_uu).abs() < 1e-9 * m.g_uu, "E at u={u}: {e} vs {}", m.g_uu);
        assert!((g - m.g_vv).abs() < 1e-9 * m.g_vv);
        assert!(f.abs() < 1e-9);
        assert_eq!(fundamental_forms(point(u, v), &p).first.0, m.g_uu);
    }
}

#[test]
fn curvature_from_forms_matches_brioschi() {
    let p = BalloonParams::new(0.8, 1.0, 1.0).unwrap();
    for k in 0..=20 {
        let u = -1.5 + 0.15 * k as f64;
        let ff = fundamental_forms(point(u, 0.0), &p);
        let shape = (ff.second.0 * ff.second.1) / (ff.first.0 * ff.first.1);
        let intrinsic = brioschi(&|s| metric(s, &p).g_uu, &|s| metric(s, &p).g_vv, u, 1e-3);
        assert!((shape - gauss_curvature(u, &p)).abs() < 1e-13 * shape);
        assert!((intrinsic - shape).abs() < 1e-7 * shape);
    }
}

#[test]
fn total_curvature_is_four_pi_for_several_radii() {
    for r in [0.3, 1.0, 4.0] {
        let p = BalloonParams::new(r, 1.0, 1.0).unwrap();
        let total = TAU * simpson(&|u: f64| gauss_curvature(u, &p) * metric(u, &p).g_uu, -20.0, 20.0, 1e-13);
        assert!((total - 4.0 * PI).abs() < 1e-9, "r={r}: {total}");
    }
}

#[test]
fn profile_height_through_elliptic_integrals() {
    // z(u) against a direct quadrature of the profile slope z'(u) = r cosh^(-3/2)(2u)
    let p = BalloonParams::new(1.3, 1.0, 1.0).unwrap();
    for u in [0.2, 0.8, 2.0, 5.0] {
        let z = embed(point(u, 0.0), &p).unwrap()[2];
        let direct = simpson(&|s: f64| p.r * (2.0 * s).cosh().powf(-1.5), 0.0, u, 1e-14);
        assert!((z - direct).abs() < 1e-11, "u={u}: {z} vs {direct}");
    }
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let pole = 2f64.sqrt() * (ellip_e(EllipticArgs::new(PI / 2.0, k).unwrap()).unwrap()
        - 0.5 * ellip_f(EllipticArgs::new(PI / 2.0, k).unwrap()).unwrap());
    assert!((pole - 0.599_070_117_367_796).abs() < 1e-12);
}

proptest! {
    #[test]
    fn embedding_is_rotationally_symmetric(u in -5.0f64..5.0, v in 0.0f64..6.3, dv in 0.0f64..6.3, r in 0.1f64..5.0) {
        let p = BalloonParams::new(r, 1.0, 1.0).unwrap();
        let a = embed(point(u, v), &p).unwrap();
        let b = embed(point(u, v + dv), &p).unwrap();
        prop_assert!((a[0].hypot(a[1]) - b[0].hypot(b[1])).abs() < 1e-12 * r);
        prop_assert_eq!(a[2], b[2]);
    }

    #[test]
    fn height_is_odd_and_increasing(u in 0.0f64..8.0, du in 1e-3f64..1.0) {
        let p = BalloonParams::default();
        let z = |s: f64| embed(point(s, 0.0), &p).unwrap()[2];
        prop_assert!((z(u) + z(-u)).abs() < 1e-14);
        prop_assert!(z(u + du) > z(u));
    }

    #[test]
    fn curvature_scales_with_inverse_radius_squared(u in -4.0f64..4.0, r in 0.1f64..10.0) {
        let p = BalloonParams::new(r, 1.0, 1.0).unwrap();
        let unit = BalloonParams::default();
        prop_assert!((gauss_curvature(u, &p) * r * r - gauss_curvature(u, &unit)).abs() < 1e-13);
    }
}
