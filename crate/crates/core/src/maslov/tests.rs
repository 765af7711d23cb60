use super::*;
use crate::media::ChiralMedium;
use std::f64::consts::FRAC_PI_4;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn default_paraboloid() -> Paraboloid {
    Paraboloid::from_aperture_angle(100.0, FRAC_PI_4).unwrap()
}

fn diag(bp: Complex64, bs: Complex64) -> Matrix2<Complex64> {
    Matrix2::new(bp, c(0.0, 0.0), c(0.0, 0.0), bs)
}

#[test]
fn paraboloid_validation_and_surface() {
    assert!(Paraboloid::new(0.0, 1.0).is_err());
    assert!(Paraboloid::new(1.0, -1.0).is_err());
    let p = default_paraboloid();
    assert!((p.d - 200.0).abs() < 1e-12);
    assert!((p.h() - FRAC_PI_4).abs() < 1e-15);
    assert_eq!(p.surface(0.0), 100.0);
    assert!((p.surface(200.0)).abs() < 1e-12);
}

#[test]
fn ray_geometry_examples() {
    let p = default_paraboloid();
    let g = ray_geometry(&p, 0.0, 0.3);
    assert_eq!(g.alpha, 0.0);
    assert_eq!(g.normal[2], 1.0);
    assert!(g.normal[0].abs() < 1e-15 && g.normal[1].abs() < 1e-15);
    let g = ray_geometry(&p, 200.0, 0.0);
    assert!((g.alpha - FRAC_PI_4).abs() < 1e-15);
    assert!((g.alpha.sin() - 0.5f64.sqrt()).abs() < 1e-15);
    let g = ray_geometry(&p, 50.0, -0.5);
    assert!((g.gamma - (2.0 * PI - 0.5)).abs() < 1e-15);
}

#[test]
fn normal_is_surface_gradient() {
    // n is parallel to (rho/2f cos g, rho/2f sin g, 1) for sz = f - rho^2/4f
    let p = Paraboloid::new(3.0, 10.0).unwrap();
    for &(rho, az) in &[(1.0, 0.2), (4.0, 2.0), (9.5, 5.0)] {
        let g = ray_geometry(&p, rho, az);
        let grad = [
            rho / (2.0 * p.f) * az.cos(),
            rho / (2.0 * p.f) * az.sin(),
            1.0,
        ];
        let norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (n, g) in g.normal.iter().zip(grad) {
            assert!((n - g / norm).abs() < 1e-14);
        }
        let (sx, sy) = (rho * az.cos(), rho * az.sin());
        assert!((g.gamma.tan() - sy / sx).abs() < 1e-12 * (1.0 + (sy / sx).abs()));
    }
}

#[test]
fn ideal_mirror_amplitude() {
    let r = diag(c(-1.0, 0.0), c(-1.0, 0.0));
    for alpha in [0.0, 0.3, FRAC_PI_4] {
        let a = go_amplitude_from(alpha, 0.0, &r, GoMode::PaperFaithful);
        assert!((a.ex0 - (2.0 * alpha).cos()).norm() < 1e-15);
        assert!(a.ey0.norm() < 1e-15);
        assert!((a.ez0 + (2.0 * alpha).sin()).norm() < 1e-15);
    }
}

#[test]
fn no_axial_component_at_right_angle_azimuth() {
    let r = diag(c(0.3, -0.7), c(-0.2, 0.1));
    for mode in [GoMode::PaperFaithful, GoMode::FullMatrix] {
        let a = go_amplitude_from(0.4, PI / 2.0, &r, mode);
        assert!(a.ez0.norm() < 1e-15);
    }
}

#[test]
fn full_matrix_reduces_for_achiral_stack() {
    let stack = LayerStack::new(
        ChiralMedium::chiral(3.0, 1.0, 0.0),
        1.0,
        ChiralMedium::chiral(5.0, 1.0, 0.0),
        0.7,
        1.0,
    )
    .unwrap();
    for (alpha, gamma) in [(0.1, 0.3), (0.5, 2.0), (0.7, 4.5)] {
        let a = go_amplitude(alpha, gamma, &stack, GoMode::PaperFaithful)
            .unwrap()
            .to_vector();
        let b = go_amplitude(alpha, gamma, &stack, GoMode::FullMatrix)
            .unwrap()
            .to_vector();
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn full_matrix_keeps_cross_terms() {
    let r = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    let a = go_amplitude_from(0.3, 0.4, &r, GoMode::FullMatrix);
    assert!(a.ex0.norm() > 0.1);
    assert_eq!(
        go_amplitude_from(0.3, 0.4, &r, GoMode::PaperFaithful).ex0,
        c(0.0, 0.0)
    );
}

#[test]
fn sampling_rule() {
    let o = QuadratureOrders::minimum(1.0, 100.0, FRAC_PI_4, 20.0);
    assert_eq!(
        o,
        QuadratureOrders {
            n_alpha: 208,
            n_gamma: 88
        }
    );
    assert_eq!(
        o.doubled(),
        QuadratureOrders {
            n_alpha: 416,
            n_gamma: 176
        }
    );
}

#[test]
fn axial_observation_mapping() {
    let p = default_paraboloid();
    let o = Observation::axial(&p, 90.0);
    assert_eq!((o.r, o.theta), (10.0, 0.0));
    let o = Observation::axial(&p, 110.0);
    assert_eq!((o.r, o.theta), (10.0, PI));
    assert_eq!(default_kz_grid().len(), 161);
}

#[test]
fn ideal_mirror_focuses_at_focus() {
    let p = default_paraboloid();
    let grid = default_kz_grid();
    let table = ReflectionTable::ideal_mirror(p.h(), 208).unwrap();
    let scan = axial_scan_with(&p, &table, &grid, 1.0, 88, GoMode::PaperFaithful).unwrap();
    assert_eq!(scan.peak().0, 100.0);
    // closed form at the focus: 2 k0 f * integral of 2 sin^2(a) tan(a) over [0, pi/4]
    let exact = 200.0 * (2f64.ln() - 0.5);
    assert!((scan.peak().1 - exact).abs() < 1e-10 * exact);
}

#[test]
fn on_axis_field_is_x_polarized() {
    let p = default_paraboloid();
    let stack = crate::presets::preset("c-c", Some("fig2.2")).unwrap();
    let grid: Vec<f64> = (0..9).map(|i| 80.0 + 5.0 * i as f64).collect();
    let scan = axial_scan(
        &p,
        &stack,
        &grid,
        1.0,
        QuadratureOrders {
            n_alpha: 208,
            n_gamma: 88,
        },
        GoMode::PaperFaithful,
    )
    .unwrap();
    let max_x = scan.u.iter().map(|u| u[0].norm()).fold(0.0, f64::max);
    for u in &scan.u {
        assert!(u[1].norm() < 1e-6 * max_x && u[2].norm() < 1e-6 * max_x);
    }
}

#[test]
fn field_is_linear_in_reflection() {
    let p = default_paraboloid();
    let stack = crate::presets::preset("c-c", Some("fig2.2")).unwrap();
    let table = ReflectionTable::from_stack(&stack, p.h(), 64).unwrap();
    let k = c(0.3, -1.7);
    let a = FocalIntegrator::new(p, &table, 1.0, 16, GoMode::PaperFaithful).unwrap();
    let b = FocalIntegrator::new(p, &table.scaled(k), 1.0, 16, GoMode::PaperFaithful).unwrap();
    for obs in [
        Observation {
            r: 3.0,
            theta: 0.4,
            phi: 1.0,
        },
        Observation::axial(&p, 97.0),
    ] {
        let (ua, ub) = (a.field(&obs), b.field(&obs));
        assert!((ua * k - ub).norm() < 1e-12 * ub.norm());
    }
}

#[test]
fn mismatched_inputs_are_rejected() {
    let p = default_paraboloid();
    let table = ReflectionTable::ideal_mirror(0.3, 8).unwrap();
    assert!(FocalIntegrator::new(p, &table, 1.0, 8, GoMode::PaperFaithful).is_err());
    let table = ReflectionTable::ideal_mirror(p.h(), 8).unwrap();
    assert!(FocalIntegrator::new(p, &table, 0.0, 8, GoMode::PaperFaithful).is_err());
    assert!(FocalIntegrator::new(p, &table, 1.0, 0, GoMode::PaperFaithful).is_err());
    assert!(axial_scan_with(&p, &table, &[2.0, 1.0], 1.0, 8, GoMode::PaperFaithful).is_err());
    let stack = LayerStack::host_equal(1.0, 1.0, 2.0);
    assert!(axial_scan(
        &p,
        &stack,
        &[1.0],
        1.0,
        QuadratureOrders {
            n_alpha: 8,
            n_gamma: 8
        },
        GoMode::PaperFaithful
    )
    .is_err());
    assert!("bogus".parse::<GoMode>().is_err());
    assert_eq!("full_matrix".parse::<GoMode>().unwrap(), GoMode::FullMatrix);
}

#[test]
fn csv_layout() {
    let scan = FocalScan {
        kz: vec![80.0],
        u: vec![[c(1.0, 2.0), c(0.0, 0.0), c(0.0, -1.0)]],
        mag: vec![6f64.sqrt()],
        orders: QuadratureOrders {
            n_alpha: 1,
            n_gamma: 1,
        },
    };
    let mut buf = Vec::new();
    write_focal_csv(&mut buf, &scan).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), FOCAL_CSV_HEADER);
    assert!(lines
        .next()
        .unwrap()
        .starts_with("80.000000000000,1.000000000000000e0,2.000000000000000e0,"));
}

proptest::proptest! {
    #[test]
    fn geometry_identities(f in 0.1f64..500.0, frac in 0.0f64..1.0, az in 0.0f64..6.25) {
        let p = Paraboloid::new(f, 2.0 * f).unwrap();
        let rho = frac * p.d;
        let g = ray_geometry(&p, rho, az);
        let (s, co) = g.alpha.sin_cos();
        proptest::prop_assert!((s * s + co * co - 1.0).abs() < 1e-14);
        let n2: f64 = g.normal.iter().map(|x| x * x).sum();
        proptest::prop_assert!((n2 - 1.0).abs() < 1e-14);
        let q = (rho * rho + 4.0 * f * f).sqrt();
        proptest::prop_assert!((s - rho / q).abs() < 1e-14 && (co - 2.0 * f / q).abs() < 1e-14);
        proptest::prop_assert!(g.alpha <= p.h() + 1e-15);
    }

    #[test]
    fn paper_faithful_matches_printed_components(alpha in 0.0f64..0.78, gamma in 0.0f64..6.25,
        bpr in -1.0f64..1.0, bpi in -1.0f64..1.0, bsr in -1.0f64..1.0, bsi in -1.0f64..1.0) {
        let (bp, bs) = (c(bpr, bpi), c(bsr, bsi));
        let a = go_amplitude_from(alpha, gamma, &diag(bp, bs), GoMode::PaperFaithful);
        let b = go_amplitude_from(alpha, gamma, &diag(bp, bs), GoMode::FullMatrix);
        let (sg, cg, c2, s2) = (gamma.sin(), gamma.cos(), (2.0 * alpha).cos(), (2.0 * alpha).sin());
        proptest::prop_assert!((a.ex0 - (bs * sg * sg - bp * cg * cg * c2)).norm() < 1e-14);
        proptest::prop_assert!((a.ey0 + cg * sg * (bp * c2 + bs)).norm() < 1e-14);
        proptest::prop_assert!((a.ez0 - bp * s2 * cg).norm() < 1e-14);
        proptest::prop_assert!((a.to_vector() - b.to_vector()).norm() < 1e-14);
    }
}
