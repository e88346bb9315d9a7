use heave::special_functions::{
    cylinder, cylinder_in, hankel, hankel_continued, hankel_ratio, Kind, Order, Regime,
    SWITCHOVER_RADIUS,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn polar(r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r, theta)
}

/// Angles strictly inside (-π, π) so the point stays off the cut.
fn angle() -> impl Strategy<Value = f64> {
    -3.1f64..3.1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// J/Y form. J and Y grow like e^{|Im z|}, so their products cancel down to
    /// 2/(πz); beyond |Im z| ≈ 6 that cancellation alone exceeds 1e-9.
    #[test]
    fn wronskian_jy(r in 0.1f64..30.0, theta in angle()) {
        let z = polar(r, theta);
        prop_assume!(z.im.abs() <= 6.0);
        let v = cylinder(z).unwrap();
        let expected = 2.0 / (PI * z);
        let residual = (v.j[1] * v.y[0] - v.j[0] * v.y[1] - expected).norm();
        prop_assert!(residual <= 1e-9 * (1.0 + expected.norm()), "z = {z}, residual {residual:e}");
    }

    /// Same identity written with Hankel functions, which is well conditioned
    /// everywhere: J1 Y0 - J0 Y1 = (H1_0 H2_1 - H1_1 H2_0) / (2i).
    #[test]
    fn wronskian_hankel(r in 0.1f64..30.0, theta in angle()) {
        let z = polar(r, theta);
        let v = cylinder(z).unwrap();
        let expected = 2.0 / (PI * z);
        let w = (v.h1[0] * v.h2[1] - v.h1[1] * v.h2[0]) / Complex64::new(0.0, 2.0);
        let residual = (w - expected).norm();
        prop_assert!(residual <= 1e-9 * (1.0 + expected.norm()), "z = {z}, residual {residual:e}");
    }

    #[test]
    fn conjugation(r in 0.1f64..60.0, theta in 0.01f64..3.13) {
        let z = polar(r, theta);
        for n in [Order::Zero, Order::One] {
            let lhs = hankel(Kind::First, n, z.conj()).unwrap();
            let rhs = hankel(Kind::Second, n, z).unwrap().conj();
            prop_assert!(rel(lhs, rhs) <= 1e-12, "z = {z}, n = {n:?}");
        }
    }

    #[test]
    fn cross_over(
        r in 0.8 * SWITCHOVER_RADIUS..1.2 * SWITCHOVER_RADIUS,
        theta in angle(),
    ) {
        let z = polar(r, theta);
        let small = cylinder_in(Regime::Small, z).unwrap();
        let large = cylinder_in(Regime::Large, z).unwrap();
        for n in 0..2 {
            let e = rel(small.h1[n], large.h1[n]);
            prop_assert!(e <= 1e-8, "z = {z}, n = {n}, rel {e:e}");
        }
    }

    #[test]
    fn real_axis_values_are_real(x in 0.01f64..50.0) {
        let v = cylinder(Complex64::new(x, 0.0)).unwrap();
        for n in 0..2 {
            prop_assert!(v.j[n].im.abs() <= 1e-14 * v.j[n].norm());
            prop_assert!(v.y[n].im.abs() <= 1e-14 * v.y[n].norm());
        }
    }
}

/// The two lips of the negative real axis are related by the m = ±1 formulas
/// applied to the positive-axis point x.
#[test]
fn continuation_across_the_cut() {
    for x in [0.3, 1.0, 4.5, 9.0, 13.9, 14.1, 25.0] {
        let p = Complex64::new(x, 0.0);
        let upper = Complex64::new(-x, 0.0);
        let lower = Complex64::new(-x, -0.0);
        for kind in [Kind::First, Kind::Second] {
            for n in [Order::Zero, Order::One] {
                let up = hankel(kind, n, upper).unwrap();
                let down = hankel(kind, n, lower).unwrap();
                let up_formula = hankel_continued(kind, n, p, 1).unwrap();
                let down_formula = hankel_continued(kind, n, p, -1).unwrap();
                assert!(rel(up, up_formula) <= 1e-9, "x={x} {kind:?} {n:?}");
                assert!(rel(down, down_formula) <= 1e-9, "x={x} {kind:?} {n:?}");
            }
        }
        // H0(1)(x e^{πi}) = -H0(2)(x)
        let lhs = hankel(Kind::First, Order::Zero, upper).unwrap();
        let rhs = -hankel(Kind::Second, Order::Zero, p).unwrap();
        assert!(rel(lhs, rhs) <= 1e-9);
    }
}

#[test]
fn continuation_off_axis() {
    for (r, theta) in [(2.0, 0.4), (7.0, -1.1), (20.0, 1.3), (0.5, -0.2)] {
        let z = polar(r, theta);
        let rotated = polar(r, theta + PI * if theta > 0.0 { -1.0 } else { 1.0 });
        let m = if theta > 0.0 { -1 } else { 1 };
        for kind in [Kind::First, Kind::Second] {
            for n in [Order::Zero, Order::One] {
                let direct = hankel(kind, n, rotated).unwrap();
                let formula = hankel_continued(kind, n, z, m).unwrap();
                assert!(rel(direct, formula) <= 1e-9, "z={z} {kind:?} {n:?}");
            }
        }
    }
}

#[test]
fn ratio_matches_quotient_in_both_regimes() {
    for s in [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.3, 5.0),
        Complex64::new(0.1, -12.0),
        Complex64::new(0.1, 30.0),
        Complex64::new(2.0, -100.0),
    ] {
        let z = Complex64::new(-s.im, s.re);
        let q = hankel(Kind::First, Order::Zero, z).unwrap()
            / hankel(Kind::First, Order::One, z).unwrap();
        assert!(rel(hankel_ratio(s).unwrap(), q) <= 1e-10, "s = {s}");
    }
}

#[test]
fn ratio_survives_underflow_of_factors() {
    // H(i·2000) underflows, the ratio does not.
    let r = hankel_ratio(Complex64::new(2000.0, 0.0)).unwrap();
    assert!(r.is_finite());
    assert!((r - Complex64::new(0.0, 1.0)).norm() < 1e-3);
}

#[test]
fn imaginary_axis_magnitude() {
    let x = 40.0;
    let h = hankel(Kind::First, Order::Zero, Complex64::new(0.0, x)).unwrap();
    let lead = (2.0 / (PI * x)).sqrt() * (-x).exp();
    assert!((h.norm() / lead - 1.0).abs() < 1.0 / x);
}
