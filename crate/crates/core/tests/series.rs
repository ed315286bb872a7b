use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use proptest::prelude::*;
use reflection_kernels::closed_kernels::gauss_heat;
use reflection_kernels::quadrature::{integrate, QuadratureControl};
use reflection_kernels::reflection::{reflect_kernel, Kernel, ReflectionVector};
use reflection_kernels::series_kernels::*;
use reflection_kernels::{Aperture, Boundary, Point, PolarPoint};

const BCS: [Boundary; 2] = [Boundary::Dirichlet, Boundary::Neumann];

fn ctrl() -> SeriesControl {
    SeriesControl {
        abs_tol: 1e-15,
        max_terms: 10_000,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ap(phi: f64) -> Aperture {
    Aperture::new(phi).unwrap()
}

#[test]
fn interval_reflection_identity_direct_and_combinator() {
    let c = ctrl();
    for bc in BCS {
        let big = IntervalKernel {
            bc,
            a: -PI,
            b: PI,
            t: 0.3,
            ctrl: c,
        };
        let half = reflect_kernel(big, bc, ReflectionVector::coordinate(1, 0).unwrap()).unwrap();
        for i in 1..10 {
            for k in 1..10 {
                let (x, y) = (i as f64 * PI / 10.0, k as f64 * PI / 10.0);
                let small = interval_heat(bc, 0.0, PI, 0.3, x, y, &c).unwrap().value;
                let id = interval_heat(bc, -PI, PI, 0.3, x, y, &c).unwrap().value
                    + bc.image_sign() * interval_heat(bc, -PI, PI, 0.3, -x, y, &c).unwrap().value;
                let comb = half.eval(&Point::from(x), &Point::from(y)).unwrap();
                assert!((small - id).abs() < 1e-13, "{bc} {x} {y}");
                assert!((small - comb).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn neumann_interval_conserves_mass_and_dirichlet_vanishes_at_the_ends() {
    let c = ctrl();
    let q = QuadratureControl::new(1e-14, 1e-12, 2000).unwrap();
    let mass = integrate(
        |y| {
            interval_heat(Boundary::Neumann, 0.5, 2.0, 0.05, 0.8, y, &c)
                .unwrap()
                .value
        },
        0.5,
        2.0,
        &q,
    )
    .unwrap();
    assert!((mass.value - 1.0).abs() < 1e-8);
    let mut last = f64::INFINITY;
    for k in 1..8 {
        let x = 10f64.powi(-k);
        let v = interval_heat(Boundary::Dirichlet, 0.0, 1.0, 0.1, x, 0.4, &c)
            .unwrap()
            .value;
        assert!(v >= 0.0 && v < last);
        last = v;
    }
    assert!(last < 1e-6);
}

fn polar_grid(phi: f64, n: usize) -> Vec<PolarPoint> {
    let mut g = Vec::new();
    for i in 0..n {
        for k in 0..n {
            g.push(PolarPoint::new(
                0.2 + 2.0 * i as f64 / n as f64,
                phi * (k as f64 + 0.5) / n as f64,
            ));
        }
    }
    g
}

#[test]
fn cone_halving_direct_and_combinator() {
    let c = ctrl();
    for phi in [TAU, PI, FRAC_PI_2] {
        let big = ap(phi);
        for bc in BCS {
            let half = reflect_kernel(
                ConeHeatKernel {
                    bc,
                    phi: big,
                    t: 0.5,
                    ctrl: c,
                },
                bc,
                bisector_vector(big),
            )
            .unwrap();
            let y = PolarPoint::new(0.9, 0.3 * phi);
            for x in polar_grid(0.5 * phi, 5) {
                let small = cone_heat(bc, big.half(), 0.5, x, y, &c).unwrap().value;
                let id = cone_heat(bc, big, 0.5, x, y, &c).unwrap().value
                    + bc.image_sign() * cone_heat(bc, big, 0.5, big.mirror(x), y, &c).unwrap().value;
                let comb = half.eval(&x.to_point(), &y.to_point()).unwrap();
                assert!(rel(id, small) < 1e-10, "{bc} phi={phi} {x:?}: {id} vs {small}");
                assert!(rel(comb, small) < 1e-10);
            }
        }
    }
}

#[test]
fn cone_bisector_symmetry_and_dirichlet_positivity() {
    let c = ctrl();
    for phi in [TAU, 1.3, FRAC_PI_4] {
        let phi = ap(phi);
        for bc in BCS {
            let k = ConeHeatKernel {
                bc,
                phi,
                t: 0.7,
                ctrl: c,
            };
            let pts = polar_grid(phi.value(), 4);
            for (i, x) in pts.iter().enumerate() {
                let y = pts[(7 * i + 3) % pts.len()];
                let a = cone_heat(bc, phi, 0.7, phi.mirror(*x), y, &c).unwrap().value;
                let b = cone_heat(bc, phi, 0.7, *x, phi.mirror(y), &c).unwrap().value;
                assert!((a - b).abs() < 1e-13);
                let v = k.eval(&x.to_point(), &y.to_point()).unwrap();
                let w = k.eval(&y.to_point(), &x.to_point()).unwrap();
                assert!((v - w).abs() < 1e-13);
                if bc == Boundary::Dirichlet {
                    assert!(v >= 0.0);
                }
            }
        }
    }
}

/// `f'(0)` from samples at `h, 2h, 3h`; exact for quadratics.
fn edge_slope(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (-5.0 * f(h) + 8.0 * f(2.0 * h) - 3.0 * f(3.0 * h)) / (2.0 * h)
}

#[test]
fn cone_boundary_behaviour() {
    let c = ctrl();
    let phi = ap(2.0);
    let y = PolarPoint::new(1.1, 0.8);
    let k = |bc, th: f64| cone_heat(bc, phi, 0.5, PolarPoint::new(0.9, th), y, &c).unwrap().value;
    let neumann = edge_slope(|th| k(Boundary::Neumann, th), 1e-3);
    let dirichlet = edge_slope(|th| k(Boundary::Dirichlet, th), 1e-3);
    assert!(neumann.abs() < 1e-6, "{neumann}");
    assert!(dirichlet > 1e-2);
    assert!(k(Boundary::Dirichlet, 1e-9) < 1e-8);
}

#[test]
fn dyadic_cones_match_direct_and_product_formulas() {
    let c = ctrl();
    let t = 0.4;
    let g = |x: &Point, y: &Point| gauss_heat(2, t, x, y).unwrap();
    for bc in BCS {
        for n in 0..4u32 {
            let phi = ap(TAU / 2f64.powi(n as i32));
            for x in polar_grid(phi.value(), 3) {
                let y = PolarPoint::new(0.7, 0.4 * phi.value());
                let direct = cone_heat(bc, phi, t, x, y, &c).unwrap().value;
                let dy = dyadic_cone_heat(bc, n, t, x, y, &c).unwrap();
                assert!(rel(dy, direct) < 1e-10, "{bc} n={n}");
                if n == 2 {
                    let (px, py) = (x.to_point(), y.to_point());
                    let s = bc.image_sign();
                    let fx = |a: f64, b: f64| Point::new(vec![a * px[0], b * px[1]]).unwrap();
                    let quarter =
                        g(&px, &py) + s * g(&fx(-1.0, 1.0), &py) + s * g(&fx(1.0, -1.0), &py) + g(&fx(-1.0, -1.0), &py);
                    assert!(rel(quarter, direct) < 1e-10);
                }
                if n == 3 && bc == Boundary::Dirichlet {
                    // two quarter-plane products, the second at the point mirrored in the diagonal
                    let q = |p: &Point| {
                        let one = |u: f64, v: f64| {
                            let h = (4.0 * PI * t).sqrt();
                            ((-(u - v).powi(2) / (4.0 * t)).exp() - (-(u + v).powi(2) / (4.0 * t)).exp()) / h
                        };
                        let py = y.to_point();
                        one(p[0], py[0]) * one(p[1], py[1])
                    };
                    let px = x.to_point();
                    let swap = Point::new(vec![px[1], px[0]]).unwrap();
                    assert!(rel(q(&px) - q(&swap), direct) < 1e-10);
                }
            }
        }
    }
}

#[test]
fn truncated_cone_halving_direct_and_combinator() {
    let c = ctrl();
    for phi in [TAU, PI] {
        let big = ap(phi);
        for bc in BCS {
            for t in [0.2, 0.5] {
                let half = reflect_kernel(
                    TruncatedConeKernel {
                        bc,
                        phi: big,
                        t,
                        ctrl: c,
                    },
                    bc,
                    bisector_vector(big),
                )
                .unwrap();
                let y = PolarPoint::new(0.45, 0.2 * phi);
                for i in 0..4 {
                    for k in 0..4 {
                        let x = PolarPoint::new(0.1 + 0.22 * i as f64, 0.5 * phi * (k as f64 + 0.5) / 4.0);
                        let small = truncated_cone_heat(bc, big.half(), t, x, y, &c).unwrap().value;
                        let id = truncated_cone_heat(bc, big, t, x, y, &c).unwrap().value
                            + bc.image_sign() * truncated_cone_heat(bc, big, t, big.mirror(x), y, &c).unwrap().value;
                        let comb = half.eval(&x.to_point(), &y.to_point()).unwrap();
                        assert!(rel(id, small) < 1e-8, "{bc} phi={phi} t={t} {x:?}: {id} vs {small}");
                        assert!(rel(comb, small) < 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn disk_minus_slit_is_half_disk() {
    let c = ctrl();
    let disk = DiskKernel { t: 0.1, ctrl: c };
    let half = reflect_kernel(disk, Boundary::Dirichlet, ReflectionVector::coordinate(2, 1).unwrap()).unwrap();
    for x in [
        PolarPoint::new(0.3, 0.4),
        PolarPoint::new(0.8, 2.9),
        PolarPoint::new(0.05, 1.5),
    ] {
        let y = PolarPoint::new(0.5, 1.2);
        let hd = truncated_cone_heat(Boundary::Dirichlet, ap(PI), 0.1, x, y, &c)
            .unwrap()
            .value;
        let diff = disk_heat_dirichlet(0.1, x, y, &c).unwrap().value
            - disk_heat_dirichlet(0.1, PolarPoint::new(x.rho, -x.theta), y, &c)
                .unwrap()
                .value;
        let comb = half.eval(&x.to_point(), &y.to_point()).unwrap();
        assert!(rel(diff, hd) < 1e-10);
        assert!(rel(comb, hd) < 1e-10);
    }
}

/// `int_0^1 int_0^Phi f(rho, theta) rho d theta d rho`.
fn polar_integral(phi: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let q = QuadratureControl::new(1e-12, 1e-10, 500).unwrap();
    integrate(
        |rho| rho * integrate(|th| f(rho, th), 0.0, phi, &q).unwrap().value,
        0.0,
        1.0,
        &q,
    )
    .unwrap()
    .value
}

#[test]
fn truncated_neumann_conserves_mass_and_disk_loses_it() {
    let c = SeriesControl {
        abs_tol: 1e-12,
        max_terms: 10_000,
    };
    let x = PolarPoint::new(0.5, 1.0);
    let at = |rho: f64| rho.max(1e-9);
    let mass = polar_integral(PI, |rho, th| {
        truncated_cone_heat(
            Boundary::Neumann,
            ap(PI),
            0.3,
            x,
            PolarPoint::new(at(rho), th.clamp(1e-12, PI - 1e-12)),
            &c,
        )
        .unwrap()
        .value
    });
    assert!((mass - 1.0).abs() < 1e-7, "{mass}");
    let killed = polar_integral(TAU, |rho, th| {
        disk_heat_dirichlet(0.3, x, PolarPoint::new(rho, th), &c).unwrap().value
    });
    assert!(killed > 0.0 && killed < 1.0);
    let series: f64 = (1..40)
        .map(|s| {
            let b = reflection_kernels::specfun::bessel_j_zero(0.0, s).unwrap();
            let j0 = reflection_kernels::specfun::bessel_j(0.0, 0.5 * b).unwrap();
            let j1 = reflection_kernels::specfun::bessel_j(1.0, b).unwrap();
            2.0 * (-b * b * 0.3).exp() * j0 / (b * j1)
        })
        .sum();
    assert!((killed - series).abs() < 1e-8, "{killed} vs {series}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_kernels_are_symmetric(
        r1 in 0.05f64..0.95, r2 in 0.05f64..0.95, a in 0.02f64..0.98, b in 0.02f64..0.98,
        phi in 0.3f64..TAU, t in 0.05f64..1.0, neumann in any::<bool>(),
    ) {
        let c = ctrl();
        let bc = if neumann { Boundary::Neumann } else { Boundary::Dirichlet };
        let phi = ap(phi);
        let (x, y) = (PolarPoint::new(r1, a * phi.value()), PolarPoint::new(r2, b * phi.value()));
        let u = truncated_cone_heat(bc, phi, t, x, y, &c).unwrap().value;
        let v = truncated_cone_heat(bc, phi, t, y, x, &c).unwrap().value;
        prop_assert!((u - v).abs() < 1e-12);
        let (x3, y3) = (PolarPoint::new(3.0 * r1, x.theta), PolarPoint::new(3.0 * r2, y.theta));
        let u = cone_heat(bc, phi, t, x3, y3, &c).unwrap().value;
        let v = cone_heat(bc, phi, t, y3, x3, &c).unwrap().value;
        prop_assert!((u - v).abs() < 1e-12);
        if bc == Boundary::Dirichlet {
            prop_assert!(u >= 0.0);
        }
        let (lo, hi) = (-1.0 + 2.0 * a.min(b), -1.0 + 2.0 * a.max(b));
        let p = interval_heat(bc, -1.0, 1.0, t, lo, hi, &c).unwrap().value;
        let q = interval_heat(bc, -1.0, 1.0, t, hi, lo, &c).unwrap().value;
        prop_assert!((p - q).abs() < 1e-12);
    }
}
