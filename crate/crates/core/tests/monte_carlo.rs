use std::f64::consts::PI;

use reflection_kernels::closed_kernels::halfspace_heat;
use reflection_kernels::mc_oracle::*;
use reflection_kernels::quadrature::{integrate, QuadratureControl};
use reflection_kernels::series_kernels::{interval_heat, SeriesControl};
use reflection_kernels::{Aperture, Boundary, KernelError, Point};

fn cfg(paths: u64, dt: f64) -> MCConfig {
    MCConfig {
        paths,
        dt,
        seed: 99,
        workers: 1,
        exit: ExitRule::BrownianBridge,
    }
}

fn within(est: &McEstimate, reference: f64, k: f64) -> bool {
    (est.value - reference).abs() <= k * est.std_error
}

fn halfline_mass(bc: Boundary, x0: f64, t: f64, lo: f64, hi: f64) -> f64 {
    let c = QuadratureControl::new(1e-15, 1e-12, 2000).unwrap();
    integrate(
        |y| halfspace_heat(bc, 1, t, &Point::from(x0), &Point::from(y)).unwrap(),
        lo,
        hi,
        &c,
    )
    .unwrap()
    .value
}

#[test]
fn fixed_seed_is_reproducible_for_any_worker_count() {
    let dom = McDomain::TruncatedCone {
        phi: Aperture::new(2.0).unwrap(),
    };
    let x0 = Point::new(vec![0.3, 0.3]).unwrap();
    let target = TargetBox::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
    let mut c = cfg(3000, 1e-3);
    let a = estimate_killed_prob(&dom, &x0, 0.05, &target, &c).unwrap();
    c.workers = 4;
    let b = estimate_killed_prob(&dom, &x0, 0.05, &target, &c).unwrap();
    let again = estimate_killed_prob(&dom, &x0, 0.05, &target, &c).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, again);
    c.seed += 1;
    assert_ne!(estimate_killed_prob(&dom, &x0, 0.05, &target, &c).unwrap(), a);
}

#[test]
fn killed_never_exceeds_free() {
    let dom = McDomain::Disk;
    let x0 = Point::new(vec![0.5, 0.0]).unwrap();
    let target = TargetBox::new(vec![0.0, -0.5], vec![1.0, 0.5]).unwrap();
    let c = cfg(20_000, 1e-3);
    let killed = estimate_killed_prob(&dom, &x0, 0.1, &target, &c).unwrap();
    let free = estimate_free_prob(&x0, 0.1, &target, &c).unwrap();
    assert!(killed.value < free.value);
}

#[test]
fn halfline_estimates_match_closed_forms() {
    let dom = McDomain::HalfSpace { d: 1 };
    let target = TargetBox::new(vec![0.2], vec![1.0]).unwrap();
    let x0 = Point::from(0.5);
    let c = cfg(40_000, 2e-3);
    let killed = estimate_killed_prob(&dom, &x0, 0.2, &target, &c).unwrap();
    assert!(
        within(&killed, halfline_mass(Boundary::Dirichlet, 0.5, 0.2, 0.2, 1.0), 4.0),
        "{killed:?}"
    );
    let refl = estimate_reflected_prob(&dom, &x0, 0.2, &target, &c).unwrap();
    assert!(
        within(&refl, halfline_mass(Boundary::Neumann, 0.5, 0.2, 0.2, 1.0), 4.0),
        "{refl:?}"
    );
}

#[test]
fn bridge_rule_removes_the_coarse_step_bias() {
    // one coarse step leaves a large overshoot under the step rule only
    let dom = McDomain::HalfSpace { d: 1 };
    let target = TargetBox::new(vec![0.0], vec![3.0]).unwrap();
    let x0 = Point::from(0.4);
    let exact = halfline_mass(Boundary::Dirichlet, 0.4, 0.25, 0.0, 3.0);
    let mut c = cfg(40_000, 0.05);
    let bridge = estimate_killed_prob(&dom, &x0, 0.25, &target, &c).unwrap();
    c.exit = ExitRule::StepBoundary;
    let step = estimate_killed_prob(&dom, &x0, 0.25, &target, &c).unwrap();
    assert!(within(&bridge, exact, 4.0), "{bridge:?} vs {exact}");
    assert!(step.value - exact > 5.0 * step.std_error, "{step:?} vs {exact}");
}

#[test]
fn interval_killed_probability_matches_series() {
    let (a, b) = (0.0, 1.0);
    let target = TargetBox::new(vec![0.3], vec![0.9]).unwrap();
    let x0 = Point::from(0.4);
    let est = estimate_killed_prob(&McDomain::Interval { a, b }, &x0, 0.05, &target, &cfg(40_000, 5e-4)).unwrap();
    let sc = SeriesControl::default();
    let qc = QuadratureControl::new(1e-15, 1e-12, 2000).unwrap();
    let exact = integrate(
        |y| {
            interval_heat(Boundary::Dirichlet, a, b, 0.05, 0.4, y, &sc)
                .unwrap()
                .value
        },
        0.3,
        0.9,
        &qc,
    )
    .unwrap()
    .value;
    assert!(within(&est, exact, 4.0), "{est:?} vs {exact}");
}

#[test]
fn folded_interval_relaxes_to_uniform() {
    let dom = McDomain::Interval { a: -PI, b: PI };
    let target = TargetBox::new(vec![-1.0], vec![0.5]).unwrap();
    let est = estimate_reflected_prob(&dom, &Point::from(2.5), 20.0, &target, &cfg(40_000, 0.5)).unwrap();
    assert!(within(&est, 1.5 / (2.0 * PI), 4.0), "{est:?}");
}

#[test]
fn reflection_check_on_a_small_instance() {
    let dom = McDomain::PlanarCone {
        phi: Aperture::new(PI).unwrap(),
    };
    let x0 = Point::new(vec![0.6, 0.4]).unwrap();
    let target = TargetBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let r = check_reflection_identity(&dom, &x0, 0.1, &target, &cfg(20_000, 1e-3)).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.positive.value <= r.whole.value);
}

#[test]
fn invalid_configurations() {
    let dom = McDomain::Interval { a: 0.0, b: 1.0 };
    let target = TargetBox::new(vec![0.0], vec![1.0]).unwrap();
    let x0 = Point::from(0.5);
    let e = estimate_killed_prob(&dom, &x0, 0.105, &target, &cfg(10, 0.01)).unwrap_err();
    assert!(matches!(e, KernelError::Config(_)), "{e:?}");
    assert!(estimate_killed_prob(&dom, &Point::from(1.5), 0.1, &target, &cfg(10, 0.01)).is_err());
    assert!(estimate_reflected_prob(
        &McDomain::Disk,
        &Point::new(vec![0.0, 0.0]).unwrap(),
        0.1,
        &TargetBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(),
        &cfg(10, 0.01)
    )
    .is_err());
    let mut c = cfg(10, 0.01);
    c.workers = 0;
    assert!(estimate_free_prob(&x0, 0.1, &target, &c).is_err());
}
