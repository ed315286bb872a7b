use proptest::prelude::*;
use reflection_kernels::quadrature::{integrate, QuadratureControl};
use reflection_kernels::specfun::*;

fn reference_rows() -> Vec<[f64; 6]> {
    include_str!("data/bessel_reference.csv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4], v[5]]
        })
        .collect()
}

#[test]
fn matches_high_precision_reference_table() {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for [nu, x, j, jp, i_s, k_s] in reference_rows() {
        let (gj, gjp) = bessel_j_with_derivative(nu, x).unwrap();
        // relative away from zeros, absolute near them
        let scale_j = (2.0 / (std::f64::consts::PI * x.max(1.0))).sqrt().min(1.0);
        let ej = (gj - j).abs() / j.abs().max(0.1 * scale_j);
        let ejp = (gjp - jp).abs() / jp.abs().max(0.1 * scale_j);
        assert!(ej < 1e-12, "J_{nu}({x}) = {gj}, reference {j}");
        assert!(ejp < 1e-12, "J'_{nu}({x}) = {gjp}, reference {jp}");
        let gi = bessel_i_scaled(nu, x).unwrap();
        if i_s > 1e-290 {
            let e = ((gi - i_s) / i_s).abs();
            assert!(e < 1e-12, "I_{nu}({x}) e^-x = {gi}, reference {i_s}, rel {e:e}");
            worst.1 = worst.1.max(e);
        }
        let gk = bessel_k_scaled(nu, x);
        if k_s < 1e300 {
            let gk = gk.unwrap();
            let e = ((gk - k_s) / k_s).abs();
            assert!(e < 1e-12, "K_{nu}({x}) e^x = {gk}, reference {k_s}, rel {e:e}");
            worst.2 = worst.2.max(e);
        }
        worst.0 = worst.0.max(ej.max(ejp));
    }
    eprintln!(
        "worst relative errors: J {:e}, I {:e}, K {:e}",
        worst.0, worst.1, worst.2
    );
}

#[test]
fn k_closed_form_at_half_order() {
    let pi = std::f64::consts::PI;
    let k1 = bessel_k(0.5, 1.0).unwrap();
    assert!((k1 - (pi / 2.0).sqrt() * (-1.0f64).exp()).abs() < 1e-15);
    let k2 = bessel_k(0.5, 2.0).unwrap();
    assert!((k2 - (pi / 4.0).sqrt() * (-2.0f64).exp()).abs() < 1e-15);
}

#[test]
fn k_one_matches_integral_representation() {
    // K_1(1) = int_0^inf exp(-cosh t) cosh t dt
    let ctrl = QuadratureControl {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 500,
    };
    let q = integrate(|t: f64| (-t.cosh()).exp() * t.cosh(), 0.0, 8.0, &ctrl).unwrap();
    let k = bessel_k(1.0, 1.0).unwrap();
    assert!(((k - q.value) / q.value).abs() < 1e-12, "{k} vs {}", q.value);
}

#[test]
fn first_zero_of_j0_by_bisection_oracle() {
    // bisection on the J_0 power series
    let j0 = |x: f64| {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= -(x * x / 4.0) / (k as f64 * k as f64);
            sum += term;
        }
        sum
    };
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0(mid) > 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let oracle = 0.5 * (lo + hi);
    assert!((oracle - 2.404_825_557_695_77).abs() < 1e-13);
    let z = bessel_j_zero(0.0, 1).unwrap();
    assert!((z - oracle).abs() < 1e-14, "{z} vs {oracle}");
    assert!(bessel_j(0.0, z).unwrap().abs() <= 1e-12);
}

#[test]
fn first_derivative_zero_is_first_maximum_of_j1() {
    // golden-section maximisation of J_1 on [1, 3]
    let f = |x: f64| bessel_j(1.0, x).unwrap();
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1.0, 3.0);
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d
        } else {
            a = c
        }
    }
    let oracle = 0.5 * (a + b);
    let z = bessel_j_prime_zero(1.0, 1).unwrap();
    // golden section locates a maximum only to ~sqrt(eps)
    assert!((z - oracle).abs() < 1e-7, "{z} vs {oracle}");
    assert!(bessel_j_prime(1.0, z).unwrap().abs() <= 1e-12);
}

#[test]
fn zero_residuals_ordering_and_interlacing() {
    for &nu in &[0.0, 0.5, 1.0, 2.0, 4.0] {
        let zs: Vec<f64> = (1..=20).map(|s| bessel_j_zero(nu, s).unwrap()).collect();
        let next: Vec<f64> = (1..=21).map(|s| bessel_j_zero(nu + 1.0, s).unwrap()).collect();
        for (s, &z) in zs.iter().enumerate() {
            let r = bessel_j(nu, z).unwrap().abs();
            assert!(r <= 1e-12, "nu={nu} s={} residual {r:e}", s + 1);
            if s > 0 {
                assert!(z > zs[s - 1]);
            }
            // j_{nu,s} < j_{nu+1,s} < j_{nu,s+1}
            assert!(next[s] > z);
            if s + 1 < zs.len() {
                assert!(next[s] < zs[s + 1]);
            }
        }
        for s in 1..=20 {
            let zp = bessel_j_prime_zero(nu, s).unwrap();
            assert!(bessel_j_prime(nu, zp).unwrap().abs() <= 1e-12, "nu={nu} s={s}");
            if s > 1 {
                assert!(zp > bessel_j_prime_zero(nu, s - 1).unwrap());
            }
        }
    }
    let b01 = bessel_j_zero(0.0, 1).unwrap();
    let b02 = bessel_j_zero(0.0, 2).unwrap();
    let b11 = bessel_j_zero(1.0, 1).unwrap();
    assert!(b01 < b11 && b11 < b02);
}

#[test]
fn concurrent_zero_lookups_agree() {
    let handles: Vec<_> = (0..4)
        .map(|_| std::thread::spawn(|| (1..=15).map(|s| bessel_j_zero(2.75, s).unwrap()).collect::<Vec<_>>()))
        .collect();
    let results: Vec<Vec<f64>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for r in &results[1..] {
        assert_eq!(r, &results[0]);
    }
}

proptest! {
    #[test]
    fn wronskian_of_modified_functions(nu in 0.0f64..12.0, x in 0.05f64..60.0) {
        let i0 = bessel_i_scaled(nu, x).unwrap();
        let i1 = bessel_i_scaled(nu + 1.0, x).unwrap();
        let (k0, k1) = bessel_k_pair_scaled(nu, x).unwrap();
        let w = x * (i0 * k1 + i1 * k0);
        prop_assert!((w - 1.0).abs() < 1e-10, "x * W = {}", w);
    }

    #[test]
    fn three_term_recurrence_of_j(nu in 1.0f64..15.0, x in 0.1f64..80.0) {
        let jm = bessel_j(nu - 1.0, x).unwrap();
        let j = bessel_j(nu, x).unwrap();
        let jp = bessel_j(nu + 1.0, x).unwrap();
        prop_assert!((jm + jp - 2.0 * nu / x * j).abs() < 1e-10);
    }
}
