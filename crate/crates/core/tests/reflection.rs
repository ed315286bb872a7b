use proptest::prelude::*;
use reflection_kernels::closed_kernels::{free_kernel, gauss_heat, KernelFamily};
use reflection_kernels::reflection::*;
use reflection_kernels::{Boundary, Point};

fn pt(c: &[f64]) -> Point {
    Point::from_slice(c).unwrap()
}

fn vec3() -> impl Strategy<Value = [f64; 3]> {
    [-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0]
}

proptest! {
    #[test]
    fn reflection_is_an_isometric_involution(v in vec3(), x in vec3(), y in vec3()) {
        prop_assume!(v.iter().map(|c| c * c).sum::<f64>() > 1e-3);
        let rv = ReflectionVector::new(pt(&v)).unwrap();
        let (x, y) = (pt(&x), pt(&y));
        let sx = reflect(&rv, &x).unwrap();
        let back = reflect(&rv, &sx).unwrap();
        prop_assert!(back.dist(&x) <= 1e-13 * (1.0 + x.norm()));
        let sy = reflect(&rv, &y).unwrap();
        prop_assert!((sx.dist(&sy) - x.dist(&y)).abs() <= 1e-13 * (1.0 + x.dist(&y)));
        prop_assert!((rv.side(&sx) + rv.side(&x)).abs() <= 1e-13 * (1.0 + x.norm()));
    }

    #[test]
    fn parts_recombine(x in vec3(), v in vec3()) {
        prop_assume!(v.iter().map(|c| c * c).sum::<f64>() > 1e-3);
        let rv = ReflectionVector::new(pt(&v)).unwrap();
        let mut x = pt(&x);
        if !rv.is_positive(&x) {
            x = reflect(&rv, &x).unwrap();
        }
        prop_assume!(rv.side(&x) > 1e-6);
        let f = |p: &Point| Ok(p[0].sin() + 0.3 * p[1] * p[2] + p[2].exp());
        let even = even_part(f, rv.clone())(&x).unwrap();
        let odd = odd_part(f, rv.clone())(&x).unwrap();
        prop_assert!((even + odd - f(&x).unwrap()).abs() <= 1e-12 * (1.0 + f(&x).unwrap().abs()));
        // extending the parts back reproduces their symmetry
        let sx = reflect(&rv, &x).unwrap();
        let e = extend_even(even_part(f, rv.clone()), rv.clone());
        let o = extend_odd(odd_part(f, rv.clone()), rv.clone());
        prop_assert!((e(&sx).unwrap() - even).abs() <= 1e-12 * (1.0 + even.abs()));
        prop_assert!((o(&sx).unwrap() + odd).abs() <= 1e-12 * (1.0 + odd.abs()));
    }

    #[test]
    fn image_kernels_bracket_the_free_kernel(x in vec3(), y in vec3(), t in 0.05f64..3.0) {
        let (x, y) = (pt(&[x[0], x[1], x[2].abs() + 0.01]), pt(&[y[0], y[1], y[2].abs() + 0.01]));
        let free = free_kernel(3, KernelFamily::Heat { t }).unwrap();
        let v = ReflectionVector::coordinate(3, 2).unwrap();
        let d = reflect_kernel(&free, Boundary::Dirichlet, v.clone()).unwrap().eval(&x, &y).unwrap();
        let n = reflect_kernel(&free, Boundary::Neumann, v).unwrap().eval(&x, &y).unwrap();
        let g = gauss_heat(3, t, &x, &y).unwrap();
        prop_assert!(d >= 0.0 && d <= g && g <= n);
        prop_assert!((d + n - 2.0 * g).abs() <= 1e-14 * g.max(1e-300));
    }
}

#[test]
fn orthant_term_count_and_sign_pattern() {
    let free = free_kernel(3, KernelFamily::Heat { t: 0.5 }).unwrap();
    let sys = ReflectionSystem::coordinate(3, 3).unwrap();
    let (x, y) = (pt(&[0.3, 0.6, 0.9]), pt(&[0.5, 0.2, 0.4]));
    let k = orthant_kernel(&free, Boundary::Dirichlet, sys).unwrap();
    assert_eq!(k.term_count(), 8);
    let terms = k.terms(&x, &y).unwrap();
    assert_eq!(terms.len(), 8);
    assert!(terms.iter().filter(|t| **t < 0.0).count() == 4);
    // nested single reflections give the same kernel
    let mut nested: Box<dyn Kernel> = free_kernel(3, KernelFamily::Heat { t: 0.5 }).unwrap();
    for i in 0..3 {
        nested =
            Box::new(reflect_kernel(nested, Boundary::Dirichlet, ReflectionVector::coordinate(3, i).unwrap()).unwrap());
    }
    let a = k.eval(&x, &y).unwrap();
    assert!((a - nested.eval(&x, &y).unwrap()).abs() <= 1e-15 * a);
}

#[test]
fn rejects_non_orthogonal_roots_and_off_domain_points() {
    assert!(ReflectionSystem::new(vec![pt(&[1.0, 0.0]), pt(&[1.0, 1.0])]).is_err());
    assert!(ReflectionVector::new(pt(&[0.0, 0.0])).is_err());
    let free = free_kernel(2, KernelFamily::Heat { t: 0.5 }).unwrap();
    let k = reflect_kernel(&free, Boundary::Dirichlet, ReflectionVector::coordinate(2, 1).unwrap()).unwrap();
    assert!(k.eval(&pt(&[0.0, -1.0]), &pt(&[0.0, 1.0])).is_err());
}
