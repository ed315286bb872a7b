use super::{check_time, shortfall, SeriesControl, SeriesValue};
use crate::error::{domain, KernelError, Result};
use crate::geometry::{Aperture, Boundary, Point, PolarPoint};
use crate::reflection::{reflect_kernel, Kernel, ReflectionVector};
use crate::specfun::bessel_i_scaled;

/// `sum_{j>=1} I_{j delta}(tau) e^{-tau} w(j delta)` with `|w| <= w_max`.
///
/// Tail: `I_nu` decreases in `nu`, each integer order is hit by at most
/// `ceil(1/delta)` grid orders, and `I_{n+1}/I_n <= tau / (n + sqrt(n^2 + tau^2))`.
fn scaled_series(
    delta: f64,
    tau: f64,
    w_max: f64,
    tol: f64,
    max_terms: usize,
    w: impl Fn(f64) -> f64,
) -> Result<(f64, f64, usize)> {
    if tau == 0.0 {
        return Ok((0.0, 0.0, 0));
    }
    let hits = (1.0 / delta).ceil();
    let mut sum = 0.0;
    let mut tail = f64::INFINITY;
    for j in 1..=max_terms {
        let nu = j as f64 * delta;
        let term = bessel_i_scaled(nu, tau)?;
        sum += term * w(nu);
        let n0 = ((j + 1) as f64 * delta).floor();
        if n0 >= 1.0 {
            let ratio = tau / (n0 + n0.hypot(tau));
            let lead = if n0 == nu { term } else { bessel_i_scaled(n0, tau)? };
            tail = w_max * hits * lead / (1.0 - ratio);
            if tail <= tol {
                return Ok((sum, tail, j));
            }
        }
    }
    Err(shortfall(tol, tail))
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return domain(format!("tau must be finite and non-negative, got {tau}"));
    }
    Ok(())
}

/// `e^{-tau} B^Phi(tau, gamma)` with `B^Phi(tau, gamma) = sum_{j>=1} I_{pi j/Phi}(tau) cos(pi j gamma/Phi)`.
pub fn cone_b_scaled(phi: Aperture, tau: f64, gamma: f64, ctrl: &SeriesControl) -> Result<SeriesValue> {
    ctrl.validate()?;
    check_tau(tau)?;
    let (value, tail_bound, terms) = scaled_series(phi.frequency(), tau, 1.0, ctrl.abs_tol, ctrl.max_terms, |nu| {
        (nu * gamma).cos()
    })?;
    Ok(SeriesValue {
        value,
        tail_bound,
        terms,
    })
}

/// `B^Phi(tau, gamma)`. The tolerance applies to the scaled series; overflow is reported.
pub fn cone_b(phi: Aperture, tau: f64, gamma: f64, ctrl: &SeriesControl) -> Result<SeriesValue> {
    let s = cone_b_scaled(phi, tau, gamma, ctrl)?;
    let scale = tau.exp();
    if !scale.is_finite() {
        return Err(KernelError::Overflow(format!(
            "B at tau = {tau} exceeds f64; use cone_b_scaled"
        )));
    }
    Ok(SeriesValue {
        value: s.value * scale,
        tail_bound: s.tail_bound * scale,
        terms: s.terms,
    })
}

/// Heat kernel of the planar cone `0 < theta < Phi`.
///
/// Dirichlet: `(2 Phi t)^{-1} e^{-(rho^2+r^2)/4t} [B(tau, theta-eta) - B(tau, theta+eta)]`,
/// Neumann: the same with `I_0(tau) + B + B`, where `tau = rho r / 2t`.
pub fn cone_heat(
    bc: Boundary,
    phi: Aperture,
    t: f64,
    x: PolarPoint,
    y: PolarPoint,
    ctrl: &SeriesControl,
) -> Result<SeriesValue> {
    ctrl.validate()?;
    check_time(t)?;
    if !phi.contains(x) || !phi.contains(y) {
        return domain(format!("points must lie in the cone of aperture {}", phi.value()));
    }
    let pref = (-(x.rho - y.rho).powi(2) / (4.0 * t)).exp() / (2.0 * phi.value() * t);
    if pref == 0.0 {
        return Ok(SeriesValue {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let tau = x.rho * y.rho / (2.0 * t);
    let (minus, plus) = (x.theta - y.theta, x.theta + y.theta);
    let sign = bc.image_sign();
    let (mut sum, tail, terms) = scaled_series(phi.frequency(), tau, 2.0, ctrl.abs_tol / pref, ctrl.max_terms, |nu| {
        (nu * minus).cos() + sign * (nu * plus).cos()
    })?;
    if bc == Boundary::Neumann {
        sum += bessel_i_scaled(0.0, tau)?;
    }
    Ok(SeriesValue {
        value: pref * sum,
        tail_bound: pref * tail,
        terms: terms + 1,
    })
}

/// [`cone_heat`] on Cartesian points of the plane.
#[derive(Debug, Clone, Copy)]
pub struct ConeHeatKernel {
    pub bc: Boundary,
    pub phi: Aperture,
    pub t: f64,
    pub ctrl: SeriesControl,
}

impl Kernel for ConeHeatKernel {
    fn dim(&self) -> usize {
        2
    }
    fn contains(&self, x: &Point) -> bool {
        PolarPoint::from_point(x).is_some_and(|p| self.phi.contains(p))
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        let (Some(px), Some(py)) = (PolarPoint::from_point(x), PolarPoint::from_point(y)) else {
            return domain("cone kernel needs planar points off the vertex");
        };
        Ok(cone_heat(self.bc, self.phi, self.t, px, py, &self.ctrl)?.value)
    }
}

/// Unit normal of the bisector of `Omega_Phi`; its positive part is `Omega_{Phi/2}`.
pub fn bisector_vector(phi: Aperture) -> ReflectionVector {
    let h = 0.5 * phi.value();
    ReflectionVector::new(Point::raw(vec![h.sin(), -h.cos()])).expect("unit vector")
}

/// Kernel of `Omega_{2 pi / 2^n}` built by `n` bisector reflections of the slit-plane kernel.
pub fn dyadic_cone_kernel(bc: Boundary, n: u32, t: f64, ctrl: &SeriesControl) -> Result<Box<dyn Kernel>> {
    ctrl.validate()?;
    check_time(t)?;
    let mut phi = Aperture::full();
    let mut k: Box<dyn Kernel> = Box::new(ConeHeatKernel {
        bc,
        phi,
        t,
        ctrl: *ctrl,
    });
    for _ in 0..n {
        k = Box::new(reflect_kernel(k, bc, bisector_vector(phi))?);
        phi = phi.half();
    }
    Ok(k)
}

/// [`dyadic_cone_kernel`] evaluated at polar points.
pub fn dyadic_cone_heat(
    bc: Boundary,
    n: u32,
    t: f64,
    x: PolarPoint,
    y: PolarPoint,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let phi = Aperture::new(std::f64::consts::TAU / 2f64.powi(n as i32))?;
    if !phi.contains(x) || !phi.contains(y) {
        return domain(format!("points must lie in the cone of aperture {}", phi.value()));
    }
    dyadic_cone_kernel(bc, n, t, ctrl)?.eval(&x.to_point(), &y.to_point())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_kernels::gauss_heat;
    use std::f64::consts::PI;

    #[test]
    fn ratio_bound_holds_on_a_grid() {
        for n in 1..40 {
            for &x in &[0.1, 1.0, 5.0, 20.0, 80.0] {
                let r = bessel_i_scaled(n as f64 + 1.0, x).unwrap() / bessel_i_scaled(n as f64, x).unwrap();
                assert!(r <= x / (n as f64 + (n as f64).hypot(x)), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn half_plane_b_matches_closed_form() {
        let ctrl = SeriesControl::default();
        let pi = Aperture::new(PI).unwrap();
        let b = cone_b(pi, 1.0, 0.0, &ctrl).unwrap();
        let closed = 0.5 * (1f64.exp() - crate::specfun::bessel_i(0.0, 1.0).unwrap());
        assert!(
            (b.value - closed).abs() <= b.tail_bound + 1e-15,
            "{} vs {closed}",
            b.value
        );
        assert!(b.tail_bound <= ctrl.abs_tol * 1f64.exp());
        assert_eq!(cone_b(pi, 0.0, 0.7, &ctrl).unwrap().value, 0.0);
    }

    #[test]
    fn half_plane_dirichlet_is_the_image_difference() {
        let ctrl = SeriesControl::default();
        let phi = Aperture::new(PI).unwrap();
        let (x, y) = (PolarPoint::new(1.2, 0.4), PolarPoint::new(0.7, 2.0));
        for bc in [Boundary::Dirichlet, Boundary::Neumann] {
            let v = cone_heat(bc, phi, 0.6, x, y, &ctrl).unwrap().value;
            let (px, py) = (x.to_point(), y.to_point());
            let img = gauss_heat(2, 0.6, &px.flip_last(), &py).unwrap();
            let expect = gauss_heat(2, 0.6, &px, &py).unwrap() + bc.image_sign() * img;
            assert!((v - expect).abs() < 1e-14, "{bc}: {v} vs {expect}");
        }
    }

    #[test]
    fn dyadic_level_zero_and_membership() {
        let ctrl = SeriesControl::default();
        let (x, y) = (PolarPoint::new(0.5, 0.2), PolarPoint::new(1.5, 0.6));
        let direct = cone_heat(Boundary::Dirichlet, Aperture::full(), 0.5, x, y, &ctrl)
            .unwrap()
            .value;
        assert_eq!(
            dyadic_cone_heat(Boundary::Dirichlet, 0, 0.5, x, y, &ctrl).unwrap(),
            direct
        );
        assert!(dyadic_cone_heat(Boundary::Dirichlet, 3, 0.5, PolarPoint::new(1.0, 1.0), y, &ctrl).is_err());
    }
}
