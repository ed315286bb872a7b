use std::f64::consts::PI;

use super::{check_time, shortfall, SeriesControl, SeriesValue};
use crate::error::{domain, param, Result};
use crate::geometry::{Aperture, Boundary, Point, PolarPoint};
use crate::reflection::Kernel;
use crate::specfun::{bessel_j, bessel_j_prime_zero, bessel_j_zero};

/// Lower bound on the gap between consecutive positive zeros of `J_nu` or `J'_nu`.
const ZERO_GAP: f64 = 2.5;

/// Radial eigenvalue problem on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Radial {
    /// `J_nu(b) = 0`.
    Dirichlet,
    /// `J'_nu(b) = 0`, positive zeros only.
    Neumann,
}

impl Radial {
    fn zero(self, nu: f64, s: usize) -> Result<f64> {
        match self {
            Radial::Dirichlet => bessel_j_zero(nu, s),
            Radial::Neumann => bessel_j_prime_zero(nu, s),
        }
    }

    /// Squared normalisation `1 / int_0^1 J_nu(b rho)^2 rho d rho`, halved.
    fn weight(self, nu: f64, b: f64) -> Result<f64> {
        match self {
            Radial::Dirichlet => Ok(bessel_j(nu + 1.0, b)?.powi(-2)),
            Radial::Neumann => Ok(1.0 / ((1.0 - (nu / b).powi(2)) * bessel_j(nu, b)?.powi(2))),
        }
    }
}

/// Envelope for `weight * e^{-b^2 t}` at zero `b`, and its sum over a zero ladder starting at `b`.
fn envelope(b: f64, t: f64) -> f64 {
    let b2 = (b * b).max(1.0);
    b2 * (-b * b * t).exp()
}

fn ladder(b: f64, t: f64) -> f64 {
    let bmin = b.max((1.0 / t).sqrt());
    let mut sum = 0.0;
    for m in 0.. {
        let e = envelope(bmin + m as f64 * ZERO_GAP, t);
        sum += e;
        if e <= 1e-18 * sum || e == 0.0 {
            break;
        }
    }
    sum + if bmin > b {
        envelope(bmin, t) * ((bmin - b) / ZERO_GAP).ceil()
    } else {
        0.0
    }
}

struct Series<'a> {
    radial: Radial,
    delta: f64,
    t: f64,
    rho: f64,
    r: f64,
    first_j: usize,
    w_max: f64,
    angular: &'a dyn Fn(usize, f64) -> f64,
}

impl Series<'_> {
    fn angular_tail(&self, j_last: usize) -> f64 {
        let mut sum = 0.0;
        for j in j_last + 1.. {
            let h = ladder(j as f64 * self.delta, self.t);
            sum += h;
            if h <= 1e-18 * sum || h == 0.0 {
                break;
            }
        }
        self.w_max * sum
    }

    /// `sum_j a_j sum_s w_s e^{-b_s^2 t} J_nu(b_s rho) J_nu(b_s r)` to `tol`.
    fn sum(&self, tol: f64, max_terms: usize) -> Result<SeriesValue> {
        let mut j_last = self.first_j;
        let mut ang = self.angular_tail(j_last);
        while ang > 0.1 * tol {
            j_last += 1;
            if j_last > max_terms {
                return Err(shortfall(tol, ang));
            }
            ang = self.angular_tail(j_last);
        }
        let modes = (j_last + 1 - self.first_j) as f64;
        let radial_tol = 0.9 * tol / (modes * self.w_max);
        let mut total = 0.0;
        let mut tail = ang;
        let mut terms = 0;
        for j in self.first_j..=j_last {
            let nu = j as f64 * self.delta;
            let a = (self.angular)(j, nu);
            let mut inner = 0.0;
            let mut s = 1;
            loop {
                let b = self.radial.zero(nu, s)?;
                let e = (-b * b * self.t).exp();
                if e > 0.0 {
                    inner += self.radial.weight(nu, b)? * e * bessel_j(nu, b * self.rho)? * bessel_j(nu, b * self.r)?;
                }
                terms += 1;
                let rest = if b * b * self.t >= 1.0 {
                    ladder(b + ZERO_GAP, self.t)
                } else {
                    f64::INFINITY
                };
                if rest <= radial_tol {
                    tail += self.w_max * rest;
                    break;
                }
                s += 1;
                if s > max_terms {
                    return Err(shortfall(tol, self.w_max * rest + ang));
                }
            }
            total += a * inner;
        }
        Ok(SeriesValue {
            value: total,
            tail_bound: tail,
            terms,
        })
    }
}

fn check_inside(phi: Aperture, x: PolarPoint) -> bool {
    phi.contains(x) && x.rho < 1.0
}

/// `lambda_{j,s}(Phi) = b_{pi j/Phi, s}^2`, the Dirichlet eigenvalues of the truncated cone.
pub fn dirichlet_eigenvalue(phi: Aperture, j: usize, s: usize) -> Result<f64> {
    if j == 0 {
        return param("angular index starts at 1");
    }
    Ok(bessel_j_zero(j as f64 * phi.frequency(), s)?.powi(2))
}

/// `d_{j,s}(Phi) = 1 / J_{1 + pi j/Phi}(b_{pi j/Phi, s})`.
pub fn dirichlet_coefficient(phi: Aperture, j: usize, s: usize) -> Result<f64> {
    if j == 0 {
        return param("angular index starts at 1");
    }
    let nu = j as f64 * phi.frequency();
    Ok(1.0 / bessel_j(nu + 1.0, bessel_j_zero(nu, s)?)?)
}

/// Heat kernel of `{0 < rho < 1, 0 < theta < Phi}` by its Fourier-Bessel double series.
///
/// Both boundary conditions apply on the whole boundary; Neumann uses the
/// zeros of `J'_nu` and keeps the angle-independent modes and the constant.
pub fn truncated_cone_heat(
    bc: Boundary,
    phi: Aperture,
    t: f64,
    x: PolarPoint,
    y: PolarPoint,
    ctrl: &SeriesControl,
) -> Result<SeriesValue> {
    ctrl.validate()?;
    check_time(t)?;
    if !check_inside(phi, x) || !check_inside(phi, y) {
        return domain("points must lie inside the truncated cone");
    }
    let pref = 2.0 / phi.value();
    let (minus, plus) = (x.theta - y.theta, x.theta + y.theta);
    let sign = bc.image_sign();
    let angular = move |j: usize, nu: f64| {
        if j == 0 {
            1.0
        } else {
            (nu * minus).cos() + sign * (nu * plus).cos()
        }
    };
    let (radial, first_j, constant) = match bc {
        Boundary::Dirichlet => (Radial::Dirichlet, 1, 0.0),
        Boundary::Neumann => (Radial::Neumann, 0, 1.0),
    };
    let series = Series {
        radial,
        delta: phi.frequency(),
        t,
        rho: x.rho,
        r: y.rho,
        first_j,
        w_max: 2.0,
        angular: &angular,
    };
    let s = series.sum(ctrl.abs_tol / pref, ctrl.max_terms)?;
    Ok(SeriesValue {
        value: pref * (constant + s.value),
        tail_bound: pref * s.tail_bound,
        terms: s.terms,
    })
}

/// Dirichlet heat kernel of the unit disk.
pub fn disk_heat_dirichlet(t: f64, x: PolarPoint, y: PolarPoint, ctrl: &SeriesControl) -> Result<SeriesValue> {
    ctrl.validate()?;
    check_time(t)?;
    let ok = |p: PolarPoint| p.rho >= 0.0 && p.rho < 1.0 && p.theta.is_finite();
    if !ok(x) || !ok(y) {
        return domain("points must lie inside the unit disk");
    }
    let diff = x.theta - y.theta;
    let angular = move |j: usize, nu: f64| if j == 0 { 1.0 } else { 2.0 * (nu * diff).cos() };
    let series = Series {
        radial: Radial::Dirichlet,
        delta: 1.0,
        t,
        rho: x.rho,
        r: y.rho,
        first_j: 0,
        w_max: 2.0,
        angular: &angular,
    };
    let pref = 1.0 / PI;
    let s = series.sum(ctrl.abs_tol / pref, ctrl.max_terms)?;
    Ok(SeriesValue {
        value: pref * s.value,
        tail_bound: pref * s.tail_bound,
        terms: s.terms,
    })
}

/// [`truncated_cone_heat`] on Cartesian points.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedConeKernel {
    pub bc: Boundary,
    pub phi: Aperture,
    pub t: f64,
    pub ctrl: SeriesControl,
}

impl Kernel for TruncatedConeKernel {
    fn dim(&self) -> usize {
        2
    }
    fn contains(&self, x: &Point) -> bool {
        PolarPoint::from_point(x).is_some_and(|p| check_inside(self.phi, p))
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        let (Some(px), Some(py)) = (PolarPoint::from_point(x), PolarPoint::from_point(y)) else {
            return domain("truncated cone kernel needs planar points off the vertex");
        };
        Ok(truncated_cone_heat(self.bc, self.phi, self.t, px, py, &self.ctrl)?.value)
    }
}

/// [`disk_heat_dirichlet`] on Cartesian points.
#[derive(Debug, Clone, Copy)]
pub struct DiskKernel {
    pub t: f64,
    pub ctrl: SeriesControl,
}

fn disk_polar(x: &Point) -> Option<PolarPoint> {
    if x.dim() != 2 {
        return None;
    }
    Some(PolarPoint::from_point(x).unwrap_or(PolarPoint::new(0.0, 0.0)))
}

impl Kernel for DiskKernel {
    fn dim(&self) -> usize {
        2
    }
    fn contains(&self, x: &Point) -> bool {
        x.dim() == 2 && x.norm() < 1.0
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        let (Some(px), Some(py)) = (disk_polar(x), disk_polar(y)) else {
            return domain("disk kernel needs planar points");
        };
        Ok(disk_heat_dirichlet(self.t, px, py, &self.ctrl)?.value)
    }
}
