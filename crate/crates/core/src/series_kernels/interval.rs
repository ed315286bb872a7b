use std::f64::consts::PI;

use super::{check_time, shortfall, SeriesControl, SeriesValue};
use crate::error::{domain, param, Result};
use crate::geometry::{Boundary, Point};
use crate::reflection::Kernel;

/// Heat kernel of `(a, b)` by its sine (Dirichlet) or cosine (Neumann) series.
///
/// The Neumann constant mode carries weight `1/(b-a)`, the remaining modes
/// `2/(b-a)`.
pub fn interval_heat(
    bc: Boundary,
    a: f64,
    b: f64,
    t: f64,
    x: f64,
    y: f64,
    ctrl: &SeriesControl,
) -> Result<SeriesValue> {
    ctrl.validate()?;
    check_time(t)?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return param(format!("interval needs finite a < b, got ({a}, {b})"));
    }
    if !(x > a && x < b && y > a && y < b) {
        return domain(format!("points must lie in ({a}, {b})"));
    }
    let len = b - a;
    let c = PI * PI * t / (len * len);
    // sum_{n > N} e^{-n^2 c} <= e^{-(N+1)^2 c} / (1 - e^{-2(N+1) c})
    let tail = |n: usize| {
        let m = (n + 1) as f64;
        2.0 / len * (-m * m * c).exp() / (-(2.0 * m * c)).exp_m1().abs()
    };
    let mut n_max = 0usize;
    while tail(n_max) > ctrl.abs_tol {
        n_max += 1;
        if n_max >= ctrl.max_terms {
            return Err(shortfall(ctrl.abs_tol, tail(n_max)));
        }
    }
    let w = PI / len;
    let (u, v) = (x - a, y - a);
    let mut sum = match bc {
        Boundary::Neumann => 0.5,
        Boundary::Dirichlet => 0.0,
    };
    for n in 1..=n_max {
        let nf = n as f64;
        let decay = (-nf * nf * c).exp();
        let modes = match bc {
            Boundary::Dirichlet => (nf * w * u).sin() * (nf * w * v).sin(),
            Boundary::Neumann => (nf * w * u).cos() * (nf * w * v).cos(),
        };
        sum += decay * modes;
    }
    Ok(SeriesValue {
        value: 2.0 / len * sum,
        tail_bound: tail(n_max),
        terms: n_max + 1,
    })
}

/// [`interval_heat`] as a one-dimensional [`Kernel`].
#[derive(Debug, Clone, Copy)]
pub struct IntervalKernel {
    pub bc: Boundary,
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub ctrl: SeriesControl,
}

impl Kernel for IntervalKernel {
    fn dim(&self) -> usize {
        1
    }
    fn contains(&self, x: &Point) -> bool {
        x.dim() == 1 && x[0] > self.a && x[0] < self.b
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        x.check_dim(1)?;
        y.check_dim(1)?;
        Ok(interval_heat(self.bc, self.a, self.b, self.t, x[0], y[0], &self.ctrl)?.value)
    }
}
