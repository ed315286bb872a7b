//! Closed-form kernels on `R^d` and the half-space, with the transform
//! integrals over the Gaussian heat kernel as independent oracles.
//!
//! The closed forms here are evaluated directly; the `*_by_quadrature`
//! functions integrate [`gauss_heat`] in `t` and share no code with them
//! beyond the Gaussian itself.

use std::f64::consts::PI;

use crate::error::{domain, param, KernelError, Result};
use crate::geometry::{Boundary, Point};
use crate::quadrature::{integrate, Quadrature, QuadratureControl};
use crate::reflection::Kernel;
use crate::specfun::{bessel_k_scaled, ln_gamma};

/// Which function of the Laplacian a kernel represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// `exp(-t(-Delta))`, `t > 0`.
    Heat { t: f64 },
    /// `(-Delta + lambda)^{-1}`, `lambda > 0`.
    Resolvent { lambda: f64 },
    /// `(-Delta)^{-sigma}`, `0 < sigma < d/2`.
    Riesz { sigma: f64 },
    /// Newtonian potential, the `sigma = 1` Riesz kernel.
    Green,
}

impl KernelFamily {
    pub fn validate(&self, d: usize) -> Result<()> {
        match *self {
            KernelFamily::Heat { t } => check_positive(t, "t"),
            KernelFamily::Resolvent { lambda } => check_positive(lambda, "lambda"),
            KernelFamily::Riesz { sigma } => check_sigma(d, sigma),
            KernelFamily::Green => {
                if d < 3 {
                    return param(format!("Green's function on R^{d} does not exist (needs d >= 3)"));
                }
                Ok(())
            }
        }
    }
}

fn check_positive(v: f64, name: &str) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return param(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

fn check_pair(d: usize, x: &Point, y: &Point) -> Result<()> {
    if d == 0 {
        return param("dimension must be >= 1");
    }
    x.check_dim(d)?;
    y.check_dim(d)
}

fn check_sigma(d: usize, sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < 0.5 * d as f64) {
        return param(format!("Riesz exponent {sigma} outside (0, {}/2)", d));
    }
    Ok(())
}

/// Gaussian heat kernel `(4 pi t)^{-d/2} exp(-|x-y|^2 / 4t)`.
pub fn gauss_heat(d: usize, t: f64, x: &Point, y: &Point) -> Result<f64> {
    check_pair(d, x, y)?;
    check_positive(t, "t")?;
    Ok(gauss(d, t, x.dist_sq(y)))
}

#[inline]
fn gauss(d: usize, t: f64, r2: f64) -> f64 {
    (4.0 * PI * t).powf(-0.5 * d as f64) * (-r2 / (4.0 * t)).exp()
}

/// Heat kernel of the half-space `{x_d > 0}`: `p_t(x,y) +- p_t(x~,y)` with
/// `x~` the last-coordinate flip of `x`.
pub fn halfspace_heat(bc: Boundary, d: usize, t: f64, x: &Point, y: &Point) -> Result<f64> {
    check_pair(d, x, y)?;
    check_positive(t, "t")?;
    if !(x[d - 1] > 0.0) || !(y[d - 1] > 0.0) {
        return domain("half-space kernel needs x_d > 0 and y_d > 0");
    }
    let direct = gauss(d, t, x.dist_sq(y));
    let image = gauss(d, t, x.flip_last().dist_sq(y));
    Ok(direct + bc.image_sign() * image)
}

/// Resolvent kernel `(2 pi)^{-d/2} lambda^{(d-2)/4} r^{1-d/2} K_{d/2-1}(r sqrt(lambda))`.
///
/// In `d = 1` the diagonal value `1/(2 sqrt(lambda))` is returned; for
/// `d >= 2` the diagonal is a singularity.
pub fn resolvent(d: usize, lambda: f64, x: &Point, y: &Point) -> Result<f64> {
    check_pair(d, x, y)?;
    check_positive(lambda, "lambda")?;
    let r = x.dist(y);
    resolvent_radial(d, lambda, r)
}

pub(crate) fn resolvent_radial(d: usize, lambda: f64, r: f64) -> Result<f64> {
    let sl = lambda.sqrt();
    if r == 0.0 {
        if d == 1 {
            return Ok(0.5 / sl);
        }
        return domain("resolvent kernel is singular on the diagonal for d >= 2");
    }
    let half_d = 0.5 * d as f64;
    let nu = half_d - 1.0;
    let z = r * sl;
    let k_scaled = bessel_k_scaled(nu, z)?;
    let log_pref = -half_d * (2.0 * PI).ln() + 0.5 * nu * lambda.ln() - nu * r.ln() - z;
    Ok(log_pref.exp() * k_scaled)
}

/// Integral over `s = ln t` of a log-concave integrand `exp(log_g(s))`.
///
/// The range is grown around the peak until the concavity tail bounds
/// `g(s_edge) / |slope(s_edge)|` fall well below the target accuracy; those
/// bounds are included in the reported error.
fn log_concave_integral<G, D>(log_g: G, slope: D, peak: f64, ctrl: &QuadratureControl) -> Result<Quadrature>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let log_peak = log_g(peak);
    let inner = QuadratureControl {
        rel_tol: 0.5 * ctrl.rel_tol,
        abs_tol: 0.5 * ctrl.abs_tol,
        ..*ctrl
    };
    let mut lo = peak - 1.0;
    let mut hi = peak + 1.0;
    // walk out until the integrand has dropped by e^-40 and the slopes point outward
    let drop = 40.0;
    let mut step = 1.0;
    while !(log_g(hi) < log_peak - drop && slope(hi) < 0.0) {
        hi += step;
        step *= 1.5;
        if step > 1e6 {
            return Err(KernelError::Divergent(
                "integrand does not decay as t -> infinity".into(),
            ));
        }
    }
    step = 1.0;
    while !(log_g(lo) < log_peak - drop && slope(lo) > 0.0) {
        lo -= step;
        step *= 1.5;
        if step > 1e6 {
            return Err(KernelError::Divergent("integrand does not decay as t -> 0".into()));
        }
    }
    for _ in 0..60 {
        let q = integrate(|s| log_g(s).exp(), lo, hi, &inner)?;
        let tail_hi = log_g(hi).exp() / slope(hi).abs();
        let tail_lo = log_g(lo).exp() / slope(lo).abs();
        let target = ctrl.abs_tol.max(ctrl.rel_tol * q.value.abs());
        if tail_hi + tail_lo <= 0.1 * target {
            return Ok(Quadrature {
                value: q.value,
                abs_error: q.abs_error + tail_hi + tail_lo,
                evaluations: q.evaluations,
            });
        }
        if tail_hi > 0.05 * target {
            hi += 0.5 * (hi - lo);
        }
        if tail_lo > 0.05 * target {
            lo -= 0.5 * (hi - lo);
        }
    }
    Err(KernelError::Convergence("could not bound the transform tails".into()))
}

/// Laplace transform `int_0^inf exp(-lambda t) p_t(x,y) dt` by quadrature.
pub fn resolvent_by_quadrature(
    d: usize,
    lambda: f64,
    x: &Point,
    y: &Point,
    ctrl: &QuadratureControl,
) -> Result<Quadrature> {
    check_pair(d, x, y)?;
    check_positive(lambda, "lambda")?;
    ctrl.validate()?;
    let r2 = x.dist_sq(y);
    if r2 == 0.0 {
        return domain("resolvent quadrature needs x != y");
    }
    let a = 0.25 * r2;
    let c = 1.0 - 0.5 * d as f64;
    let norm = -(0.5 * d as f64) * (4.0 * PI).ln();
    // log of e^s * p_{e^s} * e^{-lambda e^s}
    let log_g = |s: f64| norm - lambda * s.exp() - a * (-s).exp() + c * s;
    let slope = |s: f64| -lambda * s.exp() + a * (-s).exp() + c;
    // slope is decreasing; bisect for its root
    let (mut lo, mut hi) = (-800.0_f64, 800.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    log_concave_integral(log_g, slope, 0.5 * (lo + hi), ctrl)
}

/// Normalising constant `Gamma(d/2 - sigma) / (4^sigma pi^{d/2} Gamma(sigma))`.
pub fn riesz_constant(d: usize, sigma: f64) -> Result<f64> {
    check_sigma(d, sigma)?;
    let half_d = 0.5 * d as f64;
    Ok((ln_gamma(half_d - sigma) - 2.0 * sigma * 2f64.ln() - half_d * PI.ln() - ln_gamma(sigma)).exp())
}

/// Riesz potential kernel `c_{d,sigma} |x-y|^{2 sigma - d}`.
pub fn riesz(d: usize, sigma: f64, x: &Point, y: &Point) -> Result<f64> {
    check_pair(d, x, y)?;
    let c = riesz_constant(d, sigma)?;
    let r = x.dist(y);
    if r == 0.0 {
        return domain("Riesz kernel is singular on the diagonal");
    }
    Ok(c * r.powf(2.0 * sigma - d as f64))
}

/// `Gamma(sigma)^{-1} int_0^inf p_t(x,y) t^{sigma-1} dt` by quadrature.
pub fn riesz_by_quadrature(d: usize, sigma: f64, x: &Point, y: &Point, ctrl: &QuadratureControl) -> Result<Quadrature> {
    check_pair(d, x, y)?;
    check_sigma(d, sigma)?;
    ctrl.validate()?;
    let r2 = x.dist_sq(y);
    if r2 == 0.0 {
        return domain("Riesz quadrature needs x != y");
    }
    let a = 0.25 * r2;
    let c = sigma - 0.5 * d as f64;
    let norm = -(0.5 * d as f64) * (4.0 * PI).ln() - ln_gamma(sigma);
    let log_g = |s: f64| norm - a * (-s).exp() + c * s;
    let slope = |s: f64| a * (-s).exp() + c;
    let peak = (a / -c).ln();
    log_concave_integral(log_g, slope, peak, ctrl)
}

/// Green's function `c_{d,1} |x-y|^{2-d}` on `R^d`, `d >= 3`.
pub fn green(d: usize, x: &Point, y: &Point) -> Result<f64> {
    if d < 3 {
        return param(format!("Green's function on R^{d} does not exist (needs d >= 3)"));
    }
    riesz(d, 1.0, x, y)
}

/// Newtonian potential of the Dirichlet Laplacian on the half-line: `min(x, y)`.
pub fn newtonian_halfline_dirichlet(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain("half-line Newtonian potential needs x, y > 0");
    }
    Ok(x.min(y))
}

/// Outcome of the half-line Newtonian quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct HalflineNewtonian {
    pub value: f64,
    pub abs_error: f64,
    /// Partial integrals over `[0, T_k]`, `T_k = T_0 2^k`.
    pub partials: Vec<f64>,
}

/// Number of successive non-shrinking dyadic increments that flags divergence.
pub const DIVERGENCE_RUN: usize = 3;

/// `int_0^inf (p_t(x,y) -+ p_t(-x,y)) dt` on the half-line, by dyadic partial
/// integrals. The Dirichlet sign converges by cancellation to `min(x,y)`; the
/// Neumann sign grows like `sqrt(T)` and is reported as
/// [`KernelError::Divergent`] once `DIVERGENCE_RUN` successive dyadic
/// increments fail to shrink.
pub fn halfline_newtonian_by_quadrature(
    bc: Boundary,
    x: f64,
    y: f64,
    ctrl: &QuadratureControl,
) -> Result<HalflineNewtonian> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain("half-line Newtonian potential needs x, y > 0");
    }
    ctrl.validate()?;
    let sign = bc.image_sign();
    let dm2 = (x - y) * (x - y);
    let dp2 = (x + y) * (x + y);
    // e^{-dm2/4t} (1 +- e^{-xy/t}); expm1 keeps the Dirichlet difference exact at large t
    let f = |t: f64| {
        let g = (4.0 * PI * t).powf(-0.5) * (-dm2 / (4.0 * t)).exp();
        let e = -x * y / t;
        g * if sign < 0.0 { -e.exp_m1() } else { 1.0 + e.exp() }
    };
    // in s = ln t the integrand e^s f(e^s) is smooth on every dyadic block;
    // each block gets a share of the accuracy target of the running total
    let block = |s0: f64, s1: f64, total: f64| {
        let abs_tol = 0.01 * ctrl.abs_tol.max(ctrl.rel_tol * total.abs());
        let inner = QuadratureControl {
            rel_tol: 0.1 * ctrl.rel_tol,
            abs_tol,
            ..*ctrl
        };
        integrate(|s: f64| s.exp() * f(s.exp()), s0, s1, &inner)
    };
    // below t_min the integrand is bounded by (4 pi t)^{-1/2} (1 + 1)
    let t_min = 1e-40_f64;
    let lower_bound = 2.0 * 2.0 * (t_min / (4.0 * PI)).sqrt();
    let t0 = 4.0 * dp2.max(1.0);
    let head = block(t_min.ln(), t0.ln(), 0.0)?;
    let mut total = head.value;
    let mut err = head.abs_error + lower_bound;
    let mut partials = vec![total];
    let mut increments: Vec<f64> = Vec::new();
    let mut t = t0;
    for _ in 0..400 {
        let q = block(t.ln(), (2.0 * t).ln(), total)?;
        t *= 2.0;
        total += q.value;
        err += q.abs_error;
        partials.push(total);
        increments.push(q.value);
        let n = increments.len();
        if n > DIVERGENCE_RUN
            && increments[n - DIVERGENCE_RUN - 1..]
                .windows(2)
                .all(|w| w[1] >= w[0] && w[0] > 0.0)
        {
            return Err(KernelError::Divergent(format!(
                "partial integrals grow without bound (last {DIVERGENCE_RUN} dyadic increments non-decreasing, \
                 partial integral {total:.6e} at T = {t:.3e})"
            )));
        }
        if bc == Boundary::Dirichlet {
            // p_t(x,y) - p_t(-x,y) <= (4 pi t)^{-1/2} x y / t
            let tail = x * y / (PI * t).sqrt();
            let target = ctrl.abs_tol.max(ctrl.rel_tol * total.abs());
            if tail <= 0.5 * target {
                return Ok(HalflineNewtonian {
                    value: total,
                    abs_error: err + tail,
                    partials,
                });
            }
        }
    }
    Err(KernelError::Convergence(
        "half-line Newtonian quadrature did not settle".into(),
    ))
}

/// Free-space Gaussian heat kernel as a [`Kernel`] value.
#[derive(Debug, Clone, Copy)]
pub struct GaussHeat {
    pub d: usize,
    pub t: f64,
}

impl Kernel for GaussHeat {
    fn dim(&self) -> usize {
        self.d
    }
    fn contains(&self, _x: &Point) -> bool {
        true
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        gauss_heat(self.d, self.t, x, y)
    }
}

/// Free-space resolvent kernel as a [`Kernel`] value.
#[derive(Debug, Clone, Copy)]
pub struct ResolventKernel {
    pub d: usize,
    pub lambda: f64,
}

impl Kernel for ResolventKernel {
    fn dim(&self) -> usize {
        self.d
    }
    fn contains(&self, _x: &Point) -> bool {
        true
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        resolvent(self.d, self.lambda, x, y)
    }
}

/// Free-space Riesz kernel as a [`Kernel`] value.
#[derive(Debug, Clone, Copy)]
pub struct RieszKernel {
    pub d: usize,
    pub sigma: f64,
}

impl Kernel for RieszKernel {
    fn dim(&self) -> usize {
        self.d
    }
    fn contains(&self, _x: &Point) -> bool {
        true
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        riesz(self.d, self.sigma, x, y)
    }
}

/// The free-space kernel for `family` in dimension `d`.
pub fn free_kernel(d: usize, family: KernelFamily) -> Result<Box<dyn Kernel>> {
    family.validate(d)?;
    Ok(match family {
        KernelFamily::Heat { t } => Box::new(GaussHeat { d, t }),
        KernelFamily::Resolvent { lambda } => Box::new(ResolventKernel { d, lambda }),
        KernelFamily::Riesz { sigma } => Box::new(RieszKernel { d, sigma }),
        KernelFamily::Green => Box::new(RieszKernel { d, sigma: 1.0 }),
    })
}
