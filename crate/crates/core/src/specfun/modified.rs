//! Modified Bessel functions `I_nu` and `K_nu` of real order.
//!
//! `I_nu` uses the ascending series (all terms positive, summed in a scaled
//! representation so that large arguments do not overflow) and the
//! large-argument Hankel expansion past `x = 30`. `K_nu` uses Temme's series
//! for `x <= 2` and Steed's continued fraction otherwise, reduced to an order
//! in `[-1/2, 1/2)` and lifted by forward recurrence. The two families share no
//! code path, so the Wronskian is a genuine check.

use super::gamma::{ln_gamma, temme_gammas};
use std::f64::consts::{LN_10, PI};

const EPS: f64 = 1e-16;
const MAXIT: usize = 100_000;
pub(crate) const I_ASYMPTOTIC_MIN: f64 = 30.0;

/// Ascending series for `I_nu(x) e^{-x}`.
pub(crate) fn i_scaled_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let h = 0.5 * x;
    let q = h * h;
    let log_t0 = nu * h.ln() - ln_gamma(nu + 1.0) - x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut log_scale = 0.0;
    let mut k = 0.0_f64;
    loop {
        k += 1.0;
        let ratio = q / (k * (k + nu));
        term *= ratio;
        sum += term;
        if ratio < 1.0 && term < EPS * sum {
            break;
        }
        if sum > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * LN_10;
        }
    }
    if log_scale == 0.0 && log_t0 > -700.0 {
        log_t0.exp() * sum
    } else {
        (log_t0 + log_scale + sum.ln()).exp()
    }
}

/// Hankel expansion for `I_nu(x) e^{-x}`; `None` when it does not reach full
/// precision before the terms start to grow.
pub(crate) fn i_scaled_asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let k = k as f64;
        let odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        if term == 0.0 {
            return Some(sum / (2.0 * PI * x).sqrt());
        }
        if term.abs() > prev || term.abs() > 1.0 {
            return None;
        }
        sum += term;
        if term.abs() < EPS * sum.abs() {
            return Some(sum / (2.0 * PI * x).sqrt());
        }
        prev = term.abs();
    }
    None
}

pub(crate) fn i_scaled(nu: f64, x: f64) -> f64 {
    if x >= I_ASYMPTOTIC_MIN {
        if let Some(v) = i_scaled_asymptotic(nu, x) {
            return v;
        }
    }
    i_scaled_series(nu, x)
}

/// Returns `(K_mu(x), K_{mu+1}(x))` times `e^x` for `|mu| <= 1/2`.
fn k_base_scaled(mu: f64, x: f64) -> (f64, f64) {
    if x <= 2.0 {
        let (kmu, k1) = k_temme(mu, x);
        let ex = x.exp();
        (kmu * ex, k1 * ex)
    } else {
        k_steed_scaled(mu, x)
    }
}

fn k_temme(mu: f64, x: f64) -> (f64, f64) {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mu2 = mu * mu;
    for i in 1..MAXIT {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

fn k_steed_scaled(mu: f64, x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAXIT {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (mu + x + 0.5 - h) / x;
    (kmu, k1)
}

/// `(K_nu(x), K_{nu+1}(x)) e^x` for `nu >= 0`, `x > 0`.
pub(crate) fn k_pair_scaled(nu: f64, x: f64) -> (f64, f64) {
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut kmu, mut k1) = k_base_scaled(mu, x);
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
        if !kmu.is_finite() {
            break;
        }
    }
    (kmu, k1)
}
