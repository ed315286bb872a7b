//! Bessel function of the first kind `J_nu` and its derivative, real order.
//!
//! Three regimes: the ascending series where `x^2 <= (nu + 1) / 4`, the Hankel
//! expansion for large `x`, and Steed's method (continued fractions CF1/CF2,
//! Temme's series for `x < 2`) in between.

use super::gamma::{ln_gamma, temme_gammas};
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-280;
const MAXIT: usize = 200_000;
pub(crate) const HANKEL_MIN: f64 = 50.0;

/// `(J_nu(x), J'_nu(x))`, or `None` when an iteration fails to converge.
pub(crate) fn j_and_derivative(nu: f64, x: f64) -> Option<(f64, f64)> {
    if x == 0.0 {
        let j = if nu == 0.0 { 1.0 } else { 0.0 };
        let jp = if nu == 1.0 {
            0.5
        } else if nu > 0.0 && nu < 1.0 {
            f64::INFINITY
        } else {
            0.0
        };
        return Some((j, jp));
    }
    if x * x <= 0.25 * (nu + 1.0) {
        return Some(series(nu, x));
    }
    if x >= HANKEL_MIN {
        if let Some(v) = hankel(nu, x) {
            return Some(v);
        }
    }
    steed(nu, x)
}

pub(crate) fn series(nu: f64, x: f64) -> (f64, f64) {
    let h = 0.5 * x;
    let t0 = if nu < 150.0 {
        h.powf(nu) / libm::tgamma(nu + 1.0)
    } else {
        (nu * h.ln() - ln_gamma(nu + 1.0)).exp()
    };
    let q = -h * h;
    let mut term = t0;
    let mut sum = t0;
    let mut dsum = nu * t0;
    for k in 1..500 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        dsum += (2.0 * k + nu) * term;
        if term.abs() <= EPS * sum.abs() {
            break;
        }
    }
    (sum, dsum / x)
}

/// Hankel expansion of `J_nu` and `J_{nu+1}`; derivative from the recurrence.
pub(crate) fn hankel(nu: f64, x: f64) -> Option<(f64, f64)> {
    let j0 = hankel_j(nu, x)?;
    let j1 = hankel_j(nu + 1.0, x)?;
    Some((j0, nu / x * j0 - j1))
}

fn hankel_j(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0_f64;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * x);
        if a == 0.0 {
            converged = true;
            break;
        }
        if a.abs() > prev || a.abs() > 1.0 {
            return None;
        }
        // (-1)^{floor(k/2)} pattern: k=1 -> +Q, k=2 -> -P, k=3 -> -Q, k=4 -> +P
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < EPS {
            converged = true;
            break;
        }
        prev = a.abs();
    }
    if !converged {
        return None;
    }
    let omega = x - (0.5 * nu + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin()))
}

/// Steed's method; returns `(J_nu, J'_nu)`.
pub(crate) fn steed(nu: f64, x: f64) -> Option<(f64, f64)> {
    const XMIN: f64 = 2.0;
    let nl = if x < XMIN {
        (nu + 0.5).floor()
    } else {
        (nu - x + 1.5).floor().max(0.0)
    };
    let xmu = nu - nl;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_nu / J_nu
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0_f64;
    let mut c = h;
    let mut ok = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            ok = true;
            break;
        }
    }
    if !ok {
        return None;
    }

    // Downward recurrence from nu to mu with rescaling.
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..(nl as usize) {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > 1e200 {
            rjl *= 1e-200;
            rjpl *= 1e-200;
            rjl1 *= 1e-200;
            rjp1 *= 1e-200;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let rjmu = if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return None;
        }
        let rymu = -sum;
        let ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        w / (rymup - f * rymu)
    } else {
        // CF2: p + i q = (J' + i Y') / (J + i Y)
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 1..MAXIT {
            a += 2.0 * i as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() <= EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return None;
        }
        let gam = (p - f) / q;
        let rjmu = (w / ((p - f) * gam + q)).sqrt();
        rjmu.copysign(rjl)
    };
    let scale = rjmu / rjl;
    Some((rjl1 * scale, rjp1 * scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.3, 1.0, 2.0, 3.7, 10.0, 49.0, 60.0, 200.0] {
            let (j, jp) = j_and_derivative(0.5, x).unwrap();
            let s = (2.0 / (PI * x)).sqrt();
            let exact = s * x.sin();
            let exact_p = s * (x.cos() - x.sin() / (2.0 * x));
            assert!(
                (j - exact).abs() < 1e-14 * (1.0 + exact.abs()) * x.max(1.0),
                "x={x}: {j} vs {exact}"
            );
            assert!((jp - exact_p).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn regimes_agree_at_their_seams() {
        for &nu in &[0.0, 1.0, 2.5, 4.0] {
            let x = HANKEL_MIN;
            let (a, ap) = hankel(nu, x).unwrap();
            let (b, bp) = steed(nu, x).unwrap();
            assert!((a - b).abs() < 1e-12, "nu={nu}: {a} {b}");
            assert!((ap - bp).abs() < 1e-12);
        }
        for &nu in &[0.0, 0.5, 3.0, 12.0] {
            let x = (0.25 * (nu + 1.0f64)).sqrt();
            let (a, ap) = series(nu, x);
            let (b, bp) = steed(nu, x).unwrap();
            assert!(((a - b) / a).abs() < 1e-12, "nu={nu}: {a} {b}");
            assert!(((ap - bp) / ap).abs() < 1e-11, "nu={nu}: {ap} {bp}");
        }
    }

    #[test]
    fn tiny_argument_large_order_does_not_overflow() {
        let (j, _) = steed(40.0, 0.05).unwrap();
        let (s, _) = series(40.0, 0.05);
        assert!(j.is_finite());
        assert!(((j - s) / s).abs() < 1e-12);
    }
}
