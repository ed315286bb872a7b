//! Real-order Bessel functions and their zeros.
//!
//! All functions are pure; the zero finders keep a process-wide cache guarded
//! by a read-write lock, which never changes returned values.

mod first_kind;
mod gamma;
mod modified;
mod zeros;

use crate::error::{domain, KernelError, Result};

pub(crate) use gamma::ln_gamma;

/// A validated, non-negative, finite Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(KernelError::Domain(format!(
                "Bessel order must be finite and >= 0, got {nu}"
            )));
        }
        Ok(BesselOrder(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// 1-based index into the increasing sequence of positive zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZeroIndex(usize);

impl ZeroIndex {
    pub fn new(s: usize) -> Result<Self> {
        if s == 0 {
            return domain("zero index is 1-based");
        }
        Ok(ZeroIndex(s))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

fn check_arg(x: f64, name: &str) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(KernelError::Domain(format!(
            "{name}: argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(())
}

/// `(J_nu(x), J'_nu(x))` for `nu >= 0`, `x >= 0`.
pub fn bessel_j_with_derivative(nu: f64, x: f64) -> Result<(f64, f64)> {
    let nu = BesselOrder::new(nu)?.value();
    check_arg(x, "bessel_j")?;
    first_kind::j_and_derivative(nu, x)
        .ok_or_else(|| KernelError::Convergence(format!("J_{nu}({x}): continued fraction did not converge")))
}

/// Bessel function of the first kind `J_nu(x)`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_j_with_derivative(nu, x)?.0)
}

/// Derivative `J'_nu(x)`; infinite at `x = 0` for `0 < nu < 1`.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_j_with_derivative(nu, x)?.1)
}

/// Exponentially scaled modified Bessel function `I_nu(x) e^{-x}`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    let nu = BesselOrder::new(nu)?.value();
    check_arg(x, "bessel_i")?;
    Ok(modified::i_scaled(nu, x))
}

/// Modified Bessel function `I_nu(x)`. Overflow is reported, not saturated.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(nu, x)?;
    if scaled == 0.0 {
        return Ok(0.0);
    }
    let log = scaled.ln() + x;
    if log > f64::MAX.ln() {
        return Err(KernelError::Overflow(format!(
            "I_{nu}({x}) ~ e^{log:.1} exceeds f64; use bessel_i_scaled"
        )));
    }
    Ok(scaled * x.exp())
}

fn check_k(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() {
        return domain("Bessel order must be finite");
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(KernelError::Domain(format!("K_nu(x) requires x > 0, got {x}")));
    }
    Ok(nu.abs())
}

/// `(K_nu(x), K_{nu+1}(x)) e^x`. Negative orders use `K_{-nu} = K_nu` for the first entry.
pub fn bessel_k_pair_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    let nu = check_k(nu, x)?;
    let (k0, k1) = modified::k_pair_scaled(nu, x);
    if !k0.is_finite() || !k1.is_finite() {
        return Err(KernelError::Overflow(format!("K_{nu}({x}) exceeds f64")));
    }
    Ok((k0, k1))
}

/// Exponentially scaled Macdonald function `K_nu(x) e^x`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_pair_scaled(nu, x)?.0)
}

/// Macdonald function `K_nu(x)`, `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, x)? * (-x).exp())
}

/// The `s`-th positive zero of `J_nu` (`s` is 1-based).
pub fn bessel_j_zero(nu: f64, s: usize) -> Result<f64> {
    let nu = BesselOrder::new(nu)?.value();
    let s = ZeroIndex::new(s)?.get();
    zeros::j_zero(nu, s)
}

/// The `s`-th positive zero of `J'_nu`; the origin is never counted.
pub fn bessel_j_prime_zero(nu: f64, s: usize) -> Result<f64> {
    let nu = BesselOrder::new(nu)?.value();
    let s = ZeroIndex::new(s)?.get();
    zeros::j_prime_zero(nu, s)
}
