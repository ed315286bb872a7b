//! Positive zeros of `J_nu` and `J'_nu`.
//!
//! Zeros are located by a sign-change scan with a step well below the minimal
//! zero spacing, seeded by McMahon's expansion and polished with Newton steps
//! safeguarded by the bracket. Results are cached per order.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::first_kind::j_and_derivative;
use crate::error::{KernelError, Result};

const SCAN_STEP: f64 = 0.5;
const MAX_NEWTON: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ZeroKind {
    Value,
    Derivative,
}

type ZeroCache = RwLock<HashMap<(u64, ZeroKind), Vec<f64>>>;

fn cache() -> &'static ZeroCache {
    static CACHE: OnceLock<ZeroCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// McMahon's large-zero expansion for `J_nu` (`prime = false`) or `J'_nu`.
pub(crate) fn mcmahon(nu: f64, s: usize, prime: bool) -> f64 {
    let mu = 4.0 * nu * nu;
    let s = s as f64;
    if !prime {
        let beta = (s + 0.5 * nu - 0.25) * std::f64::consts::PI;
        let e = 8.0 * beta;
        beta - (mu - 1.0) / e
            - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
            - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e.powi(5))
    } else {
        // For nu = 0 the trivial zero at the origin is excluded, shifting the count.
        let s = if nu == 0.0 { s + 1.0 } else { s };
        let beta = (s + 0.5 * nu - 0.75) * std::f64::consts::PI;
        let e = 8.0 * beta;
        beta - (mu + 3.0) / e - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * e.powi(3))
    }
}

struct Target {
    nu: f64,
    kind: ZeroKind,
}

impl Target {
    /// `(f, f')` where `f` is `J_nu` or `J'_nu`.
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (j, jp) = j_and_derivative(self.nu, x)
            .ok_or_else(|| KernelError::Convergence(format!("J_{} at x={x} did not converge", self.nu)))?;
        Ok(match self.kind {
            ZeroKind::Value => (j, jp),
            // Bessel's equation: J'' = -J'/x - (1 - nu^2/x^2) J
            ZeroKind::Derivative => (jp, -jp / x - (1.0 - self.nu * self.nu / (x * x)) * j),
        })
    }

    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.0)
    }

    /// Left end of the scan: a point below the first zero where the sign is known.
    fn scan_start(&self) -> f64 {
        match self.kind {
            ZeroKind::Value => self.nu.max(1.0),
            ZeroKind::Derivative => {
                if self.nu == 0.0 {
                    0.5
                } else {
                    0.999 * (self.nu * (self.nu + 2.0)).sqrt()
                }
            }
        }
    }

    fn refine(&self, mut lo: f64, mut hi: f64, seed: f64) -> Result<f64> {
        let mut flo = self.value(lo)?;
        let mut x = if seed > lo && seed < hi { seed } else { 0.5 * (lo + hi) };
        for _ in 0..MAX_NEWTON {
            let (f, fp) = self.eval(x)?;
            if f == 0.0 {
                return Ok(x);
            }
            if (f < 0.0) == (flo < 0.0) {
                lo = x;
                flo = f;
            } else {
                hi = x;
            }
            let newton = x - f / fp;
            let next = if fp != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
                return Ok(next);
            }
            x = next;
        }
        Err(KernelError::Convergence(format!(
            "zero refinement for order {} stalled in [{lo}, {hi}]",
            self.nu
        )))
    }

    /// Zeros following `known` until `count` are available.
    fn extend(&self, known: &mut Vec<f64>, count: usize) -> Result<()> {
        let mut lo = match known.last() {
            Some(&z) => z + 1e-9 * z.max(1.0),
            None => self.scan_start(),
        };
        let mut flo = self.value(lo)?;
        let mut guard = 0usize;
        while known.len() < count {
            let hi = lo + SCAN_STEP;
            let fhi = self.value(hi)?;
            if flo == 0.0 || (flo < 0.0) != (fhi < 0.0) {
                let seed = mcmahon(self.nu, known.len() + 1, self.kind == ZeroKind::Derivative);
                let z = if flo == 0.0 { lo } else { self.refine(lo, hi, seed)? };
                known.push(z);
                lo = z + 1e-9 * z.max(1.0);
                flo = self.value(lo)?;
                guard = 0;
                continue;
            }
            lo = hi;
            flo = fhi;
            guard += 1;
            if guard > 100_000 {
                return Err(KernelError::Convergence(format!(
                    "no sign change found for order {} beyond x={lo}",
                    self.nu
                )));
            }
        }
        Ok(())
    }
}

fn zero(nu: f64, s: usize, kind: ZeroKind) -> Result<f64> {
    let key = (nu.to_bits(), kind);
    if let Some(v) = cache().read().expect("zero cache poisoned").get(&key) {
        if v.len() >= s {
            return Ok(v[s - 1]);
        }
    }
    let mut guard = cache().write().expect("zero cache poisoned");
    let zeros = guard.entry(key).or_default();
    if zeros.len() < s {
        Target { nu, kind }.extend(zeros, s)?;
    }
    Ok(zeros[s - 1])
}

pub(crate) fn j_zero(nu: f64, s: usize) -> Result<f64> {
    zero(nu, s, ZeroKind::Value)
}

pub(crate) fn j_prime_zero(nu: f64, s: usize) -> Result<f64> {
    zero(nu, s, ZeroKind::Derivative)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mcmahon_is_a_good_seed_for_large_index() {
        let z = j_zero(0.0, 20).unwrap();
        assert!((mcmahon(0.0, 20, false) - z).abs() < 1e-8);
        let zp = j_prime_zero(1.0, 10).unwrap();
        assert!((mcmahon(1.0, 10, true) - zp).abs() < 1e-5);
    }

    #[test]
    fn scan_start_precedes_the_first_derivative_zero() {
        for &nu in &[0.1, 0.5, 1.0, 3.0, 17.5] {
            let t = Target {
                nu,
                kind: ZeroKind::Derivative,
            };
            assert!(t.value(t.scan_start()).unwrap() > 0.0, "nu={nu}");
        }
    }
}
