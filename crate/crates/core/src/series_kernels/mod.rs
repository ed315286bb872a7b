//! Eigenfunction-series heat kernels: intervals, planar cones (through the
//! `B^Phi` series of modified Bessel functions), truncated cones and the unit
//! disk (Fourier-Bessel double series).
//!
//! Every evaluation returns the truncated sum together with the tail bound
//! that justified the truncation. When `max_terms` is too small for the
//! requested `abs_tol` the evaluation fails with
//! [`KernelError::ToleranceNotMet`](crate::KernelError::ToleranceNotMet)
//! carrying the achieved bound.

mod cone;
mod interval;
mod truncated;

pub use cone::{
    bisector_vector, cone_b, cone_b_scaled, cone_heat, dyadic_cone_heat, dyadic_cone_kernel, ConeHeatKernel,
};
pub use interval::{interval_heat, IntervalKernel};
pub use truncated::{
    dirichlet_coefficient, dirichlet_eigenvalue, disk_heat_dirichlet, truncated_cone_heat, DiskKernel,
    TruncatedConeKernel,
};

use crate::error::{param, KernelError, Result};

/// Truncation control shared by all series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub abs_tol: f64,
    /// Cap on the number of terms along each series axis.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            abs_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        let c = SeriesControl { abs_tol, max_terms };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return param("series abs_tol must be positive");
        }
        if self.max_terms == 0 {
            return param("series max_terms must be >= 1");
        }
        Ok(())
    }
}

/// A truncated series value and the bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

pub(crate) fn shortfall(requested: f64, achieved: f64) -> KernelError {
    KernelError::ToleranceNotMet { requested, achieved }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return param(format!("time must be positive and finite, got {t}"));
    }
    Ok(())
}
