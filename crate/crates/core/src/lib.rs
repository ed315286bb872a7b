//! Integral kernels of functions of Neumann and Dirichlet Laplacians on
//! reflection-symmetric domains.
//!
//! The crate evaluates heat, resolvent and Riesz kernels by several
//! independent routes that are expected to agree:
//!
//! * [`closed_kernels`]: Gaussian and half-space kernels, the Bessel-`K`
//!   resolvent, Riesz potentials and their quadrature counterparts;
//! * [`reflection`]: reflections, even/odd parts and image-sum combinators
//!   that turn a kernel on a symmetric domain into the kernel on its half;
//! * [`series_kernels`]: eigenfunction expansions on intervals, planar cones,
//!   truncated cones and the unit disk;
//! * [`mc_oracle`]: killed and reflected Brownian motion estimates;
//! * [`verify`]: the identity and oracle tables used by the CLI.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod closed_kernels;
pub mod error;
pub mod geometry;
pub mod mc_oracle;
pub mod quadrature;
pub mod reflection;
pub mod series_kernels;
pub mod specfun;
pub mod verify;

pub use error::{KernelError, Result};
pub use geometry::{Aperture, Boundary, Point, PolarPoint};
