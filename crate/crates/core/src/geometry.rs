//! Points, polar coordinates and boundary conditions shared by every kernel.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use crate::error::{domain, KernelError, Result};

/// Boundary condition of the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Neumann,
    Dirichlet,
}

impl Boundary {
    /// Sign carried by the image term: `+1` for Neumann, `-1` for Dirichlet.
    pub fn image_sign(self) -> f64 {
        match self {
            Boundary::Neumann => 1.0,
            Boundary::Dirichlet => -1.0,
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Neumann => f.write_str("neumann"),
            Boundary::Dirichlet => f.write_str("dirichlet"),
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n" | "neumann" => Ok(Boundary::Neumann),
            "d" | "dirichlet" => Ok(Boundary::Dirichlet),
            other => Err(KernelError::Parameter(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return domain("a point needs at least one coordinate");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return domain("point coordinates must be finite");
        }
        Ok(Point(coords))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    /// Origin-free constructor for internal arithmetic where finiteness is known.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// The point with its last coordinate negated.
    pub fn flip_last(&self) -> Point {
        let mut c = self.0.clone();
        if let Some(last) = c.last_mut() {
            *last = -*last;
        }
        Point(c)
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(KernelError::DimensionMismatch {
                expected: d,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Planar point from polar coordinates.
    pub fn from_polar(p: PolarPoint) -> Point {
        Point(vec![p.rho * p.theta.cos(), p.rho * p.theta.sin()])
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: &Point) -> Point {
        Point(rhs.0.iter().map(|a| self * a).collect())
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Point {
        Point(vec![x])
    }
}

/// Planar point in polar coordinates `rho * e^{i theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub rho: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(rho: f64, theta: f64) -> Self {
        PolarPoint { rho, theta }
    }

    /// Polar form with `theta` in `[0, 2 pi)`; `None` for the origin or a non-planar point.
    pub fn from_point(p: &Point) -> Option<PolarPoint> {
        if p.dim() != 2 {
            return None;
        }
        let rho = p[0].hypot(p[1]);
        if rho == 0.0 {
            return None;
        }
        let mut theta = p[1].atan2(p[0]);
        if theta < 0.0 {
            theta += std::f64::consts::TAU;
        }
        Some(PolarPoint { rho, theta })
    }

    pub fn to_point(self) -> Point {
        Point::from_polar(self)
    }
}

/// Cone aperture `Phi` in `(0, 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aperture(f64);

impl Aperture {
    pub fn new(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi <= std::f64::consts::TAU * (1.0 + 1e-15)) {
            return Err(KernelError::Parameter(format!("aperture {phi} outside (0, 2pi]")));
        }
        Ok(Aperture(phi.min(std::f64::consts::TAU)))
    }

    pub fn full() -> Self {
        Aperture(std::f64::consts::TAU)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn half(self) -> Aperture {
        Aperture(0.5 * self.0)
    }

    /// Angular frequency step `pi / Phi`.
    pub fn frequency(self) -> f64 {
        std::f64::consts::PI / self.0
    }

    /// Mirror image across the bisector: `theta -> Phi - theta`.
    pub fn mirror(self, p: PolarPoint) -> PolarPoint {
        PolarPoint {
            rho: p.rho,
            theta: self.0 - p.theta,
        }
    }

    pub fn contains(self, p: PolarPoint) -> bool {
        p.rho > 0.0 && p.rho.is_finite() && p.theta > 0.0 && p.theta < self.0
    }
}
