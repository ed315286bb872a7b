//! Reflections, even/odd extensions, and the image-sum combinators that
//! produce the Neumann/Dirichlet kernel of the positive half of a symmetric
//! domain from the kernel of the whole domain.

use std::sync::Arc;

use crate::error::{domain, param, KernelError, Result};
use crate::geometry::{Boundary, Point};

/// Points with `|<x, v>|` at or below this are on the mirror hyperplane.
pub const HYPERPLANE_TOL: f64 = 1e-14;
/// Gate for unit length and mutual orthogonality of roots.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;
/// Largest number of roots accepted by [`orthant_kernel`].
pub const MAX_ROOTS: usize = 20;

/// An integral kernel together with the open set it lives on.
pub trait Kernel: Send + Sync {
    fn dim(&self) -> usize;
    /// Domain predicate for both arguments.
    fn contains(&self, x: &Point) -> bool;
    fn eval(&self, x: &Point, y: &Point) -> Result<f64>;
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn contains(&self, x: &Point) -> bool {
        (**self).contains(x)
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        (**self).eval(x, y)
    }
}

impl<K: Kernel + ?Sized> Kernel for Box<K> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn contains(&self, x: &Point) -> bool {
        (**self).contains(x)
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        (**self).eval(x, y)
    }
}

impl<K: Kernel + ?Sized> Kernel for Arc<K> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn contains(&self, x: &Point) -> bool {
        (**self).contains(x)
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        (**self).eval(x, y)
    }
}

/// Unit normal of a mirror hyperplane `<v>^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionVector(Point);

impl ReflectionVector {
    /// Normalises `v`; rejects the zero vector.
    pub fn new(v: Point) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0) {
            return param("reflection vector must be nonzero");
        }
        Ok(ReflectionVector((1.0 / n) * &v))
    }

    /// The coordinate vector `e_i` (0-based) of `R^d`.
    pub fn coordinate(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return param(format!("coordinate index {i} out of range for dimension {d}"));
        }
        let mut c = vec![0.0; d];
        c[i] = 1.0;
        Ok(ReflectionVector(Point::raw(c)))
    }

    pub fn unit(&self) -> &Point {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Signed distance `<x, v>` to the hyperplane.
    pub fn side(&self, x: &Point) -> f64 {
        self.0.dot(x)
    }

    pub fn is_positive(&self, x: &Point) -> bool {
        self.side(x) > HYPERPLANE_TOL
    }

    pub fn on_hyperplane(&self, x: &Point) -> bool {
        self.side(x).abs() <= HYPERPLANE_TOL
    }

    pub(crate) fn apply(&self, x: &Point) -> Point {
        let s = 2.0 * self.side(x);
        Point::raw(
            x.coords()
                .iter()
                .zip(self.0.coords())
                .map(|(xi, vi)| xi - s * vi)
                .collect(),
        )
    }
}

/// `sigma_v(x) = x - 2 <v,x> v / |v|^2`.
pub fn reflect(v: &ReflectionVector, x: &Point) -> Result<Point> {
    x.check_dim(v.dim())?;
    Ok(v.apply(x))
}

/// `x, y -> K(x,y) +- K(sigma_v x, y)` on the positive part `{<x,v> > 0}`.
#[derive(Debug, Clone)]
pub struct Reflected<K> {
    base: K,
    bc: Boundary,
    v: ReflectionVector,
}

impl<K: Kernel> Reflected<K> {
    pub fn base(&self) -> &K {
        &self.base
    }
    pub fn boundary(&self) -> Boundary {
        self.bc
    }
    pub fn vector(&self) -> &ReflectionVector {
        &self.v
    }
}

/// Kernel of the positive part of a `sigma_v`-symmetric domain.
///
/// The caller asserts that `K(sigma_v x, y) = K(x, sigma_v y)`.
pub fn reflect_kernel<K: Kernel>(base: K, bc: Boundary, v: ReflectionVector) -> Result<Reflected<K>> {
    if v.dim() != base.dim() {
        return Err(KernelError::DimensionMismatch {
            expected: base.dim(),
            got: v.dim(),
        });
    }
    Ok(Reflected { base, bc, v })
}

impl<K: Kernel> Kernel for Reflected<K> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn contains(&self, x: &Point) -> bool {
        x.dim() == self.dim() && self.v.is_positive(x) && self.base.contains(x)
    }

    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        y.check_dim(self.dim())?;
        if !self.contains(x) || !self.contains(y) {
            return domain("point outside the positive part of the reflected kernel");
        }
        let direct = self.base.eval(x, y)?;
        let image = self.base.eval(&self.v.apply(x), y)?;
        Ok(direct + self.bc.image_sign() * image)
    }
}

/// Signs `eps in {-1, +1}^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(eps: Vec<i8>) -> Result<Self> {
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return param("sign vector entries must be +1 or -1");
        }
        Ok(SignVector(eps))
    }

    /// The `mask`-th sign vector: bit `i` set means `eps_i = -1`.
    pub fn from_mask(k: usize, mask: u32) -> Self {
        SignVector((0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    /// Product of the entries.
    pub fn sgn(&self) -> f64 {
        if self.0.iter().filter(|&&e| e < 0).count() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Mutually orthogonal unit roots `r_1, ..., r_k` of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSystem {
    roots: Vec<ReflectionVector>,
}

impl ReflectionSystem {
    /// Normalises the roots and rejects non-orthogonal systems.
    pub fn new(roots: Vec<Point>) -> Result<Self> {
        let k = roots.len();
        if k == 0 {
            return param("a reflection system needs at least one root");
        }
        let d = roots[0].dim();
        if k > d {
            return param(format!("{k} orthogonal roots cannot live in R^{d}"));
        }
        if k > MAX_ROOTS {
            return param(format!("{k} roots exceed the limit of {MAX_ROOTS}"));
        }
        let roots = roots
            .into_iter()
            .map(ReflectionVector::new)
            .collect::<Result<Vec<_>>>()?;
        for (i, ri) in roots.iter().enumerate() {
            ri.unit().check_dim(d)?;
            for rj in &roots[..i] {
                if ri.unit().dot(rj.unit()).abs() > ORTHOGONALITY_TOL {
                    return param("roots are not mutually orthogonal");
                }
            }
        }
        Ok(ReflectionSystem { roots })
    }

    /// The coordinate system `e_1, ..., e_k` in `R^d`.
    pub fn coordinate(d: usize, k: usize) -> Result<Self> {
        if k == 0 || k > d {
            return param(format!("need 1 <= k <= d, got k={k}, d={d}"));
        }
        Self::new(
            (0..k)
                .map(|i| ReflectionVector::coordinate(d, i).map(|v| v.0))
                .collect::<Result<_>>()?,
        )
    }

    pub fn roots(&self) -> &[ReflectionVector] {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    pub fn dim(&self) -> usize {
        self.roots[0].dim()
    }

    /// `eps x`: the composition of the reflections selected by `eps_i = -1`.
    pub fn signed_image(&self, eps: &SignVector, x: &Point) -> Point {
        let mut coords = x.coords().to_vec();
        for (r, &e) in self.roots.iter().zip(eps.entries()) {
            if e < 0 {
                // roots are orthogonal, so <x, r> is unchanged by earlier flips
                let s = 2.0 * r.side(x);
                for (c, ri) in coords.iter_mut().zip(r.unit().coords()) {
                    *c -= s * ri;
                }
            }
        }
        Point::raw(coords)
    }

    /// Open chamber `{<x, r_i> > 0 for all i}`.
    pub fn in_chamber(&self, x: &Point) -> bool {
        self.roots.iter().all(|r| r.is_positive(x))
    }
}

/// Signed (Dirichlet) or unsigned (Neumann) sum over the `2^k` images.
#[derive(Debug, Clone)]
pub struct Orthant<K> {
    base: K,
    bc: Boundary,
    system: ReflectionSystem,
}

impl<K: Kernel> Orthant<K> {
    pub fn term_count(&self) -> usize {
        1 << self.system.rank()
    }

    /// Individual image terms `sgn(eps) K(eps x, y)` (signs already applied).
    pub fn terms(&self, x: &Point, y: &Point) -> Result<Vec<f64>> {
        let k = self.system.rank();
        (0..(1u32 << k))
            .map(|mask| {
                let eps = SignVector::from_mask(k, mask);
                let weight = match self.bc {
                    Boundary::Neumann => 1.0,
                    Boundary::Dirichlet => eps.sgn(),
                };
                Ok(weight * self.base.eval(&self.system.signed_image(&eps, x), y)?)
            })
            .collect()
    }
}

/// Kernel of the Weyl chamber of an orthogonal reflection system.
pub fn orthant_kernel<K: Kernel>(base: K, bc: Boundary, system: ReflectionSystem) -> Result<Orthant<K>> {
    if system.dim() != base.dim() {
        return Err(KernelError::DimensionMismatch {
            expected: base.dim(),
            got: system.dim(),
        });
    }
    if system.rank() > MAX_ROOTS {
        return param(format!("{} roots exceed the limit of {MAX_ROOTS}", system.rank()));
    }
    Ok(Orthant { base, bc, system })
}

impl<K: Kernel> Kernel for Orthant<K> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn contains(&self, x: &Point) -> bool {
        x.dim() == self.dim() && self.system.in_chamber(x) && self.base.contains(x)
    }

    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        y.check_dim(self.dim())?;
        if !self.contains(x) || !self.contains(y) {
            return domain("point outside the positive chamber");
        }
        Ok(self.terms(x, y)?.into_iter().sum())
    }
}

/// Even extension of `f` from `{<x,v> > 0}` to the symmetric domain.
pub fn extend_even<F>(f: F, v: ReflectionVector) -> impl Fn(&Point) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    move |x: &Point| {
        if v.side(x) < -HYPERPLANE_TOL {
            f(&v.apply(x))
        } else {
            f(x)
        }
    }
}

/// Odd extension of `f`; zero on the hyperplane.
pub fn extend_odd<F>(f: F, v: ReflectionVector) -> impl Fn(&Point) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    move |x: &Point| {
        if v.on_hyperplane(x) {
            Ok(0.0)
        } else if v.side(x) < 0.0 {
            Ok(-f(&v.apply(x))?)
        } else {
            f(x)
        }
    }
}

fn part<F>(f: F, v: ReflectionVector, sign: f64) -> impl Fn(&Point) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    move |x: &Point| {
        if !v.is_positive(x) {
            return domain("even/odd parts live on the positive part");
        }
        Ok(0.5 * (f(x)? + sign * f(&v.apply(x))?))
    }
}

/// `(F(x) + F(sigma_v x)) / 2` on the positive part.
pub fn even_part<F>(f: F, v: ReflectionVector) -> impl Fn(&Point) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    part(f, v, 1.0)
}

/// `(F(x) - F(sigma_v x)) / 2` on the positive part.
pub fn odd_part<F>(f: F, v: ReflectionVector) -> impl Fn(&Point) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    part(f, v, -1.0)
}
