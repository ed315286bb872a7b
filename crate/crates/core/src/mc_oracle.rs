//! Monte Carlo oracle for killed and reflected Brownian motion.
//!
//! The simulated diffusion has generator `Delta`, so each coordinate moves by
//! `N(0, 2 dt)` per step and transition densities are the `p_t` kernels of the
//! rest of the crate. Exit is checked at step boundaries only.
//!
//! Optionally a Brownian-bridge test kills paths that crossed a boundary
//! between steps, treating each boundary piece as its tangent line.
//!
//! Path `i` draws from `ChaCha8Rng::seed_from_u64(seed)` with stream `i`.
//! Paths are grouped into fixed blocks of [`CHUNK`] and per-block integer
//! counts are summed, so results do not depend on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, KernelError, Result};
use crate::geometry::{Aperture, Point};
use crate::reflection::ReflectionVector;
use crate::series_kernels::bisector_vector;

/// Paths per deterministic work unit.
pub const CHUNK: u64 = 1024;

/// Relative slack when checking that `t / dt` is a whole number of steps.
const STEP_TOL: f64 = 1e-9;

/// Bridge crossings with `a b / dt` above this are never drawn for.
const BRIDGE_CUTOFF: f64 = 50.0;

/// How exits between grid times are detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExitRule {
    /// Exit only when a step lands outside.
    #[default]
    StepBoundary,
    /// Also kill with the bridge crossing probability `exp(-a b / dt)` per boundary piece.
    BrownianBridge,
}

impl std::str::FromStr for ExitRule {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "step" | "step-boundary" => Ok(ExitRule::StepBoundary),
            "bridge" | "brownian-bridge" => Ok(ExitRule::BrownianBridge),
            _ => Err(KernelError::Parameter(format!("unknown exit rule '{s}' (step|bridge)"))),
        }
    }
}

/// Distance from a planar point to the ray at angle `alpha`.
fn ray_distance(x: &[f64], alpha: f64) -> f64 {
    let (c, s) = (alpha.cos(), alpha.sin());
    if x[0] * c + x[1] * s >= 0.0 {
        (x[1] * c - x[0] * s).abs()
    } else {
        x[0].hypot(x[1])
    }
}

/// Simulation domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum McDomain {
    /// `{x in R^d : x_d > 0}`.
    HalfSpace {
        d: usize,
    },
    /// `{x in R^d : x_1, .., x_k > 0}`.
    Orthant {
        d: usize,
        k: usize,
    },
    Interval {
        a: f64,
        b: f64,
    },
    PlanarCone {
        phi: Aperture,
    },
    /// Planar cone intersected with the unit disk.
    TruncatedCone {
        phi: Aperture,
    },
    /// Open unit disk.
    Disk,
}

impl McDomain {
    pub fn validate(&self) -> Result<()> {
        match *self {
            McDomain::HalfSpace { d: 0 } => Err(KernelError::Parameter("dimension must be >= 1".into())),
            McDomain::Orthant { d, k } if k == 0 || k > d => Err(KernelError::Parameter(format!(
                "orthant needs 1 <= k <= d, got k={k}, d={d}"
            ))),
            McDomain::Interval { a, b } if !(a < b) || !a.is_finite() || !b.is_finite() => Err(KernelError::Parameter(
                format!("interval needs finite a < b, got ({a}, {b})"),
            )),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            McDomain::HalfSpace { d } | McDomain::Orthant { d, .. } => d,
            McDomain::Interval { .. } => 1,
            _ => 2,
        }
    }

    fn in_cone(phi: Aperture, x: &[f64]) -> bool {
        if x[0] == 0.0 && x[1] == 0.0 {
            return false;
        }
        let mut th = x[1].atan2(x[0]);
        if th < 0.0 {
            th += std::f64::consts::TAU;
        }
        th > 0.0 && th < phi.value()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match *self {
            McDomain::HalfSpace { d } => x[d - 1] > 0.0,
            McDomain::Orthant { k, .. } => x[..k].iter().all(|&c| c > 0.0),
            McDomain::Interval { a, b } => x[0] > a && x[0] < b,
            McDomain::PlanarCone { phi } => Self::in_cone(phi, x),
            McDomain::TruncatedCone { phi } => x[0] * x[0] + x[1] * x[1] < 1.0 && Self::in_cone(phi, x),
            McDomain::Disk => x[0] * x[0] + x[1] * x[1] < 1.0,
        }
    }

    /// Probability that a bridge from `x` to `y` (both inside) stays inside.
    fn bridge_survival(&self, x: &[f64], y: &[f64], dt: f64) -> f64 {
        let piece = |a: f64, b: f64| {
            let e = a * b / dt;
            if e > BRIDGE_CUTOFF {
                1.0
            } else {
                -(-e).exp_m1()
            }
        };
        let circle = |p: &[f64]| 1.0 - p[0].hypot(p[1]);
        match *self {
            McDomain::HalfSpace { d } => piece(x[d - 1], y[d - 1]),
            McDomain::Orthant { k, .. } => (0..k).map(|i| piece(x[i], y[i])).product(),
            McDomain::Interval { a, b } => piece(x[0] - a, y[0] - a) * piece(b - x[0], b - y[0]),
            McDomain::PlanarCone { phi } => {
                piece(ray_distance(x, 0.0), ray_distance(y, 0.0))
                    * piece(ray_distance(x, phi.value()), ray_distance(y, phi.value()))
            }
            McDomain::TruncatedCone { phi } => {
                piece(ray_distance(x, 0.0), ray_distance(y, 0.0))
                    * piece(ray_distance(x, phi.value()), ray_distance(y, phi.value()))
                    * piece(circle(x), circle(y))
            }
            McDomain::Disk => piece(circle(x), circle(y)),
        }
    }

    /// The declared symmetry `sigma_v` used by [`check_reflection_identity`].
    pub fn reflection(&self) -> Option<ReflectionVector> {
        match *self {
            McDomain::HalfSpace { d } if d >= 2 => ReflectionVector::coordinate(d, 0).ok(),
            McDomain::Orthant { d, k } if k < d => ReflectionVector::coordinate(d, d - 1).ok(),
            McDomain::Interval { a, b } if a == -b => ReflectionVector::coordinate(1, 0).ok(),
            McDomain::PlanarCone { phi } | McDomain::TruncatedCone { phi } => Some(bisector_vector(phi)),
            McDomain::Disk => ReflectionVector::coordinate(2, 1).ok(),
            _ => None,
        }
    }

    /// Exact folding of free motion onto the reflected process, where available.
    fn fold(&self, x: &mut [f64]) -> Result<()> {
        match *self {
            McDomain::HalfSpace { d } => x[d - 1] = x[d - 1].abs(),
            McDomain::Orthant { k, .. } => x[..k].iter_mut().for_each(|c| *c = c.abs()),
            McDomain::Interval { a, b } => {
                let len = b - a;
                let u = (x[0] - a).rem_euclid(2.0 * len);
                x[0] = a + if u > len { 2.0 * len - u } else { u };
            }
            _ => {
                return Err(KernelError::Unsupported(format!("no exact folding for {self:?}")));
            }
        }
        Ok(())
    }
}

/// Axis-aligned box `prod [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl TargetBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(KernelError::Parameter(
                "target bounds must have equal, nonzero length".into(),
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite())
        {
            return Err(KernelError::Parameter(
                "target needs finite lo < hi on every axis".into(),
            ));
        }
        Ok(TargetBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }
    pub fn hi(&self) -> &[f64] {
        &self.hi
    }
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| c >= l && c <= h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCConfig {
    pub paths: u64,
    pub dt: f64,
    pub seed: u64,
    pub workers: usize,
    pub exit: ExitRule,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig {
            paths: 100_000,
            dt: 1e-3,
            seed: 0,
            workers: 1,
            exit: ExitRule::StepBoundary,
        }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(KernelError::Config("paths must be >= 1".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(KernelError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.workers == 0 {
            return Err(KernelError::Config("workers must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps `t / dt`; non-integral ratios are rejected.
    pub fn steps(&self, t: f64) -> Result<u64> {
        self.validate()?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(KernelError::Config(format!("t must be positive, got {t}")));
        }
        let n = (t / self.dt).round();
        if n < 1.0 || (n * self.dt - t).abs() > STEP_TOL * t {
            return Err(KernelError::Config(format!(
                "t = {t} is not a whole number of steps dt = {}",
                self.dt
            )));
        }
        Ok(n as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(paths_used)`.
    pub std_error: f64,
    pub paths_used: u64,
}

impl McEstimate {
    fn from_sums(sum: i64, sum_sq: i64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum as f64 / nf;
        let var = if n > 1 {
            ((sum_sq as f64 - sum as f64 * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        McEstimate {
            value: mean,
            std_error: (var / nf).sqrt(),
            paths_used: n,
        }
    }
}

/// Outcome of [`check_reflection_identity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCheck {
    /// Killed on leaving the positive part.
    pub positive: McEstimate,
    /// Killed on leaving the whole domain, started at `x0`.
    pub whole: McEstimate,
    /// Killed on leaving the whole domain, started at `sigma_v(x0)`.
    pub mirrored: McEstimate,
    /// Per-path `positive - whole + mirrored`.
    pub discrepancy: McEstimate,
    pub pass: bool,
}

/// Runs `per_path` for every path index and sums up to four integer outputs and their squares.
fn run<const N: usize>(
    cfg: &MCConfig,
    per_path: impl Fn(&mut ChaCha8Rng) -> [i8; N] + Sync,
) -> Result<[McEstimate; N]> {
    cfg.validate()?;
    let chunks = cfg.paths.div_ceil(CHUNK);
    let block = |c: u64| {
        let mut acc = [(0i64, 0i64); N];
        for i in c * CHUNK..((c + 1) * CHUNK).min(cfg.paths) {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i);
            for (a, v) in acc.iter_mut().zip(per_path(&mut rng)) {
                a.0 += v as i64;
                a.1 += (v as i64) * (v as i64);
            }
        }
        acc
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| KernelError::Config(format!("thread pool: {e}")))?;
    let blocks: Vec<[(i64, i64); N]> = pool.install(|| (0..chunks).into_par_iter().map(block).collect());
    let mut total = [(0i64, 0i64); N];
    for b in blocks {
        for (t, v) in total.iter_mut().zip(b) {
            t.0 += v.0;
            t.1 += v.1;
        }
    }
    Ok(total.map(|(s, q)| McEstimate::from_sums(s, q, cfg.paths)))
}

fn check_inputs(domain_: &McDomain, x0: &Point, target: &TargetBox) -> Result<()> {
    domain_.validate()?;
    x0.check_dim(domain_.dim())?;
    if target.dim() != domain_.dim() {
        return Err(KernelError::DimensionMismatch {
            expected: domain_.dim(),
            got: target.dim(),
        });
    }
    if !domain_.contains(x0.coords()) {
        return domain("starting point must be interior");
    }
    Ok(())
}

fn step(x: &mut [f64], scale: f64, rng: &mut ChaCha8Rng) {
    for c in x.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *c += scale * z;
    }
}

/// Bridge kill decision; draws a uniform only when the crossing chance is not negligible.
fn bridge_kills(survival: f64, rng: &mut ChaCha8Rng) -> bool {
    survival < 1.0 && rng.random::<f64>() >= survival
}

/// `P^{x0}(t < tau_Omega, W_t in target)`.
pub fn estimate_killed_prob(
    domain_: &McDomain,
    x0: &Point,
    t: f64,
    target: &TargetBox,
    cfg: &MCConfig,
) -> Result<McEstimate> {
    check_inputs(domain_, x0, target)?;
    let steps = cfg.steps(t)?;
    let scale = (2.0 * cfg.dt).sqrt();
    let bridge = cfg.exit == ExitRule::BrownianBridge;
    let [est] = run(cfg, |rng| {
        let mut x = x0.coords().to_vec();
        let mut prev = x.clone();
        for _ in 0..steps {
            prev.copy_from_slice(&x);
            step(&mut x, scale, rng);
            if !domain_.contains(&x) || (bridge && bridge_kills(domain_.bridge_survival(&prev, &x, cfg.dt), rng)) {
                return [0];
            }
        }
        [target.contains(&x) as i8]
    })?;
    Ok(est)
}

/// `P^{x0}(W_t in target)` for free motion, sampled exactly at time `t`.
pub fn estimate_free_prob(x0: &Point, t: f64, target: &TargetBox, cfg: &MCConfig) -> Result<McEstimate> {
    x0.check_dim(target.dim())?;
    cfg.steps(t)?;
    let scale = (2.0 * t).sqrt();
    let [est] = run(cfg, |rng| {
        let mut x = x0.coords().to_vec();
        step(&mut x, scale, rng);
        [target.contains(&x) as i8]
    })?;
    Ok(est)
}

/// Reflected-process probability by folding a free endpoint sampled exactly at time `t`.
pub fn estimate_reflected_prob(
    domain_: &McDomain,
    x0: &Point,
    t: f64,
    target: &TargetBox,
    cfg: &MCConfig,
) -> Result<McEstimate> {
    check_inputs(domain_, x0, target)?;
    cfg.steps(t)?;
    domain_.fold(&mut x0.coords().to_vec())?;
    let scale = (2.0 * t).sqrt();
    let [est] = run(cfg, |rng| {
        let mut x = x0.coords().to_vec();
        step(&mut x, scale, rng);
        domain_.fold(&mut x).expect("folding checked above");
        [target.contains(&x) as i8]
    })?;
    Ok(est)
}

/// Checks `P_{Omega+} = P_Omega(x0) - P_Omega(sigma x0)` on common increments.
///
/// Passes iff the mean per-path discrepancy is within three standard errors of zero.
pub fn check_reflection_identity(
    domain_: &McDomain,
    x0: &Point,
    t: f64,
    target: &TargetBox,
    cfg: &MCConfig,
) -> Result<ReflectionCheck> {
    check_inputs(domain_, x0, target)?;
    let Some(v) = domain_.reflection() else {
        return Err(KernelError::Unsupported(format!("{domain_:?} declares no reflection")));
    };
    if !v.is_positive(x0) {
        return domain("starting point must lie in the positive part");
    }
    let steps = cfg.steps(t)?;
    let scale = (2.0 * cfg.dt).sqrt();
    let start = x0.coords().to_vec();
    let mirror = crate::reflection::reflect(&v, x0)?.into_coords();
    let normal = v.unit().coords().to_vec();
    let side = |x: &[f64]| x.iter().zip(&normal).map(|(a, b)| a * b).sum::<f64>();
    let bridge = cfg.exit == ExitRule::BrownianBridge;
    let half_plane = |a: f64, b: f64| {
        let e = a * b / cfg.dt;
        if e > BRIDGE_CUTOFF {
            1.0
        } else {
            -(-e).exp_m1()
        }
    };
    let [l, r1, r2, d] = run(cfg, |rng| {
        let mut x = start.clone();
        let mut y = mirror.clone();
        let (mut px, mut py) = (x.clone(), y.clone());
        let (mut alive_l, mut alive_x, mut alive_y) = (true, true, true);
        for _ in 0..steps {
            px.copy_from_slice(&x);
            py.copy_from_slice(&y);
            for (xc, yc) in x.iter_mut().zip(y.iter_mut()) {
                let z: f64 = rng.sample(StandardNormal);
                *xc += scale * z;
                *yc += scale * z;
            }
            if alive_x {
                alive_x =
                    domain_.contains(&x) && !(bridge && bridge_kills(domain_.bridge_survival(&px, &x, cfg.dt), rng));
            }
            if alive_l {
                alive_l = alive_x && side(&x) > 0.0 && !(bridge && bridge_kills(half_plane(side(&px), side(&x)), rng));
            }
            if alive_y {
                alive_y =
                    domain_.contains(&y) && !(bridge && bridge_kills(domain_.bridge_survival(&py, &y, cfg.dt), rng));
            }
            if !alive_x && !alive_y {
                break;
            }
        }
        let l = (alive_l && target.contains(&x)) as i8;
        let r1 = (alive_x && target.contains(&x)) as i8;
        let r2 = (alive_y && target.contains(&y)) as i8;
        [l, r1, r2, l - r1 + r2]
    })?;
    let pass = d.value.abs() <= 3.0 * d.std_error;
    Ok(ReflectionCheck {
        positive: l,
        whole: r1,
        mirrored: r2,
        discrepancy: d,
        pass,
    })
}
