//! Verification tables: reflection identities, transform constants and the
//! Monte Carlo reflection principle. Each row reports the worst discrepancy
//! over its instance grid together with the threshold it is held to.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::closed_kernels::{
    gauss_heat, green, halfline_newtonian_by_quadrature, halfspace_heat, newtonian_halfline_dirichlet, resolvent,
    resolvent_by_quadrature, riesz, riesz_by_quadrature, GaussHeat,
};
use crate::error::{KernelError, Result};
use crate::geometry::{Aperture, Boundary, Point, PolarPoint};
use crate::mc_oracle::{
    check_reflection_identity, estimate_killed_prob, estimate_reflected_prob, ExitRule, MCConfig, McDomain, McEstimate,
    TargetBox,
};
use crate::quadrature::{integrate, QuadratureControl};
use crate::reflection::{orthant_kernel, reflect_kernel, Kernel, ReflectionSystem, ReflectionVector};
use crate::series_kernels::{
    bisector_vector, cone_b_scaled, cone_heat, disk_heat_dirichlet, dyadic_cone_heat, interval_heat,
    truncated_cone_heat, ConeHeatKernel, DiskKernel, IntervalKernel, SeriesControl, TruncatedConeKernel,
};
use crate::specfun::bessel_i_scaled;

pub const INTERVAL_ABS_TOL: f64 = 1e-10;
pub const CONE_REL_TOL: f64 = 1e-8;
pub const HALF_PLANE_ABS_TOL: f64 = 1e-10;
pub const B_PI_ABS_TOL: f64 = 1e-11;
pub const QUARTER_REL_TOL: f64 = 1e-8;
pub const TRUNCATED_REL_TOL: f64 = 1e-6;
pub const RESOLVENT_REL_TOL: f64 = 1e-8;
pub const RIESZ_REL_TOL: f64 = 1e-7;
pub const NEWTONIAN_REL_TOL: f64 = 1e-6;
pub const SE_MULTIPLIER: f64 = 3.0;

const BCS: [Boundary; 2] = [Boundary::Dirichlet, Boundary::Neumann];

/// One line of a verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub name: String,
    pub discrepancy: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

impl VerifyRow {
    fn new(name: impl Into<String>, discrepancy: f64, threshold: f64) -> Self {
        VerifyRow {
            name: name.into(),
            discrepancy,
            threshold,
            pass: discrepancy <= threshold,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Constants,
    Mc,
}

impl FromStr for Suite {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "constants" => Ok(Suite::Constants),
            "mc" => Ok(Suite::Mc),
            _ => Err(KernelError::Parameter(format!(
                "unknown suite '{s}' (identities|constants|mc)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Constants => "constants",
            Suite::Mc => "mc",
        })
    }
}

/// Runs a suite; rows whose name does not contain `filter` are skipped before evaluation where possible.
pub fn run_suite(suite: Suite, mc: &MCConfig, filter: Option<&str>) -> Result<Vec<VerifyRow>> {
    let keep = |name: &str| filter.is_none_or(|f| name.contains(f));
    let mut rows = Vec::new();
    match suite {
        Suite::Identities => {
            type Group = fn() -> Result<Vec<VerifyRow>>;
            let groups: [(&str, Group); 7] = [
                ("interval", interval_identities),
                ("cone", cone_identities),
                ("half-plane", half_plane_identities),
                ("quarter-plane", quarter_plane_identities),
                ("dyadic", dyadic_identities),
                ("truncated", truncated_identities),
                ("disk", disk_identities),
            ];
            for (prefix, group) in groups {
                if filter.is_none_or(|f| prefix.contains(f) || f.contains(prefix)) {
                    rows.extend(group()?);
                }
            }
        }
        Suite::Constants => rows.extend(constants()?),
        Suite::Mc => rows.extend(mc_rows(mc)?),
    }
    rows.retain(|r| keep(&r.name));
    Ok(rows)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn fine() -> SeriesControl {
    SeriesControl {
        abs_tol: 1e-16,
        max_terms: 100_000,
    }
}

fn phi_label(phi: f64) -> &'static str {
    if phi == TAU {
        "2pi"
    } else if phi == PI {
        "pi"
    } else if phi == FRAC_PI_2 {
        "pi/2"
    } else {
        "other"
    }
}

/// Interior grid of `(0, pi)` with `n` midpoints.
pub fn interval_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI * (i as f64 + 0.5) / n as f64).collect()
}

/// `(0, pi)` versus images in `(-pi, pi)` on a 20x20 grid, direct and through the combinator.
pub fn interval_identities() -> Result<Vec<VerifyRow>> {
    let c = fine();
    let grid = interval_grid(20);
    let mut rows = Vec::new();
    for bc in BCS {
        for t in [0.1, 0.5, 1.0] {
            let big = IntervalKernel {
                bc,
                a: -PI,
                b: PI,
                t,
                ctrl: c,
            };
            let comb = reflect_kernel(big, bc, ReflectionVector::coordinate(1, 0)?)?;
            let (mut id, mut cb) = (0.0f64, 0.0f64);
            for &x in &grid {
                for &y in &grid {
                    let small = interval_heat(bc, 0.0, PI, t, x, y, &c)?.value;
                    let image = interval_heat(bc, -PI, PI, t, x, y, &c)?.value
                        + bc.image_sign() * interval_heat(bc, -PI, PI, t, -x, y, &c)?.value;
                    id = id.max((small - image).abs());
                    cb = cb.max((small - comb.eval(&Point::from(x), &Point::from(y))?).abs());
                }
            }
            rows.push(VerifyRow::new(format!("interval/{bc}/t={t}"), id, INTERVAL_ABS_TOL));
            rows.push(VerifyRow::new(
                format!("interval-combinator/{bc}/t={t}"),
                cb,
                INTERVAL_ABS_TOL,
            ));
        }
    }
    Ok(rows)
}

/// `n x n` polar grid in `Omega_phi` with radii in `[r0, r0 + span)`.
pub fn polar_grid(phi: f64, n: usize, r0: f64, span: f64) -> Vec<PolarPoint> {
    let mut g = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            g.push(PolarPoint::new(
                r0 + span * i as f64 / n as f64,
                phi * (k as f64 + 0.5) / n as f64,
            ));
        }
    }
    g
}

/// Fixed partner points `y` for grid checks in `Omega_phi`.
fn partners(phi: f64, scale: f64) -> [PolarPoint; 3] {
    [
        PolarPoint::new(0.8 * scale, 0.3 * phi),
        PolarPoint::new(1.5 * scale, 0.55 * phi),
        PolarPoint::new(0.4 * scale, 0.85 * phi),
    ]
}

/// Cone halving for `Phi in {2pi, pi, pi/2}`, `t in {0.5, 1}`.
pub fn cone_identities() -> Result<Vec<VerifyRow>> {
    let c = fine();
    let mut rows = Vec::new();
    for phi in [TAU, PI, FRAC_PI_2] {
        let big = Aperture::new(phi)?;
        let small = big.half();
        for bc in BCS {
            for t in [0.5, 1.0] {
                let comb = reflect_kernel(
                    ConeHeatKernel {
                        bc,
                        phi: big,
                        t,
                        ctrl: c,
                    },
                    bc,
                    bisector_vector(big),
                )?;
                let (mut id, mut cb) = (0.0f64, 0.0f64);
                for x in polar_grid(small.value(), 10, 0.25, 2.5) {
                    for y in partners(small.value(), 1.0) {
                        let direct = cone_heat(bc, small, t, x, y, &c)?.value;
                        let image = cone_heat(bc, big, t, x, y, &c)?.value
                            + bc.image_sign() * cone_heat(bc, big, t, big.mirror(x), y, &c)?.value;
                        id = id.max(rel(image, direct));
                        cb = cb.max(rel(comb.eval(&x.to_point(), &y.to_point())?, direct));
                    }
                }
                let tag = format!("{bc}/phi={}/t={t}", phi_label(phi));
                rows.push(VerifyRow::new(format!("cone-halving/{tag}"), id, CONE_REL_TOL));
                rows.push(VerifyRow::new(format!("cone-combinator/{tag}"), cb, CONE_REL_TOL));
            }
        }
    }
    Ok(rows)
}

/// Half-plane kernel against the Gaussian image difference, and `e^{-tau} B^pi` against its closed form.
pub fn half_plane_identities() -> Result<Vec<VerifyRow>> {
    let c = fine();
    let phi = Aperture::new(PI)?;
    let t = 1.0;
    let mut worst = 0.0f64;
    for x in polar_grid(PI, 10, 0.25, 2.5) {
        for y in partners(PI, 1.0) {
            let v = cone_heat(Boundary::Dirichlet, phi, t, x, y, &c)?.value;
            let (px, py) = (x.to_point(), y.to_point());
            let g = gauss_heat(2, t, &px, &py)? - gauss_heat(2, t, &px.flip_last(), &py)?;
            worst = worst.max((v - g).abs());
        }
    }
    let mut b_worst = 0.0f64;
    for i in 0..=40 {
        let tau = 0.5 * i as f64;
        for k in 0..=12 {
            let gamma = TAU * k as f64 / 12.0;
            let series = cone_b_scaled(phi, tau, gamma, &c)?.value;
            let closed = 0.5 * ((tau * (gamma.cos() - 1.0)).exp() - bessel_i_scaled(0.0, tau)?);
            b_worst = b_worst.max((series - closed).abs());
        }
    }
    Ok(vec![
        VerifyRow::new("half-plane/dirichlet", worst, HALF_PLANE_ABS_TOL),
        VerifyRow::new("half-plane/B-closed-form", b_worst, B_PI_ABS_TOL)
            .with_detail("tau in [0, 20], values scaled by e^-tau"),
    ])
}

/// Quarter plane: orthant image sum, direct cone series and the product of 1D image kernels.
pub fn quarter_plane_identities() -> Result<Vec<VerifyRow>> {
    let c = fine();
    let t = 0.5;
    let quarter = Aperture::new(FRAC_PI_2)?;
    let mut rows = Vec::new();
    for bc in BCS {
        let orth = orthant_kernel(GaussHeat { d: 2, t }, bc, ReflectionSystem::coordinate(2, 2)?)?;
        let one = |u: f64, v: f64| -> Result<f64> { halfspace_heat(bc, 1, t, &Point::from(u), &Point::from(v)) };
        let mut worst = 0.0f64;
        for i in 0..10 {
            for k in 0..10 {
                let x = Point::new(vec![0.2 + 0.25 * i as f64, 0.2 + 0.25 * k as f64])?;
                for y in partners(FRAC_PI_2, 1.0) {
                    let py = y.to_point();
                    let a = orth.eval(&x, &py)?;
                    let b = cone_heat(bc, quarter, t, PolarPoint::from_point(&x).expect("off origin"), y, &c)?.value;
                    let p = one(x[0], py[0])? * one(x[1], py[1])?;
                    worst = worst.max(rel(a, b)).max(rel(b, p)).max(rel(a, p));
                }
            }
        }
        rows.push(VerifyRow::new(format!("quarter-plane/{bc}"), worst, QUARTER_REL_TOL));
    }
    Ok(rows)
}

/// Dyadic apertures `2pi / 2^n` by repeated bisector reflection against the direct series.
pub fn dyadic_identities() -> Result<Vec<VerifyRow>> {
    let c = fine();
    let t = 0.5;
    let mut rows = Vec::new();
    for bc in BCS {
        for n in 1..=3u32 {
            let phi = Aperture::new(TAU / 2f64.powi(n as i32))?;
            let mut worst = 0.0f64;
            for x in polar_grid(phi.value(), 4, 0.3, 2.0) {
                for y in partners(phi.value(), 1.0) {
                    let d = dyadic_cone_heat(bc, n, t, x, y, &c)?;
                    worst = worst.max(rel(d, cone_heat(bc, phi, t, x, y, &c)?.value));
                }
            }
            rows.push(VerifyRow::new(
                format!("dyadic-combinator/{bc}/n={n}"),
                worst,
                CONE_REL_TOL,
            ));
        }
    }
    Ok(rows)
}

fn truncated_ctrl() -> SeriesControl {
    SeriesControl {
        abs_tol: 1e-18,
        max_terms: 100_000,
    }
}

/// Truncated-cone halving for `Phi in {2pi, pi}`, `t in {0.2, 0.5}` on 8x8 grids.
pub fn truncated_identities() -> Result<Vec<VerifyRow>> {
    let c = truncated_ctrl();
    let mut rows = Vec::new();
    for phi in [TAU, PI] {
        let big = Aperture::new(phi)?;
        let small = big.half();
        for bc in BCS {
            for t in [0.2, 0.5] {
                let comb = reflect_kernel(
                    TruncatedConeKernel {
                        bc,
                        phi: big,
                        t,
                        ctrl: c,
                    },
                    bc,
                    bisector_vector(big),
                )?;
                let (mut id, mut cb) = (0.0f64, 0.0f64);
                for x in polar_grid(small.value(), 8, 0.1, 0.8) {
                    for y in partners(small.value(), 0.5) {
                        let direct = truncated_cone_heat(bc, small, t, x, y, &c)?.value;
                        let image = truncated_cone_heat(bc, big, t, x, y, &c)?.value
                            + bc.image_sign() * truncated_cone_heat(bc, big, t, big.mirror(x), y, &c)?.value;
                        id = id.max(rel(image, direct));
                        cb = cb.max(rel(comb.eval(&x.to_point(), &y.to_point())?, direct));
                    }
                }
                let tag = format!("{bc}/phi={}/t={t}", phi_label(phi));
                rows.push(VerifyRow::new(
                    format!("truncated-halving/{tag}"),
                    id,
                    TRUNCATED_REL_TOL,
                ));
                rows.push(VerifyRow::new(
                    format!("truncated-combinator/{tag}"),
                    cb,
                    TRUNCATED_REL_TOL,
                ));
            }
        }
    }
    Ok(rows)
}

/// Half disk as the disk minus its mirror image, on 8x8 grids.
pub fn disk_identities() -> Result<Vec<VerifyRow>> {
    let c = truncated_ctrl();
    let half = Aperture::new(PI)?;
    let mut rows = Vec::new();
    for t in [0.2, 0.5] {
        let comb = reflect_kernel(
            DiskKernel { t, ctrl: c },
            Boundary::Dirichlet,
            ReflectionVector::coordinate(2, 1)?,
        )?;
        let (mut id, mut cb) = (0.0f64, 0.0f64);
        for x in polar_grid(PI, 8, 0.1, 0.8) {
            for y in partners(PI, 0.5) {
                let direct = truncated_cone_heat(Boundary::Dirichlet, half, t, x, y, &c)?.value;
                let image = disk_heat_dirichlet(t, x, y, &c)?.value
                    - disk_heat_dirichlet(t, PolarPoint::new(x.rho, -x.theta), y, &c)?.value;
                id = id.max(rel(image, direct));
                cb = cb.max(rel(comb.eval(&x.to_point(), &y.to_point())?, direct));
            }
        }
        rows.push(VerifyRow::new(format!("disk-slit/t={t}"), id, TRUNCATED_REL_TOL));
        rows.push(VerifyRow::new(
            format!("disk-slit-combinator/t={t}"),
            cb,
            TRUNCATED_REL_TOL,
        ));
    }
    Ok(rows)
}

fn on_axis(d: usize, r: f64) -> Result<(Point, Point)> {
    let mut y = vec![0.0; d];
    y[0] = r;
    Ok((Point::new(vec![0.0; d])?, Point::new(y)?))
}

/// Closed-form transform kernels against their defining integrals.
pub fn constants() -> Result<Vec<VerifyRow>> {
    let q = QuadratureControl::new(1e-300, 1e-11, 4000)?;
    let mut rows = Vec::new();
    for d in 1..=3 {
        let mut worst = 0.0f64;
        for lambda in [0.5, 1.0, 4.0] {
            for r in [0.25, 1.0, 4.0] {
                let (x, y) = on_axis(d, r)?;
                worst = worst.max(rel(
                    resolvent(d, lambda, &x, &y)?,
                    resolvent_by_quadrature(d, lambda, &x, &y, &q)?.value,
                ));
            }
        }
        rows.push(VerifyRow::new(format!("resolvent/d={d}"), worst, RESOLVENT_REL_TOL));
    }
    let mut yukawa = 0.0f64;
    for lambda in [0.5f64, 1.0, 4.0] {
        for r in [0.25, 1.0, 4.0] {
            let (x, y) = on_axis(3, r)?;
            let closed = (-lambda.sqrt() * r).exp() / (4.0 * PI * r);
            yukawa = yukawa.max(rel(resolvent(3, lambda, &x, &y)?, closed));
        }
    }
    rows.push(VerifyRow::new("resolvent/yukawa-d=3", yukawa, RESOLVENT_REL_TOL));
    for (d, sigma) in [(3, 1.0), (3, 0.5), (2, 0.5), (4, 1.0), (4, 1.5)] {
        let mut worst = 0.0f64;
        for r in [0.25, 1.0, 2.0, 4.0] {
            let (x, y) = on_axis(d, r)?;
            worst = worst.max(rel(
                riesz(d, sigma, &x, &y)?,
                riesz_by_quadrature(d, sigma, &x, &y, &q)?.value,
            ));
        }
        rows.push(VerifyRow::new(
            format!("riesz/d={d}/sigma={sigma}"),
            worst,
            RIESZ_REL_TOL,
        ));
    }
    for d in [3usize, 4] {
        let (x, y) = on_axis(d, 1.0)?;
        let expect = if d == 3 {
            1.0 / (4.0 * PI)
        } else {
            1.0 / (4.0 * PI * PI)
        };
        let g = green(d, &x, &y)?;
        let same = (g - riesz(d, 1.0, &x, &y)?).abs();
        rows.push(VerifyRow::new(format!("green/d={d}"), rel(g, expect).max(same), 1e-14));
    }
    let hq = QuadratureControl::new(1e-14, 1e-10, 2000)?;
    let mut worst = 0.0f64;
    for (x, y) in [(0.5, 3.0), (2.0, 5.0), (1.0, 1.0), (3.0, 0.2)] {
        let quad = halfline_newtonian_by_quadrature(Boundary::Dirichlet, x, y, &hq)?.value;
        worst = worst.max(rel(quad, newtonian_halfline_dirichlet(x, y)?));
    }
    rows.push(VerifyRow::new("newtonian-halfline/dirichlet", worst, NEWTONIAN_REL_TOL));
    let flagged = matches!(
        halfline_newtonian_by_quadrature(Boundary::Neumann, 0.5, 3.0, &hq),
        Err(KernelError::Divergent(_))
    );
    rows.push(
        VerifyRow::new(
            "newtonian-halfline/neumann-divergent",
            if flagged { 0.0 } else { 1.0 },
            0.0,
        )
        .with_detail("1 if the divergent quadrature is not flagged"),
    );
    Ok(rows)
}

fn se_row(name: &str, est: &McEstimate, reference: f64) -> VerifyRow {
    VerifyRow::new(name, (est.value - reference).abs(), SE_MULTIPLIER * est.std_error).with_detail(format!(
        "estimate {:.6} se {:.2e} reference {:.6}",
        est.value, est.std_error, reference
    ))
}

/// Interval `(-pi, pi)` instance of the reflection check.
pub fn mc_interval_instance() -> (McDomain, Point, f64, TargetBox) {
    (
        McDomain::Interval { a: -PI, b: PI },
        Point::from(1.0),
        0.4,
        TargetBox::new(vec![0.5], vec![2.0]).expect("box"),
    )
}

/// Unit-disk instance of the reflection check, mirrored in the horizontal diameter.
pub fn mc_disk_instance() -> (McDomain, Point, f64, TargetBox) {
    (
        McDomain::Disk,
        Point::new(vec![0.0, 0.3]).expect("point"),
        0.05,
        TargetBox::new(vec![-0.3, 0.1], vec![0.3, 0.6]).expect("box"),
    )
}

/// `int_lo^hi f` with a tight relative tolerance.
fn integral(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    Ok(integrate(f, lo, hi, &QuadratureControl::new(1e-15, 1e-12, 2000)?)?.value)
}

/// Monte Carlo rows: reflection principle, and killed/reflected estimates against kernels.
pub fn mc_rows(cfg: &MCConfig) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    for (label, (dom, x0, t, target)) in [("interval", mc_interval_instance()), ("disk", mc_disk_instance())] {
        let r = check_reflection_identity(&dom, &x0, t, &target, cfg)?;
        rows.push(
            VerifyRow::new(
                format!("mc-reflection/{label}"),
                r.discrepancy.value.abs(),
                SE_MULTIPLIER * r.discrepancy.std_error,
            )
            .with_detail(format!(
                "L {:.6}+-{:.1e} R1 {:.6}+-{:.1e} R2 {:.6}+-{:.1e}",
                r.positive.value,
                r.positive.std_error,
                r.whole.value,
                r.whole.std_error,
                r.mirrored.value,
                r.mirrored.std_error
            )),
        );
    }
    let c = SeriesControl::default();
    let interval = McDomain::Interval { a: -PI, b: PI };
    let target = TargetBox::new(vec![0.2], vec![0.6])?;
    let est = estimate_killed_prob(&interval, &Point::from(0.3), 0.5, &target, cfg)?;
    let reference = integral(
        |y| interval_heat(Boundary::Dirichlet, -PI, PI, 0.5, 0.3, y, &c).map_or(f64::NAN, |v| v.value),
        0.2,
        0.6,
    )?;
    rows.push(se_row("mc-killed/interval", &est, reference));

    let half = McDomain::HalfSpace { d: 1 };
    let target = TargetBox::new(vec![0.5], vec![1.5])?;
    let hk = |bc| {
        integral(
            move |y| halfspace_heat(bc, 1, 1.0, &Point::from(1.0), &Point::from(y)).unwrap_or(f64::NAN),
            0.5,
            1.5,
        )
    };
    let est = estimate_killed_prob(&half, &Point::from(1.0), 1.0, &target, cfg)?;
    rows.push(se_row("mc-killed/half-line", &est, hk(Boundary::Dirichlet)?));
    let est = estimate_reflected_prob(&half, &Point::from(1.0), 1.0, &target, cfg)?;
    rows.push(se_row("mc-reflected/half-line", &est, hk(Boundary::Neumann)?));
    Ok(rows)
}

/// Configuration used by the verification suite when none is given.
pub fn default_mc_config() -> MCConfig {
    MCConfig {
        paths: 100_000,
        dt: 1e-3,
        seed: 20_240_601,
        workers: 1,
        exit: ExitRule::BrownianBridge,
    }
}
