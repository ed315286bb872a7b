use reflection_kernels::closed_kernels::{
    free_kernel, halfline_newtonian_by_quadrature, halfspace_heat, newtonian_halfline_dirichlet,
    resolvent_by_quadrature, riesz_by_quadrature, KernelFamily,
};
use reflection_kernels::quadrature::QuadratureControl;
use reflection_kernels::reflection::{orthant_kernel, reflect_kernel, Kernel, ReflectionSystem, ReflectionVector};
use reflection_kernels::series_kernels::{
    cone_heat, disk_heat_dirichlet, dyadic_cone_heat, interval_heat, truncated_cone_heat, SeriesControl,
};
use reflection_kernels::{Aperture, Boundary, KernelError, Point, PolarPoint, Result};

use crate::args::{DomainKind, FamilyKind, KernelArgs, Method};

type EvalFn = Box<dyn Fn(&Point, &Point) -> Result<(f64, f64)> + Send + Sync>;

/// A configured kernel returning `(value, achieved accuracy)`.
pub struct Evaluator {
    pub dim: usize,
    f: EvalFn,
}

impl Evaluator {
    pub fn eval(&self, x: &Point, y: &Point) -> Result<(f64, f64)> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)?;
        (self.f)(x, y)
    }
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| KernelError::Parameter(format!("--{name} is required for this kernel")))
}

fn family(args: &KernelArgs) -> Result<KernelFamily> {
    Ok(match args.family {
        FamilyKind::Heat => KernelFamily::Heat { t: need(args.t, "t")? },
        FamilyKind::Resolvent => KernelFamily::Resolvent {
            lambda: need(args.lambda, "lambda")?,
        },
        FamilyKind::Riesz => KernelFamily::Riesz {
            sigma: need(args.sigma, "sigma")?,
        },
        FamilyKind::Green => KernelFamily::Green,
        FamilyKind::Newtonian => {
            return Err(KernelError::Parameter(
                "the newtonian family lives on --domain halfline".into(),
            ))
        }
    })
}

fn heat_only(args: &KernelArgs) -> Result<f64> {
    if args.family != FamilyKind::Heat {
        return Err(KernelError::Unsupported(format!(
            "{:?} supports only the heat family",
            args.domain
        )));
    }
    need(args.t, "t")
}

fn polar(p: &Point, what: &str) -> Result<PolarPoint> {
    PolarPoint::from_point(p)
        .ok_or_else(|| KernelError::Domain(format!("{what} must be a planar point off the origin")))
}

fn disk_polar(p: &Point) -> Result<PolarPoint> {
    Ok(PolarPoint::from_point(p).unwrap_or(PolarPoint::new(0.0, 0.0)))
}

fn quadrature(args: &KernelArgs) -> Result<QuadratureControl> {
    QuadratureControl::new(1e-300, args.tol.unwrap_or(1e-10), 4000)
}

fn series(args: &KernelArgs) -> Result<SeriesControl> {
    SeriesControl::new(args.tol.unwrap_or(1e-14), args.max_terms)
}

fn closed(k: Box<dyn Kernel>) -> EvalFn {
    Box::new(move |x, y| Ok((k.eval(x, y)?, 0.0)))
}

/// Dimension of the points for this configuration.
fn dimension(args: &KernelArgs) -> Result<usize> {
    Ok(match args.domain {
        DomainKind::Free | DomainKind::Halfspace | DomainKind::Orthant => {
            let d = args.d.unwrap_or(1);
            if d == 0 {
                return Err(KernelError::Parameter("--d must be >= 1".into()));
            }
            d
        }
        DomainKind::Halfline | DomainKind::Interval => 1,
        _ => 2,
    })
}

pub fn build(args: &KernelArgs) -> Result<Evaluator> {
    let dim = dimension(args)?;
    let bc = args.bc;
    let f: EvalFn = match args.domain {
        DomainKind::Free => {
            let fam = family(args)?;
            match (fam, args.method) {
                (_, Method::Closed) => closed(free_kernel(dim, fam)?),
                (KernelFamily::Resolvent { lambda }, Method::Quadrature) => {
                    let q = quadrature(args)?;
                    Box::new(move |x, y| {
                        let r = resolvent_by_quadrature(dim, lambda, x, y, &q)?;
                        Ok((r.value, r.abs_error))
                    })
                }
                (KernelFamily::Riesz { sigma }, Method::Quadrature) => {
                    let q = quadrature(args)?;
                    Box::new(move |x, y| {
                        let r = riesz_by_quadrature(dim, sigma, x, y, &q)?;
                        Ok((r.value, r.abs_error))
                    })
                }
                _ => {
                    return Err(KernelError::Unsupported(
                        "quadrature exists for resolvent and riesz only".into(),
                    ))
                }
            }
        }
        DomainKind::Halfspace | DomainKind::Halfline if args.family != FamilyKind::Newtonian => {
            let fam = family(args)?;
            if let KernelFamily::Heat { t } = fam {
                Box::new(move |x, y| Ok((halfspace_heat(bc, dim, t, x, y)?, 0.0)))
            } else {
                let base = free_kernel(dim, fam)?;
                closed(Box::new(reflect_kernel(
                    base,
                    bc,
                    ReflectionVector::coordinate(dim, dim - 1)?,
                )?))
            }
        }
        DomainKind::Halfspace | DomainKind::Halfline => {
            if dim != 1 {
                return Err(KernelError::Parameter("the newtonian family needs dimension 1".into()));
            }
            match (bc, args.method) {
                (Boundary::Dirichlet, Method::Closed) => {
                    Box::new(|x, y| Ok((newtonian_halfline_dirichlet(x[0], y[0])?, 0.0)))
                }
                (Boundary::Neumann, Method::Closed) => {
                    return Err(KernelError::Unsupported(
                        "the Neumann half-line Newtonian potential does not exist; use --method quadrature to see the divergence"
                            .into(),
                    ))
                }
                (_, Method::Quadrature) => {
                    let q = quadrature(args)?;
                    Box::new(move |x, y| {
                        let r = halfline_newtonian_by_quadrature(bc, x[0], y[0], &q)?;
                        Ok((r.value, r.abs_error))
                    })
                }
            }
        }
        DomainKind::Orthant => {
            let k = args.k.unwrap_or(dim);
            let base = free_kernel(dim, family(args)?)?;
            closed(Box::new(orthant_kernel(
                base,
                bc,
                ReflectionSystem::coordinate(dim, k)?,
            )?))
        }
        DomainKind::Interval => {
            let t = heat_only(args)?;
            let (a, b) = (need(args.a, "a")?, need(args.b, "b")?);
            let c = series(args)?;
            Box::new(move |x, y| {
                let v = interval_heat(bc, a, b, t, x[0], y[0], &c)?;
                Ok((v.value, v.tail_bound))
            })
        }
        DomainKind::Cone => {
            let t = heat_only(args)?;
            let phi = Aperture::new(need(args.phi, "phi")?)?;
            let c = series(args)?;
            Box::new(move |x, y| {
                let v = cone_heat(bc, phi, t, polar(x, "x")?, polar(y, "y")?, &c)?;
                Ok((v.value, v.tail_bound))
            })
        }
        DomainKind::DyadicCone => {
            let t = heat_only(args)?;
            let n = args.n.unwrap_or(0);
            let c = series(args)?;
            // 2^n cone series, each truncated to abs_tol
            let bound = c.abs_tol * 2f64.powi(n as i32);
            Box::new(move |x, y| Ok((dyadic_cone_heat(bc, n, t, polar(x, "x")?, polar(y, "y")?, &c)?, bound)))
        }
        DomainKind::TruncatedCone => {
            let t = heat_only(args)?;
            let phi = Aperture::new(need(args.phi, "phi")?)?;
            let c = series(args)?;
            Box::new(move |x, y| {
                let v = truncated_cone_heat(bc, phi, t, polar(x, "x")?, polar(y, "y")?, &c)?;
                Ok((v.value, v.tail_bound))
            })
        }
        DomainKind::Disk => {
            let t = heat_only(args)?;
            if bc != Boundary::Dirichlet {
                return Err(KernelError::Unsupported("the disk kernel is Dirichlet only".into()));
            }
            let c = series(args)?;
            Box::new(move |x, y| {
                let v = disk_heat_dirichlet(t, disk_polar(x)?, disk_polar(y)?, &c)?;
                Ok((v.value, v.tail_bound))
            })
        }
    };
    Ok(Evaluator { dim, f })
}
