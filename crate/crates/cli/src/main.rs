mod args;
mod kernels;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use reflection_kernels::mc_oracle::{
    check_reflection_identity, estimate_free_prob, estimate_killed_prob, estimate_reflected_prob, MCConfig, McDomain,
    McEstimate, TargetBox,
};
use reflection_kernels::verify::run_suite;
use reflection_kernels::{Aperture, KernelError, Point, PolarPoint};

use args::{Cli, Command, EvalArgs, GridArgs, McArgs, McControl, McDomainKind, McMode, VerifyArgs};
use output::{Cell, Table};

/// A verification row or the reflection check failed.
const EXIT_FAILED: u8 = 1;
/// Invalid specification.
const EXIT_INVALID: u8 = 2;
/// Requested accuracy not reached.
const EXIT_ACCURACY: u8 = 3;

enum Failure {
    Kernel(KernelError),
    Io(io::Error),
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        Failure::Kernel(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn coords(s: &str) -> Result<Vec<f64>, KernelError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| KernelError::Parameter(format!("bad coordinate '{c}' in '{s}'")))
        })
        .collect()
}

fn point(s: &str, polar: bool) -> Result<Point, KernelError> {
    let c = coords(s)?;
    if polar {
        if c.len() != 2 {
            return Err(KernelError::Parameter(format!("polar point '{s}' needs rho,theta")));
        }
        return Ok(PolarPoint::new(c[0], c[1]).to_point());
    }
    Point::new(c)
}

fn point_columns(dim: usize) -> Vec<String> {
    let mut cols: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    cols.extend((1..=dim).map(|i| format!("y{i}")));
    cols.push("value".into());
    cols.push("achieved_tol".into());
    cols
}

fn record(x: &Point, y: &Point, value: f64, tol: f64) -> Vec<Cell> {
    let mut row: Vec<Cell> = x.coords().iter().chain(y.coords()).map(|&c| Cell::Num(c)).collect();
    row.push(Cell::Num(value));
    row.push(Cell::Num(tol));
    row
}

fn cmd_eval(a: &EvalArgs) -> Result<Table, Failure> {
    let k = kernels::build(&a.kernel)?;
    let xs: Vec<Point> = a.x.iter().map(|s| point(s, a.kernel.polar)).collect::<Result<_, _>>()?;
    let ys: Vec<Point> = a.y.iter().map(|s| point(s, a.kernel.polar)).collect::<Result<_, _>>()?;
    if ys.len() != 1 && ys.len() != xs.len() {
        return Err(KernelError::Parameter("give one --y per --x, or a single --y".into()).into());
    }
    let mut table = Table::new(point_columns(k.dim));
    for (i, x) in xs.iter().enumerate() {
        let y = &ys[if ys.len() == 1 { 0 } else { i }];
        let (v, tol) = k.eval(x, y)?;
        table.push(record(x, y, v, tol));
    }
    Ok(table)
}

fn axis(s: &str) -> Result<Vec<f64>, KernelError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || KernelError::Parameter(format!("axis '{s}' must be min:max:count with count >= 1"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn cmd_grid(a: &GridArgs) -> Result<Table, Failure> {
    let k = kernels::build(&a.kernel)?;
    let axes: Vec<Vec<f64>> = a.axes.iter().map(|s| axis(s)).collect::<Result<_, _>>()?;
    let fixed_y = match (&a.y, axes.len()) {
        (Some(y), n) if n == k.dim => Some(point(y, a.kernel.polar)?),
        (None, n) if n == 2 * k.dim => None,
        _ => {
            return Err(
                KernelError::Parameter(format!("give {} axes with --y, or {} axes without", k.dim, 2 * k.dim)).into(),
            )
        }
    };
    let total: usize = axes.iter().map(Vec::len).product();
    // lexicographic order, first axis slowest
    let nodes: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            let mut c = vec![0.0; axes.len()];
            for (j, ax) in axes.iter().enumerate().rev() {
                c[j] = ax[idx % ax.len()];
                idx /= ax.len();
            }
            c
        })
        .collect();
    let polar = a.kernel.polar;
    let split = |c: &[f64]| -> Result<(Point, Point), KernelError> {
        let to = |v: &[f64]| {
            if polar {
                Ok(PolarPoint::new(v[0], v[1]).to_point())
            } else {
                Point::from_slice(v)
            }
        };
        match &fixed_y {
            Some(y) => Ok((to(c)?, y.clone())),
            None => Ok((to(&c[..k.dim])?, to(&c[k.dim..])?)),
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.workers.max(1))
        .build()
        .map_err(|e| KernelError::Config(format!("thread pool: {e}")))?;
    let rows: Vec<Result<Vec<Cell>, KernelError>> = pool.install(|| {
        nodes
            .par_iter()
            .map(|c| {
                let (x, y) = split(c)?;
                let (v, tol) = k.eval(&x, &y)?;
                let mut row: Vec<Cell> = c.iter().map(|&u| Cell::Num(u)).collect();
                if let Some(y) = &fixed_y {
                    row.extend(y.coords().iter().map(|&u| Cell::Num(u)));
                }
                row.push(Cell::Num(v));
                row.push(Cell::Num(tol));
                Ok(row)
            })
            .collect()
    });
    let mut cols = point_columns(k.dim);
    if polar {
        for (i, name) in ["rho", "theta"].iter().enumerate() {
            cols[i] = format!("x_{name}");
            cols[k.dim + i] = format!("y_{name}");
        }
    }
    let mut table = Table::new(cols);
    for r in rows {
        table.push(r?);
    }
    Ok(table)
}

fn mc_config(m: &McControl) -> MCConfig {
    MCConfig {
        paths: m.paths,
        dt: m.dt,
        seed: m.seed,
        workers: m.workers,
        exit: m.exit,
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<(Table, bool), Failure> {
    let rows = run_suite(a.suite, &mc_config(&a.mc), a.filter.as_deref())?;
    let mut table = Table::new(
        ["name", "discrepancy", "threshold", "pass", "detail"]
            .map(String::from)
            .to_vec(),
    );
    let mut ok = true;
    for r in rows {
        ok &= r.pass;
        table.push(vec![
            Cell::Str(r.name),
            Cell::Num(r.discrepancy),
            Cell::Num(r.threshold),
            Cell::Bool(r.pass),
            Cell::Str(r.detail),
        ]);
    }
    Ok((table, ok))
}

fn mc_domain(a: &McArgs) -> Result<McDomain, KernelError> {
    let need = |v: Option<f64>, n: &str| v.ok_or_else(|| KernelError::Parameter(format!("--{n} is required")));
    let dom = match a.domain {
        McDomainKind::Halfspace => McDomain::HalfSpace { d: a.d.unwrap_or(1) },
        McDomainKind::Orthant => {
            let d = a.d.unwrap_or(2);
            McDomain::Orthant { d, k: a.k.unwrap_or(d) }
        }
        McDomainKind::Interval => McDomain::Interval {
            a: need(a.a, "a")?,
            b: need(a.b, "b")?,
        },
        McDomainKind::Cone => McDomain::PlanarCone {
            phi: Aperture::new(need(a.phi, "phi")?)?,
        },
        McDomainKind::TruncatedCone => McDomain::TruncatedCone {
            phi: Aperture::new(need(a.phi, "phi")?)?,
        },
        McDomainKind::Disk => McDomain::Disk,
    };
    dom.validate()?;
    Ok(dom)
}

fn cmd_mc(a: &McArgs) -> Result<(Table, bool), Failure> {
    let dom = mc_domain(a)?;
    let cfg = mc_config(&a.mc);
    let x0 = Point::new(coords(&a.x0)?)?;
    let target = TargetBox::new(coords(&a.lo)?, coords(&a.hi)?)?;
    let mut table = Table::new(
        ["quantity", "value", "std_error", "paths", "dt", "seed"]
            .map(String::from)
            .to_vec(),
    );
    let mut push = |name: &str, e: &McEstimate| {
        table.push(vec![
            Cell::Str(name.into()),
            Cell::Num(e.value),
            Cell::Num(e.std_error),
            Cell::Int(e.paths_used),
            Cell::Num(cfg.dt),
            Cell::Int(cfg.seed),
        ])
    };
    let mut ok = true;
    match a.mode {
        McMode::Killed => push("killed", &estimate_killed_prob(&dom, &x0, a.t, &target, &cfg)?),
        McMode::Reflected => push("reflected", &estimate_reflected_prob(&dom, &x0, a.t, &target, &cfg)?),
        McMode::Free => push("free", &estimate_free_prob(&x0, a.t, &target, &cfg)?),
        McMode::ReflectionCheck => {
            let r = check_reflection_identity(&dom, &x0, a.t, &target, &cfg)?;
            push("positive", &r.positive);
            push("whole", &r.whole);
            push("mirrored", &r.mirrored);
            push("discrepancy", &r.discrepancy);
            ok = r.pass;
        }
    }
    Ok((table, ok))
}

fn run(cli: &Cli) -> Result<(Table, output::Format, bool), Failure> {
    Ok(match &cli.command {
        Command::Eval(a) => (cmd_eval(a)?, a.format, true),
        Command::Grid(a) => (cmd_grid(a)?, a.format, true),
        Command::Verify(a) => {
            let (t, ok) = cmd_verify(a)?;
            (t, a.format, ok)
        }
        Command::Mc(a) => {
            let (t, ok) = cmd_mc(a)?;
            (t, a.format, ok)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((table, format, ok)) => {
            let mut out = io::stdout().lock();
            if let Err(e) = table.write(format, &mut out).and_then(|_| out.flush()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(EXIT_FAILED);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: check failed; see the pass column or the discrepancy row");
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(Failure::Kernel(e)) => {
            eprintln!("error: {e}");
            let accuracy = matches!(
                e,
                KernelError::ToleranceNotMet { .. } | KernelError::Convergence(_) | KernelError::Divergent(_)
            );
            ExitCode::from(if accuracy { EXIT_ACCURACY } else { EXIT_INVALID })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}
