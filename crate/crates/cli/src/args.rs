use clap::{Args, Parser, Subcommand, ValueEnum};
use reflection_kernels::mc_oracle::ExitRule;
use reflection_kernels::verify::Suite;
use reflection_kernels::Boundary;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "refker",
    version,
    about = "Heat, resolvent and Riesz kernels on reflection-symmetric domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a kernel at point pairs.
    Eval(EvalArgs),
    /// Evaluate a kernel on a rectangular grid.
    Grid(GridArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Monte Carlo estimates of killed or reflected motion.
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Free,
    Halfspace,
    Halfline,
    Orthant,
    Interval,
    Cone,
    DyadicCone,
    TruncatedCone,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Heat,
    Resolvent,
    Riesz,
    Green,
    Newtonian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quadrature,
}

fn boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: reflection_kernels::KernelError| e.to_string())
}

fn exit_rule(s: &str) -> Result<ExitRule, String> {
    s.parse().map_err(|e: reflection_kernels::KernelError| e.to_string())
}

fn suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: reflection_kernels::KernelError| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum)]
    pub domain: DomainKind,
    /// Boundary condition: dirichlet|d|neumann|n.
    #[arg(long, value_parser = boundary, default_value = "dirichlet")]
    pub bc: Boundary,
    #[arg(long, value_enum, default_value = "heat")]
    pub family: FamilyKind,
    /// How transform kernels are computed.
    #[arg(long, value_enum, default_value = "closed")]
    pub method: Method,
    /// Ambient dimension for free, halfspace and orthant domains.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of orthant roots (defaults to d).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Cone aperture in radians.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Dyadic level: aperture 2 pi / 2^n.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Series absolute tolerance or quadrature relative tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
    /// Read planar coordinates as (rho, theta).
    #[arg(long)]
    pub polar: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Comma-separated coordinates; repeat for several points.
    #[arg(short = 'x', long = "x", required = true, allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// One partner per x, or a single partner for all.
    #[arg(short = 'y', long = "y", required = true, allow_hyphen_values = true)]
    pub y: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Axis descriptor min:max:count; give one per x coordinate (with --y) or one per x and y coordinate.
    #[arg(long = "axis", required = true, allow_hyphen_values = true)]
    pub axes: Vec<String>,
    #[arg(short = 'y', long = "y", allow_hyphen_values = true)]
    pub y: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// identities|constants|mc
    #[arg(value_parser = suite)]
    pub suite: Suite,
    /// Keep rows whose name contains this text.
    #[arg(long)]
    pub filter: Option<String>,
    #[command(flatten)]
    pub mc: McControl,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct McControl {
    #[arg(long, default_value_t = 100_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Exit detection: step|bridge.
    #[arg(long = "exit", value_parser = exit_rule, default_value = "bridge")]
    pub exit: ExitRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McMode {
    Killed,
    Reflected,
    Free,
    ReflectionCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McDomainKind {
    Halfspace,
    Orthant,
    Interval,
    Cone,
    TruncatedCone,
    Disk,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, value_enum, default_value = "killed")]
    pub mode: McMode,
    #[arg(long, value_enum)]
    pub domain: McDomainKind,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Start point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long)]
    pub t: f64,
    /// Lower corner of the target box.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: String,
    /// Upper corner of the target box.
    #[arg(long, allow_hyphen_values = true)]
    pub hi: String,
    #[command(flatten)]
    pub mc: McControl,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}
