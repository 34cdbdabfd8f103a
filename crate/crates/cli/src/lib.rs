//! Command-line driver: configuration, subcommands, CSV output and the
//! verification suites as runnable checks.

// negated comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_zeta::domains::{inclusion_report, E2Variant};
use hecke_zeta::moebius::SurfaceParams;
use hecke_zeta::resonances::{find_delta, grid_csv, locate_zeros, scan_grid, zeros_csv, Rect};
use hecke_zeta::symbolic::{BranchSystem, SystemKind};
use hecke_zeta::transferop::{residue_rank, OperatorContext};
use hecke_zeta::zeta::{matrix_traces, orbit_traces_for, trace_series_with, zeta_euler, Which, ZetaOperator};
use hecke_zeta::{Error, C64};
use log::warn;

use config::{parse_complex, parse_list, parse_range, Overrides, RunConfig};

/// Exit code of configuration errors.
pub const EXIT_CONFIG: i32 = 1;
/// Exit code of numerical precondition failures.
pub const EXIT_NUMERICAL: i32 = 2;
/// Exit code of failed checks.
pub const EXIT_CHECK: i32 = 3;

/// Below this `lambda` the funnel is thin and the operators converge slowly.
const THIN_FUNNEL: f64 = 2.05;

/// A failed run: exit code and a message naming the violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn config(message: String) -> Self {
        Self { code: EXIT_CONFIG, message }
    }

    pub fn check(message: String) -> Self {
        Self { code: EXIT_CHECK, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidLambda(_) | Error::InvalidArgument(_) | Error::Io { .. } => EXIT_CONFIG,
            _ => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hecke-zeta", version, about = "Selberg zeta functions of infinite-area Hecke triangle surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand; flags override the config file.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Config file of `key = value` lines (keys as the long flags)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Width of the Hecke triangle surface, > 2 [default: 3]
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Taylor basis size per disc, in [4, 256] [default: 32]
    #[arg(long, global = true)]
    pub basis: Option<usize>,
    /// Longest word in Euler products and orbit listings [default: 12]
    #[arg(long, global = true)]
    pub max_word_len: Option<usize>,
    /// Largest k in the Euler factors [default: 25]
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Parabolic sums: direct, continued or auto [default: auto]
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Root-finding and summation tolerance [default: 1e-9]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            lambda: self.lambda,
            basis: self.basis,
            max_word_len: self.max_word_len,
            k_max: self.k_max,
            method: self.method.clone(),
            tol: self.tol,
            threads: self.threads,
            out: self.out.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalPath {
    /// Fredholm determinant, error from halving the basis
    Operator,
    /// Euler product over the length spectrum, Re s > 1
    Euler,
    /// Exponentiated trace series of the full operator
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    P,
    R,
    I,
    #[value(name = "ij+")]
    IjPlus,
    #[value(name = "ij-")]
    IjMinus,
}

impl From<SystemArg> for SystemKind {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::P => SystemKind::P,
            SystemArg::R => SystemKind::R,
            SystemArg::I => SystemKind::I,
            SystemArg::IjPlus => SystemKind::IJPlus,
            SystemArg::IjMinus => SystemKind::IJMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Working,
    Prose,
    Displayed,
}

impl From<VariantArg> for E2Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Working => E2Variant::Working,
            VariantArg::Prose => E2Variant::Prose,
            VariantArg::Displayed => E2Variant::Displayed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Z, Z+ or Z- at one point
    Eval {
        /// Point, as a, a+bi or a-bi
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Z, Z+ or Z-
        #[arg(long, default_value = "Z")]
        which: String,
        #[arg(long, value_enum, default_value_t = EvalPath::Operator)]
        path: EvalPath,
    },
    /// Z on a rectangular grid, as CSV
    Scan {
        /// Real range lo:hi
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        /// Imaginary range lo:hi
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Refined zeros of Z in a box, as CSV
    Zeros {
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        #[arg(long, allow_hyphen_values = true)]
        im: String,
    },
    /// Hausdorff dimension of the limit set
    Delta,
    /// Periodic orbit classes, as CSV
    Orbits {
        #[arg(long, value_enum, default_value_t = SystemArg::I)]
        system: SystemArg,
        /// Largest norm listed
        #[arg(long, default_value_t = 100.0)]
        bound: f64,
    },
    /// Primitive length spectrum, as CSV
    Spectrum {
        #[arg(long, value_enum, default_value_t = SystemArg::I)]
        system: SystemArg,
        #[arg(long, default_value_t = 100.0)]
        bound: f64,
    },
    /// Run a verification suite; exits 3 on failure
    Check {
        #[command(subcommand)]
        suite: Check,
    },
    /// Rank of the parabolic residues at s0 = (1-k)/2
    ResidueRank {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
        s0: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Disc inclusions for parabolic indices up to n-max
    Inclusions {
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = VariantArg::Working)]
        variant: VariantArg,
    },
    /// Fredholm determinant against the Euler product
    Euler {
        /// Comma-separated points with Re s > 1
        #[arg(long, allow_hyphen_values = true, default_value = "3,4")]
        s: String,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
    },
    /// Traces of operator powers against orbit sums, n = 1..4
    Traces {
        #[arg(long, allow_hyphen_values = true, default_value = "2")]
        s: String,
        #[arg(long, default_value_t = 1e-7)]
        threshold: f64,
    },
    /// Z against Z+ Z- from separate Euler products
    Factorization {
        #[arg(long, allow_hyphen_values = true, default_value = "2.5,3,4")]
        s: String,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
}

/// Parses arguments, configures the thread pool and runs the command.
pub fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(cli.global.config.as_deref(), &cli.global.overrides())?;
    if cfg.lambda < THIN_FUNNEL {
        warn!("lambda = {} is close to 2; expect slow convergence in the basis size", cfg.lambda);
    }
    if let Some(n) = cfg.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut report = Report::default();
    let result = execute(&cfg, &cli.command, &mut report);
    emit(&cfg, &report.text)?;
    result
}

/// Output text, assembled on one thread.
#[derive(Debug, Default)]
struct Report {
    text: String,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(|e| {
            Failure::from(Error::Io { path: path.display().to_string(), message: e.to_string() })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn params(cfg: &RunConfig) -> Result<SurfaceParams, Failure> {
    Ok(SurfaceParams::new(cfg.lambda)?)
}

fn operator(cfg: &RunConfig) -> Result<ZetaOperator, Failure> {
    Ok(ZetaOperator::new(params(cfg)?, cfg.basis)?.with_method(cfg.method.method(cfg.tol)))
}

fn execute(cfg: &RunConfig, command: &Command, out: &mut Report) -> Result<(), Failure> {
    match command {
        Command::Eval { s, which, path } => {
            let s = parse_complex(s)?;
            let which: Which = which.parse()?;
            let v = match path {
                EvalPath::Operator => operator(cfg)?.eval(s, which)?,
                EvalPath::Euler => zeta_euler(params(cfg)?, s, which, cfg.max_word_len, cfg.k_max)?,
                EvalPath::Series => {
                    if which != Which::Z {
                        return Err(Failure::config("the trace series is defined for Z only".to_string()));
                    }
                    let ctx = OperatorContext::new(params(cfg)?, cfg.basis)?;
                    trace_series_with(&ctx, s, 40, 0)?.value
                }
            };
            out.line(format!("{which}({}) = {} ± {:.1e}", fmt_point(s), fmt_complex(v.value, digits(v.error_estimate).max(12)), v.error_estimate));
        }
        Command::Scan { re, im, step } => {
            let rect = rect(re, im)?;
            let grid = scan_grid(&operator(cfg)?, rect, *step)?;
            out.text.push_str(&grid_csv(&grid));
        }
        Command::Zeros { re, im } => {
            let zeros = locate_zeros(&operator(cfg)?, rect(re, im)?)?;
            out.text.push_str(&zeros_csv(&zeros));
        }
        Command::Delta => {
            let d = find_delta(&operator(cfg)?, cfg.tol)?;
            out.line(format!(
                "delta = {:.12} (lambda_max - 1 = {:.1e}, |Z(delta)| = {:.1e})",
                d.delta, d.eigen_residual, d.zeta_residual
            ));
        }
        Command::Orbits { system, bound } => {
            let sys = BranchSystem::build((*system).into(), params(cfg)?);
            out.line("word,len,trace,norm,det,primitive,n_mult");
            for c in sys.periodic_classes(cfg.max_word_len, *bound) {
                out.line(format!(
                    "{},{},{:?},{:?},{},{},{}",
                    sys.format_word(&c.word),
                    c.word_length,
                    c.trace,
                    c.norm,
                    c.det_sign,
                    c.primitive,
                    c.multiplier
                ));
            }
        }
        Command::Spectrum { system, bound } => {
            let sys = BranchSystem::build((*system).into(), params(cfg)?);
            out.line("norm,length,det,multiplicity");
            for e in sys.length_spectrum(*bound) {
                out.line(format!("{:?},{:?},{},{}", e.norm, e.length(), e.det_sign, e.multiplicity));
            }
        }
        Command::Check { suite } => check(cfg, suite, out)?,
        Command::ResidueRank { s0 } => {
            let r = residue_rank(params(cfg)?, *s0, cfg.basis)?;
            let blocks: Vec<String> = r.per_block.iter().map(|k| k.to_string()).collect();
            out.line(format!("s0 = {}: rank per parabolic block [{}], total {}", r.s0, blocks.join(", "), r.total));
        }
    }
    Ok(())
}

fn check(cfg: &RunConfig, suite: &Check, out: &mut Report) -> Result<(), Failure> {
    let p = params(cfg)?;
    match suite {
        Check::Inclusions { n_max, variant } => {
            let r = inclusion_report(p, *n_max, (*variant).into());
            for c in &r.checks {
                out.line(format!("{}: margin {:.6e}", c.condition, c.margin));
            }
            match r.first_failure() {
                Some(c) => Err(Failure::check(format!("inclusion violated: {} (margin {:.3e})", c.condition, c.margin))),
                None => {
                    out.line(format!("all {} inclusions hold", r.checks.len()));
                    Ok(())
                }
            }
        }
        Check::Euler { s, threshold } => {
            let op = operator(cfg)?;
            let mut worst: f64 = 0.0;
            for s in parse_list(s)? {
                let z = op.eval(s, Which::Z)?;
                let e = zeta_euler(p, s, Which::Z, cfg.max_word_len, cfg.k_max)?;
                let d = (z.value - e.value).norm();
                worst = worst.max(d);
                out.line(format!(
                    "s = {}: operator {} ± {:.1e}, Euler {} ± {:.1e}, difference {d:.1e}",
                    fmt_point(s),
                    fmt_complex(z.value, 12),
                    z.error_estimate,
                    fmt_complex(e.value, 12),
                    e.error_estimate
                ));
            }
            verdict(worst, *threshold, "|Z_operator - Z_euler|")
        }
        Check::Traces { s, threshold } => {
            let ctx = OperatorContext::new(p, cfg.basis)?;
            let method = cfg.method.method(cfg.tol);
            let mut worst: f64 = 0.0;
            for s in parse_list(s)? {
                let (plus, minus) = ctx.assemble_both(s, method)?;
                let full = ctx.assemble_full(s, method)?;
                for (m, which) in [(plus, Which::ZPlus), (minus, Which::ZMinus), (full, Which::Z)] {
                    let t = matrix_traces(&m.dense(), 4);
                    let o = orbit_traces_for(p, which, s, 4, 1e9);
                    for n in 0..4 {
                        let d = (t[n] - o[n]).norm();
                        worst = worst.max(d);
                        out.line(format!("s = {} {which} n = {}: difference {d:.1e}", fmt_point(s), n + 1));
                    }
                }
            }
            verdict(worst, *threshold, "|Tr M^n - orbit sum|")
        }
        Check::Factorization { s, threshold } => {
            let mut worst: f64 = 0.0;
            for s in parse_list(s)? {
                let z = zeta_euler(p, s, Which::Z, cfg.max_word_len, cfg.k_max)?.value;
                let zp = zeta_euler(p, s, Which::ZPlus, cfg.max_word_len, cfg.k_max)?.value;
                let zm = zeta_euler(p, s, Which::ZMinus, cfg.max_word_len, cfg.k_max)?.value;
                let d = (z - zp * zm).norm();
                worst = worst.max(d);
                out.line(format!(
                    "s = {}: Z {}, Z+ Z- {}, difference {d:.1e}",
                    fmt_point(s),
                    fmt_complex(z, 12),
                    fmt_complex(zp * zm, 12)
                ));
            }
            verdict(worst, *threshold, "|Z - Z+ Z-|")
        }
    }
}

fn verdict(worst: f64, threshold: f64, what: &str) -> Result<(), Failure> {
    if worst < threshold {
        Ok(())
    } else {
        Err(Failure::check(format!("{what} = {worst:.1e} exceeds {threshold:e}")))
    }
}

fn rect(re: &str, im: &str) -> Result<Rect, Failure> {
    let (a, b) = parse_range(re)?;
    let (c, d) = parse_range(im)?;
    Ok(Rect::new(a, b, c, d)?)
}

/// Decimals warranted by an absolute error; callers may print more.
fn digits(err: f64) -> usize {
    if err.is_finite() && err > 0.0 {
        ((-err.log10()).ceil() as i64 + 1).clamp(3, 15) as usize
    } else {
        15
    }
}

/// Shortest round-trip form of an input point.
fn fmt_point(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn fmt_complex(z: C64, decimals: usize) -> String {
    let mut s = String::new();
    if z.im == 0.0 {
        let _ = write!(s, "{:.*}", decimals, z.re);
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        let _ = write!(s, "{:.*}{sign}{:.*}i", decimals, z.re, decimals, z.im.abs());
    }
    s
}
