use std::fmt::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use latsf::bounds::{bounds_table, format_pairs, format_table, REFERENCE_M, REFERENCE_N};
use latsf::discrete_sets::{find_hole, integral_convexity_violation, lnat_violation, mnat_violation};
use latsf::exact_geometry::{format_lattice, format_rational, parse_rational};
use latsf::minkowski::{budget_from_env, find_holes, minkowski_sum_with_budget};
use latsf::oracle::suites::{run_suite, Suite};
use latsf::shapley_folkman::{lnat_round, mnat_round, sf_round, Norm, RoundOptions, RoundingResult};
use latsf::{LatticeSet, RationalPoint};

use crate::setfile::SetFile;
use crate::{CliError, Output, EXIT_FAIL, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "latsf", version, about = "Exact Minkowski sums, discrete convexity checks and rounding on lattice sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every set file against a class; exit 1 if any fails.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum)]
        class: CheckClass,
    },
    /// Print the Minkowski sum of the set files as a set file.
    Sum {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also list the integer points of the hull missing from the sum.
        #[arg(long)]
        holes: bool,
    },
    /// Round a point of conv(S1 + ... + Sm) to a nearby point of the sum.
    Round {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Comma-separated exact coordinates, e.g. "1/2,3".
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value = "linf")]
        norm: NormArg,
        #[arg(long, value_enum, default_value = "ic")]
        class: RoundClass,
        /// Skip verifying that the summands belong to the class.
        #[arg(long)]
        trust: bool,
    },
    /// Print rounding bounds for lists of n and m, or the reference grid.
    Bounds {
        #[arg(long, value_delimiter = ',', requires = "m_list", conflicts_with = "reference_table")]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', requires = "n_list")]
        m_list: Vec<u64>,
        /// n in {2,3,4,8,12,16} by m in {1..5}, strictly smaller floor starred.
        #[arg(long)]
        reference_table: bool,
    },
    /// Run seeded and exhaustive property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        instances: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckClass {
    Ic,
    Mnat,
    Lnat,
    Holefree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundClass {
    Ic,
    Mnat,
    Lnat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Linf,
    L2,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Predicates,
    Rounding,
    Bounds,
    Closure,
    All,
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Check { files, class } => check(&files, class),
        Command::Sum { files, holes } => sum(&files, holes),
        Command::Round { files, x, norm, class, trust } => round(&files, &x, norm, class, trust),
        Command::Bounds { n_list, m_list, reference_table } => bounds(&n_list, &m_list, reference_table),
        Command::Verify { suite, seed, instances } => verify(suite, seed, instances),
    }
}

fn read_sets(files: &[PathBuf]) -> Result<Vec<LatticeSet>, CliError> {
    files.iter().map(|f| SetFile::read(f)?.to_set()).collect()
}

pub fn parse_point(text: &str) -> Result<RationalPoint, CliError> {
    let coords = text
        .split(',')
        .map(|c| parse_rational(c).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RationalPoint::new(coords))
}

pub fn check(files: &[PathBuf], class: CheckClass) -> Result<Output, CliError> {
    let sets = read_sets(files)?;
    let mut text = String::new();
    let mut failed = false;
    for (file, s) in files.iter().zip(&sets) {
        let witness = match class {
            CheckClass::Ic => integral_convexity_violation(s)?
                .map(|x| format!("{x} lies in conv(S) but not in conv(S ∩ N(x))")),
            CheckClass::Mnat => mnat_violation(s)?.map(|v| v.to_string()),
            CheckClass::Lnat => lnat_violation(s)?.map(|v| v.to_string()),
            CheckClass::Holefree => find_hole(s)?.map(|z| format!("hole {}", format_lattice(&z))),
        };
        match witness {
            None => writeln!(text, "{}: pass", file.display()),
            Some(w) => {
                failed = true;
                writeln!(text, "{}: fail, {w}", file.display())
            }
        }
        .expect("write to string");
    }
    Ok(Output { text, exit: if failed { EXIT_FAIL } else { EXIT_OK } })
}

pub fn sum(files: &[PathBuf], holes: bool) -> Result<Output, CliError> {
    let sets = read_sets(files)?;
    let w = minkowski_sum_with_budget(&sets, budget_from_env()?)?;
    let mut file = SetFile::from_set(w.result());
    if holes {
        file.holes = Some(find_holes(&w)?.points().to_vec());
    }
    Ok(Output { text: file.render(), exit: EXIT_OK })
}

pub fn round(files: &[PathBuf], x: &str, norm: NormArg, class: RoundClass, trust: bool) -> Result<Output, CliError> {
    let sets = read_sets(files)?;
    let x = parse_point(x)?;
    let opts = RoundOptions { verify_class: !trust, budget: budget_from_env()? };
    let norm = match norm {
        NormArg::Linf => Norm::Linf,
        NormArg::L2 => Norm::L2,
        NormArg::Best => Norm::Best,
    };
    let result = match class {
        RoundClass::Ic => sf_round(&sets, &x, norm, &opts)?,
        RoundClass::Lnat => lnat_round(&sets, &x, norm, &opts)?,
        RoundClass::Mnat if norm == Norm::Linf => mnat_round(&sets, &x, &opts)?,
        RoundClass::Mnat => {
            return Err(CliError::usage("the M-natural guarantee is an linf bound; use --norm linf or --class ic"))
        }
    };
    Ok(Output { text: render_rounding(&x, &result), exit: EXIT_OK })
}

pub fn render_rounding(x: &RationalPoint, r: &RoundingResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "x: {x}");
    let _ = writeln!(out, "z: {}", format_lattice(&r.z));
    let _ = writeln!(out, "distance_linf: {}", format_rational(&r.distance_linf));
    let _ = writeln!(out, "distance_l2_squared: {}", format_rational(&r.distance_l2_sq));
    let _ = writeln!(out, "bound: {}", r.bound);
    if let Some(k) = r.integral_bound {
        let _ = writeln!(out, "integral_bound: linf <= {k}");
    }
    let _ = writeln!(out, "guarantee: {}", r.guarantee);
    let _ = writeln!(out, "effective_summands: {}", r.effective_summands);
    if let Some(d) = &r.decomposition {
        let _ = writeln!(out, "fractional_summands: {}", d.fractional_count());
    }
    out
}

pub fn bounds(n_list: &[u64], m_list: &[u64], reference_table: bool) -> Result<Output, CliError> {
    let text = if reference_table {
        format_table(&bounds_table(&REFERENCE_N, &REFERENCE_M)?)
    } else if !n_list.is_empty() && !m_list.is_empty() {
        format_pairs(n_list, m_list)?
    } else {
        return Err(CliError::usage("pass --n-list and --m-list, or --reference-table"));
    };
    Ok(Output { text, exit: EXIT_OK })
}

pub fn verify(suite: SuiteArg, seed: u64, instances: u64) -> Result<Output, CliError> {
    let suite = match suite {
        SuiteArg::Predicates => Suite::Predicates,
        SuiteArg::Rounding => Suite::Rounding,
        SuiteArg::Bounds => Suite::Bounds,
        SuiteArg::Closure => Suite::Closure,
        SuiteArg::All => Suite::All,
    };
    let reports = run_suite(suite, seed, instances)?;
    let text: String = reports.iter().map(ToString::to_string).collect();
    let exit = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_FAIL };
    Ok(Output { text, exit })
}
