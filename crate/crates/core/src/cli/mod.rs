//! The `varkit` command line.
//!
//! Exit codes: 0 success (every requested verdict BOUNDED), 1 invalid input,
//! 2 some verdict DIVERGENT, 3 some verdict INCONCLUSIVE (none DIVERGENT),
//! 4 a query left the trusted region of a truncated variety.

mod commands;
mod config;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;

pub use config::Settings;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_DIVERGENT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "varkit",
    version,
    about = "Divided differences, counting functions and growth diagnostics for multiplicity varieties"
)]
struct Cli {
    /// Plain-text `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one of the canonical test varieties.
    Generate(GenerateArgs),
    /// Operations on variety files.
    #[command(subcommand)]
    Variety(VarietyCommand),
    /// Fit the growth conditions and report verdicts.
    Check(CheckArgs),
    /// Compute the divided-difference table of a value sequence.
    Divdiff(DivdiffArgs),
    /// Evaluate F, dbarF, U, V or W on a grid.
    Field(FieldArgs),
    /// Find the smallest power of 2 making V + alpha W discretely subharmonic.
    FitAlpha(FitAlphaArgs),
}

#[derive(Debug, Subcommand)]
enum VarietyCommand {
    /// Validate a variety file and summarize it.
    Check(VarietyCheckArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// pi_lattice, integers or geometric.
    kind: Option<GenerateKind>,
    #[arg(long)]
    n_max: Option<u32>,
    /// `const:k` or `index` (m_j = j).
    #[arg(long)]
    mult: Option<crate::generate::MultRule>,
    /// Ratio of the geometric variety: a number or `sqrt:x`.
    #[arg(long)]
    ratio: Option<crate::generate::Ratio>,
    /// Include the origin in the integers variety.
    #[arg(long)]
    origin: bool,
    #[arg(long)]
    bits: Option<u32>,
    /// Output file (standard output when absent).
    #[arg(long, short)]
    output: Option<String>,
}

#[derive(Debug, Args)]
struct VarietyCheckArgs {
    variety: Option<String>,
    #[arg(long)]
    bits: Option<u32>,
    /// Write the validated, sorted variety here.
    #[arg(long)]
    sorted: Option<String>,
    #[arg(long)]
    report: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    variety: Option<String>,
    /// Value file `j l re im`; enables conditions 3 and the A_p(V) test.
    #[arg(long)]
    values: Option<String>,
    /// `power:a`, `logpoly` or `exptype`.
    #[arg(long)]
    weight: Option<crate::Weight>,
    /// Comma-separated subset of 1,2,3.
    #[arg(long)]
    conditions: Option<Conditions>,
    /// Inclusive octave range `a..b`.
    #[arg(long)]
    octaves: Option<crate::growth::Octaves>,
    /// Octave base R > 1.
    #[arg(long)]
    base: Option<f64>,
    #[arg(long)]
    bits: Option<u32>,
    /// recursion or tableau.
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    report: Option<String>,
}

#[derive(Debug, Args)]
struct DivdiffArgs {
    variety: Option<String>,
    values: Option<String>,
    /// Number of points (all when absent).
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long, short)]
    output: Option<String>,
}

#[derive(Debug, Args)]
struct FieldArgs {
    field: Option<FieldKind>,
    variety: Option<String>,
    /// Needed for F and dbarF.
    values: Option<String>,
    /// `polar:RINGS:SECTORS[:rmax]` or `cart:NX:NY[:extent]`.
    #[arg(long)]
    grid: Option<crate::smoothing::GridSpec>,
    /// A number, or `fit` to run the alpha fit on the same grid.
    #[arg(long)]
    alpha: Option<AlphaChoice>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    method: Option<Method>,
    /// CSV output `re,im,value` (`re,im,value_re,value_im` for F, dbarF).
    #[arg(long, short)]
    output: Option<String>,
    #[arg(long)]
    report: Option<String>,
}

#[derive(Debug, Args)]
struct FitAlphaArgs {
    variety: Option<String>,
    #[arg(long)]
    grid: Option<crate::smoothing::GridSpec>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    report: Option<String>,
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim() {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::invalid(format!(
                        "`{other}` is not one of {}",
                        [$($text),+].join(", ")
                    ))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($name::$variant => $text),+ })
            }
        }
    };
}

keyword_enum!(GenerateKind {
    PiLattice => "pi_lattice",
    Integers => "integers",
    Geometric => "geometric",
});

keyword_enum!(Method {
    Recursion => "recursion",
    Tableau => "tableau",
});

keyword_enum!(FieldKind {
    F => "F",
    DbarF => "dbarF",
    U => "U",
    V => "V",
    W => "W",
});

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    Fit,
    Value(f64),
}

impl FromStr for AlphaChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "fit" => Ok(AlphaChoice::Fit),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|a| a.is_finite() && *a >= 0.0)
                .map(AlphaChoice::Value)
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "alpha must be `fit` or a non-negative number, got `{t}`"
                    ))
                }),
        }
    }
}

impl fmt::Display for AlphaChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaChoice::Fit => f.write_str("fit"),
            AlphaChoice::Value(a) => write!(f, "{a}"),
        }
    }
}

/// A non-empty set drawn from the conditions 1, 2 and 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditions(pub Vec<u8>);

impl FromStr for Conditions {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let c: u8 = match part.trim() {
                "1" => 1,
                "2" => 2,
                "3" => 3,
                other => {
                    return Err(Error::invalid(format!(
                        "unknown condition `{other}`; use 1, 2 or 3"
                    )))
                }
            };
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out.sort_unstable();
        Ok(Conditions(out))
    }
}

impl fmt::Display for Conditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Truncation { .. } => EXIT_TRUNCATION,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INVALID,
            };
        }
    };
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
