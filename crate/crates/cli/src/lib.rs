//! `certquad` command line: certificates, mean inequalities and the property
//! suites, as text, JSON or CSV.

pub mod commands;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use certquad::certify::FamilyChoice;
use certquad::means::PropositionGroup;
use certquad::CertError;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{parse_choice, CertifyArgs, Choice, MeansArgs};
use report::{real, Report};
use suite::SuiteArgs;

pub const EXIT_OK: u8 = 0;
pub const EXIT_SUITE_FAILURE: u8 = 1;
pub const EXIT_NO_THEOREM: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DOMAIN: u8 = 65;
pub const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(
    name = "certquad",
    version,
    about = "Companion-rule quadrature with certified error bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Emit the JSON report
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV rows: case_id, theorem, a, b, x, p, lhs, rhs, margin, status
    #[arg(long)]
    pub csv: bool,
    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify the mean value and integral of a catalog function
    Certify {
        /// Catalog spec, e.g. `power:2`, `recip`, `poly:1,-2,0.5`
        #[arg(long = "fn", value_name = "SPEC")]
        func: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// Evaluation point in [a, (a+b)/2], `auto` or `quarter`
        #[arg(long, value_parser = parse_choice, allow_negative_numbers = true)]
        x: Option<Choice>,
        /// Hölder exponent in (1, 1024] or `auto`
        #[arg(long, value_parser = parse_choice)]
        p: Option<Choice>,
        #[arg(long, value_enum, default_value = "auto")]
        family: FamilyArg,
        /// Number of equal cells
        #[arg(long, default_value_t = 1)]
        cells: usize,
        /// Intervals of the shape-check grid
        #[arg(long, default_value_t = certquad::funcat::DEFAULT_SHAPE_GRID)]
        shape_grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check the mean inequalities
    Means {
        #[arg(long, value_enum)]
        prop: PropArg,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// Order of the generalized logarithmic mean
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        n: i32,
        /// Hölder exponent
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run the property suites
    Suite {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Points of the x grid over [a, (a+b)/2]
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum FamilyArg {
    Auto,
    T21,
    T22,
    T23,
}

impl From<FamilyArg> for FamilyChoice {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Auto => FamilyChoice::Auto,
            FamilyArg::T21 => FamilyChoice::ConvexAbs,
            FamilyArg::T22 => FamilyChoice::ConvexQ,
            FamilyArg::T23 => FamilyChoice::ConcaveQ,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum PropArg {
    P31,
    P32,
    P33,
    P34,
    All,
}

impl PropArg {
    fn groups(self) -> Vec<PropositionGroup> {
        match self {
            PropArg::P31 => vec![PropositionGroup::P31],
            PropArg::P32 => vec![PropositionGroup::P32],
            PropArg::P33 => vec![PropositionGroup::P33],
            PropArg::P34 => vec![PropositionGroup::P34],
            PropArg::All => vec![
                PropositionGroup::P31,
                PropositionGroup::P32,
                PropositionGroup::P33,
                PropositionGroup::P34,
            ],
        }
    }
}

pub fn exit_code(e: &CertError) -> u8 {
    match e {
        CertError::NoApplicableTheorem
        | CertError::ShapeHypothesisUnverified { .. }
        | CertError::NoFeasibleP => EXIT_NO_THEOREM,
        CertError::DomainViolation { .. }
        | CertError::NonFiniteSample { .. }
        | CertError::NonPositiveArgument(..)
        | CertError::OracleNonConvergence { .. } => EXIT_DOMAIN,
        CertError::UnknownCatalogName(_)
        | CertError::InvalidParams { .. }
        | CertError::InvalidInterval { .. }
        | CertError::PointOutOfRange { .. }
        | CertError::InvalidHolder(_)
        | CertError::InvalidOrder(_)
        | CertError::InvalidRequest(_) => EXIT_USAGE,
    }
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    let show = |v: &serde_json::Value| match v {
        serde_json::Value::Number(n) if n.is_f64() => real(n.as_f64().unwrap_or(f64::NAN)),
        serde_json::Value::String(t) => t.clone(),
        serde_json::Value::Null => "-".to_string(),
        other => other.to_string(),
    };
    match r.command.as_str() {
        "suite" => {
            for key in ["cases", "pass", "fail", "flagged"] {
                s += &format!("{key:<8} {}\n", show(&r.outputs[key]));
            }
            if let Some(serde_json::Value::Object(groups)) = r.outputs.get("groups") {
                for (name, counts) in groups {
                    s += &format!(
                        "  {name:<16} pass {:>5}  fail {:>3}  flagged {:>4}\n",
                        counts["pass"], counts["fail"], counts["flagged"]
                    );
                }
            }
            let mut flagged = std::collections::BTreeMap::<&str, usize>::new();
            for c in r.cases() {
                match c.status {
                    report::Status::Pass => {}
                    report::Status::Flagged => *flagged.entry(c.theorem.as_str()).or_default() += 1,
                    report::Status::Fail => {
                        s += &format!(
                            "fail     {}  lhs {}  rhs {}\n",
                            c.case_id,
                            real(c.lhs),
                            real(c.rhs)
                        )
                    }
                }
            }
            for (theorem, n) in flagged {
                s += &format!("flagged  {theorem}: {n} case(s), reported only\n");
            }
        }
        "means" => {
            s += &format!(
                "{:<18} {:>24} {:>24} {:>24}  {}\n",
                "reading", "lhs", "rhs", "margin", "status"
            );
            for c in r.cases() {
                s += &format!(
                    "{:<18} {:>24} {:>24} {:>24}  {}\n",
                    c.case_id,
                    real(c.lhs),
                    real(c.rhs),
                    real(c.margin),
                    c.status.as_str()
                );
            }
        }
        _ => {
            for (k, v) in &r.outputs {
                if k != "certificate" {
                    s += &format!("{k:<17} {}\n", show(v));
                }
            }
        }
    }
    s
}

fn emit(r: &Report, output: &Output) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    if output.json {
        sink.write_all(r.to_json().as_bytes())?;
    } else if output.csv {
        r.write_csv(&mut sink).map_err(io::Error::other)?;
    } else {
        sink.write_all(text(r).as_bytes())?;
    }
    sink.flush()
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let (result, output) = match cli.command {
        Command::Certify {
            func,
            a,
            b,
            x,
            p,
            family,
            cells,
            shape_grid,
            output,
        } => (
            commands::cmd_certify(&CertifyArgs {
                func,
                a,
                b,
                x,
                p,
                family: family.into(),
                cells,
                grid: shape_grid,
            }),
            output,
        ),
        Command::Means {
            prop,
            a,
            b,
            n,
            p,
            output,
        } => (
            commands::cmd_means(&MeansArgs {
                groups: prop.groups(),
                a,
                b,
                n,
                p,
            }),
            output,
        ),
        Command::Suite { seed, grid, output } => {
            (suite::cmd_suite(&SuiteArgs { seed, grid }), output)
        }
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&report, &output) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::from(if report.failures() > 0 {
        EXIT_SUITE_FAILURE
    } else {
        EXIT_OK
    })
}
