//! Command-line arguments.

use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::Value;
use crate::coarse::Entourage;
use crate::{Error, Result, DEFAULT_HORIZON};

use super::commands::{run, run_directive, Format, Options, Report};
use super::document::{parse, InstanceDocument};
use super::reader::Decl;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Lines,
}

/// Decide coarse-geometric predicates on finitely presented balleans.
///
/// Exit status: 0 when every verdict is TRUE, 1 when some verdict is FALSE,
/// 2 when some verdict is UNKNOWN, 3 on errors.
#[derive(Debug, Parser)]
#[command(name = "ballean", version)]
pub struct Cli {
    /// Search horizon for semi-decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_HORIZON)]
    horizon: u64,

    /// A single oscillation threshold p/q instead of the grid 1/2, 1/4, 1/8.
    #[arg(long, global = true)]
    eps: Option<String>,

    /// Instance file whose entourage declarations are registered as
    /// antidiscreteness witnesses.
    #[arg(long, global = true)]
    witnesses: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: FormatArg,

    /// Instance file whose declarations the command arguments may name.
    #[arg(long, global = true)]
    doc: Option<PathBuf>,

    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Run every directive of an instance file (stdin when absent or `-`).
    Run { file: Option<PathBuf> },
    /// Decide one predicate, e.g. `check asymptotically-disjoint Y Z`.
    Check {
        predicate: String,
        args: Vec<String>,
        /// The ambient ballean; the metric naturals by default.
        #[arg(long)]
        space: Option<String>,
    },
    /// Property report with citations.
    Infer { expr: String },
    /// A slowly oscillating separator of two sets, tabulated up to the horizon.
    Separate {
        y: String,
        z: String,
        #[arg(long)]
        space: Option<String>,
    },
    /// add, cov and cof of a bornology.
    Invariants { bornology: String },
    /// All coarse structures on n <= 4 points.
    EnumerateFinite { n: u64 },
    /// Rule-derived verdicts against the executable oracles; the built-in
    /// corpus when no expression is given.
    CrossValidate { exprs: Vec<String> },
}

fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Encoding(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Encoding(format!("{}: {e}", path.display())))
}

fn parse_eps(s: &str) -> Result<Value> {
    let v: Value = s
        .parse()
        .map_err(|_| Error::Domain(format!("--eps expects a rational p/q, got {s}")))?;
    if v == Value::from_integer(0) || v > Value::from_integer(1) {
        return Err(Error::Domain(format!("--eps must lie in (0, 1], got {s}")));
    }
    Ok(v)
}

fn witnesses(path: &Path) -> Result<Vec<Entourage>> {
    let doc = parse(&read_source(path)?)?;
    Ok(doc
        .declarations()
        .filter_map(|(_, d)| match d {
            Decl::Entourage(e) => Some(e.clone()),
            _ => None,
        })
        .collect())
}

impl Cli {
    fn options(&self) -> Result<Options> {
        Ok(Options {
            horizon: self.horizon,
            eps: self.eps.as_deref().map(parse_eps).transpose()?,
            witnesses: match &self.witnesses {
                Some(p) => witnesses(p)?,
                None => Vec::new(),
            },
            format: match self.format {
                FormatArg::Plain => Format::Plain,
                FormatArg::Lines => Format::Lines,
            },
        })
    }

    /// The directive text a subcommand stands for.
    fn directive_text(&self) -> Option<String> {
        let with_space = |mut parts: Vec<String>, space: &Option<String>| {
            if let Some(s) = space {
                parts.push(":space".into());
                parts.push(s.clone());
            }
            parts.join(" ")
        };
        Some(match &self.command {
            CliCommand::Run { .. } => return None,
            CliCommand::Check { predicate, args, space } => {
                let mut parts = vec!["check".to_string(), predicate.clone()];
                parts.extend(args.iter().cloned());
                format!("({})", with_space(parts, space))
            }
            CliCommand::Infer { expr } => format!("(infer {expr})"),
            CliCommand::Separate { y, z, space } => {
                format!("({})", with_space(vec!["separate".into(), y.clone(), z.clone()], space))
            }
            CliCommand::Invariants { bornology } => format!("(invariants {bornology})"),
            CliCommand::EnumerateFinite { n } => format!("(enumerate-finite {n})"),
            CliCommand::CrossValidate { exprs } if exprs.is_empty() => "(cross-validate corpus)".into(),
            CliCommand::CrossValidate { exprs } => format!("(cross-validate {})", exprs.join(" ")),
        })
    }

    /// Parses and runs, returning the report and its options.
    pub fn execute(&self) -> Result<(Report, Options)> {
        let opts = self.options()?;
        let report = match self.directive_text() {
            None => {
                let CliCommand::Run { file } = &self.command else { unreachable!() };
                let text = read_source(file.as_deref().unwrap_or(Path::new("-")))?;
                run(&parse(&text)?, &opts)
            }
            Some(directive) => {
                let mut text = match &self.doc {
                    Some(p) => read_source(p)?,
                    None => String::new(),
                };
                text.push('\n');
                text.push_str(&directive);
                let doc: InstanceDocument = parse(&text)?;
                let d = doc.directives().last().expect("the appended directive");
                Report {
                    sections: vec![run_directive(d, &opts)],
                }
            }
        };
        Ok((report, opts))
    }
}

/// Entry point shared by the binary and the tests: returns stdout text,
/// stderr text and the exit status.
pub fn main_with<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return if e.use_stderr() {
                (String::new(), e.to_string(), code)
            } else {
                (e.to_string(), String::new(), code)
            };
        }
    };
    match cli.execute() {
        Ok((report, opts)) => (report.render(opts.format), String::new(), report.exit_code()),
        Err(e) => (String::new(), format!("error: {e}\n"), 3),
    }
}
