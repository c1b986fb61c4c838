//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{StratifiedAlgebra, ValidationOptions};
use crate::derivations::{conf_derivations, iso_derivations, strata_preserving_derivations};
use crate::iface::catalog::{catalog, Fixture};
use crate::iface::format::AlgebraFile;
use crate::iface::report::{
    to_json, CatalogLine, CatalogListing, ClassifyReport, DerivationsReport, ErrorReport, MetricReport,
    ProlongReport, ValidateReport,
};
use crate::metric::InnerProductAssignment;
use crate::prolong::{prolong, G0Choice, ProlongError, DEFAULT_MAX_DEGREE};
use crate::structure::{classify_with_cap, StructureError};

pub const EXIT_OK: i32 = 0;
/// Invalid algebra, malformed file or unreadable input.
pub const EXIT_INVALID: i32 = 1;
/// The prolongation did not terminate within the degree cap.
pub const EXIT_TRUNCATED: i32 = 2;
/// Bad command line.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Der,
    Iso,
    Conf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum G0Arg {
    Conf,
    Der,
}

/// Carnot algebras, their Tanaka prolongations and the rigid/Iwasawa classification.
#[derive(Debug, Parser)]
#[command(name = "carnot", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Accept algebras of total dimension 1 or 2.
    #[arg(long, global = true)]
    pub allow_small_dimension: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the stratified Lie algebra axioms.
    Validate { file: PathBuf },
    /// Print the canonical Gram matrix of every layer.
    Metric { file: PathBuf },
    /// Compute a derivation algebra.
    Derivations {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Compute the Tanaka prolongation.
    Prolong {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "conf")]
        g0: G0Arg,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Classify as RIGID or IWASAWA.
    Classify { file: PathBuf },
    /// Built-in fixtures.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// List fixtures and their expected verdicts.
    List,
    /// Print a fixture as an algebra file, e.g. `heisenberg(1)`.
    Emit { name: String },
}

struct Output<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    fn emit<T: serde::Serialize>(&mut self, command: &'static str, body: &T, text: String) {
        let s = match self.format {
            Format::Json => to_json(command, body),
            Format::Text => text,
        };
        let _ = self.out.write_all(s.as_bytes());
    }

    fn error(&mut self, command: &'static str, error: String, location: Option<String>) {
        let text = match &location {
            Some(l) => format!("error: {l}: {error}\n"),
            None => format!("error: {error}\n"),
        };
        self.emit(command, &ErrorReport { error, location }, text);
    }
}

/// Parses `args` (including the program name) and runs one command,
/// writing the report to `out` and usage errors to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let opts = ValidationOptions {
        allow_small_dimension: cli.allow_small_dimension,
    };
    let mut o = Output {
        format: cli.format,
        out,
    };
    match cli.command {
        Command::Validate { file } => {
            let (name, alg) = match read(&file, &mut o, "validate") {
                Ok(x) => x,
                Err(code) => return code,
            };
            let report = alg.validate(opts);
            let r = ValidateReport::new(&name, &alg, &report);
            let text = r.text();
            o.emit("validate", &r, text);
            if report.is_valid() {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
        Command::Metric { file } => {
            let (name, alg) = match load(&file, &mut o, "metric", opts) {
                Ok(x) => x,
                Err(code) => return code,
            };
            match InnerProductAssignment::canonical(&alg) {
                Ok(m) => {
                    let r = MetricReport::new(&name, &alg, &m);
                    let text = r.text();
                    o.emit("metric", &r, text);
                    EXIT_OK
                }
                Err(e) => {
                    o.error("metric", e.to_string(), None);
                    EXIT_INVALID
                }
            }
        }
        Command::Derivations { file, kind } => {
            let (name, alg) = match load(&file, &mut o, "derivations", opts) {
                Ok(x) => x,
                Err(code) => return code,
            };
            let space = match kind {
                KindArg::Der => strata_preserving_derivations(&alg),
                KindArg::Iso | KindArg::Conf => {
                    let m = match InnerProductAssignment::canonical(&alg) {
                        Ok(m) => m,
                        Err(e) => {
                            o.error("derivations", e.to_string(), None);
                            return EXIT_INVALID;
                        }
                    };
                    if kind == KindArg::Iso {
                        iso_derivations(&alg, &m)
                    } else {
                        conf_derivations(&alg, &m)
                    }
                }
            };
            let r = DerivationsReport::new(&name, &space);
            let text = r.text();
            o.emit("derivations", &r, text);
            EXIT_OK
        }
        Command::Prolong { file, g0, max_degree } => {
            let (name, alg) = match load(&file, &mut o, "prolong", opts) {
                Ok(x) => x,
                Err(code) => return code,
            };
            let choice = match g0 {
                G0Arg::Conf => G0Choice::Conformal,
                G0Arg::Der => G0Choice::StrataPreserving,
            };
            match prolong(&alg, &choice, max_degree) {
                Ok(p) => {
                    let r = ProlongReport::new(&name, &p);
                    let text = r.text();
                    o.emit("prolong", &r, text);
                    if p.is_truncated() {
                        EXIT_TRUNCATED
                    } else {
                        EXIT_OK
                    }
                }
                Err(e) => {
                    o.error("prolong", e.to_string(), None);
                    EXIT_INVALID
                }
            }
        }
        Command::Classify { file } => {
            let (name, alg) = match load(&file, &mut o, "classify", opts) {
                Ok(x) => x,
                Err(code) => return code,
            };
            match classify_with_cap(&alg, DEFAULT_MAX_DEGREE) {
                Ok(report) => {
                    let r = ClassifyReport { name, report };
                    let text = r.text();
                    o.emit("classify", &r, text);
                    EXIT_OK
                }
                Err(StructureError::Prolong(e @ ProlongError::DegreeCapExceeded(_))) => {
                    o.error("classify", e.to_string(), None);
                    EXIT_TRUNCATED
                }
                Err(e) => {
                    o.error("classify", e.to_string(), None);
                    EXIT_INVALID
                }
            }
        }
        Command::Catalog { action } => match action {
            CatalogCommand::List => {
                let listing = CatalogListing {
                    entries: catalog()
                        .into_iter()
                        .map(|f| CatalogLine {
                            name: f.to_string(),
                            layers: f.build().layer_dims().to_vec(),
                            expected: f.expected(),
                        })
                        .collect(),
                };
                let text = listing.text();
                o.emit("catalog", &listing, text);
                EXIT_OK
            }
            CatalogCommand::Emit { name } => match name.parse::<Fixture>() {
                Ok(f) => {
                    // an algebra file, not a report, in either format
                    let file = AlgebraFile::from_algebra(&f.to_string(), &f.build());
                    let _ = o.out.write_all(file.to_json().as_bytes());
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_USAGE
                }
            },
        },
    }
}

/// Reads and builds the algebra without validating it.
fn read(path: &Path, o: &mut Output<'_>, command: &'static str) -> Result<(String, StratifiedAlgebra), i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            o.error(command, format!("cannot read {}: {e}", path.display()), None);
            return Err(EXIT_INVALID);
        }
    };
    let parsed = AlgebraFile::parse(&text).and_then(|f| f.to_algebra().map(|a| (f.name, a)));
    parsed.map_err(|e| {
        o.error(
            command,
            e.message,
            Some(format!("{}: {}", path.display(), e.location)),
        );
        EXIT_INVALID
    })
}

/// Reads, builds and validates; an invalid algebra prints its validation
/// report and stops the command.
fn load(
    path: &Path,
    o: &mut Output<'_>,
    command: &'static str,
    opts: ValidationOptions,
) -> Result<(String, StratifiedAlgebra), i32> {
    let (name, alg) = read(path, o, command)?;
    let report = alg.validate(opts);
    if !report.is_valid() {
        let r = ValidateReport::new(&name, &alg, &report);
        let text = r.text();
        o.emit("validate", &r, text);
        return Err(EXIT_INVALID);
    }
    Ok((name, alg))
}
