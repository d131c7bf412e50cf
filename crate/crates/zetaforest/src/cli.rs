//! Command-line front door.
//!
//! Verbs: `check` (cone diagnostics), `reduce` (exact MZV combination),
//! `eval` (reduce + numerical verification), `mt` (Mordell-Tornheim
//! reduction). Exit codes are a total function of the outcome class:
//! 0 success, 1 parse/usage error, 2 pipeline rejection, 3 numeric mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::forests::{parse_nat_forest, render_forest, NatForest};
use crate::mordell_tornheim::{mt_closed_form, mt_reduce, MtIndex};
use crate::numeric::{cross_check, tzv_numeric, CrossCheckReport};
use crate::reduction::{reduce_forest, MzvCombination};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_NUMERIC_MISMATCH: i32 = 3;

#[derive(Parser)]
#[command(
    name = "zetaforest",
    about = "Reduce conical, tree and Mordell-Tornheim zeta values to exact MZV combinations",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Diagnose a cone: unimodularity, row poset, Hasse matrix, tree-likeness.
    Check {
        /// Path to a cone JSON file {"matrix": [[...]], "exponents": [...]}.
        #[arg(long)]
        cone: PathBuf,
        /// Relabel columns to the poset's path matrix before checking.
        #[arg(long)]
        align: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reduce a cone or an inline forest to its exact MZV combination.
    Reduce {
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Inline forest, e.g. "2(1,1)" or "2(1);3".
        #[arg(long)]
        forest: Option<String>,
        #[arg(long)]
        align: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reduce, then verify the result against the truncated series oracle.
    Eval {
        #[arg(long)]
        cone: Option<PathBuf>,
        #[arg(long)]
        forest: Option<String>,
        #[arg(long)]
        align: bool,
        /// Truncation for the tree-series target.
        #[arg(long = "N", default_value_t = crate::numeric::DEFAULT_TREE_TRUNCATION)]
        n: usize,
        #[arg(long, default_value_t = crate::numeric::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reduce a Mordell-Tornheim zeta value MT(args | s).
    Mt {
        /// Comma-separated nonnegative integers, e.g. --args 1,1
        #[arg(long, value_delimiter = ',', required = true)]
        args: Vec<u32>,
        #[arg(long)]
        s: u32,
        /// Use the closed-form evaluation instead of the recursion.
        #[arg(long)]
        closed_form: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Runs the CLI on the given argv (including the program name) and returns
/// the exit code plus the rendered output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successful output, not errors.
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let outcome = match cli.command {
        Command::Check {
            cone,
            align,
            format,
        } => check(&cone, align, format),
        Command::Reduce {
            cone,
            forest,
            align,
            format,
        } => reduce(cone.as_deref(), forest.as_deref(), align, format),
        Command::Eval {
            cone,
            forest,
            align,
            n,
            tol,
            format,
        } => eval(cone.as_deref(), forest.as_deref(), align, n, tol, format),
        Command::Mt {
            args,
            s,
            closed_form,
            format,
        } => mt(args, s, closed_form, format),
    };
    match outcome {
        Ok(pair) => pair,
        Err(e) => (classify(&e), format!("error: {e}")),
    }
}

fn classify(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Invalid(_) => EXIT_PARSE,
        _ => EXIT_REJECTED,
    }
}

fn load_cone(path: &Path) -> Result<Cone> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        position: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        position: 0,
        message: format!("invalid cone JSON in {}: {e}", path.display()),
    })
}

/// Resolves the (cone, forest) input pair: exactly one of `--cone`/`--forest`.
fn resolve_forest(
    cone: Option<&Path>,
    forest: Option<&str>,
    align: bool,
) -> Result<(Option<Cone>, NatForest)> {
    match (cone, forest) {
        (Some(path), None) => {
            let loaded = load_cone(path)?;
            let effective = if align {
                loaded.align_columns()?.unwrap_or_else(|| loaded.clone())
            } else {
                loaded.clone()
            };
            let forest = effective.to_forest()?;
            Ok((Some(loaded), forest))
        }
        (None, Some(text)) => Ok((None, parse_nat_forest(text)?)),
        _ => Err(Error::Invalid(
            "exactly one of --cone or --forest is required".into(),
        )),
    }
}

fn bool_word(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn matrix_lines(out: &mut String, rows: impl Iterator<Item = Vec<i64>>) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "[{}]", cells.join(" "));
    }
}

fn check(path: &Path, align: bool, format: Format) -> Result<(i32, String)> {
    let loaded = load_cone(path)?;
    let aligned = if align { loaded.align_columns()? } else { None };
    let cone = aligned.as_ref().unwrap_or(&loaded);

    let unimodular = cone.is_unimodular();
    let poset = cone.poset_relation();
    let verdict = cone.tree_like_verdict();
    let tree_like = verdict.is_ok();
    let forest = if tree_like {
        cone.to_forest().ok()
    } else {
        None
    };
    let reason = verdict.as_ref().err().and_then(Error::reason_code);

    let code = if tree_like { EXIT_OK } else { EXIT_REJECTED };
    match format {
        Format::Json => {
            let (pairs, hasse, blocks) = match &poset {
                Ok(p) => (
                    Some(
                        p.strict_pairs()
                            .into_iter()
                            .map(|(i, j)| vec![i + 1, j + 1])
                            .collect::<Vec<_>>(),
                    ),
                    Some(
                        p.covers()
                            .iter()
                            .map(|row| row.iter().map(|&b| u8::from(b)).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    ),
                    Some(cone.connected_blocks()?.len()),
                ),
                Err(_) => (None, None, None),
            };
            let value = json!({
                "dimension": cone.dimension(),
                "unimodular": unimodular,
                "aligned": aligned.is_some(),
                "poset": pairs,
                "hasse": hasse,
                "tree_like": tree_like,
                "reason": reason.map(|r| r.to_string()),
                "forest": forest.as_ref().map(render_forest),
                "blocks": blocks,
            });
            Ok((code, value.to_string()))
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "dimension: {}", cone.dimension());
            if aligned.is_some() {
                let _ = writeln!(out, "aligned matrix:");
                matrix_lines(&mut out, cone.matrix().iter().cloned());
            }
            let _ = writeln!(out, "unimodular: {}", bool_word(unimodular));
            match &poset {
                Ok(p) => {
                    let pairs = p.strict_pairs();
                    if pairs.is_empty() {
                        let _ = writeln!(out, "poset: (discrete)");
                    } else {
                        let rendered: Vec<String> = pairs
                            .iter()
                            .map(|(i, j)| format!("{}<={}", i + 1, j + 1))
                            .collect();
                        let _ = writeln!(out, "poset: {}", rendered.join(" "));
                    }
                    let _ = writeln!(out, "hasse matrix:");
                    matrix_lines(
                        &mut out,
                        p.covers()
                            .iter()
                            .map(|row| row.iter().map(|&b| i64::from(b)).collect()),
                    );
                    match &verdict {
                        Ok(()) => {
                            let _ = writeln!(out, "tree-like: yes");
                        }
                        Err(e) => {
                            let _ = writeln!(out, "tree-like: no ({e})");
                        }
                    }
                    if let Some(f) = &forest {
                        let rendered = render_forest(f);
                        let _ = writeln!(
                            out,
                            "forest: {}",
                            if rendered.is_empty() {
                                "(empty)"
                            } else {
                                &rendered
                            }
                        );
                    }
                    let _ = writeln!(out, "blocks: {}", cone.connected_blocks()?.len());
                }
                Err(e) => {
                    let _ = writeln!(out, "tree-like: no ({e})");
                }
            }
            Ok((code, out.trim_end().to_string()))
        }
    }
}

fn render_combination(m: &MzvCombination, format: Format) -> String {
    match format {
        Format::Text => m.to_string(),
        Format::Json => m.to_json_string(),
    }
}

fn reduce(
    cone: Option<&Path>,
    forest: Option<&str>,
    align: bool,
    format: Format,
) -> Result<(i32, String)> {
    let (_, forest) = resolve_forest(cone, forest, align)?;
    let m = reduce_forest(&forest)?;
    Ok((EXIT_OK, render_combination(&m, format)))
}

fn eval(
    cone: Option<&Path>,
    forest: Option<&str>,
    align: bool,
    n: usize,
    tol: f64,
    format: Format,
) -> Result<(i32, String)> {
    if n < 2 {
        return Err(Error::Invalid(format!("--N must be >= 2, got {n}")));
    }
    if tol <= 0.0 {
        return Err(Error::Invalid(format!("--tol must be > 0, got {tol}")));
    }
    let (_, forest) = resolve_forest(cone, forest, align)?;
    let m = reduce_forest(&forest)?;
    let target = tzv_numeric(&forest, n)?;
    let report = cross_check(&m, &target, tol)?;
    let code = if report.pass {
        EXIT_OK
    } else {
        EXIT_NUMERIC_MISMATCH
    };
    Ok((code, render_report(&forest, &m, &report, format)))
}

fn render_report(
    forest: &NatForest,
    m: &MzvCombination,
    report: &CrossCheckReport,
    format: Format,
) -> String {
    match format {
        Format::Text => {
            format!(
                "forest: {}\nreduction: {m}\n{report}",
                render_forest(forest)
            )
        }
        Format::Json => json!({
            "forest": render_forest(forest),
            "combination": m.to_json(),
            "symbolic": {
                "value": report.symbolic.value,
                "tail_estimate": report.symbolic.tail_estimate,
                "truncation": report.symbolic.truncation,
            },
            "target": {
                "value": report.target.value,
                "tail_estimate": report.target.tail_estimate,
                "truncation": report.target.truncation,
            },
            "tol": report.tolerance,
            "gap": report.gap,
            "budget": report.budget,
            "pass": report.pass,
        })
        .to_string(),
    }
}

fn mt(args: Vec<u32>, s: u32, closed_form: bool, format: Format) -> Result<(i32, String)> {
    let idx = MtIndex::new(args, s)?;
    let m = if closed_form {
        mt_closed_form(&idx)?
    } else {
        mt_reduce(&idx)?
    };
    Ok((EXIT_OK, render_combination(&m, format)))
}
