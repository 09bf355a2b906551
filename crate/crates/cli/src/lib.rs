//! The `kspace` command line: parse, analyze and compare companionship
//! trees.  `run` is the whole CLI as a function so tests can capture
//! output byte-for-byte.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use kspace_core::group::gramain::{gramain_pairing, gramain_report};
use kspace_core::group::h1::{flat_presentation, h1, h1_verified, pi1_structure, render_extension};
use kspace_core::io::dsl::{parse_knot, print_knot};
use kspace_core::io::serial;
use kspace_core::knot::{normalize, validate, Catalog, CatalogEntry, KnotTree};
use kspace_core::symmetry::{canonical_form, classes_equal, compute_af, is_invertible};
use kspace_core::{dimension, homotopy_type, render, simplify, GroupError, KnotError, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser)]
#[command(
    name = "kspace",
    about = "Homotopy types of long-knot spaces from companionship trees",
    disable_help_subcommand = true
)]
struct Cli {
    /// Structured JSON output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FileArg {
    /// Knot file in the DSL (`-` reads standard input).
    file: String,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a knot file and echo its canonical form.
    Parse(FileArg),
    /// Homotopy-type expression of the component.
    Type {
        #[command(flatten)]
        file: FileArg,
        /// Print the raw expression without algebraic simplification.
        #[arg(long)]
        no_simplify: bool,
    },
    /// Fundamental-group structure.
    Pi1 {
        #[command(flatten)]
        file: FileArg,
        /// Also print a flat presentation when one is determined.
        #[arg(long)]
        presentation: bool,
    },
    /// First homology of the component.
    H1 {
        #[command(flatten)]
        file: FileArg,
        /// Cross-check the reduction against the naive oracle (plus a
        /// deterministic 500-matrix sweep).
        #[arg(long)]
        verify: bool,
    },
    /// Gramain pairing of the component.
    Gramain(FileArg),
    /// Invertibility of the knot class.
    Invertible(FileArg),
    /// Orders of the twisting group A_f at each splice vertex.
    Af(FileArg),
    /// Dimension of the component's flat-manifold model.
    Dim(FileArg),
    /// Class equality of two knots.
    Eq { file1: String, file2: String },
    /// List catalog entries, or show one.
    Catalog { name: Option<String> },
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: String) -> Outcome {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

impl From<KnotError> for Failure {
    fn from(e: KnotError) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Failure {
        Failure {
            code: EXIT_COMPUTE,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

/// Runs the CLI on explicit arguments (excluding the program name) and an
/// optional standard-input payload.
pub fn run<I, S>(args: I, stdin: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv: Vec<String> = vec!["kspace".into()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout with success
            if e.use_stderr() {
                return Outcome::fail(EXIT_USAGE, e.to_string());
            }
            return Outcome::ok(e.to_string());
        }
    };
    match dispatch(&cli, stdin) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(f) => Outcome::fail(f.code, f.message),
    }
}

fn read_source(path: &str, stdin: Option<&str>) -> Result<String, Failure> {
    if path == "-" {
        if let Some(s) = stdin {
            return Ok(s.to_string());
        }
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    Ok(std::fs::read_to_string(PathBuf::from(path))?)
}

fn load(path: &str, stdin: Option<&str>) -> Result<KnotTree, Failure> {
    let src = read_source(path, stdin)?;
    let tree = parse_knot(&src)?;
    Ok(normalize(&tree)?)
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string(&value).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, stdin: Option<&str>) -> Result<String, Failure> {
    match &cli.command {
        Command::Parse(f) => {
            let src = read_source(&f.file, stdin)?;
            let tree = parse_knot(&src)?;
            let report = validate(&tree);
            let tree = normalize(&tree)?;
            let canon = canonical_form(&tree);
            if cli.json {
                let mut doc = serial::serialize_knot(&canon);
                doc["canonical_text"] = serde_json::Value::String(print_knot(&canon));
                doc["flattened"] = serde_json::Value::Bool(!report.is_valid());
                Ok(json_line(doc))
            } else {
                Ok(format!("{}\n", print_knot(&canon)))
            }
        }
        Command::Type { file, no_simplify } => {
            let tree = load(&file.file, stdin)?;
            let e = homotopy_type(&tree)?;
            let e = if *no_simplify { e } else { simplify(&e) };
            if cli.json {
                Ok(json_line(serial::serialize_expr(&e)))
            } else {
                Ok(format!("{}\n", render(&e)))
            }
        }
        Command::Pi1 { file, presentation } => {
            let tree = load(&file.file, stdin)?;
            let e = simplify(&homotopy_type(&tree)?);
            let ext = pi1_structure(&e)?;
            let flat = if *presentation {
                flat_presentation(&ext)
            } else {
                None
            };
            if cli.json {
                let mut doc = serde_json::json!({
                    "format": serial::FORMAT,
                    "kind": "pi1",
                    "structure": render_extension(&ext),
                });
                if *presentation {
                    doc["presentation"] = match &flat {
                        Some(fp) => serde_json::Value::String(fp.display()),
                        None => serde_json::Value::Null,
                    };
                }
                Ok(json_line(doc))
            } else {
                let mut out = format!("{}\n", render_extension(&ext));
                if *presentation {
                    match &flat {
                        Some(fp) => {
                            let _ = writeln!(out, "presentation: {}", fp.display());
                        }
                        None => {
                            let _ = writeln!(
                                out,
                                "presentation: not determined by H1-level data for this tree"
                            );
                        }
                    }
                }
                Ok(out)
            }
        }
        Command::H1 { file, verify } => {
            let tree = load(&file.file, stdin)?;
            let e = simplify(&homotopy_type(&tree)?);
            let result = if *verify {
                let (h, _checks) = h1_verified(&tree).map_err(|e| Failure {
                    code: EXIT_VERIFY,
                    message: e.to_string(),
                })?;
                let mismatches = kspace_core::oracle::snf_agreement_sweep(500, 8, 9, 0x5eed);
                if mismatches != 0 {
                    return Err(Failure {
                        code: EXIT_VERIFY,
                        message: format!("oracle sweep found {} mismatches", mismatches),
                    });
                }
                h
            } else {
                h1(&e, &tree)?
            };
            if cli.json {
                Ok(json_line(serial::serialize_h1(&result)))
            } else {
                let mut out = format!("{}\n", result);
                if *verify {
                    let _ = writeln!(
                        out,
                        "verify: ok (tree reduction + 500-matrix sweep, 0 mismatches)"
                    );
                }
                Ok(out)
            }
        }
        Command::Gramain(f) => {
            let tree = load(&f.file, stdin)?;
            if cli.json {
                let report = gramain_report(&tree)?;
                Ok(json_line(serde_json::json!({
                    "format": serial::FORMAT,
                    "kind": "gramain",
                    "pairing": report.pairing.to_string(),
                    "class": report.class.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "cocycle": report.cocycle.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "lift_ambiguous": report.lift_ambiguous,
                })))
            } else {
                Ok(format!("{}\n", gramain_pairing(&tree)?))
            }
        }
        Command::Invertible(f) => {
            let tree = load(&f.file, stdin)?;
            let inv = is_invertible(&tree);
            if cli.json {
                Ok(json_line(serde_json::json!({
                    "format": serial::FORMAT,
                    "kind": "invertible",
                    "invertible": inv,
                })))
            } else {
                Ok(format!(
                    "{}\n",
                    if inv { "invertible" } else { "not invertible" }
                ))
            }
        }
        Command::Af(f) => {
            let tree = load(&f.file, stdin)?;
            let mut rows = Vec::new();
            collect_af(&tree, ".", &mut rows)?;
            if cli.json {
                let entries: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(path, order, gen)| {
                        serde_json::json!({
                            "path": path,
                            "order": order,
                            "generator": gen,
                        })
                    })
                    .collect();
                Ok(json_line(serde_json::json!({
                    "format": serial::FORMAT,
                    "kind": "af",
                    "vertices": entries,
                })))
            } else if rows.is_empty() {
                Ok("no splice vertices\n".into())
            } else {
                let mut out = String::new();
                for (path, order, gen) in rows {
                    let _ = writeln!(out, "{}: |A_f| = {} (generator image {})", path, order, gen);
                }
                Ok(out)
            }
        }
        Command::Dim(f) => {
            let tree = load(&f.file, stdin)?;
            let e = simplify(&homotopy_type(&tree)?);
            let d = dimension(&e);
            if cli.json {
                Ok(json_line(serde_json::json!({
                    "format": serial::FORMAT,
                    "kind": "dim",
                    "dimension": d,
                })))
            } else {
                Ok(match d {
                    Some(d) => format!("{}\n", d),
                    None => "undefined\n".into(),
                })
            }
        }
        Command::Eq { file1, file2 } => {
            let a = load(file1, stdin)?;
            let b = load(file2, stdin)?;
            let equal = classes_equal(&a, &b);
            if cli.json {
                Ok(json_line(serde_json::json!({
                    "format": serial::FORMAT,
                    "kind": "eq",
                    "equal": equal,
                })))
            } else {
                Ok(format!("{}\n", if equal { "equal" } else { "not equal" }))
            }
        }
        Command::Catalog { name } => match name {
            Some(name) => {
                let entry = Catalog::get(name)?;
                if cli.json {
                    let value = match &entry {
                        CatalogEntry::Kgl(k) => serde_json::json!({
                            "format": serial::FORMAT,
                            "kind": "kgl",
                            "value": serde_json::to_value(k).unwrap(),
                        }),
                        CatalogEntry::Tree(t) => serial::serialize_knot(t),
                    };
                    Ok(json_line(value))
                } else {
                    match entry {
                        CatalogEntry::Kgl(k) => {
                            let mut out = format!(
                                "kgl {}: n={} B={} rho={}",
                                k.name,
                                k.n,
                                k.b_order,
                                k.rho_gen.cycle_string()
                            );
                            match &k.inversion {
                                Some(iota) => {
                                    let _ = writeln!(out, " inv={}", iota.cycle_string());
                                }
                                None => {
                                    let _ = writeln!(out, " (no inversion datum)");
                                }
                            }
                            Ok(out)
                        }
                        CatalogEntry::Tree(t) => Ok(format!("{}\n", print_knot(&t))),
                    }
                }
            }
            None => {
                let names = Catalog::names();
                if cli.json {
                    Ok(json_line(serde_json::json!({
                        "format": serial::FORMAT,
                        "kind": "catalog",
                        "names": names,
                    })))
                } else {
                    Ok(names.join("\n") + "\n")
                }
            }
        },
    }
}

fn collect_af(
    tree: &KnotTree,
    path: &str,
    out: &mut Vec<(String, u64, String)>,
) -> Result<(), Failure> {
    match tree {
        KnotTree::Cable { companion, .. } => collect_af(companion, &format!("{}.0", path), out),
        KnotTree::Sum { summands } => {
            for (i, s) in summands.iter().enumerate() {
                collect_af(s, &format!("{}.{}", path, i), out)?;
            }
            Ok(())
        }
        KnotTree::HypSplice { kgl, children, .. } => {
            let af = compute_af(kgl, children)?;
            out.push((
                path.to_string(),
                af.order(),
                af.generator_image().cycle_string(),
            ));
            for (i, c) in children.iter().enumerate() {
                collect_af(c, &format!("{}.{}", path, i), out)?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
