//! Command-line front end: argument parsing, caching, worker pools and
//! output formatting. Every command renders its primary output to a string
//! first, so equal arguments always give equal bytes.

mod cache;
mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::closedform::{self, Label};
use crate::engine::{influence, Engine};
use crate::error::{Error, Result};
use crate::incidence::{
    canonicalize, parse_lines, write_catalogue, ClassFilter, ClassId, IsoClass, LinearSpaceFunction,
};
use crate::oracle;
use crate::plane::{parse_plane, serialize_plane, FiniteField, ProjectivePlane};
use crate::symbolic::{CountExpression, QPoly};

pub use cache::Cache;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "arclab", version, about = "Exact arc-counting formulas for finite projective planes")]
pub struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// Directory for resumable intermediate results.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear spaces on n points up to isomorphism.
    Enumerate {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value = "all")]
        filter: ClassFilter,
        #[arg(long)]
        count_only: bool,
    },
    /// The arc count C_n as a polynomial plus superfiguration terms.
    Formula {
        #[arg(long)]
        points: usize,
    },
    /// Coefficients of influence of the n-point superfigurations.
    Influence {
        #[arg(long)]
        points: usize,
    },
    #[command(subcommand)]
    Plane(PlaneCommand),
    #[command(subcommand)]
    Count(CountCommand),
    #[command(subcommand)]
    Closedform(ClosedformCommand),
    /// Check derived formulas against brute-force counts.
    Verify {
        /// Largest plane order to count on.
        #[arg(long, default_value_t = 4)]
        max_q: u64,
        /// Largest number of points to derive formulas for.
        #[arg(long, default_value_t = 8)]
        max_points: usize,
    },
    #[command(subcommand)]
    Catalogue(CatalogueCommand),
}

#[derive(Debug, Subcommand)]
enum PlaneCommand {
    /// Write the plane in the plane file format.
    Gen {
        #[command(flatten)]
        plane: PlaneArg,
    },
    /// Validate a plane and summarize it.
    Check {
        #[command(flatten)]
        plane: PlaneArg,
    },
}

#[derive(Debug, Subcommand)]
enum CountCommand {
    /// Ordered n-arcs.
    Arcs {
        #[command(flatten)]
        plane: PlaneArg,
        #[arg(long)]
        n: usize,
    },
    /// Strong realizations of a class.
    Realizations {
        #[command(flatten)]
        plane: PlaneArg,
        #[command(flatten)]
        space: SpaceArg,
    },
    /// Weak realizations of a labeled linear space.
    Weak {
        #[command(flatten)]
        plane: PlaneArg,
        #[command(flatten)]
        space: SpaceArg,
    },
}

#[derive(Debug, Subcommand)]
enum ClosedformCommand {
    /// Root counts, table entries and C_9 for each order.
    Table {
        /// Comma-separated prime powers.
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 4, 5, 7, 8, 9])]
        q: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogueCommand {
    /// Write the class catalogue for n points.
    Export {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value = "all")]
        filter: ClassFilter,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PlaneArg {
    /// Built-in plane, `pg2_q<q>`.
    #[arg(long)]
    plane: Option<String>,
    #[arg(long)]
    plane_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpaceArg {
    /// A label (`7`, `8`, `9_3` .. `9_12`) or a class id (`n:hex`).
    #[arg(long, conflicts_with = "lines")]
    class: Option<String>,
    /// Full lines as `0,1,2;2,3,4`; needs `--points`.
    #[arg(long, requires = "points", allow_hyphen_values = true)]
    lines: Option<String>,
    #[arg(long)]
    points: Option<usize>,
}

/// Run with the process arguments and standard streams; returns the exit code.
pub fn main() -> i32 {
    let out = std::io::stdout();
    let err = std::io::stderr();
    run(std::env::args_os(), &mut out.lock(), &mut err.lock())
}

/// Exit codes: 0 success, 1 domain error (JSON report on `err`), 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k as usize)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let report = json!({ "error": e.kind(), "message": e.to_string() });
            let _ = writeln!(err, "{report}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let cache = if cli.no_cache { Cache::disabled() } else { Cache::from_env() };
    let format = cli.format;
    match &cli.command {
        Command::Enumerate { points, filter, count_only } => {
            let classes = cache.classes(*points, *filter)?;
            if *count_only {
                return Ok(match format.unwrap_or(Format::Text) {
                    Format::Json => format!(
                        "{}\n",
                        json!({ "points": points, "filter": filter.to_string(), "count": classes.len() })
                    ),
                    _ => format!("{}\n", classes.len()),
                });
            }
            render_classes(&classes, format.unwrap_or(Format::Text))
        }
        Command::Formula { points } => {
            let dir = cli.checkpoint.clone().or_else(|| cache.path("engine"));
            let mut engine = match dir {
                Some(d) => Engine::with_checkpoint(d),
                None => Engine::new(),
            };
            let formula = engine.arc_formula(*points)?;
            render_formula(*points, &formula, format.unwrap_or(Format::Text))
        }
        Command::Influence { points } => {
            let dir = cli.checkpoint.clone().or_else(|| cache.path("influence"));
            let coefs = influence(*points, dir.as_deref())?;
            render_influence(*points, &coefs, format.unwrap_or(Format::Text))
        }
        Command::Plane(PlaneCommand::Gen { plane }) => {
            let p = load_plane(plane)?;
            Ok(match format.unwrap_or(Format::Text) {
                Format::Json => format!("{}\n", json!({ "label": p.label(), "order": p.order(), "lines": p.lines() })),
                _ => serialize_plane(&p),
            })
        }
        Command::Plane(PlaneCommand::Check { plane }) => {
            let p = load_plane(plane)?;
            let n = p.num_points();
            Ok(match format.unwrap_or(Format::Text) {
                Format::Json => format!(
                    "{}\n",
                    json!({ "valid": true, "label": p.label(), "order": p.order(), "points": n, "lines": n })
                ),
                _ => format!("valid {} order={} points={n} lines={n}\n", p.label(), p.order()),
            })
        }
        Command::Count(CountCommand::Arcs { plane, n }) => {
            let p = load_plane(plane)?;
            let count = oracle::count_arcs(&p, *n);
            Ok(match format.unwrap_or(Format::Text) {
                Format::Json => format!("{}\n", json!({ "plane": p.label(), "n": n, "count": big(&count) })),
                _ => format!("{count}\n"),
            })
        }
        Command::Count(CountCommand::Realizations { plane, space }) => {
            let p = load_plane(plane)?;
            let cls = match resolve_space(space, &cache)? {
                Space::Class(c) => c,
                Space::Labeled(f) => canonicalize(&f),
            };
            let r = oracle::count_strong(&p, &cls);
            Ok(match format.unwrap_or(Format::Text) {
                Format::Json => format!("{}\n", serde_json::to_string(&r)?),
                Format::Csv => format!(
                    "plane,target,labeled,class,unordered\n{},{},{},{},{}\n",
                    r.plane_label, r.target, r.labeled_count, r.class_count, r.unordered_copies
                ),
                _ => format!("labeled={} class={} unordered={}\n", r.labeled_count, r.class_count, r.unordered_copies),
            })
        }
        Command::Count(CountCommand::Weak { plane, space }) => {
            let p = load_plane(plane)?;
            let f = match resolve_space(space, &cache)? {
                Space::Class(c) => c.canon,
                Space::Labeled(f) => f,
            };
            let count = oracle::count_weak(&p, &f);
            Ok(match format.unwrap_or(Format::Text) {
                Format::Json => format!(
                    "{}\n",
                    json!({ "plane": p.label(), "space": f.lines_string(), "points": f.n(), "count": big(&count) })
                ),
                _ => format!("{count}\n"),
            })
        }
        Command::Closedform(ClosedformCommand::Table { q }) => match format.unwrap_or(Format::Csv) {
            Format::Csv => closedform::table_csv(q),
            Format::Json => {
                let csv = closedform::table_csv(q)?;
                let mut rows = csv.lines();
                let header: Vec<&str> = rows.next().unwrap_or_default().split(',').collect();
                let rows: Vec<Value> = rows
                    .map(|r| {
                        let obj: serde_json::Map<String, Value> =
                            header.iter().zip(r.split(',')).map(|(k, v)| (k.to_string(), number(v))).collect();
                        Value::Object(obj)
                    })
                    .collect();
                Ok(format!("{}\n", Value::Array(rows)))
            }
            other => Err(unsupported("closedform table", other)),
        },
        Command::Verify { max_q, max_points } => {
            let checks = verify::run(*max_q, *max_points, &cache)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            let text = match format.unwrap_or(Format::Text) {
                Format::Json => format!("{}\n", serde_json::to_string(&checks)?),
                _ => checks
                    .iter()
                    .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect(),
            };
            if failed > 0 {
                return Err(Error::Precondition(format!("{failed} of {} checks failed:\n{text}", checks.len())));
            }
            Ok(text)
        }
        Command::Catalogue(CatalogueCommand::Export { points, filter, out }) => {
            let text = write_catalogue(&cache.classes(*points, *filter)?);
            match out {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn unsupported(what: &str, f: Format) -> Error {
    Error::Precondition(format!("{what} has no {f:?} output"))
}

fn big(v: &BigInt) -> Value {
    number(&v.to_string())
}

fn number(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

/// `pg2_q<q>` or a plane file.
fn load_plane(arg: &PlaneArg) -> Result<ProjectivePlane> {
    if let Some(path) = &arg.plane_file {
        let text = std::fs::read_to_string(path)?;
        return parse_plane(&text, path.display().to_string());
    }
    let spec = arg.plane.as_deref().unwrap_or_default();
    let q: u64 = spec
        .strip_prefix("pg2_q")
        .and_then(|q| q.parse().ok())
        .ok_or_else(|| Error::Precondition(format!("unknown plane {spec:?}; expected pg2_q<q>")))?;
    Ok(ProjectivePlane::pg2(&FiniteField::of_order(q)?))
}

enum Space {
    Class(IsoClass),
    Labeled(LinearSpaceFunction),
}

fn resolve_space(arg: &SpaceArg, cache: &Cache) -> Result<Space> {
    if let Some(lines) = &arg.lines {
        let n = arg.points.expect("clap enforces --points with --lines");
        return Ok(Space::Labeled(LinearSpaceFunction::new(n, parse_lines(n, lines)?)?));
    }
    let Some(name) = &arg.class else {
        return Err(Error::Precondition("give --class or --lines".into()));
    };
    let id: ClassId = match name.parse::<Label>() {
        Ok(label) => *cache.labels(label.points())?.get(&label).ok_or_else(|| Error::UnknownLabel(name.clone()))?,
        Err(_) => name.parse()?,
    };
    cache
        .classes(id.points(), ClassFilter::All)?
        .into_iter()
        .find(|c| c.class_id == id)
        .map(Space::Class)
        .ok_or(Error::UnknownClass(id))
}

fn render_classes(classes: &[IsoClass], format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => write_catalogue(classes),
        Format::Json => {
            let rows: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "id": c.class_id.to_string(),
                        "points": c.n(),
                        "lines": c.canon.lines_string(),
                        "aut": c.aut_order,
                        "labelings": c.labelings,
                        "superfiguration": c.tags.is_superfiguration,
                        "configuration": c.tags.is_configuration,
                    })
                })
                .collect();
            format!("{}\n", Value::Array(rows))
        }
        Format::Csv => {
            let mut s = String::from("id,points,lines,aut,labelings,superfiguration,configuration\n");
            for c in classes {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    c.class_id,
                    c.n(),
                    c.canon.lines_string(),
                    c.aut_order,
                    c.labelings,
                    c.tags.is_superfiguration,
                    c.tags.is_configuration
                ));
            }
            s
        }
        Format::Latex => return Err(unsupported("enumerate", format)),
    })
}

/// Display names for symbols: table labels where known, class ids otherwise.
fn symbol_names(ids: impl Iterator<Item = ClassId>) -> Result<BTreeMap<ClassId, String>> {
    let mut names = BTreeMap::new();
    let mut by_points: BTreeMap<usize, Vec<ClassId>> = BTreeMap::new();
    for id in ids {
        by_points.entry(id.points()).or_default().push(id);
    }
    for (n, ids) in by_points {
        let labels: BTreeMap<ClassId, Label> = if (7..=9).contains(&n) {
            closedform::identify_labels(n)?.into_iter().map(|(l, id)| (id, l)).collect()
        } else {
            BTreeMap::new()
        };
        for id in ids {
            names.insert(id, labels.get(&id).map_or_else(|| id.to_string(), |l| l.to_string()));
        }
    }
    Ok(names)
}

fn render_formula(n: usize, formula: &CountExpression, format: Format) -> Result<String> {
    let names = symbol_names(formula.terms().keys().copied())?;
    let name = |id: ClassId| names[&id].clone();
    Ok(match format {
        Format::Text => format!("C_{n} = {}\n", formula.to_text(&name)),
        Format::Latex => format!("C_{{{n}}}(\\Pi) = {}\n", formula.to_latex(&name)),
        Format::Json => {
            let expr: Value = serde_json::from_str(&formula.to_json())?;
            let names: BTreeMap<String, String> = names.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            format!("{}\n", json!({ "points": n, "formula": expr, "names": names }))
        }
        Format::Csv => {
            let mut s = String::from("term,degree,coefficient\n");
            let mut rows = |term: &str, p: &QPoly| {
                for (d, c) in p.coeffs().iter().enumerate().rev() {
                    if c != &BigInt::from(0) {
                        s.push_str(&format!("{term},{d},{c}\n"));
                    }
                }
            };
            rows("1", formula.base());
            for (id, p) in formula.terms() {
                rows(&format!("A_{}", names[id]), p);
            }
            s
        }
    })
}

fn render_influence(n: usize, coefs: &BTreeMap<ClassId, BigInt>, format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => coefs.iter().map(|(id, c)| format!("{id} {c}\n")).collect(),
        Format::Csv => {
            let mut s = String::from("class,coefficient\n");
            s.extend(coefs.iter().map(|(id, c)| format!("{id},{c}\n")));
            s
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> = coefs.iter().map(|(id, c)| (id.to_string(), big(c))).collect();
            format!("{}\n", json!({ "points": n, "coefficients": map }))
        }
        Format::Latex => return Err(unsupported("influence", format)),
    })
}

/// Convenience for tests and embedding: run and capture both streams.
pub fn run_captured(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("arclab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> String {
        let (code, out, err) = run_captured(&[&["--no-cache"], args].concat());
        assert_eq!(code, 0, "{args:?}: {err}");
        out
    }

    #[test]
    fn nine_point_superfigurations() {
        assert_eq!(ok(&["enumerate", "--points", "9", "--filter", "superfigurations", "--count-only"]), "10\n");
    }

    #[test]
    fn six_arcs_in_pg2_4() {
        assert_eq!(ok(&["count", "arcs", "--plane", "pg2_q4", "--n", "6"]), "120960\n");
    }

    #[test]
    fn formula_formats() {
        let latex = ok(&["formula", "--points", "4", "--format", "latex"]);
        assert!(latex.starts_with("C_{4}(\\Pi) = "), "{latex}");
        assert!(!latex.contains("A_"));
        let text = ok(&["formula", "--points", "7"]);
        assert!(text.ends_with("- A[7]\n"), "{text}");
        let json: Value = serde_json::from_str(&ok(&["formula", "--points", "3", "--format", "json"])).unwrap();
        assert_eq!(json["points"], 3);
    }

    #[test]
    fn realizations_by_label() {
        let out = ok(&["count", "realizations", "--plane", "pg2_q2", "--class", "7", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["class"], 5040);
        assert_eq!(v["unordered"], 1);
        let weak = ok(&["count", "weak", "--plane", "pg2_q2", "--points", "3", "--lines", "0,1,2"]);
        assert_eq!(weak, "42\n");
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_captured(&["--no-cache", "formula", "--points", "12"]);
        assert_eq!(code, 1);
        let report: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(report["error"], "out_of_range");
        let (code, _, _) = run_captured(&["formula"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_captured(&["--workers", "0", "formula", "--points", "3"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_captured(&["--no-cache", "count", "arcs", "--plane", "pg2_q6", "--n", "3"]);
        assert_eq!(code, 1, "{err}");
    }

    #[test]
    fn workers_do_not_change_output() {
        let a = ok(&["--workers", "1", "influence", "--points", "8"]);
        let b = ok(&["--workers", "3", "influence", "--points", "8"]);
        assert_eq!(a, b);
    }

    #[test]
    fn closedform_table_csv() {
        let out = ok(&["closedform", "table", "--q", "2,3"]);
        assert_eq!(out.lines().count(), 3);
        assert!(out.lines().nth(1).unwrap().starts_with("2,1,0,0,0,1,5040,"));
    }

    #[test]
    fn plane_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pg3.plane");
        std::fs::write(&path, ok(&["plane", "gen", "--plane", "pg2_q3"])).unwrap();
        let out = ok(&["plane", "check", "--plane-file", path.to_str().unwrap()]);
        assert!(out.contains("order=3 points=13"), "{out}");
    }
}
