//! The `adg` command line.
//!
//! Exit statuses: 0 success, 1 property violation, 2 usage error, 3 resource
//! refusal.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algorithms::{
    component_labels, default_cap, girth, lemma22_shape_check, shortest_cycle_through, GirthMode,
};
use crate::budget::{parse_bytes, Budget};
use crate::covering::{
    lemma21_map, projection_map, verify_builtin_covering, CoordinateMap, GraphDescriptor, Policy,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::equations::{builtin_system, parse_system, Family};
use crate::extremal::{component_report, turan_bounds};
use crate::field::{factor_prime_power, Field};
use crate::graph::{ImplicitGraph, VertexId};
use crate::repro;
use crate::spectral::{check_2sqrtq, lambda2, Method, SpectralOptions};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "adg", version, about = "Girth, connectivity, covering and spectral checks for algebraically defined graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_u64)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Memory budget such as 512M or 4G; overrides ADG_MEM_BUDGET.
    #[arg(long, global = true)]
    pub mem_budget: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
    /// Only meaningful for `export`.
    Edgelist,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Built-in family, D or A.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Shorthand FAMILY:n:q, e.g. D:5:3.
    #[arg(long, conflicts_with_all = ["family", "n"])]
    pub graph: Option<String>,
    /// Equation system file; replaces the built-in family.
    #[arg(long, conflicts_with_all = ["family", "graph"])]
    pub system: Option<PathBuf>,
    /// Field modulus as comma-separated coefficients, constant term first.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Girth of the graph.
    Girth {
        #[command(flatten)]
        graph: GraphArgs,
        /// Only look for cycles shorter than this (default 2n+8).
        #[arg(long)]
        cap: Option<u32>,
        /// Scan from the origin only; valid for point-transitive graphs.
        #[arg(long)]
        assume_transitive: bool,
    },
    /// Shortest cycle through the origin point.
    CycleThroughOrigin {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Connected components.
    Components {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Layer shapes around the origin of an A graph.
    ShapeCheck {
        #[command(flatten)]
        graph: GraphArgs,
        /// Largest distance checked (default n).
        #[arg(long)]
        max_j: Option<usize>,
    },
    /// Verify a coordinate map is a covering map.
    CoverCheck {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum)]
        map: MapKind,
        /// exhaustive or sampled:N.
        #[arg(long)]
        policy: Option<String>,
    },
    /// Largest two adjacency eigenvalues.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "auto")]
        method: Method,
        #[arg(long)]
        per_component: bool,
        /// Exit 1 when the second eigenvalue exceeds 2 sqrt(q).
        #[arg(long)]
        check_2sqrtq: bool,
    },
    /// Turan-number bounds for N vertices and no cycles up to 2k+1.
    Turan {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
    },
    /// Per-component order, size, girth and lower-bound ratio.
    Report {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Write the edge list.
    Export {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Run the acceptance matrix.
    Repro {
        /// Run only these rows (1-based).
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Lemma21,
    Projection,
}

fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("{s:?}: {e}"))
}

/// Parses `FAMILY:n:q`.
pub fn parse_descriptor(s: &str) -> Result<GraphDescriptor> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::invalid(format!("expected FAMILY:n:q, got {s:?}"));
    let [family, n, q] = parts[..] else { return Err(bad()) };
    Ok(GraphDescriptor::new(
        Family::from_str(family).map_err(Error::InvalidArgument)?,
        n.parse().map_err(|_| bad())?,
        q.parse().map_err(|_| bad())?,
    ))
}

fn parse_policy(s: Option<&str>, seed: u64) -> Result<Policy> {
    match s {
        None => Ok(Policy::Sampled {
            count: DEFAULT_SAMPLES,
            seed,
        }),
        Some("exhaustive") => Ok(Policy::Exhaustive),
        Some(other) => {
            let count = other
                .strip_prefix("sampled")
                .and_then(|rest| match rest {
                    "" => Some(DEFAULT_SAMPLES),
                    _ => rest.strip_prefix(':')?.parse().ok(),
                })
                .ok_or_else(|| Error::invalid(format!("policy must be exhaustive or sampled:N, got {other:?}")))?;
            Ok(Policy::Sampled { count, seed })
        }
    }
}

fn parse_modulus(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("modulus coefficients must be integers, got {c:?}")))
        })
        .collect()
}

impl GraphArgs {
    fn build(&self) -> Result<ImplicitGraph> {
        let (family, n, q) = match (&self.graph, &self.system) {
            (Some(shorthand), _) => {
                let d = parse_descriptor(shorthand)?;
                if self.q.is_some_and(|q| q != d.q) {
                    return Err(Error::invalid("--q disagrees with --graph"));
                }
                (d.family, Some(d.n), d.q)
            }
            (None, Some(_)) => (Family::Custom, None, self.require_q()?),
            (None, None) => {
                let family = self.family.ok_or_else(|| Error::invalid("name a graph with --family/--n/--q, --graph or --system"))?;
                let n = self.n.ok_or_else(|| Error::invalid("--n is required"))?;
                (family, Some(n), self.require_q()?)
            }
        };
        let field = match &self.modulus {
            Some(m) => {
                let (p, _) = factor_prime_power(q)?;
                let field = Field::with_modulus(p, &parse_modulus(m)?)?;
                if field.order() != q {
                    return Err(Error::invalid(format!("modulus defines GF({}), not GF({q})", field.order())));
                }
                field
            }
            None => Field::with_order(q)?,
        };
        let system = match &self.system {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let system = parse_system(&text)?;
                if self.n.is_some_and(|n| n != system.dimension()) {
                    return Err(Error::invalid(format!(
                        "--n disagrees with the system dimension {}",
                        system.dimension()
                    )));
                }
                system
            }
            None => builtin_system(family, n.expect("built-in families carry n"))?,
        };
        Ok(ImplicitGraph::new(&field, system, family)?)
    }

    fn require_q(&self) -> Result<u64> {
        self.q.ok_or_else(|| Error::invalid("--q is required"))
    }
}

/// What a subcommand produced: a JSON result plus a flag for property
/// violations.
struct Outcome {
    graph: Option<GraphDescriptor>,
    result: Value,
    witness: Option<Value>,
    scanned: Option<u64>,
    /// Rows for CSV output; a single row of `result` when empty.
    table: Vec<Value>,
    text: String,
    violation: bool,
}

impl Outcome {
    fn new(graph: Option<&ImplicitGraph>, result: Value, text: String) -> Self {
        Outcome {
            graph: graph.map(GraphDescriptor::of),
            result,
            witness: None,
            scanned: None,
            table: Vec::new(),
            text,
            violation: false,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn names(graph: &ImplicitGraph, ids: &[VertexId]) -> Result<Vec<String>> {
    ids.iter().map(|&id| Ok(graph.decode(id)?.to_string())).collect()
}

fn cover_map(kind: MapKind, from: GraphDescriptor, to: GraphDescriptor) -> Result<CoordinateMap> {
    let map = match kind {
        MapKind::Lemma21 => {
            if from.family != Family::D || to.family != Family::A || from.n.is_multiple_of(2) || from.n < 3 {
                return Err(Error::invalid("lemma21 maps D(2k+1,q) onto A(k+2,q)"));
            }
            lemma21_map((from.n - 1) / 2, from.q)?
        }
        MapKind::Projection => {
            if from.family != to.family {
                return Err(Error::invalid("projection maps stay within one family"));
            }
            projection_map(from.family, from.n, to.n, from.q)?
        }
    };
    if map.source != from || map.target != to {
        return Err(Error::invalid(format!("that map goes from {} to {}", map.source, map.target)));
    }
    Ok(map)
}

fn execute(command: &Command, global: &GlobalArgs, budget: &Budget) -> Result<Outcome> {
    match command {
        Command::Girth {
            graph,
            cap,
            assume_transitive,
        } => {
            let g = graph.build()?;
            let mode = if *assume_transitive { GirthMode::SingleSource } else { GirthMode::Full };
            let r = girth(&g, cap.unwrap_or(default_cap(g.dimension())), mode, budget)?;
            let mut out = Outcome::new(Some(&g), to_value(&r.value), format!("girth {}", r.value));
            if let Some(w) = &r.witness {
                out.witness = Some(to_value(&names(&g, w)?));
            }
            out.scanned = Some(r.scanned);
            Ok(out)
        }
        Command::CycleThroughOrigin { graph, cap } => {
            let g = graph.build()?;
            let r = shortest_cycle_through(&g, &g.origin(), cap.unwrap_or(default_cap(g.dimension())), budget)?;
            let mut out = Outcome::new(Some(&g), to_value(&r.value), format!("shortest cycle through origin {}", r.value));
            if let Some(w) = &r.witness {
                out.witness = Some(to_value(&names(&g, w)?));
            }
            out.scanned = Some(r.scanned);
            Ok(out)
        }
        Command::Components { graph } => {
            let g = graph.build()?;
            let labels = component_labels(&g, budget)?;
            let count = labels.sizes.len();
            let mut out = Outcome::new(
                Some(&g),
                json!({ "count": count, "sizes": labels.sizes }),
                format!("{count} components, sizes {:?}", labels.sizes),
            );
            out.table = labels
                .sizes
                .iter()
                .enumerate()
                .map(|(i, s)| json!({ "component": i, "order": s }))
                .collect();
            Ok(out)
        }
        Command::ShapeCheck { graph, max_j } => {
            let g = graph.build()?;
            let r = lemma22_shape_check(&g, max_j.unwrap_or(g.dimension()), budget)?;
            let mut out = Outcome::new(Some(&g), to_value(&r), format!("{r:?}"));
            out.violation = !r.is_ok();
            Ok(out)
        }
        Command::CoverCheck { from, to, map, policy } => {
            let map = cover_map(*map, parse_descriptor(from)?, parse_descriptor(to)?)?;
            let policy = parse_policy(policy.as_deref(), global.seed)?;
            let verdict = verify_builtin_covering(&map, policy)?;
            let text = format!("{} -> {} via {:?}: {verdict:?}", map.source, map.target, map.index_map);
            let mut out = Outcome::new(None, json!({ "map": map, "verdict": verdict }), text);
            out.graph = Some(map.source);
            out.violation = !verdict.passed();
            Ok(out)
        }
        Command::Spectrum {
            graph,
            method,
            per_component,
            check_2sqrtq: check,
        } => {
            let g = graph.build()?;
            let opts = SpectralOptions {
                method: *method,
                per_component: *per_component,
                seed: global.seed,
                ..Default::default()
            };
            let (ok, report) = if *check {
                check_2sqrtq(&g, &opts, budget)?
            } else {
                (true, lambda2(&g, &opts, budget)?)
            };
            let mut text = format!(
                "lambda1 {:.12} lambda2 {:.12} bound {:.12} margin {:.12} ({:?})",
                report.lambda1, report.lambda2, report.bound, report.margin, report.method
            );
            if report.component_note {
                let _ = write!(text, "; disconnected, {} components", report.components);
            }
            let mut out = Outcome::new(Some(&g), to_value(&report), text);
            out.violation = !ok;
            Ok(out)
        }
        Command::Turan { n, k } => {
            let b = turan_bounds(*n, *k)?;
            Ok(Outcome::new(
                None,
                to_value(&b),
                format!("n {} k {} epsilon {} lower {:.12} upper {:.12}", b.n, b.k, b.epsilon, b.lower, b.upper),
            ))
        }
        Command::Report { graph, cap } => {
            let g = graph.build()?;
            let rows = component_report(&g, cap.unwrap_or(default_cap(g.dimension())), budget)?;
            let mut text = String::from("component order size girth k lower_bound ratio regular");
            for r in &rows {
                let opt = |v: Option<f64>| v.map_or("NA".to_string(), |x| format!("{x:.6}"));
                let _ = write!(
                    text,
                    "\n{} {} {} {} {} {} {} {}",
                    r.index,
                    r.order,
                    r.size,
                    r.girth,
                    r.k.map_or("NA".to_string(), |k| k.to_string()),
                    opt(r.lower_bound),
                    opt(r.ratio),
                    r.regular
                );
            }
            let mut out = Outcome::new(Some(&g), to_value(&rows), text);
            out.table = rows.iter().map(to_value).collect();
            Ok(out)
        }
        Command::Export { graph } => {
            let g = graph.build()?;
            budget.check("edge export", g.edge_count(), 16)?;
            let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
            let text = edges.iter().map(|(p, l)| format!("P{p} L{l}")).collect::<Vec<_>>().join("\n");
            let mut out = Outcome::new(Some(&g), to_value(&edges), text);
            out.table = edges.iter().map(|(p, l)| json!({ "point": p, "line": l })).collect();
            Ok(out)
        }
        Command::Repro { rows } => {
            let ids: Vec<usize> = if rows.is_empty() { (1..=repro::MATRIX_SIZE).collect() } else { rows.clone() };
            if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > repro::MATRIX_SIZE) {
                return Err(Error::invalid(format!("rows run from 1 to {}, got {bad}", repro::MATRIX_SIZE)));
            }
            let results: Vec<repro::Row> = ids.iter().map(|&i| repro::run_row(i, budget)).collect();
            let text = results.iter().map(row_line).collect::<Vec<_>>().join("\n");
            let mut out = Outcome::new(None, to_value(&results), text);
            out.table = results.iter().map(to_value).collect();
            out.violation = results.iter().any(|r| !r.pass);
            Ok(out)
        }
    }
}

/// One line of the acceptance table.
pub fn row_line(r: &repro::Row) -> String {
    format!(
        "[{}] {:>2} {}: expected {}; actual {} ({} ms, limit {} ms)",
        if r.pass { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.expected,
        r.actual,
        r.elapsed_ms,
        r.limit_ms
    )
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_csv(out: &mut dyn Write, rows: &[Value]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(m)) => m.keys().cloned().collect(),
        _ => vec!["value".into()],
    };
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let record: Vec<String> = match row {
            Value::Object(m) => header.iter().map(|k| m.get(k).map(scalar).unwrap_or_default()).collect(),
            other => vec![scalar(other)],
        };
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn emit(out: &mut dyn Write, format: Format, o: &Outcome, elapsed_ms: u128, is_export: bool) -> Result<()> {
    match format {
        Format::Json => {
            let mut doc = serde_json::Map::new();
            if let Some(g) = &o.graph {
                doc.insert("family".into(), json!(g.family));
                doc.insert("n".into(), json!(g.n));
                doc.insert("q".into(), json!(g.q));
            }
            doc.insert("result".into(), o.result.clone());
            if let Some(w) = &o.witness {
                doc.insert("witness".into(), w.clone());
            }
            if let Some(s) = o.scanned {
                doc.insert("scanned".into(), json!(s));
            }
            doc.insert("elapsed_ms".into(), json!(elapsed_ms));
            writeln!(out, "{}", Value::Object(doc))?;
        }
        Format::Csv => {
            if o.table.is_empty() {
                let mut row = serde_json::Map::new();
                if let Some(g) = &o.graph {
                    row.insert("family".into(), json!(g.family));
                    row.insert("n".into(), json!(g.n));
                    row.insert("q".into(), json!(g.q));
                }
                match &o.result {
                    Value::Object(m) => row.extend(m.iter().map(|(k, v)| (k.clone(), v.clone()))),
                    other => {
                        row.insert("result".into(), other.clone());
                    }
                }
                write_csv(out, &[Value::Object(row)])?;
            } else {
                write_csv(out, &o.table)?;
            }
        }
        Format::Text => writeln!(out, "{}", o.text)?,
        Format::Edgelist if is_export => writeln!(out, "{}", o.text)?,
        Format::Edgelist => return Err(Error::invalid("--format edgelist applies to export only")),
    }
    Ok(())
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_refusal() || matches!(e, Error::NotConverged { .. }) {
        EXIT_RESOURCE
    } else {
        EXIT_USAGE
    }
}

fn report_error(out: &mut dyn Write, err: &mut dyn Write, format: Format, e: &Error) -> i32 {
    let code = exit_code(e);
    let _ = writeln!(err, "error: {e}");
    if format == Format::Json {
        let kind = if code == EXIT_RESOURCE { "resource_refusal" } else { "usage" };
        let _ = writeln!(out, "{}", json!({ "error": e.to_string(), "kind": kind, "exit_code": code }));
    }
    code
}

/// Runs a parsed command line, writing the report to `out` and diagnostics
/// to `err`; returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let format = cli.global.format;
    let budget = match &cli.global.mem_budget {
        Some(s) => match parse_bytes(s) {
            Some(bytes) => Budget::new(bytes),
            None => return report_error(out, err, format, &Error::invalid(format!("cannot parse memory budget {s:?}"))),
        },
        None => Budget::from_env(),
    };
    let start = Instant::now();
    let result = match cli.global.workers {
        Some(0) => Err(Error::invalid("--workers must be at least 1")),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::invalid(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli.command, &cli.global, &budget))),
        None => execute(&cli.command, &cli.global, &budget),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return report_error(out, err, format, &e),
    };
    let is_export = matches!(cli.command, Command::Export { .. });
    if let Err(e) = emit(out, format, &outcome, start.elapsed().as_millis(), is_export) {
        return report_error(out, err, format, &e);
    }
    if outcome.violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

/// Parses `args` (including the program name) and runs; usage errors exit 2.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                // --help and --version
                EXIT_OK
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("adg").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn descriptor_shorthand() {
        let d = parse_descriptor("D:5:3").unwrap();
        assert_eq!(d, GraphDescriptor::new(Family::D, 5, 3));
        assert!(parse_descriptor("D:5").is_err());
        assert!(parse_descriptor("X:5:3").is_err());
    }

    #[test]
    fn policy_strings() {
        assert_eq!(parse_policy(Some("exhaustive"), 1).unwrap(), Policy::Exhaustive);
        assert_eq!(parse_policy(Some("sampled:10"), 7).unwrap(), Policy::Sampled { count: 10, seed: 7 });
        assert!(parse_policy(Some("sampled:x"), 7).is_err());
    }

    #[test]
    fn seed_accepts_hex() {
        assert_eq!(parse_u64("0x5EED").unwrap(), 0x5EED);
        assert_eq!(parse_u64("12").unwrap(), 12);
    }

    #[test]
    fn girth_json() {
        let (code, out) = run_args(&["girth", "--family", "D", "--n", "3", "--q", "3", "--assume-transitive"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"], 8);
        assert_eq!(v["family"], "D");
        assert_eq!(v["witness"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn oversized_instance_is_refused() {
        let (code, _) = run_args(&["girth", "--family", "D", "--n", "9", "--q", "999999937"]);
        assert_eq!(code, EXIT_RESOURCE);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["girth", "--family", "D", "--n", "3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["girth", "--q", "6", "--graph", "D:3:6"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    }
}
