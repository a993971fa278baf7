//! The `affold` command line and its HTTP service.
//!
//! Exit codes: 0 success, 1 verification counterexample, 2 usage or input
//! error, 3 budget exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use affold::api::{self, catalog_document, catalog_types, witness_indices, witness_json};
use affold::class::{is_mutation_finite, recognize_type, ClassError, Finiteness, Recognition};
use affold::doc::{class_dump, seed_to_json, to_dot, QuiverDocument};
use affold::folding::{check, fold, globally_foldable, orbit_mutate, verify_invariance_equals_admissibility};
use affold::folding::{standard_folding, GlobalFoldability};
use affold::labeled::{enumerate_labeled_class, LabeledClassModel, LabeledError};
use affold::seed::{positivity_audit, verify_folded_pattern, SeedError};
use affold::{enumerate_class, DynkinType, FoldingTriple, Orientation, Seed};
use axum::body::Bytes;
use axum::http::{Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::{Json, Router};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "affold", version, about = "Exchange matrix mutation and folding of affine quivers")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Reject unknown fields in input documents.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs name a document file, `-` for standard input, a Dynkin type such as
/// `E~6`, or a folding triple such as `E~6/Z3/G~2`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the document of a Dynkin type or folding triple.
    Catalog {
        /// Type (`A~{2,2}`, `D~5`, `E6(2)`) or triple (`E~6/Z3/G~2`, `E~6/Z3`).
        name: Option<String>,
        /// Attach the standard action of this group (`Z2`, `Z3`, `Z2xZ2`).
        #[arg(long)]
        action: Option<String>,
        #[arg(long, value_enum)]
        orientation: Option<OrientationArg>,
        /// List the affine types and folding triples on at most 9 vertices.
        #[arg(long)]
        list: bool,
    },
    /// Enumerate the mutation class and print `size=N`.
    Enumerate {
        input: String,
        /// Count up to isomorphism (default).
        #[arg(long, conflicts_with = "labeled")]
        iso: bool,
        /// Count labeled matrices.
        #[arg(long)]
        labeled: bool,
        #[arg(long, env = "AFFOLD_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the class as NDJSON to this file (`-` for standard output).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Mutate at the given 1-based vertices, left to right.
    Mutate {
        input: String,
        #[arg(required = true)]
        vertices: Vec<usize>,
    },
    /// Mutate at the given 1-based orbits of the document's action, left to right.
    OrbitMutate {
        input: String,
        #[arg(required = true)]
        orbits: Vec<usize>,
    },
    /// Report invariance and admissibility under the document's action.
    Check { input: String },
    /// Fold the document along its action.
    Fold { input: String },
    /// Identify the Dynkin type of the mutation class.
    Recognize {
        input: String,
        #[arg(long, env = "AFFOLD_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Decide mutation-finiteness, with a replayable certificate when infinite.
    Finite {
        input: String,
        #[arg(long, env = "AFFOLD_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Verify a folding triple (or `all`): invariance against admissibility
    /// over the labeled class, global foldability and the folded seed pattern.
    Verify {
        triple: String,
        /// Seed-pattern search depth; 0 skips the seed check.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, env = "AFFOLD_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Largest source diagram considered by `all`.
        #[arg(long, default_value_t = 9)]
        max_vertices: usize,
    },
    /// Check that cluster variables up to a depth have positive coefficients.
    Positivity {
        input: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Also print the seeds reached by this 1-based mutation path.
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
    },
    /// Serve the JSON API under `/v1`.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Render the document as Graphviz DOT.
    ExportDot { input: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Default,
    Bipartite,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    /// A search ran out of budget; `stdout` holds any partial report.
    Budget {
        message: String,
        stdout: String,
    },
    /// A verification failed; `stdout` holds the report.
    Counterexample {
        stdout: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Counterexample { .. } => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Budget { .. } => 3,
        })
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Budget { message: m, .. } => m,
            CliError::Counterexample { .. } => "counterexample found",
        }
    }

    pub fn stdout(&self) -> &str {
        match self {
            CliError::Budget { stdout, .. } | CliError::Counterexample { stdout } => stdout,
            _ => "",
        }
    }

    fn budget(message: impl ToString) -> Self {
        CliError::Budget { message: message.to_string(), stdout: String::new() }
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::BudgetExceeded { .. } => CliError::budget(e),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Output produced by a command: standard output text and optional warnings.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }

    fn json(&mut self, v: &Value) {
        self.line(serde_json::to_string_pretty(v).expect("values serialize"));
    }
}

fn load(input: &str, strict: bool, out: &mut Output) -> Result<QuiverDocument, CliError> {
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Some(s)
    } else if std::path::Path::new(input).is_file() {
        Some(fs::read_to_string(input)?)
    } else {
        None
    };
    match text {
        Some(text) => {
            let (doc, warnings) = QuiverDocument::parse(&text, strict).map_err(usage)?;
            out.warnings.extend(warnings);
            Ok(doc)
        }
        None => catalog_document(input).map_err(|e| usage(format!("{input}: not a file, and {e}"))),
    }
}

/// Runs one parsed command. `serve` is handled by [`serve`].
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut out = Output::default();
    match &cli.command {
        Command::Catalog { name, action, orientation, list } => {
            if *list || name.is_none() {
                let types: Vec<String> =
                    catalog_types(api::CATALOG_MAX_VERTICES).iter().map(ToString::to_string).collect();
                let triples: Vec<String> =
                    FoldingTriple::all(api::CATALOG_MAX_VERTICES).iter().map(ToString::to_string).collect();
                if cli.json {
                    out.json(&json!({ "types": types, "triples": triples }));
                } else {
                    types.iter().chain(&triples).for_each(|t| out.line(t));
                }
                return Ok(out);
            }
            let name = name.as_deref().unwrap_or_default();
            let query = match action {
                Some(g) => format!("{name}/{g}"),
                None => name.to_string(),
            };
            let mut doc = catalog_document(&query).map_err(usage)?;
            if *orientation == Some(OrientationArg::Bipartite) && !query.contains('/') {
                let t: DynkinType = query.parse().map_err(usage)?;
                doc = doc.with_matrix(&t.diagram(&Orientation::Bipartite).map_err(usage)?);
            }
            if *orientation == Some(OrientationArg::Default) && query.contains('/') {
                return Err(usage("folding triples use the bipartite orientation fixed by their action"));
            }
            out.line(doc.to_json());
        }
        Command::Enumerate { input, iso: _, labeled, budget, dump } => {
            let doc = load(input, cli.strict, &mut out)?;
            let m = doc.matrix().map_err(usage)?;
            if *labeled {
                enumerate_labeled(&m, *budget, dump.as_ref(), cli.json, &mut out)?;
            } else {
                let result = enumerate_class(&m, *budget);
                let (class, complete) = match result {
                    Ok(c) => (c, true),
                    Err(ClassError::BudgetExceeded { partial, .. }) => (*partial, false),
                    Err(e) => return Err(e.into()),
                };
                if let Some(path) = dump {
                    write_dump(path, &class_dump(&class), &mut out)?;
                }
                if cli.json {
                    out.json(&json!({
                        "size": class.len(),
                        "convention": "iso",
                        "complete": complete,
                        "max_abs_entry": class.max_abs_entry(),
                    }));
                } else {
                    out.line(format!("size={}", class.len()));
                }
                if !complete {
                    return Err(CliError::Budget {
                        message: format!("budget of {budget} classes exceeded; size is a lower bound"),
                        stdout: out.stdout,
                    });
                }
            }
        }
        Command::Mutate { input, vertices } => {
            let doc = load(input, cli.strict, &mut out)?;
            let mut m = doc.matrix().map_err(usage)?;
            for &k in vertices {
                if k == 0 || k > m.n() {
                    return Err(usage(format!("vertex {k} out of range 1..={}", m.n())));
                }
                m = m.mutate(k - 1).map_err(usage)?;
            }
            out.line(doc.with_matrix(&m).to_json());
        }
        Command::OrbitMutate { input, orbits } => {
            let doc = load(input, cli.strict, &mut out)?;
            let mut m = doc.matrix().map_err(usage)?;
            let a = doc.group_action().map_err(usage)?.ok_or_else(|| usage("document has no action"))?;
            for &idx in orbits {
                let idx = idx.checked_sub(1).ok_or_else(|| usage("orbit indices start at 1"))?;
                m = orbit_mutate(&m, &a, idx).map_err(usage)?;
            }
            out.line(doc.with_matrix(&m).to_json());
        }
        Command::Check { input } => {
            let doc = load(input, cli.strict, &mut out)?;
            let m = doc.matrix().map_err(usage)?;
            let a = doc.group_action().map_err(usage)?.ok_or_else(|| usage("document has no action"))?;
            let report = check(&m, &a).map_err(usage)?;
            if cli.json {
                out.json(&json!({
                    "invariant": report.invariant,
                    "admissible": report.admissible,
                    "witness": report.witness.as_ref().map(witness_indices),
                    "violation": report.witness.as_ref().map(witness_json),
                }));
            } else {
                out.line(format!("invariant={} admissible={}", report.invariant, report.admissible));
                if let Some(v) = report.witness {
                    out.line(format!("witness: {v}"));
                }
            }
        }
        Command::Fold { input } => {
            let doc = load(input, cli.strict, &mut out)?;
            let m = doc.matrix().map_err(usage)?;
            let a = doc.group_action().map_err(usage)?.ok_or_else(|| usage("document has no action"))?;
            let folded = fold(&m, &a).map_err(usage)?;
            out.line(QuiverDocument::from_matrix(&folded, None).to_json());
        }
        Command::Recognize { input, budget } => {
            let doc = load(input, cli.strict, &mut out)?;
            let m = doc.matrix().map_err(usage)?;
            let name = match recognize_type(&m, *budget)? {
                Recognition::Type(t) => Some(t.to_string()),
                Recognition::Unknown => None,
            };
            if cli.json {
                out.json(&json!({ "type": name }));
            } else {
                out.line(name.unwrap_or_else(|| "unknown".into()));
            }
        }
        Command::Finite { input, budget } => {
            let doc = load(input, cli.strict, &mut out)?;
            let m = doc.matrix().map_err(usage)?;
            let verdict = is_mutation_finite(&m, *budget)?;
            if cli.json {
                out.json(&finiteness_json(&verdict));
            } else {
                out.line(match &verdict {
                    Finiteness::Finite { class_size } => format!("finite size={class_size}"),
                    Finiteness::Infinite { certificate } => {
                        let path: Vec<String> = certificate.path.iter().map(|k| (k + 1).to_string()).collect();
                        let subset: Vec<String> = certificate.subset.iter().map(|k| (k + 1).to_string()).collect();
                        format!("infinite path=[{}] subset=[{}]", path.join(","), subset.join(","))
                    }
                    Finiteness::Inconclusive { explored } => format!("inconclusive explored={explored}"),
                });
            }
            if matches!(verdict, Finiteness::Inconclusive { .. }) {
                return Err(CliError::Budget { message: "budget exceeded".into(), stdout: out.stdout });
            }
        }
        Command::Verify { triple, depth, budget, max_vertices } => {
            let triples = if triple == "all" {
                FoldingTriple::all(*max_vertices)
            } else {
                vec![triple.parse::<FoldingTriple>().map_err(usage)?]
            };
            let mut reports = Vec::new();
            let mut all_hold = true;
            for t in &triples {
                let (report, holds) = verify_triple(t, *depth, *budget)?;
                all_hold &= holds;
                reports.push(report);
            }
            let body = if reports.len() == 1 { reports.pop().expect("one report") } else { Value::Array(reports) };
            out.json(&body);
            if !all_hold {
                return Err(CliError::Counterexample { stdout: out.stdout });
            }
        }
        Command::Positivity { input, depth, path } => {
            let doc = load(input, cli.strict, &mut out)?;
            let m = doc.matrix().map_err(usage)?;
            let start = Seed::initial(&m);
            let report = positivity_audit(&start, *depth).map_err(seed_error)?;
            if !path.is_empty() {
                let steps: Vec<usize> = path.iter().map(|k| k.saturating_sub(1)).collect();
                if path.contains(&0) || steps.iter().any(|&k| k >= m.n()) {
                    return Err(usage("path vertices must lie in 1..=n"));
                }
                let s = start.mutate_sequence(&steps).map_err(seed_error)?;
                out.json(&seed_to_json(&s));
            }
            if cli.json || !path.is_empty() {
                out.json(&serde_json::to_value(&report).expect("reports serialize"));
            } else {
                out.line(format!(
                    "seeds={} variables={} violations={}",
                    report.seeds,
                    report.distinct_variables,
                    report.violations.len()
                ));
            }
            if !report.violations.is_empty() {
                return Err(CliError::Counterexample { stdout: out.stdout });
            }
        }
        Command::ExportDot { input } => {
            let doc = load(input, cli.strict, &mut out)?;
            out.stdout.push_str(&to_dot(&doc).map_err(usage)?);
        }
        Command::Serve { .. } => return Err(usage("serve is handled by the binary entry point")),
    }
    Ok(out)
}

fn seed_error(e: SeedError) -> CliError {
    usage(e)
}

fn write_dump(path: &PathBuf, text: &str, out: &mut Output) -> Result<(), CliError> {
    if path.as_os_str() == "-" {
        out.stdout.push_str(text);
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

fn enumerate_labeled(
    m: &affold::ExchangeMatrix,
    budget: usize,
    dump: Option<&PathBuf>,
    json_out: bool,
    out: &mut Output,
) -> Result<(), CliError> {
    let size: u128 = match dump {
        Some(path) => {
            let members = enumerate_labeled_class(m, budget).map_err(|e| match e {
                LabeledError::BudgetExceeded { .. } => CliError::budget(e),
                e => usage(e),
            })?;
            let mut text = String::new();
            for (idx, x) in members.iter().enumerate() {
                text.push_str(&json!({ "index": idx + 1, "b": x.rows(), "d": x.symmetrizer() }).to_string());
                text.push('\n');
            }
            write_dump(path, &text, out)?;
            members.len() as u128
        }
        None => LabeledClassModel::new(m, budget)?.labeled_size(),
    };
    if json_out {
        out.json(&json!({ "size": size.to_string(), "convention": "labeled", "complete": true }));
    } else {
        out.line(format!("size={size}"));
    }
    Ok(())
}

fn finiteness_json(v: &Finiteness) -> Value {
    match v {
        Finiteness::Finite { class_size } => json!({ "verdict": "finite", "class_size": class_size }),
        Finiteness::Infinite { certificate } => json!({
            "verdict": "infinite",
            "path": certificate.path.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "subset": certificate.subset.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "pattern": certificate.pattern,
        }),
        Finiteness::Inconclusive { explored } => json!({ "verdict": "inconclusive", "explored": explored }),
    }
}

/// The JSON report for one triple and whether every check holds.
pub fn verify_triple(t: &FoldingTriple, depth: usize, budget: usize) -> Result<(Value, bool), CliError> {
    let invariance = verify_invariance_equals_admissibility(t, budget)?;
    let (m, a) = standard_folding(t);
    let global = globally_foldable(&m, &a, budget).map_err(usage)?;
    if let GlobalFoldability::Inconclusive { explored } = global.verdict {
        return Err(CliError::budget(format!("{t}: global foldability inconclusive after {explored} states")));
    }
    let global_holds = matches!(global.verdict, GlobalFoldability::Foldable { .. }) && global.square_failures == 0;
    let seeds = if depth > 0 { Some(verify_folded_pattern(t, depth).map_err(seed_error)?) } else { None };
    let holds = invariance.holds() && global_holds && seeds.as_ref().is_none_or(|s| s.holds());
    let mut invariance_json = serde_json::to_value(&invariance).expect("reports serialize");
    invariance_json["labeled_class_size"] = json!(invariance.labeled_class_size.to_string());
    let report = json!({
        "triple": t.to_string(),
        "holds": holds,
        "invariance": invariance_json,
        "global": serde_json::to_value(&global).expect("reports serialize"),
        "seeds": seeds,
    });
    Ok((report, holds))
}

async fn dispatch(method: Method, uri: Uri, body: Bytes) -> Response {
    let path = uri.path().to_string();
    let result = tokio::task::spawn_blocking(move || api::handle(method.as_str(), &path, &body)).await;
    match result {
        Ok(r) => {
            let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
            (status, Json(r.body)).into_response()
        }
        Err(e) => {
            let body = json!({ "error": { "code": "internal", "message": e.to_string() } });
            (StatusCode::INTERNAL_SERVER_ERROR, Json(body)).into_response()
        }
    }
}

/// Every request is answered by [`api::handle`].
pub fn router() -> Router {
    Router::new().fallback(dispatch)
}

pub async fn serve(host: &str, port: u16) -> Result<(), CliError> {
    let listener = tokio::net::TcpListener::bind((host, port))
        .await
        .map_err(|e| CliError::Io(format!("cannot listen on {host}:{port}: {e}")))?;
    let addr = listener.local_addr()?;
    eprintln!("listening on http://{addr}/v1");
    axum::serve(listener, router()).await?;
    Ok(())
}

/// Parses arguments, runs the command and writes its output.
pub fn main_with_args(cli: Cli) -> ExitCode {
    if let Command::Serve { host, port } = &cli.command {
        let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
        return match rt.block_on(serve(host, *port)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}", e.message());
                e.exit_code()
            }
        };
    }
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = io::stdout().write_all(e.stdout().as_bytes());
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
