//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when the graph cannot be
//! loaded or a label does not resolve. Diagnostics go to stderr as one line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{EntityId, KnowledgeGraph};
use crate::ingest::GraphFormat;
use crate::scoring::{RankingMode, ScoreCard, Scorer, ScoringParams};
use crate::traversal::{diameter, multi_source_bfs, shortest_relation_path, Context};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kg-surprise",
    version,
    about = "Score knowledge-graph entity groundings by shortest-path surprise and relation-path complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score candidates and sort them (lowest free energy first by default).
    Rank(ScoreArgs),
    /// Score candidates in the order given.
    Score(ScoreArgs),
    /// Hop distance from the context to every entity.
    Distances(DistanceArgs),
    /// Show the shortest relation path from the context to one entity.
    Explain(ExplainArgs),
    /// Entity, relation and edge counts, diameter and suggested alpha.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Triple file: TSV, or N-Triples when the name ends in `.nt`.
    #[arg(long, value_name = "PATH")]
    graph: PathBuf,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum ModeArg {
    #[default]
    Pragmatic,
    Epistemic,
}

impl From<ModeArg> for RankingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Pragmatic => RankingMode::Pragmatic,
            ModeArg::Epistemic => RankingMode::Epistemic,
        }
    }
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Comma-separated context entity labels.
    #[arg(long, value_name = "LIST")]
    context: String,
    /// Comma-separated candidate entity labels.
    #[arg(long, value_name = "LIST", conflicts_with = "candidates_file")]
    candidates: Option<String>,
    /// File with one candidate label per line.
    #[arg(long, value_name = "PATH")]
    candidates_file: Option<PathBuf>,
    /// Disconnection penalty; defaults to diameter + 1.
    #[arg(long, value_name = "N")]
    alpha: Option<f64>,
    /// Weight of the path complexity term.
    #[arg(long, value_name = "X", default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct DistanceArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_name = "LIST")]
    context: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_name = "LIST")]
    context: String,
    /// Target entity label.
    #[arg(long, value_name = "LABEL")]
    entity: String,
    /// Disconnection penalty shown for unreachable targets; defaults to diameter + 1.
    #[arg(long, value_name = "N")]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// One scored candidate as it appears in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub entity: String,
    pub distance: Option<u32>,
    pub s_geo: f64,
    pub k: f64,
    pub f: f64,
    /// Alternating node and relation labels, or `null` when unreachable.
    pub path: Option<Vec<String>>,
}

impl OutputRecord {
    pub fn new(graph: &KnowledgeGraph, card: &ScoreCard) -> Self {
        OutputRecord {
            entity: graph.entity_label(card.entity).to_owned(),
            distance: card.distance,
            s_geo: card.s_geo,
            k: card.k,
            f: card.f,
            path: card.path.as_ref().map(|p| p.labels(graph)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub schema: u32,
    pub command: String,
    pub mode: String,
    pub alpha: f64,
    pub lambda: f64,
    pub context: Vec<String>,
    pub results: Vec<OutputRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub entity: String,
    pub distance: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub schema: u32,
    pub context: Vec<String>,
    pub distances: Vec<DistanceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub schema: u32,
    pub entity: String,
    pub distance: Option<u32>,
    pub path: Option<Vec<String>>,
    pub rendered: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub schema: u32,
    pub entities: usize,
    pub relations: usize,
    pub edges: usize,
    pub diameter: u32,
    pub suggested_alpha: f64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlpha(_) | Error::InvalidLambda(_) | Error::NoCandidates => {
                Failure::Usage(e.to_string())
            }
            Error::UnknownEntity(label) => {
                Failure::Data(format!("unknown entity `{label}`; check the label against the graph file"))
            }
            other => Failure::Data(other.to_string()),
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
                _ => {
                    let _ = writeln!(stderr, "{}", one_line(&e.render().to_string()));
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Rank(args) => cmd_score(args, true, stdout, stderr),
        Command::Score(args) => cmd_score(args, false, stdout, stderr),
        Command::Distances(args) => cmd_distances(args, stdout),
        Command::Explain(args) => cmd_explain(args, stdout, stderr),
        Command::Stats(args) => cmd_stats(args, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DATA
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: writing output: {e}");
            EXIT_DATA
        }
    }
}

/// Collapses clap's multi-line error into one line, dropping the usage block.
fn one_line(rendered: &str) -> String {
    let parts: Vec<&str> = rendered
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:"))
        .filter(|l| !l.is_empty())
        .collect();
    format!("{} (see --help)", parts.join(" "))
}

fn load_graph(path: &Path) -> Result<KnowledgeGraph, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::Data(format!("cannot open graph `{}`: {e}", path.display())))?;
    GraphFormat::from_path(path)
        .parse(BufReader::new(file))
        .map_err(|d| Failure::Data(format!("{}: {d}", path.display())))
}

fn split_list(flag: &str, list: &str) -> Result<Vec<String>, Failure> {
    let items: Vec<String> = list.split(',').map(|s| s.trim().to_owned()).collect();
    if items.iter().any(String::is_empty) {
        return Err(Failure::Usage(format!(
            "--{flag} contains an empty label; pass a comma-separated list like `A,B`"
        )));
    }
    Ok(items)
}

fn read_candidates_file(path: &Path) -> Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::Data(format!("cannot read candidates file `{}`: {e}", path.display()))
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}

fn resolve_context(graph: &KnowledgeGraph, list: &str) -> Result<(Context, Vec<String>), Failure> {
    let labels = split_list("context", list)?;
    let ctx = Context::from_labels(graph, &labels)?;
    let names = ctx
        .entities()
        .iter()
        .map(|&e| graph.entity_label(e).to_owned())
        .collect();
    Ok((ctx, names))
}

fn resolve_alpha(
    graph: &KnowledgeGraph,
    alpha: Option<f64>,
    stderr: &mut dyn Write,
) -> Result<f64, Failure> {
    match alpha {
        Some(a) if a.is_finite() && a > 0.0 => Ok(a),
        Some(a) => Err(Failure::Usage(format!("--alpha must be a positive number, got {a}"))),
        None => {
            let d = diameter(graph);
            let a = f64::from(d) + 1.0;
            writeln!(stderr, "alpha not given; using diameter + 1 = {a} (diameter {d})")?;
            Ok(a)
        }
    }
}

fn cmd_score(
    args: ScoreArgs,
    sort: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    if !(args.lambda.is_finite() && args.lambda >= 0.0) {
        return Err(Failure::Usage(format!(
            "--lambda must be a non-negative number, got {}",
            args.lambda
        )));
    }
    let candidate_labels = match (&args.candidates, &args.candidates_file) {
        (Some(list), None) => split_list("candidates", list)?,
        (None, Some(path)) => read_candidates_file(path)?,
        _ => {
            return Err(Failure::Usage(
                "one of --candidates or --candidates-file is required".into(),
            ))
        }
    };
    if candidate_labels.is_empty() {
        return Err(Failure::Usage("no candidates given".into()));
    }

    let graph = load_graph(&args.graph.graph)?;
    let (context, context_names) = resolve_context(&graph, &args.context)?;
    let candidates = candidate_labels
        .iter()
        .map(|l| graph.require_entity(l))
        .collect::<Result<Vec<EntityId>, _>>()?;
    let alpha = resolve_alpha(&graph, args.alpha, stderr)?;
    let params = ScoringParams::new(alpha, args.lambda, args.mode.into())?;

    let scorer = Scorer::new(&graph, &context, params)?;
    let cards = if sort {
        scorer.rank(&candidates)?
    } else {
        scorer.score_all(&candidates)?
    };
    let report = ScoreReport {
        schema: SCHEMA_VERSION,
        command: if sort { "rank" } else { "score" }.into(),
        mode: params.mode.to_string(),
        alpha,
        lambda: args.lambda,
        context: context_names,
        results: cards.iter().map(|c| OutputRecord::new(&graph, c)).collect(),
    };
    match args.format {
        Format::Json => write_json(stdout, &report),
        Format::Table => write_score_table(stdout, &report),
    }
}

fn cmd_distances(args: DistanceArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let graph = load_graph(&args.graph.graph)?;
    let (context, context_names) = resolve_context(&graph, &args.context)?;
    let dm = multi_source_bfs(&graph, &context)?;
    let report = DistanceReport {
        schema: SCHEMA_VERSION,
        context: context_names,
        distances: dm
            .iter()
            .map(|(e, d)| DistanceRecord {
                entity: graph.entity_label(e).to_owned(),
                distance: d,
            })
            .collect(),
    };
    match args.format {
        Format::Json => write_json(stdout, &report),
        Format::Table => {
            let rows: Vec<Vec<String>> = report
                .distances
                .iter()
                .map(|r| vec![r.entity.clone(), opt_to_string(r.distance)])
                .collect();
            write_table(stdout, &["entity", "distance"], &rows)
        }
    }
}

fn cmd_explain(
    args: ExplainArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let graph = load_graph(&args.graph.graph)?;
    let (context, _) = resolve_context(&graph, &args.context)?;
    let target = graph.require_entity(&args.entity)?;
    let dm = multi_source_bfs(&graph, &context)?;
    let path = shortest_relation_path(&graph, &dm, target)?;
    let label = graph.entity_label(target);
    let rendered = match &path {
        Some(p) if p.is_empty() => format!("{label} is in the context (zero-length path)"),
        Some(p) => p.render(&graph),
        None => {
            let alpha = resolve_alpha(&graph, args.alpha, stderr)?;
            format!("{label}: no path (surprise = alpha = {alpha})")
        }
    };
    match args.format {
        Format::Table => writeln!(stdout, "{rendered}")?,
        Format::Json => write_json(
            stdout,
            &ExplainReport {
                schema: SCHEMA_VERSION,
                entity: label.to_owned(),
                distance: dm.distance(target)?,
                path: path.as_ref().map(|p| p.labels(&graph)),
                rendered,
            },
        )?,
    }
    Ok(())
}

fn cmd_stats(args: StatsArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let graph = load_graph(&args.graph.graph)?;
    let d = diameter(&graph);
    let report = StatsReport {
        schema: SCHEMA_VERSION,
        entities: graph.entity_count(),
        relations: graph.relation_count(),
        edges: graph.edge_count(),
        diameter: d,
        suggested_alpha: f64::from(d) + 1.0,
    };
    match args.format {
        Format::Json => write_json(stdout, &report),
        Format::Table => {
            let rows = vec![
                vec!["entities".into(), report.entities.to_string()],
                vec!["relations".into(), report.relations.to_string()],
                vec!["edges".into(), report.edges.to_string()],
                vec!["diameter".into(), report.diameter.to_string()],
                vec!["suggested_alpha".into(), report.suggested_alpha.to_string()],
            ];
            write_table(stdout, &["stat", "value"], &rows)
        }
    }
}

fn opt_to_string<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "null".to_owned(), |v| v.to_string())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn write_score_table(out: &mut dyn Write, report: &ScoreReport) -> Result<(), Failure> {
    let rows: Vec<Vec<String>> = report
        .results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (i + 1).to_string(),
                r.entity.clone(),
                opt_to_string(r.distance),
                r.s_geo.to_string(),
                r.k.to_string(),
                r.f.to_string(),
                r.path.as_ref().map_or_else(|| "-".to_owned(), |p| render_labels(p)),
            ]
        })
        .collect();
    write_table(out, &["#", "entity", "distance", "s_geo", "k", "f", "path"], &rows)
}

/// Renders alternating node/relation labels as `A -r-> B`.
fn render_labels(labels: &[String]) -> String {
    let mut out = labels[0].clone();
    for pair in labels[1..].chunks(2) {
        out.push_str(&format!(" -{}-> {}", pair[0], pair[1]));
    }
    out
}

fn write_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let last = cells.len() - 1;
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == last {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        s
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
