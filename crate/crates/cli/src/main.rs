//! Command-line front end: validate artifacts, compute olog and
//! wiring-diagram distances, replay edit paths, match traces, list cover
//! neighbors, and export DOT.
//!
//! Exit codes: 0 success, 1 domain failure, 2 parse/schema failure, 3 search
//! budget exhausted.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ologwd::cat::{enumerate_covers, CoverDirection, SkeletonWdGraph};
use ologwd::edit::{load_cost_config, CostFunction, EditError, EditPath, OpKind};
use ologwd::id::{AspectId, TypeId};
use ologwd::olog::{olog_shortest_path, EdgeCost, Olog, OlogDistance};
use ologwd::search::{
    wd_distance_exact_witness, with_catalog, LabelUniverse,
};
use ologwd::trace::{match_wd, Trace};
use ologwd::wd::{validate_wd, ValidationReport, WiringDiagram};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ologwd",
    about = "Concepts as ologs and wiring diagrams; analogy as a distance",
    version
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate artifacts; exit 0 only if everything passes.
    Validate(ValidateArgs),
    /// Shortest-distance metric between two types of an olog.
    OlogDist(OlogDistArgs),
    /// Edit distance between two wiring diagrams (exact search or an upper
    /// bound from a witness path).
    WdDist(WdDistArgs),
    /// Occurrences of a wiring diagram in a sensor trace.
    Match(MatchArgs),
    /// Deterministic DOT rendering of an olog or a wiring diagram.
    ExportDot(ExportDotArgs),
    /// Cover neighbors of a skeleton WD graph in the partial-order lattice.
    Covers(CoversArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Olog files to validate.
    #[arg(long = "olog")]
    ologs: Vec<PathBuf>,
    /// Wiring-diagram files to validate.
    #[arg(long = "wd")]
    wds: Vec<PathBuf>,
    /// Trace files to validate.
    #[arg(long = "trace")]
    traces: Vec<PathBuf>,
    /// Cost-config files to validate.
    #[arg(long = "costs")]
    costs: Vec<PathBuf>,
    /// Edit-path files to validate.
    #[arg(long = "path")]
    paths: Vec<PathBuf>,
    /// Do not require WD3 (skeleton) on wiring diagrams.
    #[arg(long)]
    no_skeleton: bool,
    /// Do not require membership in W_s^• (nonempty state vectors).
    #[arg(long)]
    allow_empty: bool,
}

#[derive(Args)]
struct OlogDistArgs {
    #[arg(long)]
    olog: PathBuf,
    /// Source type id.
    #[arg(long)]
    from: String,
    /// Target type id.
    #[arg(long)]
    to: String,
    /// Per-aspect edge costs as a JSON object file; unit costs if omitted.
    #[arg(long)]
    edge_costs: Option<PathBuf>,
}

#[derive(Args)]
struct WdDistArgs {
    /// First diagram.
    #[arg(long)]
    left: PathBuf,
    /// Second diagram.
    #[arg(long)]
    right: PathBuf,
    /// Cost configuration; unit costs if omitted.
    #[arg(long)]
    costs: Option<PathBuf>,
    /// Replay this edit path from the left diagram and report its cost as an
    /// upper bound.
    #[arg(long, conflicts_with = "exact")]
    path: Option<PathBuf>,
    /// Run the exact minimum-cost search.
    #[arg(long)]
    exact: bool,
    /// Cost budget for the exact search.
    #[arg(long)]
    budget: Option<f64>,
    /// Olog radius for expanding the label universe beyond the endpoints'
    /// labels (olog-backed change rule only).
    #[arg(long, default_value_t = 0.0)]
    radius: f64,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    wd: PathBuf,
    /// Report at most this many assignments.
    #[arg(long)]
    first: Option<usize>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long, conflicts_with = "wd")]
    olog: Option<PathBuf>,
    #[arg(long)]
    wd: Option<PathBuf>,
}

#[derive(Args)]
struct CoversArgs {
    /// Wiring-diagram file whose underlying graph is inspected.
    #[arg(long)]
    wd: PathBuf,
    #[arg(long, value_enum)]
    direction: Direction,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Up,
    Down,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate(args) => cmd_validate(cli.format, args),
        Command::OlogDist(args) => cmd_olog_dist(cli.format, args),
        Command::WdDist(args) => cmd_wd_dist(cli.format, args),
        Command::Match(args) => cmd_match(cli.format, args),
        Command::ExportDot(args) => cmd_export_dot(args),
        Command::Covers(args) => cmd_covers(cli.format, args),
    }
}

fn load_olog(path: &Path) -> Result<Olog, Failure> {
    Olog::load(path).map_err(Failure::parse)
}

fn load_wd(path: &Path) -> Result<WiringDiagram, Failure> {
    WiringDiagram::load(path).map_err(Failure::parse)
}

fn load_trace(path: &Path) -> Result<Trace, Failure> {
    Trace::load(path).map_err(Failure::parse)
}

fn load_costs(path: Option<&PathBuf>) -> Result<CostFunction, Failure> {
    match path {
        None => Ok(CostFunction::unit()),
        Some(p) => load_cost_config(p).map_err(Failure::parse),
    }
}

fn emit<T: Serialize>(format: Format, report: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        ),
        Format::Text => println!("{}", text()),
    }
}

// --- validate ----------------------------------------------------------------

#[derive(Serialize)]
struct ValidateReport {
    artifacts: Vec<ArtifactReport>,
    passed: bool,
}

#[derive(Serialize)]
struct ArtifactReport {
    path: String,
    kind: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ValidationReport>,
}

fn cmd_validate(format: Format, args: ValidateArgs) -> Result<(), Failure> {
    if args.ologs.is_empty()
        && args.wds.is_empty()
        && args.traces.is_empty()
        && args.costs.is_empty()
        && args.paths.is_empty()
    {
        return Err(Failure::parse("no artifacts given; pass --olog/--wd/--trace/--costs/--path"));
    }

    let mut artifacts = Vec::new();
    for path in &args.ologs {
        load_olog(path)?;
        artifacts.push(ArtifactReport {
            path: path.display().to_string(),
            kind: "olog",
            passed: true,
            report: None,
        });
    }
    for path in &args.wds {
        let wd = load_wd(path)?;
        let report = validate_wd(&wd, !args.no_skeleton, !args.allow_empty);
        artifacts.push(ArtifactReport {
            path: path.display().to_string(),
            kind: "wiring-diagram",
            passed: report.passed(),
            report: Some(report),
        });
    }
    for path in &args.traces {
        load_trace(path)?;
        artifacts.push(ArtifactReport {
            path: path.display().to_string(),
            kind: "trace",
            passed: true,
            report: None,
        });
    }
    for path in &args.costs {
        load_cost_config(path).map_err(Failure::parse)?;
        artifacts.push(ArtifactReport {
            path: path.display().to_string(),
            kind: "cost-config",
            passed: true,
            report: None,
        });
    }
    for path in &args.paths {
        EditPath::load(path).map_err(Failure::parse)?;
        artifacts.push(ArtifactReport {
            path: path.display().to_string(),
            kind: "edit-path",
            passed: true,
            report: None,
        });
    }

    let passed = artifacts.iter().all(|a| a.passed);
    let report = ValidateReport { artifacts, passed };
    emit(format, &report, || {
        let mut out = String::new();
        for artifact in &report.artifacts {
            out.push_str(&format!(
                "{} [{}]: {}\n",
                artifact.path,
                artifact.kind,
                if artifact.passed { "pass" } else { "FAIL" }
            ));
            if let Some(r) = &artifact.report {
                out.push_str(&r.to_string());
            }
        }
        out.push_str(if report.passed { "all checks passed" } else { "validation failed" });
        out
    });
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: String::new(),
        })
    }
}

// --- olog-dist ----------------------------------------------------------------

#[derive(Serialize)]
struct OlogDistReport {
    from: TypeId,
    to: TypeId,
    distance: OlogDistance,
    path: Vec<PathStep>,
}

#[derive(Serialize)]
struct PathStep {
    aspect: AspectId,
    text: String,
    src: TypeId,
    dst: TypeId,
}

fn cmd_olog_dist(format: Format, args: OlogDistArgs) -> Result<(), Failure> {
    let olog = load_olog(&args.olog)?;
    let costs = match &args.edge_costs {
        None => EdgeCost::unit(&olog),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            let map: BTreeMap<AspectId, f64> =
                serde_json::from_str(&text).map_err(|e| Failure::parse(e.to_string()))?;
            EdgeCost::from_map(map).map_err(|e| Failure::parse(e.to_string()))?
        }
    };
    let (from, to) = (TypeId::new(args.from), TypeId::new(args.to));
    let (distance, path) = olog_shortest_path(&olog, &costs, &from, &to)
        .map_err(|e| Failure::domain(e.to_string()))?;
    let steps: Vec<PathStep> = path
        .unwrap_or_default()
        .into_iter()
        .map(|id| {
            let aspect = olog.aspect(&id).expect("witness aspect exists");
            PathStep {
                aspect: id,
                text: aspect.text.clone(),
                src: aspect.src.clone(),
                dst: aspect.dst.clone(),
            }
        })
        .collect();
    let report = OlogDistReport {
        from,
        to,
        distance,
        path: steps,
    };
    emit(format, &report, || {
        let mut out = format!(
            "d({}, {}) = {}\n",
            report.from, report.to, report.distance
        );
        if report.path.is_empty() {
            out.push_str("(no connecting path)");
        } else {
            out.push_str("via:");
            for step in &report.path {
                out.push_str(&format!(
                    "\n  {} ({}): {} -> {}",
                    step.aspect, step.text, step.src, step.dst
                ));
            }
        }
        out
    });
    Ok(())
}

// --- wd-dist ----------------------------------------------------------------

#[derive(Serialize)]
struct WdDistReport {
    mode: &'static str,
    distance: f64,
    isomorphic: bool,
    ops: Vec<OpReport>,
}

#[derive(Serialize)]
struct OpReport {
    index: usize,
    kind: OpKind,
    numeral: &'static str,
    cost: f64,
}

fn op_reports(path: Option<&EditPath>, costs: &CostFunction) -> Result<Vec<OpReport>, Failure> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    path.ops()
        .iter()
        .enumerate()
        .map(|(index, op)| {
            Ok(OpReport {
                index,
                kind: op.kind(),
                numeral: op.kind().numeral(),
                cost: costs.cost(op).map_err(|e| Failure::domain(e.to_string()))?,
            })
        })
        .collect()
}

fn emit_wd_dist(format: Format, report: &WdDistReport) {
    emit(format, report, || {
        let mut out = format!("{} distance: {}", report.mode, report.distance);
        if report.isomorphic {
            out.push_str("\ndiagrams are isomorphic");
        }
        for op in &report.ops {
            out.push_str(&format!(
                "\n  E{}: {} {} cost {}",
                op.index + 1,
                op.kind,
                "",
                op.cost
            ));
        }
        out
    });
}

fn cmd_wd_dist(format: Format, args: WdDistArgs) -> Result<(), Failure> {
    let left = load_wd(&args.left)?;
    let right = load_wd(&args.right)?;
    let costs = load_costs(args.costs.as_ref())?;

    for (name, wd) in [("left", &left), ("right", &right)] {
        let report = validate_wd(wd, true, true);
        if !report.passed() {
            return Err(Failure::domain(format!(
                "{name} diagram is not in W_s^•:\n{report}"
            )));
        }
    }

    if let Some(path_file) = &args.path {
        let path = EditPath::load(path_file).map_err(Failure::parse)?;
        let sensors = ologwd::search::merged_sensors(&left, &right)
            .map_err(|e| Failure::domain(e.to_string()))?;
        let start = with_catalog(&left, &sensors);
        let bound = ologwd::edit::wd_distance_upper(&start, &right, &path, &costs)
            .map_err(|e| Failure::domain(e.to_string()))?;
        let report = WdDistReport {
            mode: "upper-bound",
            distance: bound,
            isomorphic: false,
            ops: op_reports(Some(&path), &costs)?,
        };
        emit_wd_dist(format, &report);
        return Ok(());
    }

    if !args.exact {
        return Err(Failure::parse("pass --exact or --path FILE"));
    }
    let Some(budget) = args.budget else {
        return Err(Failure::parse("--exact requires --budget"));
    };
    let universe = LabelUniverse::from_endpoints(&left, &right)
        .map_err(|e| Failure::domain(e.to_string()))?
        .expand_by_olog(&costs, args.radius);
    match wd_distance_exact_witness(&left, &right, &costs, &universe, budget) {
        Ok(outcome) => {
            let report = WdDistReport {
                mode: "exact",
                distance: outcome.distance,
                isomorphic: outcome.path.is_none(),
                ops: op_reports(outcome.path.as_ref(), &costs)?,
            };
            emit_wd_dist(format, &report);
            Ok(())
        }
        Err(EditError::BudgetExceeded {
            budget,
            upper_bound,
        }) => Err(Failure {
            code: 3,
            message: format!(
                "budget {budget} exhausted; best known upper bound is {upper_bound}"
            ),
        }),
        Err(e) => Err(Failure::domain(e.to_string())),
    }
}

// --- match ----------------------------------------------------------------

#[derive(Serialize)]
struct MatchReport {
    count: usize,
    assignments: Vec<BTreeMap<String, i64>>,
}

fn cmd_match(format: Format, args: MatchArgs) -> Result<(), Failure> {
    let trace = load_trace(&args.trace)?;
    let wd = load_wd(&args.wd)?;
    let assignments =
        match_wd(&trace, &wd, args.first).map_err(|e| Failure::domain(e.to_string()))?;
    let report = MatchReport {
        count: assignments.len(),
        assignments: assignments
            .iter()
            .map(|a| {
                a.times
                    .iter()
                    .map(|(v, t)| (v.to_string(), *t))
                    .collect()
            })
            .collect(),
    };
    emit(format, &report, || {
        if report.count == 0 {
            return "no match".to_owned();
        }
        let mut out = format!("{} assignment(s)", report.count);
        for (i, a) in report.assignments.iter().enumerate() {
            out.push_str(&format!("\n  #{}:", i + 1));
            for (v, t) in a {
                out.push_str(&format!(" {v}@{t}"));
            }
        }
        out
    });
    Ok(())
}

// --- export-dot ----------------------------------------------------------------

fn cmd_export_dot(args: ExportDotArgs) -> Result<(), Failure> {
    match (&args.olog, &args.wd) {
        (Some(path), None) => {
            print!("{}", load_olog(path)?.to_dot());
            Ok(())
        }
        (None, Some(path)) => {
            print!("{}", load_wd(path)?.to_dot());
            Ok(())
        }
        _ => Err(Failure::parse("pass exactly one of --olog or --wd")),
    }
}

// --- covers ----------------------------------------------------------------

#[derive(Serialize)]
struct CoversReport {
    direction: &'static str,
    count: usize,
    covers: Vec<CoverReport>,
}

#[derive(Serialize)]
struct CoverReport {
    arrows: Vec<(String, String)>,
}

fn cmd_covers(format: Format, args: CoversArgs) -> Result<(), Failure> {
    let wd = load_wd(&args.wd)?;
    let graph = SkeletonWdGraph::new(wd.graph().clone())
        .map_err(|e| Failure::domain(e.to_string()))?;
    let direction = match args.direction {
        Direction::Up => CoverDirection::Up,
        Direction::Down => CoverDirection::Down,
    };
    let covers = enumerate_covers(&graph, direction);
    let report = CoversReport {
        direction: match args.direction {
            Direction::Up => "up",
            Direction::Down => "down",
        },
        count: covers.len(),
        covers: covers
            .iter()
            .map(|g| CoverReport {
                arrows: g
                    .graph()
                    .arrow_pairs()
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
            })
            .collect(),
    };
    emit(format, &report, || {
        let mut out = format!("{} {} cover(s)", report.count, report.direction);
        for (i, cover) in report.covers.iter().enumerate() {
            let arrows = cover
                .arrows
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!("\n  #{}: [{}]", i + 1, arrows));
        }
        out
    });
    Ok(())
}
