//! `loopft` — scriptable front end for loop-aware fault-tree analysis.
//!
//! Every subcommand reads a model file (`-` for stdin), runs one analysis,
//! and emits a deterministic report: JSON by default (sorted keys), a plain
//! text form for humans, CSV for the state table. Exit codes: 0 success,
//! 1 usage error, 2 analysis error, 3 product cap exceeded. Diagnostics go
//! to stderr as one `error: <Kind>: <detail>` line.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use loopft::cutset::{minimal_cut_sets_with_cap, CutsetError, Dnf, DEFAULT_PRODUCT_CAP};
use loopft::fixpoint::{eval_least_fixpoint, RelaxOutcome};
use loopft::loops::analyze_structure_with_cap;
use loopft::model::{Assignment, FaultTree, ModelError, StateVector};
use loopft::parse::{parse_trajectory, parse_tree, ParseError};
use loopft::quantify::{top_probability_with_cap, QuantError, QuantMethod};
use loopft::sim::{simulate, SimError};
use loopft::solutions::{build_state_table, enumerate_solutions, SolutionError, StateTable};

#[derive(Parser)]
#[command(name = "loopft", version, about = "Fault-tree analysis for trees with logical loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model file.
    Validate(ModelArgs),
    /// Strongly connected components and their loop classes.
    Loops(ModelArgs),
    /// Least-fixed-point gate values for one assignment.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// Total assignment `id=0|1,...` over every basic event.
        #[arg(long)]
        assign: String,
    },
    /// Minimal cut sets of one top gate.
    Mcs {
        #[command(flatten)]
        model: ModelArgs,
        /// Target gate.
        #[arg(long)]
        top: String,
    },
    /// Every gate state consistent with the equations for one assignment.
    Solutions {
        #[command(flatten)]
        model: ModelArgs,
        /// Total assignment `id=0|1,...` over every basic event.
        #[arg(long)]
        assign: String,
    },
    /// Availability table over all assignments.
    Table {
        #[command(flatten)]
        model: ModelArgs,
        /// Candidate gate state `id=0|1,...` (repeatable); defaults to every
        /// combination of gate values.
        #[arg(long = "candidates")]
        candidates: Vec<String>,
    },
    /// Run a trajectory file against the model.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// CSV file of `time,basic_id,value` events.
        #[arg(long)]
        trajectory: PathBuf,
    },
    /// TOP probability from basic-event probabilities.
    Quantify {
        #[command(flatten)]
        model: ModelArgs,
        /// Target gate.
        #[arg(long)]
        top: String,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Model file; `-` reads stdin.
    input: String,
    /// Output format; `csv` applies to `table` only.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Product cap for DNF-based work (also env `FT_PRODUCT_CAP`).
    #[arg(long)]
    product_cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Sum P(assignment) over every assignment that turns the target on.
    Enumeration,
    /// Exact alternating sum over unions of minimal cut sets.
    InclusionExclusion,
    /// Upper bound: sum of cut-set probabilities.
    RareEvent,
}

impl From<MethodArg> for QuantMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Enumeration => QuantMethod::ExhaustiveEnumeration,
            MethodArg::InclusionExclusion => QuantMethod::InclusionExclusion,
            MethodArg::RareEvent => QuantMethod::RareEventApprox,
        }
    }
}

// ---------------------------------------------------------------------------
// Error mapping: every failure becomes one stderr line and an exit class.

struct CliError {
    kind: &'static str,
    detail: String,
    code: i32,
}

fn usage(detail: impl Into<String>) -> CliError {
    CliError { kind: "Usage", detail: detail.into(), code: 1 }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let (kind, detail) = match &e {
            ModelError::DuplicateId(id) => ("DuplicateId", id.clone()),
            ModelError::UnresolvedReference(id) => ("UnresolvedReference", id.clone()),
            ModelError::EmptyTops => ("EmptyTops", "no top gates declared".into()),
            ModelError::BadKooN { gate, k, n } => ("BadKooN", format!("gate {gate}: k={k}, n={n}")),
            ModelError::BadProbability { id, prob } => ("BadProbability", format!("{id}: {prob}")),
            ModelError::EmptyOperands { gate } => ("EmptyOperands", gate.clone()),
        };
        CliError { kind, detail, code: 2 }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Syntax { line, col, msg } => {
                CliError { kind: "SyntaxError", detail: format!("{line}:{col}: {msg}"), code: 2 }
            }
            ParseError::NonMonotoneTime { line, time, prev } => CliError {
                kind: "NonMonotoneTime",
                detail: format!("line {line}: {time} after {prev}"),
                code: 2,
            },
            ParseError::Model(m) => m.into(),
        }
    }
}

impl From<CutsetError> for CliError {
    fn from(e: CutsetError) -> Self {
        match e {
            CutsetError::CapExceeded { cap } => {
                CliError { kind: "CapExceeded", detail: cap.to_string(), code: 3 }
            }
            CutsetError::RepairableUnsupported { ids } => {
                CliError { kind: "RepairableUnsupported", detail: ids.join(", "), code: 2 }
            }
            CutsetError::UnknownGate(id) => CliError { kind: "UnknownGate", detail: id, code: 2 },
        }
    }
}

impl From<SolutionError> for CliError {
    fn from(e: SolutionError) -> Self {
        let kind = match e {
            SolutionError::TooManyLoopGates { .. } => "TooManyLoopGates",
            SolutionError::TooManyBasics { .. } => "TooManyBasics",
            SolutionError::TooManyGates { .. } => "TooManyGates",
        };
        CliError { kind, detail: e.to_string(), code: 2 }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let (kind, detail) = match &e {
            SimError::IllegalRepair { id, time } => ("IllegalRepair", format!("{id} at t={time}")),
            SimError::UnknownBasic { id, time } => ("UnknownBasic", format!("{id} at t={time}")),
        };
        CliError { kind, detail, code: 2 }
    }
}

impl From<QuantError> for CliError {
    fn from(e: QuantError) -> Self {
        let (kind, detail, code) = match &e {
            QuantError::UnknownGate(id) => ("UnknownGate", id.clone(), 2),
            QuantError::MissingProbability { ids } => ("MissingProbability", ids.join(", "), 2),
            QuantError::RepairableUnsupported { ids } => {
                ("RepairableUnsupported", ids.join(", "), 2)
            }
            QuantError::TooLarge { what, count, max } => {
                ("TooLarge", format!("{count} {what} exceed {max}"), 2)
            }
            QuantError::CapExceeded { cap } => ("CapExceeded", cap.to_string(), 3),
        };
        CliError { kind, detail, code }
    }
}

// ---------------------------------------------------------------------------
// Input helpers

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read `{path}`: {e}")))
    }
}

fn load_tree(model: &ModelArgs) -> Result<FaultTree, CliError> {
    Ok(parse_tree(&read_input(&model.input)?)?)
}

fn product_cap(model: &ModelArgs) -> Result<usize, CliError> {
    if let Some(cap) = model.product_cap {
        return Ok(cap);
    }
    match std::env::var("FT_PRODUCT_CAP") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| usage(format!("FT_PRODUCT_CAP must be an integer, found `{raw}`"))),
        Err(_) => Ok(DEFAULT_PRODUCT_CAP),
    }
}

/// Parses `id=0|1,...` pairs that must cover `expected` exactly.
fn parse_valuation(
    raw: &str,
    expected: &[String],
    what: &str,
) -> Result<Vec<(String, bool)>, CliError> {
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (id, value) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("bad {what} entry `{part}`; expected id=0|1")))?;
        let id = id.trim();
        let value = match value.trim() {
            "0" => false,
            "1" => true,
            other => return Err(usage(format!("bad {what} value `{other}` for `{id}`"))),
        };
        if !expected.iter().any(|e| e == id) {
            return Err(usage(format!("unknown id `{id}` in {what}")));
        }
        if !seen.insert(id.to_string()) {
            return Err(usage(format!("duplicate id `{id}` in {what}")));
        }
        pairs.push((id.to_string(), value));
    }
    let missing: Vec<&String> = expected.iter().filter(|e| !seen.contains(*e)).collect();
    if !missing.is_empty() {
        return Err(usage(format!(
            "{what} must cover every id; missing: {}",
            missing.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(pairs)
}

fn parse_assignment(raw: &str, tree: &FaultTree) -> Result<Assignment, CliError> {
    let basics: Vec<String> = tree.basics().iter().map(|b| b.id.clone()).collect();
    Ok(Assignment::from_pairs(parse_valuation(raw, &basics, "assignment")?))
}

fn parse_candidate(raw: &str, tree: &FaultTree) -> Result<StateVector, CliError> {
    let gates: Vec<String> = tree.gates().iter().map(|g| g.id.clone()).collect();
    Ok(StateVector::from_pairs(parse_valuation(raw, &gates, "candidate")?))
}

// ---------------------------------------------------------------------------
// Report rendering

fn state_json(s: &StateVector) -> Value {
    Value::Object(s.iter().map(|(id, v)| (id.to_string(), Value::Bool(v))).collect())
}

fn assignment_json(a: &Assignment) -> Value {
    Value::Object(a.iter().map(|(id, v)| (id.to_string(), Value::Bool(v))).collect())
}

fn mcs_json(dnf: &Dnf) -> Value {
    Value::Array(
        dnf.products()
            .map(|p| Value::Array(p.literals().map(|l| Value::String(l.to_string())).collect()))
            .collect(),
    )
}

fn bit(v: bool) -> &'static str {
    if v {
        "1"
    } else {
        "0"
    }
}

fn state_text(s: &StateVector) -> String {
    s.iter().map(|(id, v)| format!("{id}={}", bit(v))).collect::<Vec<_>>().join(" ")
}

fn render_json(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable report");
    out.push('\n');
    out
}

fn need_json_or_text(format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        Err(usage("csv output is only available for `table`"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Subcommands

fn run_validate(model: &ModelArgs) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    Ok(match model.format {
        Format::Json => render_json(&json!({
            "basics": tree.basics().len(),
            "gates": tree.gates().len(),
            "tops": tree.tops(),
        })),
        _ => format!(
            "ok: {} basics, {} gates, tops: {}\n",
            tree.basics().len(),
            tree.gates().len(),
            tree.tops().join(", ")
        ),
    })
}

fn run_loops(model: &ModelArgs) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    let report = analyze_structure_with_cap(&tree, product_cap(model)?);
    Ok(match model.format {
        Format::Json => {
            let components: Vec<Value> = report
                .components
                .iter()
                .map(|c| {
                    json!({
                        "gates": c.gates,
                        "class": c.class.map(|cl| cl.label()),
                    })
                })
                .collect();
            render_json(&json!({
                "components": components,
                "cap_exceeded": report.cap_exceeded(),
            }))
        }
        _ => {
            let mut out = String::new();
            for c in &report.components {
                out.push_str(&format!(
                    "{{{}}}: {}\n",
                    c.gates.join(","),
                    c.class.map(|cl| cl.label()).unwrap_or("CapExceeded")
                ));
            }
            out
        }
    })
}

fn run_eval(model: &ModelArgs, assign: &str) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    let a = parse_assignment(assign, &tree)?;
    let state = eval_least_fixpoint(&tree, &a);
    Ok(match model.format {
        Format::Json => render_json(&state_json(&state)),
        _ => state.iter().map(|(id, v)| format!("{id}={}\n", bit(v))).collect(),
    })
}

fn run_mcs(model: &ModelArgs, top: &str) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    let mcs = minimal_cut_sets_with_cap(&tree, top, product_cap(model)?)?;
    Ok(match model.format {
        Format::Json => render_json(&mcs_json(&mcs)),
        _ => mcs.products().map(|p| format!("{p}\n")).collect(),
    })
}

fn run_solutions(model: &ModelArgs, assign: &str) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    let a = parse_assignment(assign, &tree)?;
    let report = enumerate_solutions(&tree, &a)?;
    Ok(match model.format {
        Format::Json => {
            let dual: Value = Value::Object(
                report.dual.iter().map(|(id, &v)| (id.clone(), Value::Bool(v))).collect(),
            );
            render_json(&json!({
                "assignment": assignment_json(&report.assignment),
                "solutions": report.solutions.iter().map(state_json).collect::<Vec<_>>(),
                "least": state_json(&report.least),
                "dual": dual,
            }))
        }
        _ => {
            let mut out = format!("solutions: {}\n", report.solutions.len());
            for s in &report.solutions {
                out.push_str(&state_text(s));
                out.push('\n');
            }
            out.push_str(&format!("least: {}\n", state_text(&report.least)));
            let duals: Vec<&str> = report
                .dual
                .iter()
                .filter(|(_, &v)| v)
                .map(|(id, _)| id.as_str())
                .collect();
            out.push_str(&format!("dual: {}\n", if duals.is_empty() { "-".into() } else { duals.join(", ") }));
            out
        }
    })
}

fn table_json(table: &StateTable) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let assignment: Value = Value::Object(
                table
                    .basics
                    .iter()
                    .zip(&row.assignment)
                    .map(|(id, &v)| (id.clone(), Value::Bool(v)))
                    .collect(),
            );
            let gate_map = |bits: &[bool]| -> Value {
                Value::Object(
                    table.gates.iter().zip(bits).map(|(id, &v)| (id.clone(), Value::Bool(v))).collect(),
                )
            };
            json!({
                "assignment": assignment,
                "available": row.available,
                "least": gate_map(&row.least),
                "dual": gate_map(&row.dual),
            })
        })
        .collect();
    json!({
        "basics": table.basics,
        "gates": table.gates,
        "candidates": table.candidates.iter().map(state_json).collect::<Vec<_>>(),
        "rows": rows,
    })
}

fn run_table(model: &ModelArgs, candidates: &[String]) -> Result<String, CliError> {
    let tree = load_tree(model)?;
    let parsed: Option<Vec<StateVector>> = if candidates.is_empty() {
        None
    } else {
        Some(
            candidates
                .iter()
                .map(|c| parse_candidate(c, &tree))
                .collect::<Result<_, _>>()?,
        )
    };
    let table = build_state_table(&tree, parsed.as_deref())?;
    Ok(match model.format {
        Format::Json => render_json(&table_json(&table)),
        // Text and CSV coincide for the table.
        _ => table.to_csv(),
    })
}

fn run_simulate(model: &ModelArgs, trajectory: &PathBuf) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    let text = std::fs::read_to_string(trajectory)
        .map_err(|e| usage(format!("cannot read `{}`: {e}", trajectory.display())))?;
    let traj = parse_trajectory(&text)?;
    let result = simulate(&tree, &traj)?;
    Ok(match model.format {
        Format::Json => {
            let steps: Vec<Value> = result
                .timeline
                .iter()
                .map(|step| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("time".into(), json!(step.time));
                    obj.insert("assignment".into(), assignment_json(&step.assignment));
                    obj.insert("sweeps".into(), json!(step.result.sweeps));
                    match &step.result.outcome {
                        RelaxOutcome::Fixpoint(s) => {
                            obj.insert("state".into(), state_json(s));
                        }
                        RelaxOutcome::Oscillation(cycle) => {
                            obj.insert(
                                "cycle".into(),
                                Value::Array(cycle.iter().map(state_json).collect()),
                            );
                        }
                    }
                    Value::Object(obj)
                })
                .collect();
            render_json(&json!({
                "steps": steps,
                "final": result.final_state.as_ref().map(state_json),
                "oscillated": result.oscillated,
            }))
        }
        _ => {
            let mut out = String::new();
            for step in &result.timeline {
                match &step.result.outcome {
                    RelaxOutcome::Fixpoint(s) => {
                        out.push_str(&format!(
                            "t={} {} (sweeps={})\n",
                            step.time,
                            state_text(s),
                            step.result.sweeps
                        ));
                    }
                    RelaxOutcome::Oscillation(cycle) => {
                        let states: Vec<String> =
                            cycle.iter().map(|s| format!("[{}]", state_text(s))).collect();
                        out.push_str(&format!("t={} oscillation {}\n", step.time, states.join(" ")));
                    }
                }
            }
            match &result.final_state {
                Some(s) => out.push_str(&format!("final: {}\n", state_text(s))),
                None => out.push_str("final: oscillation\n"),
            }
            out
        }
    })
}

fn run_quantify(model: &ModelArgs, top: &str, method: MethodArg) -> Result<String, CliError> {
    need_json_or_text(model.format)?;
    let tree = load_tree(model)?;
    let result = top_probability_with_cap(&tree, top, method.into(), product_cap(model)?)?;
    Ok(match model.format {
        Format::Json => render_json(&json!({
            "method": result.method.label(),
            "value": result.value,
            "clamped": result.clamped,
            "cutsets": result.cutset_count,
        })),
        _ => {
            let mut out = format!("method: {}\nvalue: {}\n", result.method.label(), result.value);
            if let Some(n) = result.cutset_count {
                out.push_str(&format!("cutsets: {n}\n"));
            }
            if result.clamped {
                out.push_str("clamped: rare-event sum exceeded 1\n");
            }
            out
        }
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Validate(model) => run_validate(model),
        Command::Loops(model) => run_loops(model),
        Command::Eval { model, assign } => run_eval(model, assign),
        Command::Mcs { model, top } => run_mcs(model, top),
        Command::Solutions { model, assign } => run_solutions(model, assign),
        Command::Table { model, candidates } => run_table(model, candidates),
        Command::Simulate { model, trajectory } => run_simulate(model, trajectory),
        Command::Quantify { model, top, method } => run_quantify(model, top, *method),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(report) => {
            print!("{report}");
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.kind, e.detail);
            std::process::exit(e.code);
        }
    }
}
