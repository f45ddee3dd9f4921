use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use anonet::fibration::minimum_base;
use anonet::functions::{Help, TargetFunction};
use anonet::graph::io::{parse_dynamic, parse_graph, GraphDocument};
use anonet::graph::{dynamic_diameter, DirectedMultigraph, DynamicGraph, Value};
use anonet::linalg::Rational;
use anonet::pushsum::{convergence_bound, effective_diameter, run_frequency_exact, run_scalar_exact, run_scalar_float};
use anonet::scenario::{
    bundled, generate_dynamic, generate_static, matrix_report, run_scenario, AlgorithmKind, Family, Scenario,
    ScenarioError, Verdict, BUNDLED,
};
use anonet::sim::{converged, run, Model, Network, RunOptions};
use anonet::staticfreq::{make_static_algorithm, Label};

#[derive(Parser)]
#[command(name = "anonet", version, about = "Simulate algorithms on anonymous networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a bundled scenario by name) and write its reports.
    Run {
        scenario: String,
        /// Directory for trace.json, summary.csv and verdict.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute the witness suites behind the computability table.
    Matrix {
        #[arg(long, default_value = "static")]
        family: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the minimum base of a graph and the fibres of the quotient map.
    Minbase {
        graph: String,
        /// Keep output-port labels, so only port-respecting fibrations count.
        #[arg(long)]
        ports: bool,
    },
    /// Push-Sum on a static or dynamic graph.
    Pushsum(PushsumArgs),
    /// Run the static frequency algorithm and report when it stabilizes.
    StaticCompute(StaticArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Generator spec (e.g. `ring:4:loops`) or path to a graph JSON file.
    #[arg(long, conflicts_with = "dynamic")]
    graph: Option<String>,
    /// Generator spec (e.g. `random-dynamic:4:2:7`) or path to a dynamic graph JSON file.
    #[arg(long)]
    dynamic: Option<String>,
}

#[derive(Args)]
struct PushsumArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// `average`/`quot-sum` for scalar Push-Sum, anything else runs the frequency variant.
    #[arg(long, default_value = "average")]
    function: String,
    #[arg(long = "help-mode", default_value = "none")]
    help_mode: String,
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Comma-separated inputs.
    #[arg(long)]
    inputs: String,
    /// Comma-separated weights (scalar Push-Sum only; default all 1).
    #[arg(long)]
    weights: Option<String>,
    /// Comma-separated 1-based leader agents.
    #[arg(long, default_value = "")]
    leaders: String,
    /// Comma-separated start rounds.
    #[arg(long)]
    starts: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long = "max-rounds")]
    max_rounds: Option<usize>,
    /// Directory for report.json and rounds.csv; without it only the report is printed.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StaticArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, default_value = "od")]
    model: String,
    #[arg(long)]
    function: String,
    #[arg(long = "help-mode", default_value = "none")]
    help_mode: String,
    #[arg(long)]
    inputs: String,
    #[arg(long, default_value = "")]
    leaders: String,
    #[arg(long)]
    rounds: Option<usize>,
}

fn validation(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation(msg.into())
}

fn read(path: &str) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(format!("{path}: {e}")))
}

fn load_graph(spec: &str) -> Result<DirectedMultigraph, ScenarioError> {
    if Path::new(spec).is_file() {
        Ok(parse_graph(&read(spec)?)?)
    } else {
        generate_static(spec)
    }
}

fn load_dynamic(spec: &str) -> Result<DynamicGraph, ScenarioError> {
    if Path::new(spec).is_file() {
        Ok(parse_dynamic(&read(spec)?)?)
    } else {
        generate_dynamic(spec)
    }
}

fn split(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn values(list: &str) -> Vec<Value> {
    split(list).into_iter().map(Value::parse).collect()
}

fn numbers(list: &str) -> Result<Vec<Rational>, ScenarioError> {
    split(list).into_iter().map(|s| s.parse().map_err(|_| validation(format!("{s:?} is not a number")))).collect()
}

fn indices(list: &str) -> Result<Vec<usize>, ScenarioError> {
    split(list).into_iter().map(|s| s.parse().map_err(|_| validation(format!("{s:?} is not an index")))).collect()
}

fn labels(vals: &[Value], leaders: &[usize]) -> Result<Vec<Label>, ScenarioError> {
    if let Some(&l) = leaders.iter().find(|&&l| l == 0 || l > vals.len()) {
        return Err(validation(format!("leader {l} out of 1..={}", vals.len())));
    }
    Ok(vals.iter().enumerate().map(|(i, v)| Label::new(v.clone(), leaders.contains(&(i + 1)))).collect())
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), ScenarioError> {
    let io = |e: std::io::Error| ScenarioError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join(name), text).map_err(io)
}

fn cmd_run(scenario: &str, out: Option<PathBuf>) -> Result<i32, ScenarioError> {
    let s = match bundled(scenario) {
        Some(s) => s,
        None if Path::new(scenario).is_file() => Scenario::from_json(&read(scenario)?)?,
        None => {
            return Err(validation(format!("{scenario:?} is neither a file nor a bundled scenario ({})", BUNDLED.join(", "))))
        }
    };
    let report = run_scenario(&s)?;
    let dir = out.unwrap_or_else(|| PathBuf::from("anonet-out").join(&s.name));
    report.write_to(&dir)?;
    print_json(&report);
    eprintln!("reports written to {}", dir.display());
    Ok(report.exit_code())
}

fn cmd_matrix(family: &str, as_json: bool) -> Result<i32, ScenarioError> {
    let report = matrix_report(family.parse::<Family>()?)?;
    if as_json {
        print_json(&report);
    } else {
        print!("{}", report.table());
    }
    Ok(if report.all_pass() { 0 } else { 2 })
}

fn cmd_minbase(spec: &str, ports: bool) -> Result<i32, ScenarioError> {
    let g = load_graph(spec)?;
    let g = if ports { g } else { g.without_colors() };
    let (base, fib) = minimum_base(&g)?;
    let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    print_json(&json!({
        "base": GraphDocument::from_graph(&base),
        "vertex_map": one_based(fib.vertex_map()),
        "fibres": fib.fibres().iter().map(|f| one_based(f)).collect::<Vec<_>>(),
        "fibre_sizes": fib.fibre_sizes(),
    }));
    Ok(0)
}

fn diameter(g: &DynamicGraph) -> Result<usize, ScenarioError> {
    let n = g.vertex_count();
    let horizon = g.period_end() + g.cycle().len() + n * n;
    dynamic_diameter(g, horizon).ok_or_else(|| validation("the dynamic graph is not eventually strongly connected"))
}

fn cmd_pushsum(a: PushsumArgs) -> Result<i32, ScenarioError> {
    let g = match (&a.graph.graph, &a.graph.dynamic) {
        (Some(s), None) => DynamicGraph::constant(load_graph(s)?)?,
        (None, Some(s)) => load_dynamic(s)?,
        _ => return Err(validation("give --graph or --dynamic")),
    };
    let n = g.vertex_count();
    let starts = a.starts.as_deref().map(indices).transpose()?;
    let d = diameter(&g)?;
    let d_eff = effective_diameter(d, starts.as_deref());
    let help: Help = a.help_mode.parse()?;
    let exact = match a.mode.as_str() {
        "exact" => true,
        "float" => false,
        other => return Err(validation(format!("unknown mode {other:?} (exact|float)"))),
    };
    let (json_text, csv, code) = if matches!(a.function.as_str(), "average" | "quot-sum") && help == Help::None {
        let v = numbers(&a.inputs)?;
        let w = match &a.weights {
            Some(w) => numbers(w)?,
            None => vec![Rational::one(); v.len()],
        };
        if v.len() != n || w.len() != n {
            return Err(validation(format!("{n} agents need {n} inputs and weights")));
        }
        let initial: Vec<(Rational, Rational)> = v.into_iter().zip(w).collect();
        let rounds = a.max_rounds.unwrap_or_else(|| convergence_bound(n, d_eff, a.eps) + 1);
        let report = if exact {
            run_scalar_exact(&g, &initial, starts, d, a.eps, rounds)?
        } else {
            run_scalar_float(&g, &initial, starts, d, a.eps, rounds)?
        };
        let code = if report.first_within_eps.is_some() { 0 } else { 2 };
        (serde_json::to_string_pretty(&report).expect("serializable"), Some(report.csv()), code)
    } else if exact && help != Help::None {
        let f: TargetFunction = a.function.parse()?;
        let inputs = labels(&values(&a.inputs), &indices(&a.leaders)?)?;
        let eps = match help {
            Help::Bound(b) => 1.0 / (2 * b * b) as f64,
            Help::ExactSize(s) => 1.0 / (3 * s) as f64,
            Help::Leaders(l) => 1.0 / (3 * l) as f64,
            Help::None => a.eps,
        };
        let rounds = a.max_rounds.unwrap_or_else(|| 2 * convergence_bound(n, d_eff, eps));
        let report = run_frequency_exact(&g, &inputs, help, starts, d, rounds)?;
        let code = if report.first_exact.is_some() { 0 } else { 2 };
        let text = serde_json::to_string_pretty(&json!({ "function": f.to_string(), "report": report })).expect("serializable");
        (text, None, code)
    } else {
        let s = Scenario {
            name: "pushsum".into(),
            graph: None,
            dynamic: Some(anonet::scenario::DynamicSpec::Document(anonet::graph::io::DynamicDocument::from_dynamic(&g))),
            model: "od".into(),
            algorithm: AlgorithmKind::FrequencyPushsum,
            function: Some(a.function.clone()),
            help: a.help_mode.clone(),
            inputs: values(&a.inputs),
            weights: None,
            leaders: indices(&a.leaders)?,
            starts,
            init_override: None,
            rounds: a.max_rounds.unwrap_or_else(|| convergence_bound(n, d_eff, a.eps) + 1),
            metric: None,
            eps: a.eps,
            arithmetic: if exact { anonet::pushsum::Arithmetic::Exact } else { anonet::pushsum::Arithmetic::Float },
            seed: None,
            view_cap: None,
        };
        let report = run_scenario(&s)?;
        (serde_json::to_string_pretty(&report).expect("serializable"), Some(report.summary_csv.clone()), report.exit_code())
    };
    match &a.out {
        Some(dir) => {
            write_file(dir, "report.json", &json_text)?;
            if let Some(csv) = &csv {
                write_file(dir, "rounds.csv", csv)?;
            }
        }
        None => println!("{json_text}"),
    }
    Ok(code)
}

fn cmd_static(a: StaticArgs) -> Result<i32, ScenarioError> {
    let g = load_graph(&a.graph)?;
    let model: Model = a.model.parse()?;
    let f: TargetFunction = a.function.parse()?;
    let help: Help = a.help_mode.parse()?;
    let vals = values(&a.inputs);
    if vals.len() != g.vertex_count() {
        return Err(validation(format!("{} inputs for {} agents", vals.len(), g.vertex_count())));
    }
    let inputs = labels(&vals, &indices(&a.leaders)?)?;
    let alg = make_static_algorithm(model, f.clone(), help, None)?;
    let rounds = a.rounds.unwrap_or(2 * g.vertex_count() + 2);
    let trace = run(&alg, model, &Network::fixed(g), &inputs, RunOptions::default(), rounds)?;
    let expected = Some(f.evaluate(&vals)?);
    for (t, row) in trace.outputs.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|o| o.as_ref().map_or("-".into(), |o| o.to_string())).collect();
        println!("{t:>4}  {}", cells.join("  "));
    }
    let shown = expected.as_ref().map_or(String::new(), |e| e.to_string());
    let verdict = match converged(&trace.outputs, |o| *o == expected) {
        Some(round) => Verdict::Stabilized { round, value: shown },
        None => Verdict::Failed { reason: format!("outputs did not settle on {shown} within {rounds} rounds") },
    };
    match &verdict {
        Verdict::Stabilized { round, value } => println!("stabilized at round {round} on {value}"),
        Verdict::Failed { reason } => println!("{reason}"),
        Verdict::Converged { .. } => unreachable!("exact comparison"),
    }
    Ok(if matches!(verdict, Verdict::Failed { .. }) { 2 } else { 0 })
}

fn main() -> ExitCode {
    // exit quietly when piped into a reader that closes early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, out } => cmd_run(&scenario, out),
        Command::Matrix { family, json } => cmd_matrix(&family, json),
        Command::Minbase { graph, ports } => cmd_minbase(&graph, ports),
        Command::Pushsum(a) => cmd_pushsum(a),
        Command::StaticCompute(a) => cmd_static(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
