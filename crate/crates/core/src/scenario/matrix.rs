use std::fmt;

use serde::Serialize;

use super::ScenarioError;
use crate::fibration::{ring_fibration, Fibration};
use crate::functions::{Help, TargetFunction};
use crate::graph::{generate, DirectedMultigraph, DynamicGraph, Value};
use crate::linalg::Rational;
use crate::pushsum::{convergence_bound, run_frequency_exact};
use crate::sim::corpus::{BroadcastAveraging, Flooding, MessageCounting, MinPropagation, ViewDigest};
use crate::sim::{converged, run, Algorithm, Model, Network, RunOptions, SimError};
use crate::staticfreq::{make_static_algorithm, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Static,
    Dynamic,
}

impl std::str::FromStr for Family {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(Family::Static),
            "dynamic" => Ok(Family::Dynamic),
            _ => Err(ScenarioError::Validation(format!("unknown family {s:?} (static|dynamic)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Pass,
    Fail(String),
    OpenInPaper,
    OutOfScope,
    /// Nothing stronger is claimed, so there is no impossibility to show.
    NotApplicable,
    Witnessed,
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellStatus::Pass => write!(f, "pass"),
            CellStatus::Fail(why) => write!(f, "fail ({why})"),
            CellStatus::OpenInPaper => write!(f, "open in paper"),
            CellStatus::OutOfScope => write!(f, "out of scope (proof-only)"),
            CellStatus::NotApplicable => write!(f, "-"),
            CellStatus::Witnessed => write!(f, "witnessed by lifting-lemma trace equality"),
        }
    }
}

/// One (model, help) entry: the claimed class, the outcome of the positive
/// suite, and the evidence that the next class up is out of reach.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixCell {
    #[serde(serialize_with = "model_name")]
    pub model: Model,
    pub help: String,
    pub claim: String,
    pub computable: CellStatus,
    pub limit: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixReport {
    pub family: Family,
    pub cells: Vec<MatrixCell>,
}

impl MatrixReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| !matches!(c.computable, CellStatus::Fail(_)) && !matches!(c.limit, CellStatus::Fail(_)))
    }

    /// Plain-text table.
    pub fn table(&self) -> String {
        let mut out = format!("{:<9} {:<7} {:<16} {:<26} {}\n", "model", "help", "claim", "computable", "limit");
        for c in &self.cells {
            out.push_str(&format!(
                "{:<9} {:<7} {:<16} {:<26} {}\n",
                c.model.short_name(),
                c.help,
                c.claim,
                c.computable.to_string(),
                c.limit
            ));
        }
        out
    }
}

fn model_name<S: serde::Serializer>(m: &Model, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(m.short_name())
}

const HELP_ROWS: [&str; 4] = ["none", "bound", "n", "leader"];

/// Run `alg` on the base of `fib` and on its source from lifted inputs, and
/// compare lifted base states with the direct ones at every round. In the
/// outdegree and port models `fib` must also preserve outdegrees.
pub fn lifting_replay<A: Algorithm>(
    alg: &A,
    model: Model,
    fib: &Fibration,
    base_inputs: &[A::Input],
    rounds: usize,
) -> Result<bool, SimError> {
    let g = fib.source();
    let map = fib.vertex_map();
    let rep_outdegree: Vec<usize> =
        fib.fibres().iter().map(|f| f.first().map_or(0, |&v| g.outdegree(v))).collect();
    let base_net = Network::base(fib.base().clone(), rep_outdegree);
    let lifted_inputs: Vec<A::Input> = map.iter().map(|&c| base_inputs[c].clone()).collect();
    let on_base = run(alg, model, &base_net, base_inputs, RunOptions::default(), rounds)?;
    let direct = run(alg, model, &Network::fixed(g.clone()), &lifted_inputs, RunOptions::default(), rounds)?;
    Ok(on_base.states.iter().zip(&direct.states).all(|(b, d)| fib.lift_state(b) == *d))
}

/// `R^2` against its lifts `R^4` and `R^6` for five corpus algorithms.
pub fn ring_witness(model: Model, rounds: usize) -> Result<bool, ScenarioError> {
    let vals = [Value::int(2), Value::int(3)];
    let nums = [Rational::from(2i64), Rational::from(3i64)];
    for n in [4, 6] {
        let fib = ring_fibration(n, 2, false)?;
        let ok = lifting_replay(&Flooding, model, &fib, &vals, rounds)?
            && lifting_replay(&MinPropagation, model, &fib, &vals, rounds)?
            && lifting_replay(&MessageCounting, model, &fib, &vals, rounds)?
            && lifting_replay(&BroadcastAveraging, model, &fib, &nums, rounds)?
            && lifting_replay(&ViewDigest, model, &fib, &vals, rounds)?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn help_for(row: &str, n: usize) -> Help {
    match row {
        "bound" => Help::Bound(n + 1),
        "n" => Help::ExactSize(n),
        "leader" => Help::Leaders(1),
        _ => Help::None,
    }
}

fn static_graphs(model: Model) -> Vec<DirectedMultigraph> {
    let mut gs = vec![generate::star(4, false), generate::bidirectional_ring(3, true), generate::complete(3, false)];
    if model != Model::Symmetric {
        gs.push(generate::directed_ring(3, true));
        gs.extend((1..=3).filter_map(|s| generate::random_strongly_connected(5, s, 0.3, s % 2 == 0).ok()));
    } else {
        gs.extend((1..=3).filter_map(|s| generate::random_symmetric(5, s, 0.4, s % 2 == 0).ok()));
    }
    gs
}

fn static_suite(model: Model, row: &str, fs: &[TargetFunction]) -> CellStatus {
    for g in static_graphs(model) {
        let n = g.vertex_count();
        let values: Vec<Value> = (0..n).map(|i| Value::int([1, 4, 1, 2, 4][i % 5])).collect();
        let inputs: Vec<Label> = values.iter().enumerate().map(|(i, v)| Label::new(v.clone(), row == "leader" && i == 0)).collect();
        let rounds = 2 * n + 2;
        for f in fs {
            let alg = match make_static_algorithm(model, f.clone(), help_for(row, n), None) {
                Ok(a) => a,
                Err(e) => return CellStatus::Fail(e.to_string()),
            };
            let trace = match run(&alg, model, &Network::fixed(g.clone()), &inputs, RunOptions::default(), rounds) {
                Ok(t) => t,
                Err(e) => return CellStatus::Fail(e.to_string()),
            };
            let expected = match f.evaluate(&values) {
                Ok(v) => Some(v),
                Err(e) => return CellStatus::Fail(e.to_string()),
            };
            if trace.outputs.last().is_none_or(|row| row.iter().any(|o| *o != expected)) {
                return CellStatus::Fail(format!("{f} on {n} agents"));
            }
        }
    }
    CellStatus::Pass
}

fn claim_static(model: Model, row: &str) -> &'static str {
    match (model, row) {
        (Model::SimpleBroadcast, _) => "set-based",
        (_, "none" | "bound") => "frequency-based",
        _ => "multiset-based",
    }
}

fn suite_functions(claim: &str) -> Vec<TargetFunction> {
    match claim {
        "set-based" => vec![TargetFunction::Max, TargetFunction::SetOfValues],
        "frequency-based" => vec![TargetFunction::Average, TargetFunction::Frequency],
        _ => vec![TargetFunction::Sum, TargetFunction::Multiset],
    }
}

fn static_matrix() -> Result<Vec<MatrixCell>, ScenarioError> {
    let mut cells = Vec::new();
    for model in [Model::SimpleBroadcast, Model::OutdegreeAware, Model::Symmetric, Model::OutputPortAware] {
        // the ring witness keeps the size unknown, so it speaks only to rows without n or leaders
        let witnessed = ring_witness(model, 15)?;
        for row in HELP_ROWS {
            let claim = claim_static(model, row);
            let computable = static_suite(model, row, &suite_functions(claim));
            let limit = match (claim, row) {
                ("multiset-based", _) => CellStatus::NotApplicable,
                (_, "none" | "bound") if witnessed => CellStatus::Witnessed,
                (_, "none" | "bound") => CellStatus::Fail("lifted traces differ".into()),
                _ => CellStatus::OutOfScope,
            };
            cells.push(MatrixCell { model, help: row.into(), claim: claim.into(), computable, limit });
        }
    }
    Ok(cells)
}

fn schedules(n: usize, d: usize) -> Vec<DynamicGraph> {
    (1..=3).filter_map(|s| generate::random_dynamic_with_diameter(n, d, s, 3).ok()).collect()
}

fn flooding_dynamic() -> CellStatus {
    for g in schedules(4, 2) {
        let values: Vec<Value> = [3, 1, 3, 2].into_iter().map(Value::int).collect();
        let expected: std::collections::BTreeSet<Value> = values.iter().cloned().collect();
        let trace = match run(&Flooding, Model::SimpleBroadcast, &Network::Dynamic(g), &values, RunOptions::default(), 12) {
            Ok(t) => t,
            Err(e) => return CellStatus::Fail(e.to_string()),
        };
        if converged(&trace.outputs, |o| *o == expected).is_none() {
            return CellStatus::Fail("flooding did not stabilize".into());
        }
    }
    CellStatus::Pass
}

fn pushsum_dynamic(row: &str) -> CellStatus {
    let (n, d) = (3, 1);
    for g in schedules(n, d) {
        let values = [1, 2, 2];
        let inputs: Vec<Label> =
            values.iter().enumerate().map(|(i, &v)| Label::new(Value::int(v), row == "leader" && i == 0)).collect();
        let help = match row {
            "bound" => Help::Bound(n),
            _ => Help::ExactSize(n),
        };
        let eps = match help {
            Help::Bound(b) => 1.0 / (2 * b * b) as f64,
            _ => 1.0 / (3 * n) as f64,
        };
        let bound = convergence_bound(n, d, eps);
        match run_frequency_exact(&g, &inputs, help, None, d, 2 * bound) {
            Ok(r) if r.first_exact.is_some_and(|t| t <= bound) && r.mass_conserved => {}
            Ok(r) => return CellStatus::Fail(format!("settled at {:?}, bound {bound}", r.first_exact)),
            Err(e) => return CellStatus::Fail(e.to_string()),
        }
    }
    CellStatus::Pass
}

fn dynamic_matrix() -> Result<Vec<MatrixCell>, ScenarioError> {
    let mut cells = Vec::new();
    let witnessed = ring_witness(Model::SimpleBroadcast, 15)?;
    for row in HELP_ROWS {
        let flood = flooding_dynamic();
        let limit = match row {
            "none" | "bound" if witnessed => CellStatus::Witnessed,
            "none" | "bound" => CellStatus::Fail("lifted traces differ".into()),
            _ => CellStatus::OutOfScope,
        };
        cells.push(MatrixCell { model: Model::SimpleBroadcast, help: row.into(), claim: "set-based".into(), computable: flood, limit });
    }
    for row in HELP_ROWS {
        let (claim, computable, limit) = match row {
            "bound" => ("frequency-based", pushsum_dynamic(row), CellStatus::OutOfScope),
            "n" => ("multiset-based", pushsum_dynamic(row), CellStatus::NotApplicable),
            _ => ("?", CellStatus::OpenInPaper, CellStatus::OpenInPaper),
        };
        cells.push(MatrixCell { model: Model::OutdegreeAware, help: row.into(), claim: claim.into(), computable, limit });
    }
    for row in HELP_ROWS {
        let claim = if matches!(row, "none" | "bound") { "frequency-based" } else { "multiset-based" };
        cells.push(MatrixCell {
            model: Model::Symmetric,
            help: row.into(),
            claim: claim.into(),
            computable: CellStatus::OutOfScope,
            limit: CellStatus::OutOfScope,
        });
    }
    Ok(cells)
}

/// Execute the witness suites behind each cell of the computability table.
pub fn matrix_report(family: Family) -> Result<MatrixReport, ScenarioError> {
    let cells = match family {
        Family::Static => static_matrix()?,
        Family::Dynamic => dynamic_matrix()?,
    };
    Ok(MatrixReport { family, cells })
}

