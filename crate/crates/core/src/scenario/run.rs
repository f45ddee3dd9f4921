use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use super::spec::{AlgorithmKind, InitOverride, Scenario};
use super::ScenarioError;
use crate::functions::{Help, Metric, Output, TargetFunction};
use crate::graph::Value;
use crate::linalg::{balance_matrix, nullity, Rational};
use crate::pushsum::{make_frequency_pushsum, make_pushsum, Arithmetic, Mass, PushSumState, WeightRule, WireFormat};
use crate::sim::corpus::{BroadcastAveraging, Flooding, MinPropagation};
use crate::sim::{converged, Algorithm, ExecutionTrace, Model, Network, RunOptions};
use crate::staticfreq::{make_static_algorithm, Label};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    /// Every output equals the expected value from `round` on.
    Stabilized { round: usize, value: String },
    /// Every output is within `eps` of the expected value from `round` on.
    Converged { round: usize, value: String, eps: f64 },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub verdict: Verdict,
    pub expected: String,
    pub rounds_run: usize,
    #[serde(skip)]
    pub trace: serde_json::Value,
    #[serde(skip)]
    pub summary_csv: String,
}

impl ScenarioReport {
    /// 0 on success, 2 on a convergence failure.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Failed { .. } => 2,
            _ => 0,
        }
    }

    /// Writes `trace.json`, `summary.csv` and `verdict.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), ScenarioError> {
        let io = |e: std::io::Error| ScenarioError::Io(e.to_string());
        std::fs::create_dir_all(dir).map_err(io)?;
        let trace = serde_json::to_string_pretty(&self.trace).expect("json values serialize");
        std::fs::write(dir.join("trace.json"), trace).map_err(io)?;
        std::fs::write(dir.join("summary.csv"), &self.summary_csv).map_err(io)?;
        let verdict = serde_json::to_string_pretty(self).expect("report serializes");
        std::fs::write(dir.join("verdict.json"), verdict).map_err(io)?;
        Ok(())
    }
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation(msg.into())
}

struct Setup {
    network: Network,
    model: Model,
    n: usize,
}

fn setup(s: &Scenario) -> Result<Setup, ScenarioError> {
    let network = match (&s.graph, &s.dynamic) {
        (Some(g), None) => Network::fixed(g.build()?),
        (None, Some(d)) => Network::Dynamic(d.build()?),
        _ => return Err(invalid("give exactly one of `graph` and `dynamic`")),
    };
    let model: Model = s.model.parse()?;
    let n = network.vertex_count();
    if s.inputs.len() != n {
        return Err(invalid(format!("{} inputs for {n} agents", s.inputs.len())));
    }
    if let Some(&l) = s.leaders.iter().find(|&&l| l == 0 || l > n) {
        return Err(invalid(format!("leader {l} out of 1..={n}")));
    }
    if !(s.eps > 0.0 && s.eps.is_finite()) {
        return Err(invalid("eps must be positive"));
    }
    Ok(Setup { network, model, n })
}

fn target(s: &Scenario) -> Result<TargetFunction, ScenarioError> {
    let f = s.function.as_deref().ok_or_else(|| invalid("`function` is required"))?;
    Ok(f.parse()?)
}

fn metric(s: &Scenario, default: Metric) -> Result<Metric, ScenarioError> {
    match s.metric.as_deref() {
        None => Ok(default),
        Some("discrete") => Ok(Metric::Discrete),
        Some("euclidean") => Ok(Metric::Euclidean),
        Some(other) => Err(invalid(format!("unknown metric {other:?}"))),
    }
}

fn labels(s: &Scenario) -> Vec<Label> {
    s.inputs.iter().enumerate().map(|(i, v)| Label::new(v.clone(), s.leaders.contains(&(i + 1)))).collect()
}

fn numbers(s: &Scenario) -> Result<Vec<Rational>, ScenarioError> {
    s.inputs.iter().map(|v| v.as_number().cloned().ok_or_else(|| invalid(format!("input {v} is not a number")))).collect()
}

fn check_trace<S, O>(trace: &ExecutionTrace<S, O>) -> Result<(), ScenarioError> {
    if trace.closure_violations > 0 {
        return Err(ScenarioError::Invariant(format!("{} messages crossed rounds", trace.closure_violations)));
    }
    Ok(())
}

/// Assemble the report from per-round outputs and a per-output distance to
/// the expected value (`Some(0.0)` when equal).
fn report<O: Serialize>(
    s: &Scenario,
    outputs: &[Vec<O>],
    expected: String,
    exact: bool,
    distance: impl Fn(&O) -> Option<f64>,
) -> ScenarioReport {
    let ok = |o: &O| distance(o).is_some_and(|d| if exact { d == 0.0 } else { d <= s.eps });
    let verdict = match converged(outputs, ok) {
        Some(round) if exact => Verdict::Stabilized { round, value: expected.clone() },
        Some(round) => Verdict::Converged { round, value: expected.clone(), eps: s.eps },
        None => Verdict::Failed { reason: format!("outputs did not settle on {expected} within {} rounds", s.rounds) },
    };
    let mut csv = String::from("round,agents_correct,agents,max_distance\n");
    for (t, row) in outputs.iter().enumerate() {
        let correct = row.iter().filter(|o| ok(o)).count();
        let worst = row.iter().map(|o| distance(o).unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
        csv.push_str(&format!("{t},{correct},{},{worst:e}\n", row.len()));
    }
    ScenarioReport {
        name: s.name.clone(),
        verdict,
        expected,
        rounds_run: outputs.len() - 1,
        trace: json!({ "scenario": s, "outputs": outputs }),
        summary_csv: csv,
    }
}

fn output_distance(o: &Option<Output>, expected: &Output, metric: Metric) -> Option<f64> {
    o.as_ref().and_then(|o| o.distance(expected, metric))
}

/// Validate and run a scenario.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioReport, ScenarioError> {
    let Setup { network, model, n } = setup(s)?;
    let shuffle_seed = s.seed;
    match s.algorithm {
        AlgorithmKind::StaticFrequency => {
            if !matches!(network, Network::Static { .. }) {
                return Err(invalid("static-frequency needs a static `graph`"));
            }
            let f = target(s)?;
            let help: Help = s.help.parse()?;
            let alg = make_static_algorithm(model, f.clone(), help, s.view_cap)?;
            let inputs = labels(s);
            let init_override = match &s.init_override {
                None => None,
                Some(InitOverride::Garbage { seed, depth }) => Some(
                    inputs
                        .iter()
                        .enumerate()
                        .map(|(i, l)| alg.garbage_state(l.clone(), &s.inputs, *depth, seed.wrapping_add(i as u64)))
                        .collect(),
                ),
                Some(InitOverride::Pushsum(_)) => return Err(invalid("pushsum init_override on static-frequency")),
            };
            let opts = RunOptions { starts: s.starts.clone(), init_override, shuffle_seed };
            let trace = crate::sim::run(&alg, model, &network, &inputs, opts, s.rounds)?;
            check_trace(&trace)?;
            if model == Model::OutdegreeAware {
                for state in trace.final_state() {
                    if let Some(base) = alg.base_of(state) {
                        let m = balance_matrix(&base.graph, base.outdegrees.as_deref().unwrap_or_default())
                            .map_err(|e| ScenarioError::Invariant(e.to_string()))?;
                        if nullity(&m) != 1 {
                            return Err(ScenarioError::Invariant(format!(
                                "balance matrix of a reconstructed base has nullity {}",
                                nullity(&m)
                            )));
                        }
                    }
                }
            }
            let values: Vec<Value> = inputs.iter().map(|l| l.value.clone()).collect();
            let expected = f.evaluate(&values)?;
            let metric = metric(s, Metric::Discrete)?;
            Ok(report(s, &trace.outputs, expected.to_string(), metric == Metric::Discrete, |o| {
                output_distance(o, &expected, metric)
            }))
        }
        AlgorithmKind::Pushsum => {
            let v = numbers(s)?;
            let w = s.weights.clone().unwrap_or_else(|| vec![Rational::one(); n]);
            if w.len() != n {
                return Err(invalid(format!("{} weights for {n} agents", w.len())));
            }
            let initial: Vec<(Rational, Rational)> = v.into_iter().zip(w).collect();
            let q: Rational = initial.iter().map(|p| &p.0).sum::<Rational>() / initial.iter().map(|p| &p.1).sum::<Rational>();
            let init_override = match &s.init_override {
                None => None,
                Some(InitOverride::Pushsum(states)) if states.len() == n => Some(states.clone()),
                Some(_) => return Err(invalid("pushsum takes one (y, z) pair per agent as init_override")),
            };
            match s.arithmetic {
                Arithmetic::Exact => run_pushsum::<Rational>(s, model, &network, &initial, init_override, &q),
                Arithmetic::Float => run_pushsum::<f64>(s, model, &network, &initial, init_override, &q),
            }
        }
        AlgorithmKind::FrequencyPushsum => {
            let f = target(s)?;
            let help: Help = s.help.parse()?;
            match s.arithmetic {
                Arithmetic::Exact => run_frequency::<Rational>(s, model, &network, f, help),
                Arithmetic::Float => run_frequency::<f64>(s, model, &network, f, help),
            }
        }
        AlgorithmKind::Flooding => {
            let expected: BTreeSet<Value> = s.inputs.iter().cloned().collect();
            let trace = run_plain(&Flooding, s, model, &network, &s.inputs)?;
            let shown = Output::Set(expected.clone()).to_string();
            Ok(report(s, &trace.outputs, shown, true, |o| Some(if *o == expected { 0.0 } else { 1.0 })))
        }
        AlgorithmKind::MinPropagation => {
            let expected = s.inputs.iter().min().cloned().ok_or_else(|| invalid("no inputs"))?;
            let trace = run_plain(&MinPropagation, s, model, &network, &s.inputs)?;
            Ok(report(s, &trace.outputs, expected.to_string(), true, |o| Some(if *o == expected { 0.0 } else { 1.0 })))
        }
        AlgorithmKind::BroadcastAveraging => {
            let v = numbers(s)?;
            let expected: Rational = v.iter().sum::<Rational>() / Rational::from(n);
            let trace = run_plain(&BroadcastAveraging, s, model, &network, &v)?;
            Ok(report(s, &trace.outputs, expected.to_string(), false, |o| Some((o - &expected).abs().to_f64())))
        }
    }
}

fn run_plain<A: Algorithm>(
    alg: &A,
    s: &Scenario,
    model: Model,
    network: &Network,
    inputs: &[A::Input],
) -> Result<ExecutionTrace<A::State, A::Output>, ScenarioError> {
    if s.init_override.is_some() {
        return Err(invalid(format!("{} takes no init_override", alg.name())));
    }
    let opts = RunOptions { starts: s.starts.clone(), init_override: None, shuffle_seed: s.seed };
    let trace = crate::sim::run(alg, model, network, inputs, opts, s.rounds)?;
    check_trace(&trace)?;
    Ok(trace)
}

fn run_pushsum<M: Mass + Serialize>(
    s: &Scenario,
    model: Model,
    network: &Network,
    initial: &[(Rational, Rational)],
    init_override: Option<Vec<(Rational, Rational)>>,
    q: &Rational,
) -> Result<ScenarioReport, ScenarioError> {
    let inputs: Vec<(M, M)> = initial.iter().map(|(v, w)| (M::from_rational(v), M::from_rational(w))).collect();
    let alg = make_pushsum(&inputs, WireFormat::PreDivided)?;
    let init_override = init_override.map(|states| {
        states.iter().map(|(y, z)| PushSumState { y: M::from_rational(y), z: M::from_rational(z) }).collect()
    });
    let opts = RunOptions { starts: s.starts.clone(), init_override, shuffle_seed: s.seed };
    let trace = crate::sim::run(&alg, model, network, &inputs, opts, s.rounds)?;
    check_trace(&trace)?;
    if s.init_override.is_none() {
        let (ymass, zmass) = (sum_y(&trace.states[0]), sum_z(&trace.states[0]));
        for (t, states) in trace.states.iter().enumerate() {
            let (y, z) = (sum_y(states), sum_z(states));
            let tol = if y.exact().is_some() { 0.0 } else { 1e-9 };
            if (y.to_f64() - ymass.to_f64()).abs() > tol || (z.to_f64() - zmass.to_f64()).abs() > tol
                || (tol == 0.0 && (y != ymass || z != zmass))
            {
                return Err(ScenarioError::Invariant(format!("mass not conserved in round {t}")));
            }
        }
    }
    let qf = q.to_f64();
    Ok(report(s, &trace.outputs, q.to_string(), false, |x: &M| match x.exact() {
        Some(r) => Some((r - q).abs().to_f64()),
        None => Some((x.to_f64() - qf).abs()),
    }))
}

fn sum_y<M: Mass>(states: &[PushSumState<M>]) -> M {
    states.iter().fold(M::zero(), |acc, s| acc.add(&s.y))
}

fn sum_z<M: Mass>(states: &[PushSumState<M>]) -> M {
    states.iter().fold(M::zero(), |acc, s| acc.add(&s.z))
}

fn run_frequency<M: Mass>(
    s: &Scenario,
    model: Model,
    network: &Network,
    f: TargetFunction,
    help: Help,
) -> Result<ScenarioReport, ScenarioError> {
    let alg = make_frequency_pushsum::<M>(f.clone(), help, WeightRule::SharedWeight, WireFormat::PreDivided)?;
    if s.init_override.is_some() {
        return Err(invalid("frequency-pushsum takes no init_override"));
    }
    let inputs = labels(s);
    if let Help::Leaders(l) = help {
        if s.leaders.len() != l {
            return Err(invalid(format!("help says {l} leaders, scenario flags {}", s.leaders.len())));
        }
    }
    let opts = RunOptions { starts: s.starts.clone(), init_override: None, shuffle_seed: s.seed };
    let trace = crate::sim::run(&alg, model, network, &inputs, opts, s.rounds)?;
    check_trace(&trace)?;
    let expected = f.evaluate(&s.inputs)?;
    let default = if matches!(help, Help::None) { f.metric() } else { Metric::Discrete };
    let metric = metric(s, default)?;
    // approximate outputs are compared as reals
    let as_real = |o: &Option<Output>| -> Option<f64> {
        let o = o.as_ref()?;
        match (metric, o.as_f64(), expected.as_f64()) {
            (Metric::Euclidean, Some(a), Some(b)) => Some((a - b).abs()),
            _ => o.distance(&expected, metric),
        }
    };
    Ok(report(s, &trace.outputs, expected.to_string(), metric == Metric::Discrete, as_real))
}
