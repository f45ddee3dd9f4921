use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::graph::io::{DynamicDocument, GraphDocument};
use crate::graph::{generate, DirectedMultigraph, DynamicGraph, Value};
use crate::linalg::Rational;
use crate::pushsum::Arithmetic;

/// Which descriptor a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    StaticFrequency,
    Pushsum,
    FrequencyPushsum,
    Flooding,
    MinPropagation,
    BroadcastAveraging,
}

/// A graph given inline or by generator name, e.g. `"ring:4:loops"`,
/// `"star:3"`, `"random:5:7"` (n, seed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    Generator(String),
    Document(GraphDocument),
}

/// A dynamic graph given inline or by generator name, e.g.
/// `"random-dynamic:4:2:7:3"` (n, D, seed, period) or `"constant:ring:4:loops"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DynamicSpec {
    Generator(String),
    Document(DynamicDocument),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitOverride {
    /// Random views of the given depth (static-frequency only).
    Garbage { seed: u64, depth: usize },
    /// `(y, z)` per agent (pushsum only).
    Pushsum(Vec<(Rational, Rational)>),
}

fn default_help() -> String {
    "none".into()
}

fn default_eps() -> f64 {
    1e-6
}

fn default_arithmetic() -> Arithmetic {
    Arithmetic::Exact
}

/// A self-contained experiment. Agents are numbered from 1 in `leaders`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamic: Option<DynamicSpec>,
    pub model: String,
    pub algorithm: AlgorithmKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default = "default_help")]
    pub help: String,
    pub inputs: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leaders: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_override: Option<InitOverride>,
    pub rounds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_arithmetic")]
    pub arithmetic: Arithmetic,
    /// Seed for shuffling inboxes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view_cap: Option<usize>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Validation(format!("scenario: {e}")))
    }
}

fn bad(spec: &str) -> ScenarioError {
    ScenarioError::Validation(format!("unknown graph generator {spec:?}"))
}

/// Parse a static generator spec.
pub fn generate_static(spec: &str) -> Result<DirectedMultigraph, ScenarioError> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let loops = parts.last() == Some(&"loops");
    let args: Vec<usize> = parts[1..parts.len() - usize::from(loops)]
        .iter()
        .map(|s| s.parse().map_err(|_| bad(spec)))
        .collect::<Result<_, _>>()?;
    let need = |k: usize| if args.len() == k && args[0] >= 1 { Ok(()) } else { Err(bad(spec)) };
    let g = match parts[0] {
        "ring" => need(1).map(|_| generate::bidirectional_ring(args[0], loops))?,
        "directed-ring" => need(1).map(|_| generate::directed_ring(args[0], loops))?,
        "star" => need(1).map(|_| generate::star(args[0], loops))?,
        "complete" => need(1).map(|_| generate::complete(args[0], loops))?,
        "random" => {
            need(2)?;
            generate::random_strongly_connected(args[0], args[1] as u64, 0.3, loops)?
        }
        "random-symmetric" => {
            need(2)?;
            generate::random_symmetric(args[0], args[1] as u64, 0.4, loops)?
        }
        _ => return Err(bad(spec)),
    };
    Ok(g)
}

/// Parse a dynamic generator spec.
pub fn generate_dynamic(spec: &str) -> Result<DynamicGraph, ScenarioError> {
    if let Some(rest) = spec.strip_prefix("constant:") {
        return Ok(DynamicGraph::constant(generate_static(rest)?)?);
    }
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    if parts[0] != "random-dynamic" || !(4..=5).contains(&parts.len()) {
        return Err(bad(spec));
    }
    let args: Vec<usize> = parts[1..].iter().map(|s| s.parse().map_err(|_| bad(spec))).collect::<Result<_, _>>()?;
    let period = args.get(3).copied().unwrap_or(4);
    Ok(generate::random_dynamic_with_diameter(args[0], args[1], args[2] as u64, period)?)
}

impl GraphSpec {
    pub fn build(&self) -> Result<DirectedMultigraph, ScenarioError> {
        match self {
            GraphSpec::Generator(s) => generate_static(s),
            GraphSpec::Document(d) => Ok(d.to_graph()?),
        }
    }
}

impl DynamicSpec {
    pub fn build(&self) -> Result<DynamicGraph, ScenarioError> {
        match self {
            DynamicSpec::Generator(s) => generate_dynamic(s),
            DynamicSpec::Document(d) => Ok(d.to_dynamic()?),
        }
    }
}
