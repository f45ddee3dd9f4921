use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, LocalView, Model, Network, SimError};
use crate::functions::{Metric, Output};

/// Optional knobs of an execution.
#[derive(Debug, Clone)]
pub struct RunOptions<S> {
    /// Start round `s_i >= 1` of each agent; before it the agent neither
    /// sends nor transitions and its links are cut.
    pub starts: Option<Vec<usize>>,
    /// Replaces the initial global state.
    pub init_override: Option<Vec<S>>,
    /// Shuffle each inbox with this seed to expose order dependence.
    pub shuffle_seed: Option<u64>,
}

impl<S> Default for RunOptions<S> {
    fn default() -> Self {
        RunOptions { starts: None, init_override: None, shuffle_seed: None }
    }
}

/// Global states `C^0..C^T` and the matching outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace<S, O> {
    pub model: Model,
    pub states: Vec<Vec<S>>,
    pub outputs: Vec<Vec<O>>,
    pub starts: Option<Vec<usize>>,
    /// Messages observed outside the round that produced them; always zero
    /// unless the engine is broken.
    pub closure_violations: usize,
}

impl<S, O> ExecutionTrace<S, O> {
    pub fn rounds(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_state(&self) -> &[S] {
        self.states.last().expect("C^0 is always present")
    }
}

/// A running execution, advanced one round at a time.
pub struct Execution<'a, A: Algorithm> {
    alg: &'a A,
    model: Model,
    network: &'a Network,
    states: Vec<A::State>,
    round: usize,
    starts: Option<Vec<usize>>,
    rng: Option<ChaCha8Rng>,
    closure_violations: usize,
}

impl<'a, A: Algorithm> Execution<'a, A> {
    pub fn new(
        alg: &'a A,
        model: Model,
        network: &'a Network,
        inputs: &[A::Input],
        options: RunOptions<A::State>,
    ) -> Result<Self, SimError> {
        let n = network.vertex_count();
        validate(alg, model, network, options.starts.as_deref())?;
        let states = match options.init_override {
            Some(init) => {
                if init.len() != n {
                    return Err(SimError::InitCount { expected: n, found: init.len() });
                }
                init
            }
            None => {
                if inputs.len() != n {
                    return Err(SimError::InputCount { expected: n, found: inputs.len() });
                }
                inputs.iter().map(|x| alg.initial_state(x)).collect()
            }
        };
        Ok(Execution {
            alg,
            model,
            network,
            states,
            round: 0,
            starts: options.starts,
            rng: options.shuffle_seed.map(ChaCha8Rng::seed_from_u64),
            closure_violations: 0,
        })
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn states(&self) -> &[A::State] {
        &self.states
    }

    pub fn outputs(&self) -> Vec<A::Output> {
        self.states.iter().map(|s| self.alg.output(s)).collect()
    }

    pub fn closure_violations(&self) -> usize {
        self.closure_violations
    }

    fn active(&self, i: usize, t: usize) -> bool {
        self.starts.as_ref().is_none_or(|s| t >= s[i])
    }

    /// Execute round `t = round + 1`.
    pub fn step(&mut self) {
        let t = self.round + 1;
        let g = self.network.graph_at(t);
        let n = g.vertex_count();
        let active: Vec<bool> = (0..n).map(|i| self.active(i, t)).collect();
        let live = |id: usize| {
            let e = g.edge(id);
            e.source == e.target || (active[e.source] && active[e.target])
        };

        // position of each live edge among its source's live out-edges
        let mut position = vec![usize::MAX; g.edge_count()];
        let mut live_outdegree = vec![0; n];
        for i in 0..n {
            for &id in g.out_edges(i).iter().filter(|&&id| live(id)) {
                position[id] = live_outdegree[i];
                live_outdegree[i] += 1;
            }
        }
        let outdegree: Vec<usize> = match self.network.declared_outdegrees() {
            Some(b) => b.to_vec(),
            None => live_outdegree,
        };

        let outbox: Vec<Option<Vec<A::Message>>> = (0..n)
            .map(|i| {
                active[i].then(|| match self.model {
                    Model::SimpleBroadcast | Model::Symmetric => self.alg.send(&self.states[i], 1),
                    Model::OutdegreeAware | Model::OutputPortAware => self.alg.send(&self.states[i], outdegree[i]),
                })
            })
            .collect();

        let mut next = self.states.clone();
        for j in (0..n).filter(|&j| active[j]) {
            // round-tagged envelopes
            let mut inbox: Vec<(usize, A::Message)> = Vec::with_capacity(g.indegree(j));
            for &id in g.in_edges(j).iter().filter(|&&id| live(id)) {
                let i = g.edge(id).source;
                let Some(msgs) = &outbox[i] else { continue };
                if msgs.is_empty() {
                    continue;
                }
                let msg = match self.model {
                    Model::SimpleBroadcast | Model::Symmetric => &msgs[0],
                    Model::OutdegreeAware => &msgs[position[id] % msgs.len()],
                    Model::OutputPortAware => {
                        let port = g.color(id).expect("validated: ports present");
                        &msgs[(port - 1) % msgs.len()]
                    }
                };
                inbox.push((t, msg.clone()));
            }
            if let Some(rng) = self.rng.as_mut() {
                inbox.shuffle(rng);
            }
            self.closure_violations += inbox.iter().filter(|(r, _)| *r != t).count();
            let received: Vec<A::Message> = inbox.into_iter().map(|(_, m)| m).collect();
            let local = LocalView {
                outdegree: self.model.knows_outdegree().then_some(outdegree[j]),
                round: self.alg.needs_round().then_some(t),
            };
            next[j] = self.alg.transition(&self.states[j], &received, &local);
        }
        self.states = next;
        self.round = t;
    }
}

fn validate<A: Algorithm>(alg: &A, model: Model, network: &Network, starts: Option<&[usize]>) -> Result<(), SimError> {
    let n = network.vertex_count();
    if !alg.supports(model) {
        return Err(SimError::Unsupported { algorithm: alg.name(), model });
    }
    if let Some(s) = starts {
        if s.len() != n || s.contains(&0) {
            return Err(SimError::Starts { expected: n, found: s.len() });
        }
    }
    if let Some(b) = network.declared_outdegrees() {
        if b.len() != n {
            return Err(SimError::DeclaredOutdegrees { expected: n, found: b.len() });
        }
    }
    match model {
        Model::Symmetric => {
            if let Some(k) = network.round_graphs().iter().position(|g| !g.is_bidirectional()) {
                return Err(SimError::NotBidirectional(k + 1));
            }
        }
        Model::OutputPortAware => {
            let Network::Static { graph, declared_outdegrees } = network else {
                return Err(SimError::PortsRequired);
            };
            let Some(colors) = graph.colors() else {
                return Err(SimError::PortsRequired);
            };
            if starts.is_some() {
                return Err(SimError::AsyncPorts);
            }
            for (id, e) in graph.edges().iter().enumerate() {
                let outdegree = declared_outdegrees.as_ref().map_or(graph.outdegree(e.source), |b| b[e.source]);
                if colors[id] > outdegree {
                    return Err(SimError::PortOutOfRange { vertex: e.source, port: colors[id], outdegree });
                }
            }
        }
        Model::SimpleBroadcast | Model::OutdegreeAware => {}
    }
    Ok(())
}

/// Run `rounds` rounds and record every global state.
pub fn run<A: Algorithm>(
    alg: &A,
    model: Model,
    network: &Network,
    inputs: &[A::Input],
    options: RunOptions<A::State>,
    rounds: usize,
) -> Result<ExecutionTrace<A::State, A::Output>, SimError> {
    let starts = options.starts.clone();
    let mut exec = Execution::new(alg, model, network, inputs, options)?;
    let mut states = vec![exec.states().to_vec()];
    let mut outputs = vec![exec.outputs()];
    for _ in 0..rounds {
        exec.step();
        states.push(exec.states().to_vec());
        outputs.push(exec.outputs());
    }
    Ok(ExecutionTrace { model, states, outputs, starts, closure_violations: exec.closure_violations() })
}

/// First round from which every agent's output satisfies `within` until the
/// end of the trace.
pub fn converged<O>(outputs: &[Vec<O>], within: impl Fn(&O) -> bool) -> Option<usize> {
    let mut first = None;
    for (t, row) in outputs.iter().enumerate().rev() {
        if row.iter().all(&within) {
            first = Some(t);
        } else {
            break;
        }
    }
    first
}

/// [`converged`] against a target point under a metric; outputs that are
/// not ready (`None`) or incomparable count as far away.
pub fn converged_to(outputs: &[Vec<Option<Output>>], target: &Output, metric: Metric, eps: f64) -> Option<usize> {
    converged(outputs, |o| {
        o.as_ref().and_then(|o| o.distance(target, metric)).is_some_and(|d| d <= eps)
    })
}

/// Probe `send` on sample states and outdegrees `1..=max_outdegree` and
/// check the constancy laws of `model`.
pub fn check_model_discipline<A: Algorithm>(alg: &A, model: Model, probes: &[A::State], max_outdegree: usize) -> bool {
    probes.iter().all(|q| {
        let reference = alg.send(q, 1);
        (1..=max_outdegree).all(|k| {
            let msgs = alg.send(q, k);
            if msgs.len() != k {
                return false;
            }
            match model {
                Model::SimpleBroadcast | Model::Symmetric => msgs.iter().all(|m| Some(m) == reference.first()),
                Model::OutdegreeAware => msgs.iter().all(|m| m == &msgs[0]),
                Model::OutputPortAware => true,
            }
        })
    })
}
