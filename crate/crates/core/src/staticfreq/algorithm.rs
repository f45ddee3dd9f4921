use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::reconstruct::{isolated_base, reconstruct_base, ReconstructedBase, Tags};
use super::solve::{apply_help, evaluate_target, solve_od, solve_op, solve_sym, FibreSolution};
use super::views::{Label, ViewId, ViewInterner};
use super::StaticError;
use crate::functions::{FunctionClass, Help, Output, TargetFunction};
use crate::graph::Value;
use crate::sim::{Algorithm, LocalView, Model};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StaticState {
    pub label: Label,
    pub view: ViewId,
    /// Rounds run so far, saturating at the view cap.
    pub depth: usize,
    /// Outdegree seen in the last round, in the models that reveal it.
    pub outdegree: Option<usize>,
}

/// View, local outdegree and nonzero-depth flag of a cached output.
type CacheKey = (ViewId, Option<usize>, bool);

/// Views-based algorithm for static networks: every agent floods its view,
/// rebuilds the minimum base from it, solves the fibre balance equations of
/// the model and evaluates the target on the weighted class values.
///
/// Views are hash-consed in an interner shared by all agents of the
/// descriptor, so states are small handles.
#[derive(Debug)]
pub struct StaticFrequency {
    model: Model,
    target: TargetFunction,
    help: Help,
    cap: Option<usize>,
    views: RefCell<ViewInterner>,
    cache: RefCell<HashMap<CacheKey, Option<Output>>>,
}

/// Checks that `target` is computable in `model` with `help`. `cap` bounds
/// the depth of stored views, which makes the algorithm self-stabilizing
/// when `cap >= n + D`.
pub fn make_static_algorithm(
    model: Model,
    target: TargetFunction,
    help: Help,
    cap: Option<usize>,
) -> Result<StaticFrequency, StaticError> {
    let ok = match (target.class(), model) {
        (FunctionClass::SetBased, _) => true,
        (_, Model::SimpleBroadcast) => false,
        (FunctionClass::FrequencyBased, _) => true,
        (FunctionClass::MultisetBased, _) => matches!(help, Help::ExactSize(_) | Help::Leaders(_)),
    };
    if !ok || matches!(help, Help::ExactSize(0) | Help::Leaders(0)) {
        return Err(StaticError::Incompatible { target: Box::new(target), model, help });
    }
    Ok(StaticFrequency {
        model,
        target,
        help,
        cap,
        views: RefCell::new(ViewInterner::new()),
        cache: RefCell::new(HashMap::new()),
    })
}

impl StaticFrequency {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn target(&self) -> &TargetFunction {
        &self.target
    }

    pub fn help(&self) -> Help {
        self.help
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    fn tags(&self) -> Tags {
        match self.model {
            Model::OutdegreeAware => Tags::Outdegree,
            Model::OutputPortAware => Tags::Port,
            Model::SimpleBroadcast | Model::Symmetric => Tags::Plain,
        }
    }

    /// The base an agent in `state` currently reconstructs.
    pub fn base_of(&self, state: &StaticState) -> Option<ReconstructedBase> {
        let root_tag = if self.tags() == Tags::Outdegree { state.outdegree.unwrap_or(0) } else { 0 };
        let mut views = self.views.borrow_mut();
        if views.height(state.view) == 0 && state.depth > 0 {
            return Some(isolated_base(&views, state.view, root_tag, self.tags()));
        }
        reconstruct_base(&mut views, state.view, root_tag, self.tags())
    }

    /// Fibre sizes (up to scale, or exactly when the help pins them) of a
    /// reconstructed base.
    pub fn solve(&self, base: &ReconstructedBase) -> Result<FibreSolution, StaticError> {
        let sol = match self.model {
            Model::OutdegreeAware => solve_od(&base.graph, base.outdegrees.as_deref().unwrap_or_default())?,
            Model::OutputPortAware => solve_op(&base.graph)?,
            Model::Symmetric => solve_sym(&base.graph)?,
            // only set-based targets run here, so any positive weights do
            Model::SimpleBroadcast => FibreSolution {
                z: vec![1.into(); base.graph.vertex_count()],
                scale: super::Scale::Unknown,
            },
        };
        // the support alone decides a set-based target
        if self.target.class() == FunctionClass::SetBased {
            return Ok(sol);
        }
        let leaders: Vec<bool> = base.labels.iter().map(|l| l.leader).collect();
        apply_help(&sol, self.help, &leaders)
    }

    fn compute(&self, state: &StaticState) -> Option<Output> {
        let base = self.base_of(state)?;
        let sol = self.solve(&base).ok()?;
        let values: Vec<Value> = base.labels.iter().map(|l| l.value.clone()).collect();
        evaluate_target(&sol, &values, &self.target).ok()
    }

    /// A corrupted state for `label`: a random view of the given height over
    /// labels drawn from `pool`, with a random outdegree.
    pub fn garbage_state(&self, label: Label, pool: &[Value], height: usize, seed: u64) -> StaticState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut views = self.views.borrow_mut();
        let random_label = |rng: &mut ChaCha8Rng| {
            let value = if pool.is_empty() { label.value.clone() } else { pool[rng.gen_range(0..pool.len())].clone() };
            Label::new(value, rng.gen_bool(0.2))
        };
        let mut layer: Vec<ViewId> = (0..3).map(|_| {
            let l = random_label(&mut rng);
            views.leaf(l)
        }).collect();
        for _ in 0..height {
            let mut next = Vec::new();
            for _ in 0..3 {
                let k = rng.gen_range(1..=3);
                let children = (0..k).map(|_| (rng.gen_range(0..=3), layer[rng.gen_range(0..layer.len())])).collect();
                let l = random_label(&mut rng);
                next.push(views.intern(l, children));
            }
            layer = next;
        }
        let mut view = layer[0];
        if let Some(cap) = self.cap {
            view = views.truncate(view, cap);
        }
        StaticState { label, view, depth: rng.gen_range(0..=height), outdegree: Some(rng.gen_range(1..=4)) }
    }

    /// Number of distinct views interned so far.
    pub fn interned_views(&self) -> usize {
        self.views.borrow().len()
    }
}

impl Algorithm for StaticFrequency {
    type Input = Label;
    type State = StaticState;
    type Message = (usize, ViewId);
    type Output = Option<Output>;

    fn name(&self) -> String {
        format!("static-frequency[{}]", self.target)
    }

    fn initial_state(&self, input: &Label) -> StaticState {
        let view = self.views.borrow_mut().leaf(input.clone());
        StaticState { label: input.clone(), view, depth: 0, outdegree: None }
    }

    fn send(&self, state: &StaticState, outdegree: usize) -> Vec<(usize, ViewId)> {
        match self.model {
            Model::OutdegreeAware => vec![(outdegree, state.view); outdegree],
            Model::OutputPortAware => (1..=outdegree).map(|p| (p, state.view)).collect(),
            Model::SimpleBroadcast | Model::Symmetric => vec![(0, state.view); outdegree],
        }
    }

    fn transition(&self, state: &StaticState, received: &[(usize, ViewId)], local: &LocalView) -> StaticState {
        let mut views = self.views.borrow_mut();
        let mut view = views.intern(state.label.clone(), received.to_vec());
        if let Some(cap) = self.cap {
            view = views.truncate(view, cap);
        }
        let depth = state.depth.saturating_add(1).min(self.cap.unwrap_or(usize::MAX));
        StaticState { label: state.label.clone(), view, depth, outdegree: local.outdegree }
    }

    fn output(&self, state: &StaticState) -> Option<Output> {
        let key = (state.view, state.outdegree, state.depth > 0);
        if let Some(out) = self.cache.borrow().get(&key) {
            return out.clone();
        }
        let out = self.compute(state);
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }
}
