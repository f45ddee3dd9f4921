//! Small algorithms used to exercise the engine and the lifting machinery.

use std::collections::BTreeSet;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::{Algorithm, LocalView, Model};
use crate::graph::Value;
use crate::linalg::Rational;

fn digest<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Broadcast the set of values seen so far; computes the input support in
/// diameter-many rounds.
#[derive(Debug, Clone, Copy, Default)]
pub struct Flooding;

impl Algorithm for Flooding {
    type Input = Value;
    type State = BTreeSet<Value>;
    type Message = BTreeSet<Value>;
    type Output = BTreeSet<Value>;

    fn name(&self) -> String {
        "flooding".into()
    }

    fn initial_state(&self, input: &Value) -> Self::State {
        BTreeSet::from([input.clone()])
    }

    fn send(&self, state: &Self::State, outdegree: usize) -> Vec<Self::Message> {
        vec![state.clone(); outdegree]
    }

    fn transition(&self, state: &Self::State, received: &[Self::Message], _: &LocalView) -> Self::State {
        let mut next = state.clone();
        for m in received {
            next.extend(m.iter().cloned());
        }
        next
    }

    fn output(&self, state: &Self::State) -> Self::Output {
        state.clone()
    }
}

/// Keep the smallest value seen.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinPropagation;

impl Algorithm for MinPropagation {
    type Input = Value;
    type State = Value;
    type Message = Value;
    type Output = Value;

    fn name(&self) -> String {
        "min-propagation".into()
    }

    fn initial_state(&self, input: &Value) -> Value {
        input.clone()
    }

    fn send(&self, state: &Value, outdegree: usize) -> Vec<Value> {
        vec![state.clone(); outdegree]
    }

    fn transition(&self, state: &Value, received: &[Value], _: &LocalView) -> Value {
        received.iter().chain(std::iter::once(state)).min().expect("non-empty").clone()
    }

    fn output(&self, state: &Value) -> Value {
        state.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountingState {
    pub value: Value,
    pub last: usize,
    pub total: usize,
}

/// Count received messages (the indegree, round after round).
#[derive(Debug, Clone, Copy, Default)]
pub struct MessageCounting;

impl Algorithm for MessageCounting {
    type Input = Value;
    type State = CountingState;
    type Message = Value;
    type Output = (usize, usize);

    fn name(&self) -> String {
        "message-counting".into()
    }

    fn initial_state(&self, input: &Value) -> CountingState {
        CountingState { value: input.clone(), last: 0, total: 0 }
    }

    fn send(&self, state: &CountingState, outdegree: usize) -> Vec<Value> {
        vec![state.value.clone(); outdegree]
    }

    fn transition(&self, state: &CountingState, received: &[Value], _: &LocalView) -> CountingState {
        CountingState { value: state.value.clone(), last: received.len(), total: state.total + received.len() }
    }

    fn output(&self, state: &CountingState) -> (usize, usize) {
        (state.last, state.total)
    }
}

/// Replace the state by the mean of the received values (which does not
/// converge to the input average on irregular graphs).
#[derive(Debug, Clone, Copy, Default)]
pub struct BroadcastAveraging;

impl Algorithm for BroadcastAveraging {
    type Input = Rational;
    type State = Rational;
    type Message = Rational;
    type Output = Rational;

    fn name(&self) -> String {
        "broadcast-averaging".into()
    }

    fn initial_state(&self, input: &Rational) -> Rational {
        input.clone()
    }

    fn send(&self, state: &Rational, outdegree: usize) -> Vec<Rational> {
        vec![state.clone(); outdegree]
    }

    fn transition(&self, state: &Rational, received: &[Rational], _: &LocalView) -> Rational {
        if received.is_empty() {
            return state.clone();
        }
        received.iter().sum::<Rational>() / Rational::from(received.len())
    }

    fn output(&self, state: &Rational) -> Rational {
        state.clone()
    }
}

/// Digest of the agent's in-view: hash of the sorted received digests.
#[derive(Debug, Clone, Copy, Default)]
pub struct ViewDigest;

impl Algorithm for ViewDigest {
    type Input = Value;
    type State = u64;
    type Message = u64;
    type Output = u64;

    fn name(&self) -> String {
        "view-digest".into()
    }

    fn initial_state(&self, input: &Value) -> u64 {
        digest(input)
    }

    fn send(&self, state: &u64, outdegree: usize) -> Vec<u64> {
        vec![*state; outdegree]
    }

    fn transition(&self, state: &u64, received: &[u64], _: &LocalView) -> u64 {
        let mut r = received.to_vec();
        r.sort_unstable();
        digest(&(state, r))
    }

    fn output(&self, state: &u64) -> u64 {
        *state
    }
}

/// Isotropic outdegree-aware digest: every message carries the sender's
/// outdegree.
#[derive(Debug, Clone, Copy, Default)]
pub struct OutdegreeDigest;

impl Algorithm for OutdegreeDigest {
    type Input = Value;
    type State = u64;
    type Message = (u64, usize);
    type Output = u64;

    fn name(&self) -> String {
        "outdegree-digest".into()
    }

    fn initial_state(&self, input: &Value) -> u64 {
        digest(input)
    }

    fn send(&self, state: &u64, outdegree: usize) -> Vec<(u64, usize)> {
        vec![(*state, outdegree); outdegree]
    }

    fn transition(&self, state: &u64, received: &[(u64, usize)], local: &LocalView) -> u64 {
        let mut r = received.to_vec();
        r.sort_unstable();
        digest(&(state, r, local.outdegree))
    }

    fn output(&self, state: &u64) -> u64 {
        *state
    }

    fn supports(&self, model: Model) -> bool {
        model.knows_outdegree()
    }
}

/// Sends a different message on each output port.
#[derive(Debug, Clone, Copy, Default)]
pub struct PortDependent;

impl Algorithm for PortDependent {
    type Input = Value;
    type State = u64;
    type Message = (u64, usize);
    type Output = u64;

    fn name(&self) -> String {
        "port-dependent".into()
    }

    fn initial_state(&self, input: &Value) -> u64 {
        digest(input)
    }

    fn send(&self, state: &u64, outdegree: usize) -> Vec<(u64, usize)> {
        (1..=outdegree).map(|port| (*state, port)).collect()
    }

    fn transition(&self, state: &u64, received: &[(u64, usize)], _: &LocalView) -> u64 {
        let mut r = received.to_vec();
        r.sort_unstable();
        digest(&(state, r))
    }

    fn output(&self, state: &u64) -> u64 {
        *state
    }

    fn supports(&self, model: Model) -> bool {
        model == Model::OutputPortAware
    }
}
