use std::collections::{BTreeMap, BTreeSet};
use std::marker::PhantomData;

use super::scalar::outgoing;
use super::{Mass, PushSumError, WeightRule, WireFormat};
use crate::functions::{nearest_in_qn, settled_usize, FrequencyFunction, FunctionClass, Help, Output, TargetFunction};
use crate::graph::Value;
use crate::linalg::Rational;
use crate::sim::{Algorithm, LocalView, Model};
use crate::staticfreq::Label;

/// Weights of the frequency variant: one per agent, or one per value.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight<M> {
    Shared(M),
    PerValue(BTreeMap<Value, M>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyState<M> {
    pub y: BTreeMap<Value, M>,
    pub z: Weight<M>,
}

impl<M: Mass> FrequencyState<M> {
    fn weight(&self, w: &Value) -> M {
        match &self.z {
            Weight::Shared(z) => z.clone(),
            Weight::PerValue(z) => z.get(w).cloned().unwrap_or_else(M::zero),
        }
    }

    /// `x[w] = y[w] / z[w]` over the values with positive mass; `None`
    /// while some such value still has zero weight.
    pub fn x(&self) -> Option<BTreeMap<Value, M>> {
        self.y
            .iter()
            .filter(|(_, y)| !y.is_zero())
            .map(|(w, y)| y.ratio(&self.weight(w)).map(|x| (w.clone(), x)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMessage<M> {
    pub state: FrequencyState<M>,
    pub divisor: usize,
    /// Sender's outdegree, used to pad values the sender has not seen.
    pub outdegree: usize,
}

/// Push-Sum on value indicators: `x[w]` tends to the frequency of `w`, or
/// to `mult(w) / l` when only the `l` leaders start with weight.
#[derive(Debug, Clone)]
pub struct FrequencyPushSum<M> {
    target: TargetFunction,
    help: Help,
    rule: WeightRule,
    wire: WireFormat,
    _mass: PhantomData<M>,
}

pub fn make_frequency_pushsum<M: Mass>(
    target: TargetFunction,
    help: Help,
    rule: WeightRule,
    wire: WireFormat,
) -> Result<FrequencyPushSum<M>, PushSumError> {
    let ok = match help {
        Help::None => target.is_continuous_in_frequency() || target.class() == FunctionClass::SetBased,
        Help::Bound(n) => n > 0 && target.class() != FunctionClass::MultisetBased,
        Help::ExactSize(n) => n > 0,
        Help::Leaders(l) => l > 0,
    };
    if !ok {
        return Err(PushSumError::Incompatible { target: Box::new(target), help });
    }
    Ok(FrequencyPushSum { target, help, rule, wire, _mass: PhantomData })
}

impl<M: Mass> FrequencyPushSum<M> {
    pub fn target(&self) -> &TargetFunction {
        &self.target
    }

    pub fn help(&self) -> Help {
        self.help
    }

    pub fn rule(&self) -> WeightRule {
        self.rule
    }

    /// Weight a fresh entry starts with at an agent.
    fn seed_weight(&self, leader: bool) -> M {
        match self.help {
            Help::Leaders(_) if !leader => M::zero(),
            _ => M::one(),
        }
    }

    /// Weight assumed for a value a sender has not seen yet.
    fn padding(&self) -> M {
        self.seed_weight(false)
    }

    /// Output for the current estimates, `None` when not ready.
    pub fn evaluate(&self, x: &BTreeMap<Value, M>) -> Option<Output> {
        if x.is_empty() {
            return None;
        }
        let f = &self.target;
        match self.help {
            Help::None => {
                if f.class() == FunctionClass::SetBased {
                    let support: Vec<Value> = x.keys().cloned().collect();
                    return f.evaluate_frequency(&FrequencyFunction::of(&support).ok()?).ok();
                }
                let exact: Option<BTreeMap<Value, Rational>> = x.iter().map(|(w, v)| v.exact().map(|r| (w.clone(), r))).collect();
                match exact {
                    Some(exact) => {
                        let total: Rational = exact.values().sum();
                        let nu = exact.into_iter().map(|(w, r)| Some((w, r.checked_div(&total).ok()?))).collect::<Option<_>>()?;
                        f.evaluate_frequency(&FrequencyFunction::new(nu).ok()?).ok()
                    }
                    None => f.evaluate_approximate(&x.iter().map(|(w, v)| (w.clone(), v.to_f64())).collect()).ok(),
                }
            }
            Help::Bound(n) => {
                let mut nu = BTreeMap::new();
                for (w, v) in x {
                    let q = match v.exact() {
                        Some(r) => nearest_in_qn(&r, n),
                        None => crate::functions::nearest_in_qn_f64(v.to_f64(), n),
                    };
                    if !q.is_zero() {
                        nu.insert(w.clone(), q);
                    }
                }
                f.evaluate_frequency(&FrequencyFunction::new(nu).ok()?).ok()
            }
            Help::ExactSize(n) => self.evaluate_counts(x, n),
            Help::Leaders(l) => self.evaluate_counts(x, l),
        }
    }

    /// Multiplicity estimates `scale * x[w]`, each within 1/3 of an integer.
    fn evaluate_counts(&self, x: &BTreeMap<Value, M>, scale: usize) -> Option<Output> {
        let mut m = BTreeMap::new();
        for (w, v) in x {
            let est = v.mul_usize(scale);
            let k = match est.exact() {
                Some(r) => settled_usize(&r)?,
                None => {
                    let e = est.to_f64();
                    let k = e.round();
                    if !((e - k).abs() < 1.0 / 3.0) || k < 0.0 {
                        return None;
                    }
                    k as usize
                }
            };
            if k > 0 {
                m.insert(w.clone(), k);
            }
        }
        self.target.evaluate_multiplicities(&m).ok()
    }
}

impl<M: Mass> Algorithm for FrequencyPushSum<M> {
    type Input = Label;
    type State = FrequencyState<M>;
    type Message = FrequencyMessage<M>;
    type Output = Option<Output>;

    fn name(&self) -> String {
        format!("frequency-push-sum[{}]", self.target)
    }

    fn initial_state(&self, input: &Label) -> FrequencyState<M> {
        let z0 = self.seed_weight(input.leader);
        let z = match self.rule {
            WeightRule::SharedWeight => Weight::Shared(z0),
            WeightRule::Verbatim => Weight::PerValue(BTreeMap::from([(input.value.clone(), z0)])),
        };
        FrequencyState { y: BTreeMap::from([(input.value.clone(), M::one())]), z }
    }

    fn send(&self, state: &FrequencyState<M>, outdegree: usize) -> Vec<FrequencyMessage<M>> {
        outgoing(self.wire, outdegree, |d| FrequencyState {
            y: state.y.iter().map(|(w, y)| (w.clone(), y.div_usize(d))).collect(),
            z: match &state.z {
                Weight::Shared(z) => Weight::Shared(z.div_usize(d)),
                Weight::PerValue(z) => Weight::PerValue(z.iter().map(|(w, z)| (w.clone(), z.div_usize(d))).collect()),
            },
        })
        .into_iter()
        .map(|(state, divisor)| FrequencyMessage { state, divisor, outdegree })
        .collect()
    }

    fn transition(&self, state: &FrequencyState<M>, received: &[FrequencyMessage<M>], _: &LocalView) -> FrequencyState<M> {
        let known: BTreeSet<Value> =
            state.y.keys().chain(received.iter().flat_map(|m| m.state.y.keys())).cloned().collect();
        let mut y: BTreeMap<Value, M> = known.iter().map(|w| (w.clone(), M::zero())).collect();
        for m in received {
            for (w, v) in &m.state.y {
                let acc = y.get_mut(w).expect("known");
                *acc = acc.add(&v.div_usize(m.divisor));
            }
        }
        let z = match self.rule {
            WeightRule::SharedWeight => Weight::Shared(received.iter().fold(M::zero(), |acc, m| {
                let Weight::Shared(z) = &m.state.z else { unreachable!("one weight rule per execution") };
                acc.add(&z.div_usize(m.divisor))
            })),
            WeightRule::Verbatim => {
                let pad = self.padding();
                let mut z: BTreeMap<Value, M> = known.iter().map(|w| (w.clone(), M::zero())).collect();
                for m in received {
                    let Weight::PerValue(zm) = &m.state.z else { unreachable!("one weight rule per execution") };
                    for (w, acc) in z.iter_mut() {
                        let v = match zm.get(w) {
                            Some(v) => v.div_usize(m.divisor),
                            None => pad.div_usize(m.outdegree),
                        };
                        *acc = acc.add(&v);
                    }
                }
                Weight::PerValue(z)
            }
        };
        FrequencyState { y, z }
    }

    fn output(&self, state: &FrequencyState<M>) -> Option<Output> {
        self.evaluate(&state.x()?)
    }

    fn supports(&self, model: Model) -> bool {
        model == Model::OutdegreeAware
    }
}
