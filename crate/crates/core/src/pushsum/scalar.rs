use std::marker::PhantomData;

use super::{Mass, PushSumError, WireFormat};
use crate::sim::{Algorithm, LocalView, Model};

#[derive(Debug, Clone, PartialEq)]
pub struct PushSumState<M> {
    pub y: M,
    pub z: M,
}

impl<M: Mass> PushSumState<M> {
    pub fn x(&self) -> Option<M> {
        self.y.ratio(&self.z)
    }
}

/// One copy of the sender's mass and weight. With the pre-divided wire
/// format `divisor` is 1; with the raw format the receiver divides.
#[derive(Debug, Clone, PartialEq)]
pub struct PushSumMessage<M> {
    pub y: M,
    pub z: M,
    pub divisor: usize,
}

/// Scalar Push-Sum: `x_i` converges to `sum v / sum w`.
#[derive(Debug, Clone)]
pub struct PushSum<M> {
    wire: WireFormat,
    _mass: PhantomData<M>,
}

/// Descriptor for the initial pairs `(v_i, w_i)`, which become the inputs
/// of the execution.
pub fn make_pushsum<M: Mass>(initial: &[(M, M)], wire: WireFormat) -> Result<PushSum<M>, PushSumError> {
    if initial.is_empty() {
        return Err(PushSumError::Empty);
    }
    if let Some(i) = initial.iter().position(|(_, w)| !w.is_positive()) {
        return Err(PushSumError::NonPositiveWeight(i));
    }
    Ok(PushSum { wire, _mass: PhantomData })
}

impl<M: Mass> PushSum<M> {
    pub fn wire(&self) -> WireFormat {
        self.wire
    }
}

pub(crate) fn outgoing<T: Clone>(wire: WireFormat, d: usize, divide: impl Fn(usize) -> T) -> Vec<(T, usize)> {
    match wire {
        WireFormat::PreDivided => vec![(divide(d), 1); d],
        WireFormat::Raw => vec![(divide(1), d); d],
    }
}

impl<M: Mass> Algorithm for PushSum<M> {
    type Input = (M, M);
    type State = PushSumState<M>;
    type Message = PushSumMessage<M>;
    type Output = M;

    fn name(&self) -> String {
        "push-sum".into()
    }

    fn initial_state(&self, input: &(M, M)) -> PushSumState<M> {
        PushSumState { y: input.0.clone(), z: input.1.clone() }
    }

    fn send(&self, state: &PushSumState<M>, outdegree: usize) -> Vec<PushSumMessage<M>> {
        outgoing(self.wire, outdegree, |d| (state.y.div_usize(d), state.z.div_usize(d)))
            .into_iter()
            .map(|((y, z), divisor)| PushSumMessage { y, z, divisor })
            .collect()
    }

    fn transition(&self, _: &PushSumState<M>, received: &[PushSumMessage<M>], _: &LocalView) -> PushSumState<M> {
        let mut y = M::zero();
        let mut z = M::zero();
        for m in received {
            y = y.add(&m.y.div_usize(m.divisor));
            z = z.add(&m.z.div_usize(m.divisor));
        }
        PushSumState { y, z }
    }

    fn output(&self, state: &PushSumState<M>) -> M {
        state.x().unwrap_or_else(M::zero)
    }

    fn supports(&self, model: Model) -> bool {
        model == Model::OutdegreeAware
    }
}
