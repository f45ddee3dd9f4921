use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kernel::ExactKernel;
use super::scalar::make_pushsum;
use super::{convergence_bound, PushSumError, WireFormat};
use crate::functions::{frequency_of, multiplicities, nearest_in_qn, nearest_in_qn_clear, settled_usize, Help};
use crate::graph::{DynamicGraph, Value};
use crate::linalg::Rational;
use crate::sim::{Execution, Model, Network, RunOptions};
use crate::staticfreq::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Slack on float-mode comparisons.
pub const FLOAT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundSpread {
    pub round: usize,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

/// Outcome of a scalar Push-Sum run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub mode: Arithmetic,
    pub rounds_run: usize,
    /// `sum v / sum w`.
    pub target: String,
    pub eps: f64,
    pub per_round: Vec<RoundSpread>,
    /// First round from which every `x_i` stays within `eps` of the target.
    pub first_within_eps: Option<usize>,
    pub bound_rounds: usize,
    pub mass_conserved: bool,
    pub envelopes_monotone: bool,
}

impl ConvergenceReport {
    pub fn converged_by_bound(&self) -> bool {
        self.first_within_eps.is_some_and(|t| t <= self.bound_rounds)
    }

    /// `round,min_x,max_x,spread` lines with a header.
    pub fn csv(&self) -> String {
        let mut out = String::from("round,min_x,max_x,spread\n");
        for r in &self.per_round {
            out.push_str(&format!("{},{:e},{:e},{:e}\n", r.round, r.min, r.max, r.spread));
        }
        out
    }
}

/// Diameter to plug into the bound when agents start late.
pub fn effective_diameter(d: usize, starts: Option<&[usize]>) -> usize {
    starts.and_then(|s| s.iter().max().copied()).map_or(d, |s| s + d)
}

fn first_stable(ok: &[bool]) -> Option<usize> {
    let mut first = None;
    for (t, &good) in ok.iter().enumerate().rev() {
        if !good {
            break;
        }
        first = Some(t);
    }
    first
}

fn quot_sum(initial: &[(Rational, Rational)]) -> Rational {
    let v: Rational = initial.iter().map(|(v, _)| v).sum();
    let w: Rational = initial.iter().map(|(_, w)| w).sum();
    v / w
}

/// Exact scalar Push-Sum on the common-denominator kernel, checking mass
/// conservation and the monotone envelopes every round. `d` is the
/// dynamic diameter of `g`.
pub fn run_scalar_exact(
    g: &DynamicGraph,
    initial: &[(Rational, Rational)],
    starts: Option<Vec<usize>>,
    d: usize,
    eps: f64,
    rounds: usize,
) -> Result<ConvergenceReport, PushSumError> {
    make_pushsum(initial, WireFormat::PreDivided)?;
    let n = initial.len();
    if g.vertex_count() != n {
        return Err(PushSumError::InputCount { expected: g.vertex_count(), found: n });
    }
    let bound_rounds = convergence_bound(n, effective_diameter(d, starts.as_deref()), eps);
    let target = quot_sum(initial);
    let eps_r = Rational::from_f64(eps).ok_or(PushSumError::Eps(eps))?;
    let y0: Vec<Vec<Rational>> = initial.iter().map(|(v, _)| vec![v.clone()]).collect();
    let z0: Vec<Rational> = initial.iter().map(|(_, w)| w.clone()).collect();
    let (ymass, zmass): (Rational, Rational) = (y0.iter().map(|r| &r[0]).sum(), z0.iter().sum());
    let mut k = ExactKernel::new(&y0, &z0, starts)?;

    let extremes = |k: &ExactKernel| {
        let (mut lo, mut hi) = (0, 0);
        for i in 1..n {
            if k.cmp_x(i, lo, 0).is_lt() {
                lo = i;
            }
            if k.cmp_x(i, hi, 0).is_gt() {
                hi = i;
            }
        }
        (lo, hi)
    };
    let mut per_round = Vec::with_capacity(rounds + 1);
    let mut within = Vec::with_capacity(rounds + 1);
    let mut mass_conserved = true;
    let mut envelopes_monotone = true;
    let mut prev: Option<(ExactKernel, usize, usize)> = None;
    for t in 0..=rounds {
        if t > 0 {
            k.step(g.at(t));
        }
        let (lo, hi) = extremes(&k);
        let (min, max) = (k.x_f64(lo, 0).unwrap_or(f64::NAN), k.x_f64(hi, 0).unwrap_or(f64::NAN));
        per_round.push(RoundSpread { round: t, min, max, spread: max - min });
        within.push((0..n).all(|i| k.within(i, 0, &target, &eps_r)));
        mass_conserved &= k.y_mass_is(0, &ymass) && k.z_mass_is(&zmass);
        if let Some((p, plo, phi)) = &prev {
            envelopes_monotone &= k.cmp_x_with(hi, 0, p, *phi).is_le() && k.cmp_x_with(lo, 0, p, *plo).is_ge();
        }
        prev = Some((k.clone(), lo, hi));
    }
    Ok(ConvergenceReport {
        mode: Arithmetic::Exact,
        rounds_run: rounds,
        target: target.to_string(),
        eps,
        per_round,
        first_within_eps: first_stable(&within),
        bound_rounds,
        mass_conserved,
        envelopes_monotone,
    })
}

/// Float scalar Push-Sum through the round engine.
pub fn run_scalar_float(
    g: &DynamicGraph,
    initial: &[(Rational, Rational)],
    starts: Option<Vec<usize>>,
    d: usize,
    eps: f64,
    rounds: usize,
) -> Result<ConvergenceReport, PushSumError> {
    let inputs: Vec<(f64, f64)> = initial.iter().map(|(v, w)| (v.to_f64(), w.to_f64())).collect();
    let alg = make_pushsum(&inputs, WireFormat::PreDivided)?;
    let n = inputs.len();
    let bound_rounds = convergence_bound(n, effective_diameter(d, starts.as_deref()), eps);
    let target = quot_sum(initial);
    let tf = target.to_f64();
    let (ymass, zmass): (f64, f64) = (inputs.iter().map(|p| p.0).sum(), inputs.iter().map(|p| p.1).sum());
    let net = Network::Dynamic(g.clone());
    let opts = RunOptions { starts, ..RunOptions::default() };
    let mut exec = Execution::new(&alg, Model::OutdegreeAware, &net, &inputs, opts)?;
    let mut per_round = Vec::with_capacity(rounds + 1);
    let mut within = Vec::with_capacity(rounds + 1);
    let mut mass_conserved = true;
    let mut envelopes_monotone = true;
    for t in 0..=rounds {
        if t > 0 {
            exec.step();
        }
        let xs = exec.outputs();
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if let Some(p) = per_round.last() {
            let p: &RoundSpread = p;
            envelopes_monotone &= max <= p.max + FLOAT_SLACK && min >= p.min - FLOAT_SLACK;
        }
        per_round.push(RoundSpread { round: t, min, max, spread: max - min });
        within.push(xs.iter().all(|x| (x - tf).abs() <= eps + FLOAT_SLACK));
        let ys: f64 = exec.states().iter().map(|s| s.y).sum();
        let zs: f64 = exec.states().iter().map(|s| s.z).sum();
        mass_conserved &= (ys - ymass).abs() <= FLOAT_SLACK * ymass.abs().max(1.0)
            && (zs - zmass).abs() <= FLOAT_SLACK * zmass.abs().max(1.0);
    }
    Ok(ConvergenceReport {
        mode: Arithmetic::Float,
        rounds_run: rounds,
        target: target.to_string(),
        eps,
        per_round,
        first_within_eps: first_stable(&within),
        bound_rounds,
        mass_conserved,
        envelopes_monotone,
    })
}

/// Outcome of an exact frequency Push-Sum run with a scale-recovering help.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub help: String,
    pub rounds_run: usize,
    pub bound_rounds: usize,
    /// Frequencies (size bound) or multiplicities (exact size, leaders).
    pub truth: BTreeMap<Value, Rational>,
    /// First round from which every agent's rounded estimate equals the
    /// truth until the end of the run.
    pub first_exact: Option<usize>,
    /// Rounds at which some agent's rounded estimate differs from the
    /// previous round.
    pub changes: Vec<usize>,
    pub final_estimates: Vec<Option<BTreeMap<Value, Rational>>>,
    pub mass_conserved: bool,
}

fn round_to_qn(k: &ExactKernel, i: usize, c: usize, n: usize) -> Option<Rational> {
    let xf = k.x_f64(i, c)?;
    Some(nearest_in_qn_clear(xf, n).unwrap_or_else(|| nearest_in_qn(&k.x(i, c).expect("positive weight"), n)))
}

fn settled_count(k: &ExactKernel, i: usize, c: usize, scale: usize) -> Option<usize> {
    let e = k.x_f64(i, c)? * scale as f64;
    let r = e.round();
    let gap = (e - r).abs();
    if gap < 1.0 / 3.0 - 1e-9 {
        return (r >= 0.0).then_some(r as usize);
    }
    if gap > 1.0 / 3.0 + 1e-9 {
        return None;
    }
    settled_usize(&(k.x(i, c)? * Rational::from(scale)))
}

/// Exact frequency Push-Sum (one weight per agent) on the kernel, with the
/// output layer of `help`: frequencies rounded into `Q_N` for a size bound
/// `N`, and `scale * x` rounded to integers for an exact size or `l`
/// leaders. `d` is the dynamic diameter used for the bound with
/// `eps = 1/(2N^2)` (or `1/(3 scale)` for counts).
pub fn run_frequency_exact(
    g: &DynamicGraph,
    inputs: &[Label],
    help: Help,
    starts: Option<Vec<usize>>,
    d: usize,
    rounds: usize,
) -> Result<FrequencyReport, PushSumError> {
    let n = inputs.len();
    if g.vertex_count() != n {
        return Err(PushSumError::InputCount { expected: g.vertex_count(), found: n });
    }
    let values: Vec<Value> = inputs.iter().map(|l| l.value.clone()).collect();
    let alphabet: Vec<Value> = multiplicities(&values).into_keys().collect();
    let (truth, eps): (BTreeMap<Value, Rational>, f64) = match help {
        Help::Bound(b) if b > 0 => {
            let nu = frequency_of(&values).map_err(|_| PushSumError::Empty)?;
            (nu.support().clone(), 1.0 / (2.0 * (b * b) as f64))
        }
        Help::ExactSize(s) if s > 0 => (
            multiplicities(&values).into_iter().map(|(w, m)| (w, Rational::from(m))).collect(),
            1.0 / (3.0 * s as f64),
        ),
        Help::Leaders(l) if l > 0 => {
            if inputs.iter().filter(|x| x.leader).count() != l {
                return Err(PushSumError::LeaderCount(l));
            }
            (multiplicities(&values).into_iter().map(|(w, m)| (w, Rational::from(m))).collect(), 1.0 / (3.0 * l as f64))
        }
        _ => return Err(PushSumError::NoScale(help)),
    };
    let bound_rounds = convergence_bound(n, effective_diameter(d, starts.as_deref()), eps);
    let y0: Vec<Vec<Rational>> = values
        .iter()
        .map(|v| alphabet.iter().map(|w| if w == v { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let z0: Vec<Rational> = inputs
        .iter()
        .map(|l| if matches!(help, Help::Leaders(_)) && !l.leader { Rational::zero() } else { Rational::one() })
        .collect();
    let ymass: Vec<Rational> = (0..alphabet.len()).map(|c| y0.iter().map(|r| &r[c]).sum()).collect();
    let zmass: Rational = z0.iter().sum();
    let mut k = ExactKernel::new(&y0, &z0, starts)?;

    let estimate = |k: &ExactKernel, i: usize| -> Option<BTreeMap<Value, Rational>> {
        if k.z_is_zero(i) {
            return None;
        }
        let mut out = BTreeMap::new();
        for (c, w) in alphabet.iter().enumerate() {
            if k.y_is_zero(i, c) {
                continue;
            }
            let r = match help {
                Help::Bound(b) => round_to_qn(k, i, c, b)?,
                Help::ExactSize(s) => Rational::from(settled_count(k, i, c, s)?),
                Help::Leaders(l) => Rational::from(settled_count(k, i, c, l)?),
                Help::None => unreachable!("rejected above"),
            };
            if !r.is_zero() {
                out.insert(w.clone(), r);
            }
        }
        Some(out)
    };

    let mut exact = Vec::with_capacity(rounds + 1);
    let mut changes = Vec::new();
    let mut mass_conserved = true;
    let mut last: Vec<Option<BTreeMap<Value, Rational>>> = Vec::new();
    for t in 0..=rounds {
        if t > 0 {
            k.step(g.at(t));
        }
        let est: Vec<_> = (0..n).map(|i| estimate(&k, i)).collect();
        exact.push(est.iter().all(|e| e.as_ref() == Some(&truth)));
        if t > 0 && est != last {
            changes.push(t);
        }
        mass_conserved &= ymass.iter().enumerate().all(|(c, m)| k.y_mass_is(c, m)) && k.z_mass_is(&zmass);
        last = est;
    }
    Ok(FrequencyReport {
        help: help.to_string(),
        rounds_run: rounds,
        bound_rounds,
        truth,
        first_exact: first_stable(&exact),
        changes,
        final_estimates: last,
        mass_conserved,
    })
}
