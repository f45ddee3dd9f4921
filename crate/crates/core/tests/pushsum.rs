mod common;

use anonet::functions::{FrequencyFunction, Help, Output, TargetFunction};
use anonet::graph::{generate, DynamicGraph};
use anonet::linalg::spread;
use anonet::pushsum::*;
use anonet::sim::{run, Model, Network, RunOptions};
use anonet::{DirectedMultigraph, Rational, Value};
use proptest::prelude::*;

use common::labels;

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

fn pairs(v: &[i64]) -> Vec<(Rational, Rational)> {
    v.iter().map(|&x| (Rational::from(x), Rational::one())).collect()
}

fn tokens(s: &str) -> Vec<Value> {
    s.chars().map(|c| Value::token(c.to_string())).collect()
}

#[test]
fn two_agents_average_in_one_round() {
    let net = Network::fixed(generate::complete(2, true));
    let inputs = vec![(r(0, 1), r(1, 1)), (r(1, 1), r(1, 1))];
    let alg = make_pushsum(&inputs, WireFormat::PreDivided).unwrap();
    let trace = run(&alg, Model::OutdegreeAware, &net, &inputs, RunOptions::default(), 3).unwrap();
    for t in 1..=3 {
        assert_eq!(trace.outputs[t], vec![r(1, 2), r(1, 2)]);
    }
}

#[test]
fn lone_agent_keeps_its_ratio() {
    let net = Network::fixed(generate::isolated(1));
    let inputs = vec![(r(3, 1), r(4, 1))];
    let alg = make_pushsum(&inputs, WireFormat::Raw).unwrap();
    let trace = run(&alg, Model::OutdegreeAware, &net, &inputs, RunOptions::default(), 5).unwrap();
    assert!(trace.outputs.iter().all(|o| o == &vec![r(3, 4)]));
}

#[test]
fn rejects_bad_weights_and_models() {
    assert_eq!(make_pushsum(&[(r(1, 1), r(0, 1))], WireFormat::PreDivided).unwrap_err(), PushSumError::NonPositiveWeight(0));
    let inputs = pairs(&[1, 2]);
    let alg = make_pushsum(&inputs, WireFormat::PreDivided).unwrap();
    let net = Network::fixed(generate::complete(2, true));
    assert!(run(&alg, Model::SimpleBroadcast, &net, &inputs, RunOptions::default(), 1).is_err());
    assert!(make_frequency_pushsum::<Rational>(TargetFunction::Max.clone(), Help::None, WeightRule::default(), WireFormat::default()).is_ok());
    assert!(make_frequency_pushsum::<Rational>(TargetFunction::Frequency, Help::None, WeightRule::default(), WireFormat::default()).is_err());
    assert!(make_frequency_pushsum::<Rational>(TargetFunction::Sum, Help::Bound(4), WeightRule::default(), WireFormat::default()).is_err());
    assert!(make_frequency_pushsum::<Rational>(TargetFunction::Sum, Help::Leaders(1), WeightRule::default(), WireFormat::default()).is_ok());
}

#[test]
fn three_agents_reach_quot_sum() {
    let g = DynamicGraph::constant(generate::complete(3, true)).unwrap();
    let report = run_scalar_exact(&g, &pairs(&[3, 0, 0]), None, 1, 1e-6, 150).unwrap();
    assert_eq!(report.target, "1");
    assert_eq!(report.bound_rounds, 125);
    assert!(report.converged_by_bound());
    assert!(report.per_round[report.bound_rounds].spread < 1e-9);
    assert!(report.mass_conserved && report.envelopes_monotone);
    assert!(report.csv().starts_with("round,min_x,max_x,spread\n0,"));
}

#[test]
fn float_mode_matches_exact_mode() {
    let g = generate::random_dynamic_with_diameter(4, 2, 9, 3).unwrap();
    let init = pairs(&[5, -1, 2, 0]);
    let exact = run_scalar_exact(&g, &init, None, 2, 1e-6, 300).unwrap();
    let float = run_scalar_float(&g, &init, None, 2, 1e-6, 300).unwrap();
    assert!(float.mass_conserved && float.envelopes_monotone);
    for (a, b) in exact.per_round.iter().zip(&float.per_round) {
        assert!((a.min - b.min).abs() < 1e-9 && (a.max - b.max).abs() < 1e-9);
    }
}

#[test]
fn wire_formats_agree() {
    let g = Network::Dynamic(generate::random_dynamic_with_diameter(4, 2, 5, 4).unwrap());
    let init = pairs(&[1, 7, 2, 2]);
    let a = make_pushsum(&init, WireFormat::PreDivided).unwrap();
    let b = make_pushsum(&init, WireFormat::Raw).unwrap();
    let ta = run(&a, Model::OutdegreeAware, &g, &init, RunOptions::default(), 12).unwrap();
    let tb = run(&b, Model::OutdegreeAware, &g, &init, RunOptions::default(), 12).unwrap();
    assert_eq!(ta.states, tb.states);

    let inputs = labels(&tokens("abab"), &[]);
    for rule in [WeightRule::SharedWeight, WeightRule::Verbatim] {
        let a = make_frequency_pushsum::<Rational>(TargetFunction::Frequency, Help::Bound(4), rule, WireFormat::PreDivided).unwrap();
        let b = make_frequency_pushsum::<Rational>(TargetFunction::Frequency, Help::Bound(4), rule, WireFormat::Raw).unwrap();
        let ta = run(&a, Model::OutdegreeAware, &g, &inputs, RunOptions::default(), 8).unwrap();
        let tb = run(&b, Model::OutdegreeAware, &g, &inputs, RunOptions::default(), 8).unwrap();
        assert_eq!(ta.states, tb.states);
    }
}

#[test]
fn kernel_matches_descriptor() {
    for seed in 0..6u64 {
        let n = 2 + seed as usize % 3;
        let g = generate::random_dynamic_with_diameter(n, 1 + seed as usize % 2, seed, 3).unwrap();
        let starts = (seed % 2 == 1).then(|| (0..n).map(|i| 1 + (i * seed as usize) % 3).collect::<Vec<_>>());
        let init: Vec<(Rational, Rational)> = (0..n).map(|i| (r(i as i64 * 3 - 2, 1), r(1 + i as i64, 2))).collect();
        let alg = make_pushsum(&init, WireFormat::PreDivided).unwrap();
        let opts = RunOptions { starts: starts.clone(), ..RunOptions::default() };
        let trace = run(&alg, Model::OutdegreeAware, &Network::Dynamic(g.clone()), &init, opts, 10).unwrap();
        let y0: Vec<Vec<Rational>> = init.iter().map(|p| vec![p.0.clone()]).collect();
        let z0: Vec<Rational> = init.iter().map(|p| p.1.clone()).collect();
        let mut k = ExactKernel::new(&y0, &z0, starts).unwrap();
        for t in 0..=10 {
            if t > 0 {
                k.step(g.at(t));
            }
            for i in 0..n {
                assert_eq!(k.y(i, 0), trace.states[t][i].y, "seed {seed} round {t}");
                assert_eq!(k.z(i), trace.states[t][i].z);
            }
        }

        // frequency variant with one weight per agent
        let values = tokens(&"abcab"[..n]);
        let inputs = labels(&values, &[0]);
        let alphabet: Vec<Value> = anonet::functions::multiplicities(&values).into_keys().collect();
        let alg = make_frequency_pushsum::<Rational>(TargetFunction::Multiset, Help::Leaders(1), WeightRule::SharedWeight, WireFormat::Raw).unwrap();
        let trace = run(&alg, Model::OutdegreeAware, &Network::Dynamic(g.clone()), &inputs, RunOptions::default(), 8).unwrap();
        let y0: Vec<Vec<Rational>> = values
            .iter()
            .map(|v| alphabet.iter().map(|w| if w == v { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let z0: Vec<Rational> = (0..n).map(|i| if i == 0 { Rational::one() } else { Rational::zero() }).collect();
        let mut k = ExactKernel::new(&y0, &z0, None).unwrap();
        for t in 0..=8 {
            if t > 0 {
                k.step(g.at(t));
            }
            for i in 0..n {
                let s = &trace.states[t][i];
                let Weight::Shared(z) = &s.z else { panic!("shared weight") };
                assert_eq!(&k.z(i), z);
                for (c, w) in alphabet.iter().enumerate() {
                    assert_eq!(k.y(i, c), s.y.get(w).cloned().unwrap_or_else(Rational::zero));
                }
            }
        }
    }
}

#[test]
fn bounded_frequency_on_ring_is_exact() {
    let values = tokens("aabb");
    let g = DynamicGraph::constant(generate::bidirectional_ring(4, true)).unwrap();
    let report = run_frequency_exact(&g, &labels(&values, &[]), Help::Bound(4), None, 2, 120).unwrap();
    assert_eq!(report.truth, FrequencyFunction::of(&values).unwrap().support().clone());
    assert!(report.first_exact.unwrap() <= report.bound_rounds);

    let alg = make_frequency_pushsum::<Rational>(TargetFunction::Frequency, Help::Bound(4), WeightRule::default(), WireFormat::default()).unwrap();
    let net = Network::fixed(generate::bidirectional_ring(4, true));
    let trace = run(&alg, Model::OutdegreeAware, &net, &labels(&values, &[]), RunOptions::default(), 40).unwrap();
    let expected = Output::Frequency(FrequencyFunction::of(&values).unwrap());
    assert!(trace.outputs[40].iter().all(|o| o.as_ref() == Some(&expected)));
}

#[test]
fn constant_inputs_give_average_from_the_start() {
    let g = Network::Dynamic(generate::random_dynamic_with_diameter(3, 2, 1, 2).unwrap());
    let values = vec![Value::int(4); 3];
    let alg = make_frequency_pushsum::<Rational>(TargetFunction::Average, Help::None, WeightRule::default(), WireFormat::default()).unwrap();
    let trace = run(&alg, Model::OutdegreeAware, &g, &labels(&values, &[]), RunOptions::default(), 6).unwrap();
    for row in &trace.outputs {
        assert!(row.iter().all(|o| o == &Some(Output::Number(Rational::from(4i64)))));
    }
}

#[test]
fn leader_recovers_multiplicity_on_star() {
    let values = tokens("aab");
    let inputs = labels(&values, &[0]);
    let f = TargetFunction::Multiplicity(Value::token("a"));
    let alg = make_frequency_pushsum::<Rational>(f, Help::Leaders(1), WeightRule::default(), WireFormat::default()).unwrap();
    let net = Network::fixed(generate::star(3, true));
    let trace = run(&alg, Model::OutdegreeAware, &net, &inputs, RunOptions::default(), 60).unwrap();
    // weight has not reached the leaves yet
    assert_eq!(trace.outputs[0][1], None);
    let two = Some(Output::Number(Rational::from(2i64)));
    assert!(trace.outputs[60].iter().all(|o| o == &two));

    let g = DynamicGraph::constant(generate::star(3, true)).unwrap();
    let report = run_frequency_exact(&g, &inputs, Help::Leaders(1), None, 2, 200).unwrap();
    assert!(report.first_exact.is_some_and(|t| t <= report.bound_rounds));
}

#[test]
fn verbatim_weights_drift_on_irregular_graphs() {
    // irregular strongly connected graph with self-loops
    let g = DirectedMultigraph::from_pairs(
        4,
        &[(0, 0), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 1), (3, 3)],
    )
    .unwrap();
    let values = tokens("abbb");
    let inputs = labels(&values, &[]);
    let net = Network::fixed(g);
    let a = Value::token("a");
    let x_a = |rule| {
        let alg = make_frequency_pushsum::<Rational>(TargetFunction::Frequency, Help::Bound(4), rule, WireFormat::default()).unwrap();
        let trace = run(&alg, Model::OutdegreeAware, &net, &inputs, RunOptions::default(), 80).unwrap();
        trace.final_state()[2].x().unwrap()[&a].to_f64()
    };
    assert!((x_a(WeightRule::SharedWeight) - 0.25).abs() < 1e-6);
    assert!((x_a(WeightRule::Verbatim) - 3.0 / 11.0).abs() < 1e-6);
}

#[test]
fn asynchronous_starts() {
    let g = DynamicGraph::constant(generate::complete(2, true)).unwrap();
    let init = pairs(&[0, 6]);
    let alg = make_pushsum(&init, WireFormat::PreDivided).unwrap();
    let net = Network::Dynamic(g.clone());
    let plain = run(&alg, Model::OutdegreeAware, &net, &init, RunOptions::default(), 8).unwrap();
    let all_one = RunOptions { starts: Some(vec![1, 1]), ..RunOptions::default() };
    assert_eq!(run(&alg, Model::OutdegreeAware, &net, &init, all_one, 8).unwrap().states, plain.states);

    let late = RunOptions { starts: Some(vec![1, 3]), ..RunOptions::default() };
    let trace = run(&alg, Model::OutdegreeAware, &net, &init, late, 8).unwrap();
    for t in 0..=2 {
        assert_eq!(trace.states[t][1], trace.states[0][1], "agent 2 idle in round {t}");
        assert_eq!(trace.outputs[t][0], r(0, 1));
    }
    assert!(trace.outputs[3..].iter().all(|o| o == &vec![r(3, 1), r(3, 1)]));

    // equal late starts shift the plain run
    let s = 4;
    let shifted = RunOptions { starts: Some(vec![s, s]), ..RunOptions::default() };
    let trace = run(&alg, Model::OutdegreeAware, &net, &init, shifted, 8 + s - 1).unwrap();
    assert_eq!(trace.states[s - 1..], plain.states[..]);

    let report = run_scalar_exact(&g, &init, Some(vec![1, 3]), 1, 1e-6, 60).unwrap();
    assert_eq!(report.bound_rounds, convergence_bound(2, 4, 1e-6));
    assert!(report.converged_by_bound());
}

#[test]
fn suffix_is_reproduced_from_any_state() {
    let g = generate::random_dynamic_with_diameter(4, 2, 3, 2).unwrap();
    let net = Network::Dynamic(g);
    let init = pairs(&[1, 2, 3, 10]);
    let alg = make_pushsum(&init, WireFormat::PreDivided).unwrap();
    let trace = run(&alg, Model::OutdegreeAware, &net, &init, RunOptions::default(), 12).unwrap();
    // the schedule has period 2 and no prefix, so restarting at an even round replays it
    for t in [2usize, 4, 8] {
        let opts = RunOptions { init_override: Some(trace.states[t].clone()), ..RunOptions::default() };
        let again = run(&alg, Model::OutdegreeAware, &net, &init, opts, 12 - t).unwrap();
        assert_eq!(again.states[..], trace.states[t..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_on_random_schedules(seed in 0u64..1000, n in 2usize..=4, d in 1usize..=2, vals in proptest::collection::vec(-5i64..=5, 4)) {
        let g = generate::random_dynamic_with_diameter(n, d, seed, 3).unwrap();
        let init: Vec<(Rational, Rational)> = (0..n).map(|i| (Rational::from(vals[i]), r(1 + (i as i64) % 2, 1))).collect();
        let alg = make_pushsum(&init, WireFormat::PreDivided).unwrap();
        let rounds = 8 * d;
        let trace = run(&alg, Model::OutdegreeAware, &Network::Dynamic(g), &init, RunOptions::default(), rounds).unwrap();
        let wsum: Rational = init.iter().map(|p| &p.1).sum();
        let vsum: Rational = init.iter().map(|p| &p.0).sum();
        let alpha = Rational::one() / Rational::from(n.pow(d as u32));
        let contraction = Rational::one() - Rational::one() / Rational::from(n.pow(2 * d as u32));
        let s0 = spread(&trace.outputs[0]);
        for t in 0..=rounds {
            let states = &trace.states[t];
            prop_assert_eq!(states.iter().map(|s| &s.y).sum::<Rational>(), vsum.clone());
            prop_assert_eq!(states.iter().map(|s| &s.z).sum::<Rational>(), wsum.clone());
            if t >= d {
                for s in states {
                    prop_assert!(s.z >= &alpha * &wsum && s.z <= wsum);
                }
            }
            let mut factor = Rational::one();
            for _ in 0..t / d {
                factor = &factor * &contraction;
            }
            prop_assert!(spread(&trace.outputs[t]) <= &factor * &s0);
            if t > 0 {
                let max = |row: &Vec<Rational>| row.iter().max().unwrap().clone();
                let min = |row: &Vec<Rational>| row.iter().min().unwrap().clone();
                prop_assert!(max(&trace.outputs[t]) <= max(&trace.outputs[t - 1]));
                prop_assert!(min(&trace.outputs[t]) >= min(&trace.outputs[t - 1]));
            }
        }
    }
}
