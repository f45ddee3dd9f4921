#![allow(dead_code)]

use anonet::fibration::minimum_base_with;
use anonet::functions::{Help, Output, TargetFunction};
use anonet::graph::generate;
use anonet::sim::{run, Execution, Model, Network, RunOptions};
use anonet::staticfreq::{make_static_algorithm, Label, ReconstructedBase};
use anonet::{DirectedMultigraph, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every strongly connected digraph with at most 4 vertices up to
/// isomorphism, with and without self-loops, then `random` seeded graphs
/// with 2..=6 vertices.
pub fn static_family(random: usize) -> Vec<(String, DirectedMultigraph)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for (k, g) in generate::strongly_connected_up_to_iso(n).into_iter().enumerate() {
            out.push((format!("iso-{n}-{k}"), g.clone()));
            out.push((format!("iso-{n}-{k}-loops"), g.with_self_loops()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for s in 0..random {
        let n = rng.gen_range(2..=6);
        let loops = rng.gen_bool(0.5);
        let g = if s % 3 == 0 {
            generate::random_symmetric(n, s as u64, 0.4, loops)
        } else {
            generate::random_strongly_connected(n, s as u64, 0.3, loops)
        };
        out.push((format!("random-{s}-n{n}"), g.expect("generator succeeds")));
    }
    out
}

pub fn models_for(g: &DirectedMultigraph) -> Vec<(Model, DirectedMultigraph)> {
    let mut out = vec![(Model::OutdegreeAware, g.clone())];
    if g.is_bidirectional() {
        out.push((Model::Symmetric, g.clone()));
    }
    out.push((Model::OutputPortAware, g.clone().with_canonical_ports()));
    out
}

pub fn ints(xs: &[i64]) -> Vec<Value> {
    xs.iter().map(|&x| Value::int(x)).collect()
}

pub fn random_values(n: usize, seed: u64, alphabet: &[Value]) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect()
}

pub fn labels(values: &[Value], leaders: &[usize]) -> Vec<Label> {
    values.iter().enumerate().map(|(i, v)| Label::new(v.clone(), leaders.contains(&i))).collect()
}

/// Run the static algorithm for `n + D + extra` rounds and return the
/// outputs; `Err` describes the first round `t >= n + D` where some output
/// differs from `expected`.
pub fn check_static(
    g: &DirectedMultigraph,
    model: Model,
    f: &TargetFunction,
    help: Help,
    inputs: &[Label],
    expected: &Output,
    extra: usize,
) -> Result<(), String> {
    let n = g.vertex_count();
    let d = g.diameter().ok_or("not strongly connected")?;
    let alg = make_static_algorithm(model, f.clone(), help, None).map_err(|e| e.to_string())?;
    let trace = run(&alg, model, &Network::fixed(g.clone()), inputs, RunOptions::default(), n + d + extra)
        .map_err(|e| e.to_string())?;
    for t in n + d..=trace.rounds() {
        for (i, o) in trace.outputs[t].iter().enumerate() {
            if o.as_ref() != Some(expected) {
                return Err(format!("{model} {f}: round {t} agent {i} output {o:?}, expected {expected}"));
            }
        }
    }
    Ok(())
}

/// Fibre sizes of the oracle minimum base that separates by input label
/// and, in the outdegree model, by outdegree.
pub fn oracle_fibres(g: &DirectedMultigraph, inputs: &[Label], with_outdegree: bool) -> (Vec<usize>, Vec<Label>) {
    let keys: Vec<(Label, usize)> = inputs
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), if with_outdegree { g.outdegree(i) } else { 0 }))
        .collect();
    let f = minimum_base_with(g, &keys).expect("strongly connected");
    let mut reps = vec![Label::new(Value::int(0), false); f.base().vertex_count()];
    for (v, &c) in f.vertex_map().iter().enumerate() {
        reps[c] = inputs[v].clone();
    }
    (f.fibre_sizes(), reps)
}

/// One randomized lifting-lemma case: a random strongly connected graph
/// (bidirectional for the symmetric model, port-colored for the port
/// model), its minimum base respecting random inputs, and a corpus
/// algorithm. Returns a description, whether every lifted base state
/// equals the direct one over `rounds` rounds, and whether the base is
/// strictly smaller than the graph.
pub fn lifting_case(seed: u64, rounds: usize) -> (String, bool, bool) {
    use anonet::fibration::Fibration;
    use anonet::scenario::lifting_replay;
    use anonet::sim::corpus::{BroadcastAveraging, Flooding, MessageCounting, MinPropagation, OutdegreeDigest, PortDependent, ViewDigest};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = Model::ALL[rng.gen_range(0..4)];
    let n = rng.gen_range(1..=6);
    let loops = rng.gen_bool(0.5);
    let alphabet = ints(&[0, 1, 2]);
    let lifted = if model == Model::Symmetric || rng.gen_bool(0.3) { None } else { random_lift(seed, 6) };
    let (g, values) = match lifted {
        Some(gv) => gv,
        None => {
            let g = if model == Model::Symmetric {
                generate::random_symmetric(n, seed, 0.4, loops)
            } else {
                generate::random_strongly_connected(n, seed, 0.3, loops)
            }
            .expect("generator succeeds");
            (g, random_values(n, seed ^ 0xa5, &alphabet))
        }
    };
    let n = g.vertex_count();
    let g = if model == Model::OutputPortAware { g.with_canonical_ports() } else { g.without_colors() };
    // agents that know their outdegree tell fibres apart by it
    let keys: Vec<(Value, usize)> = (0..n)
        .map(|i| (values[i].clone(), if model.knows_outdegree() { g.outdegree(i) } else { 0 }))
        .collect();
    let fib: Fibration = minimum_base_with(&g, &keys).expect("strongly connected");
    let base_values: Vec<Value> = (0..fib.base().vertex_count()).map(|c| values[fib.fibres()[c][0]].clone()).collect();
    let nums: Vec<anonet::Rational> = base_values.iter().map(|v| v.as_number().cloned().unwrap()).collect();
    let pick = rng.gen_range(0..8);
    let replay = |name: &str, r: Result<bool, anonet::sim::SimError>| (name.to_string(), r.expect("runs"));
    let (name, ok) = match pick {
        0 => replay("flooding", lifting_replay(&Flooding, model, &fib, &base_values, rounds)),
        1 => replay("min", lifting_replay(&MinPropagation, model, &fib, &base_values, rounds)),
        2 => replay("counting", lifting_replay(&MessageCounting, model, &fib, &base_values, rounds)),
        3 => replay("averaging", lifting_replay(&BroadcastAveraging, model, &fib, &nums, rounds)),
        4 => replay("view-digest", lifting_replay(&ViewDigest, model, &fib, &base_values, rounds)),
        5 if model.knows_outdegree() => {
            replay("outdegree-digest", lifting_replay(&OutdegreeDigest, model, &fib, &base_values, rounds))
        }
        6 if model == Model::OutputPortAware => {
            replay("port-dependent", lifting_replay(&PortDependent, model, &fib, &base_values, rounds))
        }
        _ => {
            let f = if model == Model::SimpleBroadcast { TargetFunction::Max } else { TargetFunction::Average };
            let alg = make_static_algorithm(model, f, Help::None, None).expect("compatible");
            let base_labels = labels(&base_values, &[]);
            replay("static-frequency", lifting_replay(&alg, model, &fib, &base_labels, rounds))
        }
    };
    let proper = fib.base().vertex_count() < n;
    (format!("seed {seed}: {name} in {} on n={n} (base {})", model.short_name(), fib.base().vertex_count()), ok, proper)
}

pub fn targets() -> Vec<TargetFunction> {
    ["max", "average", "frequency", "threshold:omega=1,r=1/3"].iter().map(|s| s.parse().unwrap()).collect()
}

pub fn tagged(g: DirectedMultigraph, tags: Vec<String>) -> DirectedMultigraph {
    g.with_valuation(tags.into_iter().map(Value::token).collect()).unwrap()
}

pub fn reconstructed_as_graph(b: &ReconstructedBase) -> DirectedMultigraph {
    let tags = (0..b.labels.len())
        .map(|c| format!("{:?}/{}", b.labels[c], b.outdegrees.as_ref().map_or(0, |o| o[c])))
        .collect();
    tagged(b.graph.clone().without_colors(), tags)
}

pub fn oracle_as_graph(g: &DirectedMultigraph, inputs: &[Label], with_outdegree: bool) -> DirectedMultigraph {
    let keys: Vec<(Label, usize)> =
        (0..g.vertex_count()).map(|i| (inputs[i].clone(), if with_outdegree { g.outdegree(i) } else { 0 })).collect();
    let f = minimum_base_with(&g.clone().without_colors(), &keys).unwrap();
    let mut tags = vec![String::new(); f.base().vertex_count()];
    for (v, &c) in f.vertex_map().iter().enumerate() {
        tags[c] = format!("{:?}/{}", keys[v].0, keys[v].1);
    }
    tagged(f.base().clone(), tags)
}

/// Run `rounds` rounds and return the base reconstructed by agent `i`.
pub fn base_after(g: &DirectedMultigraph, model: Model, inputs: &[Label], rounds: usize, i: usize) -> Option<ReconstructedBase> {
    let alg = make_static_algorithm(model, TargetFunction::Max, Help::None, None).unwrap();
    let net = Network::fixed(g.clone());
    let mut exec = Execution::new(&alg, model, &net, inputs, RunOptions::default()).unwrap();
    for _ in 0..rounds {
        exec.step();
    }
    alg.base_of(&exec.states()[i])
}

/// A strongly connected graph with at most `max_n` vertices that fibres
/// over a random base with 1..=3 vertices: every base edge `a -> b` gets,
/// for each vertex of the fibre of `b`, one in-edge from a vertex of the
/// fibre of `a`. Inputs are constant on fibres.
pub fn random_lift(seed: u64, max_n: usize) -> Option<(DirectedMultigraph, Vec<Value>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11f7);
    for _ in 0..50 {
        let m = rng.gen_range(1..=3);
        let base = generate::random_strongly_connected(m, rng.gen(), 0.5, rng.gen_bool(0.5)).ok()?;
        // equal fibres wired by permutations give a covering, which keeps outdegrees
        let covering = rng.gen_bool(0.5);
        let s0 = rng.gen_range(2..=3);
        let sizes: Vec<usize> = (0..m).map(|_| if covering { s0 } else { rng.gen_range(1..=3) }).collect();
        if sizes.iter().sum::<usize>() > max_n {
            continue;
        }
        let mut fibre = Vec::new();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (c, &s) in sizes.iter().enumerate() {
            for _ in 0..s {
                members[c].push(fibre.len());
                fibre.push(c);
            }
        }
        let mut pairs = Vec::new();
        for e in base.edges() {
            let mut sources = members[e.source].clone();
            sources.shuffle(&mut rng);
            for (k, &v) in members[e.target].iter().enumerate() {
                let u = if covering { sources[k] } else { sources[rng.gen_range(0..sources.len())] };
                pairs.push((u, v));
            }
        }
        let g = DirectedMultigraph::from_pairs(fibre.len(), &pairs).ok()?;
        if g.is_strongly_connected() {
            let base_values: Vec<Value> = (0..m).map(|_| Value::int(rng.gen_range(0..2))).collect();
            return Some((g, fibre.iter().map(|&c| base_values[c].clone()).collect()));
        }
    }
    None
}
