//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use anonet::fibration::{find_isomorphism, minimum_base_with};
use anonet::functions::{nearest_in_qn, q_n, Help, TargetFunction};
use anonet::graph::generate;
use anonet::linalg::{balance_matrix, dobrushin, gcd_all, is_alpha_safe, kernel_generator, nullity, spread, RatMatrix};
use anonet::pushsum::{convergence_bound, run_frequency_exact, run_scalar_exact};
use anonet::scenario::ring_witness;
use anonet::sim::{Execution, Model, Network, RunOptions};
use anonet::staticfreq::{make_static_algorithm, Label, Scale};
use anonet::{DirectedMultigraph, Rational, Value};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const PUSHSUM_PAIRS: [(usize, usize); 5] = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)];
const SCHEDULES: u64 = 20;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family() -> Vec<(String, DirectedMultigraph)> {
    static_family(100)
}

fn static_end_to_end() -> Outcome {
    let alphabet = ints(&[1, 2, 3]);
    let fs: Vec<TargetFunction> =
        ["max", "average", "frequency", "threshold:omega=1,r=1/3"].iter().map(|s| s.parse().unwrap()).collect();
    let mut runs = 0;
    for (name, g) in family() {
        let values = random_values(g.vertex_count(), name.len() as u64 * 31 + 1, &alphabet);
        let inputs = labels(&values, &[]);
        for (model, g) in models_for(&g) {
            for f in &fs {
                let expected = f.evaluate(&values).map_err(|e| e.to_string())?;
                check_static(&g, model, f, Help::None, &inputs, &expected, 2).map_err(|e| format!("{name}: {e}"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (graph, model, function) runs exact from round n + D on"))
}

fn kernel_rank_one() -> Outcome {
    let alphabet = ints(&[1, 2]);
    let mut bases = 0;
    for (name, g) in family() {
        let n = g.vertex_count();
        let inputs = labels(&random_values(n, name.len() as u64 * 17 + 3, &alphabet), &[]);
        let b = base_after(&g, Model::OutdegreeAware, &inputs, n + g.diameter().unwrap(), 0)
            .ok_or_else(|| format!("{name}: no base"))?;
        let m = balance_matrix(&b.graph, b.outdegrees.as_deref().unwrap()).map_err(|e| e.to_string())?;
        ensure(nullity(&m) == 1, || format!("{name}: nullity {}", nullity(&m)))?;
        let z = kernel_generator(&m).map_err(|e| format!("{name}: {e}"))?;
        ensure(z.iter().all(|x| x > &BigInt::from(0)), || format!("{name}: z = {z:?}"))?;
        ensure(gcd_all(z.iter()) == BigInt::from(1), || format!("{name}: z not coprime"))?;
        let perm = find_isomorphism(&reconstructed_as_graph(&b), &oracle_as_graph(&g, &inputs, true))
            .ok_or_else(|| format!("{name}: base differs from the oracle"))?;
        let keys: Vec<(Label, usize)> = (0..n).map(|i| (inputs[i].clone(), g.outdegree(i))).collect();
        let sizes = minimum_base_with(&g.clone().without_colors(), &keys).unwrap().fibre_sizes();
        let k = BigInt::from(sizes[perm[0]]) / &z[0];
        ensure(k >= BigInt::from(1), || format!("{name}: k = {k}"))?;
        for c in 0..z.len() {
            ensure(BigInt::from(sizes[perm[c]]) == &k * &z[c], || format!("{name}: class {c} size != k z"))?;
        }
        bases += 1;
    }
    Ok(format!("{bases} bases with nullity 1, positive coprime z, fibres = k z"))
}

/// Cardinalities solved by agent 0 after `n + D` rounds, and the oracle
/// fibre sizes permuted into the reconstructed class order.
fn cardinalities(g: &DirectedMultigraph, model: Model, inputs: &[Label], help: Help) -> Result<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>), String> {
    let n = g.vertex_count();
    let alg = make_static_algorithm(model, TargetFunction::Multiset, help, None).map_err(|e| e.to_string())?;
    let net = Network::fixed(g.clone());
    let mut exec = Execution::new(&alg, model, &net, inputs, RunOptions::default()).map_err(|e| e.to_string())?;
    for _ in 0..n + g.diameter().unwrap() {
        exec.step();
    }
    let b = alg.base_of(&exec.states()[0]).ok_or("no base")?;
    let sol = alg.solve(&b).map_err(|e| e.to_string())?;
    let Scale::Known(card) = sol.scale.clone() else { return Err("scale unknown".into()) };
    let with_outdegree = model == Model::OutdegreeAware;
    let perm = find_isomorphism(&reconstructed_as_graph(&b), &oracle_as_graph(g, inputs, with_outdegree))
        .ok_or("base differs from the oracle")?;
    let keys: Vec<(Label, usize)> =
        (0..n).map(|i| (inputs[i].clone(), if with_outdegree { g.outdegree(i) } else { 0 })).collect();
    let sizes = minimum_base_with(&g.clone().without_colors(), &keys).unwrap().fibre_sizes();
    Ok((card, sol.z, (0..perm.len()).map(|c| BigInt::from(sizes[perm[c]])).collect()))
}

fn help_modes() -> Outcome {
    let alphabet = ints(&[1, 2, 3]);
    let (mut exact, mut leader) = (0, 0);
    for (name, g) in family() {
        let n = g.vertex_count();
        let values = random_values(n, name.len() as u64 * 13 + 5, &alphabet);
        let inputs = labels(&values, &[]);
        for (model, g) in models_for(&g) {
            for f in [TargetFunction::Sum, TargetFunction::Multiplicity(Value::int(2))] {
                let expected = f.evaluate(&values).map_err(|e| e.to_string())?;
                check_static(&g, model, &f, Help::ExactSize(n), &inputs, &expected, 2).map_err(|e| format!("{name}: {e}"))?;
                exact += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(name.len() as u64 + n as u64);
        let mut models = vec![Model::OutdegreeAware];
        if g.is_bidirectional() {
            models.push(Model::Symmetric);
        }
        for model in models {
            let one = vec![rng.gen_range(0..n)];
            // agent 0 reads the base; the leader may be anyone
            let (card, z, oracle) = cardinalities(&g, model, &labels(&values, &one), Help::Leaders(1)).map_err(|e| format!("{name}: {e}"))?;
            ensure(card == oracle, || format!("{name} {model}: one leader {card:?} vs oracle {oracle:?}"))?;
            ensure(card == z, || format!("{name} {model}: one leader gives k != 1"))?;
            leader += 1;
            if n >= 2 {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                let (card, _, oracle) = cardinalities(&g, model, &labels(&values, &[a, b]), Help::Leaders(2)).map_err(|e| format!("{name}: {e}"))?;
                ensure(card == oracle, || format!("{name} {model}: two leaders {card:?} vs oracle {oracle:?}"))?;
                leader += 1;
            }
        }
    }
    Ok(format!("{exact} exact-size runs, {leader} leader cardinality checks"))
}

fn lifting_lemma() -> Outcome {
    let mut proper = 0;
    for seed in 0..200 {
        let (what, ok, smaller) = lifting_case(seed, 10);
        ensure(ok, || format!("lifted trace differs: {what}"))?;
        proper += usize::from(smaller);
    }
    Ok(format!("200 tuples ({proper} with a proper quotient), 10 rounds each, exact state equality"))
}

fn schedule(n: usize, d: usize, seed: u64) -> Result<anonet::graph::DynamicGraph, String> {
    generate::random_dynamic_with_diameter(n, d, seed, 3).map_err(|e| e.to_string())
}

fn pushsum_convergence() -> Outcome {
    let eps = 1e-6;
    let mut worst = 0.0f64;
    for (n, d) in PUSHSUM_PAIRS {
        let bound = convergence_bound(n, d, eps);
        for seed in 0..SCHEDULES {
            let g = schedule(n, d, seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 101 + n as u64);
            let initial: Vec<(Rational, Rational)> =
                (0..n).map(|_| (Rational::from(rng.gen_range(0..10i64)), Rational::one())).collect();
            let r = run_scalar_exact(&g, &initial, None, d, eps, bound).map_err(|e| e.to_string())?;
            let tag = format!("n={n} D={d} seed={seed}");
            ensure(r.converged_by_bound(), || format!("{tag}: within eps at {:?}, bound {bound}", r.first_within_eps))?;
            ensure(r.mass_conserved, || format!("{tag}: mass not conserved"))?;
            ensure(r.envelopes_monotone, || format!("{tag}: envelopes not monotone"))?;
            worst = worst.max(r.first_within_eps.unwrap() as f64 / bound.max(1) as f64);
        }
    }
    Ok(format!("{} schedules within eps by the bound (latest at {:.3} of it)", PUSHSUM_PAIRS.len() as u64 * SCHEDULES, worst))
}

fn frequency_recovery() -> Outcome {
    let alphabet = ints(&[1, 2, 3]);
    for (n, d) in PUSHSUM_PAIRS {
        let bound = convergence_bound(n, d, 1.0 / (2 * n * n) as f64);
        for seed in 0..SCHEDULES {
            let g = schedule(n, d, seed)?;
            let inputs = labels(&random_values(n, seed + 7 * n as u64, &alphabet), &[]);
            let r = run_frequency_exact(&g, &inputs, Help::Bound(n), None, d, 3 * bound).map_err(|e| e.to_string())?;
            let tag = format!("n={n} D={d} seed={seed}");
            let first = r.first_exact.ok_or_else(|| format!("{tag}: never exact"))?;
            ensure(first <= bound, || format!("{tag}: exact from {first}, bound {bound}"))?;
            ensure(r.changes.iter().all(|&t| t <= first), || format!("{tag}: estimate changed after {first}"))?;
            ensure(r.mass_conserved, || format!("{tag}: mass not conserved"))?;
        }
    }
    Ok(format!("{} schedules exact by the bound, stable through 3x", PUSHSUM_PAIRS.len() as u64 * SCHEDULES))
}

fn leader_pushsum() -> Outcome {
    let alphabet = ints(&[1, 2]);
    let mut runs = 0;
    for leaders in [1usize, 2] {
        for (n, d) in PUSHSUM_PAIRS.into_iter().filter(|&(n, _)| n >= leaders) {
            let rounds = 3 * convergence_bound(n, d, 1.0 / (3 * leaders * n) as f64);
            for seed in 0..SCHEDULES {
                let g = schedule(n, d, seed)?;
                let chosen: Vec<usize> = (0..leaders).collect();
                let inputs = labels(&random_values(n, seed + 11, &alphabet), &chosen);
                let r = run_frequency_exact(&g, &inputs, Help::Leaders(leaders), None, d, rounds).map_err(|e| e.to_string())?;
                let tag = format!("l={leaders} n={n} D={d} seed={seed}");
                let first = r.first_exact.ok_or_else(|| format!("{tag}: multiplicities never settled"))?;
                ensure(r.changes.iter().all(|&t| t <= first), || format!("{tag}: estimate changed after {first}"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} leader runs settle on exact multiplicities and stay"))
}

fn qn_spacing() -> Outcome {
    for n in 1..=12usize {
        let q = q_n(n);
        let gap = Rational::frac(1, (n * n) as i64);
        for w in q.windows(2) {
            ensure(&w[1] - &w[0] >= gap, || format!("N={n}: {} and {} closer than 1/N^2", w[0], w[1]))?;
        }
        // anything strictly within half the spacing rounds back
        let r = Rational::frac(999, 2000 * (n * n) as i64);
        for x in &q {
            for probe in [x + &r, x - &r] {
                ensure(nearest_in_qn(&probe, n) == *x, || format!("N={n}: {probe} did not round to {x}"))?;
            }
        }
    }
    Ok("N = 1..12 exhaustive".into())
}

fn random_stochastic(rng: &mut ChaCha8Rng, n: usize, positive: bool) -> RatMatrix {
    let w: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(if positive { 1 } else { 0 }..6)).collect()).collect();
    RatMatrix::from_fn(n, n, |i, j| {
        let total: i64 = w[i].iter().sum();
        if total == 0 {
            Rational::from(i64::from(i == j))
        } else {
            Rational::frac(w[i][j], total)
        }
    })
}

fn dobrushin_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0b);
    for k in 0..500 {
        let n = rng.gen_range(2..=5);
        let p = random_stochastic(&mut rng, n, false);
        let v: Vec<Rational> = (0..n).map(|_| Rational::frac(rng.gen_range(-20..20), rng.gen_range(1..5))).collect();
        let d = dobrushin(&p).map_err(|e| e.to_string())?;
        ensure(spread(&p.mul_vec(&v).unwrap()) <= &d * &spread(&v), || format!("contraction fails on matrix {k}"))?;

        let q = random_stochastic(&mut rng, n, false);
        let pq = p.mul(&q).unwrap();
        ensure(dobrushin(&pq).unwrap() <= &d * &dobrushin(&q).unwrap(), || format!("submultiplicativity fails on pair {k}"))?;

        let s = random_stochastic(&mut rng, n, true);
        let alpha = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| s[(i, j)].clone()).min().unwrap();
        ensure(is_alpha_safe(&s, &alpha), || format!("alpha-safety predicate fails on matrix {k}"))?;
        ensure(dobrushin(&s).unwrap() <= Rational::one() - Rational::from(n) * alpha, || format!("1 - n alpha fails on {k}"))?;
    }
    Ok("500 matrices per property, exact".into())
}

fn broadcast_witness() -> Outcome {
    if ring_witness(Model::SimpleBroadcast, 15).map_err(|e| e.to_string())? {
        Ok("R^2 vs R^4, R^6 for 5 corpus algorithms, 15 rounds, traces equal".into())
    } else {
        Err("lifted traces differ".into())
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("static end-to-end", static_end_to_end),
        ("kernel rank one", kernel_rank_one),
        ("help modes", help_modes),
        ("lifting lemma", lifting_lemma),
        ("push-sum convergence", pushsum_convergence),
        ("exact frequency recovery", frequency_recovery),
        ("leader push-sum", leader_pushsum),
        ("Q_N spacing", qn_spacing),
        ("Dobrushin suite", dobrushin_suite),
        ("broadcast impossibility witness", broadcast_witness),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
