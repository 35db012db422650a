use super::*;
use crate::objective::Objective;
use crate::suite::{make_suite, BaseFunction, ObjectiveFunction};
use crate::transforms::{wrap, Transformation};

fn sphere(dim: usize) -> ObjectiveFunction {
    ObjectiveFunction::plain(BaseFunction::Sphere, dim)
}

/// Runs `id` for `budget` evaluations and returns the final state plus the
/// ordered list of evaluated points.
fn run(id: AlgorithmId, f: &dyn Objective, budget: u64, seed: u64) -> (Vec<Vec<f64>>, f64, Vec<f64>) {
    let mut ev = Evaluator::new(f, budget).with_trace();
    let mut st = OptimizerState::init(id, Bounds::STANDARD, f.dim(), DEFAULT_AGENTS, seed, &mut ev).unwrap();
    let mut bests = vec![st.best().1.value()];
    while ev.remaining() > 0 {
        let rem = ev.remaining();
        let used = st.step(&mut ev, rem).unwrap();
        assert!(used <= (DEFAULT_AGENTS as u64).min(rem));
        bests.push(st.best().1.value());
    }
    let best = st.best().1.value();
    (ev.into_trace().unwrap(), best, bests)
}

#[test]
fn init_samples_in_bounds_and_uses_agents_evaluations() {
    let f = sphere(2);
    let mut ev = Evaluator::new(&f, 1000);
    let st = OptimizerState::init(AlgorithmId::RandomSearch, Bounds::STANDARD, 2, 20, 5, &mut ev).unwrap();
    assert_eq!(ev.used(), 20);
    assert_eq!(st.population().agents(), 20);
    assert!(st.population().positions.iter().all(|x| Bounds::STANDARD.contains(x)));
    let min = st.population().fitness.iter().map(|v| v.value()).fold(f64::INFINITY, f64::min);
    assert_eq!(st.best().1.value(), min);
    assert_eq!(st.best(), st.best());

    let mut ev2 = Evaluator::new(&f, 1000);
    let st2 = OptimizerState::init(AlgorithmId::RandomSearch, Bounds::STANDARD, 2, 20, 5, &mut ev2).unwrap();
    assert_eq!(st.population(), st2.population());
}

#[test]
fn de_variants_need_four_agents() {
    let f = sphere(2);
    for id in [AlgorithmId::DeRand1Bin, AlgorithmId::Shade] {
        let mut ev = Evaluator::new(&f, 100);
        let err = OptimizerState::init(id, Bounds::STANDARD, 2, 3, 1, &mut ev).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)), "{err}");
        assert_eq!(ev.used(), 0);
    }
}

#[test]
fn step_refuses_empty_budget() {
    let f = sphere(2);
    let mut ev = Evaluator::new(&f, 100);
    let mut st = OptimizerState::init(AlgorithmId::Shade, Bounds::STANDARD, 2, 20, 1, &mut ev).unwrap();
    assert!(matches!(st.step(&mut ev, 0), Err(Error::BudgetExhausted)));
}

#[test]
fn every_algorithm_respects_budget_and_monotone_best() {
    let suite = make_suite(3, 5).unwrap();
    for id in AlgorithmId::ALL {
        for f in suite.functions.iter().step_by(7) {
            let (trace, _, bests) = run(id, f, 1013, 9);
            assert_eq!(trace.len(), 1013, "{id}");
            assert!(bests.windows(2).all(|w| w[1] <= w[0]), "{id} best increased");
            assert!(trace.iter().all(|x| Bounds::STANDARD.contains(x)), "{id} left the box");
        }
    }
}

#[test]
fn best_is_minimum_over_all_evaluated_points() {
    let f = make_suite(4, 6).unwrap().functions[12].clone();
    for id in AlgorithmId::ALL {
        let (trace, best, _) = run(id, &f, 600, 2);
        let min = trace.iter().map(|x| f.value(x)).fold(f64::INFINITY, f64::min);
        assert_eq!(best, min, "{id}");
    }
}

#[test]
fn population_fitness_stays_coherent() {
    let f = make_suite(4, 6).unwrap().functions[4].clone();
    for id in AlgorithmId::ALL {
        let mut ev = Evaluator::new(&f, 2000);
        let mut st = OptimizerState::init(id, Bounds::STANDARD, 6, 20, 3, &mut ev).unwrap();
        while ev.remaining() > 0 {
            let rem = ev.remaining();
            st.step(&mut ev, rem).unwrap();
            for (x, &v) in st.population().positions.iter().zip(&st.population().fitness) {
                assert_eq!(f.value(x), v.value(), "{id}");
            }
        }
    }
}

#[test]
fn runs_are_deterministic_in_seed() {
    let f = make_suite(1, 4).unwrap().functions[20].clone();
    for id in AlgorithmId::ALL {
        let a = run(id, &f, 800, 17);
        let b = run(id, &f, 800, 17);
        assert_eq!(a.0, b.0, "{id}");
        let c = run(id, &f, 800, 18);
        assert_ne!(a.0, c.0, "{id}");
    }
}

/// Adding a constant to the objective must not change any evaluated point.
/// The suite functions carry biases of 100 and more, so `f + 6` regularly
/// crosses powers of two where a plain double sum would round.
#[test]
fn vertical_shift_leaves_point_sequence_unchanged() {
    let suite = make_suite(1, 4).unwrap();
    for f in suite.functions.iter().take(6) {
        for id in AlgorithmId::ALL {
            let shifted = wrap(Transformation::VShift { c: 6.0 }, f).unwrap();
            let a = run(id, f, 3000, 21);
            let b = run(id, &shifted, 3000, 21);
            assert_eq!(a.0, b.0, "{id} on f{}", f.id);
        }
    }
}

#[test]
fn truncated_generation_evaluates_only_remaining() {
    let f = sphere(3);
    for id in AlgorithmId::ALL {
        let mut ev = Evaluator::new(&f, 27);
        let mut st = OptimizerState::init(id, Bounds::STANDARD, 3, 20, 1, &mut ev).unwrap();
        assert_eq!(st.step(&mut ev, 7).unwrap(), 7, "{id}");
        assert_eq!(ev.used(), 27);
    }
}

#[test]
fn shade_memory_and_archive_stay_in_range() {
    let f = make_suite(2, 10).unwrap().functions[5].clone();
    let mut ev = Evaluator::new(&f, 6000);
    let mut st = OptimizerState::init(AlgorithmId::Shade, Bounds::STANDARD, 10, 20, 8, &mut ev).unwrap();
    let mut changed = false;
    while ev.remaining() > 0 {
        let rem = ev.remaining();
        st.step(&mut ev, rem).unwrap();
        let shade = st.algorithm().as_any().downcast_ref::<Shade>().unwrap();
        assert!(shade.memory_f().iter().all(|&v| v > 0.0 && v <= 1.0));
        assert!(shade.memory_cr().iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!(shade.archive().len() <= 20);
        assert_eq!(shade.archive_capacity(), 20);
        changed |= shade.memory_f().iter().any(|&v| v != 0.5);
    }
    assert!(changed, "success history never updated");
}

#[test]
fn overrides_are_applied_and_validated() {
    let v: serde_json::Value = serde_json::json!({"F": 0.7, "CR": 0.3});
    assert!(AlgorithmId::DeRand1Bin.build(&v).is_ok());
    assert!(AlgorithmId::DeRand1Bin.build(&serde_json::json!({"F": -1.0})).is_err());
    assert!(AlgorithmId::DeRand1Bin.build(&serde_json::json!({"bogus": 1})).is_err());
    assert!(AlgorithmId::Shade.build(&serde_json::json!({"memory_size": 5})).is_ok());
    assert!(AlgorithmId::RandomSearch.build(&serde_json::json!({"x": 1})).is_err());
    assert!(AlgorithmId::Pso2011.build(&serde_json::json!({})).is_ok());
}

/// Straightforward DE/rand/1/bin written independently of the crate's
/// optimizer plumbing: one flat loop, its own random stream.
fn reference_de_sphere(dim: usize, agents: usize, budget: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let mut pop: Vec<Vec<f64>> = (0..agents).map(|_| (0..dim).map(|_| rng.random_range(-100.0..100.0)).collect()).collect();
    let mut fit: Vec<f64> = pop.iter().map(|x| f(x)).collect();
    let mut used = agents;
    while used < budget {
        let mut next = pop.clone();
        let mut next_fit = fit.clone();
        for i in 0..agents {
            if used >= budget {
                break;
            }
            let (mut a, mut b, mut c);
            loop {
                a = rng.random_range(0..agents);
                b = rng.random_range(0..agents);
                c = rng.random_range(0..agents);
                if a != i && b != i && c != i && a != b && b != c && a != c {
                    break;
                }
            }
            let jr = rng.random_range(0..dim);
            let trial: Vec<f64> = (0..dim)
                .map(|j| {
                    let v = if rng.random::<f64>() < 0.9 || j == jr { pop[a][j] + 0.5 * (pop[b][j] - pop[c][j]) } else { pop[i][j] };
                    v.clamp(-100.0, 100.0)
                })
                .collect();
            let ft = f(&trial);
            used += 1;
            if ft <= fit[i] {
                next[i] = trial;
                next_fit[i] = ft;
            }
        }
        pop = next;
        fit = next_fit;
    }
    fit.into_iter().fold(f64::INFINITY, f64::min)
}

#[test]
fn de_reaches_sphere_optimum_like_reference() {
    // the reference implementation sets the bar
    for seed in 0..3 {
        let reference = reference_de_sphere(5, 20, 10_000, seed);
        assert!(reference < 1e-3, "reference DE only reached {reference}");
    }
    let f = sphere(5);
    for seed in 0..3 {
        let (_, best, _) = run(AlgorithmId::DeRand1Bin, &f, 10_000, seed);
        assert!(best < 1e-3, "seed {seed}: {best}");
    }
}

#[test]
fn shade_and_pso_make_progress_on_sphere() {
    let f = sphere(10);
    for id in [AlgorithmId::Shade, AlgorithmId::Pso2011] {
        let (_, best, _) = run(id, &f, 20_000, 1);
        assert!(best < 1e-2, "{id}: {best}");
    }
    let (_, rs, _) = run(AlgorithmId::RandomSearch, &f, 20_000, 1);
    let (_, sh, _) = run(AlgorithmId::Shade, &f, 20_000, 1);
    assert!(sh < rs);
}
