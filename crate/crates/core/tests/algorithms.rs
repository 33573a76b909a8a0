use rand::Rng;
use uavris_core::algorithms::{cdps_optimize, run, Algorithm, CdpsScore, Mechanisms};
use uavris_core::evaluation::{check_constraints, evaluate, random_candidate};
use uavris_core::moo::{dominates, non_dominated_sort};
use uavris_core::operators::Repair;
use uavris_core::{rng, Scenario};

fn short_toy(gens: usize) -> Scenario {
    let mut s = Scenario::toy();
    s.algo.max_gens = gens;
    s
}

#[test]
fn every_algorithm_is_deterministic_and_feasible() {
    let s = short_toy(6);
    for a in Algorithm::ALL {
        let x = run(a, &s, 42).unwrap();
        let y = run(a, &s, 42).unwrap();
        assert_eq!(x.final_front, y.final_front, "{a}");
        assert_eq!(x.history, y.history, "{a}");
        assert_eq!(x.eval_count, y.eval_count, "{a}");
        assert!(!x.final_front.is_empty());
        for c in &x.final_front {
            check_constraints(&s, c).unwrap();
            assert_eq!(evaluate(&s, c).unwrap(), c.obj());
        }
        let objs = x.front_objectives();
        for i in 0..objs.len() {
            for j in 0..objs.len() {
                assert!(
                    !dominates(&objs[i].0, &objs[j].0),
                    "{a}: front not mutually non-dominated"
                );
            }
        }
        if a.is_strategy() {
            assert!(x.history.is_empty());
        } else {
            assert_eq!(x.history.len(), s.algo.max_gens, "{a}");
        }
    }
}

#[test]
fn different_seeds_differ() {
    let s = short_toy(3);
    let a = run(Algorithm::Insga2Cdc, &s, 1).unwrap();
    let b = run(Algorithm::Insga2Cdc, &s, 2).unwrap();
    assert_ne!(a.final_front, b.final_front);
}

#[test]
fn zero_generations_returns_initial_front() {
    let s = short_toy(0);
    let r = run(Algorithm::Insga2Cdc, &s, 9).unwrap();
    assert_eq!(r.eval_count, s.algo.pop_size as u64);
    assert!(r.history.is_empty());
    let objs = r.front_objectives();
    assert_eq!(non_dominated_sort(&objs).len(), 1);
}

#[test]
fn offspring_accounting_per_variant() {
    let s = short_toy(5);
    let pop = s.algo.pop_size;
    for (a, cohorts) in [
        (Algorithm::Insga2Cdc, 4),
        (Algorithm::Insga2D, 4),
        (Algorithm::Insga2C1, 3),
        (Algorithm::Insga2C2, 3),
        (Algorithm::Nsga2, 1),
        (Algorithm::Nsga3, 1),
    ] {
        let r = run(a, &s, 3).unwrap();
        for g in &r.generations {
            assert_eq!(g.offspring, cohorts * pop, "{a}");
            assert_eq!(g.pool, (cohorts + 1) * pop, "{a}");
            assert_eq!(g.evaluations, (cohorts * pop) as u64, "{a}");
        }
        assert_eq!(r.eval_count, (pop + 5 * cohorts * pop) as u64);
    }
}

#[test]
fn variant_mechanisms() {
    assert_eq!(Mechanisms::C1.position_repair, Repair::Opposition);
    assert_eq!(Mechanisms::D.position_repair, Repair::Clamp);
    let learning = [Mechanisms::FULL, Mechanisms::C1, Mechanisms::D, Mechanisms::C2].map(|m| m.phase_learning);
    assert_eq!(learning, [true, false, true, false]);
    assert_eq!(Mechanisms::FULL.cohorts(), 4);
}

#[test]
fn cdps_reaches_single_gene_optimum() {
    let s = Scenario::toy();
    let start = random_candidate(&s, &mut rng::stream(10, &[]));
    let (best, evals) = cdps_optimize(&s, start.clone(), CdpsScore::SumRate, 50).unwrap();
    assert!(evals > 1);
    let f2 = best.obj().f2();
    assert!(f2 >= evaluate(&s, &start).unwrap().f2());
    let levels = s.radio.phase_levels() as u16;
    for m in 0..s.m() {
        for n in 0..s.radio.n_ris() {
            for l in 0..levels {
                let mut c = best.clone();
                c.phases_mut().set(m, n, l);
                assert!(evaluate(&s, &c).unwrap().f2() <= f2);
            }
        }
    }
    assert_eq!(best.positions(), start.positions());
    assert_eq!(best.beamforming(), start.beamforming());
}

#[test]
fn strategies_on_reference_scenario() {
    let s = Scenario::reference();
    for a in [Algorithm::Rd, Algorithm::Ud, Algorithm::Dft] {
        let r = run(a, &s, 5).unwrap();
        assert_eq!(r.final_front.len(), 1);
        assert_eq!(r.eval_count, 1);
        check_constraints(&s, &r.final_front[0]).unwrap();
    }
    let ud = run(Algorithm::Ud, &s, 5).unwrap();
    assert!(ud.final_front[0].positions().iter().all(|p| p[2] == 125.0));
}

#[test]
fn random_seeds_give_feasible_baseline_runs() {
    let s = short_toy(4);
    let mut r = rng::stream(0, &[]);
    for _ in 0..3 {
        let seed = r.gen();
        for a in [Algorithm::Mopso, Algorithm::MoeaD, Algorithm::Nsga3] {
            for c in &run(a, &s, seed).unwrap().final_front {
                check_constraints(&s, c).unwrap();
            }
        }
    }
}
