use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use uavris_core::channel::{phase_of_index, Beamforming};
use uavris_core::evaluation::{check_constraints, random_candidate, Candidate, Evaluator, PersonalBest};
use uavris_core::moo::RankedPopulation;
use uavris_core::operators::*;
use uavris_core::{rng, ObjectiveVector, Scenario};

fn ranked(s: &Scenario, seed: u64) -> RankedPopulation {
    let mut r = rng::stream(seed, &[]);
    let mut members: Vec<Candidate> = (0..s.algo.pop_size).map(|_| random_candidate(s, &mut r)).collect();
    Evaluator::new(s).evaluate_all(&mut members).unwrap();
    members.iter_mut().for_each(Candidate::init_swarm_state);
    RankedPopulation::rank_all(members)
}

#[test]
fn phase_levels_are_uniform() {
    let mut r = rng::stream(1, &[]);
    let p = random_phase_matrix(1, 100_000, 8, &mut r);
    let mut counts = [0usize; 8];
    for &i in p.as_slice() {
        counts[usize::from(i)] += 1;
    }
    for c in counts {
        assert!((c as f64 / 1e5 - 0.125).abs() < 0.01, "{counts:?}");
    }
}

#[test]
fn three_bit_phases_are_multiples_of_quarter_pi() {
    let mut r = rng::stream(2, &[]);
    let p = random_phase_matrix(4, 64, 8, &mut r);
    for &i in p.as_slice() {
        let theta = phase_of_index(i, 8);
        let k = theta / (std::f64::consts::PI / 4.0);
        assert!((k - k.round()).abs() < 1e-12 && (0.0..8.0).contains(&k));
    }
}

#[test]
fn donor_ties_split_evenly() {
    let mut r = rng::stream(3, &[]);
    let n = 10_000;
    let first = (0..n)
        .filter(|_| select_phase_donor(&[f64::INFINITY, 0.3, f64::INFINITY], &mut r) == 0)
        .count();
    assert!((first as f64 / n as f64 - 0.5).abs() < 0.03);
}

#[test]
fn pbest_rule() {
    let s = Scenario::toy();
    let mut c = random_candidate(&s, &mut rng::stream(4, &[]));
    c.evaluate(&s).unwrap();
    let o = c.obj();
    let with_pbest = |c: &Candidate, obj: [f64; 3]| {
        let mut c = c.clone();
        c.pbest = Some(Box::new(PersonalBest {
            beamforming: Beamforming::zeros(s.radio.n_bs, s.k()),
            objectives: ObjectiveVector(obj),
        }));
        c
    };
    let mut r = rng::stream(5, &[]);
    let worse = [o.0[0] + 1.0, o.0[1] + 1.0, o.0[2] + 1.0];
    let better = [o.0[0] - 1.0, o.0[1] - 1.0, o.0[2] - 1.0];
    let mixed = [o.0[0] - 1.0, o.0[1] + 1.0, o.0[2]];
    for _ in 0..100 {
        assert!(update_pbest(&mut with_pbest(&c, worse), &mut r));
        assert!(!update_pbest(&mut with_pbest(&c, better), &mut r));
    }
    let n = 10_000;
    let replaced = (0..n)
        .filter(|_| update_pbest(&mut with_pbest(&c, mixed), &mut r))
        .count();
    assert!((replaced as f64 / n as f64 - 0.5).abs() <= 0.02);
}

#[test]
fn scalar_swarm_step_matches_hand_evaluation() {
    let c = Complex64::new;
    let (w0, v0, pb, gb) = (c(1.0, 0.5), c(0.2, -0.1), c(2.0, 1.0), c(-1.0, 3.0));
    let (eps, c1, c2, r1, r2) = (0.4, 2.0, 1.5, 0.25, 0.6);
    let mut w = [w0];
    let mut v = [v0];
    swarm_step(&mut w, &mut v, &[pb], &[gb], eps, c1, c2, || (r1, r2));
    // v = 0.4(0.2−0.1j) + 0.5(1+0.5j) + 0.9(−2+2.5j) = −1.22 + 2.46j
    let v_want = c(0.08 + 0.5 - 1.8, -0.04 + 0.25 + 2.25);
    assert!((v[0] - v_want).norm() < 1e-12);
    assert!((w[0] - (w0 + v_want)).norm() < 1e-12);
}

#[test]
fn swarm_fixed_point_when_bests_equal_current() {
    let s = Scenario::toy();
    let mut pop = ranked(&s, 6);
    for m in &mut pop.members {
        m.velocity = Some(vec![Complex64::new(0.0, 0.0); m.beamforming().stacked().len()]);
        let me = m.beamforming().clone();
        m.pbest.as_mut().unwrap().beamforming = me;
    }
    // Leader differs from most members, so check only the all-equal member.
    let single = RankedPopulation::rank_all(vec![pop.members[0].clone()]);
    let cfg = OperatorConfig::from_scenario(&s);
    let out = beamforming_offspring(&s, &single, &cfg, Streams::new(1, 0)).unwrap();
    assert_eq!(out[0].beamforming(), single.members[0].beamforming());
}

#[test]
fn swarm_with_zero_coefficients_keeps_precoder() {
    let s = Scenario::toy();
    let pop = ranked(&s, 7);
    let mut cfg = OperatorConfig::from_scenario(&s);
    cfg.inertia_eps = 0.0;
    cfg.learn_c1 = 0.0;
    cfg.learn_c2 = 0.0;
    let out = beamforming_offspring(&s, &pop, &cfg, Streams::new(1, 0)).unwrap();
    for (child, parent) in out.iter().zip(&pop.members) {
        assert_eq!(child.beamforming(), parent.beamforming());
        assert!(child.velocity.as_ref().unwrap().iter().all(|v| v.norm() == 0.0));
    }
}

#[test]
fn no_op_variation_copies_positions() {
    let s = Scenario::toy();
    let pop = ranked(&s, 8);
    let mut cfg = OperatorConfig::from_scenario(&s);
    cfg.crossover_prob = 0.0;
    cfg.mutation_prob = 0.0;
    let out = vary_positions(&s, &pop, &cfg, Repair::Opposition, Streams::new(2, 0));
    assert_eq!(out.len(), pop.len());
    for c in &out {
        assert!(pop.members.iter().any(|p| p.positions() == c.positions()));
    }
}

#[test]
fn opposition_repair_reflects_forced_mutants() {
    let s = Scenario::toy();
    let pop = ranked(&s, 9);
    let mut cfg = OperatorConfig::from_scenario(&s);
    cfg.mutation_prob = 1.0;
    cfg.mut_eta = 0.0;
    let streams = Streams::new(3, 0);
    let refl = vary_positions(&s, &pop, &cfg, Repair::Opposition, streams);
    let clamp = vary_positions(&s, &pop, &cfg, Repair::Clamp, streams);
    let g = &s.geometry;
    let on_bound = |c: &Candidate| {
        c.positions()
            .iter()
            .flatten()
            .filter(|&&x| x == g.l_min || x == g.l_max)
            .count()
    };
    let reflected: usize = refl.iter().map(on_bound).sum();
    let clamped: usize = clamp.iter().map(on_bound).sum();
    assert!(clamped > reflected, "{clamped} vs {reflected}");
}

#[test]
fn normalize_example() {
    let mut w = vec![Complex64::new(20.0, 0.0)];
    normalize_power_with(&mut w, 100.0, 0.5);
    assert!((w[0].norm() - 6.666_666_666_666_667).abs() < 1e-12);
}

fn same_except(a: &Candidate, b: &Candidate, group: usize) -> bool {
    (group == 0 || a.positions() == b.positions())
        && (group == 1 || a.phases() == b.phases())
        && (group == 2 || a.beamforming() == b.beamforming())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cohorts_touch_one_group_and_stay_feasible(seed in any::<u64>()) {
        let s = Scenario::toy();
        let pop = ranked(&s, seed);
        let cfg = OperatorConfig::from_scenario(&s);
        let st = Streams::new(seed, 1);

        let s1 = vary_positions(&s, &pop, &cfg, Repair::Opposition, st);
        let s2a = random_phase_offspring(&pop.members, st);
        let s2b = phase_learning_offspring(&pop, st).unwrap();
        let s3 = beamforming_offspring(&s, &pop, &cfg, st).unwrap();
        let s3b = sbx_beamforming_offspring(&s, &pop, &cfg, st);
        for cohort in [&s1, &s2a, &s2b, &s3, &s3b] {
            prop_assert_eq!(cohort.len(), pop.len());
            for c in cohort.iter() {
                prop_assert!(check_constraints(&s, c).is_ok());
            }
        }
        for c in &s1 {
            prop_assert!(pop.members.iter().any(|p| same_except(p, c, 0)));
        }
        for (c, p) in s2a.iter().zip(&pop.members) {
            prop_assert!(same_except(p, c, 1));
        }
        for (c, p) in s2b.iter().zip(&pop.members) {
            prop_assert!(same_except(p, c, 1));
            prop_assert_eq!(c.phases(), s2b[0].phases());
        }
        for (c, p) in s3.iter().zip(&pop.members) {
            prop_assert!(same_except(p, c, 2));
        }
        for c in &s3b {
            prop_assert!(pop.members.iter().any(|p| same_except(p, c, 2)));
        }
        // Cohorts are a pure function of the stream key.
        prop_assert_eq!(s1, vary_positions(&s, &pop, &cfg, Repair::Opposition, st));
        prop_assert_eq!(s3, beamforming_offspring(&s, &pop, &cfg, st).unwrap());
    }

    #[test]
    fn obl_is_idempotent_inside_and_total_outside(x in -1e3f64..1e3, lo in -100f64..100.0, width in 0.0f64..300.0) {
        let hi = lo + width;
        let y = obl_value(x, lo, hi);
        prop_assert!(y >= lo && y <= hi);
        prop_assert_eq!(obl_value(y, lo, hi), y);
    }

    #[test]
    fn normalize_is_noop_when_feasible_and_strict_otherwise(
        parts in prop::collection::vec((-50f64..50.0, -50f64..50.0), 1..16),
        p_max in 0.1f64..1e3,
        seed in any::<u64>(),
    ) {
        let mut w: Vec<Complex64> = parts.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let before = w.clone();
        let power: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        let changed = normalize_power(&mut w, p_max, &mut rng::stream(seed, &[]));
        let after: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if power <= p_max {
            prop_assert!(!changed);
            prop_assert_eq!(w, before);
        } else {
            prop_assert!(changed);
            prop_assert!(after < p_max);
        }
    }

    #[test]
    fn sbx_children_stay_within_parent_hull_scaled(seed in any::<u64>()) {
        let mut r = rng::stream(seed, &[]);
        let mut a: Vec<f64> = (0..6).map(|_| r.gen_range(0.0..10.0)).collect();
        let mut b: Vec<f64> = (0..6).map(|_| r.gen_range(0.0..10.0)).collect();
        let sums: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        sbx_pair(&mut a, &mut b, 20.0, 1.0, &mut r);
        for i in 0..6 {
            prop_assert!((a[i] + b[i] - sums[i]).abs() < 1e-9);
        }
    }
}
