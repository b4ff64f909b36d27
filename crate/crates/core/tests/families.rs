use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raysearch::evaluator::{cr_step, worst_case_cr};
use raysearch::strategies::*;
use raysearch::{CostModel, SearchProblem, StepOracle};

fn ratio_at(h: &StrategyHandle<f64>, cost: &CostModel<f64>, j: usize) -> f64 {
    let seq = h.materialize(j).unwrap();
    cr_step(&seq, j, cost).unwrap()
}

fn rho_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn small_turn_cost_ratio_is_nine_at_every_revisit() {
    let lambda = 1.5;
    for rho in rho_samples(0.0, 1.0, 21) {
        let t = 2.0 * lambda * rho;
        let h = lemma1(lambda, t).unwrap();
        let cost = CostModel::turn(t).unwrap();
        let seq = h.materialize(50).unwrap();
        for j in 2..=50 {
            let r = cr_step(&seq, j, &cost).unwrap();
            assert_relative_eq!(r, 9.0, max_relative = 1e-9);
        }
    }
}

#[test]
fn large_turn_cost_ratio_matches_claim_at_every_revisit() {
    let lambda = 0.7;
    for rho in rho_samples(1.0, 20.0, 39) {
        let t = 2.0 * lambda * rho;
        let h = theorem4(lambda, t).unwrap();
        let claim = h.claimed_cost().unwrap().ratio().unwrap();
        assert_relative_eq!(
            claim,
            2.0 * (rho + 2.0) * (rho + 0.5) / rho,
            max_relative = 1e-15
        );
        let cost = CostModel::turn(t).unwrap();
        let seq = h.materialize(50).unwrap();
        for j in 2..=50 {
            assert_relative_eq!(cr_step(&seq, j, &cost).unwrap(), claim, max_relative = 1e-9);
        }
    }
}

#[test]
fn line_branches_meet_at_unit_ratio() {
    let a = lemma1(1.0, 2.0).unwrap();
    let b = theorem4(1.0, 2.0).unwrap();
    for i in 1..=50 {
        assert_relative_eq!(a.x(i).unwrap(), b.x(i).unwrap(), max_relative = 1e-12);
    }
    assert_eq!(large_turn_ratio(1.0), 9.0);
    assert_eq!(optimal_line_ratio(1.0), 9.0);
    let left: f64 = optimal_line_ratio(1.0 - 1e-9);
    let right = optimal_line_ratio(1.0 + 1e-9);
    assert!((left - right).abs() < 1e-7);
}

#[test]
fn line_families_are_increasing() {
    for &(lambda, t) in &[(1.0, 0.0), (1.0, 0.5), (1.0, 2.0), (2.0, 4.0)] {
        let h = lemma1(lambda, t).unwrap();
        for i in 1..200 {
            assert!(h.x(i + 1).unwrap() > h.x(i).unwrap());
        }
        assert!(h.x(1).unwrap() >= lambda);
    }
    for &(lambda, t) in &[(1.0, 2.0), (1.0, 5.0), (0.5, 40.0)] {
        let h = theorem4(lambda, t).unwrap();
        for i in 1..200 {
            assert!(h.x(i + 1).unwrap() > h.x(i).unwrap());
        }
        assert!(h.x(1).unwrap() >= lambda);
    }
}

#[test]
fn mray_first_regime_identity() {
    for m in 2..=6 {
        let threshold: f64 = mray_threshold(m);
        let expected: f64 = mray_classic_ratio(m);
        let mf = m as f64;
        assert_relative_eq!(
            expected,
            1.0 + 2.0 * mf.powf(mf) / (mf - 1.0).powf(mf - 1.0),
            max_relative = 1e-12
        );
        for rho in rho_samples(0.0, threshold, 6) {
            let lambda = 1.0;
            let t = 2.0 * lambda * rho;
            let h = theorem6_branch(m, lambda, t, Branch::First).unwrap();
            let cost = CostModel::turn(t).unwrap();
            let seq = h.materialize(m + 49).unwrap();
            for n in 1..=50 {
                let j = n + m - 1;
                assert_relative_eq!(
                    cr_step(&seq, j, &cost).unwrap(),
                    expected,
                    max_relative = 1e-9
                );
            }
        }
    }
}

#[test]
fn mray_second_regime_identity() {
    for m in 2..=6 {
        let threshold: f64 = mray_threshold(m);
        for rho in [threshold, threshold * 1.5, 2.0 * threshold + 1.0, 10.0] {
            let lambda = 2.0;
            let t = 2.0 * lambda * rho;
            let h = theorem6_branch(m, lambda, t, Branch::Second).unwrap();
            let expected = h.claimed_cost().unwrap().ratio().unwrap();
            assert_relative_eq!(
                expected,
                mray_large_turn_ratio(m, rho),
                max_relative = 1e-15
            );
            let cost = CostModel::turn(t).unwrap();
            let seq = h.materialize(m + 49).unwrap();
            for n in 1..=50 {
                let j = n + m - 1;
                assert_relative_eq!(
                    cr_step(&seq, j, &cost).unwrap(),
                    expected,
                    max_relative = 1e-9
                );
            }
        }
    }
}

#[test]
fn mray_branches_agree_at_threshold() {
    for m in 2..=6 {
        let threshold: f64 = mray_threshold(m);
        let t = 2.0 * threshold;
        let a = theorem6_branch(m, 1.0, t, Branch::First).unwrap();
        let b = theorem6_branch(m, 1.0, t, Branch::Second).unwrap();
        for i in 1..=50 {
            assert_relative_eq!(a.x(i).unwrap(), b.x(i).unwrap(), max_relative = 1e-9);
        }
        assert_relative_eq!(
            mray_classic_ratio::<f64>(m),
            mray_large_turn_ratio(m, threshold),
            max_relative = 1e-9
        );
    }
}

#[test]
fn mray_two_rays_is_the_line_strategy() {
    for t in [2.0, 3.0, 10.0] {
        let a = theorem6(2, 1.0, t).unwrap();
        let b = theorem4(1.0, t).unwrap();
        for i in 1..=50 {
            assert_eq!(a.x(i), b.x(i));
        }
        assert_relative_eq!(
            a.claimed_cost().unwrap().ratio().unwrap(),
            b.claimed_cost().unwrap().ratio().unwrap(),
            max_relative = 1e-15
        );
    }
    assert_eq!(mray_threshold::<f64>(2), 1.0);
    assert_eq!(mray_classic_ratio::<f64>(2), 9.0);
}

#[test]
fn mray_families_are_increasing_and_cyclic() {
    for m in 2..=6 {
        for t in [0.0, 0.3, 5.0] {
            let h = theorem6(m, 1.0, t).unwrap();
            for i in 1..200 {
                assert!(h.x(i + 1).unwrap() > h.x(i).unwrap(), "m={m} t={t} i={i}");
                assert_eq!(h.step(i).unwrap().ray, (i - 1) % m);
            }
        }
    }
}

#[test]
fn general_costs_reduce_to_turn_costs() {
    for t in [0.0, 0.5, 2.0, 3.0, 12.0] {
        let cost = CostModel::turn(t).unwrap();
        let p = SearchProblem::new(2, 1.0, cost).unwrap();
        let general = theorem5(&p).unwrap();
        let special = if t <= 2.0 {
            lemma1(1.0, t).unwrap()
        } else {
            theorem4(1.0, t).unwrap()
        };
        for i in 1..=20 {
            assert_relative_eq!(
                general.x(i).unwrap(),
                special.x(i).unwrap(),
                max_relative = 1e-9
            );
        }
        assert_relative_eq!(
            general.claimed_cost().unwrap().ratio().unwrap(),
            special.claimed_cost().unwrap().ratio().unwrap(),
            max_relative = 1e-9
        );
    }
}

#[test]
fn general_costs_first_regime_ratio_is_evaluated() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let a1: f64 = rng.gen_range(0.1..3.0);
        let a2: f64 = rng.gen_range(0.1..3.0);
        let cost = CostModel::new(a1, 0.0, a2, 0.0).unwrap();
        let p = SearchProblem::new(2, 1.0, cost).unwrap();
        let h = theorem5(&p).unwrap();
        let r = worst_case_cr(&h, &cost, 60, 1e-9).unwrap();
        assert!((r.supremum - (5.0 * a1 + 4.0 * a2)).abs() < 1e-6);
    }
}

#[test]
fn general_costs_ratio_is_constant_across_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let cost = CostModel::new(
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.0..3.0),
        )
        .unwrap();
        let p = SearchProblem::new(2, rng.gen_range(0.5..2.0), cost).unwrap();
        let h = theorem5(&p).unwrap();
        let claim = h.claimed_cost().unwrap().ratio().unwrap();
        for j in 2..=40 {
            assert_relative_eq!(ratio_at(&h, &cost, j), claim, max_relative = 1e-9);
        }
    }
}

#[test]
fn single_precision_instantiation() {
    let h = lemma1(1.0f32, 1.0).unwrap();
    let cost = CostModel::turn(1.0f32).unwrap();
    let r = worst_case_cr(&h, &cost, 30, 1e-4).unwrap();
    assert!((r.supremum - 9.0).abs() < 1e-4);
    let h = theorem6(3, 1.0f32, 0.0).unwrap();
    assert!((h.claimed_cost().unwrap().ratio().unwrap() - 14.5).abs() < 1e-5);
}
