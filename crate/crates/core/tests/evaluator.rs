use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raysearch::evaluator::*;
use raysearch::strategies::{doubling, theorem4, theorem6};
use raysearch::{CostModel, Step, StepOracle, StepSequence, Target};

fn random_sequence(rng: &mut ChaCha8Rng, len: usize, rays: usize) -> StepSequence<f64> {
    let steps = (0..len)
        .map(|_| Step::new(10f64.powf(rng.gen_range(0.0..3.0)), rng.gen_range(0..rays)))
        .collect();
    StepSequence::new(steps, 1.0, rays).unwrap()
}

fn random_cost(rng: &mut ChaCha8Rng) -> CostModel<f64> {
    CostModel::new(
        rng.gen_range(0.1..2.0),
        rng.gen_range(0.0..2.0),
        rng.gen_range(0.1..2.0),
        rng.gen_range(0.0..2.0),
    )
    .unwrap()
}

#[test]
fn reference_examples() {
    let plain = CostModel::plain();
    let r = worst_case_cr(&doubling(1.0_f64).unwrap(), &plain, 60, 1e-9).unwrap();
    assert!((r.supremum - 9.0).abs() < 1e-9);
    assert!(r.converged);

    let h = theorem4(1.0_f64, 4.0).unwrap();
    let r = worst_case_cr(&h, &CostModel::turn(4.0).unwrap(), 60, 1e-9).unwrap();
    assert!((r.supremum - 10.0).abs() < 1e-9);

    let h = theorem6(3, 1.0_f64, 0.0).unwrap();
    let r = worst_case_cr(&h, &CostModel::turn(0.0).unwrap(), 80, 1e-9).unwrap();
    assert!((r.supremum - 14.5).abs() < 1e-9);
}

#[test]
fn cr_step_is_the_supremum_over_the_discovery_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let rays = 2 + rng.gen_range(0..2);
        let seq = random_sequence(&mut rng, 12, rays);
        let cost = random_cost(&mut rng);
        for j in 1..=seq.len() {
            if !is_feasible(&seq, j).unwrap() {
                continue;
            }
            let prev = seq.distance(prev_index(&seq, j).unwrap());
            let hi = seq.steps()[j - 1].distance;
            let travel: f64 = seq.steps()[..j - 1]
                .iter()
                .map(|s| cost.round_trip(s.distance))
                .sum();
            let grid_max = (0..1000)
                .map(|k| prev + (hi - prev) * (k as f64 + 1.0) / 1000.0)
                .map(|d| (travel + cost.outbound(d)) / d)
                .fold(f64::NEG_INFINITY, f64::max);
            let cr = cr_step(&seq, j, &cost).unwrap();
            // the ratio decreases in D, so the open-interval supremum sits at prev
            assert!(grid_max <= cr + 1e-12);
            assert!((travel + cost.outbound(prev)) / prev == cr);
        }
    }
}

#[test]
fn report_supremum_is_max_of_present_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let len = rng.gen_range(3..30);
        let seq = random_sequence(&mut rng, len, 2);
        let cost = random_cost(&mut rng);
        let report = evaluate_sequence(&seq, &cost, 1e-9).unwrap();
        let brute = (1..=seq.len())
            .filter(|&j| is_feasible(&seq, j).unwrap())
            .map(|j| cr_step(&seq, j, &cost).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(report.supremum, brute);
        for r in &report.per_step {
            assert_eq!(r.cr_j.is_some(), r.feasible);
        }
    }
}

#[test]
fn simulator_agrees_with_evaluator_just_beyond_previous_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let plain = CostModel::plain();
    let eps = 1e-7;
    for _ in 0..20 {
        let seq = random_sequence(&mut rng, 15, 2);
        for j in 1..=seq.len() {
            if !is_feasible(&seq, j).unwrap() {
                continue;
            }
            let prev = seq.distance(prev_index(&seq, j).unwrap());
            let target = Target {
                ray: seq.steps()[j - 1].ray,
                distance: prev + eps,
            };
            let cost = simulate(&seq, &target, &plain, seq.len()).unwrap();
            let expected = cr_step(&seq, j, &plain).unwrap() * prev;
            assert!(
                (cost - expected).abs() < 1e-5,
                "j={j}: {cost} vs {expected}"
            );
        }
    }
}

#[test]
fn continuation_bound_dominates_revisit_costs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let seq = random_sequence(&mut rng, 10, 3);
        let cost = random_cost(&mut rng);
        let bound = continuation_bound(&seq, &cost);
        // appending any deeper sweep on any ray produces a feasible step whose ratio is one of the bound's terms
        for ray in 0..3 {
            let deepest = seq
                .steps()
                .iter()
                .filter(|s| s.ray == ray)
                .map(|s| s.distance)
                .fold(1.0f64, f64::max);
            let mut steps = seq.steps().to_vec();
            steps.push(Step::new(deepest * 2.0, ray));
            let extended = StepSequence::new(steps, 1.0, 3).unwrap();
            let r = cr_step(&extended, extended.len(), &cost).unwrap();
            assert!(r <= bound + 1e-12);
        }
        assert!(prefix_ratio(&seq, &cost) >= bound);
    }
}

#[test]
fn report_serializes() {
    let seq = StepSequence::from_pairs(&[(2.0, 0), (3.0, 1), (1.5, 0)], 1.0).unwrap();
    let r = evaluate_sequence(&seq, &CostModel::plain(), 1e-9).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["per_step"].as_array().unwrap().len(), 3);
    assert!(v["per_step"][2]["cr_j"].is_null());
    assert_eq!(v["per_step"][2]["feasible"], false);
}

#[test]
fn oracle_materializes_lazily() {
    let h = doubling(1.0).unwrap();
    assert_eq!(h.step(1_000).unwrap().ray, 1);
    assert_eq!(h.materialize(7).unwrap().len(), 7);
}
