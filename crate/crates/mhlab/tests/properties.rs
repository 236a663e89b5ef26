//! Property tests for the crate-wide invariants.

use proptest::prelude::*;

use mhlab::metrics::{diversity, xpl_xpt};
use mhlab::population::{Individual, Population};
use mhlab::rng::ZeroRng;
use mhlab::space::{RepairPolicy, SearchSpace};
use mhlab::stats::{friedman, midranks, wilcoxon_signed_rank, ResultMatrix};

fn finite_coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        -500.0..500.0,
        Just(-100.0),
        Just(100.0),
        Just(0.0),
        -1e6..1e6,
    ]
}

proptest! {
    #[test]
    fn repair_lands_inside_and_is_idempotent(
        coords in prop::collection::vec(finite_coord(), 1..8),
        policy in prop_oneof![Just(RepairPolicy::Clamp), Just(RepairPolicy::Reflect)],
    ) {
        let space = SearchSpace::symmetric(coords.len(), 100.0);
        let mut once = coords.clone();
        space.repair(&mut once, policy, &mut ZeroRng);
        prop_assert!(space.contains(&once), "repair left the box: {once:?}");
        let mut twice = once.clone();
        space.repair(&mut twice, policy, &mut ZeroRng);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn diversity_invariant_under_translation_and_permutation(
        rows in prop::collection::vec(prop::collection::vec(-50.0..50.0f64, 3), 2..12),
        shift in -1000.0..1000.0f64,
        seed in 0u64..1000,
    ) {
        let pop = Population::new(rows.iter().cloned().map(Individual::new).collect());
        let translated = Population::new(
            rows.iter()
                .map(|r| Individual::new(r.iter().map(|v| v + shift).collect()))
                .collect(),
        );
        let base = diversity(&pop);
        prop_assert!((base - diversity(&translated)).abs() < 1e-9 * (1.0 + base));

        // deterministic permutation from the seed
        let mut permuted = rows.clone();
        let n = permuted.len();
        for i in 0..n {
            permuted.swap(i, (seed as usize + i * 7) % n);
        }
        let permuted = Population::new(permuted.into_iter().map(Individual::new).collect());
        // summation order differs, so equality holds to the last ulp only
        let d = diversity(&permuted);
        prop_assert!((base - d).abs() <= 1e-12 * (1.0 + base.abs()), "{base} vs {d}");
    }

    #[test]
    fn xpl_xpt_always_sums_to_hundred(div in 0.0..100.0f64, extra in 0.0..100.0f64) {
        let (xpl, xpt) = xpl_xpt(div, div + extra);
        prop_assert!((xpl + xpt - 100.0).abs() < 1e-9);
        prop_assert!(xpl >= 0.0 && xpt >= 0.0);
    }

    #[test]
    fn wilcoxon_rank_sums_and_swap_symmetry(
        pairs in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 6..40),
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        if let Ok(ab) = wilcoxon_signed_rank(&a, &b) {
            let n = ab.n_effective as f64;
            prop_assert!((ab.r_plus + ab.r_minus - n * (n + 1.0) / 2.0).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&ab.p_value));
            let ba = wilcoxon_signed_rank(&b, &a).unwrap();
            prop_assert_eq!(ab.r_plus, ba.r_minus);
            prop_assert_eq!(ab.r_minus, ba.r_plus);
            prop_assert_eq!(ab.p_value, ba.p_value);
        }
    }

    #[test]
    fn friedman_rank_sum_and_monotone_invariance(
        scores in prop::collection::vec(prop::collection::vec(0.0..1000.0f64, 4), 3..20),
    ) {
        let k = 4;
        let m = ResultMatrix::new(
            (0..k).map(|i| format!("a{i}")).collect(),
            (0..scores.len()).map(|i| format!("p{i}")).collect(),
            scores.clone(),
        ).unwrap();
        let rep = friedman(&m).unwrap();
        let sum: f64 = rep.average_ranks.iter().sum();
        prop_assert!((sum - (k * (k + 1)) as f64 / 2.0).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&rep.p_value));

        // strictly monotone per-row transform preserves everything
        let transformed = ResultMatrix::new(
            m.algorithms.clone(),
            m.problems.clone(),
            scores
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().map(|v| v.sqrt() * (i + 1) as f64 + 3.0).collect())
                .collect(),
        ).unwrap();
        let rep2 = friedman(&transformed).unwrap();
        prop_assert_eq!(rep.average_ranks, rep2.average_ranks);
        prop_assert_eq!(rep.chi_square, rep2.chi_square);
    }

    #[test]
    fn midranks_are_a_permutation_average(values in prop::collection::vec(-50.0..50.0f64, 1..30)) {
        let ranks = midranks(&values);
        let n = values.len() as f64;
        let sum: f64 = ranks.iter().sum();
        prop_assert!((sum - n * (n + 1.0) / 2.0).abs() < 1e-9);
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                if a < b {
                    prop_assert!(ranks[i] < ranks[j]);
                }
                if a == b {
                    prop_assert_eq!(ranks[i], ranks[j]);
                }
            }
        }
    }
}
