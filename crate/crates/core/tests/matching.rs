mod common;

use proptest::prelude::*;
use seating::capacity::{deferred_acceptance, evict_overflow, occupancy, TableSpec};
use seating::discretize::{Indicator, ProbabilisticSolution};
use nalgebra::DMatrix;

proptest! {
    #[test]
    fn deferred_acceptance_has_no_blocking_pair(seed: u64) {
        let (stack, scores, residual) = common::eviction_scenario(seed);
        let matching = deferred_acceptance(&stack, &scores, &residual).unwrap();
        prop_assert_eq!(matching.len(), stack.len());
        let mut used = vec![0usize; residual.len()];
        for (l, &(person, t)) in matching.iter().enumerate() {
            prop_assert_eq!(person, stack.entries[l].person);
            used[t] += 1;
        }
        for (u, r) in used.iter().zip(&residual) {
            prop_assert!(u <= r);
        }
        let blocking = common::blocking_pairs(&stack, &scores, &residual, &matching);
        prop_assert!(blocking.is_empty(), "{blocking:?}");
    }

    #[test]
    fn eviction_leaves_every_table_within_capacity(
        labels in prop::collection::vec(0usize..4, 1..30),
        seed: u64,
    ) {
        let n = labels.len();
        let k = 4;
        let mut caps = vec![1usize; k];
        for i in 0..n.saturating_sub(k) {
            caps[(seed as usize + i * 7) % k] += 1;
        }
        let tables = TableSpec::from_capacities(&caps).unwrap();
        let x = Indicator::new(labels.clone(), k).unwrap();
        let p = ProbabilisticSolution {
            p: DMatrix::from_fn(n, k, |i, j| ((i * 31 + j * 17 + seed as usize) % 5) as f64 / 10.0),
            uniform_rows: vec![],
        };
        let (seated, stack) = evict_overflow(&x, &p, &tables).unwrap();
        let occ = occupancy(&seated, k);
        for t in 0..k {
            prop_assert!(occ[t] <= caps[t]);
        }
        prop_assert_eq!(occ.iter().sum::<usize>() + stack.len(), n);
        for e in &stack.entries {
            prop_assert!(seated[e.person].is_none());
        }
    }
}

#[test]
fn checker_detects_a_planted_blocking_pair() {
    let (stack, scores, residual) = (0..200)
        .map(common::eviction_scenario)
        .find(|(s, _, r)| s.len() >= 2 && r.iter().filter(|&&x| x > 0).count() >= 2)
        .unwrap();
    let good = deferred_acceptance(&stack, &scores, &residual).unwrap();
    // Moving someone off their first choice to a worse table must be caught
    // whenever that first choice has room for them.
    let mut found = false;
    for l in 0..good.len() {
        for t in (0..residual.len()).filter(|&t| residual[t] > 0 && t != good[l].1) {
            let mut bad = good.clone();
            bad[l].1 = t;
            if !common::blocking_pairs(&stack, &scores, &residual, &bad).is_empty() {
                found = true;
            }
        }
    }
    assert!(found);
}
