//! Compare solver plans with the exhaustive optimum on small instances.

use seating::pipeline::{oracle_comparison, solve_constrained, SolveConfig};
use seating::synthetic::separable_pair;

fn main() -> seating::Result<()> {
    let mut matched = 0;
    let trials = 20;
    for seed in 0..trials {
        let inst = separable_pair(8, seed).instance;
        let config = SolveConfig { neutral_weight: 0.0, seed, ..SolveConfig::default() };
        let plan = solve_constrained(&inst.people, &inst.spec, &inst.tables, &config)?;
        let oracle = oracle_comparison(&inst.people, &inst.spec, &inst.tables, &config, &plan)?;
        let solver = plan.objective.unwrap_or(f64::NAN);
        println!(
            "seed {seed:2}: n={} solver {solver:.4} optimum {:.4} same partition {}",
            inst.people.len(),
            oracle.objective,
            oracle.same_partition
        );
        matched += usize::from(plan.objective == Some(oracle.objective));
    }
    println!("{matched}/{trials} optimal");
    Ok(())
}
