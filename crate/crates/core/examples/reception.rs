//! Seat a synthetic 58-guest reception at ten tables of ten.

use seating::cli::render_report;
use seating::pipeline::{solve_constrained, SolveConfig};
use seating::synthetic::reception;

fn main() -> seating::Result<()> {
    let inst = reception(0);
    // no neutral fill, so guests nobody mentioned stay isolated
    let config = SolveConfig { neutral_weight: 0.0, ..SolveConfig::default() };
    let plan = solve_constrained(&inst.people, &inst.spec, &inst.tables, &config)?;
    print!("{}", render_report(&plan));
    Ok(())
}
