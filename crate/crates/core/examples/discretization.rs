//! Alternating minimization of ||X - Z R Lambda|| and the soft memberships.

use seating::affinity::{encode_relationships, Category};
use seating::discretize::{alternate_minimize, default_epsilon, probabilistic_solution, DEFAULT_MAX_ITER};
use seating::spectral::relaxed_solution;
use seating::synthetic::planted_groups;

fn main() -> seating::Result<()> {
    let planted = planted_groups(&[4, 4, 4], Category::KeepTogether, Category::KeepApart, &[4, 4, 4], 1);
    let inst = &planted.instance;
    let ids: Vec<&str> = inst.people.iter().map(|p| p.id.as_str()).collect();
    let graph = encode_relationships(&ids, &inst.spec, 0.0)?;
    let z = relaxed_solution(&graph, 3)?.z;

    let state = alternate_minimize(&z, default_epsilon(z.nrows()), DEFAULT_MAX_ITER)?;
    println!("stopped after {} iterations ({:?})", state.iterations, state.termination);
    println!("residual history: {:?}", state.history);
    println!("labels:  {:?}", state.indicator.labels());
    println!("planted: {:?}", planted.groups);

    let soft = probabilistic_solution(&state.aligned(&z));
    println!("soft memberships:{:.3}", soft.p);
    Ok(())
}
