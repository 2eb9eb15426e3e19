//! The relaxed solution Z = D^-1/2 U for three planted groups.

use seating::affinity::{encode_relationships, Category};
use seating::spectral::relaxed_solution;
use seating::synthetic::planted_groups;

fn main() -> seating::Result<()> {
    let planted = planted_groups(&[3, 3, 3], Category::KeepTogether, Category::BetterApart, &[3, 3, 3], 7);
    let inst = &planted.instance;
    let ids: Vec<&str> = inst.people.iter().map(|p| p.id.as_str()).collect();
    let graph = encode_relationships(&ids, &inst.spec, 0.0)?;

    let sol = relaxed_solution(&graph, 3)?;
    println!("smallest eigenvalues: {:.4}", sol.eigenvalues.transpose());
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<String> = sol.z.row(i).iter().map(|v| format!("{v:+.4}")).collect();
        println!("{id} (group {}): {}", planted.groups[i], row.join("  "));
    }
    Ok(())
}
