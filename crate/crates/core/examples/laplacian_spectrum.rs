//! Signed Laplacians of a small graph and their spectra.

use seating::spectral::smallest_eigenpairs;
use seating::SignedGraph;

fn main() -> seating::Result<()> {
    let people = ["willow", "tara", "oz", "spike"];
    let g = SignedGraph::from_edges(
        &people,
        &[
            ("willow", "tara", 10.0),
            ("willow", "oz", 1.0),
            ("oz", "tara", -1.0),
            ("spike", "willow", -10.0),
        ],
    )?;

    println!("signed degrees: {:?}", g.signed_degrees().iter().collect::<Vec<_>>());
    let l = g.signed_laplacian().entries;
    println!("signed Laplacian:{l}");

    let n = g.len();
    let plain = smallest_eigenpairs(&l, n)?;
    println!("eigenvalues (PSD): {:.4}", plain.values.transpose());

    let sym = g.normalized_signed_laplacian()?.entries;
    let normalized = smallest_eigenpairs(&sym, n)?;
    println!("normalized eigenvalues (within [0, 2]): {:.4}", normalized.values.transpose());
    Ok(())
}
