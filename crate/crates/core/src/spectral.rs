//! Relaxed continuous solution: the K smallest eigenpairs of the normalized
//! signed Laplacian.
//!
//! A dense symmetric eigendecomposition is used. Because the spectrum of the
//! normalized signed Laplacian lies in `[0, 2]`, a sparse iterative path could
//! instead take the largest eigenpairs of `2I - L_sym`; at desk scale the dense
//! solver is exact and deterministic.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// Entries further apart than this are treated as an asymmetric input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    /// Ascending.
    pub values: DVector<f64>,
    /// One unit eigenvector per column, matching `values`.
    pub vectors: DMatrix<f64>,
}

/// `Z = D^{-1/2} U` together with `U` and its eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub z: DMatrix<f64>,
    pub u: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
}

impl RelaxedSolution {
    pub fn k(&self) -> usize {
        self.z.ncols()
    }
}

/// The `k` smallest eigenpairs of a symmetric matrix.
///
/// Each eigenvector is signed so that its entry of largest magnitude is
/// positive (ties go to the lowest row), which makes the output reproducible.
pub fn smallest_eigenpairs(matrix: &DMatrix<f64>, k: usize) -> Result<Eigenpairs> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::Shape(format!("{}x{} matrix is not square", n, matrix.ncols())));
    }
    if k == 0 || k > n {
        return Err(Error::TooManyClusters { k, n });
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigenproblem input"));
    }
    for i in 0..n {
        for j in 0..i {
            let diff = (matrix[(i, j)] - matrix[(j, i)]).abs();
            if diff > SYMMETRY_TOLERANCE {
                return Err(Error::NotSymmetric { row: i, col: j, diff });
            }
        }
    }

    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let values = DVector::from_iterator(k, order[..k].iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, k);
    for (col, &src) in order[..k].iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).into_owned();
        let pivot = v
            .iter()
            .enumerate()
            .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
        if v[pivot] < 0.0 {
            v.neg_mut();
        }
        vectors.set_column(col, &v);
    }
    Ok(Eigenpairs { values, vectors })
}

/// Relaxed solution of the signed normalized cut for `k` clusters.
///
/// The graph must not contain isolated vertices.
pub fn relaxed_solution(graph: &SignedGraph, k: usize) -> Result<RelaxedSolution> {
    let lsym = graph.normalized_signed_laplacian()?;
    let pairs = smallest_eigenpairs(&lsym.entries, k)?;
    let degrees = graph.signed_degrees();
    let mut z = pairs.vectors.clone();
    for (i, mut row) in z.row_iter_mut().enumerate() {
        row /= degrees.get(i).sqrt();
    }
    Ok(RelaxedSolution {
        z,
        u: pairs.vectors,
        eigenvalues: pairs.values,
    })
}
