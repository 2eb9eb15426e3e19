//! Signed social graph and the matrices derived from it.
//!
//! People are vertices and pairwise affinities are symmetric real weights:
//! positive for "like", negative for "dislike", zero for no relationship.
//! The signed degree of a vertex is the sum of the absolute values of its
//! edge weights, and the signed Laplacian is `diag(degrees) - W`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Symmetric weighted affinity matrix over an ordered list of people.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    vertices: Vec<String>,
    weights: DMatrix<f64>,
}

/// Signed degree of every vertex, in vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVector(DVector<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    Signed,
    NormalizedSigned,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub entries: DMatrix<f64>,
    pub kind: LaplacianKind,
}

/// Connected components of an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component label for each vertex of the queried subset, in subset order.
    /// Labels are numbered by first appearance.
    pub labels: Vec<usize>,
}

impl SignedGraph {
    /// Builds a graph from person ids and an edge list keyed by id.
    ///
    /// Both `(a, b)` and `(b, a)` are set; unspecified pairs stay at zero.
    pub fn from_edges<S, A, B>(vertices: &[S], edges: &[(A, B, f64)]) -> Result<Self>
    where
        S: AsRef<str>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::DuplicatePerson(v.clone()));
            }
        }

        let n = vertices.len();
        let mut weights = DMatrix::zeros(n, n);
        let mut seen = vec![false; n * n];
        for (a, b, w) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = *index.get(a).ok_or_else(|| Error::UnknownPerson(a.to_owned()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownPerson(b.to_owned()))?;
            if i == j {
                return Err(Error::SelfLoop(a.to_owned()));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite("edge weight"));
            }
            let key = i.min(j) * n + i.max(j);
            if std::mem::replace(&mut seen[key], true) {
                return Err(Error::DuplicatePair(a.to_owned(), b.to_owned()));
            }
            weights[(i, j)] = *w;
            weights[(j, i)] = *w;
        }
        Ok(Self { vertices, weights })
    }

    /// Wraps an existing matrix, checking symmetry and the zero diagonal.
    pub fn from_matrix<S: AsRef<str>>(vertices: &[S], weights: DMatrix<f64>) -> Result<Self> {
        let n = vertices.len();
        if weights.nrows() != n || weights.ncols() != n {
            return Err(Error::Shape(format!(
                "{n} vertices but a {}x{} weight matrix",
                weights.nrows(),
                weights.ncols()
            )));
        }
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_owned()).collect();
        let mut seen = std::collections::HashSet::with_capacity(n);
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicatePerson(v.clone()));
            }
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::SelfLoop(vertices[i].clone()));
            }
            for j in 0..i {
                let (a, b) = (weights[(i, j)], weights[(j, i)]);
                if !a.is_finite() {
                    return Err(Error::NonFinite("weight matrix"));
                }
                if a != b {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        diff: (a - b).abs(),
                    });
                }
            }
        }
        Ok(Self { vertices, weights })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    /// `d(v_i) = sum_j |w_ij|`.
    pub fn signed_degrees(&self) -> DegreeVector {
        let n = self.len();
        DegreeVector(DVector::from_fn(n, |i, _| {
            self.weights.row(i).iter().map(|w| w.abs()).sum()
        }))
    }

    /// `L = D - W`.
    pub fn signed_laplacian(&self) -> LaplacianMatrix {
        let mut entries = -self.weights.clone();
        for (i, d) in self.signed_degrees().0.iter().enumerate() {
            entries[(i, i)] += d;
        }
        LaplacianMatrix {
            entries,
            kind: LaplacianKind::Signed,
        }
    }

    /// `D^{-1/2} L D^{-1/2}`. Fails on any zero-degree vertex.
    pub fn normalized_signed_laplacian(&self) -> Result<LaplacianMatrix> {
        let degrees = self.signed_degrees();
        if let Some(i) = degrees.0.iter().position(|&d| d == 0.0) {
            return Err(Error::IsolatedVertex(self.vertices[i].clone()));
        }
        let inv_sqrt = degrees.0.map(|d| d.sqrt().recip());
        let lap = self.signed_laplacian().entries;
        let n = self.len();
        let entries = DMatrix::from_fn(n, n, |i, j| inv_sqrt[i] * lap[(i, j)] * inv_sqrt[j]);
        Ok(LaplacianMatrix {
            entries,
            kind: LaplacianKind::NormalizedSigned,
        })
    }

    /// Connected components of the subgraph induced on `subset`, keeping only
    /// edges with weight at or above `threshold`.
    pub fn positive_components(&self, subset: &[usize], threshold: f64) -> Result<Components> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let m = subset.len();
        let mut labels = vec![usize::MAX; m];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..m {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = count;
            stack.push(start);
            while let Some(a) = stack.pop() {
                for b in 0..m {
                    if labels[b] == usize::MAX
                        && self.weights[(subset[a], subset[b])] >= threshold
                        && subset[a] != subset[b]
                    {
                        labels[b] = count;
                        stack.push(b);
                    }
                }
            }
            count += 1;
        }
        Ok(Components { count, labels })
    }

    /// Induced subgraph on `indices`, in the given order.
    pub fn subgraph(&self, indices: &[usize]) -> SignedGraph {
        let vertices = indices.iter().map(|&i| self.vertices[i].clone()).collect();
        let weights = DMatrix::from_fn(indices.len(), indices.len(), |a, b| {
            self.weights[(indices[a], indices[b])]
        });
        SignedGraph { vertices, weights }
    }

    /// Separates zero-degree vertices from the rest.
    pub fn split_isolated(&self) -> Result<IsolatedSplit> {
        let degrees = self.signed_degrees();
        let (core, isolated): (Vec<usize>, Vec<usize>) =
            (0..self.len()).partition(|&i| degrees.0[i] > 0.0);
        if core.is_empty() {
            return Err(Error::AllIsolated);
        }
        Ok(IsolatedSplit {
            core: self.subgraph(&core),
            core_indices: core,
            isolated: isolated.iter().map(|&i| self.vertices[i].clone()).collect(),
            isolated_indices: isolated,
        })
    }
}

/// Result of [`SignedGraph::split_isolated`].
#[derive(Debug, Clone)]
pub struct IsolatedSplit {
    pub core: SignedGraph,
    /// Index in the original graph of each core vertex.
    pub core_indices: Vec<usize>,
    pub isolated: Vec<String>,
    pub isolated_indices: Vec<usize>,
}

impl DegreeVector {
    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }
}
