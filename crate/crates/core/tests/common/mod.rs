//! Oracles and fixtures shared by the integration tests. Nothing here calls
//! into the library routines it is used to check.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seating::affinity::{Category, Relationship, RelationshipSpec};
use seating::capacity::{EvictionStack, ScoreMatrix, StackEntry, TableSpec};
use seating::{Person, SignedGraph};

pub const WEIGHTS: [f64; 5] = [-10.0, -1.0, 0.1, 1.0, 10.0];

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    values.sort_by(f64::total_cmp);
    values
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Each pair gets a weight from [`WEIGHTS`] with probability `density`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> SignedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                let v = WEIGHTS[rng.random_range(0..WEIGHTS.len())];
                w[(i, j)] = v;
                w[(j, i)] = v;
            }
        }
    }
    SignedGraph::from_matrix(&names(n), w).unwrap()
}

/// Signed ncut computed from indicator vectors: for every cluster `x` with
/// positive `x' D x`, add `(x' D x - x' W x) / x' D x`.
pub fn dense_ncut(w: &DMatrix<f64>, labels: &[usize], k: usize) -> f64 {
    let n = w.nrows();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|i| w.row(i).iter().map(|v| v.abs()).sum::<f64>()),
    ));
    let mut total = 0.0;
    for c in 0..k {
        let x = nalgebra::DVector::from_iterator(n, labels.iter().map(|&l| f64::from(u8::from(l == c))));
        let vol = (x.transpose() * &d * &x)[(0, 0)];
        if vol > 0.0 {
            total += (vol - (x.transpose() * w * &x)[(0, 0)]) / vol;
        }
    }
    total
}

/// Minimum of [`dense_ncut`] over every capacity-respecting labeling,
/// counting through all `k^n` labelings.
pub fn enumerated_minimum(w: &DMatrix<f64>, capacities: &[usize]) -> f64 {
    let n = w.nrows();
    let k = capacities.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let mut occ = vec![0usize; k];
        labels.iter().for_each(|&l| occ[l] += 1);
        if occ.iter().zip(capacities).all(|(o, c)| o <= c) {
            best = best.min(dense_ncut(w, &labels, k));
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Random stack of up to 12 evicted people with tie-prone memberships and
/// scores, plus free seats covering the stack.
pub fn eviction_scenario(seed: u64) -> (EvictionStack, ScoreMatrix, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=12);
    let k = rng.random_range(1..=5);
    let mut people: Vec<usize> = (0..12).collect();
    for i in (1..people.len()).rev() {
        people.swap(i, rng.random_range(0..=i));
    }
    let entries = people[..m]
        .iter()
        .map(|&person| StackEntry {
            person,
            membership: (0..k).map(|_| f64::from(rng.random_range(0..4u8)) / 4.0).collect(),
        })
        .collect();
    let mut residual = vec![0usize; k];
    for _ in 0..m + rng.random_range(0..4) {
        residual[rng.random_range(0..k)] += 1;
    }
    let scores = DMatrix::from_fn(k, m, |t, _| {
        if residual[t] > 0 {
            f64::from(rng.random_range(-3..=3i8))
        } else {
            0.0
        }
    });
    let eligible = residual.iter().map(|&r| r > 0).collect();
    (EvictionStack { entries }, ScoreMatrix { scores, eligible }, residual)
}

/// Pairs `(stack position, table)` where the person would rather be at
/// `table` and the table has a free seat or holds someone it likes less.
pub fn blocking_pairs(
    stack: &EvictionStack,
    scores: &ScoreMatrix,
    residual: &[usize],
    matching: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    let k = residual.len();
    let table_of: Vec<usize> = matching.iter().map(|&(_, t)| t).collect();
    let person_rank = |l: usize, t: usize| {
        let m = &stack.entries[l].membership;
        (std::cmp::Reverse(ordered(m[t])), t)
    };
    let table_likes_more = |t: usize, a: usize, b: usize| {
        let (sa, sb) = (scores.scores[(t, a)], scores.scores[(t, b)]);
        sa > sb || (sa == sb && stack.entries[a].person < stack.entries[b].person)
    };
    let mut out = Vec::new();
    for l in 0..stack.entries.len() {
        for t in (0..k).filter(|&t| residual[t] > 0 && t != table_of[l]) {
            if person_rank(l, t) >= person_rank(l, table_of[l]) {
                continue;
            }
            let held: Vec<usize> = (0..table_of.len()).filter(|&o| table_of[o] == t).collect();
            if held.len() < residual[t] || held.iter().any(|&o| table_likes_more(t, l, o)) {
                out.push((l, t));
            }
        }
    }
    out
}

fn ordered(v: f64) -> i64 {
    (v * 1e9).round() as i64
}

pub fn toy() -> (Vec<Person>, RelationshipSpec, TableSpec) {
    let people = ["anya", "buffy", "cordelia", "dawn"]
        .iter()
        .map(|id| Person::new(*id, id.to_uppercase()))
        .collect();
    let spec = RelationshipSpec::new(vec![
        Relationship::new("anya", "buffy", Category::KeepTogether),
        Relationship::new("cordelia", "dawn", Category::KeepTogether),
        Relationship::new("anya", "cordelia", Category::KeepApart),
        Relationship::new("buffy", "dawn", Category::BetterApart),
    ])
    .unwrap();
    (people, spec, TableSpec::from_capacities(&[2, 2]).unwrap())
}

pub struct CsvFiles {
    pub people: PathBuf,
    pub relationships: PathBuf,
    pub tables: PathBuf,
}

pub fn write_csvs(dir: &Path, people: &[Person], spec: &RelationshipSpec, tables: &TableSpec) -> CsvFiles {
    let mut p = String::from("id,name\n");
    for person in people {
        p += &format!("{},{}\n", person.id, person.name);
    }
    let mut r = String::from("person_a,person_b,category\n");
    for rel in spec.pairs() {
        r += &format!("{},{},{}\n", rel.person_a, rel.person_b, rel.category);
    }
    let mut t = String::from("table_id,capacity\n");
    for table in tables.tables() {
        t += &format!("{},{}\n", table.table_id, table.capacity);
    }
    let files = CsvFiles {
        people: dir.join("people.csv"),
        relationships: dir.join("relationships.csv"),
        tables: dir.join("tables.csv"),
    };
    std::fs::write(&files.people, p).unwrap();
    std::fs::write(&files.relationships, r).unwrap();
    std::fs::write(&files.tables, t).unwrap();
    files
}
