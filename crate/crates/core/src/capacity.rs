//! Capacity enforcement on the discrete clustering.
//!
//! Over-full tables evict their weakest members (lowest soft membership for
//! that table) onto a stack. Each under-full table scores the stacked people
//! by summed affinity to its remaining members, and the stack is reassigned
//! by person-proposing deferred acceptance: people rank tables by soft
//! membership, tables rank people by score.

use std::collections::HashSet;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discretize::{Indicator, ProbabilisticSolution};
use crate::error::{Error, Result};
use crate::graph::SignedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub table_id: String,
    pub capacity: usize,
}

/// Ordered tables with their seat counts. Table `i` hosts cluster `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    tables: Vec<Table>,
}

impl TableSpec {
    pub fn new(tables: Vec<Table>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::NoTables);
        }
        let mut seen = HashSet::new();
        for t in &tables {
            if t.capacity == 0 {
                return Err(Error::ZeroCapacity(t.table_id.clone()));
            }
            if !seen.insert(t.table_id.as_str()) {
                return Err(Error::DuplicateTable(t.table_id.clone()));
            }
        }
        Ok(Self { tables })
    }

    /// Tables named `0..capacities.len()`.
    pub fn from_capacities(capacities: &[usize]) -> Result<Self> {
        Self::new(
            capacities
                .iter()
                .enumerate()
                .map(|(i, &capacity)| Table {
                    table_id: i.to_string(),
                    capacity,
                })
                .collect(),
        )
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn capacity(&self, i: usize) -> usize {
        self.tables[i].capacity
    }

    pub fn capacities(&self) -> Vec<usize> {
        self.tables.iter().map(|t| t.capacity).collect()
    }

    pub fn total_capacity(&self) -> usize {
        self.tables.iter().map(|t| t.capacity).sum()
    }

    pub fn index_of(&self, table_id: &str) -> Option<usize> {
        self.tables.iter().position(|t| t.table_id == table_id)
    }

    pub fn check_feasible(&self, people: usize) -> Result<()> {
        let capacity = self.total_capacity();
        if capacity < people {
            return Err(Error::Infeasible { people, capacity });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StackEntry {
    pub person: usize,
    /// Soft membership row, one entry per table.
    pub membership: Vec<f64>,
}

/// People removed from over-full tables, in eviction order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvictionStack {
    pub entries: Vec<StackEntry>,
}

impl EvictionStack {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn people(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.person).collect()
    }
}

/// `scores[(table, l)]`: summed affinity of stacked person `l` to the table's
/// current members. Full tables are ineligible and keep zero scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    pub scores: DMatrix<f64>,
    pub eligible: Vec<bool>,
}

/// Partial seating: `Some(table)` per seated person, `None` while stacked.
pub type Assignment = Vec<Option<usize>>;

pub fn occupancy(assignment: &[Option<usize>], tables: usize) -> Vec<usize> {
    let mut occ = vec![0; tables];
    for t in assignment.iter().flatten() {
        occ[*t] += 1;
    }
    occ
}

/// Trims every over-full table down to capacity, evicting members in
/// ascending order of their membership for that table (ties to the lowest
/// person index).
pub fn evict_overflow(
    x: &Indicator,
    p: &ProbabilisticSolution,
    tables: &TableSpec,
) -> Result<(Assignment, EvictionStack)> {
    let n = x.len();
    let k = tables.len();
    if x.k() != k || p.p.ncols() != k || p.p.nrows() != n {
        return Err(Error::Shape(format!(
            "indicator {}x{}, memberships {}x{}, {} tables",
            n,
            x.k(),
            p.p.nrows(),
            p.p.ncols(),
            k
        )));
    }
    tables.check_feasible(n)?;

    let mut assignment: Assignment = x.labels().iter().map(|&l| Some(l)).collect();
    let mut stack = EvictionStack::default();
    for table in 0..k {
        let mut members: Vec<usize> = (0..n).filter(|&i| assignment[i] == Some(table)).collect();
        let excess = members.len().saturating_sub(tables.capacity(table));
        if excess == 0 {
            continue;
        }
        members.sort_by(|&a, &b| p.p[(a, table)].total_cmp(&p.p[(b, table)]).then(a.cmp(&b)));
        for &person in &members[..excess] {
            assignment[person] = None;
            stack.entries.push(StackEntry {
                person,
                membership: p.p.row(person).iter().copied().collect(),
            });
        }
    }
    Ok((assignment, stack))
}

pub fn affinity_scores(
    graph: &SignedGraph,
    assignment: &[Option<usize>],
    stack: &EvictionStack,
    tables: &TableSpec,
) -> ScoreMatrix {
    let k = tables.len();
    let occ = occupancy(assignment, k);
    let eligible: Vec<bool> = (0..k).map(|t| occ[t] < tables.capacity(t)).collect();
    let mut scores = DMatrix::zeros(k, stack.len());
    for (person, table) in assignment.iter().enumerate() {
        let Some(table) = *table else { continue };
        if !eligible[table] {
            continue;
        }
        for (l, entry) in stack.entries.iter().enumerate() {
            scores[(table, l)] += graph.weight(entry.person, person);
        }
    }
    ScoreMatrix { scores, eligible }
}

/// Person preference order over tables with free seats: descending
/// membership, ties to the lower table index.
pub fn person_preferences(entry: &StackEntry, residual: &[usize]) -> Vec<usize> {
    let mut prefs: Vec<usize> = (0..residual.len()).filter(|&t| residual[t] > 0).collect();
    prefs.sort_by(|&a, &b| entry.membership[b].total_cmp(&entry.membership[a]).then(a.cmp(&b)));
    prefs
}

/// True when table `t` ranks stack position `a` above stack position `b`.
pub fn table_prefers(stack: &EvictionStack, scores: &ScoreMatrix, t: usize, a: usize, b: usize) -> bool {
    let (sa, sb) = (scores.scores[(t, a)], scores.scores[(t, b)]);
    match sa.total_cmp(&sb) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => stack.entries[a].person < stack.entries[b].person,
    }
}

/// Person-proposing deferred acceptance of the stack into the free seats.
///
/// Returns `(person, table)` for every stack entry, in stack order. The
/// result is stable: no person and table would both rather be matched to
/// each other than keep their current outcome.
pub fn deferred_acceptance(
    stack: &EvictionStack,
    scores: &ScoreMatrix,
    residual: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let k = residual.len();
    if scores.scores.nrows() != k || scores.scores.ncols() != stack.len() {
        return Err(Error::Shape(format!(
            "score matrix {}x{} for {} tables and {} stacked people",
            scores.scores.nrows(),
            scores.scores.ncols(),
            k,
            stack.len()
        )));
    }
    let seats: usize = residual.iter().sum();
    if seats < stack.len() {
        return Err(Error::Infeasible {
            people: stack.len(),
            capacity: seats,
        });
    }

    let prefs: Vec<Vec<usize>> = stack
        .entries
        .iter()
        .map(|e| person_preferences(e, residual))
        .collect();
    let mut next = vec![0usize; stack.len()];
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut free: Vec<usize> = (0..stack.len()).rev().collect();

    while let Some(l) = free.pop() {
        let Some(&table) = prefs[l].get(next[l]) else {
            return Err(Error::Internal(format!(
                "stacked person {} was rejected by every table with free seats",
                stack.entries[l].person
            )));
        };
        next[l] += 1;
        held[table].push(l);
        if held[table].len() > residual[table] {
            let worst = (0..held[table].len())
                .reduce(|w, i| {
                    if table_prefers(stack, scores, table, held[table][w], held[table][i]) {
                        i
                    } else {
                        w
                    }
                })
                .expect("non-empty");
            free.push(held[table].swap_remove(worst));
        }
    }

    let mut matched = vec![usize::MAX; stack.len()];
    for (table, ls) in held.iter().enumerate() {
        for &l in ls {
            matched[l] = table;
        }
    }
    Ok(stack
        .entries
        .iter()
        .zip(matched)
        .map(|(e, t)| (e.person, t))
        .collect())
}

/// Seats each isolated person uniformly at random among the tables that
/// still have room, in order, with a generator seeded by `seed`.
pub fn place_isolated(
    occupancy: &mut [usize],
    isolated: usize,
    tables: &TableSpec,
    seed: u64,
) -> Result<Vec<usize>> {
    let free: usize = (0..tables.len())
        .map(|t| tables.capacity(t).saturating_sub(occupancy[t]))
        .sum();
    if free < isolated {
        return Err(Error::Infeasible {
            people: isolated + occupancy.iter().sum::<usize>(),
            capacity: tables.total_capacity(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = Vec::with_capacity(isolated);
    for _ in 0..isolated {
        let open: Vec<usize> = (0..tables.len())
            .filter(|&t| occupancy[t] < tables.capacity(t))
            .collect();
        let table = open[rng.random_range(0..open.len())];
        occupancy[table] += 1;
        placed.push(table);
    }
    Ok(placed)
}
