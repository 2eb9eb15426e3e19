//! End-to-end constrained signed spectral clustering, plan metrics, and an
//! exhaustive reference solver for small instances.

use std::collections::{BTreeMap, HashMap, HashSet};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::affinity::{self, RelationshipSpec, DEFAULT_NEUTRAL_WEIGHT};
use crate::capacity::{self, TableSpec};
use crate::discretize::{self, Indicator, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::spectral;

/// Positive edges at or above this weight connect a table's members.
pub const DEFAULT_COMPONENT_THRESHOLD: f64 = 1.0;
/// Upper bound on `K^N` for [`brute_force_oracle`].
pub const ORACLE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub id: String,
    pub name: String,
}

impl Person {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Termination threshold; `None` picks `1e-6 * sqrt(N)`.
    pub epsilon: Option<f64>,
    pub max_iter: usize,
    pub neutral_weight: f64,
    pub seed: u64,
    pub component_threshold: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            epsilon: None,
            max_iter: DEFAULT_MAX_ITER,
            neutral_weight: DEFAULT_NEUTRAL_WEIGHT,
            seed: 0,
            component_threshold: DEFAULT_COMPONENT_THRESHOLD,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = self.epsilon {
            if !eps.is_finite() || eps <= 0.0 {
                return Err(Error::InvalidConfig(format!("epsilon must be positive, got {eps}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !self.neutral_weight.is_finite() || self.neutral_weight < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "neutral_weight must be non-negative, got {}",
                self.neutral_weight
            )));
        }
        if !self.component_threshold.is_finite() {
            return Err(Error::InvalidConfig("component_threshold must be finite".into()));
        }
        Ok(())
    }

    fn effective(&self, core_size: usize) -> EffectiveConfig {
        EffectiveConfig {
            epsilon: self
                .epsilon
                .unwrap_or_else(|| discretize::default_epsilon(core_size.max(1))),
            max_iter: self.max_iter,
            neutral_weight: self.neutral_weight,
            seed: self.seed,
            component_threshold: self.component_threshold,
        }
    }
}

/// The configuration a plan was actually produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub epsilon: f64,
    pub max_iter: usize,
    pub neutral_weight: f64,
    pub seed: u64,
    pub component_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    Contradiction,
    EmptyTable,
    ZeroVolumeTable,
    DegenerateObjective,
    DegenerateScaling,
    UniformMembership,
    FewerPeopleThanTables,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub people: Vec<String>,
}

impl Warning {
    fn new(kind: WarningKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            people: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table_id: String,
    pub capacity: usize,
    pub seated: usize,
    pub volume: f64,
    pub components: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub assignments: BTreeMap<String, String>,
    pub objective: f64,
    /// Whether the solver's tables group people exactly as the optimum does.
    pub same_partition: bool,
}

/// A complete seating. This is also the plan file and API response schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatingPlan {
    /// Person id to table id.
    pub assignments: BTreeMap<String, String>,
    pub per_table: Vec<TableReport>,
    /// Signed normalized cut of the plan; `None` when every table has zero volume.
    pub objective: Option<f64>,
    pub warnings: Vec<Warning>,
    pub seed: u64,
    pub config: EffectiveConfig,
    pub residual_history: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NcutObjective {
    pub value: f64,
    /// Clusters with no members.
    pub empty: Vec<usize>,
    /// Non-empty clusters whose signed volume is zero.
    pub zero_volume: Vec<usize>,
}

impl NcutObjective {
    /// False when no cluster contributed a term.
    pub fn is_defined(&self, k: usize) -> bool {
        self.empty.len() + self.zero_volume.len() < k
    }
}

/// `sum_j (X^j)' L X^j / (X^j)' D X^j` over non-empty clusters with nonzero
/// signed volume. `labels[i]` is the cluster of vertex `i`.
pub fn signed_ncut_objective(graph: &SignedGraph, labels: &[usize], k: usize) -> Result<NcutObjective> {
    let n = graph.len();
    if labels.len() != n {
        return Err(Error::Shape(format!("{} labels for {} vertices", labels.len(), n)));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
        return Err(Error::Shape(format!("label {bad} out of range for {k} clusters")));
    }
    let degrees = graph.signed_degrees();
    let mut cut = vec![0.0; k];
    let mut volume = vec![0.0; k];
    let mut size = vec![0usize; k];
    for i in 0..n {
        let c = labels[i];
        let inside: f64 = (0..n).filter(|&l| labels[l] == c).map(|l| graph.weight(i, l)).sum();
        cut[c] += degrees.get(i) - inside;
        volume[c] += degrees.get(i);
        size[c] += 1;
    }
    let mut out = NcutObjective {
        value: 0.0,
        empty: Vec::new(),
        zero_volume: Vec::new(),
    };
    for c in 0..k {
        if size[c] == 0 {
            out.empty.push(c);
        } else if volume[c] == 0.0 {
            out.zero_volume.push(c);
        } else {
            out.value += cut[c] / volume[c];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableMetrics {
    pub seated: usize,
    /// Sum of pairwise weights among members.
    pub volume: f64,
    pub components: usize,
}

/// Seated count, volume and positive-edge component count of one table.
/// Pass the graph of specified weights (no neutral fill).
pub fn table_metrics(graph: &SignedGraph, members: &[usize], threshold: f64) -> Result<TableMetrics> {
    if members.is_empty() {
        return Ok(TableMetrics {
            seated: 0,
            volume: 0.0,
            components: 0,
        });
    }
    let mut volume = 0.0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            volume += graph.weight(i, j);
        }
    }
    Ok(TableMetrics {
        seated: members.len(),
        volume,
        components: graph.positive_components(members, threshold)?.count,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub labels: Vec<usize>,
    pub objective: f64,
}

/// Exhaustive minimum of the signed normalized cut over capacity-respecting
/// assignments. Ties go to the lexicographically smallest label vector.
pub fn brute_force_oracle(graph: &SignedGraph, tables: &TableSpec) -> Result<OracleResult> {
    let n = graph.len();
    let k = tables.len();
    tables.check_feasible(n)?;
    let too_large = Error::OracleTooLarge {
        k,
        n,
        limit: ORACLE_LIMIT,
    };
    let count = u32::try_from(n)
        .ok()
        .and_then(|e| (k as u64).checked_pow(e))
        .ok_or_else(|| too_large.clone())?;
    if count > ORACLE_LIMIT {
        return Err(too_large);
    }

    let caps = tables.capacities();
    let mut labels = vec![0usize; n];
    let mut occ = vec![0usize; k];
    let mut best: Option<OracleResult> = None;
    enumerate(graph, &caps, 0, &mut labels, &mut occ, &mut best)?;
    best.ok_or_else(|| Error::Internal("no feasible assignment despite sufficient capacity".into()))
}

fn enumerate(
    graph: &SignedGraph,
    caps: &[usize],
    i: usize,
    labels: &mut [usize],
    occ: &mut [usize],
    best: &mut Option<OracleResult>,
) -> Result<()> {
    if i == labels.len() {
        let value = signed_ncut_objective(graph, labels, caps.len())?.value;
        if best.as_ref().is_none_or(|b| value < b.objective) {
            *best = Some(OracleResult {
                labels: labels.to_vec(),
                objective: value,
            });
        }
        return Ok(());
    }
    for c in 0..caps.len() {
        if occ[c] < caps[c] {
            occ[c] += 1;
            labels[i] = c;
            enumerate(graph, caps, i + 1, labels, occ, best)?;
            occ[c] -= 1;
        }
    }
    Ok(())
}

fn check_people(people: &[Person]) -> Result<()> {
    if people.is_empty() {
        return Err(Error::EmptyGuestList);
    }
    let mut seen = HashSet::with_capacity(people.len());
    for p in people {
        if !seen.insert(p.id.as_str()) {
            return Err(Error::DuplicatePerson(p.id.clone()));
        }
    }
    Ok(())
}

fn ids(people: &[Person]) -> Vec<&str> {
    people.iter().map(|p| p.id.as_str()).collect()
}

/// Partitions `people` into the given tables.
///
/// Runs relationship encoding, isolated-vertex split, the spectral
/// relaxation, discretization, eviction of over-capacity members,
/// deferred-acceptance reassignment and random placement of isolated
/// people, then scores the result. Deterministic for a fixed seed.
pub fn solve_constrained(
    people: &[Person],
    spec: &RelationshipSpec,
    tables: &TableSpec,
    config: &SolveConfig,
) -> Result<SeatingPlan> {
    check_people(people)?;
    config.validate()?;
    tables.check_feasible(people.len())?;

    let ids = ids(people);
    let graph = affinity::encode_relationships(&ids, spec, config.neutral_weight)?;
    let mut warnings: Vec<Warning> = affinity::detect_contradictions(spec)
        .into_iter()
        .map(|c| Warning {
            kind: WarningKind::Contradiction,
            message: c.description,
            people: c.people,
        })
        .collect();

    let k = tables.len();
    let n = people.len();
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut history = Vec::new();
    let core_size;

    match graph.split_isolated() {
        Ok(split) => {
            core_size = split.core.len();
            let effective = config.effective(core_size);
            let clusters = k.min(core_size);
            if clusters < k {
                warnings.push(Warning::new(
                    WarningKind::FewerPeopleThanTables,
                    format!("{core_size} connected people for {k} tables; clustering into {clusters}"),
                ));
            }
            let core_labels =
                seat_core(&split.core, clusters, tables, &effective, &mut warnings, &mut history)?;
            for (c, &orig) in split.core_indices.iter().enumerate() {
                labels[orig] = Some(core_labels[c]);
            }
        }
        Err(Error::AllIsolated) => core_size = 0,
        Err(e) => return Err(e),
    }
    let effective = config.effective(core_size);

    let mut occ = capacity::occupancy(&labels, k);
    let isolated: Vec<usize> = (0..n).filter(|&i| labels[i].is_none()).collect();
    let placed = capacity::place_isolated(&mut occ, isolated.len(), tables, config.seed)?;
    for (&i, t) in isolated.iter().zip(placed) {
        labels[i] = Some(t);
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .map(|l| l.ok_or_else(|| Error::Internal("person left unseated".into())))
        .collect::<Result<_>>()?;

    let assignments = people
        .iter()
        .zip(&labels)
        .map(|(p, &t)| (p.id.clone(), tables.tables()[t].table_id.clone()))
        .collect();
    let scored = score_labels(people, spec, tables, &effective, &graph, &labels)?;
    warnings.extend(scored.warnings);

    Ok(SeatingPlan {
        assignments,
        per_table: scored.per_table,
        objective: scored.objective,
        warnings,
        seed: config.seed,
        config: effective,
        residual_history: history,
        oracle: None,
    })
}

// Clusters the non-isolated people and enforces capacities on them.
fn seat_core(
    core: &SignedGraph,
    clusters: usize,
    tables: &TableSpec,
    config: &EffectiveConfig,
    warnings: &mut Vec<Warning>,
    history: &mut Vec<f64>,
) -> Result<Vec<usize>> {
    let k = tables.len();
    let relaxed = spectral::relaxed_solution(core, clusters)?;
    let state = discretize::alternate_minimize(&relaxed.z, config.epsilon, config.max_iter)?;
    history.clone_from(&state.history);
    for &c in &state.degenerate_columns {
        warnings.push(Warning::new(
            WarningKind::DegenerateScaling,
            format!("cluster {c} vanished during discretization; its scaling was floored"),
        ));
    }

    let soft = discretize::probabilistic_solution(&state.aligned(&relaxed.z));
    for &row in &soft.uniform_rows {
        let mut w = Warning::new(
            WarningKind::UniformMembership,
            "no positive membership for any table; treated as indifferent",
        );
        w.people.push(core.vertices()[row].clone());
        warnings.push(w);
    }
    // Pad to one column per table; tables beyond the cluster count start empty.
    let mut padded = DMatrix::zeros(core.len(), k);
    padded.columns_mut(0, clusters).copy_from(&soft.p);
    let soft = discretize::ProbabilisticSolution {
        p: padded,
        uniform_rows: soft.uniform_rows,
    };
    let indicator = Indicator::new(state.indicator.labels().to_vec(), k)?;

    let (mut seated, stack) = capacity::evict_overflow(&indicator, &soft, tables)?;
    if !stack.is_empty() {
        let scores = capacity::affinity_scores(core, &seated, &stack, tables);
        let occ = capacity::occupancy(&seated, k);
        let residual: Vec<usize> = (0..k).map(|t| tables.capacity(t) - occ[t]).collect();
        for (person, table) in capacity::deferred_acceptance(&stack, &scores, &residual)? {
            seated[person] = Some(table);
        }
    }
    seated
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::Internal("stacked person was not matched".into())))
        .collect()
}

/// Per-table metrics and objective of an explicit seating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanScore {
    pub per_table: Vec<TableReport>,
    pub objective: Option<f64>,
    pub warnings: Vec<Warning>,
}

fn score_labels(
    people: &[Person],
    spec: &RelationshipSpec,
    tables: &TableSpec,
    config: &EffectiveConfig,
    graph: &SignedGraph,
    labels: &[usize],
) -> Result<PlanScore> {
    let k = tables.len();
    let ids = ids(people);
    let specified = affinity::encode_relationships(&ids, spec, 0.0)?;
    let objective = signed_ncut_objective(graph, labels, k)?;
    let mut warnings = Vec::new();
    let mut per_table = Vec::with_capacity(k);
    for (t, table) in tables.tables().iter().enumerate() {
        let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == t).collect();
        let m = table_metrics(&specified, &members, config.component_threshold)?;
        if members.is_empty() {
            warnings.push(Warning::new(
                WarningKind::EmptyTable,
                format!("table {} has nobody seated", table.table_id),
            ));
        } else if objective.zero_volume.contains(&t) {
            warnings.push(Warning::new(
                WarningKind::ZeroVolumeTable,
                format!(
                    "table {} has zero signed volume and is left out of the objective",
                    table.table_id
                ),
            ));
        }
        per_table.push(TableReport {
            table_id: table.table_id.clone(),
            capacity: table.capacity,
            seated: m.seated,
            volume: m.volume,
            components: m.components,
            members: members.iter().map(|&i| people[i].id.clone()).collect(),
        });
    }
    let defined = objective.is_defined(k);
    if !defined {
        warnings.push(Warning::new(
            WarningKind::DegenerateObjective,
            "no table has positive signed volume; objective is undefined",
        ));
    }
    Ok(PlanScore {
        per_table,
        objective: defined.then_some(objective.value),
        warnings,
    })
}

/// Recomputes metrics and objective for an explicit seating, validating
/// that it is total and respects capacities.
pub fn score_assignment(
    people: &[Person],
    spec: &RelationshipSpec,
    tables: &TableSpec,
    config: &SolveConfig,
    assignments: &BTreeMap<String, String>,
) -> Result<PlanScore> {
    check_people(people)?;
    config.validate()?;
    let labels = assignment_labels(people, tables, assignments)?;
    let ids = ids(people);
    let graph = affinity::encode_relationships(&ids, spec, config.neutral_weight)?;
    let core_size = graph.signed_degrees().iter().filter(|&d| d > 0.0).count();
    score_labels(people, spec, tables, &config.effective(core_size), &graph, &labels)
}

/// Table index per person, validating totality and capacities.
pub fn assignment_labels(
    people: &[Person],
    tables: &TableSpec,
    assignments: &BTreeMap<String, String>,
) -> Result<Vec<usize>> {
    let known: HashMap<&str, ()> = people.iter().map(|p| (p.id.as_str(), ())).collect();
    if let Some(extra) = assignments.keys().find(|id| !known.contains_key(id.as_str())) {
        return Err(Error::UnknownPerson(extra.clone()));
    }
    let mut occ = vec![0usize; tables.len()];
    let mut labels = Vec::with_capacity(people.len());
    for p in people {
        let table_id = assignments
            .get(&p.id)
            .ok_or_else(|| Error::InvalidConfig(format!("person `{}` has no table", p.id)))?;
        let t = tables
            .index_of(table_id)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown table `{table_id}`")))?;
        occ[t] += 1;
        if occ[t] > tables.capacity(t) {
            return Err(Error::InvalidConfig(format!(
                "table `{table_id}` is over capacity ({} seats)",
                tables.capacity(t)
            )));
        }
        labels.push(t);
    }
    Ok(labels)
}

/// Same partition up to a relabeling of tables.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    a.iter().zip(b).all(|(x, y)| {
        *fwd.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x
    })
}

/// Runs the exhaustive oracle on the same encoded graph the solver used.
pub fn oracle_comparison(
    people: &[Person],
    spec: &RelationshipSpec,
    tables: &TableSpec,
    config: &SolveConfig,
    plan: &SeatingPlan,
) -> Result<OracleComparison> {
    let ids = ids(people);
    let graph = affinity::encode_relationships(&ids, spec, config.neutral_weight)?;
    let best = brute_force_oracle(&graph, tables)?;
    let solver = assignment_labels(people, tables, &plan.assignments)?;
    Ok(OracleComparison {
        assignments: people
            .iter()
            .zip(&best.labels)
            .map(|(p, &t)| (p.id.clone(), tables.tables()[t].table_id.clone()))
            .collect(),
        objective: best.objective,
        same_partition: same_partition(&solver, &best.labels),
    })
}
