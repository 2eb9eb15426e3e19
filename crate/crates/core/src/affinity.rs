//! Relationship categories, their edge weights, and contradiction checks.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

pub const STRONG_WEIGHT: f64 = 10.0;
pub const MILD_WEIGHT: f64 = 1.0;
/// Affinity assumed between people with no stated relationship.
pub const DEFAULT_NEUTRAL_WEIGHT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    KeepTogether,
    BetterTogether,
    BetterApart,
    KeepApart,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::KeepTogether,
        Category::BetterTogether,
        Category::BetterApart,
        Category::KeepApart,
    ];

    pub fn weight(self) -> f64 {
        match self {
            Category::KeepTogether => STRONG_WEIGHT,
            Category::BetterTogether => MILD_WEIGHT,
            Category::BetterApart => -MILD_WEIGHT,
            Category::KeepApart => -STRONG_WEIGHT,
        }
    }

    pub fn is_negative(self) -> bool {
        self.weight() < 0.0
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::KeepTogether => "keep_together",
            Category::BetterTogether => "better_together",
            Category::BetterApart => "better_apart",
            Category::KeepApart => "keep_apart",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCategory(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relationship {
    pub person_a: String,
    pub person_b: String,
    pub category: Category,
}

impl Relationship {
    pub fn new(a: impl Into<String>, b: impl Into<String>, category: Category) -> Self {
        Self {
            person_a: a.into(),
            person_b: b.into(),
            category,
        }
    }
}

/// Symmetric pairwise relationships; each unordered pair appears once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationshipSpec {
    pairs: Vec<Relationship>,
}

impl RelationshipSpec {
    pub fn new(pairs: Vec<Relationship>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &pairs {
            if r.person_a == r.person_b {
                return Err(Error::SelfLoop(r.person_a.clone()));
            }
            let key = if r.person_a < r.person_b {
                (r.person_a.as_str(), r.person_b.as_str())
            } else {
                (r.person_b.as_str(), r.person_a.as_str())
            };
            if !seen.insert(key) {
                return Err(Error::DuplicatePair(r.person_a.clone(), r.person_b.clone()));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[Relationship] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Specified relationships map to ±10 / ±1; every other distinct pair gets
/// `neutral_weight` (0 disables the fill).
pub fn encode_relationships<S: AsRef<str>>(
    people: &[S],
    spec: &RelationshipSpec,
    neutral_weight: f64,
) -> Result<SignedGraph> {
    if !neutral_weight.is_finite() || neutral_weight < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "neutral weight must be finite and non-negative, got {neutral_weight}"
        )));
    }
    let edges: Vec<(&str, &str, f64)> = spec
        .pairs
        .iter()
        .map(|r| (r.person_a.as_str(), r.person_b.as_str(), r.category.weight()))
        .collect();
    let graph = SignedGraph::from_edges(people, &edges)?;
    if neutral_weight == 0.0 {
        return Ok(graph);
    }
    let mut specified = vec![false; graph.len() * graph.len()];
    let n = graph.len();
    for r in &spec.pairs {
        let i = graph.index_of(&r.person_a).expect("validated above");
        let j = graph.index_of(&r.person_b).expect("validated above");
        specified[i * n + j] = true;
        specified[j * n + i] = true;
    }
    let mut weights = graph.weights().clone();
    for i in 0..n {
        for j in 0..n {
            if i != j && !specified[i * n + j] {
                weights[(i, j)] = neutral_weight;
            }
        }
    }
    SignedGraph::from_matrix(graph.vertices(), weights)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionWarning {
    /// The keep-together chain joining the conflicting pair, endpoint to endpoint.
    pub people: Vec<String>,
    pub conflict: Relationship,
    pub description: String,
}

/// Flags every negative relationship whose two people are joined by a chain
/// of keep-together relationships.
pub fn detect_contradictions(spec: &RelationshipSpec) -> Vec<ContradictionWarning> {
    let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
    for r in spec.pairs.iter().filter(|r| r.category == Category::KeepTogether) {
        adjacency.entry(&r.person_a).or_default().push(&r.person_b);
        adjacency.entry(&r.person_b).or_default().push(&r.person_a);
    }

    spec.pairs
        .iter()
        .filter(|r| r.category.is_negative())
        .filter_map(|r| {
            let chain = keep_together_path(&adjacency, &r.person_a, &r.person_b)?;
            let description = format!(
                "{} must sit together, but {} and {} are marked {}",
                chain.join(" -> "),
                r.person_a,
                r.person_b,
                r.category
            );
            Some(ContradictionWarning {
                people: chain,
                conflict: r.clone(),
                description,
            })
        })
        .collect()
}

fn keep_together_path(adjacency: &HashMap<&str, Vec<&str>>, from: &str, to: &str) -> Option<Vec<String>> {
    let mut parent: HashMap<&str, &str> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    parent.insert(from, from);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to.to_owned()];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur.to_owned());
            }
            path.reverse();
            return Some(path);
        }
        for &w in adjacency.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            if !parent.contains_key(w) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use Category::*;

    fn spec(pairs: &[(&str, &str, Category)]) -> RelationshipSpec {
        RelationshipSpec::new(pairs.iter().map(|&(a, b, c)| Relationship::new(a, b, c)).collect())
            .unwrap()
    }

    #[test]
    fn category_weights() {
        let people = ["Buffy", "Xander", "A", "B"];
        let g = encode_relationships(
            &people,
            &spec(&[("Buffy", "Xander", KeepTogether), ("A", "B", BetterApart)]),
            DEFAULT_NEUTRAL_WEIGHT,
        )
        .unwrap();
        assert_eq!(g.weight(0, 1), 10.0);
        assert_eq!(g.weight(1, 0), 10.0);
        assert_eq!(g.weight(2, 3), -1.0);
        assert_eq!(g.weight(0, 2), 0.1);
        assert_eq!(g.weight(0, 0), 0.0);
    }

    #[test]
    fn zero_fill_disables_neutral_edges() {
        let g = encode_relationships(&["a", "b", "c"], &spec(&[("a", "b", KeepApart)]), 0.0).unwrap();
        assert_eq!(g.weight(0, 1), -10.0);
        assert_eq!(g.weight(0, 2), 0.0);
        assert!(encode_relationships(&["a"], &RelationshipSpec::default(), -1.0).is_err());
    }

    #[test]
    fn spec_rejects_duplicates_either_direction() {
        let r = RelationshipSpec::new(vec![
            Relationship::new("a", "b", KeepTogether),
            Relationship::new("b", "a", KeepApart),
        ]);
        assert_eq!(r, Err(Error::DuplicatePair("b".into(), "a".into())));
        assert_eq!(
            RelationshipSpec::new(vec![Relationship::new("a", "a", KeepApart)]),
            Err(Error::SelfLoop("a".into()))
        );
    }

    #[test]
    fn category_names_round_trip() {
        for c in Category::ALL {
            assert_eq!(c.as_str().parse::<Category>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
        assert_eq!("keep_close".parse::<Category>(), Err(Error::UnknownCategory("keep_close".into())));
    }

    #[test]
    fn must_sit_with_both_but_they_clash() {
        let w = detect_contradictions(&spec(&[
            ("A", "B", KeepTogether),
            ("A", "C", KeepTogether),
            ("B", "C", KeepApart),
        ]));
        assert_eq!(w.len(), 1);
        let mut people = w[0].people.clone();
        people.sort();
        assert_eq!(people, vec!["A", "B", "C"]);
        assert_eq!(w[0].people, vec!["B", "A", "C"]);
    }

    #[test]
    fn disjoint_groups_do_not_conflict() {
        let w = detect_contradictions(&spec(&[("A", "B", KeepTogether), ("C", "D", KeepApart)]));
        assert!(w.is_empty());
    }

    #[test]
    fn closure_follows_chains() {
        let w = detect_contradictions(&spec(&[
            ("A", "B", KeepTogether),
            ("B", "C", KeepTogether),
            ("C", "D", KeepTogether),
            ("A", "D", BetterApart),
        ]));
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].people, vec!["A", "B", "C", "D"]);
    }

    #[test]
    fn soft_positive_links_are_not_chained() {
        let w = detect_contradictions(&spec(&[
            ("A", "B", BetterTogether),
            ("A", "C", KeepTogether),
            ("B", "C", KeepApart),
        ]));
        assert!(w.is_empty());
    }
}
