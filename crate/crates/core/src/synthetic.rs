//! Seeded synthetic seating instances.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affinity::{Category, Relationship, RelationshipSpec};
use crate::capacity::TableSpec;
use crate::pipeline::Person;

#[derive(Debug, Clone)]
pub struct Instance {
    pub people: Vec<Person>,
    pub spec: RelationshipSpec,
    pub tables: TableSpec,
}

/// Instance with known ground-truth groups.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub instance: Instance,
    /// Group of each person, in `people` order.
    pub groups: Vec<usize>,
}

fn guests(n: usize) -> Vec<Person> {
    (0..n)
        .map(|i| Person::new(format!("g{i:02}"), format!("Guest {i}")))
        .collect()
}

/// Complete graph over groups of the given sizes: `intra` inside each group,
/// `inter` across groups. Group membership is shuffled over person ids.
pub fn planted_groups(
    sizes: &[usize],
    intra: Category,
    inter: Category,
    capacities: &[usize],
    seed: u64,
) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(g, &s)| std::iter::repeat_n(g, s))
        .collect();
    groups.shuffle(&mut rng);
    let people = guests(groups.len());
    let mut pairs = Vec::new();
    for i in 0..people.len() {
        for j in i + 1..people.len() {
            let c = if groups[i] == groups[j] { intra } else { inter };
            pairs.push(Relationship::new(&people[i].id, &people[j].id, c));
        }
    }
    PlantedInstance {
        instance: Instance {
            people,
            spec: RelationshipSpec::new(pairs).expect("pairs are unique"),
            tables: TableSpec::from_capacities(capacities).expect("capacities are positive"),
        },
        groups,
    }
}

/// Two planted groups of random sizes (total between 2 and `max_n`) with
/// uniform positive weight inside and uniform negative weight across. Both
/// tables have as many seats as the larger group.
pub fn separable_pair(max_n: usize, seed: u64) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n.max(2));
    let first = rng.random_range(1..n);
    let intra = *[Category::KeepTogether, Category::BetterTogether]
        .choose(&mut rng)
        .expect("non-empty");
    let inter = *[Category::KeepApart, Category::BetterApart]
        .choose(&mut rng)
        .expect("non-empty");
    let seats = first.max(n - first);
    planted_groups(&[first, n - first], intra, inter, &[seats, seats], rng.random())
}

/// Random relationships over at most `max_n` guests with random table
/// capacities whose total covers everyone.
pub fn random_instance(max_n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_n.max(1));
    let people = guests(n);
    let density: f64 = rng.random_range(0.05..0.6);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                let c = Category::ALL[rng.random_range(0..4)];
                pairs.push(Relationship::new(&people[i].id, &people[j].id, c));
            }
        }
    }
    let k = rng.random_range(1..=n.min(8));
    let mut caps = vec![1usize; k];
    let extra = rng.random_range(n.saturating_sub(k)..=n + 3);
    for _ in 0..extra {
        caps[rng.random_range(0..k)] += 1;
    }
    Instance {
        people,
        spec: RelationshipSpec::new(pairs).expect("pairs are unique"),
        tables: TableSpec::from_capacities(&caps).expect("capacities are positive"),
    }
}

/// A 58-guest reception for ten tables of ten: friend circles that want to
/// sit together, a handful of disliked guests with few friends, and a few
/// guests nobody mentioned. Use with the neutral fill disabled so the
/// unmentioned guests are isolated.
pub fn reception(seed: u64) -> Instance {
    const GUESTS: usize = 58;
    const ISOLATED: usize = 4;
    const DISLIKED: usize = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let people = guests(GUESTS);
    let mut order: Vec<usize> = (0..GUESTS).collect();
    order.shuffle(&mut rng);
    let disliked: Vec<usize> = order[..DISLIKED].to_vec();
    let social: Vec<usize> = order[DISLIKED + ISOLATED..].to_vec();

    let mut pairs: std::collections::BTreeMap<(usize, usize), Category> = Default::default();
    let mut put = |a: usize, b: usize, c: Category| {
        pairs.entry((a.min(b), a.max(b))).or_insert(c);
    };

    // friend circles of 2 to 7
    let mut circles = Vec::new();
    let mut rest = &social[..];
    while !rest.is_empty() {
        let size = rng.random_range(2..=7).min(rest.len());
        let (circle, tail) = rest.split_at(size);
        circles.push(circle.to_vec());
        rest = tail;
    }
    for circle in &circles {
        for (a, &i) in circle.iter().enumerate() {
            for &j in &circle[a + 1..] {
                let c = if rng.random_bool(0.5) {
                    Category::KeepTogether
                } else {
                    Category::BetterTogether
                };
                put(i, j, c);
            }
        }
    }
    // loose ties between circles
    for w in circles.windows(2) {
        if rng.random_bool(0.5) {
            put(w[0][0], w[1][0], Category::BetterTogether);
        }
    }
    for &v in &disliked {
        for _ in 0..rng.random_range(3..8) {
            let target = social[rng.random_range(0..social.len())];
            let c = if rng.random_bool(0.5) {
                Category::KeepApart
            } else {
                Category::BetterApart
            };
            put(v, target, c);
        }
        if rng.random_bool(0.3) {
            let other = disliked[rng.random_range(0..disliked.len())];
            if other != v {
                put(v, other, Category::BetterTogether);
            }
        }
    }

    let spec = RelationshipSpec::new(
        pairs
            .into_iter()
            .map(|((a, b), c)| Relationship::new(&people[a].id, &people[b].id, c))
            .collect(),
    )
    .expect("pairs are unique");
    Instance {
        people,
        spec,
        tables: TableSpec::from_capacities(&[10; 10]).expect("capacities are positive"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        let a = reception(3);
        let b = reception(3);
        assert_eq!(a.spec, b.spec);
        let p = separable_pair(8, 11);
        assert_eq!(p.groups, separable_pair(8, 11).groups);
        assert!(p.groups.len() <= 8);
    }

    #[test]
    fn random_instances_are_feasible() {
        for seed in 0..50 {
            let inst = random_instance(30, seed);
            assert!(inst.tables.total_capacity() >= inst.people.len());
        }
    }
}
