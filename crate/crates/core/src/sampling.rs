//! Seeded random generators for the property and acceptance suites: random
//! partitions, sub-diagrams of the full partition diagram, functional-graph
//! systems, and finite/cofinite partition chains.

use rand::Rng;

use crate::diagram::Diagram;
use crate::dynamics::OrbitSystem;
use crate::error::Result;
use crate::fc::{FcPartition, FcSet};
use crate::ground::GroundSet;
use crate::partition::{enumerate_partitions, Block, Partition};

/// A uniformly random restricted-growth string, decoded as a partition.
pub fn random_full_partition(rng: &mut impl Rng, ground: &GroundSet) -> Partition {
    let n = ground.len();
    let mut blocks: Vec<Block> = Vec::new();
    for i in 0..n {
        let choice = rng.gen_range(0..=blocks.len());
        if choice == blocks.len() {
            blocks.push(Block::singleton(i));
        } else {
            blocks[choice] = blocks[choice].union(Block::singleton(i));
        }
    }
    Partition::new(ground.clone(), blocks).expect("generated blocks are disjoint")
}

/// A random lawful sub-diagram of the full partition diagram: a subset of
/// `FP(ground)` with all ψ arrows between comparable pairs, optionally
/// restricted to the blocks meeting a random witness set (which keeps the
/// restricted maps defined). The label product is capped by dropping objects.
pub fn random_subdiagram(
    rng: &mut impl Rng,
    ground: &GroundSet,
    max_objects: usize,
    product_cap: u64,
    guard: usize,
) -> Result<Diagram<Block>> {
    let all: Vec<Partition> = enumerate_partitions(ground, guard)?.collect();
    let mut chosen: Vec<Partition> = Vec::new();
    let count = rng.gen_range(1..=max_objects.min(all.len()));
    while chosen.len() < count {
        let p = all[rng.gen_range(0..all.len())].clone();
        if !chosen.contains(&p) {
            chosen.push(p);
        }
    }
    let witness = if rng.gen_bool(0.3) && !ground.is_empty() {
        let mask = rng.gen_range(1..=ground.full_mask());
        Block::from_mask(mask)
    } else {
        Block::from_mask(ground.full_mask())
    };
    loop {
        let restricted: Vec<(String, Vec<Block>)> = chosen
            .iter()
            .map(|p| {
                let labels = p
                    .blocks()
                    .iter()
                    .copied()
                    .filter(|b| !b.intersect(witness).is_empty())
                    .collect();
                (p.canonical_string(), labels)
            })
            .collect();
        let product: u64 = restricted
            .iter()
            .map(|(_, l)| l.len() as u64)
            .product::<u64>();
        if product <= product_cap || chosen.len() == 1 {
            break;
        }
        let drop = rng.gen_range(0..chosen.len());
        chosen.remove(drop);
    }
    let objects: Vec<crate::diagram::DiagramObject<Block>> = chosen
        .iter()
        .map(|p| crate::diagram::DiagramObject {
            name: p.canonical_string(),
            labels: p
                .blocks()
                .iter()
                .copied()
                .filter(|b| !b.intersect(witness).is_empty())
                .collect(),
        })
        .collect();
    let mut arrows = Vec::new();
    for (i, p) in chosen.iter().enumerate() {
        for (j, q) in chosen.iter().enumerate() {
            if i == j || !crate::partition::leq(p, q)? {
                continue;
            }
            let mut map = Vec::new();
            let mut defined = true;
            for b in &objects[i].labels {
                match objects[j].labels.iter().position(|c| b.is_subset(*c)) {
                    Some(k) => map.push(k),
                    None => {
                        defined = false;
                        break;
                    }
                }
            }
            if defined {
                arrows.push(crate::diagram::Arrow { from: i, to: j, map });
            }
        }
    }
    let mut d = Diagram::new(objects, arrows)?;
    d.close();
    Ok(d)
}

/// A uniformly random functional graph with a random start point.
pub fn random_orbit_system(rng: &mut impl Rng, states: usize) -> OrbitSystem {
    let ground = GroundSet::numbered(states).expect("small state set");
    let map = (0..states).map(|_| rng.gen_range(0..states)).collect();
    let start = rng.gen_range(0..states);
    OrbitSystem::new(ground, map, start).expect("total by construction")
}

/// A random refinement chain of fc partitions, finest last: starting from
/// `{ℕ}`, each step either carves a finite chunk out of the cofinite block or
/// splits an existing finite block.
pub fn random_fc_chain(rng: &mut impl Rng, steps: usize) -> Vec<FcPartition> {
    let mut chain = vec![FcPartition::new(vec![FcSet::naturals()]).unwrap()];
    let mut next_fresh: u64 = 0;
    for _ in 0..steps {
        let current = chain.last().unwrap();
        let mut blocks: Vec<FcSet> = current.blocks().to_vec();
        let finite: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_infinite() && b.support().len() >= 2)
            .map(|(i, _)| i)
            .collect();
        if !finite.is_empty() && rng.gen_bool(0.4) {
            // Split a finite block in two.
            let i = finite[rng.gen_range(0..finite.len())];
            let elements: Vec<u64> = blocks[i].support().iter().copied().collect();
            let pivot = rng.gen_range(1..elements.len());
            blocks[i] = FcSet::finite(elements[..pivot].iter().copied());
            blocks.push(FcSet::finite(elements[pivot..].iter().copied()));
        } else {
            // Carve fresh elements out of the cofinite block.
            let cofinite = blocks.iter().position(|b| b.is_infinite()).unwrap();
            let carve: Vec<u64> = (0..rng.gen_range(1..=3u64))
                .map(|_| {
                    let v = next_fresh;
                    next_fresh += 1;
                    v
                })
                .collect();
            let excluded: Vec<u64> = blocks[cofinite]
                .support()
                .iter()
                .copied()
                .chain(carve.iter().copied())
                .collect();
            blocks[cofinite] = FcSet::cofinite(excluded);
            blocks.push(FcSet::finite(carve));
        }
        chain.push(FcPartition::new(blocks).expect("refinement step stays a partition"));
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_partitions_are_full() {
        let mut rng = StdRng::seed_from_u64(7);
        let ground = GroundSet::numbered(5).unwrap();
        for _ in 0..50 {
            let p = random_full_partition(&mut rng, &ground);
            assert!(p.is_full());
        }
    }

    #[test]
    fn random_subdiagrams_are_lawful() {
        let mut rng = StdRng::seed_from_u64(11);
        let ground = GroundSet::numbered(4).unwrap();
        for _ in 0..25 {
            let d = random_subdiagram(&mut rng, &ground, 8, 1_000_000, 9).unwrap();
            assert!(d.validate().is_empty(), "{:?}", d.validate());
        }
    }

    #[test]
    fn fc_chains_refine() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20 {
            let chain = random_fc_chain(&mut rng, 5);
            for window in chain.windows(2) {
                // Later partitions refine earlier ones.
                for b in window[1].blocks() {
                    let containers = window[0]
                        .blocks()
                        .iter()
                        .filter(|c| b.is_subset(c))
                        .count();
                    assert_eq!(containers, 1);
                }
            }
        }
    }
}
