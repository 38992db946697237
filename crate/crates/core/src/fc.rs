//! The finite/cofinite Boolean algebra on ℕ.
//!
//! An [`FcSet`] is either a finite subset of ℕ or the complement of one,
//! stored canonically by its finite support. This is the symbolic universe in
//! which the free-ultrafilter behaviour is computable: every finite partition
//! of ℕ into fc sets has exactly one cofinite block, and selecting that block
//! in every partition is the unique coherent choice over the infinite-blocks
//! diagram.

use std::collections::BTreeSet;
use std::fmt;

use crate::diagram::{Arrow, Diagram, DiagramObject, Thread};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FcKind {
    Finite,
    Cofinite,
}

/// A finite or cofinite subset of ℕ. `support` is the set itself when finite,
/// its complement when cofinite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FcSet {
    kind: FcKind,
    support: BTreeSet<u64>,
}

impl FcSet {
    pub fn finite<I: IntoIterator<Item = u64>>(elements: I) -> FcSet {
        FcSet {
            kind: FcKind::Finite,
            support: elements.into_iter().collect(),
        }
    }

    pub fn cofinite<I: IntoIterator<Item = u64>>(excluded: I) -> FcSet {
        FcSet {
            kind: FcKind::Cofinite,
            support: excluded.into_iter().collect(),
        }
    }

    pub fn naturals() -> FcSet {
        FcSet::cofinite([])
    }

    pub fn empty() -> FcSet {
        FcSet::finite([])
    }

    pub fn kind(&self) -> FcKind {
        self.kind
    }

    pub fn support(&self) -> &BTreeSet<u64> {
        &self.support
    }

    pub fn is_empty(&self) -> bool {
        self.kind == FcKind::Finite && self.support.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == FcKind::Cofinite
    }

    pub fn contains(&self, n: u64) -> bool {
        match self.kind {
            FcKind::Finite => self.support.contains(&n),
            FcKind::Cofinite => !self.support.contains(&n),
        }
    }

    pub fn complement(&self) -> FcSet {
        FcSet {
            kind: match self.kind {
                FcKind::Finite => FcKind::Cofinite,
                FcKind::Cofinite => FcKind::Finite,
            },
            support: self.support.clone(),
        }
    }

    pub fn intersect(&self, other: &FcSet) -> FcSet {
        match (self.kind, other.kind) {
            (FcKind::Finite, FcKind::Finite) => {
                FcSet::finite(self.support.intersection(&other.support).copied())
            }
            (FcKind::Finite, FcKind::Cofinite) => {
                FcSet::finite(self.support.difference(&other.support).copied())
            }
            (FcKind::Cofinite, FcKind::Finite) => other.intersect(self),
            (FcKind::Cofinite, FcKind::Cofinite) => {
                FcSet::cofinite(self.support.union(&other.support).copied())
            }
        }
    }

    pub fn union(&self, other: &FcSet) -> FcSet {
        self.complement().intersect(&other.complement()).complement()
    }

    pub fn is_subset(&self, other: &FcSet) -> bool {
        self.intersect(&other.complement()).is_empty()
    }

    pub fn is_disjoint(&self, other: &FcSet) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn render(&self) -> String {
        let items: Vec<String> = self.support.iter().map(|n| n.to_string()).collect();
        match self.kind {
            FcKind::Finite => format!("{{{}}}", items.join(",")),
            FcKind::Cofinite => format!("ℕ∖{{{}}}", items.join(",")),
        }
    }
}

impl fmt::Display for FcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A finite partition of ℕ into fc sets. Exactly one block is cofinite,
/// forced by finitely many blocks covering ℕ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcPartition {
    blocks: Vec<FcSet>,
}

impl FcPartition {
    pub fn new(mut blocks: Vec<FcSet>) -> Result<Self> {
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Input("empty block in fc partition".into()));
            }
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if !blocks[i].is_disjoint(&blocks[j]) {
                    return Err(Error::Input(format!(
                        "blocks {} and {} are not disjoint",
                        blocks[i].render(),
                        blocks[j].render()
                    )));
                }
            }
        }
        let union = blocks
            .iter()
            .fold(FcSet::empty(), |acc, b| acc.union(b));
        if union != FcSet::naturals() {
            return Err(Error::Input("blocks do not cover ℕ".into()));
        }
        let cofinite = blocks.iter().filter(|b| b.is_infinite()).count();
        if cofinite != 1 {
            return Err(Error::Input(format!(
                "expected exactly one cofinite block, found {cofinite}"
            )));
        }
        blocks.sort();
        Ok(FcPartition { blocks })
    }

    pub fn blocks(&self) -> &[FcSet] {
        &self.blocks
    }

    pub fn cofinite_block(&self) -> &FcSet {
        self.blocks
            .iter()
            .find(|b| b.is_infinite())
            .expect("fc partition invariant: one cofinite block")
    }

    pub fn canonical_string(&self) -> String {
        self.blocks
            .iter()
            .map(FcSet::render)
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Restriction of an fc partition to its infinite blocks: the singleton list
/// holding the cofinite block.
pub fn fc_infinite_blocks(p: &FcPartition) -> Vec<FcSet> {
    p.blocks.iter().filter(|b| b.is_infinite()).cloned().collect()
}

/// Builds the closed diagram of the infinite-blocks images of the given fc
/// partitions, with containment arrows between every comparable pair.
pub fn fc_infinite_diagram(partitions: &[FcPartition]) -> Result<Diagram<FcSet>> {
    let objects: Vec<DiagramObject<FcSet>> = partitions
        .iter()
        .enumerate()
        .map(|(i, p)| DiagramObject {
            name: format!("d{i}:{}", p.canonical_string()),
            labels: fc_infinite_blocks(p),
        })
        .collect();
    let mut arrows = Vec::new();
    for (i, oi) in objects.iter().enumerate() {
        for (j, oj) in objects.iter().enumerate() {
            if i == j {
                continue;
            }
            // Arrow i -> j when every label of i embeds in a unique label of j.
            let mut map = Vec::with_capacity(oi.labels.len());
            let mut ok = true;
            for b in &oi.labels {
                let mut targets = oj.labels.iter().enumerate().filter(|(_, c)| b.is_subset(c));
                match (targets.next(), targets.next()) {
                    (Some((k, _)), None) => map.push(k),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                arrows.push(Arrow { from: i, to: j, map });
            }
        }
    }
    let mut d = Diagram::new(objects, arrows)?;
    d.close();
    Ok(d)
}

/// The unique thread of a diagram of infinite-blocks images: pick the
/// cofinite label of every object. Coherence holds because a superset of a
/// cofinite set is cofinite; it is asserted against every arrow anyway.
pub fn fc_free_thread(d: &Diagram<FcSet>) -> Result<Thread> {
    let mut choices = Vec::with_capacity(d.objects().len());
    for o in d.objects() {
        let mut cofinite = o.labels.iter().enumerate().filter(|(_, b)| b.is_infinite());
        match (cofinite.next(), cofinite.next()) {
            (Some((i, _)), None) => choices.push(i),
            _ => {
                return Err(Error::Input(format!(
                    "object {} does not have a unique cofinite label",
                    o.name
                )))
            }
        }
    }
    let t = Thread(choices);
    if !d.is_thread(&t)? {
        return Err(Error::Thread(
            "cofinite selection is not coherent over the given arrows".into(),
        ));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_membership() {
        let s = FcSet::cofinite([0, 1, 2]);
        assert!(!s.contains(1));
        assert!(s.contains(3));
        assert!(s.is_infinite());
        assert!(FcSet::finite([5]).contains(5));
    }

    #[test]
    fn subset_rules() {
        assert!(FcSet::finite([1, 2]).is_subset(&FcSet::finite([1, 2, 3])));
        assert!(FcSet::finite([7]).is_subset(&FcSet::cofinite([0])));
        assert!(!FcSet::finite([0]).is_subset(&FcSet::cofinite([0])));
        assert!(!FcSet::naturals().is_subset(&FcSet::finite([1])));
        assert!(FcSet::cofinite([0, 1]).is_subset(&FcSet::cofinite([0])));
    }

    #[test]
    fn fc_partition_requires_cover_and_disjointness() {
        assert!(FcPartition::new(vec![FcSet::finite([0]), FcSet::cofinite([0])]).is_ok());
        assert!(FcPartition::new(vec![FcSet::finite([0]), FcSet::cofinite([0, 1])]).is_err());
        assert!(FcPartition::new(vec![FcSet::finite([0]), FcSet::naturals()]).is_err());
        assert!(FcPartition::new(vec![FcSet::finite([])]).is_err());
    }

    #[test]
    fn infinite_blocks_keep_only_the_cofinite_block() {
        let p = FcPartition::new(vec![
            FcSet::finite([0]),
            FcSet::finite([1, 2]),
            FcSet::cofinite([0, 1, 2]),
        ])
        .unwrap();
        assert_eq!(fc_infinite_blocks(&p), vec![FcSet::cofinite([0, 1, 2])]);

        let trivial = FcPartition::new(vec![FcSet::naturals()]).unwrap();
        assert_eq!(fc_infinite_blocks(&trivial), vec![FcSet::naturals()]);
    }

    #[test]
    fn free_thread_on_a_refinement_pair() {
        let coarse = FcPartition::new(vec![FcSet::finite([0, 1]), FcSet::cofinite([0, 1])]).unwrap();
        let fine = FcPartition::new(vec![
            FcSet::finite([0]),
            FcSet::finite([1]),
            FcSet::finite([2, 3]),
            FcSet::cofinite([0, 1, 2, 3]),
        ])
        .unwrap();
        let d = fc_infinite_diagram(&[fine, coarse]).unwrap();
        assert!(d.validate().is_empty());
        let t = fc_free_thread(&d).unwrap();
        for (o, &c) in d.objects().iter().zip(&t.0) {
            assert!(o.labels[c].is_infinite());
        }
        // Cross-check against the generic enumerator.
        assert_eq!(d.enumerate_threads().unwrap(), vec![t]);
    }

    #[test]
    fn free_thread_single_object() {
        let d = fc_infinite_diagram(&[FcPartition::new(vec![FcSet::naturals()]).unwrap()]).unwrap();
        let t = fc_free_thread(&d).unwrap();
        assert_eq!(d.objects()[0].labels[t.0[0]], FcSet::naturals());
    }

    #[test]
    fn psi_image_of_infinite_block_is_infinite() {
        // A superset of a cofinite set is cofinite.
        let a = FcSet::cofinite([0, 1, 2, 3]);
        let supersets = [FcSet::cofinite([0]), FcSet::cofinite([1, 3]), FcSet::naturals()];
        for s in supersets {
            assert!(a.is_subset(&s));
            assert!(s.is_infinite());
        }
    }
}
