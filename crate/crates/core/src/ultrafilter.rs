//! Ultrafilter families on finite ground sets, the axiom checker, the trace
//! of an ultrafilter through a partition, and the correspondence between
//! ultrafilters and threads of the full partition diagram.

use std::collections::BTreeSet;

use crate::diagram::{FpDiagram, Thread};
use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::partition::{Block, Partition};

/// Ground sets above this size make the explicit member family (up to `2^2^n`
/// candidates) unreasonable to scan.
pub const AXIOM_CHECK_GUARD: usize = 5;

/// Ceiling for the `2^(2^n)` brute-force family scan.
pub const BRUTE_FORCE_GUARD: usize = 4;

/// An explicit family of subsets of a finite ground set. Construction does
/// not require the ultrafilter axioms; [`check_axioms`] is the source of
/// truth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UltrafilterFamily {
    ground: GroundSet,
    members: BTreeSet<Block>,
}

impl UltrafilterFamily {
    pub fn new(ground: GroundSet, members: BTreeSet<Block>) -> Result<Self> {
        let full = ground.full_mask();
        for m in &members {
            if m.mask() & !full != 0 {
                return Err(Error::Input(
                    "member is not a subset of the ground set".into(),
                ));
            }
        }
        Ok(UltrafilterFamily { ground, members })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn members(&self) -> &BTreeSet<Block> {
        &self.members
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.members.contains(b)
    }
}

/// The ultrafilter of all sets containing a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrincipalUltrafilter<'g> {
    pub ground: &'g GroundSet,
    pub point: usize,
}

impl<'g> PrincipalUltrafilter<'g> {
    pub fn new(ground: &'g GroundSet, point: usize) -> Result<Self> {
        if point >= ground.len() {
            return Err(Error::Input(format!(
                "point index {point} outside ground set of size {}",
                ground.len()
            )));
        }
        Ok(PrincipalUltrafilter { ground, point })
    }

    /// The explicit member family, `2^(n-1)` sets. Guarded because of its size.
    pub fn expand(&self) -> Result<UltrafilterFamily> {
        if self.ground.len() > AXIOM_CHECK_GUARD {
            return Err(Error::Resource {
                what: "ground-set size for explicit expansion",
                actual: self.ground.len(),
                limit: AXIOM_CHECK_GUARD,
            });
        }
        let full = self.ground.full_mask();
        let bit = 1u64 << self.point;
        // The full mask is contiguous low bits, so subsets are just 0..=full.
        let mut members = BTreeSet::new();
        for m in 0..=full {
            if m & bit != 0 {
                members.insert(Block::from_mask(m));
            }
        }
        Ok(UltrafilterFamily {
            ground: self.ground.clone(),
            members,
        })
    }
}

/// One axiom failure, with the witnessing set(s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    /// Axiom 1: the empty set is a member.
    ContainsEmpty,
    /// Axiom 2: `member` is in the family but `superset` is not.
    NotUpwardClosed { member: Block, superset: Block },
    /// Axiom 3: both members are present but their intersection is not.
    NotIntersectionClosed { a: Block, b: Block },
    /// Axiom 4: neither `a` nor its complement is a member.
    Undecided { a: Block },
}

impl AxiomFailure {
    pub fn axiom(&self) -> u8 {
        match self {
            AxiomFailure::ContainsEmpty => 1,
            AxiomFailure::NotUpwardClosed { .. } => 2,
            AxiomFailure::NotIntersectionClosed { .. } => 3,
            AxiomFailure::Undecided { .. } => 4,
        }
    }

    pub fn describe(&self, ground: &GroundSet) -> String {
        match self {
            AxiomFailure::ContainsEmpty => "axiom 1 fails: the empty set is a member".into(),
            AxiomFailure::NotUpwardClosed { member, superset } => format!(
                "axiom 2 fails: {} is a member but its superset {} is not",
                member.render(ground),
                superset.render(ground)
            ),
            AxiomFailure::NotIntersectionClosed { a, b } => format!(
                "axiom 3 fails: {} and {} are members but their intersection is not",
                a.render(ground),
                b.render(ground)
            ),
            AxiomFailure::Undecided { a } => format!(
                "axiom 4 fails: neither {} nor its complement is a member",
                a.render(ground)
            ),
        }
    }
}

/// Per-axiom report; all failures are collected, not just the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates all four ultrafilter axioms on an explicit family.
pub fn check_axioms(u: &UltrafilterFamily) -> Result<AxiomReport> {
    let n = u.ground.len();
    if n > AXIOM_CHECK_GUARD {
        return Err(Error::Resource {
            what: "ground-set size for axiom check",
            actual: n,
            limit: AXIOM_CHECK_GUARD,
        });
    }
    let full = u.ground.full_mask();
    let mut failures = Vec::new();
    if u.members.contains(&Block::EMPTY) {
        failures.push(AxiomFailure::ContainsEmpty);
    }
    for m in &u.members {
        // Scan all supersets of m inside the ground set.
        let rest = full & !m.mask();
        let mut extra = rest;
        loop {
            let sup = Block::from_mask(m.mask() | extra);
            if !u.members.contains(&sup) {
                failures.push(AxiomFailure::NotUpwardClosed {
                    member: *m,
                    superset: sup,
                });
            }
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & rest;
        }
    }
    for a in &u.members {
        for b in &u.members {
            if a <= b && !u.members.contains(&a.intersect(*b)) {
                failures.push(AxiomFailure::NotIntersectionClosed { a: *a, b: *b });
            }
        }
    }
    let mut m = 0u64;
    loop {
        let a = Block::from_mask(m);
        if !u.members.contains(&a) && !u.members.contains(&a.complement(&u.ground)) {
            failures.push(AxiomFailure::Undecided { a });
        }
        if m == full {
            break;
        }
        m += 1;
    }
    Ok(AxiomReport { failures })
}

/// The unique block of a full partition containing the ultrafilter's point.
/// Uniqueness is verified by scanning every block.
pub fn trace(u: &PrincipalUltrafilter<'_>, p: &Partition) -> Result<Block> {
    if p.ground() != u.ground {
        return Err(Error::Input("partition over a different ground set".into()));
    }
    if !p.is_full() {
        return Err(Error::Input("trace requires a full partition".into()));
    }
    let mut containing = p.blocks().iter().filter(|b| b.contains(u.point));
    match (containing.next(), containing.next()) {
        (Some(b), None) => Ok(*b),
        _ => Err(Error::Input(format!(
            "no unique block contains {}",
            u.ground.atom(u.point)
        ))),
    }
}

/// The thread over the full partition diagram picking each partition's block
/// containing the point.
pub fn phi(u: &PrincipalUltrafilter<'_>, fp: &FpDiagram) -> Result<Thread> {
    if &fp.ground != u.ground {
        return Err(Error::Input("diagram over a different ground set".into()));
    }
    let mut choices = Vec::with_capacity(fp.partitions.len());
    for (i, p) in fp.partitions.iter().enumerate() {
        let block = trace(u, p)?;
        let label = fp.diagram.objects()[i]
            .labels
            .iter()
            .position(|b| *b == block)
            .expect("trace block is a label of its own partition");
        choices.push(label);
    }
    let t = Thread(choices);
    debug_assert!(fp.diagram.is_thread(&t).unwrap());
    Ok(t)
}

/// The family of all blocks chosen by a thread of the full partition diagram.
pub fn phi_inverse(t: &Thread, fp: &FpDiagram) -> Result<UltrafilterFamily> {
    if !fp.diagram.is_thread(t)? {
        return Err(Error::Thread(
            "assignment is not coherent over the full partition diagram".into(),
        ));
    }
    let members = fp
        .diagram
        .objects()
        .iter()
        .zip(&t.0)
        .map(|(o, &c)| o.labels[c])
        .collect();
    UltrafilterFamily::new(fp.ground.clone(), members)
}

/// Scans all `2^(2^n)` families of subsets and keeps those passing the axiom
/// checker. Independent of the principal/thread machinery by construction.
pub fn enumerate_ultrafilters_bruteforce(ground: &GroundSet) -> Result<Vec<UltrafilterFamily>> {
    let n = ground.len();
    if n > BRUTE_FORCE_GUARD {
        return Err(Error::Resource {
            what: "ground-set size for brute-force ultrafilter scan",
            actual: n,
            limit: BRUTE_FORCE_GUARD,
        });
    }
    let subsets = 1u32 << n; // up to 16
    let full = (subsets - 1) as u64;
    let family_count: u64 = 1 << subsets;
    let mut found = Vec::new();
    'family: for fam in 0..family_count {
        let has = |s: u64| fam & (1u64 << s) != 0;
        // Axiom 1.
        if has(0) {
            continue;
        }
        for a in 0..subsets as u64 {
            if !has(a) {
                // Axiom 4.
                if !has(full & !a) {
                    continue 'family;
                }
                continue;
            }
            for b in 0..subsets as u64 {
                // Axiom 2 (upward closure) and axiom 3 (intersections).
                if a & b == a && !has(b) {
                    continue 'family;
                }
                if has(b) && !has(a & b) {
                    continue 'family;
                }
            }
        }
        let members = (0..subsets as u64)
            .filter(|&s| has(s))
            .map(Block::from_mask)
            .collect();
        found.push(UltrafilterFamily {
            ground: ground.clone(),
            members,
        });
    }
    Ok(found)
}

/// Restriction of a partition to its infinite blocks. Every block of a
/// partition over a finite ground set is finite, so the image is the empty
/// partial partition.
pub fn drop_finite_blocks(p: &Partition) -> Partition {
    p.restrict(|_| false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_partitions, DEFAULT_SIZE_GUARD};

    fn g(n: usize) -> GroundSet {
        GroundSet::numbered(n).unwrap()
    }

    fn named(atoms: &[&str]) -> GroundSet {
        GroundSet::new(atoms.iter().copied()).unwrap()
    }

    #[test]
    fn principal_expansion_passes_axioms() {
        let g2 = named(&["a", "b"]);
        let u = PrincipalUltrafilter::new(&g2, 0).unwrap().expand().unwrap();
        // {{a},{a,b}}
        assert_eq!(u.members().len(), 2);
        assert!(check_axioms(&u).unwrap().passed());
    }

    #[test]
    fn whole_set_only_fails_axiom_four() {
        let g2 = named(&["a", "b"]);
        let members = [Block::from_mask(g2.full_mask())].into_iter().collect();
        let u = UltrafilterFamily::new(g2, members).unwrap();
        let report = check_axioms(&u).unwrap();
        assert!(!report.passed());
        let axioms: BTreeSet<u8> = report.failures.iter().map(|f| f.axiom()).collect();
        assert_eq!(axioms, [4u8].into_iter().collect());
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, AxiomFailure::Undecided { a } if a.len() == 1)));
    }

    #[test]
    fn empty_member_fails_axiom_one() {
        let g1 = g(1);
        let members = [Block::EMPTY, Block::singleton(0)].into_iter().collect();
        let u = UltrafilterFamily::new(g1, members).unwrap();
        let report = check_axioms(&u).unwrap();
        assert!(report.failures.iter().any(|f| f.axiom() == 1));
    }

    #[test]
    fn check_rejects_member_outside_ground() {
        let g1 = g(1);
        let err = UltrafilterFamily::new(g1, [Block::singleton(3)].into_iter().collect());
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn trace_picks_the_containing_block() {
        let g3 = named(&["a", "b", "c"]);
        let p = Partition::new(
            g3.clone(),
            vec![Block::from_indices([0, 1]), Block::singleton(2)],
        )
        .unwrap();
        let u = PrincipalUltrafilter::new(&g3, 0).unwrap();
        assert_eq!(trace(&u, &p).unwrap(), Block::from_indices([0, 1]));

        let u = PrincipalUltrafilter::new(&g3, 2).unwrap();
        assert_eq!(trace(&u, &Partition::discrete(g3.clone())).unwrap(), Block::singleton(2));
    }

    #[test]
    fn trace_unique_for_every_partition() {
        // Oracle: exhaustive membership scan over all partitions of a 4-set.
        let g4 = g(4);
        for p in enumerate_partitions(&g4, DEFAULT_SIZE_GUARD).unwrap() {
            for point in 0..4 {
                let hits = p.blocks().iter().filter(|b| b.contains(point)).count();
                assert_eq!(hits, 1);
                let u = PrincipalUltrafilter::new(&g4, point).unwrap();
                assert!(trace(&u, &p).unwrap().contains(point));
            }
        }
    }

    #[test]
    fn phi_on_two_elements() {
        let g2 = named(&["a", "b"]);
        let fp = FpDiagram::build(&g2, DEFAULT_SIZE_GUARD).unwrap();
        let u = PrincipalUltrafilter::new(&g2, 0).unwrap();
        let t = phi(&u, &fp).unwrap();
        // The coarse partition {{a,b}} maps to {a,b}, the discrete one to {a}.
        for (i, p) in fp.partitions.iter().enumerate() {
            let chosen = fp.diagram.objects()[i].labels[t.0[i]];
            if p.blocks().len() == 1 {
                assert_eq!(chosen, Block::from_mask(g2.full_mask()));
            } else {
                assert_eq!(chosen, Block::singleton(0));
            }
        }
    }

    #[test]
    fn phi_lands_in_the_limit() {
        let g3 = g(3);
        let fp = FpDiagram::build(&g3, DEFAULT_SIZE_GUARD).unwrap();
        let threads = fp.diagram.enumerate_threads().unwrap();
        for point in 0..3 {
            let u = PrincipalUltrafilter::new(&g3, point).unwrap();
            let t = phi(&u, &fp).unwrap();
            assert!(threads.contains(&t));
        }
    }

    #[test]
    fn phi_injective_via_discrete_partition() {
        let g4 = g(4);
        let fp = FpDiagram::build(&g4, DEFAULT_SIZE_GUARD).unwrap();
        let discrete_idx = fp
            .partitions
            .iter()
            .position(|p| p.blocks().len() == 4)
            .unwrap();
        let threads: Vec<Thread> = (0..4)
            .map(|pt| phi(&PrincipalUltrafilter::new(&g4, pt).unwrap(), &fp).unwrap())
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(threads[i].0[discrete_idx], threads[j].0[discrete_idx]);
            }
        }
    }

    #[test]
    fn phi_inverse_recovers_the_principal_expansion() {
        let g2 = named(&["a", "b"]);
        let fp = FpDiagram::build(&g2, DEFAULT_SIZE_GUARD).unwrap();
        let u = PrincipalUltrafilter::new(&g2, 0).unwrap();
        let t = phi(&u, &fp).unwrap();
        let family = phi_inverse(&t, &fp).unwrap();
        assert_eq!(family, u.expand().unwrap());
    }

    #[test]
    fn phi_roundtrips_on_three_elements() {
        let g3 = g(3);
        let fp = FpDiagram::build(&g3, DEFAULT_SIZE_GUARD).unwrap();
        let threads = fp.diagram.enumerate_threads().unwrap();
        assert_eq!(threads.len(), 3);
        let expansions: BTreeSet<UltrafilterFamily> = (0..3)
            .map(|pt| PrincipalUltrafilter::new(&g3, pt).unwrap().expand().unwrap())
            .collect();
        let reconstructed: BTreeSet<UltrafilterFamily> = threads
            .iter()
            .map(|t| phi_inverse(t, &fp).unwrap())
            .collect();
        assert_eq!(expansions, reconstructed);
        for t in &threads {
            let family = phi_inverse(t, &fp).unwrap();
            let point = family
                .members()
                .iter()
                .find(|b| b.len() == 1)
                .unwrap()
                .min_index()
                .unwrap();
            let u = PrincipalUltrafilter::new(&g3, point).unwrap();
            assert_eq!(&phi(&u, &fp).unwrap(), t);
        }
    }

    #[test]
    fn phi_inverse_singleton_ground() {
        let g1 = g(1);
        let fp = FpDiagram::build(&g1, DEFAULT_SIZE_GUARD).unwrap();
        let threads = fp.diagram.enumerate_threads().unwrap();
        assert_eq!(threads.len(), 1);
        let family = phi_inverse(&threads[0], &fp).unwrap();
        assert_eq!(
            family.members().iter().copied().collect::<Vec<_>>(),
            vec![Block::singleton(0)]
        );
    }

    #[test]
    fn phi_inverse_rejects_incoherent_assignment() {
        let g3 = g(3);
        let fp = FpDiagram::build(&g3, DEFAULT_SIZE_GUARD).unwrap();
        let mut t = fp.diagram.enumerate_threads().unwrap()[0].clone();
        let obj = fp
            .partitions
            .iter()
            .position(|p| p.blocks().len() == 3)
            .unwrap();
        t.0[obj] = (t.0[obj] + 1) % 3;
        assert!(matches!(phi_inverse(&t, &fp), Err(Error::Thread(_))));
    }

    #[test]
    fn brute_force_counts() {
        assert_eq!(enumerate_ultrafilters_bruteforce(&g(0)).unwrap().len(), 0);
        assert_eq!(enumerate_ultrafilters_bruteforce(&g(1)).unwrap().len(), 1);
        assert_eq!(enumerate_ultrafilters_bruteforce(&g(2)).unwrap().len(), 2);
        assert_eq!(enumerate_ultrafilters_bruteforce(&g(3)).unwrap().len(), 3);
    }

    #[test]
    fn brute_force_agrees_with_axiom_checker() {
        let g2 = g(2);
        let found = enumerate_ultrafilters_bruteforce(&g2).unwrap();
        for u in &found {
            assert!(check_axioms(u).unwrap().passed());
        }
        // And everything it skipped really fails: cross-check the count
        // against a direct scan with the explicit checker.
        let mut direct = 0;
        for fam in 0u64..16 {
            let members: BTreeSet<Block> =
                (0u64..4).filter(|s| fam & (1 << s) != 0).map(Block::from_mask).collect();
            let u = UltrafilterFamily::new(g2.clone(), members).unwrap();
            if check_axioms(&u).unwrap().passed() {
                direct += 1;
            }
        }
        assert_eq!(direct, found.len());
    }

    #[test]
    fn dropping_finite_blocks_empties_finite_partitions() {
        let g3 = g(3);
        for p in enumerate_partitions(&g3, DEFAULT_SIZE_GUARD).unwrap() {
            let image = drop_finite_blocks(&p);
            assert!(image.blocks().is_empty());
        }
    }
}
