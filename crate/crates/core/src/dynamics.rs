//! Finite dynamical systems `T: X → X`, orbit tail/cycle decomposition, the
//! blocks visited infinitely often, and the inverse limit they generate.
//!
//! Over a finite state set "visited infinitely often" is decided
//! structurally: a block is visited infinitely often from `x` iff it meets
//! the cycle of the orbit of `x`. The bounded-simulation route is kept in the
//! test suites as the independent oracle.

use crate::diagram::{Diagram, FpDiagram, Thread};
use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::partition::{Block, Partition};

/// A finite state set with a total self-map and a start point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSystem {
    states: GroundSet,
    /// `map[i]` is the successor state index of state `i`.
    map: Vec<usize>,
    start: usize,
}

impl OrbitSystem {
    pub fn new(states: GroundSet, map: Vec<usize>, start: usize) -> Result<Self> {
        if map.len() != states.len() {
            return Err(Error::Input(format!(
                "map defined on {} states, state set has {}",
                map.len(),
                states.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= states.len()) {
            return Err(Error::Input(format!("map target {bad} out of range")));
        }
        if start >= states.len() {
            return Err(Error::Input(format!("start state {start} out of range")));
        }
        Ok(OrbitSystem { states, map, start })
    }

    pub fn states(&self) -> &GroundSet {
        &self.states
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn step(&self, state: usize) -> usize {
        self.map[state]
    }

    /// The orbit as an eventually periodic sequence.
    pub fn orbit_sequence(&self) -> EventuallyPeriodicSequence {
        let (tail, cycle) = orbit_decompose(self);
        EventuallyPeriodicSequence::new(tail, cycle).expect("cycle is nonempty")
    }
}

/// A function ℕ → states given by a finite prefix and a repeating cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodicSequence {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl EventuallyPeriodicSequence {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Input("cycle must be nonempty".into()));
        }
        Ok(EventuallyPeriodicSequence { prefix, cycle })
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn value(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// The blocks of a partition visited infinitely often, together with the
/// partition they come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaBlockSet {
    pub partition: Partition,
    pub blocks: Vec<Block>,
}

/// Splits the orbit of the start point into its non-repeating tail and its
/// cycle. Iterating the map replays the tail and then the cycle forever.
pub fn orbit_decompose(sys: &OrbitSystem) -> (Vec<usize>, Vec<usize>) {
    let mut first_seen = vec![usize::MAX; sys.states.len()];
    let mut order = Vec::new();
    let mut state = sys.start;
    loop {
        if first_seen[state] != usize::MAX {
            let split = first_seen[state];
            let cycle = order.split_off(split);
            return (order, cycle);
        }
        first_seen[state] = order.len();
        order.push(state);
        state = sys.map[state];
    }
}

/// The blocks of `p` visited infinitely often by the orbit: exactly those
/// meeting the cycle.
pub fn delta_x(sys: &OrbitSystem, p: &Partition) -> Result<OmegaBlockSet> {
    if p.ground() != sys.states() {
        return Err(Error::Input("partition over a different state set".into()));
    }
    if !p.is_full() {
        return Err(Error::Input("delta requires a full partition".into()));
    }
    let (_, cycle) = orbit_decompose(sys);
    let cycle_mask = Block::from_indices(cycle.iter().copied());
    let blocks: Vec<Block> = p
        .blocks()
        .iter()
        .copied()
        .filter(|b| !b.intersect(cycle_mask).is_empty())
        .collect();
    debug_assert!(!blocks.is_empty());
    Ok(OmegaBlockSet {
        partition: p.clone(),
        blocks,
    })
}

/// The blocks of `p` with infinite preimage under the sequence: exactly those
/// meeting the cycle part.
pub fn delta_f(
    seq: &EventuallyPeriodicSequence,
    p: &Partition,
) -> Result<OmegaBlockSet> {
    if !p.is_full() {
        return Err(Error::Input("delta requires a full partition".into()));
    }
    let n = p.ground().len();
    if seq.prefix.iter().chain(&seq.cycle).any(|&s| s >= n) {
        return Err(Error::Input("sequence value outside the value space".into()));
    }
    let cycle_mask = Block::from_indices(seq.cycle.iter().copied());
    let blocks = p
        .blocks()
        .iter()
        .copied()
        .filter(|b| !b.intersect(cycle_mask).is_empty())
        .collect();
    Ok(OmegaBlockSet {
        partition: p.clone(),
        blocks,
    })
}

/// The inverse limit of the infinitely-visited-blocks diagram over all of
/// `FP(states)`, together with the diagram itself.
pub struct OrbitLimit {
    pub fp: FpDiagram,
    pub diagram: Diagram<Block>,
    pub threads: Vec<Thread>,
}

/// Builds the diagram with objects `delta_x(sys, Δ)` for every full partition
/// `Δ`, arrows the restricted ψ maps, and enumerates its threads. The result
/// is nonempty, with one thread per cycle state.
pub fn orbit_limit(sys: &OrbitSystem, guard: usize) -> Result<OrbitLimit> {
    let fp = FpDiagram::build(sys.states(), guard)?;
    let (_, cycle) = orbit_decompose(sys);
    let cycle_mask = Block::from_indices(cycle.iter().copied());
    // Restricted ψ stays well defined: a superset of an infinitely-visited
    // block meets the cycle too, so the containing block is kept as a label.
    let diagram = fp.restricted(|_, b| !b.intersect(cycle_mask).is_empty())?;
    let threads = diagram.enumerate_threads()?;
    Ok(OrbitLimit {
        fp,
        diagram,
        threads,
    })
}
