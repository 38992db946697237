//! Inverse families of finite label sets and exact enumeration of their
//! inverse limits.
//!
//! A [`Diagram`] holds finitely many objects, each a finite list of labels,
//! and arrows given by total maps between label sets. After [`Diagram::close`]
//! the arrow set contains all identities and composites, and
//! [`Diagram::validate`] checks the inverse-family laws. A [`Thread`] is one
//! label choice per object compatible with every arrow; [`enumerate_threads`]
//! returns all of them, which may legitimately be none.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::partition::{self, Block, Partition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramObject<L> {
    pub name: String,
    pub labels: Vec<L>,
}

/// An arrow between diagram objects, as a total map on label indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    /// `map[i]` is the label index in `to` of the image of label `i` of `from`.
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram<L> {
    objects: Vec<DiagramObject<L>>,
    arrows: Vec<Arrow>,
}

/// One violation of the inverse-family laws, reported by [`Diagram::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramIssue {
    MissingIdentity { object: String },
    NonIdentitySelfArrow { object: String },
    MissingComposite { from: String, via: String, to: String },
    NonCommuting { from: String, via: String, to: String },
}

impl fmt::Display for DiagramIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramIssue::MissingIdentity { object } => {
                write!(f, "object {object} has no identity arrow")
            }
            DiagramIssue::NonIdentitySelfArrow { object } => {
                write!(f, "self-arrow on {object} is not the identity")
            }
            DiagramIssue::MissingComposite { from, via, to } => {
                write!(f, "missing composite arrow {from} -> {via} -> {to}")
            }
            DiagramIssue::NonCommuting { from, via, to } => {
                write!(f, "arrow {from} -> {to} disagrees with the composite through {via}")
            }
        }
    }
}

/// One label choice per object, indexed in object order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Thread(pub Vec<usize>);

impl<L> Diagram<L> {
    pub fn objects(&self) -> &[DiagramObject<L>] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }
}

impl<L: Clone + Eq> Diagram<L> {
    /// Builds a diagram, checking name uniqueness, map totality and that at
    /// most one arrow connects any ordered pair of objects.
    pub fn new(objects: Vec<DiagramObject<L>>, arrows: Vec<Arrow>) -> Result<Self> {
        for (i, o) in objects.iter().enumerate() {
            if objects[..i].iter().any(|p| p.name == o.name) {
                return Err(Error::Diagram(format!("duplicate object name {:?}", o.name)));
            }
        }
        let mut seen_pairs = std::collections::BTreeSet::new();
        for a in &arrows {
            if a.from >= objects.len() || a.to >= objects.len() {
                return Err(Error::Diagram("arrow endpoint out of range".into()));
            }
            if a.map.len() != objects[a.from].labels.len() {
                return Err(Error::Diagram(format!(
                    "arrow {} -> {} is not total on labels",
                    objects[a.from].name, objects[a.to].name
                )));
            }
            if a.map.iter().any(|&j| j >= objects[a.to].labels.len()) {
                return Err(Error::Diagram(format!(
                    "arrow {} -> {} maps outside the target labels",
                    objects[a.from].name, objects[a.to].name
                )));
            }
            if !seen_pairs.insert((a.from, a.to)) {
                return Err(Error::Diagram(format!(
                    "more than one arrow from {} to {}",
                    objects[a.from].name, objects[a.to].name
                )));
            }
        }
        Ok(Diagram { objects, arrows })
    }

    fn arrow_index(&self) -> BTreeMap<(usize, usize), usize> {
        self.arrows
            .iter()
            .enumerate()
            .map(|(i, a)| ((a.from, a.to), i))
            .collect()
    }

    /// Adds identity arrows and all missing composites of existing arrows.
    ///
    /// Users typically supply only generating arrows; the inverse-family laws
    /// are stated over the closure. If a composite conflicts with an arrow
    /// already present, the existing arrow is kept and [`Diagram::validate`]
    /// reports the disagreement.
    pub fn close(&mut self) {
        let mut index = self.arrow_index();
        for i in 0..self.objects.len() {
            if !index.contains_key(&(i, i)) {
                index.insert((i, i), self.arrows.len());
                self.arrows.push(Arrow {
                    from: i,
                    to: i,
                    map: (0..self.objects[i].labels.len()).collect(),
                });
            }
        }
        let mut arrows_from: Vec<Vec<usize>> = vec![Vec::new(); self.objects.len()];
        let mut arrows_to: Vec<Vec<usize>> = vec![Vec::new(); self.objects.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            if a.from != a.to {
                arrows_from[a.from].push(i);
                arrows_to[a.to].push(i);
            }
        }
        // Worklist of arrows not yet composed against their neighbours.
        let mut pending: Vec<usize> = (0..self.arrows.len()).collect();
        while let Some(fi) = pending.pop() {
            let (from, to) = (self.arrows[fi].from, self.arrows[fi].to);
            if from == to {
                continue;
            }
            for gi in arrows_from[to].clone() {
                let g_to = self.arrows[gi].to;
                if index.contains_key(&(from, g_to)) {
                    continue;
                }
                let map = self.arrows[fi]
                    .map
                    .iter()
                    .map(|&i| self.arrows[gi].map[i])
                    .collect();
                let id = self.arrows.len();
                index.insert((from, g_to), id);
                arrows_from[from].push(id);
                arrows_to[g_to].push(id);
                pending.push(id);
                self.arrows.push(Arrow { from, to: g_to, map });
            }
            for gi in arrows_to[from].clone() {
                let g_from = self.arrows[gi].from;
                if index.contains_key(&(g_from, to)) {
                    continue;
                }
                let map = self.arrows[gi]
                    .map
                    .iter()
                    .map(|&i| self.arrows[fi].map[i])
                    .collect();
                let id = self.arrows.len();
                index.insert((g_from, to), id);
                arrows_from[g_from].push(id);
                arrows_to[to].push(id);
                pending.push(id);
                self.arrows.push(Arrow { from: g_from, to, map });
            }
        }
    }

    /// Checks the inverse-family laws and reports every violation.
    pub fn validate(&self) -> Vec<DiagramIssue> {
        let index = self.arrow_index();
        let mut issues = Vec::new();
        for (i, o) in self.objects.iter().enumerate() {
            match index.get(&(i, i)) {
                None => issues.push(DiagramIssue::MissingIdentity {
                    object: o.name.clone(),
                }),
                Some(&ai) => {
                    if self.arrows[ai].map.iter().enumerate().any(|(k, &v)| k != v) {
                        issues.push(DiagramIssue::NonIdentitySelfArrow {
                            object: o.name.clone(),
                        });
                    }
                }
            }
        }
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); self.objects.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            by_source[a.from].push(i);
        }
        for f in &self.arrows {
            for &gi in &by_source[f.to] {
                let g = &self.arrows[gi];
                let names = || {
                    (
                        self.objects[f.from].name.clone(),
                        self.objects[f.to].name.clone(),
                        self.objects[g.to].name.clone(),
                    )
                };
                match index.get(&(f.from, g.to)) {
                    None => {
                        let (from, via, to) = names();
                        issues.push(DiagramIssue::MissingComposite { from, via, to });
                    }
                    Some(&hi) => {
                        let h = &self.arrows[hi];
                        let commutes = f.map.iter().enumerate().all(|(i, &j)| g.map[j] == h.map[i]);
                        if !commutes {
                            let (from, via, to) = names();
                            issues.push(DiagramIssue::NonCommuting { from, via, to });
                        }
                    }
                }
            }
        }
        issues.sort_by_key(|i| i.to_string());
        issues.dedup();
        issues
    }

    fn require_valid(&self) -> Result<()> {
        let issues = self.validate();
        if issues.is_empty() {
            Ok(())
        } else {
            let text: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
            Err(Error::Diagram(text.join("; ")))
        }
    }

    /// True iff the assignment satisfies every arrow constraint.
    pub fn is_thread(&self, t: &Thread) -> Result<bool> {
        if t.0.len() != self.objects.len() {
            return Err(Error::Input(format!(
                "assignment covers {} objects, diagram has {}",
                t.0.len(),
                self.objects.len()
            )));
        }
        for (i, &choice) in t.0.iter().enumerate() {
            if choice >= self.objects[i].labels.len() {
                return Err(Error::Input(format!(
                    "choice out of range at object {}",
                    self.objects[i].name
                )));
            }
        }
        Ok(self.arrows.iter().all(|a| a.map[t.0[a.from]] == t.0[a.to]))
    }

    /// All threads of the diagram, in lexicographic order of label choices.
    ///
    /// The search assigns the most constraining objects first and propagates
    /// forced choices along arrows; in a diagram containing a finest object
    /// every thread is determined by its choice there.
    pub fn enumerate_threads(&self) -> Result<Vec<Thread>> {
        self.require_valid()?;
        let n = self.objects.len();
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ai, a) in self.arrows.iter().enumerate() {
            if a.from != a.to {
                outgoing[a.from].push(ai);
                incoming[a.to].push(ai);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| {
            (
                usize::MAX - outgoing[i].len(),
                usize::MAX - self.objects[i].labels.len(),
                i,
            )
        });

        let mut assignment: Vec<Option<usize>> = vec![None; n];
        let mut results = Vec::new();
        self.search(
            &order,
            0,
            &mut assignment,
            &outgoing,
            &incoming,
            &mut results,
        );
        results.sort();
        Ok(results)
    }

    /// Assign `obj := label` and propagate forced choices. Returns the trail
    /// of objects assigned, or `None` on conflict (trail already undone).
    fn propagate(
        &self,
        obj: usize,
        label: usize,
        assignment: &mut Vec<Option<usize>>,
        outgoing: &[Vec<usize>],
        incoming: &[Vec<usize>],
    ) -> Option<Vec<usize>> {
        let mut trail = Vec::new();
        let mut queue = vec![(obj, label)];
        while let Some((o, v)) = queue.pop() {
            match assignment[o] {
                Some(w) => {
                    if w != v {
                        for &t in &trail {
                            assignment[t] = None;
                        }
                        return None;
                    }
                    continue;
                }
                None => {
                    assignment[o] = Some(v);
                    trail.push(o);
                }
            }
            for &ai in &outgoing[o] {
                let a = &self.arrows[ai];
                queue.push((a.to, a.map[v]));
            }
            for &ai in &incoming[o] {
                let a = &self.arrows[ai];
                if let Some(w) = assignment[a.from] {
                    if a.map[w] != v {
                        for &t in &trail {
                            assignment[t] = None;
                        }
                        return None;
                    }
                }
            }
        }
        Some(trail)
    }

    fn search(
        &self,
        order: &[usize],
        pos: usize,
        assignment: &mut Vec<Option<usize>>,
        outgoing: &[Vec<usize>],
        incoming: &[Vec<usize>],
        results: &mut Vec<Thread>,
    ) {
        let Some(&obj) = order.get(pos) else {
            let choices = assignment.iter().map(|c| c.unwrap()).collect();
            results.push(Thread(choices));
            return;
        };
        if assignment[obj].is_some() {
            self.search(order, pos + 1, assignment, outgoing, incoming, results);
            return;
        }
        for label in 0..self.objects[obj].labels.len() {
            if let Some(trail) = self.propagate(obj, label, assignment, outgoing, incoming) {
                self.search(order, pos + 1, assignment, outgoing, incoming, results);
                for t in trail {
                    assignment[t] = None;
                }
            }
        }
    }

    /// The mediating map of the universal property: for each apex element,
    /// the thread collected from the cone legs. Fails if the legs do not
    /// commute with some arrow.
    pub fn mediating_map(&self, cone: &Cone) -> Result<Vec<Thread>> {
        self.require_valid()?;
        if cone.legs.len() != self.objects.len() {
            return Err(Error::Cone(format!(
                "cone has legs for {} objects, diagram has {}",
                cone.legs.len(),
                self.objects.len()
            )));
        }
        for (i, leg) in cone.legs.iter().enumerate() {
            if leg.len() != cone.apex_size {
                return Err(Error::Cone(format!(
                    "leg at {} is not total on the apex",
                    self.objects[i].name
                )));
            }
            if leg.iter().any(|&v| v >= self.objects[i].labels.len()) {
                return Err(Error::Cone(format!(
                    "leg at {} maps outside the labels",
                    self.objects[i].name
                )));
            }
        }
        for a in &self.arrows {
            for y in 0..cone.apex_size {
                if a.map[cone.legs[a.from][y]] != cone.legs[a.to][y] {
                    return Err(Error::Cone(format!(
                        "legs do not commute with arrow {} -> {}",
                        self.objects[a.from].name, self.objects[a.to].name
                    )));
                }
            }
        }
        let mut threads = Vec::with_capacity(cone.apex_size);
        for y in 0..cone.apex_size {
            let t = Thread(self.objects.iter().enumerate().map(|(i, _)| cone.legs[i][y]).collect());
            debug_assert!(self.is_thread(&t).unwrap());
            threads.push(t);
        }
        Ok(threads)
    }
}

/// A cone over a diagram: a finite apex with one leg per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex_size: usize,
    /// `legs[object][apex_element]` is a label index of that object.
    pub legs: Vec<Vec<usize>>,
}

impl Cone {
    /// The projection cone whose apex is a given set of threads.
    pub fn from_threads<L>(diagram: &Diagram<L>, threads: &[Thread]) -> Cone {
        let legs = (0..diagram.objects.len())
            .map(|i| threads.iter().map(|t| t.0[i]).collect())
            .collect();
        Cone {
            apex_size: threads.len(),
            legs,
        }
    }
}

/// The full diagram over `FP(ground)`: one object per full partition (labels
/// are its blocks), one ψ arrow per comparable pair. Objects are named by the
/// canonical partition string and kept in enumeration order.
#[derive(Debug, Clone)]
pub struct FpDiagram {
    pub ground: GroundSet,
    pub partitions: Vec<Partition>,
    pub diagram: Diagram<Block>,
}

impl FpDiagram {
    pub fn build(ground: &GroundSet, guard: usize) -> Result<FpDiagram> {
        let partitions: Vec<Partition> =
            partition::enumerate_partitions(ground, guard)?.collect();
        let diagram = diagram_of_partitions(&partitions, |p| p.blocks().to_vec())?;
        Ok(FpDiagram {
            ground: ground.clone(),
            partitions,
            diagram,
        })
    }

    /// The same diagram with every object restricted by `keep` on its blocks
    /// and arrows restricted accordingly. Used for the infinite-blocks image
    /// and for the infinitely-visited-blocks diagrams.
    pub fn restricted(&self, keep: impl Fn(&Partition, &Block) -> bool) -> Result<Diagram<Block>> {
        diagram_of_partitions(&self.partitions, |p| {
            p.blocks().iter().copied().filter(|b| keep(p, b)).collect()
        })
    }
}

/// Builds the closed diagram whose objects are the given partitions with
/// label sets chosen by `labels_of`, and whose arrows are the ψ containment
/// maps between every comparable pair.
///
/// Every selected label of a finer partition must sit inside a unique
/// selected label of the coarser one; this is checked, not assumed.
fn diagram_of_partitions(
    partitions: &[Partition],
    labels_of: impl Fn(&Partition) -> Vec<Block>,
) -> Result<Diagram<Block>> {
    let objects: Vec<DiagramObject<Block>> = partitions
        .iter()
        .map(|p| DiagramObject {
            name: p.canonical_string(),
            labels: labels_of(p),
        })
        .collect();
    let mut arrows = Vec::new();
    for (i, p) in partitions.iter().enumerate() {
        for (j, q) in partitions.iter().enumerate() {
            if i == j || !partition::leq(p, q)? {
                continue;
            }
            let mut map = Vec::with_capacity(objects[i].labels.len());
            for b in &objects[i].labels {
                let mut targets = objects[j]
                    .labels
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| b.is_subset(**c));
                let target = match (targets.next(), targets.next()) {
                    (Some((k, _)), None) => k,
                    _ => {
                        return Err(Error::Diagram(format!(
                            "restricted map undefined: block {} of {} has no unique image in {}",
                            b.render(p.ground()),
                            objects[i].name,
                            objects[j].name
                        )))
                    }
                };
                map.push(target);
            }
            arrows.push(Arrow { from: i, to: j, map });
        }
    }
    let mut d = Diagram::new(objects, arrows)?;
    d.close();
    Ok(d)
}

/// Renders a thread of a block-labelled diagram as `object -> block` pairs.
pub fn render_thread(
    diagram: &Diagram<Block>,
    ground: &GroundSet,
    t: &Thread,
) -> BTreeMap<String, Vec<String>> {
    diagram
        .objects()
        .iter()
        .zip(&t.0)
        .map(|(o, &choice)| {
            let atoms = o.labels[choice].atoms(ground).map(str::to_string).collect();
            (o.name.clone(), atoms)
        })
        .collect()
}
