//! JSON wire formats for every value the CLI reads or writes.
//!
//! Emitted artifacts are canonical (blocks sorted, object keys in map order)
//! so that re-parsing yields an equal value and repeated runs are
//! byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{Arrow, Diagram, DiagramObject, Thread};
use crate::dynamics::OrbitSystem;
use crate::error::{Error, Result};
use crate::fc::{FcKind, FcSet};
use crate::ground::GroundSet;
use crate::partition::{self, Block, Partition};
use crate::ultrafilter::UltrafilterFamily;

pub fn parse_ground(text: &str) -> Result<GroundSet> {
    let atoms: Vec<String> =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed ground JSON: {e}")))?;
    GroundSet::new(atoms)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionJson {
    pub ground: Vec<String>,
    pub blocks: Vec<Vec<String>>,
}

impl PartitionJson {
    pub fn from_partition(p: &Partition) -> Self {
        PartitionJson {
            ground: p.ground().atoms().map(str::to_string).collect(),
            blocks: p
                .blocks()
                .iter()
                .map(|b| b.atoms(p.ground()).map(str::to_string).collect())
                .collect(),
        }
    }

    pub fn to_partition(&self) -> Result<Partition> {
        let ground = GroundSet::new(self.ground.clone())?;
        let blocks = self
            .blocks
            .iter()
            .map(|atoms| Block::from_atoms(atoms.iter().map(String::as_str), &ground))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(ground, blocks)
    }
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let dto: PartitionJson = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("malformed partition JSON: {e}")))?;
    dto.to_partition()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramObjectJson {
    pub partition: PartitionJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowJson {
    pub from: String,
    pub to: String,
    /// Optional explicit block map, as `[finer-block, coarser-block]` pairs.
    /// The map is always recomputed from containment; an explicit map is
    /// validated against it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<(Vec<String>, Vec<String>)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramJson {
    pub objects: BTreeMap<String, DiagramObjectJson>,
    pub arrows: Vec<ArrowJson>,
}

/// A diagram of (possibly partial) partitions over one shared ground set,
/// with named objects as supplied in the input file.
#[derive(Debug, Clone)]
pub struct NamedDiagram {
    pub ground: GroundSet,
    pub partitions: Vec<(String, Partition)>,
    pub diagram: Diagram<Block>,
}

impl NamedDiagram {
    pub fn render_thread(&self, t: &Thread) -> BTreeMap<String, Vec<String>> {
        crate::diagram::render_thread(&self.diagram, &self.ground, t)
    }
}

pub fn parse_diagram(text: &str) -> Result<NamedDiagram> {
    let dto: DiagramJson = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("malformed diagram JSON: {e}")))?;
    let mut partitions = Vec::new();
    for (name, obj) in &dto.objects {
        partitions.push((name.clone(), obj.partition.to_partition()?));
    }
    let ground = match partitions.first() {
        Some((_, p)) => p.ground().clone(),
        None => GroundSet::new(Vec::<String>::new())?,
    };
    for (name, p) in &partitions {
        if p.ground() != &ground {
            return Err(Error::Input(format!(
                "object {name} uses a different ground set"
            )));
        }
    }
    let objects: Vec<DiagramObject<Block>> = partitions
        .iter()
        .map(|(name, p)| DiagramObject {
            name: name.clone(),
            labels: p.blocks().to_vec(),
        })
        .collect();
    let find = |name: &str| {
        partitions
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::Input(format!("arrow references unknown object {name:?}")))
    };
    let mut arrows = Vec::new();
    for a in &dto.arrows {
        let from = find(&a.from)?;
        let to = find(&a.to)?;
        let psi = partition::psi(&partitions[from].1, &partitions[to].1)?;
        if let Some(explicit) = &a.map {
            for (src, dst) in explicit {
                let src = Block::from_atoms(src.iter().map(String::as_str), &ground)?;
                let dst = Block::from_atoms(dst.iter().map(String::as_str), &ground)?;
                match psi.image_of(&src) {
                    Some(image) if *image == dst => {}
                    _ => {
                        return Err(Error::Input(format!(
                            "explicit map on arrow {} -> {} disagrees with containment at {}",
                            a.from,
                            a.to,
                            src.render(&ground)
                        )))
                    }
                }
            }
        }
        arrows.push(Arrow {
            from,
            to,
            map: psi.assignment().to_vec(),
        });
    }
    let mut diagram = Diagram::new(objects, arrows)?;
    diagram.close();
    Ok(NamedDiagram {
        ground,
        partitions,
        diagram,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub ground: Vec<String>,
    pub members: Vec<Vec<String>>,
}

impl FamilyJson {
    pub fn from_family(u: &UltrafilterFamily) -> Self {
        FamilyJson {
            ground: u.ground().atoms().map(str::to_string).collect(),
            members: u
                .members()
                .iter()
                .map(|m| m.atoms(u.ground()).map(str::to_string).collect())
                .collect(),
        }
    }

    pub fn to_family(&self) -> Result<UltrafilterFamily> {
        let ground = GroundSet::new(self.ground.clone())?;
        let members = self
            .members
            .iter()
            .map(|atoms| Block::from_atoms(atoms.iter().map(String::as_str), &ground))
            .collect::<Result<_>>()?;
        UltrafilterFamily::new(ground, members)
    }
}

pub fn parse_family(text: &str) -> Result<UltrafilterFamily> {
    let dto: FamilyJson = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("malformed family JSON: {e}")))?;
    dto.to_family()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FcSetJson {
    pub kind: String,
    pub support: Vec<u64>,
}

impl FcSetJson {
    pub fn from_set(s: &FcSet) -> Self {
        FcSetJson {
            kind: match s.kind() {
                FcKind::Finite => "finite".into(),
                FcKind::Cofinite => "cofinite".into(),
            },
            support: s.support().iter().copied().collect(),
        }
    }

    pub fn to_set(&self) -> Result<FcSet> {
        match self.kind.as_str() {
            "finite" => Ok(FcSet::finite(self.support.iter().copied())),
            "cofinite" => Ok(FcSet::cofinite(self.support.iter().copied())),
            other => Err(Error::Input(format!(
                "fc-set kind must be \"finite\" or \"cofinite\", got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitSystemJson {
    pub states: Vec<String>,
    pub map: BTreeMap<String, String>,
    pub start: String,
}

impl OrbitSystemJson {
    pub fn from_system(sys: &OrbitSystem) -> Self {
        let states: Vec<String> = sys.states().atoms().map(str::to_string).collect();
        let map = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), states[sys.map()[i]].clone()))
            .collect();
        OrbitSystemJson {
            start: states[sys.start()].clone(),
            states,
            map,
        }
    }

    pub fn to_system(&self) -> Result<OrbitSystem> {
        let states = GroundSet::new(self.states.clone())?;
        let mut map = Vec::with_capacity(states.len());
        for atom in self.states.iter() {
            let target = self.map.get(atom).ok_or_else(|| {
                Error::Input(format!("map is missing state {atom:?}"))
            })?;
            let t = states
                .index_of(target)
                .ok_or_else(|| Error::Input(format!("map target {target:?} is not a state")))?;
            map.push(t);
        }
        for key in self.map.keys() {
            if states.index_of(key).is_none() {
                return Err(Error::Input(format!("map key {key:?} is not a state")));
            }
        }
        let start = states
            .index_of(&self.start)
            .ok_or_else(|| Error::Input(format!("start {:?} is not a state", self.start)))?;
        OrbitSystem::new(states, map, start)
    }
}

pub fn parse_orbit_system(text: &str) -> Result<OrbitSystem> {
    let dto: OrbitSystemJson = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("malformed system JSON: {e}")))?;
    dto.to_system()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceJson {
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_roundtrip() {
        let text = r#"{"ground": ["a","b","c"], "blocks": [["a","b"],["c"]]}"#;
        let p = parse_partition(text).unwrap();
        assert_eq!(p.canonical_string(), "{a,b}|{c}");
        let emitted = serde_json::to_string(&PartitionJson::from_partition(&p)).unwrap();
        assert_eq!(parse_partition(&emitted).unwrap(), p);
    }

    #[test]
    fn partition_rejects_unknown_atom_by_name() {
        let text = r#"{"ground": ["a","b"], "blocks": [["a","z"]]}"#;
        let err = parse_partition(text).unwrap_err();
        assert!(err.to_string().contains("\"z\""), "{err}");
    }

    #[test]
    fn partition_rejects_duplicate_atom_by_name() {
        let text = r#"{"ground": ["a","b"], "blocks": [["a"],["a"]]}"#;
        let err = parse_partition(text).unwrap_err();
        assert!(err.to_string().contains("{a}"), "{err}");
    }

    #[test]
    fn diagram_parses_and_enumerates() {
        let text = r#"{
            "objects": {
                "fine": {"partition": {"ground": ["a","b","c"], "blocks": [["a"],["b"],["c"]]}},
                "coarse": {"partition": {"ground": ["a","b","c"], "blocks": [["a","b"],["c"]]}}
            },
            "arrows": [{"from": "fine", "to": "coarse"}]
        }"#;
        let nd = parse_diagram(text).unwrap();
        assert!(nd.diagram.validate().is_empty());
        let threads = nd.diagram.enumerate_threads().unwrap();
        assert_eq!(threads.len(), 3);
        let rendered = nd.render_thread(&threads[0]);
        assert_eq!(rendered.len(), 2);
        assert!(rendered.contains_key("fine") && rendered.contains_key("coarse"));
    }

    #[test]
    fn diagram_rejects_wrong_explicit_map() {
        let text = r#"{
            "objects": {
                "fine": {"partition": {"ground": ["a","b"], "blocks": [["a"],["b"]]}},
                "coarse": {"partition": {"ground": ["a","b"], "blocks": [["a","b"]]}}
            },
            "arrows": [{"from": "fine", "to": "coarse", "map": [[["a"],["a","b"]],[["b"],["a"]]]}]
        }"#;
        let err = parse_diagram(text).unwrap_err();
        assert!(err.to_string().contains("disagrees"), "{err}");
    }

    #[test]
    fn orbit_system_roundtrip() {
        let text = r#"{"states":["0","1","2"], "map":{"0":"1","1":"2","2":"1"}, "start":"0"}"#;
        let sys = parse_orbit_system(text).unwrap();
        assert_eq!(sys.map(), &[1, 2, 1]);
        let emitted = serde_json::to_string(&OrbitSystemJson::from_system(&sys)).unwrap();
        assert_eq!(parse_orbit_system(&emitted).unwrap(), sys);
    }

    #[test]
    fn orbit_system_rejects_missing_state() {
        let text = r#"{"states":["0","1"], "map":{"0":"1"}, "start":"0"}"#;
        let err = parse_orbit_system(text).unwrap_err();
        assert!(err.to_string().contains("\"1\""), "{err}");
    }

    #[test]
    fn fc_set_roundtrip() {
        let text = r#"{"kind":"cofinite","support":[0,1,2]}"#;
        let dto: FcSetJson = serde_json::from_str(text).unwrap();
        let s = dto.to_set().unwrap();
        assert_eq!(s, FcSet::cofinite([0, 1, 2]));
        let emitted = serde_json::to_string(&FcSetJson::from_set(&s)).unwrap();
        let back: FcSetJson = serde_json::from_str(&emitted).unwrap();
        assert_eq!(back.to_set().unwrap(), s);
    }

    #[test]
    fn family_roundtrip() {
        let text = r#"{"ground":["a","b"], "members":[["a"],["a","b"]]}"#;
        let u = parse_family(text).unwrap();
        assert_eq!(u.members().len(), 2);
        let emitted = serde_json::to_string(&FamilyJson::from_family(&u)).unwrap();
        assert_eq!(parse_family(&emitted).unwrap(), u);
    }
}
