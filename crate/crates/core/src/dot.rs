//! Deterministic DOT export of refinement posets (Hasse-reduced) and
//! diagrams.

use crate::error::Result;
use crate::partition::{self, Partition};

/// DOT graph of the refinement poset of the given partitions, reduced to its
/// Hasse covers. Nodes are labelled by canonical partition strings and edges
/// point from finer to coarser.
pub fn poset_dot(partitions: &[Partition]) -> Result<String> {
    let n = partitions.len();
    let mut strictly_below = vec![vec![false; n]; n];
    for (i, p) in partitions.iter().enumerate() {
        for (j, q) in partitions.iter().enumerate() {
            strictly_below[i][j] = i != j && p != q && partition::leq(p, q)?;
        }
    }
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for p in partitions {
        out.push_str(&format!("  \"{}\";\n", p.canonical_string()));
    }
    for i in 0..n {
        for j in 0..n {
            if !strictly_below[i][j] {
                continue;
            }
            let covered = (0..n).any(|k| strictly_below[i][k] && strictly_below[k][j]);
            if !covered {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    partitions[i].canonical_string(),
                    partitions[j].canonical_string()
                ));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// DOT graph of a diagram: one node per object, transitively reduced
/// non-identity arrows as edges.
pub fn diagram_dot<L>(d: &crate::diagram::Diagram<L>) -> String {
    let n = d.objects().len();
    let mut has_arrow = vec![vec![false; n]; n];
    for a in d.arrows() {
        if a.from != a.to {
            has_arrow[a.from][a.to] = true;
        }
    }
    let mut out = String::from("digraph diagram {\n  rankdir=BT;\n");
    for o in d.objects() {
        out.push_str(&format!("  \"{}\";\n", o.name));
    }
    for i in 0..n {
        for j in 0..n {
            if !has_arrow[i][j] {
                continue;
            }
            let covered = (0..n).any(|k| has_arrow[i][k] && has_arrow[k][j]);
            if !covered {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    d.objects()[i].name,
                    d.objects()[j].name
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}
