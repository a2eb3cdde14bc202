//! Graphviz export of a concept's colexification neighborhood.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use core::fmt::Write;

use crate::colexgraph::ConceptPairRecord;

/// Pen width given to the heaviest edge of the exported subgraph.
pub const MAX_PENWIDTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DotError {
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("neighborhood depth must be at least 1")]
    ZeroDepth,
}

fn quoted(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('"');
    for c in name.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Concept names within `depth` hops of `focus`, in name order.
pub fn neighborhood<'a>(
    records: &'a [ConceptPairRecord],
    focus: &str,
    depth: usize,
) -> Result<BTreeSet<&'a str>, DotError> {
    if depth == 0 {
        return Err(DotError::ZeroDepth);
    }
    let mut adjacency: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in records {
        adjacency.entry(&r.concept1).or_default().insert(&r.concept2);
        adjacency.entry(&r.concept2).or_default().insert(&r.concept1);
    }
    let Some((&start, _)) = adjacency.get_key_value(focus) else {
        return Err(DotError::UnknownConcept(focus.into()));
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((node, dist)) = queue.pop_front() {
        if dist == depth {
            continue;
        }
        for &next in &adjacency[node] {
            if seen.insert(next) {
                queue.push_back((next, dist + 1));
            }
        }
    }
    Ok(seen)
}

/// Renders the subgraph induced by the `depth`-hop neighborhood of `focus`.
///
/// Pen width is proportional to `n_colex`, scaled so the heaviest edge in the
/// subgraph gets [`MAX_PENWIDTH`]. Output depends only on the record set.
pub fn export_dot(records: &[ConceptPairRecord], focus: &str, depth: usize) -> Result<String, DotError> {
    let nodes = neighborhood(records, focus, depth)?;
    let mut edges: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for r in records {
        if nodes.contains(r.concept1.as_str()) && nodes.contains(r.concept2.as_str()) {
            let key = if r.concept1 <= r.concept2 {
                (r.concept1.as_str(), r.concept2.as_str())
            } else {
                (r.concept2.as_str(), r.concept1.as_str())
            };
            // Distinct concepts sharing a display name collapse into one node.
            if key.0 != key.1 {
                *edges.entry(key).or_default() += r.n_colex;
            }
        }
    }
    let heaviest = edges.values().copied().max().unwrap_or(1).max(1) as f64;

    let mut out = String::new();
    let _ = writeln!(out, "graph colexification {{");
    let _ = writeln!(out, "  graph [label={}];", quoted(&alloc::format!("{focus} (depth {depth})")));
    let _ = writeln!(out, "  node [shape=ellipse];");
    for node in &nodes {
        if *node == focus {
            let _ = writeln!(out, "  {} [style=bold];", quoted(node));
        } else {
            let _ = writeln!(out, "  {};", quoted(node));
        }
    }
    for ((a, b), weight) in &edges {
        let pen = MAX_PENWIDTH * *weight as f64 / heaviest;
        let _ = writeln!(
            out,
            "  {} -- {} [weight={weight}, label=\"{weight}\", penwidth={pen:.3}];",
            quoted(a),
            quoted(b)
        );
    }
    out.push_str("}\n");
    Ok(out)
}
