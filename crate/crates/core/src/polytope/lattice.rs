//! Containment lattice of the catalog polytopes.
//!
//! The cover edges below were obtained by testing, for every ordered pair of
//! catalog polytopes, whether all vertices of one lie in the hull of the
//! other (exact LP), then reducing the resulting partial order. The test
//! suite re-derives the relation from scratch and `verify_lattice` re-proves
//! every edge numerically at run time, so a transcription mistake here cannot
//! survive unnoticed.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use super::{Family, PolytopeId};

/// Cover edges `child -> parent` of the strict-containment order, dimension 4.
const EDGES_4D: &[(&str, &str)] = &[
    ("P5", "P4"),
    ("P5", "P3a"),
    ("P5", "P3b"),
    ("P5", "P3c"),
    ("P5", "P3d"),
    ("P5", "P3e"),
    ("P5", "P3f"),
    ("P4", "P6a"),
    ("P4", "P6b"),
    ("P4", "P6c"),
    ("P4", "P6d"),
    ("P4", "P6e"),
    ("P4", "P6f"),
    // each P3 variant sits inside the P6 variant with the same vertex pair
    ("P3a", "P6a"),
    ("P3b", "P6b"),
    ("P3c", "P6c"),
    ("P3d", "P6d"),
    ("P3e", "P6e"),
    ("P3f", "P6f"),
    // and inside the two P2 variants whose vertex triple contains its pair
    ("P3a", "P2a"),
    ("P3a", "P2b"),
    ("P3b", "P2a"),
    ("P3b", "P2c"),
    ("P3c", "P2a"),
    ("P3c", "P2d"),
    ("P3d", "P2b"),
    ("P3d", "P2c"),
    ("P3e", "P2b"),
    ("P3e", "P2d"),
    ("P3f", "P2c"),
    ("P3f", "P2d"),
    // every P2 variant lies in every P1 variant
    ("P2a", "P1a"),
    ("P2a", "P1b"),
    ("P2a", "P1c"),
    ("P2a", "P1d"),
    ("P2b", "P1a"),
    ("P2b", "P1b"),
    ("P2b", "P1c"),
    ("P2b", "P1d"),
    ("P2c", "P1a"),
    ("P2c", "P1b"),
    ("P2c", "P1c"),
    ("P2c", "P1d"),
    ("P2d", "P1a"),
    ("P2d", "P1b"),
    ("P2d", "P1c"),
    ("P2d", "P1d"),
    ("P6a", "P7"),
    ("P6b", "P7"),
    ("P6c", "P7"),
    ("P6d", "P7"),
    ("P6e", "P7"),
    ("P6f", "P7"),
    ("P1a", "P7"),
    ("P1b", "P7"),
    ("P1c", "P7"),
    ("P1d", "P7"),
];

const EDGES_3D: &[(&str, &str)] = &[("W3", "GHZ3")];

fn parse_edges(raw: &[(&str, &str)]) -> Vec<(PolytopeId, PolytopeId)> {
    raw.iter()
        .map(|(c, p)| {
            (
                c.parse().expect("edge table ids are valid"),
                p.parse().expect("edge table ids are valid"),
            )
        })
        .collect()
}

/// The cover edges `(child, parent)` for the given dimension.
pub fn lattice_edges(dimension: usize) -> &'static [(PolytopeId, PolytopeId)] {
    static EDGES4: OnceLock<Vec<(PolytopeId, PolytopeId)>> = OnceLock::new();
    static EDGES3: OnceLock<Vec<(PolytopeId, PolytopeId)>> = OnceLock::new();
    match dimension {
        4 => EDGES4.get_or_init(|| parse_edges(EDGES_4D)),
        3 => EDGES3.get_or_init(|| parse_edges(EDGES_3D)),
        _ => &[],
    }
}

fn descendants(dimension: usize) -> &'static BTreeMap<PolytopeId, BTreeSet<PolytopeId>> {
    static MAP4: OnceLock<BTreeMap<PolytopeId, BTreeSet<PolytopeId>>> = OnceLock::new();
    static MAP3: OnceLock<BTreeMap<PolytopeId, BTreeSet<PolytopeId>>> = OnceLock::new();
    let build = move || {
        let edges = lattice_edges(dimension);
        let mut below: BTreeMap<PolytopeId, BTreeSet<PolytopeId>> = BTreeMap::new();
        // transitive closure by repeated propagation; the lattice is tiny
        let mut changed = true;
        for (child, parent) in edges {
            below
                .entry(parent.clone())
                .or_default()
                .insert(child.clone());
        }
        while changed {
            changed = false;
            for (child, parent) in edges {
                let grand: Vec<PolytopeId> = below
                    .get(child)
                    .map(|s| s.iter().cloned().collect())
                    .unwrap_or_default();
                let entry = below.entry(parent.clone()).or_default();
                for g in grand {
                    changed |= entry.insert(g);
                }
            }
        }
        below
    };
    match dimension {
        4 => MAP4.get_or_init(build),
        3 => MAP3.get_or_init(build),
        _ => panic!("lattice defined for dimensions 3 and 4"),
    }
}

/// True iff `a` is strictly contained in `b` according to the lattice.
pub fn strictly_below(a: &PolytopeId, b: &PolytopeId) -> bool {
    let dim = match b.family() {
        Family::Ghz3 | Family::W3 => 3,
        _ => 4,
    };
    descendants(dim)
        .get(b)
        .map(|s| s.contains(a))
        .unwrap_or(false)
}
