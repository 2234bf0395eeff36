//! The catalog of three- and four-qubit entanglement polytopes, membership
//! tests, and the discriminating function f.
//!
//! Vertices are stored as exact rationals (all catalog coordinates are
//! halves or quarters) and hull membership is decided in exact rational
//! arithmetic, so catalog vertices, where all the interesting points sit,
//! never fall to tolerance disputes. Floating-point query points enter the
//! LP exactly (every f64 is a rational) with a tolerance `tol` allowed on
//! the L1 residual of the convex combination; the default is 1e-9.

mod facets;
mod lattice;
mod lp;

pub use facets::FacetSystem;
pub use lattice::{lattice_edges, strictly_below};

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::SpectraPoint;

/// Default slack on the convex-combination residual for float queries.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Polytope families; P1..P7 are four-qubit, GHZ3/W3 three-qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    Ghz3,
    W3,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::P1 => "P1",
            Family::P2 => "P2",
            Family::P3 => "P3",
            Family::P4 => "P4",
            Family::P5 => "P5",
            Family::P6 => "P6",
            Family::P7 => "P7",
            Family::Ghz3 => "GHZ3",
            Family::W3 => "W3",
        }
    }

    fn variant_range(&self) -> Option<char> {
        match self {
            Family::P1 | Family::P2 => Some('d'),
            Family::P3 | Family::P6 => Some('f'),
            _ => None,
        }
    }

    pub fn variants(&self) -> Vec<Option<char>> {
        match self.variant_range() {
            None => vec![None],
            Some(last) => ('a'..=last).map(Some).collect(),
        }
    }
}

/// Identifier of one catalog polytope, e.g. `P3e` or `GHZ3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PolytopeId {
    family: Family,
    variant: Option<char>,
}

impl PolytopeId {
    pub fn new(family: Family, variant: Option<char>) -> Result<Self> {
        let valid = match family.variant_range() {
            None => variant.is_none(),
            Some(last) => matches!(variant, Some(v) if ('a'..=last).contains(&v)),
        };
        if !valid {
            return Err(Error::InvalidVariant {
                family: family.name().to_string(),
                variant,
            });
        }
        Ok(PolytopeId { family, variant })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn variant(&self) -> Option<char> {
        self.variant
    }

    /// All 23 four-qubit ids in catalog order.
    pub fn all_4d() -> Vec<PolytopeId> {
        use Family::*;
        [P1, P2, P3, P4, P5, P6, P7]
            .iter()
            .flat_map(|f| {
                f.variants()
                    .into_iter()
                    .map(|v| PolytopeId::new(*f, v).expect("catalog ids are valid"))
            })
            .collect()
    }

    pub fn all_3d() -> Vec<PolytopeId> {
        vec![
            PolytopeId::new(Family::Ghz3, None).expect("valid"),
            PolytopeId::new(Family::W3, None).expect("valid"),
        ]
    }
}

impl fmt::Display for PolytopeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        if let Some(v) = self.variant {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for PolytopeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = match s {
            _ if s.starts_with("GHZ3") => (Family::Ghz3, &s[4..]),
            _ if s.starts_with("W3") => (Family::W3, &s[2..]),
            _ if s.starts_with("P1") => (Family::P1, &s[2..]),
            _ if s.starts_with("P2") => (Family::P2, &s[2..]),
            _ if s.starts_with("P3") => (Family::P3, &s[2..]),
            _ if s.starts_with("P4") => (Family::P4, &s[2..]),
            _ if s.starts_with("P5") => (Family::P5, &s[2..]),
            _ if s.starts_with("P6") => (Family::P6, &s[2..]),
            _ if s.starts_with("P7") => (Family::P7, &s[2..]),
            _ => return Err(Error::UnknownPolytope(s.to_string())),
        };
        let variant = match rest.len() {
            0 => None,
            1 => rest.chars().next(),
            _ => return Err(Error::UnknownPolytope(s.to_string())),
        };
        PolytopeId::new(family, variant).map_err(|_| Error::UnknownPolytope(s.to_string()))
    }
}

impl Serialize for PolytopeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PolytopeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One catalog polytope: identifier plus exact vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    id: PolytopeId,
    dimension: usize,
    vertices: Vec<Vec<Rational64>>,
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Vertex with 1 at the 1-based positions in `ones`, 1/2 elsewhere.
fn vertex_with_ones(dim: usize, ones: &[usize]) -> Vec<Rational64> {
    (1..=dim)
        .map(|i| {
            if ones.contains(&i) {
                rat(1, 1)
            } else {
                rat(1, 2)
            }
        })
        .collect()
}

fn quarter_vertex(dim: usize, pos: usize) -> Vec<Rational64> {
    (1..=dim)
        .map(|i| if i == pos { rat(3, 4) } else { rat(1, 2) })
        .collect()
}

/// The pair/triple of "one high coordinate" vertices attached to each
/// variant letter, as printed in the catalog table.
fn variant_positions(family: Family, variant: char) -> Vec<usize> {
    match family {
        // P1: all four, plus the quarter vertex handled separately
        Family::P1 => vec![4, 3, 2, 1],
        Family::P2 => match variant {
            'a' => vec![3, 2, 1],
            'b' => vec![4, 2, 1],
            'c' => vec![4, 3, 1],
            'd' => vec![4, 3, 2],
            _ => unreachable!(),
        },
        Family::P3 | Family::P6 => match variant {
            'a' => vec![2, 1],
            'b' => vec![3, 1],
            'c' => vec![3, 2],
            'd' => vec![4, 1],
            'e' => vec![4, 2],
            'f' => vec![4, 3],
            _ => unreachable!(),
        },
        _ => unreachable!(),
    }
}

fn build_polytope(id: &PolytopeId) -> Polytope {
    let dim4 = 4usize;
    let top = vertex_with_ones(dim4, &[1, 2, 3, 4]);
    let bottom = vec![rat(1, 2); 4];
    let doubles: Vec<Vec<Rational64>> = [[3, 4], [2, 4], [2, 3], [1, 4], [1, 3], [1, 2]]
        .iter()
        .map(|ones| vertex_with_ones(dim4, ones))
        .collect();

    let mut vertices = Vec::new();
    let dimension;
    match id.family {
        Family::Ghz3 => {
            dimension = 3;
            vertices.push(vec![rat(1, 2); 3]);
            vertices.push(vertex_with_ones(3, &[3]));
            vertices.push(vertex_with_ones(3, &[2]));
            vertices.push(vertex_with_ones(3, &[1]));
            vertices.push(vertex_with_ones(3, &[1, 2, 3]));
        }
        Family::W3 => {
            dimension = 3;
            vertices.push(vertex_with_ones(3, &[1, 2, 3]));
            vertices.push(vertex_with_ones(3, &[3]));
            vertices.push(vertex_with_ones(3, &[2]));
            vertices.push(vertex_with_ones(3, &[1]));
        }
        family => {
            dimension = 4;
            vertices.push(top.clone());
            vertices.extend(doubles.iter().cloned());
            match family {
                Family::P1 => {
                    for pos in variant_positions(family, 'a') {
                        vertices.push(vertex_with_ones(dim4, &[pos]));
                    }
                    let quarter_pos = match id.variant.expect("P1 has a variant") {
                        'a' => 4,
                        'b' => 3,
                        'c' => 2,
                        'd' => 1,
                        _ => unreachable!(),
                    };
                    vertices.push(quarter_vertex(dim4, quarter_pos));
                }
                Family::P2 | Family::P3 => {
                    for pos in variant_positions(family, id.variant.expect("variant")) {
                        vertices.push(vertex_with_ones(dim4, &[pos]));
                    }
                }
                Family::P4 => vertices.push(bottom.clone()),
                Family::P5 => {}
                Family::P6 => {
                    for pos in variant_positions(family, id.variant.expect("variant")) {
                        vertices.push(vertex_with_ones(dim4, &[pos]));
                    }
                    vertices.push(bottom.clone());
                }
                Family::P7 => {
                    for pos in [4, 3, 2, 1] {
                        vertices.push(vertex_with_ones(dim4, &[pos]));
                    }
                    vertices.push(bottom.clone());
                }
                _ => unreachable!(),
            }
        }
    }
    Polytope {
        id: id.clone(),
        dimension,
        vertices,
    }
}

/// The full catalog for one dimension: 23 polytopes for four qubits, the GHZ
/// and W polytopes for three.
pub fn catalog(dimension: usize) -> Result<Vec<Polytope>> {
    Ok(catalog_ref(dimension)?.to_vec())
}

pub(crate) fn catalog_ref(dimension: usize) -> Result<&'static [Polytope]> {
    static CAT4: OnceLock<Vec<Polytope>> = OnceLock::new();
    static CAT3: OnceLock<Vec<Polytope>> = OnceLock::new();
    match dimension {
        4 => Ok(CAT4.get_or_init(|| PolytopeId::all_4d().iter().map(build_polytope).collect())),
        3 => Ok(CAT3.get_or_init(|| PolytopeId::all_3d().iter().map(build_polytope).collect())),
        other => Err(Error::PolytopeDimension(other)),
    }
}

/// Looks up one catalog polytope.
pub fn by_id(id: &PolytopeId) -> Polytope {
    build_polytope(id)
}

impl Polytope {
    pub fn id(&self) -> &PolytopeId {
        &self.id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Vec<Rational64>] {
        &self.vertices
    }

    pub fn from_parts(id: PolytopeId, dimension: usize, vertices: Vec<Vec<Rational64>>) -> Self {
        Polytope {
            id,
            dimension,
            vertices,
        }
    }

    /// Exact convex-hull membership for a rational point.
    pub fn contains_exact(&self, point: &[Rational64]) -> Result<bool> {
        if point.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: point.len(),
            });
        }
        let verts: Vec<Vec<_>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|r| lp::big(*r)).collect())
            .collect();
        let p: Vec<_> = point.iter().map(|r| lp::big(*r)).collect();
        Ok(lp::l1_distance_to_hull(&verts, &p).is_zero())
    }

    /// Convex-hull membership of a float point with slack `tol` on the L1
    /// residual. Points outside the ambient box [1/2 - tol, 1 + tol]^n are
    /// rejected before any LP runs.
    pub fn contains_lp(&self, point: &SpectraPoint, tol: f64) -> Result<bool> {
        let values = point.values();
        if values.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: values.len(),
            });
        }
        assert!(tol >= 0.0, "tolerance must be non-negative");
        if values.iter().any(|&v| v < 0.5 - tol || v > 1.0 + tol) {
            return Ok(false);
        }
        let verts: Vec<Vec<_>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|r| lp::big(*r)).collect())
            .collect();
        let p: Vec<_> = values
            .iter()
            .map(|&v| lp::big_from_f64(v).expect("spectra entries are finite"))
            .collect();
        let dist = lp::l1_distance_to_hull(&verts, &p);
        let tol_rat = lp::big_from_f64(tol).expect("finite tolerance");
        Ok(dist <= tol_rat)
    }

    /// The explicitly stated facet system for this polytope, if it is one of the
    /// four the discrimination protocol uses directly.
    pub fn fixed_facets(&self) -> Result<FacetSystem> {
        facet_system(&self.id)
    }

    /// Facets enumerated from the vertex set (exact arithmetic).
    pub fn derived_facets(&self) -> FacetSystem {
        facets::derive_facets(&self.vertices)
    }
}

/// Facet systems for the four polytopes the protocol tests directly.
pub fn facet_system(id: &PolytopeId) -> Result<FacetSystem> {
    match id.family() {
        Family::P4 => Ok(facets::p4_facets()),
        Family::P7 => Ok(facets::p7_facets()),
        Family::Ghz3 => Ok(facets::ghz3_facets()),
        Family::W3 => Ok(facets::w3_facets()),
        _ => Err(Error::NoFacetSystem(id.to_string())),
    }
}

/// The discriminating function: sum of the spectra minus twice entry `i`
/// (1-based). For i = 1 this is -l1 + l2 + l3 + l4.
pub fn f_value(point: &SpectraPoint, negated: usize) -> Result<f64> {
    let values = point.values();
    if values.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: values.len(),
        });
    }
    if negated == 0 || negated > 4 {
        return Err(Error::InvalidQubit {
            qubit: negated,
            num_qubits: 4,
        });
    }
    let sum: f64 = values.iter().sum();
    Ok(sum - 2.0 * values[negated - 1])
}

/// Result of classifying one spectra point against the catalog.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    /// Every catalog polytope containing the point.
    pub containing: Vec<PolytopeId>,
    /// The containing polytopes minimal under the containment lattice.
    pub minimal: Vec<PolytopeId>,
}

/// Tests the point against every catalog polytope of its dimension (default
/// tolerance) and reduces the containing set to its lattice-minimal elements.
pub fn classify(point: &SpectraPoint) -> Result<Classification> {
    let cat = catalog_ref(point.len())?;
    let mut containing = Vec::new();
    for p in cat {
        if p.contains_lp(point, DEFAULT_TOL)? {
            containing.push(p.id().clone());
        }
    }
    let minimal = containing
        .iter()
        .filter(|id| !containing.iter().any(|other| strictly_below(other, id)))
        .cloned()
        .collect();
    Ok(Classification {
        containing,
        minimal,
    })
}

/// Outcome of re-proving the containment lattice numerically.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub edges_checked: usize,
    /// Edges whose child has a vertex outside the parent's hull.
    pub violations: Vec<(PolytopeId, PolytopeId)>,
    /// True iff P5 is contained in every other four-qubit polytope.
    pub p5_universal: bool,
}

impl LatticeReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.p5_universal
    }
}

/// Checks every lattice edge child -> parent by testing all child vertices
/// for membership in the parent (exact), and confirms that P5 is contained
/// in all other four-qubit polytopes.
pub fn verify_lattice() -> LatticeReport {
    let mut edges_checked = 0;
    let mut violations = Vec::new();
    for dim in [3usize, 4] {
        for (child, parent) in lattice_edges(dim) {
            edges_checked += 1;
            if !polytope_subset(&by_id(child), &by_id(parent)) {
                violations.push((child.clone(), parent.clone()));
            }
        }
    }
    let p5 = by_id(&PolytopeId::new(Family::P5, None).expect("valid"));
    let p5_universal = PolytopeId::all_4d()
        .iter()
        .filter(|id| id.family() != Family::P5)
        .all(|id| polytope_subset(&p5, &by_id(id)));
    LatticeReport {
        edges_checked,
        violations,
        p5_universal,
    }
}

/// True iff every vertex of `inner` lies in the hull of `outer` (exact).
pub fn polytope_subset(inner: &Polytope, outer: &Polytope) -> bool {
    inner
        .vertices()
        .iter()
        .all(|v| outer.contains_exact(v).unwrap_or(false))
}

#[derive(Serialize, Deserialize)]
struct CatalogEntry {
    id: String,
    dimension: usize,
    vertices: Vec<Vec<String>>,
}

fn format_rational(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected p/q rational, got {s:?}")))?;
    let n: i64 = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let d: i64 = d
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational64::new(n, d))
}

/// Serializes the catalog as one object per polytope with `p/q` rational
/// vertex coordinates; parses back losslessly with [`parse_catalog_json`].
pub fn export_catalog_json(dimension: usize) -> Result<String> {
    let entries: Vec<CatalogEntry> = catalog_ref(dimension)?
        .iter()
        .map(|p| CatalogEntry {
            id: p.id().to_string(),
            dimension: p.dimension(),
            vertices: p
                .vertices()
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&entries).expect("catalog serialization cannot fail"))
}

/// Parses a catalog document produced by [`export_catalog_json`].
pub fn parse_catalog_json(text: &str) -> Result<Vec<Polytope>> {
    let entries: Vec<CatalogEntry> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    entries
        .into_iter()
        .map(|e| {
            let id: PolytopeId = e.id.parse()?;
            let vertices = e
                .vertices
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            for v in &vertices {
                if v.len() != e.dimension {
                    return Err(Error::DimensionMismatch {
                        expected: e.dimension,
                        got: v.len(),
                    });
                }
            }
            Ok(Polytope::from_parts(id, e.dimension, vertices))
        })
        .collect()
}
