//! Cross-validation of the three membership routes: exact-rational LP over
//! the vertex representation, the hand-written facet systems, and the facet
//! systems enumerated from the vertex sets. Also re-derives the containment
//! lattice from scratch and compares it with the static edge table.

use std::collections::BTreeSet;

use entpoly::polytope::{
    self, catalog, lattice_edges, strictly_below, Family, Polytope, PolytopeId,
};
use entpoly::qcore::SpectraPoint;
use entpoly::rng::PhiloxStream;

fn uniform_box_point(dim: usize, rng: &mut PhiloxStream) -> Vec<f64> {
    (0..dim).map(|_| 0.5 + 0.5 * rng.uniform()).collect()
}

fn agreement_check(
    p: &Polytope,
    facets: &entpoly::polytope::FacetSystem,
    points: usize,
    seed: u64,
) {
    let dim = p.dimension();
    let mut rng = PhiloxStream::new(seed, 0);
    let mut compared = 0usize;
    for _ in 0..points {
        let v = uniform_box_point(dim, &mut rng);
        let slack = facets.min_slack(&v);
        if slack.abs() <= 1e-7 {
            continue; // boundary shell excluded from the comparison
        }
        compared += 1;
        let by_facets = slack > 0.0;
        let by_lp = p
            .contains_lp(&SpectraPoint::new(v.clone()).unwrap(), 1e-9)
            .unwrap();
        assert_eq!(
            by_facets,
            by_lp,
            "{}: facet and LP routes disagree at {v:?} (slack {slack})",
            p.id()
        );
    }
    assert!(compared > points / 2, "too few points survived the filter");
}

#[test]
fn fixed_facet_systems_match_lp_on_random_points() {
    for (name, seed) in [("P4", 1u64), ("P7", 2), ("GHZ3", 3), ("W3", 4)] {
        let id: PolytopeId = name.parse().unwrap();
        let p = polytope::by_id(&id);
        let facets = polytope::facet_system(&id).unwrap();
        agreement_check(&p, &facets, 10_000, seed);
    }
}

/// Full-size validation of the hand-written facet systems (10^5 points each);
/// slow, run with `cargo test -- --ignored`.
#[test]
#[ignore]
fn fixed_facet_systems_match_lp_full_size() {
    for (name, seed) in [("P4", 11u64), ("P7", 12), ("GHZ3", 13), ("W3", 14)] {
        let id: PolytopeId = name.parse().unwrap();
        let p = polytope::by_id(&id);
        let facets = polytope::facet_system(&id).unwrap();
        agreement_check(&p, &facets, 100_000, seed);
    }
}

#[test]
fn derived_facet_systems_match_lp_for_every_catalog_entry() {
    for dim in [3usize, 4] {
        for (k, p) in catalog(dim).unwrap().iter().enumerate() {
            let facets = p.derived_facets();
            // every vertex satisfies the derived system exactly
            for v in p.vertices() {
                let fv: Vec<f64> = v
                    .iter()
                    .map(|r| *r.numer() as f64 / *r.denom() as f64)
                    .collect();
                assert!(
                    facets.min_slack(&fv) >= 0.0,
                    "{}: vertex {fv:?} violates a derived facet",
                    p.id()
                );
            }
            agreement_check(p, &facets, 1_500, 100 + k as u64);
        }
    }
}

#[test]
fn every_catalog_vertex_is_contained_and_extreme_for_p4_p5() {
    for dim in [3usize, 4] {
        for p in catalog(dim).unwrap() {
            for v in p.vertices() {
                assert!(
                    p.contains_exact(v).unwrap(),
                    "{}: own vertex rejected",
                    p.id()
                );
            }
        }
    }
    // all vertices of P4 and P5 are extreme: dropping one shrinks the hull
    for name in ["P4", "P5"] {
        let p = polytope::by_id(&name.parse().unwrap());
        for (i, v) in p.vertices().iter().enumerate() {
            let rest: Vec<_> = p
                .vertices()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| w.clone())
                .collect();
            let shrunk = Polytope::from_parts(p.id().clone(), p.dimension(), rest);
            assert!(
                !shrunk.contains_exact(v).unwrap(),
                "{name}: vertex {i} is not extreme"
            );
        }
    }
}

#[test]
fn p4_membership_is_permutation_symmetric() {
    let p4 = polytope::by_id(&"P4".parse().unwrap());
    let mut rng = PhiloxStream::new(5, 0);
    let perms = permutations(4);
    for _ in 0..15 {
        let v = uniform_box_point(4, &mut rng);
        let base = p4
            .contains_lp(&SpectraPoint::new(v.clone()).unwrap(), 1e-9)
            .unwrap();
        for perm in &perms {
            let pv: Vec<f64> = perm.iter().map(|&i| v[i]).collect();
            let got = p4
                .contains_lp(&SpectraPoint::new(pv).unwrap(), 1e-9)
                .unwrap();
            assert_eq!(base, got, "P4 membership broke under {perm:?} at {v:?}");
        }
    }
}

/// Positions of the high coordinates that define each lettered variant.
fn positions_of(family: Family, variant: char) -> BTreeSet<usize> {
    let v: &[usize] = match (family, variant) {
        (Family::P1, 'a') => &[4],
        (Family::P1, 'b') => &[3],
        (Family::P1, 'c') => &[2],
        (Family::P1, 'd') => &[1],
        (Family::P2, 'a') => &[3, 2, 1],
        (Family::P2, 'b') => &[4, 2, 1],
        (Family::P2, 'c') => &[4, 3, 1],
        (Family::P2, 'd') => &[4, 3, 2],
        (Family::P3 | Family::P6, 'a') => &[2, 1],
        (Family::P3 | Family::P6, 'b') => &[3, 1],
        (Family::P3 | Family::P6, 'c') => &[3, 2],
        (Family::P3 | Family::P6, 'd') => &[4, 1],
        (Family::P3 | Family::P6, 'e') => &[4, 2],
        (Family::P3 | Family::P6, 'f') => &[4, 3],
        _ => unreachable!(),
    };
    v.iter().copied().collect()
}

fn variant_for_positions(family: Family, want: &BTreeSet<usize>) -> char {
    for v in family.variants().into_iter().flatten() {
        if positions_of(family, v) == *want {
            return v;
        }
    }
    panic!("no variant of {family:?} with positions {want:?}");
}

/// Image of a polytope id under a coordinate permutation `perm` (0-based,
/// new[i] = old[perm[i]]).
fn permuted_id(id: &PolytopeId, perm: &[usize]) -> PolytopeId {
    match id.variant() {
        None => id.clone(),
        Some(v) => {
            // position j moves to pi^{-1}(j)
            let mut inv = vec![0usize; perm.len()];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            let mapped: BTreeSet<usize> = positions_of(id.family(), v)
                .into_iter()
                .map(|pos| inv[pos - 1] + 1)
                .collect();
            PolytopeId::new(
                id.family(),
                Some(variant_for_positions(id.family(), &mapped)),
            )
            .unwrap()
        }
    }
}

#[test]
fn classify_is_permutation_equivariant() {
    let perms = permutations(4);
    let mut rng = PhiloxStream::new(6, 0);
    for _ in 0..5 {
        let v = uniform_box_point(4, &mut rng);
        let base = polytope::classify(&SpectraPoint::new(v.clone()).unwrap()).unwrap();
        for perm in perms.iter().take(8) {
            let pv: Vec<f64> = perm.iter().map(|&i| v[i]).collect();
            let got = polytope::classify(&SpectraPoint::new(pv).unwrap()).unwrap();
            let expected: BTreeSet<String> = base
                .containing
                .iter()
                .map(|id| permuted_id(id, perm).to_string())
                .collect();
            let actual: BTreeSet<String> = got.containing.iter().map(|id| id.to_string()).collect();
            assert_eq!(expected, actual, "under {perm:?} at {v:?}");
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

#[test]
fn lattice_edges_match_rederived_containment_order() {
    for dim in [3usize, 4] {
        let cat = catalog(dim).unwrap();
        let n = cat.len();
        // full strict-containment relation from the exact LP
        let mut below = vec![vec![false; n]; n]; // below[a][b]: a strictly inside b
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                below[a][b] = cat[a]
                    .vertices()
                    .iter()
                    .all(|v| cat[b].contains_exact(v).unwrap());
            }
        }
        // reduce to cover edges
        let mut expected: BTreeSet<(String, String)> = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                if !below[a][b] {
                    continue;
                }
                let covered = (0..n).any(|c| below[a][c] && below[c][b]);
                if !covered {
                    expected.insert((cat[a].id().to_string(), cat[b].id().to_string()));
                }
            }
        }
        let actual: BTreeSet<(String, String)> = lattice_edges(dim)
            .iter()
            .map(|(c, p)| (c.to_string(), p.to_string()))
            .collect();
        assert_eq!(expected, actual, "cover edges differ in dimension {dim}");

        // reachability through the static edges equals the direct relation
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    assert_eq!(
                        below[a][b],
                        strictly_below(cat[a].id(), cat[b].id()),
                        "{} < {}",
                        cat[a].id(),
                        cat[b].id()
                    );
                }
            }
        }
    }
}
