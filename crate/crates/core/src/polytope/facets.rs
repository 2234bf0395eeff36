//! Facet (H-representation) systems for the catalog polytopes.
//!
//! The four systems used by the discrimination protocol (P4, P7, GHZ3, W3)
//! are written out explicitly; they are cross-validated against the vertex
//! representation by the test suite before anything relies on them. For the
//! remaining catalog entries the facets are enumerated once from the vertex
//! set by exact integer arithmetic: every d-subset of vertices that spans a
//! hyperplane with all vertices on one side is a facet. The catalogs are tiny
//! (at most 12 vertices in dimension 4), so brute force is exact and instant.

use num_rational::Rational64;

/// Linear inequality system: each entry `(a, b)` means `a . x <= b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetSystem {
    dim: usize,
    inequalities: Vec<(Vec<f64>, f64)>,
}

impl FacetSystem {
    pub fn new(dim: usize, inequalities: Vec<(Vec<f64>, f64)>) -> Self {
        assert!(inequalities.iter().all(|(a, _)| a.len() == dim));
        FacetSystem { dim, inequalities }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[(Vec<f64>, f64)] {
        &self.inequalities
    }

    /// Smallest slack `b - a . x` over all inequalities; negative means the
    /// point violates some inequality by that amount.
    pub fn min_slack(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.dim);
        self.inequalities
            .iter()
            .map(|(a, b)| b - a.iter().zip(point).map(|(ai, xi)| ai * xi).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        self.min_slack(point) >= -tol
    }
}

fn unit(dim: usize, i: usize, scale: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = scale;
    v
}

/// Facets of the full four-qubit polytope: the box [1/2, 1]^4 together with
/// `sum(x) - 2 x_i <= 2` for each coordinate.
pub fn p7_facets() -> FacetSystem {
    let mut ineqs = Vec::new();
    for i in 0..4 {
        ineqs.push((unit(4, i, 1.0), 1.0));
        ineqs.push((unit(4, i, -1.0), -0.5));
        let mut a = vec![1.0; 4];
        a[i] = -1.0;
        ineqs.push((a, 2.0));
    }
    FacetSystem::new(4, ineqs)
}

/// Facets of the sub-polytope left after removing the `(1/2,1/2,1/2,1)`-type
/// vertices: P7's system plus `sum(x) - 2 x_i >= 1` for each coordinate.
pub fn p4_facets() -> FacetSystem {
    let mut ineqs = p7_facets().inequalities.clone();
    for i in 0..4 {
        let mut a = vec![-1.0; 4];
        a[i] = 1.0;
        ineqs.push((a, -1.0));
    }
    FacetSystem::new(4, ineqs)
}

/// Facets of the three-qubit GHZ polytope.
pub fn ghz3_facets() -> FacetSystem {
    let mut ineqs = Vec::new();
    for i in 0..3 {
        ineqs.push((unit(3, i, 1.0), 1.0));
        ineqs.push((unit(3, i, -1.0), -0.5));
        let mut a = vec![1.0; 3];
        a[i] = -1.0;
        ineqs.push((a, 1.0));
    }
    FacetSystem::new(3, ineqs)
}

/// Facets of the three-qubit W polytope: GHZ3's system plus `sum(x) >= 2`.
pub fn w3_facets() -> FacetSystem {
    let mut ineqs = ghz3_facets().inequalities.clone();
    ineqs.push((vec![-1.0; 3], -2.0));
    FacetSystem::new(3, ineqs)
}

/// Enumerates the facets of the polytope spanned by `vertices` (exact
/// rational coordinates) by checking every d-subset. Returns the system in
/// unscaled coordinates.
pub(crate) fn derive_facets(vertices: &[Vec<Rational64>]) -> FacetSystem {
    let dim = vertices[0].len();
    assert!(vertices.iter().all(|v| v.len() == dim));
    // scale to integers with the common denominator
    let denom: i64 = vertices
        .iter()
        .flatten()
        .fold(1, |acc, r| lcm(acc, *r.denom()));
    let scaled: Vec<Vec<i64>> = vertices
        .iter()
        .map(|v| v.iter().map(|r| r.numer() * (denom / r.denom())).collect())
        .collect();

    let mut found: Vec<(Vec<i64>, i64)> = Vec::new();
    let mut subset = vec![0usize; dim];
    enumerate_subsets(scaled.len(), dim, &mut subset, 0, 0, &mut |chosen| {
        let v0 = &scaled[chosen[0]];
        let diffs: Vec<Vec<i64>> = chosen[1..]
            .iter()
            .map(|&i| {
                scaled[i]
                    .iter()
                    .zip(v0)
                    .map(|(a, b)| a - b)
                    .collect::<Vec<i64>>()
            })
            .collect();
        let Some(normal) = null_vector(&diffs, dim) else {
            return;
        };
        let bound: i64 = normal.iter().zip(v0).map(|(a, x)| a * x).sum();
        let mut side = 0i64;
        for v in &scaled {
            let s: i64 = normal.iter().zip(v).map(|(a, x)| a * x).sum::<i64>() - bound;
            if s != 0 {
                if side == 0 {
                    side = s.signum();
                } else if side != s.signum() {
                    return; // vertices on both sides: not a facet
                }
            }
        }
        if side == 0 {
            return; // all vertices on the plane: polytope is degenerate here
        }
        // orient so the polytope satisfies a . x <= b
        let (mut a, mut b) = (normal, bound);
        if side > 0 {
            for c in a.iter_mut() {
                *c = -*c;
            }
            b = -b;
        }
        let g = a
            .iter()
            .chain(std::iter::once(&b))
            .fold(0i64, |acc, &x| gcd(acc, x.abs()));
        if g > 1 {
            for c in a.iter_mut() {
                *c /= g;
            }
            b /= g;
        }
        if !found.iter().any(|(fa, fb)| *fa == a && *fb == b) {
            found.push((a, b));
        }
    });

    let inequalities = found
        .into_iter()
        .map(|(a, b)| {
            (
                a.iter().map(|&x| x as f64).collect::<Vec<f64>>(),
                b as f64 / denom as f64,
            )
        })
        .collect();
    FacetSystem::new(dim, inequalities)
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    subset: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        visit(subset);
        return;
    }
    for i in start..n {
        subset[depth] = i;
        enumerate_subsets(n, k, subset, depth + 1, i + 1, visit);
    }
}

/// Integer vector orthogonal to `dim - 1` row vectors of length `dim`, or
/// None if they are linearly dependent. Computed from cofactor minors.
fn null_vector(rows: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    assert_eq!(rows.len(), dim - 1);
    let mut normal = vec![0i64; dim];
    let mut nonzero = false;
    for (skip, out) in normal.iter_mut().enumerate() {
        let minor: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != skip)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let d = det(&minor);
        let signed = if skip % 2 == 0 { d } else { -d };
        *out = signed;
        nonzero |= signed != 0;
    }
    nonzero.then_some(normal)
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("catalog polytopes live in dimension <= 4"),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn derive_facets_of_a_square() {
        let square = vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        let fs = derive_facets(&square);
        assert_eq!(fs.inequalities().len(), 4);
        assert!(fs.contains(&[0.5, 0.5], 0.0));
        assert!(!fs.contains(&[1.5, 0.5], 1e-9));
        assert!(fs.contains(&[1.0, 1.0], 0.0));
    }

    #[test]
    fn derive_facets_of_a_tetrahedron() {
        let tet = vec![
            vec![rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        ];
        let fs = derive_facets(&tet);
        assert_eq!(fs.inequalities().len(), 4);
        assert!(fs.contains(&[0.25, 0.25, 0.25], 0.0));
        assert!(!fs.contains(&[0.4, 0.4, 0.4], 1e-9));
    }

    #[test]
    fn fixed_systems_have_expected_shapes() {
        assert_eq!(p7_facets().inequalities().len(), 12);
        assert_eq!(p4_facets().inequalities().len(), 16);
        assert_eq!(ghz3_facets().inequalities().len(), 9);
        assert_eq!(w3_facets().inequalities().len(), 10);
    }

    #[test]
    fn w3_excludes_the_bottom_vertex() {
        let fs = w3_facets();
        assert!(!fs.contains(&[0.5, 0.5, 0.5], 1e-9));
        assert!(fs.contains(&[1.0, 1.0, 1.0], 0.0));
        assert!(fs.contains(&[0.5, 0.5, 1.0], 0.0));
    }
}
