//! Exact-rational feasibility for point-in-hull queries.
//!
//! Membership is decided by minimizing the L1 residual between the query
//! point and a convex combination of the vertices. The minimum is computed by
//! a dense tableau simplex over `BigRational` with Bland's rule, so catalog
//! vertices test as contained exactly, with no floating tolerance disputes.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, One, Signed, Zero};

pub(crate) fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub(crate) fn big_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_f64(x)
}

/// Minimal L1 distance from `point` to the convex hull of `vertices`.
///
/// Formulated as: minimize sum(e+ + e-) subject to
/// `sum_v w_v v + e+ - e- = point`, `sum_v w_v = 1`, all variables >= 0.
/// The first vertex's weight is eliminated through the sum constraint.
pub(crate) fn l1_distance_to_hull(
    vertices: &[Vec<BigRational>],
    point: &[BigRational],
) -> BigRational {
    let dim = point.len();
    let k = vertices.len();
    assert!(k >= 1 && vertices.iter().all(|v| v.len() == dim));

    // variables: u_1..u_{k-1} | s | e+_0..e+_{dim-1} | e-_0..e-_{dim-1}
    let nvars = (k - 1) + 1 + 2 * dim;
    let nrows = dim + 1;
    let col_s = k - 1;
    let col_ep = k;
    let col_em = k + dim;

    let zero = BigRational::zero();
    let one = BigRational::one();

    let mut tab = vec![vec![zero.clone(); nvars + 1]; nrows];
    let mut basis = vec![0usize; nrows];

    for i in 0..dim {
        for j in 1..k {
            tab[i][j - 1] = &vertices[j][i] - &vertices[0][i];
        }
        tab[i][col_ep + i] = one.clone();
        tab[i][col_em + i] = -one.clone();
        tab[i][nvars] = &point[i] - &vertices[0][i];
        if tab[i][nvars].is_negative() {
            for cell in tab[i].iter_mut() {
                *cell = -std::mem::take(cell);
            }
            basis[i] = col_em + i;
        } else {
            basis[i] = col_ep + i;
        }
    }
    for cell in tab[dim].iter_mut().take(k - 1) {
        *cell = one.clone();
    }
    tab[dim][col_s] = one.clone();
    tab[dim][nvars] = one.clone();
    basis[dim] = col_s;

    let cost = |var: usize| -> BigRational {
        if var >= col_ep {
            one.clone()
        } else {
            zero.clone()
        }
    };

    loop {
        // reduced costs: c_j - c_B . (column j in current tableau)
        let mut entering = None;
        #[allow(clippy::needless_range_loop)] // j addresses a column across rows
        'cols: for j in 0..nvars {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost(j);
            for r in 0..nrows {
                if basis[r] >= col_ep {
                    rc -= &tab[r][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(j) = entering else {
            break;
        };

        // ratio test, Bland tie-break on basic variable index
        let mut leaving: Option<(usize, BigRational)> = None;
        for r in 0..nrows {
            if tab[r][j].is_positive() {
                let ratio = &tab[r][nvars] / &tab[r][j];
                let better = match &leaving {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
        }
        let (r, _) = leaving.expect("L1 objective is bounded below; a pivot row must exist");

        let pivot = tab[r][j].clone();
        for cell in tab[r].iter_mut() {
            *cell /= &pivot;
        }
        let pivot_row = tab[r].clone();
        for (rr, row) in tab.iter_mut().enumerate() {
            if rr != r && !row[j].is_zero() {
                let factor = row[j].clone();
                for (cell, p) in row.iter_mut().zip(&pivot_row) {
                    *cell -= &factor * p;
                }
            }
        }
        basis[r] = j;
    }

    let mut obj = BigRational::zero();
    for r in 0..nrows {
        if basis[r] >= col_ep {
            obj += &tab[r][nvars];
        }
    }
    obj
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn verts(rows: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect()
    }

    #[test]
    fn vertex_and_centroid_have_zero_distance() {
        // unit square in 2D
        let square = verts(&[
            &[(0, 1), (0, 1)],
            &[(1, 1), (0, 1)],
            &[(0, 1), (1, 1)],
            &[(1, 1), (1, 1)],
        ]);
        assert!(l1_distance_to_hull(&square, &[rat(0, 1), rat(0, 1)]).is_zero());
        assert!(l1_distance_to_hull(&square, &[rat(1, 2), rat(1, 2)]).is_zero());
        assert!(l1_distance_to_hull(&square, &[rat(1, 3), rat(2, 3)]).is_zero());
    }

    #[test]
    fn outside_distance_is_exact() {
        let square = verts(&[
            &[(0, 1), (0, 1)],
            &[(1, 1), (0, 1)],
            &[(0, 1), (1, 1)],
            &[(1, 1), (1, 1)],
        ]);
        // (3/2, 1/2): L1 distance 1/2
        assert_eq!(
            l1_distance_to_hull(&square, &[rat(3, 2), rat(1, 2)]),
            rat(1, 2)
        );
        // (2, 2): distance 1 in each coordinate
        assert_eq!(
            l1_distance_to_hull(&square, &[rat(2, 1), rat(2, 1)]),
            rat(2, 1)
        );
    }

    #[test]
    fn segment_in_three_dimensions() {
        let seg = verts(&[&[(0, 1), (0, 1), (0, 1)], &[(1, 1), (1, 1), (1, 1)]]);
        assert!(l1_distance_to_hull(&seg, &[rat(1, 4), rat(1, 4), rat(1, 4)]).is_zero());
        // midpoint shifted off the diagonal
        assert_eq!(
            l1_distance_to_hull(&seg, &[rat(1, 2), rat(1, 2), rat(3, 4)]),
            rat(1, 4)
        );
    }

    #[test]
    fn single_vertex_hull() {
        let pt = verts(&[&[(1, 2), (1, 2)]]);
        assert!(l1_distance_to_hull(&pt, &[rat(1, 2), rat(1, 2)]).is_zero());
        assert_eq!(l1_distance_to_hull(&pt, &[rat(1, 2), rat(1, 1)]), rat(1, 2));
    }
}
