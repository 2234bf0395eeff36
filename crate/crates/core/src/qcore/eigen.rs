//! Hermitian eigenproblems: closed form for 2x2, cyclic Jacobi for larger.

use num_complex::Complex64;

/// Eigenvalues of a 2x2 Hermitian matrix, largest first.
///
/// Closed form: h ± sqrt(((a-d)/2)^2 + |b|^2) with h = (a+d)/2. For a
/// unit-trace density matrix this is 1/2 ± sqrt((rho00-rho11)^2/4 + |rho01|^2),
/// so a degenerate marginal yields exactly 1/2.
pub fn eig2_hermitian(a: f64, b: Complex64, d: f64) -> (f64, f64) {
    let h = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (h + r, h - r)
}

/// Full eigendecomposition of an n x n Hermitian matrix by cyclic Jacobi
/// rotations. Returns eigenvalues (descending) and the matching eigenvectors
/// as columns of `v` (row-major, `v[i * n + j]` = component i of vector j),
/// so that `m = v diag(w) v^dagger`.
pub fn eigh(m: &[Complex64], n: usize) -> (Vec<f64>, Vec<Complex64>) {
    assert_eq!(m.len(), n * n);
    let mut a = m.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // With U[p][p] = U[q][q] = c, U[p][q] = s*e^{i phi},
                // U[q][p] = -s*e^{-i phi}, the (p,q) entry of U^dagger A U is
                // e^{i phi} (c s (app - aqq) + (c^2 - s^2) r); it vanishes for
                // tan(2 theta) = 2r / (aqq - app).
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (c, s) = (theta.cos(), theta.sin());
                let upp = Complex64::new(c, 0.0);
                let upq = phase * s;
                let uqp = -phase.conj() * s;
                let uqq = Complex64::new(c, 0.0);
                // A <- U^dagger A U ; apply to columns then rows.
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * upp + aiq * uqp;
                    a[i * n + q] = aip * upq + aiq * uqq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = upp.conj() * apj + uqp.conj() * aqj;
                    a[q * n + j] = upq.conj() * apj + uqq.conj() * aqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip * upp + viq * uqp;
                    v[i * n + q] = vip * upq + viq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigvals: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| eigvals[j].partial_cmp(&eigvals[i]).unwrap());

    let w: Vec<f64> = order.iter().map(|&i| eigvals[i]).collect();
    let mut vs = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vs[i * n + new_j] = v[i * n + old_j];
        }
    }
    (w, vs)
}
