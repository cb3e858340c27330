//! Cyclic Jacobi eigensolver for the small real-symmetric matrices that
//! Fraxis (3x3) and FQS (4x4) reconstruct.

/// Eigen-decomposition of a symmetric matrix stored row-major as `N x N`.
#[derive(Debug, Clone, Copy)]
pub struct SymEigen<const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [f64; N],
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`.
    pub vectors: [[f64; N]; N],
}

const MAX_SWEEPS: usize = 64;
const OFF_DIAG_TOL: f64 = 1e-12;

fn off_diagonal_norm<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a symmetric matrix with cyclic Jacobi rotations until the
/// off-diagonal Frobenius norm drops below 1e-12 (relative to the matrix
/// scale when that exceeds 1).
pub fn jacobi_eigen<const N: usize>(matrix: &[[f64; N]; N]) -> SymEigen<N> {
    let mut a = *matrix;
    // Symmetrize against round-off in the caller's reconstruction.
    for i in 0..N {
        for j in (i + 1)..N {
            let m = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = m;
            a[j][i] = m;
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let tol = OFF_DIAG_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = std::array::from_fn(|k| a[order[k]][order[k]]);
    let vectors = std::array::from_fn(|k| {
        let col = order[k];
        std::array::from_fn(|i| v[i][col])
    });
    SymEigen { values, vectors }
}

/// Evaluates `x^T A x`.
pub fn quadratic_form<const N: usize>(a: &[[f64; N]; N], x: &[f64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            s += x[i] * a[i][j] * x[j];
        }
    }
    s
}

pub fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

/// Unit vector in the lowest eigenspace of `eig` closest to `current`.
///
/// Eigenvalues within `tol` of the minimum are treated as degenerate; the
/// result is the normalized projection of `current` onto that eigenspace,
/// falling back to the first eigenvector when the projection vanishes.
pub fn min_eigvec_closest_to<const N: usize>(eig: &SymEigen<N>, current: &[f64; N], tol: f64) -> [f64; N] {
    let lambda_min = eig.values[0];
    let mut proj = [0.0; N];
    for k in 0..N {
        if eig.values[k] - lambda_min > tol {
            break;
        }
        let c = dot(&eig.vectors[k], current);
        for i in 0..N {
            proj[i] += c * eig.vectors[k][i];
        }
    }
    let n = norm(&proj);
    if n > 1e-8 {
        proj.map(|x| x / n)
    } else {
        eig.vectors[0]
    }
}
