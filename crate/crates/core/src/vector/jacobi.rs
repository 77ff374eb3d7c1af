//! Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.

use super::SpectrumModel;
use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_CAP: usize = 512;

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Sorted eigenvalues of a symmetric positive definite matrix.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>]) -> Result<SpectrumModel> {
    symmetric_eigenvalues_with_cap(matrix, DEFAULT_DIMENSION_CAP)
}

#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues_with_cap(matrix: &[Vec<f64>], cap: usize) -> Result<SpectrumModel> {
    let d = matrix.len();
    if d == 0 {
        return Err(Error::Precondition("matrix is empty".into()));
    }
    if d > cap {
        return Err(Error::Precondition(format!("dimension {d} exceeds cap {cap}")));
    }
    if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != d) {
        return Err(Error::Precondition(format!(
            "row {i} has {} entries, expected {d}",
            row.len()
        )));
    }
    if matrix.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    let scale = matrix.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..d {
        for j in i + 1..d {
            let gap = (matrix[i][j] - matrix[j][i]).abs();
            if gap > SYMMETRY_TOL * scale {
                return Err(Error::Asymmetric { row: i, col: j, gap });
            }
        }
    }

    // Work on the symmetrized copy.
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| 0.5 * (matrix[i][j] + matrix[j][i])).collect())
        .collect();
    let frob = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-15 * frob;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    let residual = off_diagonal_norm(&a);
    if residual > 1e-12 * frob {
        return Err(Error::Precondition(format!(
            "Jacobi iteration did not converge (off-diagonal residual {residual:e})"
        )));
    }

    let mut eigenvalues: Vec<f64> = (0..d).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    if eigenvalues[0] <= 0.0 {
        return Err(Error::NonPositiveEigenvalue {
            value: eigenvalues[0],
        });
    }
    SpectrumModel::finite(eigenvalues)
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                sum += x * x;
            }
        }
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = symmetric_eigenvalues(&[vec![4.0, 0.0], vec![0.0, 16.0]]).unwrap();
        assert_eq!(s.eigenvalues(), &[4.0, 16.0]);
        let s = symmetric_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((s.eigenvalues()[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues()[1] - 3.0).abs() < 1e-15);
        let err = symmetric_eigenvalues(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveEigenvalue { .. }));
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        let err = symmetric_eigenvalues(&[vec![1.0, 2.0], vec![2.1, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Asymmetric { row: 0, col: 1, .. }));
        let big = vec![vec![0.0; 3]; 3];
        assert!(symmetric_eigenvalues_with_cap(&big, 2).is_err());
        assert!(symmetric_eigenvalues(&[vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn discrete_laplacian() {
        // Tridiagonal (2, −1): eigenvalues 2 − 2cos(kπ/(d+1)).
        let d: usize = 40;
        let m: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2.0,
                        1 => -1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        let s = symmetric_eigenvalues(&m).unwrap();
        for (k, l) in s.eigenvalues().iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (d + 1) as f64).cos();
            assert!((l - exact).abs() < 1e-13, "k={k}: {l} vs {exact}");
        }
    }
}
