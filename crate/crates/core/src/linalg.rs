//! Small dense symmetric eigensolver.
//!
//! Used for the 2×2 and 4×4 reduced density matrices and for the
//! tridiagonal projections built by the Krylov solver. Sizes stay below a
//! few hundred, where cyclic Jacobi is accurate to working precision and
//! simple enough to run generically over [`Scalar`].

use crate::scalar::Scalar;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Row-major `n×n`; column `k` is the eigenvector of `values[k]`.
    pub vectors: Vec<T>,
    pub n: usize,
}

impl<T: Scalar> SymEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.n).map(|r| self.vectors[r * self.n + k]).collect()
    }
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues<T: Scalar>(a: &[T], n: usize) -> Vec<T> {
    jacobi(a, n, false).values
}

/// Full eigen-decomposition of the symmetric `n×n` row-major matrix `a`.
pub fn sym_eigen<T: Scalar>(a: &[T], n: usize) -> SymEigen<T> {
    jacobi(a, n, true)
}

fn jacobi<T: Scalar>(a: &[T], n: usize, want_vectors: bool) -> SymEigen<T> {
    assert_eq!(a.len(), n * n, "matrix is not {n}x{n}");
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); if want_vectors { n * n } else { 0 }];
    if want_vectors {
        for i in 0..n {
            v[i * n + i] = T::one();
        }
    }
    let two = T::lit(2.0);
    let eps = T::epsilon();

    for _sweep in 0..64 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for p in 0..n {
            diag += m[p * n + p] * m[p * n + p];
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off <= eps * eps * (diag + off) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        m[x * n + x]
            .partial_cmp(&m[y * n + y])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let vectors = if want_vectors {
        let mut out = vec![T::zero(); n * n];
        for (new_k, &old_k) in order.iter().enumerate() {
            for r in 0..n {
                out[r * n + new_k] = v[r * n + old_k];
            }
        }
        out
    } else {
        Vec::new()
    };
    SymEigen { values, vectors, n }
}
