use super::schur::{schur, triangular_eigenvectors};
use super::ComplexMatrix;
use crate::error::Result;
use crate::scalar::{Real, C};

/// An eigenvalue together with a unit-norm eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair<T: Real = f64> {
    pub value: C<T>,
    pub vector: Vec<C<T>>,
}

/// All eigenpairs of a square matrix, in the order they appear on the
/// diagonal of the Schur factor.
pub fn eig_dense<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<EigenPair<T>>> {
    let s = schur(a)?;
    let x = triangular_eigenvectors(&s.r);
    let v = s.q.matmul(&x);
    let values = s.r.diagonal();
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(k, value)| {
            let mut vector = v.col(k).to_vec();
            crate::scalar::normalize(&mut vector);
            EigenPair { value, vector }
        })
        .collect())
}

/// Eigenvalues only.
pub fn eigvals<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<C<T>>> {
    Ok(schur(a)?.eigenvalues())
}
