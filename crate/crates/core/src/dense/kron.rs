use super::ComplexMatrix;
use crate::scalar::Real;

/// Kronecker product: block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (n, m) = (a.rows(), a.cols());
    let (p, q) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(n * p, m * q);
    for j in 0..m {
        for i in 0..n {
            let aij = a[(i, j)];
            if aij.re == T::zero() && aij.im == T::zero() {
                continue;
            }
            for l in 0..q {
                for k in 0..p {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `vec(X)` as a column-major copy.
pub fn vec_of<T: Real>(x: &ComplexMatrix<T>) -> Vec<crate::scalar::C<T>> {
    x.as_slice().to_vec()
}
