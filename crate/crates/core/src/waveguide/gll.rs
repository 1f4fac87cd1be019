//! Gauss-Lobatto-Legendre nodes, weights and the nodal differentiation matrix
//! on the reference interval `[-1, 1]`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// GLL rule of polynomial degree `p` with `p + 1` ascending nodes.
#[derive(Debug, Clone)]
pub struct GllRule<T: Real = f64> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    /// `d[i][j] = ℓⱼ′(xᵢ)` for the Lagrange basis `ℓⱼ` on the nodes.
    pub d: Vec<Vec<T>>,
}

/// `(P_p(x), P_{p−1}(x))` by the three-term recurrence.
fn legendre<T: Real>(p: usize, x: T) -> (T, T) {
    let (mut prev, mut cur) = (T::one(), x);
    if p == 0 {
        return (prev, T::zero());
    }
    for j in 1..p {
        let jf = T::lit(j as f64);
        let next = ((T::lit(2.0) * jf + T::one()) * x * cur - jf * prev) / (jf + T::one());
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

impl<T: Real> GllRule<T> {
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidConfig("GLL rule needs degree >= 1".into()));
        }
        let pf = T::lit(p as f64);
        let mut nodes = vec![T::zero(); p + 1];
        for (i, x) in nodes.iter_mut().enumerate() {
            // Chebyshev-Gauss-Lobatto start, then Newton on x P_p − P_{p−1}
            let mut xi = -(T::PI() * T::lit(i as f64) / pf).cos();
            if i > 0 && i < p {
                for _ in 0..100 {
                    let (pp, pm) = legendre(p, xi);
                    let dx = (xi * pp - pm) / ((pf + T::one()) * pp);
                    xi -= dx;
                    if dx.abs() <= T::epsilon() {
                        break;
                    }
                }
            }
            *x = xi;
        }
        let vals: Vec<T> = nodes.iter().map(|&x| legendre(p, x).0).collect();
        let scale = T::lit(2.0) / (pf * (pf + T::one()));
        let weights = vals.iter().map(|&v| scale / (v * v)).collect();
        let corner = pf * (pf + T::one()) / T::lit(4.0);
        let mut d = vec![vec![T::zero(); p + 1]; p + 1];
        for i in 0..=p {
            for j in 0..=p {
                d[i][j] = if i != j {
                    vals[i] / (vals[j] * (nodes[i] - nodes[j]))
                } else if i == 0 {
                    -corner
                } else if i == p {
                    corner
                } else {
                    T::zero()
                };
            }
        }
        Ok(Self { nodes, weights, d })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }
}
