use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense symmetric `n x n` matrix with a structurally zero diagonal.
///
/// Only the values for unordered pairs matter; `set` writes both triangles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Constant off-diagonal matrix.
    pub fn constant(n: usize, value: f64) -> Self {
        let mut m = Self::zeros(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    m.data[u * n + v] = value;
                }
            }
        }
        m
    }

    /// Builds from a full row-major matrix. Fails on asymmetry beyond `tol` or a non-zero diagonal.
    pub fn from_dense(n: usize, data: Vec<f64>, tol: f64) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(data.len(), n * n));
        }
        for u in 0..n {
            if data[u * n + u] != 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "self-loop: non-zero diagonal entry at vertex {u}"
                )));
            }
            for v in (u + 1)..n {
                let (a, b) = (data[u * n + v], data[v * n + u]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidGraph(format!("non-finite entry at ({u},{v})")));
                }
                if (a - b).abs() > tol {
                    return Err(Error::InvalidGraph(format!(
                        "asymmetric matrix at ({u},{v}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    /// Sets `(u,v)` and `(v,u)`. Writes to the diagonal are ignored.
    #[inline]
    pub fn set(&mut self, u: usize, v: usize, value: f64) {
        if u != v {
            self.data[u * self.n + v] = value;
            self.data[v * self.n + u] = value;
        }
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Iterates `(u, v, value)` over unordered pairs `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).map(move |v| (u, v, self.get(u, v))))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = Self::zeros(self.n);
        for (u, v, x) in self.pairs() {
            out.set(u, v, f(x));
        }
        out
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = Self::zeros(self.n);
        for (u, v, x) in self.pairs() {
            out.set(u, v, f(x, other.get(u, v)));
        }
        Ok(out)
    }

    /// Largest off-diagonal entry, or `None` when `n < 2`.
    pub fn max_pair(&self) -> Option<f64> {
        self.pairs().map(|(_, _, x)| x).reduce(f64::max)
    }

    /// Restriction to the given vertices, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let mut out = Self::zeros(k);
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                out.set(i, j, self.get(u, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetry_and_diagonal() {
        assert!(SymMatrix::from_dense(2, vec![0.0, 1.0, 0.5, 0.0], 1e-9).is_err());
        assert!(SymMatrix::from_dense(2, vec![1.0, 0.0, 0.0, 0.0], 1e-9).is_err());
        assert!(SymMatrix::from_dense(2, vec![0.0, 1.0, 1.0 + 1e-12, 0.0], 1e-9).is_ok());
    }

    #[test]
    fn induced_keeps_pair_values() {
        let mut m = SymMatrix::zeros(4);
        m.set(1, 3, 0.25);
        m.set(0, 3, -1.0);
        let sub = m.induced(&[1, 3]);
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.get(0, 1), 0.25);
        assert_eq!(sub.get(1, 0), 0.25);
    }
}
