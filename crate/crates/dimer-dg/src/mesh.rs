//! 1D partition of the truncated domain and the affine map to the
//! reference element (-1, 1).

use crate::{Error, Result};

/// Partition of [x_a, x_b] into non-overlapping elements.
///
/// Interfaces are shared: an interface value is always evaluated as a
/// labeled trace (minus = from the element on the left, plus = from the
/// element on the right), never resolved by the mesh itself.
#[derive(Clone, Debug)]
pub struct Mesh1D {
    pub x_a: f64,
    pub x_b: f64,
    /// N+1 strictly increasing vertices; vertices[0] = x_a, vertices[N] = x_b.
    pub vertices: Vec<f64>,
    /// Element widths h_j > 0.
    pub widths: Vec<f64>,
    pub h_max: f64,
    /// h_max / min h_j; 1 for uniform meshes.
    pub regularity_bound: f64,
}

impl Mesh1D {
    /// Uniform mesh with `n_elements` equal elements.
    pub fn uniform(x_a: f64, x_b: f64, n_elements: usize) -> Result<Self> {
        if x_b <= x_a {
            return Err(Error::InvalidInterval { xa: x_a, xb: x_b });
        }
        if n_elements == 0 {
            return Err(Error::EmptyMesh);
        }
        let h = (x_b - x_a) / n_elements as f64;
        let mut vertices: Vec<f64> = (0..=n_elements).map(|i| x_a + i as f64 * h).collect();
        // pin the right endpoint exactly
        vertices[n_elements] = x_b;
        Self::from_vertices(vertices)
    }

    /// Mesh from an explicit vertex list (non-uniform meshes are allowed).
    pub fn from_vertices(vertices: Vec<f64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::EmptyMesh);
        }
        let x_a = vertices[0];
        let x_b = *vertices.last().unwrap();
        if x_b <= x_a {
            return Err(Error::InvalidInterval { xa: x_a, xb: x_b });
        }
        let widths: Vec<f64> = vertices.windows(2).map(|v| v[1] - v[0]).collect();
        if widths.iter().any(|&h| h <= 0.0) {
            return Err(Error::InvalidInterval { xa: x_a, xb: x_b });
        }
        let h_max = widths.iter().cloned().fold(f64::MIN, f64::max);
        let h_min = widths.iter().cloned().fold(f64::MAX, f64::min);
        Ok(Self {
            x_a,
            x_b,
            vertices,
            widths,
            h_max,
            regularity_bound: h_max / h_min,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.widths.len()
    }

    /// Element midpoint x_j.
    pub fn center(&self, j: usize) -> f64 {
        0.5 * (self.vertices[j] + self.vertices[j + 1])
    }

    /// Maps x in element j to r = 2/h_j (x - x_j) in [-1, 1].
    pub fn to_reference(&self, j: usize, x: f64) -> Result<f64> {
        let (left, right) = (self.vertices[j], self.vertices[j + 1]);
        // tolerate round-off at the shared endpoints
        let tol = 1e-12 * self.widths[j];
        if x < left - tol || x > right + tol {
            return Err(Error::OutsideElement {
                x,
                element: j,
                left,
                right,
            });
        }
        let r = 2.0 / self.widths[j] * (x - self.center(j));
        Ok(r.clamp(-1.0, 1.0))
    }

    /// Inverse of `to_reference`.
    pub fn from_reference(&self, j: usize, r: f64) -> f64 {
        self.center(j) + 0.5 * self.widths[j] * r
    }

    /// Index of the element containing x (endpoints resolve to the left
    /// element except at x_a).
    pub fn element_of(&self, x: f64) -> usize {
        let n = self.n_elements();
        match self
            .vertices
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.saturating_sub(1).min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }
}
