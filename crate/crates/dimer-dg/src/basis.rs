//! Normalized Legendre modal basis on (-1, 1), Gauss-Legendre quadrature,
//! and the Gauss-Radau and L2 projections onto the broken polynomial space.

use crate::mesh::Mesh1D;
use crate::{Error, Result};

/// Number of Gauss nodes used per element for nonlinear terms, forcing,
/// projections and error quadrature.
pub const NONLINEAR_QUAD_NODES: usize = 17;

/// Gauss-Legendre rule on the reference element (-1, 1).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * f(r))
            .sum()
    }
}

/// Gauss-Legendre nodes and weights by Newton iteration on the Legendre
/// polynomial roots. Exact for polynomials of degree 2 n_nodes - 1.
pub fn gauss_legendre(n_nodes: usize) -> Result<QuadratureRule> {
    if n_nodes == 0 {
        return Err(Error::EmptyQuadrature);
    }
    let n = n_nodes;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (_, d2) = legendre_with_deriv(n, x);
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Normalization factor of the orthonormal Legendre basis,
/// phi_n = sqrt((2n+1)/2) P_n.
fn norm_factor(n: usize) -> f64 {
    ((2.0 * n as f64 + 1.0) / 2.0).sqrt()
}

/// Values (phi_0(r), ..., phi_q(r)) of the orthonormal Legendre basis.
pub fn eval_basis(q: usize, r: f64) -> Vec<f64> {
    debug_assert!((-1.0..=1.0).contains(&r), "r = {r} outside [-1, 1]");
    let mut out = Vec::with_capacity(q + 1);
    let mut p0 = 1.0;
    let mut p1 = r;
    out.push(norm_factor(0) * p0);
    if q >= 1 {
        out.push(norm_factor(1) * p1);
    }
    for n in 2..=q {
        let nf = n as f64;
        let p2 = ((2.0 * nf - 1.0) * r * p1 - (nf - 1.0) * p0) / nf;
        out.push(norm_factor(n) * p2);
        p0 = p1;
        p1 = p2;
    }
    out
}

/// Derivatives (phi_0'(r), ..., phi_q'(r)); uses the recurrence
/// P'_{n+1} = P'_{n-1} + (2n+1) P_n, valid on the closed interval.
pub fn eval_basis_deriv(q: usize, r: f64) -> Vec<f64> {
    let mut p = vec![0.0; q + 2];
    let mut dp = vec![0.0; q + 2];
    p[0] = 1.0;
    if q + 1 >= 1 {
        p[1] = r;
        dp[1] = 1.0;
    }
    for n in 1..=q {
        let nf = n as f64;
        p[n + 1] = ((2.0 * nf + 1.0) * r * p[n] - nf * p[n - 1]) / (nf + 1.0);
        dp[n + 1] = dp[n - 1] + (2.0 * nf + 1.0) * p[n];
    }
    (0..=q).map(|n| norm_factor(n) * dp[n]).collect()
}

/// Reference-element tables for a degree-q modal space: basis values and
/// derivatives at the quadrature nodes, endpoint traces, and the exact
/// stiffness matrix S[m][n] = int phi_m' phi_n dr.
#[derive(Clone, Debug)]
pub struct ModalBasis {
    pub degree: usize,
    pub quad: QuadratureRule,
    /// phi[k][n]: basis n at quadrature node k.
    pub phi: Vec<Vec<f64>>,
    /// dphi[k][n]: basis derivative at node k.
    pub dphi: Vec<Vec<f64>>,
    /// phi_n(-1)
    pub phi_left: Vec<f64>,
    /// phi_n(+1)
    pub phi_right: Vec<f64>,
    /// Row-major (q+1) x (q+1) stiffness matrix int phi_m' phi_n dr.
    pub stiffness: Vec<f64>,
}

impl ModalBasis {
    pub fn new(degree: usize, n_quad: usize) -> Result<Self> {
        let quad = gauss_legendre(n_quad)?;
        let phi: Vec<Vec<f64>> = quad.nodes.iter().map(|&r| eval_basis(degree, r)).collect();
        let dphi: Vec<Vec<f64>> = quad
            .nodes
            .iter()
            .map(|&r| eval_basis_deriv(degree, r))
            .collect();
        let phi_left = eval_basis(degree, -1.0);
        let phi_right = eval_basis(degree, 1.0);
        // int P_m' P_n dr = 2 when m > n and m + n odd, else 0
        let np = degree + 1;
        let mut stiffness = vec![0.0; np * np];
        for m in 0..np {
            for n in 0..np {
                if m > n && (m + n) % 2 == 1 {
                    stiffness[m * np + n] = 2.0 * norm_factor(m) * norm_factor(n);
                }
            }
        }
        Ok(Self {
            degree,
            quad,
            phi,
            dphi,
            phi_left,
            phi_right,
            stiffness,
        })
    }

    /// Standard tables with the 17-node nonlinear-term rule.
    pub fn for_degree(degree: usize) -> Result<Self> {
        Self::new(degree, NONLINEAR_QUAD_NODES)
    }

    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }
}

/// Which endpoint the Gauss-Radau projection matches exactly: `Plus`
/// matches the left element endpoint, `Minus` the right one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadauSide {
    Plus,
    Minus,
}

/// Element-wise Gauss-Radau projection of a scalar function onto the
/// degree-q broken polynomial space. Per element the result matches the
/// moments of f against polynomials of degree <= q-1 and matches f exactly
/// at the inflow endpoint. Returns the modal coefficient field, element-major.
pub fn gauss_radau_project(
    f: impl Fn(f64) -> f64,
    mesh: &Mesh1D,
    q: usize,
    side: RadauSide,
) -> Vec<f64> {
    let basis = ModalBasis::for_degree(q).expect("basis tables");
    let np = q + 1;
    let mut coeffs = vec![0.0; mesh.n_elements() * np];
    for j in 0..mesh.n_elements() {
        let c = &mut coeffs[j * np..(j + 1) * np];
        // moment conditions are diagonal in the orthonormal basis
        for n in 0..q {
            let mut acc = 0.0;
            for (k, (&r, &w)) in basis.quad.nodes.iter().zip(&basis.quad.weights).enumerate() {
                acc += w * f(mesh.from_reference(j, r)) * basis.phi[k][n];
            }
            c[n] = acc;
        }
        // endpoint condition fixes the last coefficient
        let (endpoint_x, phi_end) = match side {
            RadauSide::Plus => (mesh.vertices[j], &basis.phi_left),
            RadauSide::Minus => (mesh.vertices[j + 1], &basis.phi_right),
        };
        let mut partial = 0.0;
        for n in 0..q {
            partial += c[n] * phi_end[n];
        }
        c[q] = (f(endpoint_x) - partial) / phi_end[q];
    }
    coeffs
}

/// Element-wise L2 projection via quadrature: c_n = int f phi_n dr.
pub fn l2_project(f: impl Fn(f64) -> f64, mesh: &Mesh1D, q: usize) -> Vec<f64> {
    let basis = ModalBasis::for_degree(q).expect("basis tables");
    let np = q + 1;
    let mut coeffs = vec![0.0; mesh.n_elements() * np];
    for j in 0..mesh.n_elements() {
        for (k, (&r, &w)) in basis.quad.nodes.iter().zip(&basis.quad.weights).enumerate() {
            let fv = w * f(mesh.from_reference(j, r));
            for n in 0..np {
                coeffs[j * np + n] += fv * basis.phi[k][n];
            }
        }
    }
    coeffs
}

/// Reconstruct a single-variable coefficient field at x.
pub fn reconstruct(coeffs: &[f64], mesh: &Mesh1D, q: usize, x: f64) -> f64 {
    let j = mesh.element_of(x);
    let r = mesh.to_reference(j, x).expect("x inside located element");
    let phi = eval_basis(q, r);
    let np = q + 1;
    coeffs[j * np..(j + 1) * np]
        .iter()
        .zip(&phi)
        .map(|(c, p)| c * p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let q = gauss_legendre(1).unwrap();
        assert_eq!(q.nodes, vec![0.0]);
        assert!((q.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let q = gauss_legendre(2).unwrap();
        let x = 1.0 / 3.0_f64.sqrt();
        assert!((q.nodes[0] + x).abs() < 1e-15);
        assert!((q.nodes[1] - x).abs() < 1e-15);
        assert!((q.weights[0] - 1.0).abs() < 1e-15);
        assert!((q.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seventeen_point_rule_exactness() {
        let q = gauss_legendre(17).unwrap();
        assert!(q.weights.iter().all(|&w| w > 0.0));
        let sum: f64 = q.weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        // symmetric nodes
        for i in 0..17 {
            assert!((q.nodes[i] + q.nodes[16 - i]).abs() < 1e-14);
        }
        // integrates x^32 exactly: 2/33
        let v = q.integrate(|x| x.powi(32));
        assert!((v - 2.0 / 33.0).abs() < 1e-13);
        // odd monomials vanish
        assert!(q.integrate(|x| x.powi(31)).abs() < 1e-14);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn basis_values() {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((eval_basis(0, 0.37)[0] - inv_sqrt2).abs() < 1e-15);
        let v = eval_basis(1, 1.0);
        assert!((v[0] - inv_sqrt2).abs() < 1e-15);
        assert!((v[1] - (1.5f64).sqrt()).abs() < 1e-15);
        let v = eval_basis(3, 0.0);
        assert!(v[1].abs() < 1e-15 && v[3].abs() < 1e-15);
    }

    #[test]
    fn basis_orthonormality() {
        let quad = gauss_legendre(12).unwrap();
        let q = 5;
        for m in 0..=q {
            for n in 0..=q {
                let v = quad.integrate(|r| eval_basis(q, r)[m] * eval_basis(q, r)[n]);
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!(
                    (v - expect).abs() < 1e-13,
                    "orthonormality failed at ({m},{n}): {v}"
                );
            }
        }
    }

    #[test]
    fn derivative_tables_match_finite_differences() {
        let q = 4;
        let eps = f64::EPSILON.powf(1.0 / 3.0);
        for &r in &[-0.9, -0.3, 0.0, 0.5, 0.8] {
            let d = eval_basis_deriv(q, r);
            let vp = eval_basis(q, r + eps);
            let vm = eval_basis(q, r - eps);
            for n in 0..=q {
                let fd = (vp[n] - vm[n]) / (2.0 * eps);
                assert!(
                    (d[n] - fd).abs() < 1e-9 * d[n].abs().max(1.0),
                    "derivative mismatch n={n} r={r}: {} vs {}",
                    d[n],
                    fd
                );
            }
        }
    }

    #[test]
    fn stiffness_matrix_matches_quadrature() {
        let b = ModalBasis::new(3, 17).unwrap();
        let quad = gauss_legendre(10).unwrap();
        let np = 4;
        for m in 0..np {
            for n in 0..np {
                let v = quad.integrate(|r| eval_basis_deriv(3, r)[m] * eval_basis(3, r)[n]);
                assert!(
                    (b.stiffness[m * np + n] - v).abs() < 1e-13,
                    "stiffness mismatch at ({m},{n})"
                );
            }
        }
    }

    #[test]
    fn quadrature_assumption_first_identity() {
        // per-element: sum_k w_k phi^2(x_k) = int phi^2 dx for phi in P^q
        let mesh = Mesh1D::from_vertices(vec![-1.0, -0.2, 0.4, 1.0]).unwrap();
        let q = 3;
        let basis = ModalBasis::for_degree(q).unwrap();
        // arbitrary degree-3 polynomial
        let poly = |x: f64| 0.3 - 1.2 * x + 0.7 * x * x + 2.1 * x * x * x;
        let fine = gauss_legendre(20).unwrap();
        for j in 0..mesh.n_elements() {
            let jac = 0.5 * mesh.widths[j];
            let lhs: f64 = basis
                .quad
                .nodes
                .iter()
                .zip(&basis.quad.weights)
                .map(|(&r, &w)| {
                    let x = mesh.from_reference(j, r);
                    jac * w * poly(x) * poly(x)
                })
                .sum();
            let rhs: f64 = fine.integrate(|r| {
                let x = mesh.from_reference(j, r);
                jac * poly(x) * poly(x)
            });
            assert!((lhs - rhs).abs() < 1e-13 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn radau_projection_fixes_constants_and_polynomials() {
        let mesh = Mesh1D::uniform(-2.0, 2.0, 8).unwrap();
        for q in 0..=3usize {
            for side in [RadauSide::Plus, RadauSide::Minus] {
                let c = gauss_radau_project(|_| 3.25, &mesh, q, side);
                for j in 0..mesh.n_elements() {
                    for &r in &[-1.0, -0.4, 0.3, 1.0] {
                        let x = mesh.from_reference(j, r);
                        let v = reconstruct(&c, &mesh, q, x);
                        assert!((v - 3.25).abs() < 1e-12);
                    }
                }
            }
        }
        // degree <= q polynomial reproduced exactly
        let q = 3;
        let poly = |x: f64| 1.0 - 0.5 * x + 0.25 * x * x - 0.125 * x * x * x;
        for side in [RadauSide::Plus, RadauSide::Minus] {
            let c = gauss_radau_project(poly, &mesh, q, side);
            let quad = gauss_legendre(6).unwrap();
            for j in 0..mesh.n_elements() {
                for &r in &quad.nodes {
                    let x = mesh.from_reference(j, r);
                    assert!((reconstruct(&c, &mesh, q, x) - poly(x)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn radau_projection_endpoint_conditions() {
        let mesh = Mesh1D::uniform(-2.0, 2.0, 16).unwrap();
        let f = |x: f64| (std::f64::consts::PI * x).sin();
        for q in 0..=3usize {
            let cp = gauss_radau_project(f, &mesh, q, RadauSide::Plus);
            let cm = gauss_radau_project(f, &mesh, q, RadauSide::Minus);
            let basis = ModalBasis::for_degree(q).unwrap();
            let np = q + 1;
            for j in 0..mesh.n_elements() {
                let left: f64 = (0..np).map(|n| cp[j * np + n] * basis.phi_left[n]).sum();
                assert!((left - f(mesh.vertices[j])).abs() < 1e-12);
                let right: f64 = (0..np).map(|n| cm[j * np + n] * basis.phi_right[n]).sum();
                assert!((right - f(mesh.vertices[j + 1])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn radau_projection_convergence_order() {
        // || u - P u ||_L2 = O(h^{q+1}) for u = sin(pi x)
        let f = |x: f64| (std::f64::consts::PI * x).sin();
        for q in 1..=3usize {
            for side in [RadauSide::Plus, RadauSide::Minus] {
                let mut errs = Vec::new();
                for n in [8usize, 16, 32, 64] {
                    let mesh = Mesh1D::uniform(-2.0, 2.0, n).unwrap();
                    let c = gauss_radau_project(f, &mesh, q, side);
                    let quad = gauss_legendre(17).unwrap();
                    let mut e2 = 0.0;
                    for j in 0..mesh.n_elements() {
                        for (&r, &w) in quad.nodes.iter().zip(&quad.weights) {
                            let x = mesh.from_reference(j, r);
                            let d = reconstruct(&c, &mesh, q, x) - f(x);
                            e2 += 0.5 * mesh.widths[j] * w * d * d;
                        }
                    }
                    errs.push(e2.sqrt());
                }
                let slope = (errs[0] / errs[errs.len() - 1]).ln()
                    / ((errs.len() - 1) as f64 * 2.0_f64.ln());
                assert!(
                    (slope - (q as f64 + 1.0)).abs() < 0.1,
                    "q={q} side={side:?}: slope {slope}"
                );
            }
        }
    }

    #[test]
    fn l2_projection_reproduces_basis_and_constants() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 1).unwrap();
        let q = 4;
        // f = phi_2 mapped to the single element
        let f = |x: f64| eval_basis(2, mesh.to_reference(0, x).unwrap())[2];
        let c = l2_project(f, &mesh, q);
        for n in 0..=q {
            let expect = if n == 2 { 1.0 } else { 0.0 };
            assert!((c[n] - expect).abs() < 1e-13, "mode {n}: {}", c[n]);
        }
        // constants reproduced on a multi-element mesh
        let mesh = Mesh1D::uniform(-2.0, 2.0, 7).unwrap();
        let c = l2_project(|_| 1.0, &mesh, 3);
        let quad = gauss_legendre(5).unwrap();
        for j in 0..mesh.n_elements() {
            for &r in &quad.nodes {
                let x = mesh.from_reference(j, r);
                assert!((reconstruct(&c, &mesh, 3, x) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn l2_projection_convergence_order() {
        // narrow Gaussian, q = 3: reconstruction error decays O(h^4)
        let f = |x: f64| (-x * x / 0.01).exp();
        let q = 3;
        let mut errs = Vec::new();
        for n in [160usize, 320, 640] {
            let mesh = Mesh1D::uniform(-2.0, 2.0, n).unwrap();
            let c = l2_project(f, &mesh, q);
            // off-quadrature sampling
            let mut emax: f64 = 0.0;
            for j in 0..mesh.n_elements() {
                for i in 0..5 {
                    let r = -1.0 + 2.0 * (i as f64 + 0.5) / 5.0;
                    let x = mesh.from_reference(j, r);
                    emax = emax.max((reconstruct(&c, &mesh, q, x) - f(x)).abs());
                }
            }
            errs.push(emax);
        }
        let slope = (errs[0] / errs[2]).ln() / (2.0 * 2.0_f64.ln());
        assert!(slope > 3.5, "L-inf slope {slope} too low");
    }
}
