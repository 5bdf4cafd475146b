//! Semi-discrete DG right-hand side: volume terms, quadrature-evaluated
//! nonlinear couplings, the four-parameter interelement fluxes, and the
//! boundary fluxes.

use crate::basis::ModalBasis;
use crate::mesh::Mesh1D;
use crate::model::{BoundaryKind, ProblemSpec};
use crate::{Error, Result};

/// Modal coefficient tensor for the pair (w1^h, w2^h):
/// coeffs[var][element * (q+1) + mode].
#[derive(Clone, Debug)]
pub struct DGState {
    pub coeffs: [Vec<f64>; 2],
    pub n_elements: usize,
    pub degree: usize,
    pub time: f64,
}

impl DGState {
    pub fn zeros(n_elements: usize, degree: usize) -> Self {
        let len = n_elements * (degree + 1);
        Self {
            coeffs: [vec![0.0; len], vec![0.0; len]],
            n_elements,
            degree,
            time: 0.0,
        }
    }

    /// Assemble a state from per-variable coefficient fields (as produced
    /// by the projection routines).
    pub fn from_fields(w1: Vec<f64>, w2: Vec<f64>, degree: usize) -> Self {
        assert_eq!(w1.len(), w2.len());
        assert_eq!(w1.len() % (degree + 1), 0);
        let n_elements = w1.len() / (degree + 1);
        Self {
            coeffs: [w1, w2],
            n_elements,
            degree,
            time: 0.0,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }

    fn elem(&self, var: usize, j: usize) -> &[f64] {
        let np = self.n_modes();
        &self.coeffs[var][j * np..(j + 1) * np]
    }

    /// Trace from inside element j at its right endpoint (minus side of
    /// interface j+1).
    pub fn trace_right(&self, var: usize, j: usize, basis: &ModalBasis) -> f64 {
        dot(self.elem(var, j), &basis.phi_right)
    }

    /// Trace from inside element j at its left endpoint (plus side of
    /// interface j).
    pub fn trace_left(&self, var: usize, j: usize, basis: &ModalBasis) -> f64 {
        dot(self.elem(var, j), &basis.phi_left)
    }

    /// Pointwise reconstruction at x, using the element containing x.
    pub fn reconstruct(&self, var: usize, mesh: &Mesh1D, x: f64) -> f64 {
        crate::basis::reconstruct(&self.coeffs[var], mesh, self.degree, x)
    }

    /// Index of the first non-finite entry, as (variable, element).
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        let np = self.n_modes();
        for var in 0..2 {
            for (i, c) in self.coeffs[var].iter().enumerate() {
                if !c.is_finite() {
                    return Some((var, i / np));
                }
            }
        }
        None
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Which named flux a parameter tuple came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FluxPreset {
    Upwind,
    Central,
    MixedUpwind,
    MixedCentral,
    Custom,
}

impl std::fmt::Display for FluxPreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FluxPreset::Upwind => "upwind",
            FluxPreset::Central => "central",
            FluxPreset::MixedUpwind => "mixed-upwind",
            FluxPreset::MixedCentral => "mixed-central",
            FluxPreset::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// The four flux parameters (alpha1, alpha2, beta1, beta2). Construction
/// through `new` enforces the stability condition
/// -(1 - max(a1, a2)) + |b1 - b2| / 2 <= 0.
#[derive(Clone, Copy, Debug)]
pub struct FluxParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub preset: FluxPreset,
}

impl FluxParams {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha1) || !(0.0..=1.0).contains(&alpha2) {
            return Err(Error::FluxParamRange(format!(
                "alpha1 = {alpha1}, alpha2 = {alpha2} must lie in [0, 1]"
            )));
        }
        let p = Self::unchecked(alpha1, alpha2, beta1, beta2);
        let margin = p.stability_margin();
        if margin > 0.0 {
            return Err(Error::UnstableFlux {
                alpha1,
                alpha2,
                beta1,
                beta2,
                margin,
            });
        }
        Ok(p)
    }

    /// Bypasses the stability check (for the instability demonstrations).
    pub fn unchecked(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Self {
        Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
            preset: FluxPreset::Custom,
        }
    }

    /// -(1 - max(a1, a2)) + |b1 - b2| / 2; non-positive means stable.
    pub fn stability_margin(&self) -> f64 {
        -(1.0 - self.alpha1.max(self.alpha2)) + 0.5 * (self.beta1 - self.beta2).abs()
    }

    pub fn upwind() -> Self {
        Self {
            alpha1: 0.0,
            alpha2: 0.0,
            beta1: 0.0,
            beta2: 0.0,
            preset: FluxPreset::Upwind,
        }
    }

    pub fn central() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 1.0,
            beta1: 0.0,
            beta2: 0.0,
            preset: FluxPreset::Central,
        }
    }

    pub fn mixed_upwind() -> Self {
        Self {
            alpha1: 0.0,
            alpha2: 0.0,
            beta1: 1.0,
            beta2: 1.0,
            preset: FluxPreset::MixedUpwind,
        }
    }

    pub fn mixed_central() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 1.0,
            beta1: 1.0,
            beta2: 1.0,
            preset: FluxPreset::MixedCentral,
        }
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "upwind" => Some(Self::upwind()),
            "central" => Some(Self::central()),
            "mixed-upwind" => Some(Self::mixed_upwind()),
            "mixed-central" => Some(Self::mixed_central()),
            _ => None,
        }
    }
}

/// Interelement flux pair (w1_hat, w2_tilde) from the two-sided traces:
///   w1_hat   = {w1} - (1 - a1)/2 [w1] + b1/2 [w2],
///   w2_tilde = {w2} + (1 - a2)/2 [w2] + b2/2 [w1],
/// with {v} the arithmetic average and [v] = v- - v+.
pub fn interface_flux(
    w1_minus: f64,
    w1_plus: f64,
    w2_minus: f64,
    w2_plus: f64,
    p: &FluxParams,
) -> (f64, f64) {
    let avg1 = 0.5 * (w1_minus + w1_plus);
    let avg2 = 0.5 * (w2_minus + w2_plus);
    let jump1 = w1_minus - w1_plus;
    let jump2 = w2_minus - w2_plus;
    let w1_hat = avg1 - 0.5 * (1.0 - p.alpha1) * jump1 + 0.5 * p.beta1 * jump2;
    let w2_tilde = avg2 + 0.5 * (1.0 - p.alpha2) * jump2 + 0.5 * p.beta2 * jump1;
    (w1_hat, w2_tilde)
}

/// Flux values at all N+1 interfaces, resolving the boundary treatment.
/// Interface i separates element i-1 (minus side) from element i (plus side).
fn all_interface_fluxes(
    state: &DGState,
    t: f64,
    basis: &ModalBasis,
    problem: &ProblemSpec,
    p: &FluxParams,
) -> (Vec<f64>, Vec<f64>) {
    let n = state.n_elements;
    let mut w1_hat = vec![0.0; n + 1];
    let mut w2_tilde = vec![0.0; n + 1];
    for i in 1..n {
        let (h1, t2) = interface_flux(
            state.trace_right(0, i - 1, basis),
            state.trace_left(0, i, basis),
            state.trace_right(1, i - 1, basis),
            state.trace_left(1, i, basis),
            p,
        );
        w1_hat[i] = h1;
        w2_tilde[i] = t2;
    }
    match problem.boundary {
        BoundaryKind::Periodic => {
            // element N-1 is the minus side, element 0 the plus side
            let (h1, t2) = interface_flux(
                state.trace_right(0, n - 1, basis),
                state.trace_left(0, 0, basis),
                state.trace_right(1, n - 1, basis),
                state.trace_left(1, 0, basis),
                p,
            );
            w1_hat[0] = h1;
            w1_hat[n] = h1;
            w2_tilde[0] = t2;
            w2_tilde[n] = t2;
        }
        BoundaryKind::DirichletInflow { w1_at_xb, w2_at_xa } => {
            let _ = t; // constant inflow data
            w1_hat[0] = state.trace_left(0, 0, basis); // outflow: interior trace
            w1_hat[n] = w1_at_xb; // inflow for the left-moving wave
            w2_tilde[0] = w2_at_xa; // inflow for the right-moving wave
            w2_tilde[n] = state.trace_right(1, n - 1, basis); // outflow
        }
    }
    (w1_hat, w2_tilde)
}

/// Semi-discrete rate d/dt of the modal coefficients, per the DG scheme:
/// mass-inverse applied to volume + flux + quadrature nonlinear + forcing
/// terms.
pub fn assemble_rhs(
    state: &DGState,
    t: f64,
    mesh: &Mesh1D,
    basis: &ModalBasis,
    problem: &ProblemSpec,
    p: &FluxParams,
) -> Result<DGState> {
    if state.n_elements != mesh.n_elements() || state.degree != basis.degree {
        return Err(Error::ShapeMismatch(format!(
            "state has {} elements / degree {}, discretization has {} / {}",
            state.n_elements,
            state.degree,
            mesh.n_elements(),
            basis.degree
        )));
    }
    let n = state.n_elements;
    let np = state.n_modes();
    let nl = problem.nonlinearity;
    let (w1_hat, w2_tilde) = all_interface_fluxes(state, t, basis, problem, p);

    let mut rate = DGState::zeros(n, state.degree);
    rate.time = t;
    let quad = &basis.quad;
    let mut vol1 = vec![0.0; np];
    let mut vol2 = vec![0.0; np];
    for j in 0..n {
        let h = mesh.widths[j];
        let jac = 0.5 * h;
        let c1 = state.elem(0, j);
        let c2 = state.elem(1, j);
        vol1.iter_mut().for_each(|v| *v = 0.0);
        vol2.iter_mut().for_each(|v| *v = 0.0);
        // nonlinear coupling and forcing, 17-node Gauss quadrature
        for (k, (&r, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
            let phi = &basis.phi[k][..np];
            let w1 = dot(c1, phi);
            let w2 = dot(c2, phi);
            let nval = nl.eval(w1, w2);
            let (f1, f2) = match &problem.forcing {
                Some(f) => f(mesh.from_reference(j, r), t),
                None => (0.0, 0.0),
            };
            let s1 = jac * w * (-nval * w2 + f1);
            let s2 = jac * w * (nval * w1 + f2);
            for ((v1, v2), &p) in vol1.iter_mut().zip(vol2.iter_mut()).zip(phi) {
                *v1 += s1 * p;
                *v2 += s2 * p;
            }
        }
        // volume transport terms: -+ S c with S[m][n] = int phi_m' phi_n dr
        for m in 0..np {
            let row = &basis.stiffness[m * np..(m + 1) * np];
            vol1[m] -= dot(row, c1);
            vol2[m] += dot(row, c2);
        }
        // interface flux terms
        for m in 0..np {
            vol1[m] += w1_hat[j + 1] * basis.phi_right[m] - w1_hat[j] * basis.phi_left[m];
            vol2[m] += w2_tilde[j] * basis.phi_left[m] - w2_tilde[j + 1] * basis.phi_right[m];
        }
        // mass inverse (orthonormal basis: M = h/2 I)
        let inv_mass = 1.0 / jac;
        for m in 0..np {
            rate.coeffs[0][j * np + m] = inv_mass * vol1[m];
            rate.coeffs[1][j * np + m] = inv_mass * vol2[m];
        }
    }
    Ok(rate)
}

/// L2 pairing sum_j (h_j/2) sum_{var, n} a b of two coefficient tensors.
pub fn inner_product(a: &DGState, b: &DGState, mesh: &Mesh1D) -> f64 {
    let np = a.n_modes();
    let mut acc = 0.0;
    for var in 0..2 {
        for j in 0..a.n_elements {
            let jac = 0.5 * mesh.widths[j];
            for m in 0..np {
                acc += jac * a.coeffs[var][j * np + m] * b.coeffs[var][j * np + m];
            }
        }
    }
    acc
}

/// Closed-form semi-discrete energy rate: the interior jump terms
///   1/2 sum_i ( -(1-a1)[w1]^2 - (1-a2)[w2]^2 + (b1-b2)[w1][w2] )
/// plus the boundary trace terms for Dirichlet inflow (generalized to
/// constant inflow data g):
///   g1 w1-(x_b) - 1/2 (w1-^2 + w2-^2)(x_b) + g2 w2+(x_a) - 1/2 (w1+^2 + w2+^2)(x_a).
/// With zero forcing this equals <state, assemble_rhs(state)>.
pub fn energy_rate_formula(
    state: &DGState,
    basis: &ModalBasis,
    problem: &ProblemSpec,
    p: &FluxParams,
) -> f64 {
    let n = state.n_elements;
    let jump_term = |i_minus: usize, i_plus: usize| -> f64 {
        let j1 = state.trace_right(0, i_minus, basis) - state.trace_left(0, i_plus, basis);
        let j2 = state.trace_right(1, i_minus, basis) - state.trace_left(1, i_plus, basis);
        -(1.0 - p.alpha1) * j1 * j1 - (1.0 - p.alpha2) * j2 * j2
            + (p.beta1 - p.beta2) * j1 * j2
    };
    let mut rate = 0.0;
    for i in 1..n {
        rate += 0.5 * jump_term(i - 1, i);
    }
    match problem.boundary {
        BoundaryKind::Periodic => {
            rate += 0.5 * jump_term(n - 1, 0);
        }
        BoundaryKind::DirichletInflow { w1_at_xb, w2_at_xa } => {
            let w1_xb = state.trace_right(0, n - 1, basis);
            let w2_xb = state.trace_right(1, n - 1, basis);
            let w1_xa = state.trace_left(0, 0, basis);
            let w2_xa = state.trace_left(1, 0, basis);
            rate += w1_at_xb * w1_xb - 0.5 * (w1_xb * w1_xb + w2_xb * w2_xb);
            rate += w2_at_xa * w2_xa - 0.5 * (w1_xa * w1_xa + w2_xa * w2_xa);
        }
    }
    rate
}
