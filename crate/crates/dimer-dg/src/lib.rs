//! Discontinuous Galerkin solver for the first-order semi-linear hyperbolic
//! system
//!
//! ```text
//!     dw1/dt =  dw1/dx - N(w1, w2) w2,
//!     dw2/dt = -dw2/dx + N(w1, w2) w1,
//! ```
//!
//! the characteristic form of a continuum model for a 1D dimer lattice of
//! topological resonators. The crate provides the mesh and modal Legendre
//! basis, the semi-discrete DG operator with a four-parameter family of
//! interelement fluxes (energy-conserving or energy-dissipating), classical
//! RK4 time stepping, kink traveling-wave profile generation, and the
//! diagnostics (discrete energy, moving-box energy, L2 errors, convergence
//! orders) used by the verification harness.

pub mod basis;
pub mod diagnostics;
pub mod harness;
pub mod kink;
pub mod mesh;
pub mod model;
pub mod operator;
pub mod time;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid interval: x_b = {xb} must exceed x_a = {xa}")]
    InvalidInterval { xa: f64, xb: f64 },
    #[error("mesh needs at least one element")]
    EmptyMesh,
    #[error("x = {x} lies outside element {element} = [{left}, {right}]")]
    OutsideElement {
        x: f64,
        element: usize,
        left: f64,
        right: f64,
    },
    #[error("quadrature rule needs at least one node")]
    EmptyQuadrature,
    #[error("unknown problem '{0}' (expected example1, example2, or kink)")]
    UnknownProblem(String),
    #[error(
        "flux parameters (a1={alpha1}, a2={alpha2}, b1={beta1}, b2={beta2}) violate the \
         stability condition: -(1 - max(a1,a2)) + |b1 - b2|/2 = {margin} > 0"
    )]
    UnstableFlux {
        alpha1: f64,
        alpha2: f64,
        beta1: f64,
        beta2: f64,
        margin: f64,
    },
    #[error("flux parameter out of range: {0}")]
    FluxParamRange(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value detected at t = {t}, variable w{variable}, element {element}")]
    NonFinite {
        t: f64,
        variable: usize,
        element: usize,
    },
    #[error("NaN abort at step {step}: {source}")]
    NanAbort {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("wave speed |c| = 1 makes the traveling-wave system degenerate")]
    DegenerateSpeed,
    #[error("wave speed c = {0} is not subsonic (|c| < 1 required)")]
    SupersonicSpeed(f64),
    #[error("seed state ({0}, {1}) is not near the origin")]
    BadSeed(f64, f64),
    #[error("trajectory escaped the bounding box at z = {z} (not a kink orbit)")]
    NotAKink { z: f64 },
    #[error("degenerate box: b = {b} must exceed a = {a}")]
    DegenerateBox { a: f64, b: f64 },
    #[error("invalid time step: dt = {0} must be positive")]
    InvalidTimeStep(f64),
    #[error("problem '{0}' has no exact solution; convergence sweep requires one")]
    NoExactSolution(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
