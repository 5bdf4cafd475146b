//! Physics definitions: the saturable nonlinearity, the characteristic
//! transform, the z couplings, and the bundled test problems with their
//! closed-form forcing terms.

use crate::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Saturable coupling coefficient. `Sech` is the bundled form
/// N = 2 sech(arccosh(2) sqrt(w1^2 + w2^2)) - 1; `Zero` switches the
/// nonlinear terms off (linear transport, used by tests).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nonlinearity {
    Sech,
    Zero,
}

impl Nonlinearity {
    pub fn eval(&self, w1: f64, w2: f64) -> f64 {
        match self {
            Nonlinearity::Sech => sech_nonlinearity(w1, w2),
            Nonlinearity::Zero => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Nonlinearity::Sech => "sech",
            Nonlinearity::Zero => "zero",
        }
    }
}

/// N(w1, w2) = 2 sech(arccosh(2) r) - 1 with r the modulus. N(0) = 1,
/// N = 0 on the unit circle, N -> -1 as r -> infinity.
pub fn sech_nonlinearity(w1: f64, w2: f64) -> f64 {
    let r = (w1 * w1 + w2 * w2).sqrt();
    let a = arccosh2() * r;
    // sech(a) = 2 e^{-a} / (1 + e^{-2a}), overflow-safe for large a
    let e = (-a).exp();
    let sech = 2.0 * e / (1.0 + e * e);
    2.0 * sech - 1.0
}

/// arccosh(2) = ln(2 + sqrt 3)
fn arccosh2() -> f64 {
    (2.0 + 3.0_f64.sqrt()).ln()
}

/// Characteristic transform (w1, w2) = A (b1, b2) with
/// A = 1/sqrt(2) [[1, 1], [1, -1]]. A is orthogonal and involutive, so the
/// same map is its own inverse.
pub fn characteristic_transform(b1: f64, b2: f64) -> (f64, f64) {
    ((b1 + b2) / SQRT2, (b1 - b2) / SQRT2)
}

/// Couplings z1 = N w1, z2 = N w2 entering the error analysis and the
/// Lipschitz bound.
pub fn coupling_z(w1: f64, w2: f64, which: u8, nl: Nonlinearity) -> f64 {
    let n = nl.eval(w1, w2);
    match which {
        1 => n * w1,
        2 => n * w2,
        _ => panic!("coupling index must be 1 or 2"),
    }
}

/// Boundary treatment of the truncated domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryKind {
    Periodic,
    /// Dirichlet inflow data: w1 is prescribed at x_b (left-moving wave),
    /// w2 at x_a (right-moving wave).
    DirichletInflow { w1_at_xb: f64, w2_at_xa: f64 },
}

pub type SpaceTimeField = Box<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;

/// One experiment: nonlinearity, optional exact solution, forcing,
/// boundary treatment and domain.
pub struct ProblemSpec {
    pub name: String,
    pub nonlinearity: Nonlinearity,
    /// (x, t) -> (w1, w2) when a manufactured solution exists.
    pub exact: Option<SpaceTimeField>,
    /// (x, t) -> (f1, f2); `None` for unforced problems.
    pub forcing: Option<SpaceTimeField>,
    pub boundary: BoundaryKind,
    pub domain: (f64, f64),
}

impl ProblemSpec {
    /// Unforced problem, used for energy experiments and random-state tests.
    pub fn homogeneous(
        name: &str,
        nonlinearity: Nonlinearity,
        boundary: BoundaryKind,
        domain: (f64, f64),
    ) -> Self {
        Self {
            name: name.to_string(),
            nonlinearity,
            exact: None,
            forcing: None,
            boundary,
            domain,
        }
    }
}

/// Right asymptotic state of the c = 0.4 kink orbit, frozen from the
/// traveling-wave generator (see kink::tests::frozen_asymptote).
pub const KINK_C04_ASYMPTOTE: (f64, f64) = (-0.5477225575, -0.8366600265);

/// Bundled experiments: `example1` (periodic manufactured solution),
/// `example2` (decaying two-Gaussian solution, zero Dirichlet inflow),
/// `kink` (unforced, Dirichlet inflow at the kink asymptotic constants).
pub fn make_problem(name: &str) -> Result<ProblemSpec> {
    match name {
        "example1" => Ok(example1()),
        "example2" => Ok(example2()),
        "kink" => Ok(kink_problem((-40.0, 200.0))),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// w1 = (cos(pi x) + sin(pi x)) cos(t) / sqrt2,
/// w2 = (cos(pi x) - sin(pi x)) cos(t) / sqrt2, periodic on (-2, 2).
pub fn example1() -> ProblemSpec {
    use std::f64::consts::PI;
    let exact = |x: f64, t: f64| -> (f64, f64) {
        let (c, s) = ((PI * x).cos(), (PI * x).sin());
        (((c + s) * t.cos()) / SQRT2, ((c - s) * t.cos()) / SQRT2)
    };
    // dx w1 = pi w2 and dx w2 = -pi w1 for this solution, so
    // f1 = dt w1 - pi w2 + N w2,  f2 = dt w2 - pi w1 - N w1.
    let forcing = move |x: f64, t: f64| -> (f64, f64) {
        let (w1, w2) = exact(x, t);
        let (c, s) = ((PI * x).cos(), (PI * x).sin());
        let dt1 = -((c + s) * t.sin()) / SQRT2;
        let dt2 = -((c - s) * t.sin()) / SQRT2;
        let n = sech_nonlinearity(w1, w2);
        (dt1 - PI * w2 + n * w2, dt2 - PI * w1 - n * w1)
    };
    ProblemSpec {
        name: "example1".to_string(),
        nonlinearity: Nonlinearity::Sech,
        exact: Some(Box::new(exact)),
        forcing: Some(Box::new(forcing)),
        boundary: BoundaryKind::Periodic,
        domain: (-2.0, 2.0),
    }
}

/// w1 = sqrt2 (cos(2 pi t) g1 + 2 cos(4 pi t) g2),
/// w2 = sqrt2 (cos(2 pi t) g1 - 2 cos(4 pi t) g2), with Gaussians
/// g1 = exp(-x^2/0.01), g2 = exp(-x^2/0.025), on (-2, 2). The solution is
/// below round-off at the endpoints; inflow data are exactly zero.
pub fn example2() -> ProblemSpec {
    use std::f64::consts::PI;
    let parts = |x: f64, t: f64| {
        let g1 = (-x * x / 0.01).exp();
        let g2 = (-x * x / 0.025).exp();
        let c2 = (2.0 * PI * t).cos();
        let c4 = (4.0 * PI * t).cos();
        (g1, g2, c2, c4)
    };
    let exact = move |x: f64, t: f64| -> (f64, f64) {
        let (g1, g2, c2, c4) = parts(x, t);
        (SQRT2 * (c2 * g1 + 2.0 * c4 * g2), SQRT2 * (c2 * g1 - 2.0 * c4 * g2))
    };
    let forcing = move |x: f64, t: f64| -> (f64, f64) {
        let (g1, g2, c2, c4) = parts(x, t);
        let (w1, w2) = exact(x, t);
        let s2 = (2.0 * PI * t).sin();
        let s4 = (4.0 * PI * t).sin();
        let dt_a = -2.0 * PI * s2 * g1; // d/dt of c2 g1
        let dt_b = -4.0 * PI * s4 * g2; // d/dt of c4 g2
        let dx_a = -200.0 * x * c2 * g1; // d/dx of c2 g1
        let dx_b = -80.0 * x * c4 * g2; // d/dx of c4 g2
        let dt1 = SQRT2 * (dt_a + 2.0 * dt_b);
        let dt2 = SQRT2 * (dt_a - 2.0 * dt_b);
        let dx1 = SQRT2 * (dx_a + 2.0 * dx_b);
        let dx2 = SQRT2 * (dx_a - 2.0 * dx_b);
        let n = sech_nonlinearity(w1, w2);
        (dt1 - dx1 + n * w2, dt2 + dx2 - n * w1)
    };
    ProblemSpec {
        name: "example2".to_string(),
        nonlinearity: Nonlinearity::Sech,
        exact: Some(Box::new(exact)),
        forcing: Some(Box::new(forcing)),
        boundary: BoundaryKind::DirichletInflow {
            w1_at_xb: 0.0,
            w2_at_xa: 0.0,
        },
        domain: (-2.0, 2.0),
    }
}

/// Unforced kink experiment: Dirichlet inflow at the asymptotic constants
/// of the c = 0.4 profile (zero on the left, the unit-circle fixed point on
/// the right).
pub fn kink_problem(domain: (f64, f64)) -> ProblemSpec {
    ProblemSpec {
        name: "kink".to_string(),
        nonlinearity: Nonlinearity::Sech,
        exact: None,
        forcing: None,
        boundary: BoundaryKind::DirichletInflow {
            w1_at_xb: KINK_C04_ASYMPTOTE.0,
            w2_at_xa: 0.0,
        },
        domain,
    }
}
