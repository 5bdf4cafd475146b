//! Classical fourth-order Runge–Kutta time stepping with a CFL-scaled or
//! fixed step size and exact landing on the final time.

use crate::basis::ModalBasis;
use crate::mesh::Mesh1D;
use crate::model::ProblemSpec;
use crate::operator::{assemble_rhs, DGState, FluxParams};
use crate::{Error, Result};

/// Default CFL number used when none is supplied: dt = (0.0375 / pi) h.
pub const DEFAULT_CFL: f64 = 3.75e-2 / std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub enum StepRule {
    /// dt = cfl * h_max.
    CflScaled(f64),
    /// Explicit step size.
    FixedDt(f64),
}

/// Resolved step plan: n_full steps of dt, then one final step of
/// last_dt <= dt so the trajectory lands exactly on t_final.
#[derive(Clone, Copy, Debug)]
pub struct TimeStepPlan {
    pub dt: f64,
    pub n_full: usize,
    pub last_dt: f64,
}

impl TimeStepPlan {
    pub fn new(rule: StepRule, mesh: &Mesh1D, t_final: f64) -> Result<Self> {
        let dt = match rule {
            StepRule::CflScaled(cfl) => cfl * mesh.h_max,
            StepRule::FixedDt(dt) => dt,
        };
        if !(dt > 0.0 && dt.is_finite()) || !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidTimeStep(dt));
        }
        let n = (t_final / dt).floor() as usize;
        let rem = t_final - n as f64 * dt;
        // fold a negligible remainder into the last full step
        if rem < 1e-12 * dt || n == 0 {
            if n == 0 {
                return Ok(Self {
                    dt,
                    n_full: 0,
                    last_dt: t_final,
                });
            }
            return Ok(Self {
                dt,
                n_full: n - 1,
                last_dt: t_final - (n - 1) as f64 * dt,
            });
        }
        Ok(Self {
            dt,
            n_full: n,
            last_dt: rem,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_full + 1
    }
}

fn axpy(y: &mut DGState, a: f64, x: &DGState) {
    for var in 0..2 {
        for (yc, xc) in y.coeffs[var].iter_mut().zip(&x.coeffs[var]) {
            *yc += a * xc;
        }
    }
}

/// One classical RK4 step. Errors with the first non-finite element if the
/// update blows up.
pub fn rk4_step(
    state: &DGState,
    dt: f64,
    mesh: &Mesh1D,
    basis: &ModalBasis,
    problem: &ProblemSpec,
    flux: &FluxParams,
) -> Result<DGState> {
    let t = state.time;
    let k1 = assemble_rhs(state, t, mesh, basis, problem, flux)?;
    let mut y = state.clone();
    axpy(&mut y, 0.5 * dt, &k1);
    y.time = t + 0.5 * dt;
    let k2 = assemble_rhs(&y, y.time, mesh, basis, problem, flux)?;
    let mut y = state.clone();
    axpy(&mut y, 0.5 * dt, &k2);
    y.time = t + 0.5 * dt;
    let k3 = assemble_rhs(&y, y.time, mesh, basis, problem, flux)?;
    let mut y = state.clone();
    axpy(&mut y, dt, &k3);
    y.time = t + dt;
    let k4 = assemble_rhs(&y, y.time, mesh, basis, problem, flux)?;

    let mut out = state.clone();
    axpy(&mut out, dt / 6.0, &k1);
    axpy(&mut out, dt / 3.0, &k2);
    axpy(&mut out, dt / 3.0, &k3);
    axpy(&mut out, dt / 6.0, &k4);
    out.time = t + dt;
    if let Some((var, element)) = out.first_non_finite() {
        return Err(Error::NonFinite {
            t: out.time,
            variable: var + 1,
            element,
        });
    }
    Ok(out)
}

/// Advance `state` to t_final per `plan`; `observe(step_index, &state)` is
/// called on the initial state (step 0) and after every step.
pub fn evolve<F>(
    mut state: DGState,
    plan: &TimeStepPlan,
    mesh: &Mesh1D,
    basis: &ModalBasis,
    problem: &ProblemSpec,
    flux: &FluxParams,
    mut observe: F,
) -> Result<DGState>
where
    F: FnMut(usize, &DGState),
{
    observe(0, &state);
    for step in 0..plan.n_steps() {
        let dt = if step < plan.n_full { plan.dt } else { plan.last_dt };
        state = rk4_step(&state, dt, mesh, basis, problem, flux).map_err(|e| match e {
            e @ Error::NonFinite { .. } => Error::NanAbort {
                step: step + 1,
                source: Box::new(e),
            },
            other => other,
        })?;
        observe(step + 1, &state);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::l2_project;
    use crate::model::{BoundaryKind, Nonlinearity, ProblemSpec};

    #[test]
    fn plan_lands_exactly_on_t_final() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 10).unwrap();
        let plan = TimeStepPlan::new(StepRule::FixedDt(0.03), &mesh, 1.0).unwrap();
        let total = plan.n_full as f64 * plan.dt + plan.last_dt;
        assert!((total - 1.0).abs() < 1e-14);
        assert!(plan.last_dt <= plan.dt + 1e-15);
        // exact divisor: remainder folds into the last step
        let plan = TimeStepPlan::new(StepRule::FixedDt(0.25), &mesh, 1.0).unwrap();
        assert_eq!(plan.n_steps(), 4);
        assert!((plan.last_dt - 0.25).abs() < 1e-14);
        // dt larger than horizon
        let plan = TimeStepPlan::new(StepRule::FixedDt(3.0), &mesh, 1.0).unwrap();
        assert_eq!(plan.n_steps(), 1);
        assert!((plan.last_dt - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cfl_rule_scales_with_mesh_width() {
        let mesh = Mesh1D::uniform(-2.0, 2.0, 40).unwrap();
        let plan = TimeStepPlan::new(StepRule::CflScaled(DEFAULT_CFL), &mesh, 1.0).unwrap();
        assert!((plan.dt - DEFAULT_CFL * 0.1).abs() < 1e-16);
    }

    #[test]
    fn invalid_steps_rejected() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 4).unwrap();
        assert!(TimeStepPlan::new(StepRule::FixedDt(0.0), &mesh, 1.0).is_err());
        assert!(TimeStepPlan::new(StepRule::FixedDt(-0.1), &mesh, 1.0).is_err());
        assert!(TimeStepPlan::new(StepRule::FixedDt(0.1), &mesh, 0.0).is_err());
    }

    /// Decoupled scalar decay cooked into the DG frame: zero transport and
    /// coupling are not available directly, so check RK4 order on the full
    /// nonlinear system against a fine-dt reference instead.
    #[test]
    fn rk4_fourth_order_in_time() {
        let q = 3;
        let n = 10;
        let mesh = Mesh1D::uniform(-2.0, 2.0, n).unwrap();
        let basis = ModalBasis::for_degree(q).unwrap();
        let problem =
            ProblemSpec::homogeneous("h", Nonlinearity::Sech, BoundaryKind::Periodic, (-2.0, 2.0));
        let flux = FluxParams::upwind();
        let w1 = l2_project(|x| (0.5 * std::f64::consts::PI * x).sin() * 0.4, &mesh, q);
        let w2 = l2_project(|x| (0.5 * std::f64::consts::PI * x).cos() * 0.3, &mesh, q);
        let s0 = DGState::from_fields(w1, w2, q);
        let t_final = 0.2;
        let run = |dt: f64| -> DGState {
            let plan = TimeStepPlan::new(StepRule::FixedDt(dt), &mesh, t_final).unwrap();
            evolve(s0.clone(), &plan, &mesh, &basis, &problem, &flux, |_, _| {}).unwrap()
        };
        let reference = run(0.0005);
        let err = |s: &DGState| -> f64 {
            let mut e2 = 0.0;
            for var in 0..2 {
                for (a, b) in s.coeffs[var].iter().zip(&reference.coeffs[var]) {
                    e2 += (a - b) * (a - b);
                }
            }
            e2.sqrt()
        };
        let e1 = err(&run(0.02));
        let e2 = err(&run(0.01));
        let order = (e1 / e2).log2();
        assert!((order - 4.0).abs() < 0.25, "observed RK4 order {order}");
    }

    #[test]
    fn zero_rhs_leaves_state_unchanged() {
        let q = 2;
        let n = 6;
        let mesh = Mesh1D::uniform(-2.0, 2.0, n).unwrap();
        let basis = ModalBasis::for_degree(q).unwrap();
        let problem =
            ProblemSpec::homogeneous("z", Nonlinearity::Zero, BoundaryKind::Periodic, (-2.0, 2.0));
        // constants are transported exactly and N = 0: state is stationary
        let w1 = l2_project(|_| 0.7, &mesh, q);
        let w2 = l2_project(|_| -0.2, &mesh, q);
        let s0 = DGState::from_fields(w1.clone(), w2.clone(), q);
        let s1 = rk4_step(&s0, 0.05, &mesh, &basis, &problem, &FluxParams::upwind()).unwrap();
        for (a, b) in s1.coeffs[0].iter().zip(&w1) {
            assert!((a - b).abs() < 1e-14);
        }
        for (a, b) in s1.coeffs[1].iter().zip(&w2) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn observer_sees_every_step() {
        let mesh = Mesh1D::uniform(-2.0, 2.0, 4).unwrap();
        let basis = ModalBasis::for_degree(1).unwrap();
        let problem =
            ProblemSpec::homogeneous("o", Nonlinearity::Zero, BoundaryKind::Periodic, (-2.0, 2.0));
        let plan = TimeStepPlan::new(StepRule::FixedDt(0.3), &mesh, 1.0).unwrap();
        let mut seen = Vec::new();
        let s = DGState::zeros(4, 1);
        let end = evolve(
            s,
            &plan,
            &mesh,
            &basis,
            &problem,
            &FluxParams::upwind(),
            |i, st| seen.push((i, st.time)),
        )
        .unwrap();
        assert_eq!(seen.len(), plan.n_steps() + 1);
        assert!((end.time - 1.0).abs() < 1e-14);
        assert_eq!(seen[0].0, 0);
    }
}
