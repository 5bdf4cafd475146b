//! Energy, error, and convergence-rate measurements, plus the CSV emitters
//! shared by the CLI commands.

use std::io::Write as _;
use std::path::Path;

use crate::basis::{eval_basis, gauss_legendre, ModalBasis, NONLINEAR_QUAD_NODES};
use crate::mesh::Mesh1D;
use crate::model::characteristic_transform;
use crate::operator::DGState;
use crate::{Error, Result};

/// E^h = 1/2 sum_j int_{I_j} (w1^2 + w2^2) dx; orthonormal modes make this
/// a plain coefficient sum weighted by the element Jacobians.
pub fn discrete_energy(state: &DGState, mesh: &Mesh1D) -> f64 {
    let np = state.n_modes();
    let mut e = 0.0;
    for j in 0..state.n_elements {
        let jac = 0.5 * mesh.widths[j];
        for var in 0..2 {
            for m in 0..np {
                let c = state.coeffs[var][j * np + m];
                e += 0.5 * jac * c * c;
            }
        }
    }
    e
}

/// Energy restricted to [a, b]. Elements fully inside the box contribute
/// their coefficient sums; elements straddling a box edge are handled by
/// Gauss quadrature on the clipped sub-interval.
pub fn moving_box_energy(state: &DGState, mesh: &Mesh1D, a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::DegenerateBox { a, b });
    }
    let np = state.n_modes();
    let q = state.degree;
    let quad = gauss_legendre(NONLINEAR_QUAD_NODES)?;
    let mut e = 0.0;
    for j in 0..state.n_elements {
        let xl = mesh.vertices[j];
        let xr = mesh.vertices[j + 1];
        let lo = xl.max(a);
        let hi = xr.min(b);
        if hi <= lo {
            continue;
        }
        if lo == xl && hi == xr {
            let jac = 0.5 * mesh.widths[j];
            for var in 0..2 {
                for m in 0..np {
                    let c = state.coeffs[var][j * np + m];
                    e += 0.5 * jac * c * c;
                }
            }
            continue;
        }
        // clipped element: integrate the reconstruction over [lo, hi]
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (&rq, &wq) in quad.nodes.iter().zip(&quad.weights) {
            let x = mid + half * rq;
            let r = mesh.to_reference(j, x)?;
            let phi = eval_basis(q, r);
            let mut w1 = 0.0;
            let mut w2 = 0.0;
            for m in 0..np {
                w1 += state.coeffs[0][j * np + m] * phi[m];
                w2 += state.coeffs[1][j * np + m] * phi[m];
            }
            e += 0.5 * half * wq * (w1 * w1 + w2 * w2);
        }
    }
    Ok(e)
}

/// L2 errors of both characteristic variables and of the back-transformed
/// physical pair, all at time t.
#[derive(Clone, Copy, Debug)]
pub struct L2Errors {
    pub w1: f64,
    pub w2: f64,
    pub b1: f64,
    pub b2: f64,
}

pub fn l2_error<F>(state: &DGState, mesh: &Mesh1D, basis: &ModalBasis, exact: F, t: f64) -> L2Errors
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let np = state.n_modes();
    let mut acc = [0.0_f64; 4];
    for j in 0..state.n_elements {
        let jac = 0.5 * mesh.widths[j];
        for (k, (&r, &w)) in basis.quad.nodes.iter().zip(&basis.quad.weights).enumerate() {
            let phi = &basis.phi[k];
            let mut w1h = 0.0;
            let mut w2h = 0.0;
            for m in 0..np {
                w1h += state.coeffs[0][j * np + m] * phi[m];
                w2h += state.coeffs[1][j * np + m] * phi[m];
            }
            let x = mesh.from_reference(j, r);
            let (w1e, w2e) = exact(x, t);
            let e1 = w1h - w1e;
            let e2 = w2h - w2e;
            let (eb1, eb2) = characteristic_transform(e1, e2);
            acc[0] += jac * w * e1 * e1;
            acc[1] += jac * w * e2 * e2;
            acc[2] += jac * w * eb1 * eb1;
            acc[3] += jac * w * eb2 * eb2;
        }
    }
    L2Errors {
        w1: acc[0].sqrt(),
        w2: acc[1].sqrt(),
        b1: acc[2].sqrt(),
        b2: acc[3].sqrt(),
    }
}

/// order_i = ln(e_{i-1}/e_i) / ln(n_i/n_{i-1}); NaN marks undefined entries
/// (first row, or vanishing errors), rendered as "--" in tables.
pub fn convergence_order(errors: &[f64], cells: &[usize]) -> Vec<f64> {
    assert_eq!(errors.len(), cells.len());
    let mut orders = vec![f64::NAN; errors.len()];
    for i in 1..errors.len() {
        if errors[i - 1] > 0.0 && errors[i] > 0.0 {
            orders[i] =
                (errors[i - 1] / errors[i]).ln() / (cells[i] as f64 / cells[i - 1] as f64).ln();
        }
    }
    orders
}

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub q: usize,
    pub cells: usize,
    pub errors: L2Errors,
    /// Orders for (w1, w2, b1, b2); NaN on the first row of each q block.
    pub orders: [f64; 4],
}

#[derive(Clone, Debug, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Build one q-block from a refinement sweep (errors listed in sweep
    /// order, cells strictly increasing).
    pub fn push_sweep(&mut self, q: usize, cells: &[usize], errors: &[L2Errors]) {
        assert_eq!(cells.len(), errors.len());
        let cols: Vec<Vec<f64>> = vec![
            errors.iter().map(|e| e.w1).collect(),
            errors.iter().map(|e| e.w2).collect(),
            errors.iter().map(|e| e.b1).collect(),
            errors.iter().map(|e| e.b2).collect(),
        ];
        let ords: Vec<Vec<f64>> = cols.iter().map(|c| convergence_order(c, cells)).collect();
        for (i, (&n, e)) in cells.iter().zip(errors).enumerate() {
            self.rows.push(ConvergenceRow {
                q,
                cells: n,
                errors: *e,
                orders: [ords[0][i], ords[1][i], ords[2][i], ords[3][i]],
            });
        }
    }
}

/// Scientific-notation cell with 10 significant digits, stable across runs.
pub fn fmt_sci(x: f64) -> String {
    if x.is_nan() {
        "--".to_string()
    } else {
        format!("{:.9e}", x)
    }
}

pub const ERRORS_CSV_HEADER: &str =
    "q,cells,e_w1,order_w1,e_w2,order_w2,e_b1,order_b1,e_b2,order_b2";

pub fn write_errors_csv(path: &Path, table: &ConvergenceTable) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{ERRORS_CSV_HEADER}")?;
    for r in &table.rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{},{},{}",
            r.q,
            r.cells,
            fmt_sci(r.errors.w1),
            fmt_sci(r.orders[0]),
            fmt_sci(r.errors.w2),
            fmt_sci(r.orders[1]),
            fmt_sci(r.errors.b1),
            fmt_sci(r.orders[2]),
            fmt_sci(r.errors.b2),
            fmt_sci(r.orders[3]),
        )?;
    }
    Ok(())
}

pub const ENERGY_CSV_HEADER: &str = "step,t,E_h,box_E_h";

/// One energy.csv record; box energy is blank when no moving box is active.
pub fn energy_csv_line(step: usize, t: f64, e_h: f64, box_e: Option<f64>) -> String {
    match box_e {
        Some(b) => format!("{},{},{},{}", step, fmt_sci(t), fmt_sci(e_h), fmt_sci(b)),
        None => format!("{},{},{},", step, fmt_sci(t), fmt_sci(e_h)),
    }
}
