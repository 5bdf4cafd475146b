//! Run orchestration behind the CLI: configuration resolution, problem
//! setup, the convergence / simulation / kink / energy-audit commands, and
//! their CSV outputs.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{eval_basis, gauss_radau_project, l2_project, ModalBasis, RadauSide};
use crate::diagnostics::{
    discrete_energy, energy_csv_line, fmt_sci, l2_error, moving_box_energy, write_errors_csv,
    ConvergenceTable, ENERGY_CSV_HEADER,
};
use crate::kink::{generate_kink, q_invariant, KinkProfile, SEED_C04};
use crate::mesh::Mesh1D;
use crate::model::{self, characteristic_transform, BoundaryKind, ProblemSpec};
use crate::operator::{assemble_rhs, energy_rate_formula, inner_product, DGState, FluxParams};
use crate::time::{evolve, StepRule, TimeStepPlan, DEFAULT_CFL};
use crate::{Error, Result};

/// Fully resolved run configuration. Values come from defaults, then an
/// optional key=value config file, then command-line flags (flags win).
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: String,
    pub flux: String,
    pub q_list: Vec<usize>,
    pub cells_list: Vec<usize>,
    pub t_final: f64,
    pub cfl: Option<f64>,
    pub dt: Option<f64>,
    pub bc: Option<String>,
    pub out: PathBuf,
    pub seed_profile: Option<String>,
    pub allow_unstable: bool,
    pub long: bool,
    /// Kink wave speed.
    pub c: f64,
    /// Translated coordinate of the kink transition (modulus-1/2 point).
    pub z_center: f64,
    /// Moving-box window at t = 0.
    pub box_a: f64,
    pub box_b: f64,
    /// Energy-log cadence in steps.
    pub energy_every: usize,
    /// Domain override (kink default is (-40, 200), examples (-2, 2)).
    pub domain: Option<(f64, f64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "example1".into(),
            flux: "upwind".into(),
            q_list: vec![3],
            cells_list: vec![40],
            t_final: 1.0,
            cfl: None,
            dt: None,
            bc: None,
            out: PathBuf::from("."),
            seed_profile: None,
            allow_unstable: false,
            long: false,
            c: 0.4,
            z_center: 60.0,
            box_a: 60.0,
            box_b: 140.0,
            energy_every: 100,
            domain: None,
        }
    }
}

fn parse_usize_list(s: &str, key: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: bad integer `{t}`")))
        })
        .collect()
}

fn parse_f64(s: &str, key: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: bad number `{s}`")))
}

impl RunConfig {
    /// Apply one key=value setting (used both by the config file and by the
    /// flag layer).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "problem" => self.problem = value.to_string(),
            "flux" => self.flux = value.to_string(),
            "q" => self.q_list = parse_usize_list(value, "q")?,
            "cells" => self.cells_list = parse_usize_list(value, "cells")?,
            "tfinal" => self.t_final = parse_f64(value, "tfinal")?,
            "cfl" => self.cfl = Some(parse_f64(value, "cfl")?),
            "dt" => self.dt = Some(parse_f64(value, "dt")?),
            "bc" => self.bc = Some(value.to_string()),
            "out" => self.out = PathBuf::from(value),
            "seed_profile" => self.seed_profile = Some(value.to_string()),
            "allow_unstable" => {
                self.allow_unstable = value
                    .parse()
                    .map_err(|_| Error::Config(format!("allow_unstable: bad bool `{value}`")))?
            }
            "long" => {
                self.long = value
                    .parse()
                    .map_err(|_| Error::Config(format!("long: bad bool `{value}`")))?
            }
            "c" => self.c = parse_f64(value, "c")?,
            "z_center" => self.z_center = parse_f64(value, "z_center")?,
            "box_a" => self.box_a = parse_f64(value, "box_a")?,
            "box_b" => self.box_b = parse_f64(value, "box_b")?,
            "energy_every" => {
                self.energy_every = value
                    .parse()
                    .map_err(|_| Error::Config(format!("energy_every: bad integer `{value}`")))?
            }
            "xa" => {
                let xb = self.domain.map(|d| d.1).unwrap_or(f64::NAN);
                self.domain = Some((parse_f64(value, "xa")?, xb));
            }
            "xb" => {
                let xa = self.domain.map(|d| d.0).unwrap_or(f64::NAN);
                self.domain = Some((xa, parse_f64(value, "xb")?));
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Load key=value lines from a config file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn flux_params(&self) -> Result<FluxParams> {
        parse_flux(&self.flux, self.allow_unstable)
    }

    fn step_rule(&self) -> StepRule {
        match (self.dt, self.cfl) {
            (Some(dt), _) => StepRule::FixedDt(dt),
            (None, Some(cfl)) => StepRule::CflScaled(cfl),
            (None, None) => StepRule::CflScaled(DEFAULT_CFL),
        }
    }
}

/// Flux spec strings: a preset name or `custom:a1,a2,b1,b2`.
pub fn parse_flux(s: &str, allow_unstable: bool) -> Result<FluxParams> {
    if let Some(p) = FluxParams::named(s) {
        return Ok(p);
    }
    let body = s
        .strip_prefix("custom:")
        .ok_or_else(|| Error::Config(format!("unknown flux `{s}`")))?;
    let parts: Vec<f64> = body
        .split(',')
        .map(|t| parse_f64(t, "flux"))
        .collect::<Result<_>>()?;
    if parts.len() != 4 {
        return Err(Error::Config(format!(
            "custom flux needs 4 parameters, got {}",
            parts.len()
        )));
    }
    if allow_unstable {
        Ok(FluxParams::unchecked(parts[0], parts[1], parts[2], parts[3]))
    } else {
        FluxParams::new(parts[0], parts[1], parts[2], parts[3])
    }
}

/// Problem resolution, including kink-profile construction and boundary
/// overrides from config.
pub struct PreparedProblem {
    pub problem: ProblemSpec,
    pub domain: (f64, f64),
    pub kink: Option<KinkProfile>,
}

pub fn prepare_problem(cfg: &RunConfig) -> Result<PreparedProblem> {
    let mut out = if cfg.problem == "kink" {
        let domain = cfg.domain.unwrap_or((-40.0, 200.0));
        if !(domain.0.is_finite() && domain.1.is_finite() && domain.0 < domain.1) {
            return Err(Error::Config("kink domain needs xa < xb".into()));
        }
        let seed = match cfg.seed_profile.as_deref() {
            None => SEED_C04,
            Some(s) => {
                let parts: Vec<f64> = s
                    .split(',')
                    .map(|t| parse_f64(t, "seed_profile"))
                    .collect::<Result<_>>()?;
                if parts.len() != 2 {
                    return Err(Error::Config("seed_profile needs `w1,w2`".into()));
                }
                (parts[0], parts[1])
            }
        };
        let profile = generate_kink(cfg.c, seed, cfg.z_center, 1e-12)?;
        let c = cfg.c;
        let p = profile.clone();
        let mut problem = model::kink_problem(domain);
        problem.boundary = BoundaryKind::DirichletInflow {
            w1_at_xb: profile.asymptote.0,
            w2_at_xa: 0.0,
        };
        problem.exact = Some(Box::new(move |x, t| p.eval(x - c * t)));
        PreparedProblem {
            problem,
            domain,
            kink: Some(profile),
        }
    } else {
        let problem = model::make_problem(&cfg.problem)?;
        let domain = cfg.domain.unwrap_or(problem.domain);
        PreparedProblem {
            problem,
            domain,
            kink: None,
        }
    };
    if let Some(bc) = cfg.bc.as_deref() {
        out.problem.boundary = match bc {
            "periodic" => BoundaryKind::Periodic,
            "dirichlet" => match out.problem.boundary {
                b @ BoundaryKind::DirichletInflow { .. } => b,
                BoundaryKind::Periodic => BoundaryKind::DirichletInflow {
                    w1_at_xb: 0.0,
                    w2_at_xa: 0.0,
                },
            },
            other => return Err(Error::Config(format!("unknown bc `{other}`"))),
        };
    }
    Ok(out)
}

/// Initial DG data: Gauss–Radau projection of the exact solution when one
/// exists (one-sided endpoint matching per transport direction), otherwise
/// zeros.
pub fn initial_state(problem: &ProblemSpec, mesh: &Mesh1D, q: usize) -> DGState {
    match &problem.exact {
        Some(exact) => {
            let w1 = gauss_radau_project(|x| exact(x, 0.0).0, mesh, q, RadauSide::Plus);
            let w2 = gauss_radau_project(|x| exact(x, 0.0).1, mesh, q, RadauSide::Minus);
            DGState::from_fields(w1, w2, q)
        }
        None => DGState::zeros(mesh.n_elements(), q),
    }
}

fn write_manifest(out: &Path, files: &[PathBuf]) -> Result<PathBuf> {
    let path = out.join("manifest.txt");
    let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
    for file in files {
        writeln!(f, "{}", file.file_name().unwrap().to_string_lossy())?;
    }
    Ok(path)
}

/// Convergence sweep over every (q, N) pair; errors measured at t_final
/// against the exact solution. One table CSV per invocation, named after
/// the flux.
pub fn cmd_converge(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let flux = cfg.flux_params()?;
    let prep = prepare_problem(cfg)?;
    if prep.problem.exact.is_none() {
        return Err(Error::NoExactSolution(cfg.problem.clone()));
    }
    std::fs::create_dir_all(&cfg.out)?;
    let mut table = ConvergenceTable::default();
    for &q in &cfg.q_list {
        let mut errs = Vec::new();
        for &n in &cfg.cells_list {
            let e = run_convergence_case(&prep.problem, prep.domain, q, n, cfg, &flux)?;
            errs.push(e);
        }
        table.push_sweep(q, &cfg.cells_list, &errs);
    }
    let path = cfg.out.join(format!("errors_{}.csv", flux_label(cfg)));
    write_errors_csv(&path, &table)?;
    let manifest = write_manifest(&cfg.out, &[path.clone()])?;
    Ok(vec![path, manifest])
}

fn flux_label(cfg: &RunConfig) -> String {
    cfg.flux.replace([':', ','], "_")
}

pub fn run_convergence_case(
    problem: &ProblemSpec,
    domain: (f64, f64),
    q: usize,
    n: usize,
    cfg: &RunConfig,
    flux: &FluxParams,
) -> Result<crate::diagnostics::L2Errors> {
    let mesh = Mesh1D::uniform(domain.0, domain.1, n)?;
    let basis = ModalBasis::for_degree(q)?;
    let state = initial_state(problem, &mesh, q);
    let plan = TimeStepPlan::new(cfg.step_rule(), &mesh, cfg.t_final)?;
    let end = evolve(state, &plan, &mesh, &basis, problem, flux, |_, _| {})?;
    let exact = problem.exact.as_ref().unwrap();
    Ok(l2_error(&end, &mesh, &basis, |x, t| exact(x, t), cfg.t_final))
}

pub const SNAPSHOTS_CSV_HEADER: &str = "t,x,w1,w2,b1,b2";

/// Snapshot sampling: 8 equispaced points per element (endpoints included)
/// so sub-cell polynomial structure is visible.
fn write_snapshot(
    f: &mut impl std::io::Write,
    state: &DGState,
    mesh: &Mesh1D,
    t: f64,
) -> Result<()> {
    let np = state.n_modes();
    let q = state.degree;
    for j in 0..state.n_elements {
        for i in 0..8 {
            let r = -1.0 + 2.0 * i as f64 / 7.0;
            let phi = eval_basis(q, r);
            let mut w1 = 0.0;
            let mut w2 = 0.0;
            for m in 0..np {
                w1 += state.coeffs[0][j * np + m] * phi[m];
                w2 += state.coeffs[1][j * np + m] * phi[m];
            }
            let (b1, b2) = characteristic_transform(w1, w2);
            let x = mesh.from_reference(j, r);
            writeln!(
                f,
                "{},{},{},{},{},{}",
                fmt_sci(t),
                fmt_sci(x),
                fmt_sci(w1),
                fmt_sci(w2),
                fmt_sci(b1),
                fmt_sci(b2)
            )?;
        }
    }
    Ok(())
}

/// Single simulation: snapshots at t = 0 and t = t_final plus an energy
/// trace logged every `energy_every` steps.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let flux = cfg.flux_params()?;
    let prep = prepare_problem(cfg)?;
    let q = cfg.q_list[0];
    let n = cfg.cells_list[0];
    let mesh = Mesh1D::uniform(prep.domain.0, prep.domain.1, n)?;
    let basis = ModalBasis::for_degree(q)?;
    std::fs::create_dir_all(&cfg.out)?;

    let state = match &prep.kink {
        Some(profile) => kink_initial_state(profile, &mesh, q),
        None => initial_state(&prep.problem, &mesh, q),
    };

    let snap_path = cfg.out.join("snapshots.csv");
    let energy_path = cfg.out.join("energy.csv");
    let mut snap = std::io::BufWriter::new(std::fs::File::create(&snap_path)?);
    let mut energy = std::io::BufWriter::new(std::fs::File::create(&energy_path)?);
    writeln!(snap, "{SNAPSHOTS_CSV_HEADER}")?;
    writeln!(energy, "{ENERGY_CSV_HEADER}")?;

    write_snapshot(&mut snap, &state, &mesh, 0.0)?;
    let e0 = discrete_energy(&state, &mesh);
    writeln!(energy, "{}", energy_csv_line(0, 0.0, e0, None))?;

    if cfg.t_final > 0.0 {
        let plan = TimeStepPlan::new(cfg.step_rule(), &mesh, cfg.t_final)?;
        let every = cfg.energy_every.max(1);
        let mut log_err: Option<Error> = None;
        let end = evolve(
            state,
            &plan,
            &mesh,
            &basis,
            &prep.problem,
            &flux,
            |step, s| {
                if step > 0 && (step % every == 0 || step == plan.n_steps()) {
                    let e = discrete_energy(s, &mesh);
                    if let Err(err) =
                        writeln!(energy, "{}", energy_csv_line(step, s.time, e, None))
                    {
                        log_err.get_or_insert(err.into());
                    }
                }
            },
        )?;
        if let Some(err) = log_err {
            return Err(err);
        }
        write_snapshot(&mut snap, &end, &mesh, end.time)?;
    }
    snap.flush()?;
    energy.flush()?;
    let manifest = write_manifest(&cfg.out, &[snap_path.clone(), energy_path.clone()])?;
    Ok(vec![snap_path, energy_path, manifest])
}

/// Kink initial data: element-wise L2 projection of the generated profile
/// (evaluated at the Gauss nodes).
pub fn kink_initial_state(profile: &KinkProfile, mesh: &Mesh1D, q: usize) -> DGState {
    let w1 = l2_project(|x| profile.eval(x).0, mesh, q);
    let w2 = l2_project(|x| profile.eval(x).1, mesh, q);
    DGState::from_fields(w1, w2, q)
}

pub const PROFILE_CSV_HEADER: &str = "z,w1,w2,Q";

/// Kink experiment: profile CSV, snapshots at t = 0 and t = t_final, and a
/// moving-box energy trace with the box translating at the wave speed.
pub fn cmd_kink(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    if cfg.problem != "kink" {
        return Err(Error::Config("kink command requires problem=kink".into()));
    }
    if cfg.t_final > 25.0 && !cfg.long {
        return Err(Error::Config(
            "kink runs beyond t = 25 are gated behind --long".into(),
        ));
    }
    let flux = cfg.flux_params()?;
    let prep = prepare_problem(cfg)?;
    let profile = prep.kink.as_ref().unwrap();
    let q = cfg.q_list[0];
    let n = cfg.cells_list[0];
    let mesh = Mesh1D::uniform(prep.domain.0, prep.domain.1, n)?;
    let basis = ModalBasis::for_degree(q)?;
    std::fs::create_dir_all(&cfg.out)?;

    // profile dump over the domain
    let profile_path = cfg.out.join("profile.csv");
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&profile_path)?);
        writeln!(f, "{PROFILE_CSV_HEADER}")?;
        for (z, w1, w2, qv) in profile.sample(prep.domain.0, prep.domain.1, 2001) {
            writeln!(
                f,
                "{},{},{},{}",
                fmt_sci(z),
                fmt_sci(w1),
                fmt_sci(w2),
                fmt_sci(qv)
            )?;
        }
    }

    let state = kink_initial_state(profile, &mesh, q);
    let snap_path = cfg.out.join("snapshots.csv");
    let energy_path = cfg.out.join("energy.csv");
    let mut snap = std::io::BufWriter::new(std::fs::File::create(&snap_path)?);
    let mut energy = std::io::BufWriter::new(std::fs::File::create(&energy_path)?);
    writeln!(snap, "{SNAPSHOTS_CSV_HEADER}")?;
    writeln!(energy, "{ENERGY_CSV_HEADER}")?;
    write_snapshot(&mut snap, &state, &mesh, 0.0)?;

    let c = cfg.c;
    let clip = |a: f64, b: f64| -> (f64, f64) {
        (a.max(prep.domain.0), b.min(prep.domain.1))
    };
    let (a0, b0) = clip(cfg.box_a, cfg.box_b);
    let e0 = discrete_energy(&state, &mesh);
    let box0 = moving_box_energy(&state, &mesh, a0, b0)?;
    writeln!(energy, "{}", energy_csv_line(0, 0.0, e0, Some(box0)))?;

    let end = if cfg.t_final > 0.0 {
        let rule = match (cfg.dt, cfg.cfl) {
            (Some(dt), _) => StepRule::FixedDt(dt),
            (None, Some(cfl)) => StepRule::CflScaled(cfl),
            (None, None) => StepRule::FixedDt(4e-5),
        };
        let plan = TimeStepPlan::new(rule, &mesh, cfg.t_final)?;
        let every = cfg.energy_every.max(1);
        let mut log_err: Option<Error> = None;
        let end = evolve(
            state,
            &plan,
            &mesh,
            &basis,
            &prep.problem,
            &flux,
            |step, s| {
                if step > 0 && (step % every == 0 || step == plan.n_steps()) {
                    let (a, b) = clip(cfg.box_a + c * s.time, cfg.box_b + c * s.time);
                    let result = moving_box_energy(s, &mesh, a, b)
                        .and_then(|be| {
                            writeln!(
                                energy,
                                "{}",
                                energy_csv_line(step, s.time, discrete_energy(s, &mesh), Some(be))
                            )
                            .map_err(Error::from)
                        });
                    if let Err(err) = result {
                        log_err.get_or_insert(err);
                    }
                }
            },
        )?;
        if let Some(err) = log_err {
            return Err(err);
        }
        end
    } else {
        state
    };
    write_snapshot(&mut snap, &end, &mesh, end.time)?;
    snap.flush()?;
    energy.flush()?;
    let files = vec![profile_path, snap_path, energy_path];
    let manifest = write_manifest(&cfg.out, &files)?;
    let mut out = files;
    out.push(manifest);
    Ok(out)
}

pub const AUDIT_CSV_HEADER: &str = "flux,trial,pairing,formula,rel_dev";

/// Energy-identity audit: on random periodic states, the pairing
/// <state, rhs> must match the closed-form jump/boundary rate for every
/// preset. Writes a per-trial CSV and fails if any deviation exceeds 1e-11.
pub fn cmd_energy_audit(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let q = cfg.q_list[0];
    let n = cfg.cells_list[0];
    let mesh = Mesh1D::uniform(-2.0, 2.0, n)?;
    let basis = ModalBasis::for_degree(q)?;
    let problem = ProblemSpec::homogeneous(
        "audit",
        crate::model::Nonlinearity::Sech,
        BoundaryKind::Periodic,
        (-2.0, 2.0),
    );
    let rng_seed: u64 = match cfg.seed_profile.as_deref() {
        None => 42,
        Some(s) => s
            .parse()
            .map_err(|_| Error::Config(format!("seed_profile: bad integer `{s}`")))?,
    };
    std::fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join("energy_audit.csv");
    let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
    writeln!(f, "{AUDIT_CSV_HEADER}")?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let presets = [
        FluxParams::upwind(),
        FluxParams::central(),
        FluxParams::mixed_upwind(),
        FluxParams::mixed_central(),
    ];
    let mut worst = 0.0_f64;
    for p in presets {
        for trial in 0..100 {
            let mut s = DGState::zeros(n, q);
            for var in 0..2 {
                for cc in s.coeffs[var].iter_mut() {
                    *cc = rng.gen_range(-1.0..1.0);
                }
            }
            let rhs = assemble_rhs(&s, 0.0, &mesh, &basis, &problem, &p)?;
            let pairing = inner_product(&s, &rhs, &mesh);
            let formula = energy_rate_formula(&s, &basis, &problem, &p);
            let scale = inner_product(&s, &s, &mesh).max(1.0);
            let dev = (pairing - formula).abs() / scale;
            worst = worst.max(dev);
            writeln!(
                f,
                "{},{},{},{},{}",
                p.preset,
                trial,
                fmt_sci(pairing),
                fmt_sci(formula),
                fmt_sci(dev)
            )?;
        }
    }
    f.flush()?;
    if worst > 1e-11 {
        return Err(Error::Config(format!(
            "energy identity audit failed: worst relative deviation {worst:e}"
        )));
    }
    let manifest = write_manifest(&cfg.out, &[path.clone()])?;
    Ok(vec![path, manifest])
}

/// Helper exposed for tests and the kink acceptance run: locate the
/// transition (modulus-1/2 crossing) of the numerical solution by sampling
/// the reconstruction densely.
pub fn transition_location(state: &DGState, mesh: &Mesh1D) -> Option<f64> {
    let samples = 16 * state.n_elements;
    let xa = mesh.x_a;
    let xb = mesh.x_b;
    let modulus = |x: f64| -> f64 {
        let w1 = state.reconstruct(0, mesh, x);
        let w2 = state.reconstruct(1, mesh, x);
        w1.hypot(w2)
    };
    let mut prev_x = xa;
    let mut prev_m = modulus(xa);
    for i in 1..=samples {
        let x = xa + (xb - xa) * i as f64 / samples as f64;
        let m = modulus(x);
        if (prev_m - 0.5) * (m - 0.5) <= 0.0 && prev_m != m {
            // bisect inside the bracketing interval
            let (mut lo, mut hi) = if prev_m < 0.5 { (prev_x, x) } else { (x, prev_x) };
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if modulus(mid) < 0.5 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_m = m;
    }
    None
}

/// Largest |Q| of the reconstructed state sampled along the mesh — used to
/// monitor the reduced-system invariant during kink runs.
pub fn max_q_of_state(state: &DGState, mesh: &Mesh1D, c: f64) -> f64 {
    let mut worst = 0.0_f64;
    let samples = 8 * state.n_elements;
    for i in 0..=samples {
        let x = mesh.x_a + (mesh.x_b - mesh.x_a) * i as f64 / samples as f64;
        let w1 = state.reconstruct(0, mesh, x);
        let w2 = state.reconstruct(1, mesh, x);
        worst = worst.max(q_invariant(w1, w2, c).abs());
    }
    worst
}
