use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dimer_dg::harness::{cmd_converge, cmd_energy_audit, cmd_kink, cmd_simulate, RunConfig};

/// DG solver and verification harness for a 1D semi-linear hyperbolic
/// system with saturable coupling (characteristic variables, four-parameter
/// interface fluxes, traveling-kink experiments).
#[derive(Parser)]
#[command(name = "dimer-dg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Optional key=value config file; command-line flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem name: example1 | example2 | kink.
    #[arg(long)]
    problem: Option<String>,
    /// Flux: upwind | central | mixed-upwind | mixed-central | custom:a1,a2,b1,b2.
    #[arg(long)]
    flux: Option<String>,
    /// Polynomial degree(s), comma-separated for sweeps.
    #[arg(long)]
    q: Option<String>,
    /// Element count(s), comma-separated for sweeps.
    #[arg(long)]
    cells: Option<String>,
    /// Final time.
    #[arg(long, allow_negative_numbers = true)]
    tfinal: Option<f64>,
    /// CFL number (dt = cfl * h).
    #[arg(long, allow_negative_numbers = true)]
    cfl: Option<f64>,
    /// Fixed time step (overrides --cfl).
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Boundary treatment override: periodic | dirichlet.
    #[arg(long)]
    bc: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Kink ODE seed "w1,w2", or RNG seed for energy-audit.
    #[arg(long = "seed-profile")]
    seed_profile: Option<String>,
    /// Accept flux parameters violating the stability condition.
    #[arg(long = "allow-unstable")]
    allow_unstable: bool,
    /// Permit long runs (kink beyond t = 25).
    #[arg(long)]
    long: bool,
    /// Kink wave speed.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Kink transition center at t = 0.
    #[arg(long = "z-center", allow_negative_numbers = true)]
    z_center: Option<f64>,
    /// Moving-box left edge at t = 0.
    #[arg(long = "box-a", allow_negative_numbers = true)]
    box_a: Option<f64>,
    /// Moving-box right edge at t = 0.
    #[arg(long = "box-b", allow_negative_numbers = true)]
    box_b: Option<f64>,
    /// Energy-log cadence in steps.
    #[arg(long = "energy-every")]
    energy_every: Option<usize>,
    /// Domain left endpoint override.
    #[arg(long, allow_negative_numbers = true)]
    xa: Option<f64>,
    /// Domain right endpoint override.
    #[arg(long, allow_negative_numbers = true)]
    xb: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence sweep against the exact solution; writes an error table.
    Converge(CommonOpts),
    /// Single run; writes snapshots.csv and energy.csv.
    Simulate(CommonOpts),
    /// Traveling-kink experiment with moving-box energy tracking.
    Kink(CommonOpts),
    /// Energy-identity audit on random states for every flux preset.
    EnergyAudit(CommonOpts),
}

fn resolve(opts: &CommonOpts) -> dimer_dg::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &opts.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = &opts.problem {
        cfg.set("problem", v)?;
    }
    if let Some(v) = &opts.flux {
        cfg.set("flux", v)?;
    }
    if let Some(v) = &opts.q {
        cfg.set("q", v)?;
    }
    if let Some(v) = &opts.cells {
        cfg.set("cells", v)?;
    }
    if let Some(v) = opts.tfinal {
        cfg.t_final = v;
    }
    if let Some(v) = opts.cfl {
        cfg.cfl = Some(v);
    }
    if let Some(v) = opts.dt {
        cfg.dt = Some(v);
    }
    if let Some(v) = &opts.bc {
        cfg.bc = Some(v.clone());
    }
    if let Some(v) = &opts.out {
        cfg.out = v.clone();
    }
    if let Some(v) = &opts.seed_profile {
        cfg.seed_profile = Some(v.clone());
    }
    if opts.allow_unstable {
        cfg.allow_unstable = true;
    }
    if opts.long {
        cfg.long = true;
    }
    if let Some(v) = opts.c {
        cfg.c = v;
    }
    if let Some(v) = opts.z_center {
        cfg.z_center = v;
    }
    if let Some(v) = opts.box_a {
        cfg.box_a = v;
    }
    if let Some(v) = opts.box_b {
        cfg.box_b = v;
    }
    if let Some(v) = opts.energy_every {
        cfg.energy_every = v;
    }
    if let Some(v) = opts.xa {
        let xb = cfg.domain.map(|d| d.1).unwrap_or(f64::NAN);
        cfg.domain = Some((v, xb));
    }
    if let Some(v) = opts.xb {
        let xa = cfg.domain.map(|d| d.0).unwrap_or(f64::NAN);
        cfg.domain = Some((xa, v));
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> dimer_dg::Result<Vec<PathBuf>> {
        match &cli.command {
            Command::Converge(o) => cmd_converge(&resolve(o)?),
            Command::Simulate(o) => cmd_simulate(&resolve(o)?),
            Command::Kink(o) => {
                let mut cfg = resolve(o)?;
                cfg.problem = "kink".into();
                cmd_kink(&cfg)
            }
            Command::EnergyAudit(o) => cmd_energy_audit(&resolve(o)?),
        }
    })();
    match result {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
