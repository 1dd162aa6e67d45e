use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use quatkg::multilayer::Segment;
use quatkg_cli::commands::{
    cmd_field, cmd_ordering, cmd_solve, cmd_sweep, FieldOptions, OrderingOptions, SolveOptions, SweepOptions,
};
use quatkg_cli::config::{ConfigFile, OutputFormat, Param, SpecParams, SweepRange};
use quatkg_cli::error::CliError;
use quatkg_cli::verify::{self, VerifyOptions};

/// Klein-Gordon scattering off quaternionic rectangular barriers.
///
/// Angles are in radians.
#[derive(Debug, Parser)]
#[command(name = "quatkg", version)]
struct Cli {
    /// More log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one barrier with both solvers and cross-check them.
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Tabulate |c1|, |c2|, |c7|, |c8| over a grid of one or two parameters.
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        /// param:start:stop:step, param one of a, v0, omega0, theta, phi.
        #[arg(long, action = ArgAction::Append, allow_hyphen_values = true)]
        sweep: Vec<String>,
        /// Worker threads (default: one per core).
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Sample the wave function on a uniform grid.
    Field {
        #[command(flatten)]
        spec: SpecArgs,
        /// Default -2.
        #[arg(long, allow_hyphen_values = true)]
        xmin: Option<f64>,
        /// Default a + 2.
        #[arg(long, allow_hyphen_values = true)]
        xmax: Option<f64>,
        /// Default 201.
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Compare transmission through A-gap-B and B-gap-A.
    Ordering {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Run the verification suite; exit 1 if any check fails.
    Verify {
        /// Smaller samples, finishes in a few seconds.
        #[arg(long)]
        quick: bool,
        /// Perturb one solver output by 1e-3 so the suite must fail.
        #[arg(long, hide = true)]
        inject_perturbation: bool,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Barrier width (default 1).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Barrier height (default 0.3).
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<f64>,
    /// Energy (default 1).
    #[arg(long, allow_hyphen_values = true)]
    omega0: Option<f64>,
    /// Polar angle of the potential direction, in [0, pi] (default pi/2).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Azimuth of the potential direction (default 0).
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// text, csv or json (default text).
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    len_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    len_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_b: Option<f64>,
    /// Free gap between the two segments (default 2).
    #[arg(long, allow_hyphen_values = true)]
    gap: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega0: Option<f64>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile, CliError> {
    path.as_deref().map_or_else(|| Ok(ConfigFile::default()), ConfigFile::load)
}

fn resolve_spec(args: SpecArgs, cfg: &ConfigFile) -> Result<SpecParams, CliError> {
    let mut p = SpecParams::default();
    for (param, flag) in [
        (Param::A, args.a),
        (Param::V0, args.v0),
        (Param::Omega0, args.omega0),
        (Param::Theta, args.theta),
        (Param::Phi, args.phi),
    ] {
        if let Some(v) = cfg.pick(flag, param.name())? {
            p.set(param, v);
        }
    }
    Ok(p)
}

fn resolve_format(io: &IoArgs, cfg: &ConfigFile) -> Result<OutputFormat, CliError> {
    Ok(cfg.pick(io.format.clone(), "format")?.map(|s| s.parse()).transpose()?.unwrap_or_default())
}

fn emit(text: &str, out: Option<PathBuf>, cfg: &ConfigFile) -> Result<(), CliError> {
    match cfg.pick(out, "out")? {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                // a closed reader (`| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(CliError::from),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Solve { spec, io } => {
            let cfg = load_config(&io.config)?;
            let opts = SolveOptions {
                params: resolve_spec(spec, &cfg)?,
                format: resolve_format(&io, &cfg)?,
            };
            emit(&cmd_solve(&opts)?, io.out, &cfg)?;
        }
        Command::Sweep {
            spec,
            sweep,
            threads,
            io,
        } => {
            let cfg = load_config(&io.config)?;
            let ranges: Vec<&str> = if sweep.is_empty() {
                cfg.get_all("sweep")
            } else {
                sweep.iter().map(String::as_str).collect()
            };
            let opts = SweepOptions {
                params: resolve_spec(spec, &cfg)?,
                sweeps: ranges.into_iter().map(str::parse::<SweepRange>).collect::<Result<_, _>>()?,
                format: resolve_format(&io, &cfg)?,
                threads: cfg.pick(threads, "threads")?,
            };
            emit(&cmd_sweep(&opts)?, io.out, &cfg)?;
        }
        Command::Field {
            spec,
            xmin,
            xmax,
            points,
            io,
        } => {
            let cfg = load_config(&io.config)?;
            let params = resolve_spec(spec, &cfg)?;
            let opts = FieldOptions {
                x_min: cfg.pick(xmin, "xmin")?.unwrap_or(-2.0),
                x_max: cfg.pick(xmax, "xmax")?.unwrap_or(params.a + 2.0),
                points: cfg.pick(points, "points")?.unwrap_or(201),
                format: resolve_format(&io, &cfg)?,
                params,
            };
            emit(&cmd_field(&opts)?, io.out, &cfg)?;
        }
        Command::Ordering { pair, io } => {
            let cfg = load_config(&io.config)?;
            let segment = |len, v0, theta, phi, suffix: &str, default_phi| -> Result<Segment, CliError> {
                Ok(Segment::new(
                    cfg.pick(len, &format!("len-{suffix}"))?.unwrap_or(1.0),
                    cfg.pick(v0, &format!("v0-{suffix}"))?.unwrap_or(0.3),
                    cfg.pick(theta, &format!("theta-{suffix}"))?.unwrap_or(std::f64::consts::FRAC_PI_2),
                    cfg.pick(phi, &format!("phi-{suffix}"))?.unwrap_or(default_phi),
                )?)
            };
            let opts = OrderingOptions {
                first: segment(pair.len_a, pair.v0_a, pair.theta_a, pair.phi_a, "a", 0.0)?,
                second: segment(pair.len_b, pair.v0_b, pair.theta_b, pair.phi_b, "b", std::f64::consts::FRAC_PI_2)?,
                gap: cfg.pick(pair.gap, "gap")?.unwrap_or(2.0),
                omega0: cfg.pick(pair.omega0, "omega0")?.unwrap_or(1.0),
                format: resolve_format(&io, &cfg)?,
            };
            emit(&cmd_ordering(&opts)?, io.out, &cfg)?;
        }
        Command::Verify {
            quick,
            inject_perturbation,
            config,
            out,
        } => {
            let cfg = load_config(&config)?;
            let opts = VerifyOptions {
                quick: cfg.flag(quick, "quick")?,
                perturbation: if inject_perturbation { 1e-3 } else { 0.0 },
            };
            let results = verify::run_suite(&opts);
            emit(&verify::render(&results), out, &cfg)?;
            if !verify::all_passed(&results) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();

    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("quatkg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
