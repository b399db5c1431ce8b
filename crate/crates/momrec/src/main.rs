use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use momrec::commands::{self, Kind, DEFAULT_QUAD_TOL, DEFAULT_TRUNCATION, DEFAULT_VERIFY_TOL};
use momrec::random::{self, Family};
use momrec::schema::{KernelJson, MeasurementFile, ModelFile, SignalFile};
use momrec::{json, CliError};
use momrec_core::dfinite::{ReconstructOptions, DEFAULT_NODES};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "momrec", version, about = "Reconstruct shift models and piecewise D-finite signals from moments")]
struct Cli {
    /// Worker threads for independent input files.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for the random signal generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output file for a single input; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Directory receiving one output per input, named after the input file.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate signal specs (or draw random ones) and write canonical signal files.
    Synth {
        inputs: Vec<PathBuf>,
        /// Draw signals from this family instead of reading specs.
        #[arg(long, conflicts_with = "inputs")]
        random: Option<Family>,
        /// Number of random signals.
        #[arg(long, default_value_t = 1, requires = "random")]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Compute power moments or Fourier coefficients of signal files.
    Moments {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = Kind::Poly)]
        kind: Kind,
        /// Quadrature tolerance for pieces without closed-form moments.
        #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Recover shifts and amplitudes of a shift model.
    Prony {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Number of shifts.
        #[arg(long)]
        s: usize,
        /// Highest kernel derivative order per shift.
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// gaussian:SIGMA, box:WIDTH, dirac, moments:m0,m1,... or none when the values
        /// are already generalized moments.
        #[arg(long, default_value = "none")]
        kernel: String,
        #[command(flatten)]
        out: Output,
    },
    /// Reconstruct a piecewise D-finite signal from power moments.
    Dfinite {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Operator order N.
        #[arg(long)]
        order: usize,
        /// Degree bounds of p_0..p_N, comma separated, "-" for an absent coefficient.
        #[arg(long, allow_hyphen_values = true)]
        degs: String,
        /// Number of jump points.
        #[arg(long)]
        jumps: usize,
        /// Fixed number of recurrence rows instead of the adaptive growth.
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        rank_tol: Option<f64>,
        /// Fixed jump clustering radius.
        #[arg(long)]
        jump_radius: Option<f64>,
        /// Chebyshev nodes per basis interval.
        #[arg(long, default_value_t = DEFAULT_NODES)]
        basis_nodes: usize,
        /// Skip jump refinement after root extraction.
        #[arg(long)]
        no_polish: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check a model against measurements; writes a PASS/FAIL/DEGENERATE report.
    Verify {
        model: PathBuf,
        measurements: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
        tol: f64,
        /// Padé-Hermite truncation order, lowered to what the moments allow.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn emit(dest: Option<&Path>, text: &str) -> Result<(), CliError> {
    match dest {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn destinations(names: &[PathBuf], out: &Output) -> Result<Vec<Option<PathBuf>>, CliError> {
    if let Some(dir) = &out.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        return Ok(names
            .iter()
            .map(|n| Some(dir.join(n.file_name().unwrap_or(n.as_os_str()))))
            .collect());
    }
    match names.len() {
        1 => Ok(vec![out.output.clone()]),
        _ => Err(CliError::Schema("several outputs need --out-dir".into())),
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(format!("worker pool: {e}")))
}

/// Runs `f` on every input file, on `jobs` workers, and writes the results in input order.
/// Every failure is reported; the first one decides the exit code.
fn run_files<T, U>(
    inputs: &[PathBuf],
    out: &Output,
    jobs: usize,
    f: impl Fn(T) -> Result<U, CliError> + Sync,
) -> Result<(), CliError>
where
    T: DeserializeOwned,
    U: Serialize,
{
    let dests = destinations(inputs, out)?;
    let work = |path: &PathBuf| -> Result<String, CliError> {
        let input = json::read(path)?;
        let output = f(input).map_err(|e| e.context(&path.display().to_string()))?;
        Ok(json::to_string(&output))
    };
    let results: Vec<_> = if jobs > 1 && inputs.len() > 1 {
        pool(jobs)?.install(|| inputs.par_iter().map(work).collect())
    } else {
        inputs.iter().map(work).collect()
    };
    let mut first = None;
    for ((path, dest), result) in inputs.iter().zip(dests).zip(results) {
        match result.and_then(|text| emit(dest.as_deref(), &text)) {
            Ok(()) => log::info!("{}: done", path.display()),
            Err(e) if first.is_none() => first = Some(e),
            Err(e) => eprintln!("error: {e}"),
        }
    }
    first.map_or(Ok(()), Err)
}

fn synth_random(family: Family, count: usize, seed: u64, out: &Output) -> Result<(), CliError> {
    let mut rng = random::generator(seed);
    let name = family.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    let names: Vec<PathBuf> = (0..count).map(|i| PathBuf::from(format!("{name}-{i:03}.json"))).collect();
    for (dest, _) in destinations(&names, out)?.into_iter().zip(&names) {
        let signal = random::random_signal(family, &mut rng);
        emit(dest.as_deref(), &json::to_string(&signal))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Synth { random: Some(family), count, out, .. } => synth_random(family, count, cli.seed, &out),
        Command::Synth { inputs, out, .. } => {
            if inputs.is_empty() {
                return Err(CliError::Schema("synth needs spec files or --random".into()));
            }
            run_files(&inputs, &out, jobs, |spec: SignalFile| commands::synth(spec))
        }
        Command::Moments { inputs, kmax, kind, tol, out } => run_files(&inputs, &out, jobs, |signal: SignalFile| {
            commands::moments(&signal, kmax, kind, tol)
        }),
        Command::Prony { inputs, s, r, kernel, out } => {
            let kernel = match kernel.as_str() {
                "none" => None,
                k => Some(KernelJson::parse(k).map_err(CliError::Schema)?),
            };
            run_files(&inputs, &out, jobs, |meas: MeasurementFile| {
                commands::prony(&meas, s, r, kernel.as_ref())
            })
        }
        Command::Dfinite {
            inputs,
            order,
            degs,
            jumps,
            rows,
            rank_tol,
            jump_radius,
            basis_nodes,
            no_polish,
            out,
        } => {
            let degs = commands::parse_degrees(&degs).map_err(CliError::Schema)?;
            let defaults = ReconstructOptions::default();
            let opts = ReconstructOptions {
                rows,
                rank_tol: rank_tol.unwrap_or(defaults.rank_tol),
                jump_radius,
                basis_nodes,
                polish: !no_polish,
                ..defaults
            };
            run_files(&inputs, &out, jobs, |meas: MeasurementFile| {
                commands::dfinite(&meas, order, &degs, jumps, &opts)
            })
        }
        Command::Verify { model, measurements, tol, truncation, output } => {
            let m: ModelFile = json::read(&model)?;
            let meas: MeasurementFile = json::read(&measurements)?;
            let report = commands::verify(&m, &meas, tol, truncation)?;
            log::info!("verify: {:?}", report.status);
            emit(output.as_deref(), &json::to_string(&report))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MOMREC_LOG", "error")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
