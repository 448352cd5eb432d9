use clap::{Parser, Subcommand};
use specmult::bases::{mehler_heat_discrepancy, HermiteBasis};
use specmult::experiments::{self, conformance, ExperimentConfig};
use specmult::mellin::transform::log_gaussian;
use specmult::mellin::{self_test, LinAxis, LogAxis};
use specmult::riesz::{discrete_riesz_operator, CyclicGroupSpec, NORMALIZATION};
use specmult::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Experiments on joint spectral multipliers.
#[derive(Parser)]
#[command(name = "specmult", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON configuration file.
    Run { config: PathBuf },
    /// List the available experiments.
    ListExperiments,
    /// Quick consistency checks of the numerical core.
    Selftest,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_)
        | Error::Shape(_)
        | Error::UnknownExperiment { .. }
        | Error::Json(_)
        | Error::Domain { .. }
        | Error::Atl { .. }
        | Error::UnsupportedMode(_) => 2,
        Error::Numerical(_) | Error::Divergence(_) => 3,
        Error::Io(_) | Error::Csv(_) => 1,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("SPECMULT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Parameter(format!("SPECMULT_THREADS = `{value}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))
}

fn run(path: &PathBuf) -> Result<u8, Error> {
    let cfg = ExperimentConfig::from_file(path)?;
    let outcome = experiments::run(&cfg)?;
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    for flag in &outcome.flags {
        eprintln!("flag: {flag}");
    }
    Ok(if outcome.flags.is_empty() { 0 } else { 3 })
}

fn selftest() -> Result<u8, Error> {
    let mut failures = 0;
    let mut report = |name: &str, value: f64, tol: f64| {
        let ok = value <= tol;
        failures += usize::from(!ok);
        println!("{} {name}: {value:.3e} (tolerance {tol:.0e})", if ok { "PASS" } else { "FAIL" });
    };

    let m = log_gaussian(vec![LogAxis::standard()], &[0.7], &[0.3], &[1.5])?;
    let st = self_test(&m, &[LinAxis::standard()])?;
    report("mellin plancherel", st.plancherel_rel_err, 1e-6);
    report("mellin round trip", st.round_trip_rel_err, 1e-6);

    let spec = CyclicGroupSpec::simple_walk(8, 2)?;
    let r = discrete_riesz_operator(&spec, 0)?;
    report("discrete riesz l2 norm", (r.l2_norm() - NORMALIZATION).abs(), 1e-10);

    let basis = HermiteBasis::new(24)?;
    report("mehler heat operator", mehler_heat_discrepancy(0.5, &basis)?, 1e-7);

    for c in conformance::alpha_checks(0.5, 0)? {
        report(&format!("{} (alpha {})", c.name, c.alpha), c.value, c.tolerance);
    }
    Ok(if failures == 0 { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Run { config } => run(config),
        Command::ListExperiments => {
            for (name, about) in experiments::EXPERIMENTS {
                println!("{name:<26} {about}");
            }
            Ok(0)
        }
        Command::Selftest => selftest(),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
