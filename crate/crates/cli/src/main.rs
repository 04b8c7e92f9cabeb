use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lindblad_split_cli::{run_document, CliError, JobResult, Options, DEFAULT_SEED};

/// Decompose generators of completely positive semigroups. Reads one JSON
/// request (or an array with --batch) and writes one JSON document to stdout.
#[derive(Debug, Parser)]
#[command(name = "lindblad-split", version)]
struct Args {
    /// Read the request from FILE instead of stdin.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Default tolerance for requests without their own "tol".
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Seed for randomized self-checks.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Treat the input as an array of independent requests.
    #[arg(long)]
    batch: bool,
}

fn fail(e: CliError) -> ExitCode {
    let r = JobResult::failure(None, lindblad_split::DEFAULT_TOL, &e, serde_json::Value::Null);
    eprintln!("{}", r.summary());
    println!("{}", r.to_json());
    ExitCode::from(r.status.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(CliError::Parse {
                path: "arguments".into(),
                message: e.to_string().trim().to_string(),
            })
        }
    };
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return fail(CliError::Parse {
                path: "--tol".into(),
                message: "tolerance must be a positive finite number".into(),
            });
        }
    }

    let mut bytes = Vec::new();
    let read = match &args.input {
        Some(path) => std::fs::read(path).map(|b| bytes = b),
        None => std::io::stdin().read_to_end(&mut bytes).map(|_| ()),
    };
    if let Err(e) = read {
        let source = args
            .input
            .as_ref()
            .map_or("stdin".to_string(), |p| p.display().to_string());
        return fail(CliError::Parse {
            path: source,
            message: e.to_string(),
        });
    }

    let opts = Options {
        tol: args.tol,
        seed: args.seed,
    };
    let (out, results, code) = run_document(&bytes, args.batch, &opts);
    for r in &results {
        eprintln!("{}", r.summary());
    }
    println!("{}", serde_json::to_string(&out).expect("serializable"));
    ExitCode::from(code as u8)
}
