use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qbound_cli::error::{EXIT_CHECK_FAILURE, EXIT_PASS};
use qbound_cli::generate::FloatList;
use qbound_cli::output::{report_csv, report_text, suite_summary, write_outputs};
use qbound_cli::suites::bound_checks;
use qbound_cli::{generate, run_suite, CliError, GenerateKind, GenerateParams, KernelSpec, OutputFormat, Span, Suite, SuiteConfig};
use qbound_core::info::{bound_report, GAP_TOL};
use qbound_core::instance::Instance;

#[derive(Parser)]
#[command(name = "qbound", version, about = "Information bounds for general quantum measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Report every quantity and bound for an instance file.
    Compute {
        file: PathBuf,
        /// Defaults to text on stdout, json when --out is given.
        #[arg(long, value_enum)]
        format: Option<ReportFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gap tolerance in bits.
        #[arg(long, default_value_t = GAP_TOL)]
        tol: f64,
    },
    /// Write an instance file.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        states: Option<usize>,
        #[arg(long)]
        kraus: Option<usize>,
        #[arg(long)]
        groups: Option<usize>,
        /// Haar samples for uc-approx.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated prior, e.g. 0.5,0.5.
        #[arg(long)]
        prior: Option<FloatList>,
        /// bsc:e, or rows of P(j|i) like 0.9,0.1;0.2,0.8.
        #[arg(long)]
        kernel: Option<KernelSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Run {
        #[arg(value_enum)]
        suite: Suite,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        dim: Vec<usize>,
        /// Coding states per instance, e.g. 3 or 2-4.
        #[arg(long, default_value = "2-4")]
        states: Span,
        #[arg(long, default_value = "2-6")]
        kraus: Span,
        #[arg(long, default_value = "1-6")]
        groups: Span,
        #[arg(long, default_value_t = qbound_core::majorization::UC_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Overrides every exact-check tolerance (bits).
        #[arg(long)]
        tol: Option<f64>,
        /// Overrides the calibrated covariant-measurement tolerances (bits).
        #[arg(long)]
        uc_tol: Option<f64>,
        /// CSV file, or a directory of CSV files for `all`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn compute(file: PathBuf, format: Option<ReportFormat>, out: Option<PathBuf>, tol: f64) -> Result<i32, CliError> {
    let text = read(&file)?;
    let (eps, meas) = Instance::from_json(&text)
        .and_then(|inst| inst.to_channel())
        .map_err(|source| CliError::Instance { path: file.clone(), source })?;
    let report = bound_report(&eps, &meas)?;
    let checks = bound_checks(&report, tol);
    let format = format.unwrap_or(if out.is_some() { ReportFormat::Json } else { ReportFormat::Text });
    let bytes = match format {
        ReportFormat::Text => report_text(&report, &checks).into_bytes(),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Csv => report_csv(&report),
    };
    emit(out.as_ref(), &bytes)?;
    if out.is_some() {
        print!("{}", report_text(&report, &checks));
    }
    Ok(if checks.iter().all(|c| c.pass) { EXIT_PASS } else { EXIT_CHECK_FAILURE })
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute { file, format, out, tol } => compute(file, format, out, tol),
        Command::Generate {
            kind,
            dim,
            states,
            kraus,
            groups,
            samples,
            seed,
            prior,
            kernel,
            out,
        } => {
            let params = GenerateParams {
                dim,
                states,
                kraus,
                groups,
                samples,
                seed,
                prior: prior.map(|p| p.0),
                kernel,
            };
            let mut json = generate(kind, &params)?.to_json_pretty();
            json.push('\n');
            emit(out.as_ref(), json.as_bytes())?;
            Ok(EXIT_PASS)
        }
        Command::Run {
            suite,
            dim,
            states,
            kraus,
            groups,
            samples,
            seed,
            instances,
            tol,
            uc_tol,
            out,
            format,
        } => {
            let cfg = SuiteConfig {
                suite,
                dims: dim,
                n_instances: instances,
                n_states: states,
                n_kraus: kraus,
                n_groups: groups,
                seed,
                samples,
                tol,
                uc_tol,
                out,
                format,
            };
            let result = run_suite(&cfg)?;
            write_outputs(&result, &cfg)?;
            print!("{}", suite_summary(&result));
            Ok(if result.passed() { EXIT_PASS } else { EXIT_CHECK_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            // Display of each variant already includes its source.
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
