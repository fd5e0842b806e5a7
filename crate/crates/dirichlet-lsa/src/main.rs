//! Thin command-line wrapper over the library: parse arguments, read the
//! inputs, dispatch, write the output.

use clap::{Args, Parser, Subcommand};
use dirichlet_lsa::cli::{
    cmd_classify, cmd_dio, cmd_plot, cmd_refine, cmd_roots, specfile, CliError, JobConfig,
    OutputFormat,
};
use dirichlet_lsa::numerics::format::parse_decimal_rational;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "dirichlet-lsa",
    about = "Roots of nonlattice Dirichlet polynomials by lattice string approximation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Working precision in mantissa bits.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    /// Approximation error for the stability region.
    #[arg(long, default_value = "0.1")]
    epsilon: String,
    /// Initial delta of the Diophantine stream.
    #[arg(long, default_value = "0.99")]
    delta0: String,
    /// Steps of the stream (step size = delta0 / steps).
    #[arg(long, default_value_t = 99)]
    steps: u32,
    /// Cap on the sparse polynomial degree k_N.
    #[arg(long, default_value_t = 5000)]
    max_degree: u64,
    /// Vertical extent for root replication; defaults to one period.
    #[arg(long)]
    strip_height: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv, svg or text-table.
    #[arg(long, default_value = "text-table")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Report kind, rank, dimension bounds and the stability constant.
    Classify {
        spec: PathBuf,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// Table of simultaneous Diophantine approximations.
    Dio {
        spec: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// CSV of s-plane roots of the chosen lattice approximation.
    Roots {
        spec: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// CSV of Newton-refined roots of the nonlattice polynomial.
    Refine {
        spec: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// SVG scatter plot from root CSV files.
    Plot {
        /// Input CSV files, one marker class each.
        csv: Vec<PathBuf>,
        /// Draw the stability circle of this radius.
        #[arg(long)]
        stability_circle: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { spec, precision } => {
            let parsed = load_spec(&spec)?;
            let report = cmd_classify(&parsed, precision)?;
            print!("{report}");
            Ok(())
        }
        Command::Dio { spec, opts } => {
            let parsed = load_spec(&spec)?;
            let cfg = job_config(&opts)?;
            let table = cmd_dio(&parsed, &cfg)?;
            emit(&opts.out, &table)
        }
        Command::Roots { spec, opts } => {
            let parsed = load_spec(&spec)?;
            let cfg = job_config(&opts)?;
            let csv = cmd_roots(&parsed, &cfg)?;
            emit(&opts.out, &csv)
        }
        Command::Refine { spec, opts } => {
            let parsed = load_spec(&spec)?;
            let cfg = job_config(&opts)?;
            let (csv, summary) = cmd_refine(&parsed, &cfg)?;
            eprintln!("{summary}");
            emit(&opts.out, &csv)
        }
        Command::Plot { csv, stability_circle, out } => {
            let mut inputs = Vec::with_capacity(csv.len());
            for path in &csv {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                inputs.push((label, text));
            }
            let svg = cmd_plot(&inputs, stability_circle)?;
            emit(&out, &svg)
        }
    }
}

fn load_spec(path: &PathBuf) -> Result<specfile::PolynomialSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    specfile::parse_spec(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn job_config(opts: &CommonOpts) -> Result<JobConfig, CliError> {
    let epsilon = parse_decimal_rational(&opts.epsilon).map_err(CliError::Input)?;
    let delta0 = parse_decimal_rational(&opts.delta0).map_err(CliError::Input)?;
    let strip_height = match &opts.strip_height {
        Some(h) => Some(parse_decimal_rational(h).map_err(CliError::Input)?),
        None => None,
    };
    if opts.precision < 32 {
        return Err(CliError::Input("precision must be at least 32 bits".into()));
    }
    if opts.steps == 0 {
        return Err(CliError::Input("steps must be positive".into()));
    }
    Ok(JobConfig {
        precision: opts.precision,
        epsilon,
        delta0,
        n_steps: opts.steps,
        max_degree: opts.max_degree,
        strip_height,
        format: opts.format,
    })
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
