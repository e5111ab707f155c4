use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gregory::report::{
    cmd_bk2, cmd_density, cmd_eval_f, cmd_selftest, cmd_verify_cm, parse_sequence, CommandError,
    CommandOutput, OutputFormat, RunConfig,
};

#[derive(Parser)]
#[command(name = "gregory")]
#[command(
    about = "Bernoulli numbers of the second kind: exact tables, quadrature, and self-verification"
)]
#[command(version)]
struct Cli {
    /// Largest index for tables and certificates
    #[arg(long, global = true, default_value_t = 50)]
    max_n: usize,

    /// Largest difference order for verify-cm
    #[arg(long, global = true, default_value_t = 25)]
    max_k: usize,

    /// Relative tolerance handed to the quadrature
    #[arg(long, global = true, default_value_t = 1e-10)]
    rel_tol: f64,

    /// Absolute tolerance recorded in the run configuration
    #[arg(long, global = true, default_value_t = 1e-14)]
    abs_tol: f64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,

    /// Worker threads for independent checks
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Commands {
    /// Table of b_0..b_N: exact rational, decimal, quadrature, difference
    Bk2,

    /// Complete-monotonicity certificate for a_n = (-1)^n b_(n+1)
    VerifyCm {
        /// Replace the sequence by comma-separated rationals (testing aid)
        #[arg(long, hide = true)]
        sequence: Option<String>,
    },

    /// Evaluate F(z) directly and through its integral representation
    EvalF {
        #[arg(allow_negative_numbers = true)]
        re: f64,
        #[arg(allow_negative_numbers = true)]
        im: f64,
    },

    /// Log-spaced samples of the representing density, CSV `t,rho`
    Density {
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },

    /// Run the full verification battery
    Selftest,
}

fn run(cli: Cli) -> Result<CommandOutput, CommandError> {
    let config = RunConfig {
        max_n: cli.max_n,
        max_k: cli.max_k,
        rel_tol: cli.rel_tol,
        abs_tol: cli.abs_tol,
        output_format: match cli.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        output_path: cli.out.clone(),
        parallelism: cli.jobs,
    };
    if !(config.rel_tol > 0.0
        && config.rel_tol.is_finite()
        && config.abs_tol > 0.0
        && config.abs_tol.is_finite())
    {
        return Err(CommandError::Usage(
            "tolerances must be positive and finite".into(),
        ));
    }

    let output = match cli.command {
        Commands::Bk2 => cmd_bk2(&config)?,
        Commands::VerifyCm { sequence } => {
            let injected = sequence.as_deref().map(parse_sequence).transpose()?;
            cmd_verify_cm(&config, injected)?
        }
        Commands::EvalF { re, im } => cmd_eval_f(re, im, &config)?,
        Commands::Density {
            t_min,
            t_max,
            points,
        } => cmd_density(t_min, t_max, points, &config)?,
        Commands::Selftest => cmd_selftest(&config)?,
    };

    match &config.output_path {
        Some(path) => fs::write(path, &output.body)?,
        None => io::stdout().lock().write_all(output.body.as_bytes())?,
    }
    Ok(output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => ExitCode::from(output.outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("gregory: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
