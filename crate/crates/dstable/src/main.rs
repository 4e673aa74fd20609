//! Thin command-line front end over [`dstable::harness`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dstable::harness::{
    cmd_converge, cmd_invert, cmd_nonunique, cmd_sample, cmd_verify, write_output, HarnessError,
    OutputFormat, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "dstable",
    about = "Discrete stable lattice laws: verify casual-stable representations, invert characteristic functions, sample, and study the compound-Poisson limit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a casual-stable representation identity over a range of n
    Verify(Flags),
    /// Build and verify both representations of the positive discrete stable law
    Nonunique(Flags),
    /// Study convergence of triangular-array rows to the compound-Poisson limit
    Converge(Flags),
    /// Invert a law or normalizer to a probability window
    Invert(Flags),
    /// Draw a seeded batch and summarize it against the inversion oracle
    Sample(Flags),
}

#[derive(Args)]
struct Flags {
    /// Worked construction: 1 symmetric stable, 2 two-sided half-exponent,
    /// 3 hermite, 4 compound poisson
    #[arg(long)]
    example: Option<u32>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    /// Base Poisson rate of the compound-Poisson representation
    #[arg(long = "A")]
    big_a: Option<f64>,
    /// Normalizer index (invert) or row length (sample --law row)
    #[arg(long)]
    n: Option<u32>,
    /// Largest n to verify, or the end of the doubling schedule
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    /// Power-of-two transform grid size
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Law to sample: positive | compound | row
    #[arg(long)]
    law: Option<String>,
    /// Counting law: one | poisson:R | shifted-poisson:MU | shifted-geometric:P | hermite:A1,A2
    #[arg(long)]
    pgf: Option<String>,
    /// Jump law: one | two | hermite:A1,A2
    #[arg(long)]
    jump: Option<String>,
    /// Invert the construction's normalizer g_n instead of its target law
    #[arg(long)]
    normalizer: bool,
    /// Output file; relative paths resolve against $DSTABLE_OUT_DIR
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for --out
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// JSON file with the same keys as the flags; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn config_from(flags: &Flags) -> Result<RunConfig, HarnessError> {
    let from_flags = RunConfig {
        example: flags.example,
        lambda: flags.lambda,
        gamma: flags.gamma,
        alpha: flags.alpha,
        lambda1: flags.lambda1,
        lambda2: flags.lambda2,
        a1: flags.a1,
        a2: flags.a2,
        a: flags.a,
        big_a: flags.big_a,
        n: flags.n,
        n_max: flags.n_max,
        grid: flags.grid,
        samples: flags.samples,
        seed: flags.seed,
        law: flags.law.clone(),
        pgf: flags.pgf.clone(),
        jump: flags.jump.clone(),
        normalizer: if flags.normalizer { Some(true) } else { None },
        out: flags.out.clone(),
        format: flags.format,
    };
    let base = match &flags.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::default(),
    };
    Ok(base.overlaid_with(from_flags))
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Verify(flags) => {
            let config = config_from(&flags)?;
            let output = cmd_verify(&config)?;
            println!("{}", output.summary());
            emit(&config, output.to_csv(), &output)?;
            Ok(output.passed())
        }
        Command::Nonunique(flags) => {
            let config = config_from(&flags)?;
            let output = cmd_nonunique(&config)?;
            println!("{}", output.summary());
            emit(&config, output.to_csv(), &output)?;
            Ok(output.passed())
        }
        Command::Converge(flags) => {
            let config = config_from(&flags)?;
            let report = cmd_converge(&config)?;
            println!("{}", report.summary());
            for row in &report.rows {
                println!(
                    "  n = {:4}: sup {:.6e}  tv {:.6e}  n*tv {:.6}",
                    row.n, row.sup_cf_distance, row.tv_distance, row.n_times_tv
                );
            }
            emit(&config, report.to_csv(), &report)?;
            Ok(report.passed())
        }
        Command::Invert(flags) => {
            let config = config_from(&flags)?;
            let output = cmd_invert(&config)?;
            println!("{}", output.summary());
            emit(&config, output.to_csv(), &output)?;
            Ok(true)
        }
        Command::Sample(flags) => {
            let config = config_from(&flags)?;
            let output = cmd_sample(&config)?;
            println!("{}", output.summary());
            if let Some(out) = &config.out {
                let format = config.format.unwrap_or(OutputFormat::Csv);
                match format {
                    OutputFormat::Csv => {
                        // batch CSV plus a JSON sidecar with the descriptor
                        let full = dstable::harness::resolve_out_path(out);
                        if let Some(parent) = full.parent() {
                            if !parent.as_os_str().is_empty() {
                                std::fs::create_dir_all(parent)?;
                            }
                        }
                        let mut buf = Vec::new();
                        output
                            .batch
                            .write_csv(&mut buf)
                            .map_err(|e| HarnessError::Usage(e.to_string()))?;
                        std::fs::write(&full, buf)?;
                        let sidecar = serde_json::to_string_pretty(&output.batch.sidecar())?;
                        std::fs::write(full.with_extension("json"), sidecar + "\n")?;
                        println!("wrote {}", full.display());
                    }
                    OutputFormat::Json => {
                        let path = write_output(out, OutputFormat::Json, "", &output)?;
                        println!("wrote {}", path.display());
                    }
                }
            }
            Ok(true)
        }
    }
}

fn emit(config: &RunConfig, csv: String, json: &impl serde::Serialize) -> Result<(), HarnessError> {
    if let Some(out) = &config.out {
        let format = config.format.unwrap_or(OutputFormat::Csv);
        let path = write_output(out, format, &csv, json)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
