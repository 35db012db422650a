use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invbench::harness::{self, RunConfig};
use invbench::report::{analysis_table, AnalysisOptions, TABLES};
use invbench::stats::{DEFAULT_MC_SAMPLES, DEFAULT_ROPE};
use invbench::transforms::TransformKind;
use invbench::{Error, Result};

#[derive(Parser)]
#[command(name = "invbench", version, about = "Run and analyse metaheuristic benchmark grids under objective transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Selection {
    /// Only analyse this dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Region of practical equivalence for the Bayesian test.
    #[arg(long, default_value_t = DEFAULT_ROPE)]
    rope: f64,
    /// Only analyse this transformation (baseline, translate, scale, rotate, vshift).
    #[arg(long, value_parser = parse_transform)]
    transform: Option<TransformKind>,
    /// Monte Carlo samples for the Bayesian test.
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    /// Seed of the Bayesian Monte Carlo streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Selection {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions { dim: self.dim, transform: self.transform, rope: self.rope, mc_samples: self.mc_samples, seed: self.seed }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the grid described by a JSON config and write raw results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute every analysis table from raw results and write them as CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        selection: Selection,
    },
    /// Print one analysis table to standard output.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long, default_value = "summary", value_parser = clap::builder::PossibleValuesParser::new(TABLES))]
        table: String,
        #[command(flatten)]
        selection: Selection,
    },
}

fn parse_transform(s: &str) -> std::result::Result<TransformKind, String> {
    TransformKind::parse(s).map_err(|e| e.to_string())
}

fn run(config: &Path, out: &Path) -> Result<()> {
    let config = RunConfig::load(config)?;
    eprintln!("running {} tasks", config.task_count());
    let results = harness::execute(&config)?;
    let failed = results.records.iter().filter(|r| r.failed).count();
    for path in harness::write_results(&results, out)? {
        eprintln!("wrote {}", path.display());
    }
    if failed > 0 {
        eprintln!("{failed} run(s) hit a non-finite objective value and are flagged as failed");
    }
    Ok(())
}

fn analyze(input: &Path, out: &Path, opts: &AnalysisOptions) -> Result<()> {
    let results = harness::load_results(input)?;
    std::fs::create_dir_all(out).map_err(|e| Error::Io { path: out.to_path_buf(), source: e })?;
    for name in TABLES {
        let table = analysis_table(&results, name, opts)?;
        let path = out.join(format!("{name}.csv"));
        std::fs::write(&path, table.to_csv()?).map_err(|e| Error::Io { path: path.clone(), source: e })?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn report(input: &Path, format: Format, table: &str, opts: &AnalysisOptions) -> Result<()> {
    let results = harness::load_results(input)?;
    let table = analysis_table(&results, table, opts)?;
    match format {
        Format::Csv => print!("{}", table.to_csv()?),
        Format::Md => print!("{}", table.to_markdown()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Run { config, out } => run(config, out),
        Command::Analyze { input, out, selection } => analyze(input, out, &selection.options()),
        Command::Report { input, format, table, selection } => report(input, *format, table, &selection.options()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
