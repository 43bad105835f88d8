use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bikeframe::analysis::{self, ObjectiveSpec, PlotOptions};
use bikeframe::fea::convergence_study;
use bikeframe::geometry::{build_skeleton, check_feasibility};
use bikeframe::load_cases::{ConfigError, LoadCaseId, SimulationConfig, Validity};
use bikeframe::sampling::{self, DataError, ResultTable};
use clap::{Parser, Subcommand};

/// Bicycle frame dataset pipeline: generate designs, check and simulate
/// them, and analyze the results.
#[derive(Debug, Parser)]
#[command(name = "bikeframe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a design file of perturbed reference frames.
    Generate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a per-row feasibility report for a design file.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate every design under the three load cases.
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// TOML simulation settings; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker threads; all cores when omitted.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
    },
    /// Validity counts, non-dominated rows, correlations and summary statistics.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Analyze a random subset of this many rows.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        subset: Option<u64>,
        /// Seed for subset selection.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep beam subdivision for one design and load case.
    Converge {
        #[arg(long)]
        input: PathBuf,
        /// `row_id` of the design to sweep.
        #[arg(long)]
        row: u64,
        #[arg(long)]
        case: LoadCaseId,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4, 8, 16, 32])]
        subdivisions: Vec<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write scatter, histogram and heatmap plot data.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Histogram bins; Sturges rule when omitted.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bins: Option<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Io(m) => m,
        }
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn io_failure(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn load_config(path: Option<&Path>) -> Result<SimulationConfig, Failure> {
    let config = match path {
        Some(p) => SimulationConfig::load(p)?,
        None => SimulationConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn print_counts(results: &ResultTable) {
    let counts = analysis::validity_breakdown(results);
    for v in Validity::ALL {
        println!("{:<20} {}", v.as_str(), counts.get(v));
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { count, seed, out } => {
            let table = sampling::generate_designs(count as usize, seed);
            sampling::write_designs(&out, &table)?;
            println!("wrote {} designs to {}", table.len(), out.display());
        }
        Command::Check { input, out } => {
            let (table, _) = sampling::read_designs(&input)?;
            let mut text = String::from("row_id,feasible,violations\n");
            let mut infeasible = 0;
            for row in &table.rows {
                let report = check_feasibility(&row.params);
                let mut violations: Vec<String> =
                    report.violations.iter().map(|v| format!("{}:{}", v.code, v.subject)).collect();
                if report.feasible {
                    if let Err(e) = build_skeleton(&row.params) {
                        log::info!("row {}: {e}", row.id);
                        violations.push("BuildFailure:skeleton".into());
                    }
                }
                if !violations.is_empty() {
                    infeasible += 1;
                }
                let _ = writeln!(text, "{},{},{}", row.id, violations.is_empty(), violations.join(";"));
            }
            std::fs::write(&out, text).map_err(io_failure(&out))?;
            println!("{} of {} rows have violations", infeasible, table.len());
        }
        Command::Simulate { input, out, config, jobs } => {
            let config = load_config(config.as_deref())?;
            let (table, _) = sampling::read_designs(&input)?;
            let results = match jobs {
                Some(n) => sampling::run_batch_with_jobs(&table, &config, n as usize)
                    .map_err(|e| Failure::Usage(format!("cannot start {n} workers: {e}")))?,
                None => sampling::run_batch(&table, &config),
            };
            sampling::write_results(&out, &results)?;
            print_counts(&results);
        }
        Command::Analyze { input, out_dir, subset, seed } => {
            let mut results = sampling::read_results(&input)?;
            if let Some(n) = subset {
                results = analysis::sample_subset(&results, n as usize, seed);
            }
            let report = analysis::analyze(&results, &ObjectiveSpec::default());
            analysis::write_report(&out_dir, &report).map_err(io_failure(&out_dir))?;
            print_counts(&results);
            println!("non-dominated rows: {}", report.non_dominated_ids.len());
            println!("objectives: {}", report.correlation_matrix.labels.join(", "));
        }
        Command::Converge { input, row, case, out, subdivisions, config } => {
            if subdivisions.contains(&0) {
                return Err(Failure::Usage("subdivision levels must be positive".into()));
            }
            let config = load_config(config.as_deref())?;
            let (table, _) = sampling::read_designs(&input)?;
            let design = table
                .rows
                .iter()
                .find(|r| r.id == row)
                .ok_or_else(|| Failure::Usage(format!("no design with row_id {row} in {}", input.display())))?;
            let rows = convergence_study(&design.params, case, &subdivisions, &config);
            analysis::write_convergence_table(&out, case, &rows).map_err(io_failure(&out))?;
            println!("wrote {} levels to {}", rows.len(), out.display());
        }
        Command::Plot { input, out_dir, bins } => {
            let results = sampling::read_results(&input)?;
            let options = PlotOptions { bins: bins.map(|b| b as usize) };
            let files = analysis::emit_plots(&results, &ObjectiveSpec::default(), &out_dir, &options)
                .map_err(io_failure(&out_dir))?;
            println!("wrote {} files to {}", files.len(), out_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
