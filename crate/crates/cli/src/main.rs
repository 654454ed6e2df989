use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use marketarch::{evaluate_report, exit, load_model, parse_number_list, parse_overrides, region, CliError};
use marketarch_core::report::SweepReport;
use marketarch_core::scenario::{find_threshold, run_sweep, SweepParameter};
use marketarch_core::svg::render_svg;
use marketarch_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "marketarch",
    version,
    about = "Evaluate economic architectures of market-development programs"
)]
struct Cli {
    /// Program configuration (TOML).
    #[arg(long, global = true, env = "MARKETARCH_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Svg,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-architecture accounts and sustainable competitor counts.
    Evaluate {
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
        /// Scenario override, e.g. `--set RM=1000` or `--set rate=0.10`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Write the sustainable-competition diagram.
    Diagram {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: DiagramFormat,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Evaluate one scenario per parameter value.
    Sweep {
        /// One of RM, rate, B, GS.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Bisect for the parameter value where an architecture reaches a competitor count.
    Threshold {
        #[arg(long)]
        arch: String,
        #[arg(long)]
        param: String,
        #[arg(long = "target-n")]
        target_n: u32,
        /// `LO,HI`
        #[arg(long)]
        bracket: String,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn write_out(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.ok_or_else(|| {
        CliError::Model(Error::Invalid {
            path: "--config".into(),
            reason: "no configuration given (use --config or MARKETARCH_CONFIG)".into(),
        })
    })?;
    let model = load_model(&config)?;
    match cli.command {
        Command::Evaluate { format, overrides } => {
            let report = evaluate_report(&model, &parse_overrides(&overrides)?)?;
            let out = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => report.to_json() + "\n",
                ReportFormat::Csv => report.to_csv(),
            };
            print!("{out}");
        }
        Command::Diagram { out, format, overrides } => {
            let region = region(&model, &parse_overrides(&overrides)?)?;
            let contents = match format {
                DiagramFormat::Svg => render_svg(&region, &model.name),
                DiagramFormat::Csv => region.to_csv(),
            };
            write_out(&out, &contents)?;
        }
        Command::Sweep { param, values, format } => {
            let parameter: SweepParameter = param.parse()?;
            let points = run_sweep(&model, parameter, &parse_number_list(&values)?);
            let report = SweepReport::new(parameter, &points);
            let out = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => report.to_json() + "\n",
                ReportFormat::Csv => report.to_csv(),
            };
            print!("{out}");
        }
        Command::Threshold {
            arch,
            param,
            target_n,
            bracket,
            format,
        } => {
            let parameter: SweepParameter = param.parse()?;
            let ends = parse_number_list(&bracket)?;
            let [lo, hi] = ends[..] else {
                return Err(Error::Invalid {
                    path: "--bracket".into(),
                    reason: "expected LO,HI".into(),
                }
                .into());
            };
            let t = find_threshold(&model, &arch, parameter, target_n, (lo, hi))?;
            match format {
                ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&t).expect("threshold serializes")),
                ReportFormat::Csv => {
                    println!("architecture,parameter,target_firms,value,tolerance,direction");
                    println!(
                        "{},{},{},{},{},{:?}",
                        t.architecture, t.parameter, t.target_firms, t.value, t.tolerance, t.direction
                    );
                }
                ReportFormat::Text => println!(
                    "{}: {} firms sustained from {} = {:.4} ({:?}, tolerance {})",
                    t.architecture, t.target_firms, t.parameter, t.value, t.direction, t.tolerance
                ),
            }
        }
        Command::Serve { port } => {
            let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
                path: "runtime".into(),
                source,
            })?;
            runtime
                .block_on(marketarch::api::serve(model, port))
                .map_err(|source| CliError::Io {
                    path: format!("port {port}"),
                    source,
                })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
