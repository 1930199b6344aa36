use std::path::PathBuf;
use std::process::ExitCode;

use cdpers_cli::commands::SweepReport;
use cdpers_cli::presets::{cube_skeleton, CUBE_LOOPS};
use cdpers_cli::{
    cmd_bottleneck, cmd_compare, cmd_compute, cmd_plot, cmd_resolution_sweep, cmd_snr_table,
    cmd_wasserstein, exit_code, CliError, FiltrationKind, Method, Overrides, RunConfig, SnrOptions,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cdpers",
    version,
    about = "Christoffel-Darboux persistence of point clouds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Run configuration (JSON).
    config: PathBuf,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// `christoffel` or `distance-function`.
    #[arg(long)]
    kind: Option<FiltrationKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// Diagram JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::load(&self.config)?;
        config.apply(&Overrides {
            degree: self.degree,
            resolution: self.resolution,
            eps: self.eps,
            kind: self.kind,
            seed: self.seed,
            out: self.out.clone(),
        });
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the persistence diagram of one filtration.
    Compute(RunArgs),
    /// Compare two filtrations of the same cloud on the same grid.
    Compare {
        #[command(flatten)]
        first: RunArgs,
        /// Second run configuration (JSON); defaults to the first with the
        /// other filtration kind.
        #[arg(long)]
        second: Option<PathBuf>,
    },
    /// Median signal-to-noise ratios on the noisy cube skeleton.
    SnrTable {
        /// Christoffel degrees to compare against the distance function.
        #[arg(long, value_delimiter = ',', default_value = "6")]
        degrees: Vec<usize>,
        /// Uniform noise levels M.
        #[arg(long, value_delimiter = ',', default_value = "25,250")]
        noise: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 50)]
        resolution: usize,
        #[arg(long, default_value_t = 50)]
        points_per_edge: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Full table: degrees 6, 8, 10; baseline plus six noise levels;
        /// 100 trials.
        #[arg(long)]
        full: bool,
        /// CSV output path; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bottleneck distances between diagrams at increasing resolutions.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Resolutions, nondecreasing.
        #[arg(long, value_delimiter = ',', required = true)]
        resolutions: Vec<usize>,
        /// Lipschitz constant of the swept function, for the error bound.
        #[arg(long)]
        lipschitz: Option<f64>,
    },
    /// Render a diagram file as SVG.
    Plot { diagram: PathBuf, output: PathBuf },
    /// Exact Wasserstein distance between two cloud files.
    Wasserstein { first: PathBuf, second: PathBuf },
    /// Bottleneck distance between two diagram files.
    Bottleneck {
        first: PathBuf,
        second: PathBuf,
        /// Only this homology degree.
        #[arg(long)]
        degree: Option<usize>,
    },
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(args) => {
            let config = args.load()?;
            let (report, _) = cmd_compute(&config)?;
            println!("{}", report.to_json());
        }
        Command::Compare { first, second } => {
            let a = first.load()?;
            let b = match second {
                Some(path) => RunConfig::load(&path)?,
                None => {
                    let mut b = a.clone();
                    b.kind = match a.kind {
                        FiltrationKind::Christoffel => FiltrationKind::DistanceFunction,
                        FiltrationKind::DistanceFunction => FiltrationKind::Christoffel,
                    };
                    b.outputs = Default::default();
                    b
                }
            };
            println!("{}", cmd_compare(&a, &b)?.to_json());
        }
        Command::SnrTable {
            mut degrees,
            mut noise,
            mut trials,
            resolution,
            points_per_edge,
            seed,
            eps,
            full,
            out,
        } => {
            if full {
                degrees = vec![6, 8, 10];
                noise = vec![0, 25, 50, 100, 250, 500, 1000];
                trials = 100;
            }
            let mut methods = vec![Method {
                kind: FiltrationKind::DistanceFunction,
                degree: 0,
            }];
            methods.extend(degrees.iter().map(|&degree| Method {
                kind: FiltrationKind::Christoffel,
                degree,
            }));
            let table = cmd_snr_table(&SnrOptions {
                base: cube_skeleton(points_per_edge, 0, seed),
                methods,
                noise_levels: noise,
                trials,
                resolution,
                signal_count: CUBE_LOOPS,
                homology_degree: 1,
                eps,
                seed,
            })?;
            let csv = table.to_csv();
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| CliError::io(path, e))?,
                None => print!("{csv}"),
            }
        }
        Command::Sweep {
            run,
            resolutions,
            lipschitz,
        } => {
            let config = run.load()?;
            let report: SweepReport = cmd_resolution_sweep(&config, &resolutions, lipschitz)?;
            println!("{}", json(&report));
        }
        Command::Plot { diagram, output } => cmd_plot(&diagram, &output)?,
        Command::Wasserstein { first, second } => {
            println!("{}", json(&cmd_wasserstein(&first, &second)?));
        }
        Command::Bottleneck {
            first,
            second,
            degree,
        } => {
            println!("{}", json(&cmd_bottleneck(&first, &second, degree)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::from(exit_code::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
