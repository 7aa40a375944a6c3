//! Command-line definitions and their resolution into a validated run
//! specification. Flag values override config-file values; defaults fill
//! whatever remains (threshold 5 dB, efficiency 1).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use swipt_outage::{InterferenceMode, McSettings, OperatingPoint};

use crate::config::{load_config, FileConfig, ModeName};
use crate::error::{CliError, Result};

const DEFAULT_GAMMA_TH_DB: f64 = 5.0;
const DEFAULT_ETA: f64 = 1.0;
const DEFAULT_TRIALS: u64 = 1_000_000;
const DEFAULT_SEED: u64 = 0;

fn parse_unit_interval(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} lies outside [0, 1]"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "swipt-outage",
    version,
    about = "Outage probability of an energy-harvesting DF relay network, \
             closed form cross-validated by simulation",
    after_help = "Environment:\n  SWIPT_OUTAGE_WORKERS  number of Monte Carlo worker threads \
                  (default: all cores)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Evaluate the outage probability at one operating point.
    Outage {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep the power-splitting ratio theta at fixed SNR.
    SweepTheta {
        #[command(flatten)]
        point: PointArgs,
        /// Smallest theta on the grid.
        #[arg(long, default_value_t = 0.02)]
        theta_min: f64,
        /// Largest theta on the grid.
        #[arg(long, default_value_t = 0.98)]
        theta_max: f64,
        /// Grid step.
        #[arg(long, default_value_t = 0.02)]
        theta_step: f64,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep the first-hop average SNR at fixed theta.
    SweepSnr {
        #[command(flatten)]
        point: PointArgs,
        /// Smallest SNR on the grid (dB).
        #[arg(long, default_value_t = 0.0)]
        snr_min_db: f64,
        /// Largest SNR on the grid (dB).
        #[arg(long, default_value_t = 50.0)]
        snr_max_db: f64,
        /// Grid step (dB).
        #[arg(long, default_value_t = 5.0)]
        snr_step_db: f64,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Find the splitting ratio minimizing the analytic outage.
    OptimalTheta {
        #[command(flatten)]
        point: PointArgs,
        /// Resolution of the refined minimizer, in (0, 0.1).
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate the diversity-order slope from an SNR sweep.
    Diversity {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 0.0)]
        snr_min_db: f64,
        #[arg(long, default_value_t = 50.0)]
        snr_max_db: f64,
        #[arg(long, default_value_t = 5.0)]
        snr_step_db: f64,
        /// Lower slope endpoint (dB); must lie on the grid.
        #[arg(long, default_value_t = 35.0)]
        snr_lo_db: f64,
        /// Upper slope endpoint (dB); must lie on the grid.
        #[arg(long, default_value_t = 45.0)]
        snr_hi_db: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-validate the closed form against the Monte Carlo simulator.
    Validate {
        #[command(flatten)]
        point: PointArgs,
        /// Simulation trials (at least 1e5).
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// Simulation seed.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Operating-point flags. Each may also come from `--config`; flags win.
#[derive(Debug, Args)]
pub struct PointArgs {
    /// JSON config file supplying any of the operating-point keys.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of relays.
    #[arg(long)]
    pub relays: Option<usize>,
    /// First-hop average SNR in dB, defined before power splitting.
    #[arg(long)]
    pub snr1_db: Option<f64>,
    /// Interference mode at the relays.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Interference-to-noise ratio in dB (fixed-inr mode).
    #[arg(long)]
    pub inr_db: Option<f64>,
    /// Signal-to-interference ratio in dB (fixed-sir mode).
    #[arg(long)]
    pub sir_db: Option<f64>,
    /// Power-splitting ratio in [0, 1].
    #[arg(long, value_parser = parse_unit_interval)]
    pub theta: Option<f64>,
    /// Energy conversion efficiency in [0, 1].
    #[arg(long, value_parser = parse_unit_interval)]
    pub eta: Option<f64>,
    /// Decoding SNR threshold in dB.
    #[arg(long)]
    pub gamma_th_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    NoInterference,
    FixedInr,
    FixedSir,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Add Monte Carlo columns to the output.
    #[arg(long)]
    pub mc: bool,
    /// Trials per grid point (requires --mc).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Simulation seed (requires --mc).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Render an SVG line chart of the sweep at this path.
    #[arg(long, value_name = "PATH")]
    pub plot: Option<PathBuf>,
    /// Use a log10 y axis in the chart.
    #[arg(long)]
    pub log_y: bool,
}

/// A fully resolved, validated run.
#[derive(Debug)]
pub struct RunSpec {
    pub command: Command,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub log_y: bool,
    pub mc: Option<McSettings>,
}

#[derive(Debug)]
pub enum Command {
    Outage {
        point: OperatingPoint,
    },
    SweepTheta {
        template: OperatingPoint,
        grid: Vec<f64>,
    },
    SweepSnr {
        base: OperatingPoint,
        grid_db: Vec<f64>,
    },
    OptimalTheta {
        template: OperatingPoint,
        tol: f64,
    },
    Diversity {
        base: OperatingPoint,
        grid_db: Vec<f64>,
        snr_lo_db: f64,
        snr_hi_db: f64,
    },
    Validate {
        point: OperatingPoint,
        trials: u64,
        seed: u64,
    },
}

/// Which operating-point fields a command genuinely consumes.
struct Needs {
    theta: bool,
    snr: bool,
}

fn resolve_point(args: &PointArgs, needs: Needs) -> Result<OperatingPoint> {
    let file = match &args.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };

    // File-sourced values go through range validation here (exit 3);
    // flag-sourced values were already range-checked by the parser (exit 2).
    for (value, name) in [(file.theta, "theta"), (file.eta, "eta")] {
        if let Some(v) = value {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Validation(format!(
                    "{name} = {v} lies outside [0, 1]"
                )));
            }
        }
    }

    let relays = args
        .relays
        .or(file.relays)
        .ok_or_else(|| CliError::Usage("--relays is required (flag or config file)".into()))?;

    let snr1_db = if needs.snr {
        args.snr1_db
            .or(file.snr1_db)
            .ok_or_else(|| CliError::Usage("--snr1-db is required (flag or config file)".into()))?
    } else {
        // Swept per grid point; any provided value is the template filler.
        args.snr1_db.or(file.snr1_db).unwrap_or(0.0)
    };

    let theta = if needs.theta {
        args.theta
            .or(file.theta)
            .ok_or_else(|| CliError::Usage("--theta is required (flag or config file)".into()))?
    } else {
        args.theta.or(file.theta).unwrap_or(0.5)
    };

    let mode_name = args
        .mode
        .map(|m| match m {
            ModeArg::NoInterference => ModeName::NoInterference,
            ModeArg::FixedInr => ModeName::FixedInr,
            ModeArg::FixedSir => ModeName::FixedSir,
        })
        .or(file.mode)
        .ok_or_else(|| CliError::Usage("--mode is required (flag or config file)".into()))?;

    let inr_db = args.inr_db.or(file.inr_db);
    let sir_db = args.sir_db.or(file.sir_db);
    let mode = match mode_name {
        ModeName::NoInterference => {
            if inr_db.is_some() || sir_db.is_some() {
                return Err(CliError::Usage(
                    "--inr-db/--sir-db contradict --mode no-interference".into(),
                ));
            }
            InterferenceMode::NoInterference
        }
        ModeName::FixedInr => {
            if sir_db.is_some() {
                return Err(CliError::Usage(
                    "--sir-db contradicts --mode fixed-inr".into(),
                ));
            }
            InterferenceMode::FixedInr {
                inr_db: inr_db
                    .ok_or_else(|| CliError::Usage("--mode fixed-inr requires --inr-db".into()))?,
            }
        }
        ModeName::FixedSir => {
            if inr_db.is_some() {
                return Err(CliError::Usage(
                    "--inr-db contradicts --mode fixed-sir".into(),
                ));
            }
            InterferenceMode::FixedSir {
                sir_db: sir_db
                    .ok_or_else(|| CliError::Usage("--mode fixed-sir requires --sir-db".into()))?,
            }
        }
    };

    Ok(OperatingPoint {
        relays,
        snr1_db,
        mode,
        theta,
        eta: args.eta.or(file.eta).unwrap_or(DEFAULT_ETA),
        gamma_th_db: args
            .gamma_th_db
            .or(file.gamma_th_db)
            .unwrap_or(DEFAULT_GAMMA_TH_DB),
    })
}

fn resolve_mc(args: &McArgs) -> Result<Option<McSettings>> {
    if !args.mc {
        if args.trials.is_some() || args.seed.is_some() {
            return Err(CliError::Usage("--trials/--seed require --mc".into()));
        }
        return Ok(None);
    }
    Ok(Some(McSettings {
        n_trials: args.trials.unwrap_or(DEFAULT_TRIALS),
        seed: args.seed.unwrap_or(DEFAULT_SEED),
    }))
}

fn build_grid(min: f64, max: f64, step: f64, what: &str) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 {
        return Err(CliError::Usage(format!("{what} step must be positive")));
    }
    if min > max {
        return Err(CliError::Usage(format!(
            "{what} range is empty (min > max)"
        )));
    }
    let count = ((max - min) / step).round() as usize + 1;
    let grid: Vec<f64> = (0..count)
        .map(|i| min + i as f64 * step)
        .filter(|&v| v <= max + step * 1e-9)
        .collect();
    if grid.is_empty() {
        return Err(CliError::Usage(format!("{what} grid is empty")));
    }
    Ok(grid)
}

/// Resolves the parsed command line (and any config file) into a run spec.
pub fn resolve(cli: Cli) -> Result<RunSpec> {
    match cli.command {
        CliCommand::Outage { point, mc, output } => Ok(RunSpec {
            command: Command::Outage {
                point: resolve_point(
                    &point,
                    Needs {
                        theta: true,
                        snr: true,
                    },
                )?,
            },
            mc: resolve_mc(&mc)?,
            output: output.output,
            plot: output.plot,
            log_y: output.log_y,
        }),
        CliCommand::SweepTheta {
            point,
            theta_min,
            theta_max,
            theta_step,
            mc,
            output,
        } => {
            let grid = build_grid(theta_min, theta_max, theta_step, "theta")?;
            if grid.first().copied().unwrap_or(0.0) <= 0.0
                || grid.last().copied().unwrap_or(1.0) >= 1.0
            {
                return Err(CliError::Usage(
                    "theta grid must lie strictly inside (0, 1)".into(),
                ));
            }
            Ok(RunSpec {
                command: Command::SweepTheta {
                    template: resolve_point(
                        &point,
                        Needs {
                            theta: false,
                            snr: true,
                        },
                    )?,
                    grid,
                },
                mc: resolve_mc(&mc)?,
                output: output.output,
                plot: output.plot,
                log_y: output.log_y,
            })
        }
        CliCommand::SweepSnr {
            point,
            snr_min_db,
            snr_max_db,
            snr_step_db,
            mc,
            output,
        } => Ok(RunSpec {
            command: Command::SweepSnr {
                base: resolve_point(
                    &point,
                    Needs {
                        theta: true,
                        snr: false,
                    },
                )?,
                grid_db: build_grid(snr_min_db, snr_max_db, snr_step_db, "snr")?,
            },
            mc: resolve_mc(&mc)?,
            output: output.output,
            plot: output.plot,
            log_y: output.log_y,
        }),
        CliCommand::OptimalTheta { point, tol, output } => {
            if !(tol > 0.0 && tol < 0.1) {
                return Err(CliError::Usage(format!("--tol {tol} must lie in (0, 0.1)")));
            }
            Ok(RunSpec {
                command: Command::OptimalTheta {
                    template: resolve_point(
                        &point,
                        Needs {
                            theta: false,
                            snr: true,
                        },
                    )?,
                    tol,
                },
                mc: None,
                output: output.output,
                plot: output.plot,
                log_y: output.log_y,
            })
        }
        CliCommand::Diversity {
            point,
            snr_min_db,
            snr_max_db,
            snr_step_db,
            snr_lo_db,
            snr_hi_db,
            output,
        } => Ok(RunSpec {
            command: Command::Diversity {
                base: resolve_point(
                    &point,
                    Needs {
                        theta: true,
                        snr: false,
                    },
                )?,
                grid_db: build_grid(snr_min_db, snr_max_db, snr_step_db, "snr")?,
                snr_lo_db,
                snr_hi_db,
            },
            mc: None,
            output: output.output,
            plot: output.plot,
            log_y: output.log_y,
        }),
        CliCommand::Validate {
            point,
            trials,
            seed,
            output,
        } => Ok(RunSpec {
            command: Command::Validate {
                point: resolve_point(
                    &point,
                    Needs {
                        theta: true,
                        snr: true,
                    },
                )?,
                trials,
                seed,
            },
            mc: None,
            output: output.output,
            plot: output.plot,
            log_y: output.log_y,
        }),
    }
}
