//! Command-line front end; every stage reads and writes the library's CSV
//! schemas so stages compose via files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uam_fleet::demand::{generate_profiles, ArrivalProfile, DemandParams};
use uam_fleet::dispatch::{dispatch, DemandTimeSeries};
use uam_fleet::harness::{emit_plots, run_pipeline, AggregateReport, ExperimentConfig};
use uam_fleet::heuristics::{simulate_lower_bound, simulate_upper_bound};
use uam_fleet::milp::{
    build_fleet_sizing, build_spill, fleet_size, spill_by_cell, total_flights, total_spill,
    write_lp, HighsSolver, SolveStatus, SolverAdapter, SolverLimits, DEFAULT_FLIGHT_WEIGHT,
};
use uam_fleet::network::NetworkConfig;
use uam_fleet::schedule::{
    generate_synthetic_schedule, parse_schedule, SyntheticScheduleParams,
};
use uam_fleet::{Error, Result};

#[derive(Parser)]
#[command(name = "uam-fleet", version, about = "Air-taxi demand generation and fleet optimization")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Base random seed; overrides seeds found in config files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// MILP backend name.
    #[arg(long, global = true, default_value = "highs")]
    solver: String,
    /// Solver time limit in seconds.
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    /// Solver relative MIP gap.
    #[arg(long, global = true)]
    gap: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic airline schedule CSV from a JSON parameter file.
    GenSchedule {
        /// JSON file of synthetic schedule parameters.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate per-day passenger arrival profiles from a schedule CSV.
    GenDemand {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        add: f64,
        #[arg(long, default_value_t = 0.0)]
        ar_coeff: f64,
        /// Directory receiving one arrivals_<day>.csv per schedule day.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Convert one arrival profile into per-step flight demand.
    Dispatch {
        #[arg(long)]
        arrivals: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        seat_capacity: u32,
        #[arg(long, default_value_t = 5.0)]
        max_wait: f64,
        #[arg(long, default_value_t = 5)]
        step_minutes: u32,
    },
    /// Solve the zero-spill fleet-sizing program for a demand CSV.
    SizeFleet {
        #[arg(long)]
        demand: PathBuf,
        /// Network configuration JSON; defaults to the full-scale network.
        #[arg(long)]
        network: Option<PathBuf>,
        /// Also write the model in LP format.
        #[arg(long)]
        out_lp: Option<PathBuf>,
    },
    /// Solve the spill-minimization program at a fixed fleet size.
    Spill {
        #[arg(long)]
        demand: PathBuf,
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        fleet: u32,
        /// Write per-cell spill as from,to,step,spill CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the upper/lower bound simulators at a fixed fleet size.
    SimulateBounds {
        #[arg(long)]
        demand: PathBuf,
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        fleet: u32,
        /// Directory receiving spill_lower.csv and spill_upper.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the full batch experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Render SVG figures from an experiment report CSV.
    Plot {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Solver(_) | Error::InstanceTooLarge(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn solver_limits(global: &GlobalOpts, base: SolverLimits) -> SolverLimits {
    SolverLimits {
        time_limit_s: global.time_limit.unwrap_or(base.time_limit_s),
        rel_gap: global.gap.unwrap_or(base.rel_gap),
    }
}

fn check_solver(global: &GlobalOpts) -> Result<HighsSolver> {
    if global.solver != "highs" {
        return Err(Error::Config(format!(
            "unknown solver {:?}; available: highs",
            global.solver
        )));
    }
    Ok(HighsSolver)
}

fn load_network(path: &Option<PathBuf>) -> Result<NetworkConfig> {
    let config = match path {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => NetworkConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn load_demand(path: &PathBuf, network: &NetworkConfig) -> Result<DemandTimeSeries> {
    DemandTimeSeries::parse_csv(
        &std::fs::read_to_string(path)?,
        network.num_vertiports(),
        network.steps_per_day,
        network.step_minutes,
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.global.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot size worker pool: {e}")))?;
    }
    match cli.command {
        Command::GenSchedule { config, out } => {
            let mut params: SyntheticScheduleParams =
                serde_json::from_str(&std::fs::read_to_string(&config)?)?;
            if let Some(seed) = cli.global.seed {
                params.seed = seed;
            }
            let schedule = generate_synthetic_schedule(&params)?;
            std::fs::write(&out, schedule.to_csv())?;
            println!(
                "wrote {} flights over {} days to {}",
                schedule.records().len(),
                schedule.num_days(),
                out.display()
            );
        }
        Command::GenDemand { schedule, add, ar_coeff, out_dir } => {
            let schedule = parse_schedule(&std::fs::read_to_string(&schedule)?)?;
            let params = DemandParams::new(add, ar_coeff)?;
            let profiles = generate_profiles(&schedule, &params, cli.global.seed.unwrap_or(0))?;
            std::fs::create_dir_all(&out_dir)?;
            for profile in &profiles {
                let name = format!("arrivals_{}.csv", profile.day.format("%Y-%m-%d"));
                std::fs::write(out_dir.join(&name), profile.to_csv())?;
                println!("{name}: {} passengers", profile.total_passengers());
            }
        }
        Command::Dispatch { arrivals, out, seat_capacity, max_wait, step_minutes } => {
            let profile = ArrivalProfile::parse_csv(&std::fs::read_to_string(&arrivals)?)?;
            let series = dispatch(&profile, seat_capacity, max_wait, step_minutes)?;
            std::fs::write(&out, series.to_csv())?;
            println!(
                "{} flights, {} passengers",
                series.total_flights(),
                series.total_passengers()
            );
        }
        Command::SizeFleet { demand, network, out_lp } => {
            let solver = check_solver(&cli.global)?;
            let network = load_network(&network)?;
            let series = load_demand(&demand, &network)?;
            let model = build_fleet_sizing(&network, &series, DEFAULT_FLIGHT_WEIGHT)?;
            if let Some(path) = out_lp {
                std::fs::write(path, write_lp(&model))?;
            }
            let limits = solver_limits(&cli.global, SolverLimits::default());
            let solution = solver.solve(&model, &limits)?;
            match solution.status {
                SolveStatus::Infeasible => {
                    return Err(Error::Solver("fleet-sizing model infeasible".into()))
                }
                SolveStatus::TimedOut => {
                    return Err(Error::Solver("time limit hit without a solution".into()))
                }
                _ => {}
            }
            println!(
                "fleet_size={} flights={} objective={:.5} status={:?}",
                fleet_size(&model, &solution),
                total_flights(&model, &solution),
                solution.objective,
                solution.status
            );
        }
        Command::Spill { demand, network, fleet, out } => {
            let solver = check_solver(&cli.global)?;
            let network = load_network(&network)?;
            let series = load_demand(&demand, &network)?;
            let model = build_spill(&network, &series, fleet, DEFAULT_FLIGHT_WEIGHT)?;
            let limits = solver_limits(&cli.global, SolverLimits::default());
            let solution = solver.solve(&model, &limits)?;
            match solution.status {
                SolveStatus::Infeasible => {
                    return Err(Error::Solver("spill model infeasible".into()))
                }
                SolveStatus::TimedOut => {
                    return Err(Error::Solver("time limit hit without a solution".into()))
                }
                _ => {}
            }
            if let Some(path) = out {
                let mut csv = String::from("from,to,step,spill\n");
                for (i, j, t, v) in spill_by_cell(&model, &solution) {
                    // model time t serves dispatch step t - 1
                    csv.push_str(&format!("{i},{j},{},{v}\n", t - 1));
                }
                std::fs::write(path, csv)?;
            }
            println!(
                "spill={} flights={} status={:?}",
                total_spill(&model, &solution),
                total_flights(&model, &solution),
                solution.status
            );
        }
        Command::SimulateBounds { demand, network, fleet, out_dir } => {
            let network = load_network(&network)?;
            let series = load_demand(&demand, &network)?;
            let lower = simulate_lower_bound(&network, &series, fleet)?;
            let upper = simulate_upper_bound(&network, &series, fleet)?;
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("spill_lower.csv"), lower.spill_csv())?;
                std::fs::write(dir.join("spill_upper.csv"), upper.spill_csv())?;
            }
            println!(
                "lower_spill={} upper_spill={} upper_repositioning={}",
                lower.daily_spill, upper.daily_spill, upper.repositioning_flights
            );
        }
        Command::Experiment { config } => {
            check_solver(&cli.global)?;
            let mut config = ExperimentConfig::from_json_file(&config)?;
            if let Some(seed) = cli.global.seed {
                config.base_seed = seed;
            }
            config.solver = solver_limits(&cli.global, config.solver);
            let report = run_pipeline(&config)?;
            let failures = report.rows.iter().filter(|r| r.error.is_some()).count();
            println!(
                "{} rows, {} failures, report at {}",
                report.rows.len(),
                failures,
                config.output_dir.join("report.csv").display()
            );
            if failures > 0 {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Plot { report, out_dir } => {
            let report = AggregateReport::parse_csv(&std::fs::read_to_string(&report)?)?;
            let written = emit_plots(&report, &out_dir)?;
            for path in written {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
