use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mmfctt::harness::{self, instance_id, ExperimentSpec, RunRecord, Variant};
use mmfctt::itc::{parse_solution, read_instance, write_solution};
use mmfctt_core::anneal::{self, AnnealConfig};
use mmfctt_core::model::{allocation, soft_costs, validate_hard};

#[derive(Parser)]
#[command(name = "mmfctt", version, about = "Max-min fair curriculum-based course timetabling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance, and optionally check a solution against it.
    Validate {
        instance: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Run simulated annealing on one instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Glbop)]
        variant: Variant,
        #[arg(long, default_value_t = 1_000_000)]
        iters: u64,
        #[arg(long, default_value_t = 5.0)]
        tmax: f64,
        #[arg(long, default_value_t = 0.01)]
        tmin: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solution file; defaults to <instance stem>.sol.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the run record as JSON instead of the allocation.
        #[arg(long)]
        json: bool,
    },
    /// Run the experiment described by a spec file.
    Bench {
        spec: PathBuf,
        /// Divide runs and iterations by this factor.
        #[arg(long, default_value_t = 1)]
        scale: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Summarize a results directory.
    Report {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { instance, solution } => {
            let parsed = read_instance(&instance)?;
            for w in &parsed.warnings {
                eprintln!("warning: {w}");
            }
            let i = &parsed.instance;
            println!(
                "{}: {} courses, {} lectures, {} rooms, {} days x {} periods, {} curricula, {} unavailabilities",
                i.name(),
                i.courses().len(),
                i.lecture_count(),
                i.rooms().len(),
                i.days(),
                i.periods_per_day(),
                i.curricula().len(),
                i.unavailability_count()
            );
            let Some(sol) = solution else {
                return Ok(ExitCode::SUCCESS);
            };
            let text = std::fs::read_to_string(&sol).with_context(|| format!("reading {}", sol.display()))?;
            let t = parse_solution(i, &text).with_context(|| sol.display().to_string())?;
            let violations = validate_hard(i, &t);
            if !violations.is_empty() {
                for v in &violations {
                    println!("{}", v.describe(i));
                }
                return Ok(ExitCode::FAILURE);
            }
            let c = soft_costs(i, &t)?;
            println!(
                "cost {} (capacity {}, min days {}, isolated {}, stability {})",
                c.total, c.room_capacity, c.min_working_days, c.isolated_lectures, c.room_stability
            );
            println!("allocation {}", allocation(i, &t)?.sorted());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { instance, variant, iters, tmax, tmin, seed, out, json } => {
            let parsed = read_instance(&instance)?;
            for w in &parsed.warnings {
                log::warn!("{w}");
            }
            let i = &parsed.instance;
            let cfg = AnnealConfig { t_max: tmax, t_min: tmin, iterations: iters, variant: variant.solver(), seed };
            let start = Instant::now();
            let result = anneal::run(i, &cfg)?;
            let wall_ms = start.elapsed().as_millis() as u64;
            let id = instance_id(&instance);
            let out = out.unwrap_or_else(|| PathBuf::from(format!("{id}.sol")));
            std::fs::write(&out, write_solution(i, &result.best_timetable))
                .with_context(|| format!("writing {}", out.display()))?;
            if json {
                let record = RunRecord::new(&id, variant, 0, seed, &result.best_allocation, iters, wall_ms);
                println!("{}", serde_json::to_string(&record)?);
            } else {
                println!("{}", result.best_allocation);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { spec, scale, threads } => {
            let spec = ExperimentSpec::load(&spec)?.scaled(scale);
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
            }
            let summary = harness::bench(&spec)?;
            println!(
                "{} runs completed, {} already recorded, results in {}",
                summary.completed,
                summary.skipped,
                spec.output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { dir, json } => {
            let report = harness::report(&dir)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", harness::render_report(&report));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
