use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualblind::experiment::{self, BenchConfig, RunConfig, SeedSummary};
use dualblind::Error;

#[derive(Parser)]
#[command(name = "dualblind", version, about = "Dual-blind deconvolution experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance per seed and write traces, summaries and an aggregate.
    Run(RunArgs),
    /// Time solver iterations across array sizes.
    Bench(BenchArgs),
    /// Describe a saved instance file.
    Inspect {
        /// Instance JSON written by `run` with `save_instances`.
        path: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run config; defaults to the reference recipe with seed 0.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace the config's seed list (repeatable).
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Output directory override.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON bench config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    t_factor: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    /// Directory for bench.csv and bench.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn fmt_err(e: &Option<dualblind::metrics::EstimateError>) -> String {
    e.map_or_else(|| "n/a".into(), |e| format!("{:.4}", e.absolute))
}

fn print_summary(s: &SeedSummary) {
    println!(
        "seed {}: {} after {} iterations  G err {}  X err {}  SINR {:.2} dB  SE {:.2}  MI {:.2}  power {:.3}",
        s.seed,
        s.stop_reason,
        s.iterations,
        fmt_err(&s.channel_error),
        fmt_err(&s.signal_error),
        s.sinr_db,
        s.spectral_eff_bits,
        s.radar_mi_bits,
        s.tx_power
    );
}

fn run(args: RunArgs) -> Result<(), Error> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if !args.seeds.is_empty() {
        config.seeds = args.seeds;
    }
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    let report = experiment::run(&config)?;
    if !args.quiet {
        for s in &report.summaries {
            print_summary(s);
        }
        let agg = &report.aggregate;
        if let Some(g) = agg.channel_error_abs {
            println!("median G err {:.4} (IQR {:.4})", g.median, g.iqr);
        }
        if let Some(x) = agg.signal_error_abs {
            println!("median X err {:.4} (IQR {:.4})", x.median, x.iqr);
        }
        println!(
            "{}/{} runs at the iteration cap; outputs in {}",
            agg.runs_at_iteration_cap,
            report.summaries.len(),
            report.output_dir.display()
        );
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Error> {
    let mut config: BenchConfig = match &args.config {
        Some(path) => dualblind::io::load_json(path)?,
        None => BenchConfig::default(),
    };
    if let Some(s) = args.sizes {
        config.sizes = s;
    }
    if let Some(t) = args.t_factor {
        config.t_factor = t;
    }
    if let Some(r) = args.reps {
        config.reps = r;
    }
    if let Some(i) = args.iters {
        config.iters = i;
    }
    let quiet = args.quiet;
    if !quiet {
        println!("{:>6} {:>6} {:>14} {:>14} {:>14}", "n", "t", "median_s", "min_s", "max_s");
    }
    let report = experiment::bench(&config, |r| {
        if !quiet {
            println!(
                "{:>6} {:>6} {:>14.6e} {:>14.6e} {:>14.6e}",
                r.n, r.t, r.median_iter_s, r.min_iter_s, r.max_iter_s
            );
        }
    })?;
    if let Some(dir) = &args.out {
        report.write(dir)?;
    }
    if !quiet {
        println!("log-log slope {:.3}  monotone {}", report.slope, report.monotone);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::Inspect { path } => experiment::inspect(&path).map(|r| println!("{r}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(experiment::exit_code(&e) as u8)
        }
    }
}
