use clap::{Parser, Subcommand};
use growthbound::cli::{exit_code_for, run, Command, Outcome, EXIT_CERT_FAILURE};
use growthbound::config::{parse_k_range, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Constructs extremal function pairs on the unit disc and certifies their
/// pointwise growth bounds on dense annular grids.
#[derive(Parser)]
#[command(name = "growthbound", version, about)]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// TOML run configuration (dotted keys, see README).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts (default: from config, else ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override: radial samples per interval.
    #[arg(long = "grid-radial", global = true)]
    grid_radial: Option<usize>,

    /// Override: angular samples per radius.
    #[arg(long = "grid-angles", global = true)]
    grid_angles: Option<usize>,

    /// Override: inclusive interval range, e.g. 1..6.
    #[arg(long = "k-range", global = true)]
    k_range: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build sequences, envelope and series tables.
    Construct,
    /// Run the certification suite (re-reads `construct` artifacts if present).
    Certify,
    /// Write little-o decay profiles.
    Profile,
    /// Run a named preset end to end: ramey-ullrich | vmoa | abakumov-doubtsov-little.
    Demo { name: String },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("GROWTHBOUND_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let args = Args::parse();
    match execute(&args) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CertificationFailed) => {
            eprintln!("certification failed; see report.txt");
            ExitCode::from(EXIT_CERT_FAILURE as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}

fn execute(args: &Args) -> growthbound::Result<Outcome> {
    let (command, mut config) = match &args.command {
        Cmd::Construct => (Command::Construct, load_config(args)?),
        Cmd::Certify => (Command::Certify, load_config(args)?),
        Cmd::Profile => (Command::Profile, load_config(args)?),
        Cmd::Demo { name } => (Command::Demo(name.clone()), RunConfig::demo(name)?),
    };
    if let Some(radial) = args.grid_radial {
        config.grid_radial = radial;
    }
    if let Some(angles) = args.grid_angles {
        config.grid_angles = angles;
    }
    if let Some(range) = &args.k_range {
        let (lo, hi) = parse_k_range(range)?;
        config.k_lo = lo;
        config.k_hi = hi;
    }
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    run(&command, &config, &out_dir)
}

fn load_config(args: &Args) -> growthbound::Result<RunConfig> {
    match &args.config {
        Some(path) => RunConfig::from_path(path),
        None => Err(growthbound::Error::Config(
            "this command needs --config <path> (or use `demo <name>`)".into(),
        )),
    }
}
