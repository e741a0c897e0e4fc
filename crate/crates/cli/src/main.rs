use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holecount_cli::{
    cmd_export, cmd_holes, cmd_oracle, cmd_random_bound, cmd_warmup, load_config_file,
    write_outputs, CliError, Envelope, Report, RunConfig,
};

#[derive(Parser)]
#[command(name = "holecount", version, about = "Hole counts of unions of convex translates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Warm-up family: grid of m(m-1) holes on one facet.
    Warmup(Common),
    /// The 3m translates: nerve, Betti numbers and m^3 - m + 1 holes.
    Holes(Common),
    /// Random families against the C(n,3) + 1 bound.
    RandomBound(Common),
    /// OBJ meshes of the body and every translate.
    Export(Common),
    /// Voxel count of the complement next to the homological count.
    Oracle(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    m: Option<usize>,
    /// Vertical step as "p/q"; skips the halving search.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    zeta2: Option<String>,
    #[arg(long)]
    zeta3: Option<String>,
    /// Number of vertical paths used for the body.
    #[arg(long)]
    depth: Option<usize>,
    /// Number of edges kept on the horizontal path.
    #[arg(long = "gamma-len")]
    gamma_len: Option<usize>,
    #[arg(long)]
    t: Option<String>,
    /// Oracle cell size as "p/q".
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trials for random-bound.
    #[arg(long)]
    trials: Option<usize>,
    /// Largest family size for random-bound.
    #[arg(long)]
    n: Option<usize>,
    /// Decimal digits in OBJ files.
    #[arg(long)]
    digits: Option<usize>,
    /// Family for the oracle: warmup or universal.
    #[arg(long)]
    family: Option<String>,
    /// Skip the voxel oracle in warmup.
    #[arg(long)]
    no_oracle: bool,
    /// Output directory for reports (or meshes, for export).
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn run_config(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::from_entries(&load_config_file(path)?)?,
            None => RunConfig::default(),
        };
        Ok(base.merged(RunConfig {
            m: self.m,
            path_depth: self.depth,
            gamma_length: self.gamma_len,
            zeta2: self.zeta2.clone(),
            zeta3: self.zeta3.clone(),
            t: self.t.clone(),
            eps: self.eps.clone(),
            resolution: self.resolution.clone(),
            out: self.out.clone(),
            threads: self.threads,
            seed: self.seed,
            trials: self.trials,
            n: self.n,
            digits: self.digits,
            family: self.family.clone(),
        }))
    }
}

fn emit<R: Report>(command: &str, stem: &str, config: &RunConfig, report: R) -> Result<i32, CliError> {
    let envelope = Envelope::new(command, report);
    let json = envelope.to_json();
    match &config.out {
        Some(dir) if command != "export" => {
            for path in write_outputs(dir, stem, &json, &envelope.report)? {
                eprintln!("wrote {}", path.display());
            }
        }
        _ => print_stdout(&json),
    }
    Ok(envelope.report.exit_code())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (name, common) = match &cli.command {
        Command::Warmup(c) => ("warmup", c),
        Command::Holes(c) => ("holes", c),
        Command::RandomBound(c) => ("random-bound", c),
        Command::Export(c) => ("export", c),
        Command::Oracle(c) => ("oracle", c),
    };
    let config = common.run_config()?;
    if let Some(threads) = config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Input(format!("threads: {e}")))?;
    }
    match cli.command {
        Command::Warmup(_) => {
            let m = config.m_or(2);
            emit(name, &format!("warmup-m{m}"), &config, cmd_warmup(&config, !common.no_oracle)?)
        }
        Command::Holes(_) => {
            let m = config.m_or(2);
            emit(name, &format!("holes-m{m}"), &config, cmd_holes(&config)?)
        }
        Command::RandomBound(_) => {
            let n = config.n.unwrap_or(8);
            let report = cmd_random_bound(n, config.trials.unwrap_or(50), config.seed.unwrap_or(0))?;
            emit(name, &format!("random-bound-n{n}"), &config, report)
        }
        Command::Export(_) => {
            let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("meshes"));
            emit(name, "export", &config, cmd_export(&config, &dir)?)
        }
        Command::Oracle(_) => emit(name, "oracle", &config, cmd_oracle(&config)?),
    }
}

/// Prints a document, ignoring a closed pipe on the reading side.
fn print_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            print_stdout(&e.to_json());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
