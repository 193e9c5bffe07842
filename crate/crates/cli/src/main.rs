use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twofermion_cli::{exit_code, run, Mode, RunManifest};

#[derive(Parser)]
#[command(name = "twofermion", version, about = "Entanglement of two identical fermions")]
struct Cli {
    #[command(subcommand)]
    mode: Command,
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Threads for dense linear algebra (overrides numerics.threads).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Dump the two-particle state at every snapshot.
    #[arg(long, global = true)]
    snapshots: bool,
    /// Continue from checkpoints left in the output directory.
    #[arg(long, global = true)]
    resume: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Entropies of the analytic toy state over α ∈ [0, 1].
    ToySweep,
    /// Collision runs with entanglement time series per spin configuration.
    Scatter,
    /// Normalized linear vs von Neumann entropy with per-snapshot timings.
    Compare,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match cli.mode {
        Command::ToySweep => Mode::ToySweep,
        Command::Scatter => Mode::Scatter,
        Command::Compare => Mode::Compare,
    };
    let text = match &cli.config {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => String::new(),
    };
    let manifest = RunManifest::from_text(mode, &text, &cli.out).map(|mut m| {
        m.config_path = cli.config.clone();
        m.snapshots = cli.snapshots;
        m.resume = cli.resume;
        if let Some(n) = cli.threads {
            m.config.numerics.threads = n.max(1);
        }
        m
    });
    let result = manifest.and_then(|m| {
        if mode != Mode::ToySweep {
            for &ek in &m.config.packet.kinetic_energies_mev {
                m.config.scattering(ek)?.check_stability()?;
            }
        }
        run(&m)
    });
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", cli.out.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
