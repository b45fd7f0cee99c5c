use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use meshat::log::{export_file, import_file};
use meshat::{seed_paper_course, simulate, DecisionTable, FileStore, Platform, SimulationConfig};
use meshat_server::{passcode, Config, ServerError};

#[derive(Parser)]
#[command(name = "meshat", version, about = "Course monitoring and experience sharing service")]
struct Cli {
    /// TOML configuration; defaults to ./meshat.toml when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API.
    Serve,
    /// Seed the 12-group course into an empty store and print the accounts.
    SeedPaperCourse,
    /// Append simulated weeks of activity; seeds the course first if the store is empty.
    Simulate {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        weeks: u32,
    },
    /// Write the log as JSON lines.
    Export {
        #[arg(long)]
        out: PathBuf,
    },
    /// Load a JSON-lines log into an empty store.
    Import {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the access decision table as CSV.
    DecisionTable {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Server(#[from] ServerError),
    #[error(transparent)]
    Core(#[from] meshat::Error),
}

fn open(config: &Config) -> Result<Platform, CliError> {
    let (platform, torn) = Platform::open(&config.storage).map_err(ServerError::CorruptStore)?;
    if torn > 0 {
        tracing::warn!(bytes = torn, "cut an incomplete record from the end of the store");
    }
    Ok(platform)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Serve => {
            let rt = tokio::runtime::Runtime::new().map_err(ServerError::Io)?;
            rt.block_on(meshat_server::serve(config))?;
        }
        Command::SeedPaperCourse => {
            let mut p = open(&config)?;
            seed_paper_course(&mut p)?;
            println!("actor_id,role,name,passcode");
            for a in p.state().actors() {
                println!("{},{:?},{},{}", a.id.0, a.role, a.name, passcode(&config.secret, a.id));
            }
        }
        Command::Simulate { seed, weeks } => {
            let mut p = open(&config)?;
            if p.last_seq() == 0 {
                seed_paper_course(&mut p)?;
            }
            let sim = SimulationConfig {
                seed,
                weeks,
                ..Default::default()
            };
            let report = simulate(&mut p, &sim)?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| meshat::Error::Internal(e.to_string()))?);
        }
        Command::Export { out } => {
            let p = open(&config)?;
            export_file(p.log(), &out)?;
            println!("wrote {} events to {}", p.log().len(), out.display());
        }
        Command::Import { input } => {
            let imported = import_file(&input)?;
            let (mut store, recovered) = FileStore::open(&config.storage).map_err(ServerError::CorruptStore)?;
            if !recovered.events.is_empty() {
                return Err(meshat::Error::StoreNotEmpty.into());
            }
            for event in imported.log() {
                meshat::EventSink::append(&mut store, event)?;
            }
            println!("imported {} events into {}", imported.log().len(), config.storage.display());
        }
        Command::DecisionTable { out } => {
            let p = open(&config)?;
            let file = std::fs::File::create(&out).map_err(meshat::Error::Io)?;
            DecisionTable::build(p.state()).write_csv(std::io::BufWriter::new(file))?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
