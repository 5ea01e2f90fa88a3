use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use paracontact::frontend::{self, catalog, emit_report, parse_session, run_session, Format};
use paracontact::parastruct;
use paracontact::symkernel::SamplerConfig;

#[derive(Parser)]
#[command(
    name = "paracontact",
    version,
    about = "Check almost paracontact structures and their generalized counterparts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every directive of a session file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Treat numeric-only passes as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Syntax and name-resolution check only.
    Parse {
        file: PathBuf,
        /// Print the session back in normalized form.
        #[arg(long)]
        print: bool,
    },
    /// List the built-in structures and write their session files.
    Catalog {
        /// Directory to write `<name>.para` files into.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

const USAGE_ERROR: u8 = 2;

fn load(path: &Path) -> Result<frontend::Session, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut s = parse_session(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    s.name = path.display().to_string();
    Ok(s)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { file, format, seed, samples, tolerance, strict } => {
            let session = load(&file)?;
            let mut config = SamplerConfig::default();
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(n) = samples {
                if n == 0 {
                    return Err("--samples must be positive".into());
                }
                config.samples = n;
            }
            if let Some(t) = tolerance {
                if !(t.is_finite() && t > 0.0) {
                    return Err("--tolerance must be a positive number".into());
                }
                config.tolerance = t;
            }
            let result = run_session(&session, &config, strict);
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Json => Format::Json,
            };
            print!("{}", emit_report(&result, format));
            Ok(result.exit_code() as u8)
        }
        Command::Parse { file, print } => {
            let session = load(&file)?;
            if print {
                print!("{session}");
            } else {
                println!(
                    "{}: {} declarations, {} directives",
                    session.name,
                    session.decls.len(),
                    session.directives.len()
                );
            }
            Ok(0)
        }
        Command::Catalog { write } => {
            for s in parastruct::catalog::structures() {
                println!("{}", catalog::describe(&s));
            }
            if let Some(dir) = write {
                std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                for s in catalog::catalog_sessions().map_err(|e| e.to_string())? {
                    let path = dir.join(format!("{}.para", s.name));
                    std::fs::write(&path, s.to_string()).map_err(|e| format!("{}: {e}", path.display()))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
