mod driver;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Elaborate, check, normalize and extract `.tt0` programs.
#[derive(Debug, Parser)]
#[command(name = "tt0", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Never colour diagnostics.
    #[arg(long, global = true)]
    no_color: bool,
}

#[derive(Debug, Args)]
struct Target {
    /// A named top-level declaration.
    #[arg(long, conflicts_with = "main")]
    def: Option<String>,
    /// The trailing `main` expression (the default).
    #[arg(long)]
    main: bool,
}

impl Target {
    fn name(&self) -> Option<&str> {
        if self.main {
            None
        } else {
            self.def.as_deref()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elaborate and kernel-check every declaration.
    Check { file: PathBuf },
    /// Print the elaborated core terms.
    Elab { file: PathBuf },
    /// Print the normal form of a declaration.
    Nf {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Print the extracted untyped program.
    Extract {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Extract and evaluate `main`.
    Run {
        file: PathBuf,
        /// Evaluation step budget; 0 means unbounded and may not terminate.
        #[arg(long, env = "TT0_FUEL", default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Recheck every declaration after zeroing and after mode stripping.
    Meta { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = driver::Options::new(cli.json, cli.no_color);
    let code = match cli.command {
        Command::Check { file } => driver::check(&opts, &file),
        Command::Elab { file } => driver::elab(&opts, &file),
        Command::Nf { file, target } => driver::nf(&opts, &file, target.name()),
        Command::Extract { file, target } => driver::extract(&opts, &file, target.name()),
        Command::Run { file, fuel } => driver::run(&opts, &file, if fuel == 0 { None } else { Some(fuel) }),
        Command::Meta { file } => driver::meta(&opts, &file),
    };
    ExitCode::from(code)
}
