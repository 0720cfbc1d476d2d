mod config;
mod export;
mod pipeline;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit codes: 0 success, 1 config error, 2 math/domain error,
/// 3 verification failure.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Math(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Math(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Math(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<darboux::KernelError> for CliError {
    fn from(e: darboux::KernelError) -> Self {
        use darboux::KernelError::*;
        match e {
            Lexical { .. } | Syntax { .. } | InvalidGrid(_) | MissingConstant(_) => {
                CliError::Config(e.to_string())
            }
            ValidationFailed(_) => CliError::Verification(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "darboux",
    about = "Darboux-frame toolkit: classify surface curves and build their associated helices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SceneArgs {
    /// Built-in scene name or path to a scene TOML file
    #[arg(long)]
    scene: String,

    /// Families to construct (comma separated tags, e.g. hcc1,rns2,icc1);
    /// defaults to the scene's list
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,

    /// Override a constant, e.g. --const c1=2.5 (repeatable)
    #[arg(long = "const", value_name = "NAME=VALUE")]
    constants: Vec<String>,

    /// Override the grid as s0:s1:n
    #[arg(long)]
    grid: Option<String>,

    /// Relative tolerance for constancy/axis verdicts
    #[arg(long)]
    tol: Option<f64>,

    /// Output directory for exports
    #[arg(long, default_value = "out")]
    out: String,

    /// Export formats (csv, obj, json); defaults to all
    #[arg(long, value_delimiter = ',')]
    format: Vec<String>,

    /// Report failures instead of failing the exit status
    #[arg(long)]
    report_only: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check unit speed, normality and unit-normal deviations over the grid
    Validate(SceneArgs),
    /// Export Darboux frame samples and curvatures as CSV
    Frames(SceneArgs),
    /// Classify the base curve and write the classification document
    Classify(SceneArgs),
    /// Construct the requested associated curves and export them
    Associate(SceneArgs),
    /// Construct and certify the requested associated curves
    Verify(SceneArgs),
    /// Export geometry (frames + associated curves) without verdict gating
    Export(SceneArgs),
    /// Full pipeline: validate, frames, classify, associate, verify, export
    Run(SceneArgs),
    /// List built-in scenes
    ListBuiltins,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ListBuiltins => {
            for (name, desc) in config::list_builtins() {
                println!("{name}: {desc}");
            }
            Ok(())
        }
        Command::Validate(a) => pipeline::run(&a, pipeline::Stage::Validate),
        Command::Frames(a) => pipeline::run(&a, pipeline::Stage::Frames),
        Command::Classify(a) => pipeline::run(&a, pipeline::Stage::Classify),
        Command::Associate(a) => pipeline::run(&a, pipeline::Stage::Associate),
        Command::Verify(a) => pipeline::run(&a, pipeline::Stage::Verify),
        Command::Export(a) => pipeline::run(&a, pipeline::Stage::Export),
        Command::Run(a) => pipeline::run(&a, pipeline::Stage::Run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
