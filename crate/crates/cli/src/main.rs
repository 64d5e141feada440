mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "dgms", version, about = "Exact checks for DGMS algebras, quaternionic Dolbeault complexes and Maurer-Cartan deformations")]
struct Cli {
    /// Report format; the flag overrides DGMS_REPORT_FORMAT.
    #[arg(long, global = true, env = "DGMS_REPORT_FORMAT", value_enum, default_value = "text")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Model file.
    pub file: String,
    #[arg(long, default_value = "d0")]
    pub d0: String,
    #[arg(long, default_value = "d1")]
    pub d1: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// DG / DGLA axioms for every differential of every algebra in the file.
    Validate { file: String },
    /// Condition table, strong lemma, induced differentials and the DGMS trick.
    Dgms(PairArgs),
    /// Cohomology dimensions and the induced product.
    Cohomology {
        file: String,
        #[arg(long)]
        differential: Option<String>,
    },
    /// Formality zig-zag certificate.
    Formality(PairArgs),
    /// sl(2) decomposition, low-weight ideal and the quotient A₊.
    Sl2 { file: String },
    /// Quaternionic Dolbeault complex, its cohomology and the φ isomorphism.
    Qdolbeault {
        file: String,
        #[arg(long)]
        extended: bool,
        #[arg(long, default_value_t = 2)]
        window: i32,
    },
    /// E1 and E2 pages of the quaternionic double complex.
    Spectral { file: String },
    /// Maurer–Cartan, gauge, obstruction and correspondence probes.
    Deform {
        file: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Differential for a plain DGLA file; defaults to d0, then d.
        #[arg(long)]
        differential: Option<String>,
    },
    /// Emit a model file for a built-in recipe.
    Generate {
        #[command(subcommand)]
        recipe: commands::Recipe,
        /// Write to a file instead of standard output.
        #[arg(long, global = true)]
        output: Option<String>,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let start = Instant::now();
    let result = match cli.command {
        Command::Validate { file } => commands::validate(echo, &file),
        Command::Dgms(p) => commands::dgms(echo, &p),
        Command::Cohomology { file, differential } => commands::cohomology(echo, &file, differential.as_deref()),
        Command::Formality(p) => commands::formality(echo, &p),
        Command::Sl2 { file } => commands::sl2(echo, &file),
        Command::Qdolbeault { file, extended, window } => {
            commands::qdolbeault(echo, &file, extended.then_some(window))
        }
        Command::Spectral { file } => commands::spectral(echo, &file),
        Command::Deform {
            file,
            order,
            samples,
            seed,
            differential,
        } => commands::deform(
            echo,
            &file,
            &commands::DeformOptions {
                order,
                samples,
                seed,
                differential,
            },
        ),
        Command::Generate { recipe, output } => {
            return match commands::generate(&recipe) {
                Ok(text) => match output {
                    Some(path) => match std::fs::write(&path, text) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(e) => {
                            eprintln!("error: cannot write {path}: {e}");
                            ExitCode::from(2)
                        }
                    },
                    None => {
                        print!("{text}");
                        ExitCode::SUCCESS
                    }
                },
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match result {
        Ok(report) => {
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text(Some(start.elapsed()))),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
