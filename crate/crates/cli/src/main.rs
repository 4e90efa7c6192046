use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "dirackit", version, about = "Exact Dirac-structure computations from document files")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command in a document and print the report.
    Run {
        file: PathBuf,
        /// Exit with status 1 when a verdict differs from its expectation.
        #[arg(long)]
        assert: bool,
        /// JSON report (the default).
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Plain-text summary.
        #[arg(long)]
        text: bool,
        /// Compare the JSON report with `DIR/<file stem>.json`.
        #[arg(long, value_name = "DIR")]
        fixture_dir: Option<PathBuf>,
    },
    /// Print the canonical form of a document.
    Render { file: PathBuf },
}

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(3)
    })
}

fn parse(path: &Path) -> Result<dirackit::Document, ExitCode> {
    let text = read(path)?;
    dirackit::parse_document(&text).map_err(|e| {
        eprintln!("{}:{e}", path.display());
        ExitCode::from(e.exit_code() as u8)
    })
}

fn run(file: &Path, assert: bool, text: bool, fixture_dir: Option<&Path>) -> Result<ExitCode, ExitCode> {
    let doc = parse(file)?;
    let report = dirackit::run_document(&doc).map_err(|e| {
        eprintln!("{}:{e}", file.display());
        ExitCode::from(e.exit_code() as u8)
    })?;
    let json = report.to_json_string();
    if text {
        print!("{}", report.to_text());
    } else {
        print!("{json}");
    }
    let mut failed = assert && !report.all_hold();
    if failed {
        eprintln!("assertion failed: some verdicts differ from their expectations");
    }
    if let Some(dir) = fixture_dir {
        let stem = file.file_stem().unwrap_or_default();
        let golden_path = dir.join(stem).with_extension("json");
        let golden = read(&golden_path)?;
        if golden != json {
            eprintln!("report differs from {}", golden_path.display());
            failed = true;
        }
    }
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run { file, assert, json: _, text, fixture_dir } => run(&file, assert, text, fixture_dir.as_deref()),
        Cmd::Render { file } => parse(&file).map(|d| {
            print!("{}", dirackit::render_document(&d));
            ExitCode::SUCCESS
        }),
    };
    result.unwrap_or_else(|code| code)
}
