mod commands;
mod render;
mod request;

use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cmkit::criteria::DEFAULT_SEARCH_LIMIT;

use commands::{BatchReport, Report, Settings};
use request::{parse_vector_arg, AnalysisRequest, Failure};

#[derive(Parser)]
#[command(name = "cmkit", version)]
#[command(about = "Certify complex multiplication of Jacobians of quasiplatonic surfaces")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Maximum number of candidate relations tried
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_LIMIT)]
    search_limit: usize,

    /// Largest group order accepted
    #[arg(long, global = true, env = "CMKIT_MAX_ORDER", default_value_t = 10_000)]
    max_order: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Target {
    /// `gm:<m>` or a JSON group file
    source: String,

    /// Generating vector: JSON array of words, cycles or image arrays, or comma-separated words
    #[arg(long)]
    vector: Option<String>,

    /// Periods to search a vector for, e.g. `2,3,7`
    #[arg(long, conflicts_with = "vector")]
    signature: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, quotient table and CM verdict
    Analyze(Target),
    /// Streit value only
    Streit(Target),
    /// Character table
    Table {
        /// `gm:<m>` or a JSON group file
        source: String,
    },
    /// Genus and branch data of every quotient by a subgroup class
    Quotients(Target),
    /// Check an isogeny relation, e.g. the one emitted by `analyze`
    Verify {
        #[command(flatten)]
        target: Target,
        /// JSON file holding the relation, `-` for stdin
        #[arg(long)]
        relation: PathBuf,
    },
    /// Run many requests
    Batch {
        /// JSON array of requests, `-` for stdin
        file: Option<PathBuf>,
        /// Sources run with `--command`
        #[arg(long = "source")]
        sources: Vec<String>,
        #[arg(long, default_value = "analyze")]
        command: String,
    },
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::input("Io", format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn request(command: &str, t: Target) -> Result<AnalysisRequest, Failure> {
    Ok(AnalysisRequest {
        command: command.into(),
        source: t.source,
        vector: t.vector.as_deref().map(parse_vector_arg).transpose()?,
        signature: t.signature,
        search_limit: None,
        relation: None,
    })
}

fn batch_requests(
    file: Option<PathBuf>,
    sources: Vec<String>,
    command: String,
) -> Result<Vec<AnalysisRequest>, Failure> {
    let mut requests: Vec<AnalysisRequest> = match file {
        Some(path) => serde_json::from_str(&read_input(&path)?)
            .map_err(|e| Failure::input("Parse", format!("batch file: {e}")))?,
        None => Vec::new(),
    };
    requests.extend(sources.into_iter().map(|source| AnalysisRequest {
        command: command.clone(),
        source,
        vector: None,
        signature: None,
        search_limit: None,
        relation: None,
    }));
    Ok(requests)
}

enum Output {
    Single(Report),
    Batch(BatchReport),
}

fn execute(cli: Cli) -> Result<Output, Failure> {
    let settings = Settings {
        search_limit: cli.search_limit,
        max_order: cli.max_order,
    };
    let req = match cli.command {
        Command::Analyze(t) => request("analyze", t)?,
        Command::Streit(t) => request("streit", t)?,
        Command::Quotients(t) => request("quotients", t)?,
        Command::Table { source } => request(
            "table",
            Target {
                source,
                vector: None,
                signature: None,
            },
        )?,
        Command::Verify { target, relation } => {
            let text = read_input(&relation)?;
            let doc = serde_json::from_str(&text)
                .map_err(|e| Failure::input("Parse", format!("relation: {e}")))?;
            AnalysisRequest {
                relation: Some(doc),
                ..request("verify", target)?
            }
        }
        Command::Batch {
            file,
            sources,
            command,
        } => {
            let requests = batch_requests(file, sources, command)?;
            return commands::batch(requests, settings).map(Output::Batch);
        }
    };
    commands::run(&req, settings).map(Output::Single)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => "UnknownCommand",
                _ => "Usage",
            };
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("{}", Failure::input(code, first).line());
            return ExitCode::from(1);
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok(Output::Single(r)) => {
            print!(
                "{}",
                if format == Format::Json {
                    to_json(&r)
                } else {
                    render::report(&r)
                }
            );
            ExitCode::SUCCESS
        }
        Ok(Output::Batch(b)) => {
            print!(
                "{}",
                if format == Format::Json {
                    to_json(&b)
                } else {
                    render::batch(&b)
                }
            );
            for row in b.rows.iter().filter_map(|r| r.error.as_ref()) {
                eprintln!("{}", row.line());
            }
            ExitCode::from(b.exit_code)
        }
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(f.exit)
        }
    }
}
