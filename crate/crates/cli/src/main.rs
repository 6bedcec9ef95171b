//! `adm`: validate, query, enumerate and serve architectural decision models.
//!
//! Exit status is 0 on success, 1 when the answer is negative (ill-formed
//! model, non-conforming design, inconsistent model) and 2 when the input
//! could not be read or parsed.

use std::fs;
use std::io::{self, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use adm_core::formats::{parse_design, parse_model, ExportFormat, TableWriter};
use adm_core::model::validate_document;
use adm_core::semantics::{for_each_design, is_well_founded};
use adm_core::{build_model, conforms, is_consistent, Model};
use adm_service::AppState;

#[derive(Parser)]
#[command(name = "adm", version, about = "Architectural decision models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a model document is well-formed.
    Validate { model: PathBuf },
    /// Print a derived relation of a model.
    Derive {
        model: PathBuf,
        #[arg(long, value_enum)]
        relation: Relation,
    },
    /// Check a design document against a model.
    Check { model: PathBuf, design: PathBuf },
    /// List the conforming designs of a model.
    Enumerate {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Stop after this many designs.
        #[arg(long)]
        limit: Option<usize>,
        /// Skip designs whose issues are not all reached from an entry point.
        #[arg(long)]
        well_founded: bool,
    },
    /// Report whether a model has at least one conforming design.
    Consistent { model: PathBuf },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory of `*.json` model documents to preload.
        #[arg(long)]
        model_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    /// Alternatives each alternative forces.
    Forced,
    /// Alternatives each alternative is incompatible with.
    Incompatible,
    /// Issues resolved in every design.
    EntryPoints,
    /// Issues each alternative triggers.
    Triggers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
}

/// A failure that ends the command with the given status.
struct Failure {
    code: u8,
    message: String,
}

fn fatal(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fatal(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    let doc = parse_model(&read(path)?).map_err(|e| fatal(format!("{}: {e}", path.display())))?;
    build_model(&doc)
        .map_err(|report| fatal(format!("{}: ill-formed model\n{report}", path.display())))
}

fn joined<T: AsRef<str>>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|s| s.as_ref().to_owned())
        .collect::<Vec<_>>()
        .join(", ")
}

fn validate(path: &Path) -> Result<u8, Failure> {
    let doc = parse_model(&read(path)?).map_err(|e| fatal(format!("{}: {e}", path.display())))?;
    let report = validate_document(&doc);
    print!("{report}");
    Ok(if report.is_well_formed() { 0 } else { 1 })
}

fn derive(path: &Path, relation: Relation) -> Result<u8, Failure> {
    let model = load_model(path)?;
    let mut out = String::new();
    if let Relation::EntryPoints = relation {
        let entries = model.entry_points();
        if !entries.is_empty() {
            out = format!("{}\n", joined(entries));
        }
    } else {
        for alt in model.alternatives() {
            let id = alt.id.as_str();
            let related: Vec<&str> = match relation {
                Relation::Forced => model
                    .forced_by(id)
                    .map(|v| v.into_iter().map(|a| a.as_str()).collect()),
                Relation::Incompatible => model
                    .incompatible_with(id)
                    .map(|v| v.into_iter().map(|a| a.as_str()).collect()),
                Relation::Triggers => model
                    .triggered_issues(id)
                    .map(|v| v.into_iter().map(|i| i.as_str()).collect()),
                Relation::EntryPoints => unreachable!(),
            }
            .expect("alternative of the model");
            if !related.is_empty() {
                out.push_str(&format!("{id} -> {}\n", joined(related)));
            }
        }
    }
    print!("{out}");
    Ok(0)
}

fn check(model_path: &Path, design_path: &Path) -> Result<u8, Failure> {
    let model = load_model(model_path)?;
    let design = parse_design(&read(design_path)?)
        .map_err(|e| fatal(format!("{}: {e}", design_path.display())))?
        .to_design();
    let report = conforms(&design, &model);
    print!("{report}");
    Ok(if report.conforms { 0 } else { 1 })
}

fn enumerate(
    path: &Path,
    format: Format,
    limit: Option<usize>,
    well_founded: bool,
) -> Result<u8, Failure> {
    let model = load_model(path)?;
    let format = match format {
        Format::Csv => ExportFormat::Csv,
        Format::Table => ExportFormat::Table,
    };
    let writer = TableWriter::new(&model, format);
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut written = 0usize;
    let mut truncated = false;
    let mut io_error = None;
    if let Err(e) = out.write_all(writer.header().as_bytes()) {
        io_error = Some(e);
    } else {
        for_each_design(&model, |design| {
            if well_founded && !is_well_founded(&model, &design) {
                return ControlFlow::Continue(());
            }
            if limit.is_some_and(|l| written >= l) {
                truncated = true;
                return ControlFlow::Break(());
            }
            if let Err(e) = out.write_all(writer.row(&design).as_bytes()) {
                io_error = Some(e);
                return ControlFlow::Break(());
            }
            written += 1;
            ControlFlow::Continue(())
        });
    }
    if let Some(e) = io_error.or_else(|| out.flush().err()) {
        // A closed pipe (e.g. `| head`) is not a failure.
        if e.kind() != io::ErrorKind::BrokenPipe {
            return Err(fatal(format!("writing output: {e}")));
        }
    }
    if truncated {
        eprintln!("note: output truncated after {written} designs");
    }
    Ok(0)
}

fn consistent(path: &Path) -> Result<u8, Failure> {
    let model = load_model(path)?;
    if is_consistent(&model) {
        println!("consistent");
        Ok(0)
    } else {
        println!("inconsistent");
        Ok(1)
    }
}

fn serve(host: &str, port: u16, model_dir: Option<&Path>) -> Result<u8, Failure> {
    let state = AppState::default();
    if let Some(dir) = model_dir {
        let warnings = state
            .load_dir(dir)
            .map_err(|e| fatal(format!("{}: {e}", dir.display())))?;
        for w in warnings {
            eprintln!("warning: skipped {}: {}", w.path.display(), w.reason);
        }
    }
    for m in state.model_summaries() {
        eprintln!("loaded model `{}` ({} issues)", m.id, m.issue_count);
    }
    let runtime =
        tokio::runtime::Runtime::new().map_err(|e| fatal(format!("starting runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| fatal(format!("binding {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| fatal(e.to_string()))?;
        eprintln!("listening on http://{addr}");
        adm_service::serve(listener, state)
            .await
            .map_err(|e| fatal(format!("server error: {e}")))?;
        Ok(0)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { model } => validate(model),
        Command::Derive { model, relation } => derive(model, *relation),
        Command::Check { model, design } => check(model, design),
        Command::Enumerate {
            model,
            format,
            limit,
            well_founded,
        } => enumerate(model, *format, *limit, *well_founded),
        Command::Consistent { model } => consistent(model),
        Command::Serve {
            port,
            host,
            model_dir,
        } => serve(host, *port, model_dir.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message.trim_end());
            ExitCode::from(failure.code)
        }
    }
}
