//! Command-line driver for the bilex translation engine.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bilex::session::{
    Lingware, OutputMode, Session, SessionConfig, SessionError, TraceFlags, TranslationResult,
    DEFAULT_DEPTH,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const CORPUS_MISMATCH: u8 = 1;
const SETUP_ERROR: u8 = 5;

#[derive(Parser)]
#[command(name = "bilex", version, about = "Lexicalist English-Spanish translation")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Source language.
    #[arg(long, global = true, default_value = "english")]
    from: String,

    /// Target language.
    #[arg(long, global = true, default_value = "spanish")]
    to: String,

    /// Lingware directory.
    #[arg(long, global = true, value_name = "DIR")]
    lingware: Option<PathBuf>,

    /// Rounds of bi-lexical rule application.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_DEPTH)]
    depth: usize,

    /// Print every translation instead of the best one.
    #[arg(long, global = true)]
    all: bool,

    /// Maximum number of translations per input with --all.
    #[arg(long, global = true, value_name = "N")]
    max_results: Option<usize>,

    /// Stages to trace: parse, transfer, rules, generate or all.
    #[arg(long, global = true, value_name = "STAGE[,STAGE]")]
    trace: Option<String>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Report::Text)]
    report: Report,
}

#[derive(Subcommand)]
enum Command {
    /// Translate sentences given as arguments, or one per line on stdin.
    Translate { text: Vec<String> },
    /// Check a tab-separated corpus of source, expected target and mode.
    Check { corpus: PathBuf },
    /// List static and derived bilexical entries.
    Expand,
    /// Print the skolemized analyses of a source sentence.
    Parse { text: Vec<String> },
    /// Generate target sentences from a bag of signs read from a file.
    Generate { bag: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Json,
}

fn default_lingware() -> PathBuf {
    match std::env::var_os("BILEX_LINGWARE") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/lingware")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bilex: {e}");
            match e {
                SessionError::Realize(_) => ExitCode::from(bilex::session::Stage::Generate.exit_code() as u8),
                _ => ExitCode::from(SETUP_ERROR),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8, SessionError> {
    let dir = cli.lingware.clone().unwrap_or_else(default_lingware);
    let trace = match &cli.trace {
        Some(list) => TraceFlags::parse_list(list).map_err(SessionError::Config)?,
        None => TraceFlags::default(),
    };
    let lw = Lingware::load(&dir)?;
    let mut config = SessionConfig::new(&cli.from, &cli.to, dir);
    config.depth = cli.depth;
    config.max_results = cli.max_results;
    config.trace = trace;
    config.mode = if cli.all { OutputMode::All } else { OutputMode::Best };
    let out = &mut io::stdout().lock();
    match &cli.command {
        Command::Translate { text } => {
            let session = Session::new(&lw, config)?;
            let inputs = if text.is_empty() {
                read_stdin_lines()?
            } else {
                vec![text.join(" ")]
            };
            let mut code = 0;
            for input in inputs {
                let res = session.translate(&input);
                if let Some(f) = &res.failure {
                    code = code.max(f.stage.exit_code() as u8);
                }
                print_translation(out, cli.report, &res)?;
            }
            Ok(code)
        }
        Command::Check { corpus } => {
            let session = Session::new(&lw, config)?;
            let text = std::fs::read_to_string(corpus).map_err(|e| io_error(corpus, e))?;
            let report = session.check_corpus(&text)?;
            for l in &report.lines {
                match cli.report {
                    Report::Json => emit(out, &serde_json::to_value(l).unwrap())?,
                    Report::Text => {
                        let verdict = if l.pass { "PASS" } else { "FAIL" };
                        let got = l.outputs.first().map(String::as_str).unwrap_or("-");
                        emit_line(out, &format!("{verdict}  {}  =>  {got}", l.source))?;
                        if !l.pass {
                            emit_line(out, &format!("      expected ({:?}): {}", l.mode, l.expected))?;
                            for o in l.outputs.iter().skip(1) {
                                emit_line(out, &format!("      also: {o}"))?;
                            }
                            if let Some(f) = &l.failure {
                                emit_line(out, &format!("      {} failed: {}", f.stage, f.diagnostics.join("; ")))?;
                            }
                        }
                    }
                }
            }
            if cli.report == Report::Text {
                emit_line(out, &format!("{} passed, {} failed", report.passed, report.failed))?;
            } else {
                emit(out, &json!({"passed": report.passed, "failed": report.failed}))?;
            }
            let worst = report.lines.iter().filter_map(|l| l.failure.as_ref()).map(|f| f.stage).max();
            Ok(match worst {
                Some(stage) => stage.exit_code() as u8,
                None if report.success() => 0,
                None => CORPUS_MISMATCH,
            })
        }
        Command::Expand => {
            let session = Session::new(&lw, config)?;
            for e in session.expand() {
                match cli.report {
                    Report::Json => emit(
                        out,
                        &json!({"entry": e.to_string(), "derived": e.is_derived(), "describe": e.describe()}),
                    )?,
                    Report::Text => emit_line(out, &e.describe())?,
                }
            }
            Ok(0)
        }
        Command::Parse { text } => match lw.analyse(&cli.from, &text.join(" "))? {
            Ok(reps) => {
                for r in reps {
                    match cli.report {
                        Report::Json => emit(out, &json!({"analysis": r.summary()}))?,
                        Report::Text => emit_line(out, &r.summary())?,
                    }
                }
                Ok(0)
            }
            Err(diags) => {
                for d in diags {
                    eprintln!("parse: {d}");
                }
                Ok(bilex::session::Stage::Parse.exit_code() as u8)
            }
        },
        Command::Generate { bag } => {
            let text = std::fs::read_to_string(bag).map_err(|e| io_error(bag, e))?;
            let signs = lw.read_bag(&cli.to, &text)?;
            let (texts, generation) = lw.generate_bag(&cli.to, &signs, trace.generate)?;
            for t in &generation.trace {
                eprintln!("generate: {t}");
            }
            for t in &texts {
                match cli.report {
                    Report::Json => emit(out, &json!({"output": t}))?,
                    Report::Text => emit_line(out, t)?,
                }
            }
            if texts.is_empty() {
                if let Some(d) = &generation.diagnostic {
                    eprintln!("generate: {d}");
                }
                return Ok(bilex::session::Stage::Generate.exit_code() as u8);
            }
            Ok(0)
        }
    }
}

fn print_translation(out: &mut impl Write, report: Report, res: &TranslationResult) -> Result<(), SessionError> {
    match report {
        Report::Json => emit(out, &serde_json::to_value(res).unwrap()),
        Report::Text => {
            for t in &res.trace {
                emit_line(out, &format!("[{}] {}", t.stage, t.text))?;
            }
            for o in &res.outputs {
                emit_line(out, &o.text)?;
            }
            if let Some(f) = &res.failure {
                eprintln!("{}: {} failed", res.input, f.stage);
                for d in &f.diagnostics {
                    eprintln!("  {d}");
                }
            }
            Ok(())
        }
    }
}

fn emit(out: &mut impl Write, v: &serde_json::Value) -> Result<(), SessionError> {
    emit_line(out, &v.to_string())
}

fn emit_line(out: &mut impl Write, s: &str) -> Result<(), SessionError> {
    writeln!(out, "{s}").map_err(|e| io_error(&PathBuf::from("<stdout>"), e))
}

fn read_stdin_lines() -> Result<Vec<String>, SessionError> {
    let mut lines = Vec::new();
    for l in io::stdin().lock().lines() {
        let l = l.map_err(|e| io_error(&PathBuf::from("<stdin>"), e))?;
        if !l.trim().is_empty() {
            lines.push(l);
        }
    }
    Ok(lines)
}

fn io_error(path: &std::path::Path, source: io::Error) -> SessionError {
    SessionError::Lingware(bilex::lingware::LingwareError::Io {
        path: path.display().to_string(),
        source,
    })
}
