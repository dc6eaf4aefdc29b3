//! The `verify` command: checks ForTheL-style texts and reports per goal.

pub mod config;
pub mod render;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, ValueEnum};
use ftl_core::bridge::{set_max_processes, write_problem};
use ftl_core::syntax::parse_text;
use ftl_core::verifier::{build_tasks, prepare_task, verify_document, Backend, VerifyConfig};

pub use render::render_proof;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "verify",
    version,
    about = "Verify ForTheL-style mathematical texts"
)]
pub struct Args {
    /// Input texts.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// `native` or the id of a configured external prover; a comma
    /// separated list is tried in order.
    #[arg(long, value_delimiter = ',', default_value = "native")]
    pub prover: Vec<String>,
    /// Seconds per goal.
    #[arg(long, default_value_t = 10.0)]
    pub timeout: f64,
    /// Definition expansion depth.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Premise relevance radius.
    #[arg(long = "filter-k", default_value_t = 2)]
    pub filter_k: usize,
    #[arg(long, value_enum, default_value = "on")]
    pub chaining: Switch,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write every proof task as text into this directory.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Write every proof task as a TPTP problem into this directory and stop.
    #[arg(long = "tptp-out")]
    pub tptp_out: Option<PathBuf>,
    /// Print the refutations found by the native prover.
    #[arg(long)]
    pub proofs: bool,
    /// Prover configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn usage(err: &mut dyn Write, message: &str) -> i32 {
    let _ = writeln!(err, "error: {message}\n\nUsage: verify [OPTIONS] <INPUTS>...\n\nFor more information, try '--help'.");
    EXIT_USAGE
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned())
}

/// Builds the verifier configuration, or a usage error message.
pub fn verify_config(args: &Args) -> Result<VerifyConfig, String> {
    if !(args.timeout > 0.0 && args.timeout.is_finite()) {
        return Err("--timeout must be a positive number of seconds".into());
    }
    if args.filter_k == 0 {
        return Err("--filter-k must be at least 1".into());
    }
    let timeout = Duration::from_secs_f64(args.timeout);
    let path = config::config_path(args.config.as_deref());
    let cfg = config::load_config(path.as_deref(), timeout).map_err(|e| e.to_string())?;
    if let Some(n) = cfg.max_processes {
        set_max_processes(n.max(1));
    }
    let mut backends = Vec::new();
    for id in &args.prover {
        if id == "native" {
            backends.push(Backend::Native);
            continue;
        }
        let spec = cfg
            .prover(id)
            .ok_or_else(|| format!("unknown prover `{id}`"))?;
        spec.check_installed().map_err(|e| e.to_string())?;
        backends.push(Backend::External(spec.clone()));
    }
    Ok(VerifyConfig {
        backends,
        timeout,
        depth: args.depth,
        filter_k: args.filter_k,
        chaining: args.chaining == Switch::On,
        dump: None,
        ..VerifyConfig::default()
    })
}

enum Outcome {
    Verified,
    Failed,
    BadInput,
}

fn write_tptp(
    file: &str,
    doc: &ftl_core::syntax::Document,
    vocab: &ftl_core::syntax::Vocabulary,
    cfg: &VerifyConfig,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<(), String> {
    let tasks = build_tasks(doc, vocab).map_err(|e| format!("{file}:{e}"))?;
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for (n, task) in tasks.iter().enumerate() {
        let prepared = prepare_task(task, cfg);
        let problem = write_problem(&prepared.task.labeled_premises(), &prepared.task.goal)
            .map_err(|e| format!("{file}:{}: {e}", task.origin))?;
        let path = dir.join(format!("{}_{:03}.p", stem(Path::new(file)), n + 1));
        let text = format!("% {file}:{} {}\n{}", task.origin, task.kind, problem.text);
        std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
        let _ = writeln!(out, "{}", path.display());
    }
    Ok(())
}

fn check_file(
    path: &Path,
    args: &Args,
    cfg: &VerifyConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let file = path.display().to_string();
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            let _ = writeln!(err, "{file}: no such file");
            return Outcome::BadInput;
        }
        Err(e) => {
            let _ = writeln!(err, "{file}: {e}");
            return Outcome::BadInput;
        }
    };
    let (doc, vocab) = match parse_text(&src) {
        Ok(parsed) => parsed,
        Err(e) => {
            let _ = writeln!(err, "{file}:{e}");
            return Outcome::BadInput;
        }
    };
    if let Some(dir) = &args.tptp_out {
        return match write_tptp(&file, &doc, &vocab, cfg, dir, out) {
            Ok(()) => Outcome::Verified,
            Err(e) => {
                let _ = writeln!(err, "{e}");
                Outcome::BadInput
            }
        };
    }
    let mut cfg = cfg.clone();
    cfg.dump = args.dump.as_ref().map(|d| d.join(stem(path)));
    let report = match verify_document(&doc, &vocab, &cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "{file}:{e}");
            return Outcome::BadInput;
        }
    };
    let text = match args.format {
        Format::Text => report::render_text(&file, &report, args.proofs),
        Format::Structured => report::render_structured(&file, &report),
    };
    let _ = out.write_all(text.as_bytes());
    if report.success() {
        Outcome::Verified
    } else {
        Outcome::Failed
    }
}

/// Runs the command and returns its exit code: 0 when every goal is
/// verified, 1 when a goal failed, 2 on unreadable or ill-formed input
/// and 64 on usage errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let cfg = match verify_config(&args) {
        Ok(c) => c,
        Err(message) => return usage(err, &message),
    };
    let mut code = EXIT_OK;
    for path in &args.inputs {
        match check_file(path, &args, &cfg, out, err) {
            Outcome::Verified => {}
            Outcome::Failed => code = code.max(EXIT_FAILED),
            Outcome::BadInput => code = EXIT_INPUT,
        }
    }
    code
}
