//! Running external provers on TPTP text and reading their SZS status.

use std::io::{Read, Write};
use std::os::unix::process::CommandExt;
use std::process::{Command, Stdio};
use std::sync::{Condvar, Mutex, OnceLock};
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalProverSpec {
    pub id: String,
    /// Shell command; `{file}` and `{timeout}` (whole seconds) are replaced.
    pub command: String,
    pub timeout: Duration,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("prover `{0}`: command has no {{file}} placeholder")]
    NoFilePlaceholder(String),
    #[error("prover id `{0}` is defined twice")]
    DuplicateId(String),
    #[error("prover `{id}`: executable `{exe}` not found")]
    MissingExecutable { id: String, exe: String },
}

impl ExternalProverSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if !self.command.contains("{file}") {
            return Err(SpecError::NoFilePlaceholder(self.id.clone()));
        }
        Ok(())
    }

    /// First word of the command.
    pub fn executable(&self) -> &str {
        self.command.split_whitespace().next().unwrap_or("")
    }

    /// Startup check that the executable can be found.
    pub fn check_installed(&self) -> Result<(), SpecError> {
        let exe = self.executable();
        if find_executable(exe) {
            Ok(())
        } else {
            Err(SpecError::MissingExecutable {
                id: self.id.clone(),
                exe: exe.to_string(),
            })
        }
    }
}

pub fn validate_specs(specs: &[ExternalProverSpec]) -> Result<(), SpecError> {
    for (i, s) in specs.iter().enumerate() {
        s.validate()?;
        if specs[..i].iter().any(|t| t.id == s.id) {
            return Err(SpecError::DuplicateId(s.id.clone()));
        }
    }
    Ok(())
}

pub fn find_executable(exe: &str) -> bool {
    if exe.contains('/') {
        return std::path::Path::new(exe).is_file();
    }
    std::env::var_os("PATH")
        .map(|paths| std::env::split_paths(&paths).any(|d| d.join(exe).is_file()))
        .unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExternalVerdict {
    /// `SZS status Theorem`; no proof object is kept.
    Proved,
    /// `SZS status CounterSatisfiable`.
    Saturated,
    TimedOut,
    /// Any other outcome, with the captured output.
    Failed(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot start `{command}`: {source}")]
    SpawnFailure {
        command: String,
        source: std::io::Error,
    },
    #[error("cannot write problem file: {0}")]
    Io(#[from] std::io::Error),
}

/// Maps prover output to a verdict by its SZS status line.
pub fn szs_verdict(output: &str) -> ExternalVerdict {
    for line in output.lines() {
        let Some(rest) = line.split("SZS status ").nth(1) else {
            continue;
        };
        match rest.split_whitespace().next() {
            Some("Theorem") => return ExternalVerdict::Proved,
            Some("CounterSatisfiable") => return ExternalVerdict::Saturated,
            Some("Timeout") => return ExternalVerdict::TimedOut,
            _ => {}
        }
    }
    ExternalVerdict::Failed(output.to_string())
}

struct Semaphore {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Semaphore);

impl Semaphore {
    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

static SLOTS: OnceLock<Semaphore> = OnceLock::new();

/// Sets the cap on concurrently running external provers. Only the first
/// call before any run takes effect; the default is the CPU count.
pub fn set_max_processes(n: usize) -> bool {
    SLOTS
        .set(Semaphore {
            free: Mutex::new(n.max(1)),
            cv: Condvar::new(),
        })
        .is_ok()
}

fn slots() -> &'static Semaphore {
    SLOTS.get_or_init(|| {
        let n = std::thread::available_parallelism().map_or(1, |n| n.get());
        Semaphore {
            free: Mutex::new(n),
            cv: Condvar::new(),
        }
    })
}

/// Writes `problem` to a temporary file and runs the prover on it in its
/// own process group. On timeout the whole group is killed.
pub fn run_external(spec: &ExternalProverSpec, problem: &str) -> Result<ExternalVerdict, RunError> {
    let _permit = slots().acquire();
    let mut file = tempfile::Builder::new().suffix(".p").tempfile()?;
    file.write_all(problem.as_bytes())?;
    file.flush()?;
    let command = spec
        .command
        .replace("{file}", &file.path().display().to_string())
        .replace("{timeout}", &spec.timeout.as_secs().max(1).to_string());

    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|source| RunError::SpawnFailure {
            command: command.clone(),
            source,
        })?;
    let pgid = child.id() as libc::pid_t;

    // Drain the pipes on helper threads so a chatty prover cannot block.
    let mut stdout = child.stdout.take().expect("piped");
    let mut stderr = child.stderr.take().expect("piped");
    let out_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let deadline = Instant::now() + spec.timeout;
    let mut timed_out = false;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if Instant::now() >= deadline {
            timed_out = true;
            break;
        }
        std::thread::sleep(Duration::from_millis(10));
    }
    // The group may outlive the shell; kill it in every case.
    unsafe {
        libc::killpg(pgid, libc::SIGKILL);
    }
    let _ = child.wait();
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    if timed_out {
        return Ok(ExternalVerdict::TimedOut);
    }
    Ok(match szs_verdict(&out) {
        ExternalVerdict::Failed(_) => ExternalVerdict::Failed(format!("{out}{err}")),
        v => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(cmd: &str, ms: u64) -> ExternalProverSpec {
        ExternalProverSpec {
            id: "fake".into(),
            command: cmd.into(),
            timeout: Duration::from_millis(ms),
        }
    }

    #[test]
    fn szs_lines() {
        assert_eq!(
            szs_verdict("% SZS status Theorem for p"),
            ExternalVerdict::Proved
        );
        assert_eq!(
            szs_verdict("# SZS status CounterSatisfiable"),
            ExternalVerdict::Saturated
        );
        assert!(matches!(
            szs_verdict("proof found"),
            ExternalVerdict::Failed(_)
        ));
    }

    #[test]
    fn template_needs_file() {
        assert!(spec("eprover", 100).validate().is_err());
        let twice = vec![spec("cat {file}", 100), spec("cat {file}", 100)];
        assert!(matches!(
            validate_specs(&twice),
            Err(SpecError::DuplicateId(_))
        ));
    }

    #[test]
    fn fake_prover_reads_the_file() {
        let s = spec(
            "grep -q conjecture {file} && echo 'SZS status Theorem'",
            5000,
        );
        assert_eq!(
            run_external(&s, "fof(g, conjecture, p).").unwrap(),
            ExternalVerdict::Proved
        );
    }

    #[test]
    fn timeout_kills_the_group() {
        let s = spec("sleep 30 & sleep 30; echo {file}", 200);
        let start = Instant::now();
        assert_eq!(run_external(&s, "").unwrap(), ExternalVerdict::TimedOut);
        assert!(start.elapsed() < Duration::from_secs(5));
    }
}
