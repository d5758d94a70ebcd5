//! Runs an SMT-LIB solver as a child process and reads back its verdict and
//! model.
//!
//! Model production is switched on, then the script (ending in `check-sat`)
//! is written to the solver's stdin; the
//! first output line must be the status. On `sat` the `get-value` request is
//! sent in the same session and the balanced response parsed.

use std::fmt;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use crate::encode::EncodingArtifact;
use crate::smt::{parse_all, sexpr::paren_balance, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverProfile {
    Z3,
    Cvc5,
    Yices,
    Generic,
}

impl SolverProfile {
    /// Guesses the profile from the executable's file name.
    pub fn detect(path: &Path) -> Self {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        if name.starts_with("z3") {
            SolverProfile::Z3
        } else if name.starts_with("cvc5") {
            SolverProfile::Cvc5
        } else if name.starts_with("yices") {
            SolverProfile::Yices
        } else {
            SolverProfile::Generic
        }
    }

    pub fn args(self) -> &'static [&'static str] {
        match self {
            SolverProfile::Z3 => &["-in", "-smt2"],
            SolverProfile::Cvc5 => &["--lang=smt2", "--incremental"],
            SolverProfile::Yices => &["--incremental"],
            SolverProfile::Generic => &[],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub path: PathBuf,
    pub profile: SolverProfile,
    pub timeout: Option<Duration>,
}

impl SolverConfig {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        SolverConfig {
            profile: SolverProfile::detect(&path),
            path,
            timeout: None,
        }
    }

    /// `$SOLVER_PATH`, or `z3` on the search path.
    pub fn from_env() -> Self {
        SolverConfig::new(std::env::var_os("SOLVER_PATH").unwrap_or_else(|| "z3".into()))
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    /// Whether the executable can be started at all.
    pub fn is_available(&self) -> bool {
        let child = Command::new(&self.path)
            .args(self.profile.args())
            .stdin(Stdio::piped())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn();
        match child {
            Ok(mut c) => {
                if let Some(mut stdin) = c.stdin.take() {
                    let _ = stdin.write_all(b"(exit)\n");
                }
                c.wait().is_ok()
            }
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolverVerdict {
    pub status: Status,
    pub model: Option<Model>,
    /// Everything the solver printed, plus notes such as timeouts.
    pub diagnostics: String,
    pub elapsed: Duration,
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("solver `{}` not found", .0.display())]
    NotFound(PathBuf),
    #[error("solver rejected the script: {diagnostics}")]
    Parse { diagnostics: String },
    #[error("solver I/O: {0}")]
    Io(#[from] io::Error),
}

pub fn solve(artifact: &EncodingArtifact, config: &SolverConfig) -> Result<SolverVerdict, SolverError> {
    let request = (!artifact.value_requests.is_empty()).then(|| artifact.get_value_command());
    solve_script(&artifact.script, request.as_deref(), config)
}

/// Solves a script that ends in `check-sat`; `get_value` is sent only if the
/// answer is `sat`.
pub fn solve_script(
    script: &str,
    get_value: Option<&str>,
    config: &SolverConfig,
) -> Result<SolverVerdict, SolverError> {
    let started = Instant::now();
    let deadline = config.timeout.map(|t| started + t);
    let mut child = Command::new(&config.path)
        .args(config.profile.args())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => SolverError::NotFound(config.path.clone()),
            _ => SolverError::Io(e),
        })?;
    let mut session = Session::start(&mut child)?;

    let result = session.run(script, get_value, deadline);
    let timed_out = matches!(result, Ok(Outcome::TimedOut));
    if !timed_out {
        session.send("(exit)\n");
    }
    drop(session.stdin.take());
    if timed_out || result.is_err() {
        let _ = child.kill();
        let _ = child.wait();
    } else {
        finish(&mut child, deadline);
    }
    let outcome = result?;
    let mut diagnostics = session.transcript;
    let stderr = session.stderr.join().unwrap_or_default();
    if !stderr.is_empty() {
        diagnostics.push_str(&stderr);
    }
    let elapsed = started.elapsed();
    match outcome {
        Outcome::TimedOut => {
            diagnostics.push_str(&format!(
                "timeout after {} ms\n",
                config.timeout.unwrap_or_default().as_millis()
            ));
            Ok(SolverVerdict {
                status: Status::Unknown,
                model: None,
                diagnostics,
                elapsed,
            })
        }
        Outcome::Rejected => Err(SolverError::Parse { diagnostics }),
        Outcome::Answer(status, model) => Ok(SolverVerdict {
            status,
            model,
            diagnostics,
            elapsed,
        }),
    }
}

/// Waits for a well-behaved exit; kills the child past the deadline.
fn finish(child: &mut Child, deadline: Option<Instant>) {
    let grace = Instant::now() + Duration::from_secs(2);
    let limit = deadline.map_or(grace, |d| d.max(grace));
    loop {
        match child.try_wait() {
            Ok(Some(_)) | Err(_) => return,
            Ok(None) if Instant::now() >= limit => {
                let _ = child.kill();
                let _ = child.wait();
                return;
            }
            Ok(None) => thread::sleep(Duration::from_millis(2)),
        }
    }
}

enum Outcome {
    Answer(Status, Option<Model>),
    TimedOut,
    Rejected,
}

enum Line {
    Text(String),
    Closed,
    TimedOut,
}

struct Session {
    stdin: Option<ChildStdin>,
    lines: Receiver<String>,
    stderr: thread::JoinHandle<String>,
    transcript: String,
}

impl Session {
    fn start(child: &mut Child) -> io::Result<Session> {
        let stdout = child.stdout.take().ok_or_else(|| io::Error::other("no stdout"))?;
        let mut stderr = child.stderr.take().ok_or_else(|| io::Error::other("no stderr"))?;
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let stderr = thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        Ok(Session {
            stdin: child.stdin.take(),
            lines,
            stderr,
            transcript: String::new(),
        })
    }

    fn send(&mut self, text: &str) {
        if let Some(stdin) = self.stdin.as_mut() {
            // a dead solver shows up as a closed stdout, reported there
            let _ = stdin.write_all(text.as_bytes()).and_then(|_| stdin.flush());
        }
    }

    fn next_line(&mut self, deadline: Option<Instant>) -> Line {
        let got = match deadline {
            None => self.lines.recv().map_err(|_| RecvTimeoutError::Disconnected),
            Some(d) => self
                .lines
                .recv_timeout(d.saturating_duration_since(Instant::now())),
        };
        match got {
            Ok(l) => {
                self.transcript.push_str(&l);
                self.transcript.push('\n');
                Line::Text(l)
            }
            Err(RecvTimeoutError::Timeout) => Line::TimedOut,
            Err(RecvTimeoutError::Disconnected) => Line::Closed,
        }
    }

    /// Collects whatever else the solver says within a short grace period,
    /// so rejections carry the full error text.
    fn drain(&mut self) {
        self.send("(exit)\n");
        drop(self.stdin.take());
        let until = Instant::now() + Duration::from_millis(500);
        while let Line::Text(_) = self.next_line(Some(until)) {}
    }

    fn run(
        &mut self,
        script: &str,
        get_value: Option<&str>,
        deadline: Option<Instant>,
    ) -> Result<Outcome, SolverError> {
        // must precede set-logic
        self.send("(set-option :produce-models true)\n");
        self.send(script);
        if !script.trim_end().ends_with("(check-sat)") {
            self.send("(check-sat)\n");
        }
        let status = loop {
            match self.next_line(deadline) {
                Line::TimedOut => return Ok(Outcome::TimedOut),
                Line::Closed => return Ok(Outcome::Rejected),
                Line::Text(l) => match l.trim() {
                    "" => continue,
                    "sat" => break Status::Sat,
                    "unsat" => break Status::Unsat,
                    "unknown" => break Status::Unknown,
                    _ => {
                        self.drain();
                        return Ok(Outcome::Rejected);
                    }
                },
            }
        };
        let mut model = None;
        if let (Status::Sat, Some(request)) = (status, get_value) {
            self.send(request);
            self.send("\n");
            let mut text = String::new();
            let mut depth = 0;
            loop {
                match self.next_line(deadline) {
                    Line::TimedOut => return Ok(Outcome::TimedOut),
                    Line::Closed => return Ok(Outcome::Rejected),
                    Line::Text(l) => {
                        depth += paren_balance(&l);
                        text.push_str(&l);
                        text.push('\n');
                        if depth <= 0 && !text.trim().is_empty() {
                            break;
                        }
                    }
                }
            }
            let parsed = parse_all(&text).ok();
            let response = match parsed.as_deref() {
                Some([e]) if !is_error(e) => e.clone(),
                _ => {
                    self.drain();
                    return Ok(Outcome::Rejected);
                }
            };
            match Model::from_response(&response) {
                Ok(m) => model = Some(m),
                Err(e) => {
                    self.transcript.push_str(&e);
                    self.transcript.push('\n');
                    return Ok(Outcome::Rejected);
                }
            }
        }
        Ok(Outcome::Answer(status, model))
    }
}

fn is_error(e: &crate::smt::SExpr) -> bool {
    matches!(e.as_list(), Some([head, ..]) if head.as_atom() == Some("error"))
}
