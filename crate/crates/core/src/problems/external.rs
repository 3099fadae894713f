//! Black-box simulator running as a child process.
//!
//! Line protocol over the child's stdin/stdout:
//!
//! ```text
//! child  -> parent  GMAB/1 <D> <LB_1> .. <LB_D> <UB_1> .. <UB_D>
//! parent -> child   EVAL <x_1> .. <x_D>
//! child  -> parent  OBS <float>
//! parent -> child   END
//! ```
//!
//! The child owns its randomness; the noise stream passed to
//! [`Objective::simulate`] is not used.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use crate::error::EvalError;
use crate::objective::Objective;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
const MAGIC: &str = "GMAB/1";

pub fn parse_handshake(line: &str) -> Result<SearchSpace, EvalError> {
    let bad = |msg: &str| EvalError::protocol(msg, line.trim_end());
    let mut tokens = line.split_ascii_whitespace();
    if tokens.next() != Some(MAGIC) {
        return Err(bad("handshake must start with GMAB/1"));
    }
    let dims: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| bad("bad dimension count"))?;
    let values = tokens
        .map(|t| t.parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad("bounds must be integers"))?;
    if values.len() != 2 * dims {
        return Err(bad("expected 2*D bounds"));
    }
    let (lower, upper) = values.split_at(dims);
    SearchSpace::new(lower.to_vec(), upper.to_vec()).map_err(|e| bad(&e.to_string()))
}

pub fn format_request(x: &Solution) -> String {
    let mut line = String::from("EVAL");
    for v in x.coords() {
        line.push(' ');
        line.push_str(&v.to_string());
    }
    line.push('\n');
    line
}

pub fn parse_reply(line: &str) -> Result<f64, EvalError> {
    let mut tokens = line.split_ascii_whitespace();
    match (tokens.next(), tokens.next(), tokens.next()) {
        (Some("OBS"), Some(v), None) => match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(EvalError::protocol("observation is not a finite decimal", line.trim_end())),
        },
        _ => Err(EvalError::protocol("expected \"OBS <float>\"", line.trim_end())),
    }
}

pub struct ExternalSim {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    space: SearchSpace,
    timeout: Duration,
    label: String,
}

impl ExternalSim {
    /// Starts `program` and waits (up to `timeout`) for its handshake.
    pub fn spawn(program: &str, args: &[String], timeout: Duration) -> Result<Self, EvalError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EvalError::Io(format!("cannot start {program}: {e}")))?;
        let stdout = child.stdout.take().expect("piped stdout");
        let stdin = child.stdin.take();
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut sim = ExternalSim {
            child,
            stdin,
            lines: rx,
            space: SearchSpace::uniform(1, 0, 1).expect("placeholder"),
            timeout,
            label: program.to_string(),
        };
        let line = sim.read_line()?;
        sim.space = parse_handshake(&line)?;
        Ok(sim)
    }

    /// Splits `command` on whitespace into program and arguments.
    pub fn from_command_line(command: &str, timeout: Duration) -> Result<Self, EvalError> {
        let mut parts = command.split_whitespace().map(String::from);
        let program = parts.next().ok_or_else(|| EvalError::Io("empty simulator command".into()))?;
        let args: Vec<String> = parts.collect();
        ExternalSim::spawn(&program, &args, timeout)
    }

    fn read_line(&mut self) -> Result<String, EvalError> {
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(EvalError::Io(e.to_string())),
            Err(RecvTimeoutError::Timeout) => Err(EvalError::Timeout(self.timeout)),
            Err(RecvTimeoutError::Disconnected) => {
                let status = self.child.wait().map(|s| s.to_string()).unwrap_or_else(|e| e.to_string());
                Err(EvalError::Exited(status))
            }
        }
    }

    fn send(&mut self, line: &str) -> Result<(), EvalError> {
        let stdin = self.stdin.as_mut().ok_or_else(|| EvalError::Io("simulator input closed".into()))?;
        stdin
            .write_all(line.as_bytes())
            .and_then(|()| stdin.flush())
            .map_err(|e| EvalError::Io(e.to_string()))
    }

    /// Sends `END` and waits briefly for the child before killing it.
    pub fn shutdown(&mut self) {
        if self.stdin.is_some() {
            let _ = self.send("END\n");
            self.stdin = None;
        }
        let deadline = Instant::now() + Duration::from_secs(1);
        while Instant::now() < deadline {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(5));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for ExternalSim {
    fn drop(&mut self) {
        self.shutdown();
    }
}

impl Objective for ExternalSim {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn simulate(&mut self, x: &Solution, _rng: &mut Stream) -> Result<f64, EvalError> {
        self.send(&format_request(x))?;
        let line = self.read_line()?;
        parse_reply(&line)
    }

    fn name(&self) -> String {
        format!("external:{}", self.label)
    }
}
