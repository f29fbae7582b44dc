//! External SAT solver driver: writes DIMACS to a temporary file, runs the solver
//! as a subprocess and parses SAT-competition output.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::error::{EnshError, Result};

pub const SOLVER_ENV: &str = "ENSH_SOLVER";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub path: PathBuf,
    pub timeout: Option<Duration>,
}

impl SolverConfig {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        SolverConfig {
            path: path.into(),
            timeout: None,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    /// Explicit path first, then `ENSH_SOLVER`.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Ok(Self::new(p));
        }
        match std::env::var_os(SOLVER_ENV) {
            Some(p) if !p.is_empty() => Ok(Self::new(PathBuf::from(p))),
            _ => Err(EnshError::Solver(format!(
                "no solver configured (use --solver or {SOLVER_ENV})"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    /// Signed literals, one per variable `1..=num_vars`, in variable order.
    Sat(Vec<i64>),
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverRun {
    pub outcome: SatOutcome,
    /// File name of the binary plus its first comment line, if any.
    pub solver_id: String,
    pub elapsed: Duration,
}

/// Parses solver stdout. `num_vars` is the instance size; a SAT answer must
/// assign every variable.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<SatOutcome> {
    let mut status: Option<&str> = None;
    let mut lits: Vec<i64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim());
        } else if let Some(rest) = line
            .strip_prefix("v ")
            .or_else(|| (line == "v").then_some(""))
        {
            for tok in rest.split_whitespace() {
                let l: i64 = tok
                    .parse()
                    .map_err(|_| EnshError::Solver(format!("bad model literal `{tok}`")))?;
                if l != 0 {
                    lits.push(l);
                }
            }
        }
    }
    match status {
        Some("UNSATISFIABLE") => Ok(SatOutcome::Unsat),
        Some("SATISFIABLE") => {
            let mut model = vec![0i64; num_vars];
            for l in lits {
                let v = l.unsigned_abs() as usize;
                if v == 0 || v > num_vars {
                    return Err(EnshError::Solver(format!("model literal {l} out of range")));
                }
                model[v - 1] = l;
            }
            if let Some(v) = model.iter().position(|&l| l == 0) {
                return Err(EnshError::Solver(format!(
                    "model leaves variable {} unassigned",
                    v + 1
                )));
            }
            Ok(SatOutcome::Sat(model))
        }
        Some(other) => Err(EnshError::Solver(format!("solver answered `{other}`"))),
        None => Err(EnshError::Solver("no status line in solver output".into())),
    }
}

static RUN_COUNTER: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

pub fn solve_dimacs(dimacs: &str, num_vars: usize, config: &SolverConfig) -> Result<SolverRun> {
    let dir = std::env::temp_dir();
    let n = RUN_COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let file = dir.join(format!("ensh-{}-{n}.cnf", std::process::id()));
    std::fs::write(&file, dimacs)?;
    let result = run(&file, num_vars, config);
    let _ = std::fs::remove_file(&file);
    result
}

fn run(file: &Path, num_vars: usize, config: &SolverConfig) -> Result<SolverRun> {
    let start = Instant::now();
    let mut child = Command::new(&config.path)
        .arg(file)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| EnshError::Solver(format!("cannot start {}: {e}", config.path.display())))?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if let Some(limit) = config.timeout {
            if start.elapsed() > limit {
                let _ = child.kill();
                let _ = child.wait();
                return Err(EnshError::Solver(format!("timed out after {limit:?}")));
            }
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let out = reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    let outcome = parse_solver_output(&out, num_vars).map_err(|e| {
        EnshError::Solver(format!(
            "{e}; exit status {status}; stdout tail: {:?}; stderr tail: {:?}",
            tail(&out),
            tail(&err)
        ))
    })?;
    let name = config
        .path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let comment = out
        .lines()
        .find_map(|l| l.strip_prefix("c "))
        .map(str::trim);
    let solver_id = match comment {
        Some(c) => format!("{name}: {c}"),
        None => name,
    };
    Ok(SolverRun {
        outcome,
        solver_id,
        elapsed: start.elapsed(),
    })
}

fn tail(s: &str) -> &str {
    let cut = s.len().saturating_sub(400);
    let mut i = cut;
    while !s.is_char_boundary(i) {
        i += 1;
    }
    &s[i..]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_competition_output() {
        let out = "c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        assert_eq!(
            parse_solver_output(out, 3).unwrap(),
            SatOutcome::Sat(vec![1, -2, 3])
        );
        assert_eq!(
            parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(),
            SatOutcome::Unsat
        );
        assert!(parse_solver_output("s SATISFIABLE\nv 1 0\n", 2).is_err());
        assert!(parse_solver_output("garbage", 2).is_err());
        assert!(parse_solver_output("s UNKNOWN", 2).is_err());
    }

    #[test]
    fn missing_binary_is_an_engine_error() {
        let cfg = SolverConfig::new("/nonexistent/ensh-solver");
        assert!(matches!(
            solve_dimacs("p cnf 1 1\n1 0\n", 1, &cfg),
            Err(EnshError::Solver(_))
        ));
    }
}
