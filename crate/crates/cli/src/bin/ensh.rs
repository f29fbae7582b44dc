//! ensh: decide, certify and verify sectional homogeneity of colorings.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or malformed input,
//! 3 engine error (solver, size limits, i/o).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ensh_core::adversary::{duel, Slash, StrategySpec};
use ensh_core::catalog::{Catalog, CatalogEntry};
use ensh_core::cert::{self, Certificate, Envelope, InstanceKey, Verdict};
use ensh_core::checker::find_sh_certificate;
use ensh_core::coloring::{Coloring, TableColoring};
use ensh_core::hj::{ensh_refutation_from_hj, hj_number};
use ensh_core::prover::{
    default_ceiling, prove_prefix2, required_blocks, OracleSpec, Profile, ProverOptions,
};
use ensh_core::search::{decide_ensh, encode_cnf, known_witness, Engine};
use ensh_core::solver::SolverConfig;
use ensh_core::transform::{transport, TransportSpec};
use ensh_core::{EnshError, SectionLayout};

#[derive(Parser)]
#[command(
    name = "ensh",
    version,
    about = "Sectional homogeneity of colorings: decide, certify, verify",
    after_help = "EXAMPLES:\n\
                  \n  ensh decide --seq 2,2 --engine brute\
                  \n  ensh cnf --seq 2,2,2,2 > inst.cnf\
                  \n  ensh prove2 --oracle parity --blocks auto --json > cert.json\
                  \n  ensh verify cert.json\
                  \n  ensh duel --seq 2,2 --horizon 10 --strategy greedy:0 --strategy greedy:3"
)]
struct Cli {
    /// Machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// SAT solver binary (default: $ENSH_SOLVER)
    #[arg(long, global = true)]
    solver: Option<PathBuf>,
    /// Solver timeout in seconds (default: none)
    #[arg(long, global = true)]
    timeout: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LayoutArgs {
    /// Block sizes, comma separated
    #[arg(long)]
    seq: String,
    /// Alphabet size
    #[arg(long, default_value_t = 2)]
    d: u8,
    /// Number of colors
    #[arg(long, default_value_t = 2)]
    k: u8,
}

impl LayoutArgs {
    fn layout(&self) -> Result<SectionLayout, EnshError> {
        SectionLayout::new(self.d, self.k, SectionLayout::parse_seq(&self.seq)?)
    }
}

#[derive(Args, Clone)]
struct ColoringArgs {
    /// Color digits in rank order
    #[arg(long)]
    coloring: Option<String>,
    /// File holding color digits in rank order
    #[arg(long)]
    coloring_file: Option<PathBuf>,
    /// Use the closed-form witness for the layout
    #[arg(long)]
    known: bool,
}

impl ColoringArgs {
    fn load(&self, layout: &SectionLayout) -> Result<Coloring, EnshError> {
        let digits = match (&self.coloring, &self.coloring_file, self.known) {
            (Some(d), None, false) => d.clone(),
            (None, Some(p), false) => std::fs::read_to_string(p)?,
            (None, None, true) => {
                return known_witness(layout).ok_or_else(|| {
                    EnshError::Malformed(format!("no closed-form witness for {layout}"))
                })
            }
            _ => {
                return Err(EnshError::Malformed(
                    "give exactly one of --coloring, --coloring-file, --known".into(),
                ))
            }
        };
        Ok(
            TableColoring::from_digit_string(layout.d(), layout.total(), layout.k(), &digits)?
                .into(),
        )
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Brute,
    Sat,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Look for a monochromatic section word of a given coloring
    CheckSh {
        #[command(flatten)]
        layout: LayoutArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
    },
    /// Decide whether some coloring has no monochromatic section word
    Decide {
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
        /// Append the verified decision to this JSONL catalog
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Emit the DIMACS encoding of the witness search
    Cnf {
        #[command(flatten)]
        layout: LayoutArgs,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Move a witness to another layout
    Transform {
        #[command(flatten)]
        layout: LayoutArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
        /// Keep these block indices (comma separated, increasing)
        #[arg(long)]
        subsequence: Option<String>,
        /// Grow blocks to these sizes
        #[arg(long)]
        dominate: Option<String>,
        /// Enlarge to this alphabet size
        #[arg(long)]
        to_d: Option<u8>,
        /// Enlarge to this number of colors
        #[arg(long)]
        to_k: Option<u8>,
    },
    /// Hales-Jewett numbers and refutations read off monochromatic lines
    Hj {
        #[command(subcommand)]
        command: HjCommand,
    },
    /// Certify a layout of blocks of two for a builtin oracle
    Prove2 {
        /// constant:C, parity, junta:T1,T2,...:SEED or random:SEED
        #[arg(long)]
        oracle: String,
        /// Number of blocks, or `auto` for the computed budget
        #[arg(long, default_value = "auto")]
        blocks: String,
        /// Abort after this many oracle queries (default: blocks^2 * 16)
        #[arg(long)]
        ceiling: Option<u64>,
    },
    /// Build levels against strategies, then extract witnesses from greedy slots
    Duel {
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long, default_value_t = 10)]
        horizon: usize,
        /// greedy:OFFSET or scripted:T=WORD;... (repeatable)
        #[arg(long = "strategy")]
        strategies: Vec<String>,
        /// Reading of `w/a`: overwrite or literal
        #[arg(long, default_value = "overwrite")]
        slash: String,
    },
    /// Re-verify a certificate file (`-` for stdin)
    Verify { file: PathBuf },
    /// Append to or query a JSONL catalog
    Catalog {
        /// Catalog file
        #[arg(long)]
        file: PathBuf,
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum HjCommand {
    /// Least length forcing a monochromatic n-variable word
    Number {
        #[arg(long, default_value_t = 2)]
        d: u8,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Largest length tried
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Section certificate for r blocks of size n from a monochromatic line
    Refute {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        coloring: ColoringArgs,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Verify a certificate file and append it
    Append {
        cert: PathBuf,
        #[arg(long, default_value = "")]
        note: String,
    },
    /// Entries for one instance
    Query {
        #[command(flatten)]
        layout: LayoutArgs,
        /// Include decisions derived by subsequence transport
        #[arg(long)]
        closure: bool,
    },
    /// Every entry
    List,
}

fn exit_code(e: &EnshError) -> u8 {
    match e {
        EnshError::Malformed(_) | EnshError::Precondition(_) => 2,
        EnshError::Verification(_) | EnshError::Consistency(_) => 1,
        _ => 3,
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, value: &Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{value}");
        } else {
            println!("{}", text());
        }
    }
}

fn solver(cli: &Cli) -> Result<SolverConfig, EnshError> {
    let config = SolverConfig::resolve(cli.solver.as_deref())?;
    if !config.path.exists() {
        return Err(EnshError::Solver(format!(
            "solver binary {} not found",
            config.path.display()
        )));
    }
    Ok(match cli.timeout {
        Some(s) => config.with_timeout(Duration::from_secs(s)),
        None => config,
    })
}

fn parse_list(text: &str) -> Result<Vec<usize>, EnshError> {
    SectionLayout::parse_seq(text)
}

fn read_input(path: &PathBuf) -> Result<String, EnshError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// A bare envelope, or a report object carrying one under `certificate`.
fn read_certificate(path: &PathBuf) -> Result<Envelope, EnshError> {
    let text = read_input(path)?;
    match cert::parse(text.trim()) {
        Ok(env) => Ok(env),
        Err(first) => {
            let value: Value = serde_json::from_str(text.trim()).map_err(|_| first.clone())?;
            match value.get("certificate") {
                Some(inner) => cert::parse(&inner.to_string()),
                None => Err(first),
            }
        }
    }
}

fn envelope_value(env: &Envelope) -> Value {
    serde_json::to_value(env).expect("certificates serialize")
}

fn run(cli: &Cli) -> Result<u8, EnshError> {
    let out = Output { json: cli.json };
    match &cli.command {
        Command::CheckSh { layout, coloring } => {
            let layout = layout.layout()?;
            let f = coloring.load(&layout)?;
            let env = match find_sh_certificate(&f, &layout)? {
                Some(c) => Envelope::new(Certificate::sh_cert(&layout, &c, &f)),
                None => Envelope::new(Certificate::witness(&layout, &f.to_table()?)),
            };
            out.emit(&envelope_value(&env), || match &env.certificate {
                Certificate::ShCert { s, word, color, .. } => {
                    format!("homogeneous: section {s} word `{word}` color {color}")
                }
                _ => format!("not homogeneous: the coloring witnesses {layout}"),
            });
        }
        Command::Decide {
            layout,
            engine,
            catalog,
        } => {
            let layout = layout.layout()?;
            let engine = match engine {
                EngineArg::Brute => Engine::Brute,
                EngineArg::Sat => Engine::Sat,
                EngineArg::Auto => Engine::Auto,
            };
            let config = match engine {
                Engine::Brute => None,
                Engine::Sat => Some(solver(cli)?),
                Engine::Auto => solver(cli).ok(),
            };
            let decision = decide_ensh(&layout, engine, config.as_ref())?;
            let env = Envelope::new(Certificate::from_decision(&layout, &decision));
            if let Some(path) = catalog {
                let note = match engine {
                    Engine::Brute => "decide brute",
                    Engine::Sat => "decide sat",
                    Engine::Auto => "decide auto",
                };
                Catalog::open(path).append(CatalogEntry::new(env.clone(), note))?;
            }
            out.emit(&envelope_value(&env), || match &env.certificate {
                Certificate::EnshWitness { coloring, .. } => {
                    format!("witness for {layout}: {coloring}")
                }
                _ => format!("no witness for {layout}"),
            });
        }
        Command::Cnf { layout, out: path } => {
            let cnf = encode_cnf(&layout.layout()?)?;
            let dimacs = cnf.to_dimacs();
            match path {
                Some(p) => std::fs::write(p, &dimacs)?,
                None if !cli.json => {
                    use std::io::Write;
                    match std::io::stdout().lock().write_all(dimacs.as_bytes()) {
                        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                        other => other?,
                    }
                }
                None => {}
            }
            if cli.json {
                let v = json!({"variables": cnf.num_vars, "clauses": cnf.clauses.len(), "sha256": cnf.sha256()});
                println!("{v}");
            }
        }
        Command::Transform {
            layout,
            coloring,
            subsequence,
            dominate,
            to_d,
            to_k,
        } => {
            let layout = layout.layout()?;
            let f = coloring.load(&layout)?;
            let spec = match (subsequence, dominate, to_d.or(*to_k)) {
                (Some(ix), None, None) => TransportSpec::Subsequence(parse_list(ix)?),
                (None, Some(seq), None) => TransportSpec::Domination(parse_list(seq)?),
                (None, None, Some(_)) => TransportSpec::Enlarge {
                    d: to_d.unwrap_or(layout.d()),
                    k: to_k.unwrap_or(layout.k()),
                },
                _ => {
                    return Err(EnshError::Malformed(
                        "give exactly one of --subsequence, --dominate, --to-d/--to-k".into(),
                    ))
                }
            };
            let (target, g) = transport(&f, &layout, &spec)?;
            let env = Envelope::new(Certificate::witness(&target, &g.to_table()?));
            out.emit(&envelope_value(&env), || format!("witness for {target}"));
        }
        Command::Hj { command } => match command {
            HjCommand::Number { d, k, n, max } => {
                let number = hj_number(*d, *k, *n, *max)?;
                let v = json!({"d": d, "k": k, "n": n, "max": max, "number": number});
                out.emit(&v, || match number {
                    Some(m) => format!("HJ({d},{k},{n}) = {m}"),
                    None => format!("HJ({d},{k},{n}) > {max}"),
                });
            }
            HjCommand::Refute { n, r, coloring } => {
                let layout = SectionLayout::new(2, 2, vec![*n; *r])?;
                let f = coloring.load(&layout)?;
                let c = ensh_refutation_from_hj(&f, *n, *r)?;
                let env = Envelope::new(Certificate::sh_cert(&layout, &c, &f));
                out.emit(&envelope_value(&env), || format!("{c}"));
            }
        },
        Command::Prove2 {
            oracle,
            blocks,
            ceiling,
        } => {
            let spec: OracleSpec = oracle.parse()?;
            let budget = required_blocks(Profile::Prefix2, &[2]);
            let blocks = match blocks.as_str() {
                "auto" => budget,
                n => n
                    .parse()
                    .map_err(|_| EnshError::Malformed(format!("block count `{n}`")))?,
            };
            let layout = SectionLayout::new(2, 2, vec![2; blocks])?;
            let f = spec.build(layout.total())?;
            let ceiling = ceiling.unwrap_or_else(|| default_ceiling(&layout));
            let report = prove_prefix2(
                &f,
                &layout,
                ProverOptions {
                    ceiling: Some(ceiling),
                },
            )?;
            let env = Envelope::new(Certificate::ShCert {
                key: InstanceKey::of(&layout),
                s: report.cert.s,
                word: report.cert.word.clone(),
                color: report.cert.color,
                coloring: None,
                oracle: Some(spec.to_string()),
            });
            let v = json!({
                "certificate": envelope_value(&env),
                "queries": report.queries,
                "ceiling": ceiling,
                "blocks": report.blocks,
                "budget_blocks": report.budget_blocks,
                "quad_outcome": report.quad_outcome,
            });
            out.emit(&v, || {
                format!(
                    "section {} color {} after {} queries ({} blocks, budget {})",
                    report.cert.s,
                    report.cert.color,
                    report.queries,
                    report.blocks,
                    report.budget_blocks
                )
            });
        }
        Command::Duel {
            layout,
            horizon,
            strategies,
            slash,
        } => {
            let layout = layout.layout()?;
            let slash: Slash = slash.parse()?;
            let specs = strategies
                .iter()
                .map(|s| s.parse::<StrategySpec>())
                .collect::<Result<Vec<_>, _>>()?;
            let report = duel(&layout, &specs, *horizon, slash)?;
            let passed = report.passed();
            let env = Envelope::new(Certificate::AdversaryReport {
                d: layout.d(),
                k: layout.k(),
                report,
            });
            out.emit(&envelope_value(&env), || {
                let Certificate::AdversaryReport { report, .. } = &env.certificate else {
                    unreachable!()
                };
                let stuck: Vec<String> = report
                    .stuck
                    .slots
                    .iter()
                    .map(|s| format!("`{}`", s.word))
                    .collect();
                format!(
                    "level identity {}, {} stabilized slots, stuck words {}, extracted {:?}, {}",
                    report.level_identity,
                    report.stabilized.len(),
                    stuck.join(" "),
                    report.stuck.sequence,
                    if passed { "passed" } else { "FAILED" }
                )
            });
            if !passed {
                return Ok(1);
            }
        }
        Command::Verify { file } => {
            let env = read_certificate(file)?;
            let verdict = env.certificate.verify()?;
            let v = json!({"kind": env.certificate.kind(), "verdict": verdict});
            out.emit(&v, || match &verdict {
                Verdict::Verified => format!("{}: verified", env.certificate.kind()),
                Verdict::TrustedSolver => format!(
                    "{}: CNF matches, solver result trusted",
                    env.certificate.kind()
                ),
                Verdict::Failed { reason } => {
                    format!("{}: FAILED: {reason}", env.certificate.kind())
                }
            });
            if !verdict.accepted() {
                return Ok(1);
            }
        }
        Command::Catalog { file, command } => {
            let catalog = Catalog::open(file);
            match command {
                CatalogCommand::Append { cert, note } => {
                    let env = read_certificate(cert)?;
                    let verdict = catalog.append(CatalogEntry::new(env, note.clone()))?;
                    out.emit(&json!({"appended": true, "verdict": verdict}), || {
                        "appended".into()
                    });
                }
                CatalogCommand::Query { layout, closure } => {
                    let key = InstanceKey::of(&layout.layout()?);
                    let hits = if *closure {
                        catalog.closure_query(&key)?
                    } else {
                        catalog
                            .query(&key)?
                            .into_iter()
                            .map(|entry| ensh_core::catalog::Hit {
                                derived: false,
                                entry,
                            })
                            .collect()
                    };
                    let v = serde_json::to_value(&hits).expect("entries serialize");
                    out.emit(&v, || {
                        let lines: Vec<String> = hits
                            .iter()
                            .map(|h| {
                                let c = &h.entry.certificate.certificate;
                                format!("{} {} [{}]", h.entry.key, c.kind(), h.entry.note)
                            })
                            .collect();
                        if lines.is_empty() {
                            format!("nothing cataloged for {key}")
                        } else {
                            lines.join("\n")
                        }
                    });
                }
                CatalogCommand::List => {
                    let entries = catalog.entries()?;
                    let v = serde_json::to_value(&entries).expect("entries serialize");
                    out.emit(&v, || {
                        entries
                            .iter()
                            .map(|e| {
                                format!(
                                    "{} {} [{}]",
                                    e.key,
                                    e.certificate.certificate.kind(),
                                    e.note
                                )
                            })
                            .collect::<Vec<_>>()
                            .join("\n")
                    });
                }
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string(), "exit": exit_code(&e)}));
            }
            eprintln!("ensh: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
