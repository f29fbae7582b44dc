//! Certificate values, their JSON form and offline re-verification.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::adversary::{duel, AdversaryReport, StrategySpec};
use crate::checker::{
    find_sh_certificate, verify_sh_certificate, word_text, ShCertificate, WordRanker,
};
use crate::coloring::{Coloring, TableColoring};
use crate::error::{EnshError, Result};
use crate::prover::oracles::OracleSpec;
use crate::search::{decide_ensh_brute, encode_cnf, EnshDecision, Evidence};
use crate::word::{SectionLayout, VariableWord};

pub const SCHEMA_VERSION: u32 = 1;

/// The `(d, k, seq)` a decision is about.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InstanceKey {
    pub d: u8,
    pub k: u8,
    pub seq: Vec<usize>,
}

impl InstanceKey {
    pub fn of(layout: &SectionLayout) -> Self {
        InstanceKey {
            d: layout.d(),
            k: layout.k(),
            seq: layout.seq().to_vec(),
        }
    }

    pub fn layout(&self) -> Result<SectionLayout> {
        SectionLayout::new(self.d, self.k, self.seq.clone())
    }
}

impl std::fmt::Display for InstanceKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let seq: Vec<String> = self.seq.iter().map(|n| n.to_string()).collect();
        write!(f, "({}) over d={} k={}", seq.join(","), self.d, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// A coloring, as color digits in rank order, with no monochromatic section word.
    EnshWitness {
        #[serde(flatten)]
        key: InstanceKey,
        coloring: String,
    },
    EnshRefutation {
        #[serde(flatten)]
        key: InstanceKey,
        evidence: Evidence,
    },
    /// A monochromatic section word. The coloring is given either as a digit
    /// table or as a builtin oracle spec.
    ShCert {
        #[serde(flatten)]
        key: InstanceKey,
        s: usize,
        #[serde(with = "word_text")]
        word: VariableWord,
        color: u8,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coloring: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        oracle: Option<String>,
    },
    /// A monochromatic `n`-variable word of length `len` for a coloring of `d^len`.
    HjWitness {
        d: u8,
        k: u8,
        n: usize,
        len: usize,
        #[serde(with = "word_text")]
        word: VariableWord,
        color: u8,
        coloring: String,
    },
    AdversaryReport {
        d: u8,
        k: u8,
        report: AdversaryReport,
    },
}

/// What re-verification established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    /// An UNSAT claim whose CNF was rebuilt and matched; the solver is trusted.
    TrustedSolver,
    Failed {
        reason: String,
    },
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        !matches!(self, Verdict::Failed { .. })
    }

    fn check(ok: bool, reason: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Failed { reason: reason() }
        }
    }
}

/// Witness or no witness, for certificates that settle an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionKind {
    Witness,
    NoWitness,
}

impl Certificate {
    pub fn witness(layout: &SectionLayout, table: &TableColoring) -> Self {
        Certificate::EnshWitness {
            key: InstanceKey::of(layout),
            coloring: table.digit_string(),
        }
    }

    pub fn from_decision(layout: &SectionLayout, decision: &EnshDecision) -> Self {
        match decision {
            EnshDecision::Witness(t) => Self::witness(layout, t),
            EnshDecision::NoWitness(e) => Certificate::EnshRefutation {
                key: InstanceKey::of(layout),
                evidence: e.clone(),
            },
        }
    }

    pub fn sh_cert(layout: &SectionLayout, cert: &ShCertificate, f: &Coloring) -> Self {
        Certificate::ShCert {
            key: InstanceKey::of(layout),
            s: cert.s,
            word: cert.word.clone(),
            color: cert.color,
            coloring: f.as_table().map(|t| t.digit_string()),
            oracle: None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::EnshWitness { .. } => "ensh-witness",
            Certificate::EnshRefutation { .. } => "ensh-refutation",
            Certificate::ShCert { .. } => "sh-cert",
            Certificate::HjWitness { .. } => "hj-witness",
            Certificate::AdversaryReport { .. } => "adversary-report",
        }
    }

    pub fn key(&self) -> InstanceKey {
        match self {
            Certificate::EnshWitness { key, .. }
            | Certificate::EnshRefutation { key, .. }
            | Certificate::ShCert { key, .. } => key.clone(),
            Certificate::HjWitness { d, k, n, len, .. } => InstanceKey {
                d: *d,
                k: *k,
                seq: vec![*n; len / (*n).max(1)],
            },
            Certificate::AdversaryReport { d, k, report } => InstanceKey {
                d: *d,
                k: *k,
                seq: report.prefix.clone(),
            },
        }
    }

    pub fn decision(&self) -> Option<DecisionKind> {
        match self {
            Certificate::EnshWitness { .. } => Some(DecisionKind::Witness),
            Certificate::EnshRefutation { .. } => Some(DecisionKind::NoWitness),
            _ => None,
        }
    }

    /// Re-checks the certificate from its own fields.
    pub fn verify(&self) -> Result<Verdict> {
        Ok(match self {
            Certificate::EnshWitness { key, coloring } => {
                let layout = key.layout()?;
                let f = TableColoring::from_digit_string(key.d, layout.total(), key.k, coloring)?;
                let cert = find_sh_certificate(&f.into(), &layout)?;
                Verdict::check(cert.is_none(), || format!("homogeneous: {}", cert.unwrap()))
            }
            Certificate::EnshRefutation { key, evidence } => {
                let layout = key.layout()?;
                match evidence {
                    Evidence::Exhaustion(_) => {
                        let again = decide_ensh_brute(&layout)?;
                        Verdict::check(!again.is_witness(), || "exhaustion found a witness".into())
                    }
                    Evidence::Unsat(u) => {
                        let cnf = encode_cnf(&layout)?;
                        if cnf.sha256() == u.cnf_sha256
                            && cnf.num_vars == u.variables
                            && cnf.clauses.len() == u.clauses
                        {
                            Verdict::TrustedSolver
                        } else {
                            Verdict::Failed {
                                reason: "CNF fingerprint does not match the instance".into(),
                            }
                        }
                    }
                }
            }
            Certificate::ShCert {
                key,
                s,
                word,
                color,
                coloring,
                oracle,
            } => {
                let layout = key.layout()?;
                let f = match (coloring, oracle) {
                    (Some(digits), None) => {
                        TableColoring::from_digit_string(key.d, layout.total(), key.k, digits)?
                            .into()
                    }
                    (None, Some(spec)) => spec.parse::<OracleSpec>()?.build(layout.total())?,
                    _ => {
                        return Err(EnshError::Malformed(
                            "sh-cert needs exactly one of `coloring` and `oracle`".into(),
                        ))
                    }
                };
                let cert = ShCertificate {
                    s: *s,
                    word: word.clone(),
                    color: *color,
                };
                Verdict::check(verify_sh_certificate(&f, &layout, &cert), || {
                    format!("{cert} is not a monochromatic section word")
                })
            }
            Certificate::HjWitness {
                d,
                k,
                n,
                len,
                word,
                color,
                coloring,
            } => {
                let f = TableColoring::from_digit_string(*d, *len, *k, coloring)?;
                let w = VariableWord::loose(*d, word.symbols().to_vec())?;
                let shape = w.len() == *len && w.nvars() == *n && w.is_normalized();
                let ranks = WordRanker::new(&w, *d)?.image_ranks();
                let mono = ranks.iter().all(|&r| f.at_rank(r) == *color);
                Verdict::check(shape && mono, || {
                    format!("`{w}` is not monochromatic in color {color}")
                })
            }
            Certificate::AdversaryReport { d, k, report } => {
                let prefix = SectionLayout::new(*d, *k, report.prefix.clone())?;
                let specs = report
                    .strategies
                    .iter()
                    .map(|s| s.parse::<StrategySpec>())
                    .collect::<Result<Vec<_>>>()?;
                let rerun = duel(&prefix, &specs, report.horizon, report.slash)?;
                // words inside the report come back without their alphabet, so compare the JSON forms
                let same = serde_json::to_value(&rerun).ok() == serde_json::to_value(report).ok();
                if !same {
                    Verdict::Failed {
                        reason: "re-running the duel gives a different report".into(),
                    }
                } else {
                    Verdict::check(report.passed(), || {
                        "the report records a failed check".into()
                    })
                }
            }
        })
    }
}

/// A certificate with schema version and provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: u32,
    pub tool: String,
    /// Seconds since the Unix epoch.
    pub created: u64,
    #[serde(flatten)]
    pub certificate: Certificate,
}

impl Envelope {
    pub fn new(certificate: Certificate) -> Self {
        let created = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Envelope {
            schema: SCHEMA_VERSION,
            tool: format!("ensh {}", env!("CARGO_PKG_VERSION")),
            created,
            certificate,
        }
    }
}

pub fn serialize(env: &Envelope) -> String {
    serde_json::to_string(env).expect("certificates serialize")
}

/// Parses one certificate; errors carry the line and column.
pub fn parse(text: &str) -> Result<Envelope> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| {
        EnshError::Malformed(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    if env.schema != SCHEMA_VERSION {
        return Err(EnshError::Malformed(format!(
            "unsupported schema version {}",
            env.schema
        )));
    }
    let mut env = env;
    match &mut env.certificate {
        Certificate::ShCert { key, word, .. } => {
            *word = VariableWord::loose(key.d, word.symbols().to_vec())?
        }
        Certificate::HjWitness { d, word, .. } => {
            *word = VariableWord::loose(*d, word.symbols().to_vec())?
        }
        _ => {}
    }
    Ok(env)
}
