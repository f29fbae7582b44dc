//! Append-only JSONL catalog of verified certificates.
//!
//! Every line is one [`CatalogEntry`]. Writes go through a single writer lock and
//! are re-verified in-process first; reads parse a fresh snapshot of the file.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::cert::{Certificate, DecisionKind, Envelope, InstanceKey, Verdict};
use crate::coloring::TableColoring;
use crate::error::{EnshError, Result};
use crate::transform::transport_subsequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub key: InstanceKey,
    /// How the certificate was obtained, e.g. "brute" or
    /// "transport_subsequence from (2,2,2)".
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trust: Option<String>,
    pub certificate: Envelope,
}

impl CatalogEntry {
    pub fn new(certificate: Envelope, note: impl Into<String>) -> Self {
        CatalogEntry {
            key: certificate.certificate.key(),
            note: note.into(),
            trust: None,
            certificate,
        }
    }
}

/// A query answer: either a stored entry or one derived from a stored entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub derived: bool,
    pub entry: CatalogEntry,
}

pub struct Catalog {
    path: PathBuf,
    writer: Mutex<()>,
}

/// Leftmost increasing indices of `hat` whose values spell `seq`.
fn embedding(seq: &[usize], hat: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(seq.len());
    let mut at = 0;
    for &n in seq {
        let i = (at..hat.len()).find(|&i| hat[i] == n)?;
        out.push(i);
        at = i + 1;
    }
    Some(out)
}

fn format_seq(seq: &[usize]) -> String {
    let parts: Vec<String> = seq.iter().map(|n| n.to_string()).collect();
    format!("({})", parts.join(","))
}

impl Catalog {
    pub fn open(path: impl AsRef<Path>) -> Self {
        Catalog {
            path: path.as_ref().to_path_buf(),
            writer: Mutex::new(()),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All entries currently on disk. A missing file is an empty catalog.
    pub fn entries(&self) -> Result<Vec<CatalogEntry>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CatalogEntry = serde_json::from_str(&line).map_err(|e| {
                EnshError::Malformed(format!("{} line {}: {e}", self.path.display(), i + 1))
            })?;
            out.push(entry);
        }
        Ok(out)
    }

    /// Refuses a decision that contradicts a stored one for the same instance,
    /// verifies the certificate, then appends one line.
    pub fn append(&self, mut entry: CatalogEntry) -> Result<Verdict> {
        entry.key = entry.certificate.certificate.key();
        let _guard = self
            .writer
            .lock()
            .map_err(|_| EnshError::Internal("catalog writer poisoned".into()))?;
        if let Some(kind) = entry.certificate.certificate.decision() {
            for old in self.entries()? {
                if old.key != entry.key {
                    continue;
                }
                if let Some(other) = old.certificate.certificate.decision() {
                    if other != kind {
                        return Err(EnshError::Consistency(format!(
                            "{} is already cataloged as {other:?}, refusing {kind:?}",
                            entry.key
                        )));
                    }
                }
            }
        }
        let verdict = entry.certificate.certificate.verify()?;
        if let Verdict::Failed { reason } = &verdict {
            return Err(EnshError::Verification(format!("not cataloged: {reason}")));
        }
        if verdict == Verdict::TrustedSolver {
            entry.trust = Some("trusted-solver".into());
        }
        let mut line =
            serde_json::to_string(&entry).map_err(|e| EnshError::Internal(e.to_string()))?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.write_all(line.as_bytes())?;
        file.sync_data()?;
        Ok(verdict)
    }

    /// Entries stored under exactly this key.
    pub fn query(&self, key: &InstanceKey) -> Result<Vec<CatalogEntry>> {
        Ok(self
            .entries()?
            .into_iter()
            .filter(|e| &e.key == key)
            .collect())
    }

    /// Stored entries for `key`, plus decisions implied by other instances over
    /// the same alphabet: a witness for a sequence containing `key.seq` as a
    /// subsequence transports down, and a refutation for a subsequence of
    /// `key.seq` lifts up. Derived witnesses are verified before being returned.
    pub fn closure_query(&self, key: &InstanceKey) -> Result<Vec<Hit>> {
        let mut hits = Vec::new();
        for entry in self.entries()? {
            if entry.key == *key {
                hits.push(Hit {
                    derived: false,
                    entry,
                });
                continue;
            }
            if entry.key.d != key.d || entry.key.k != key.k {
                continue;
            }
            match (
                &entry.certificate.certificate,
                entry.certificate.certificate.decision(),
            ) {
                (Certificate::EnshWitness { key: big, coloring }, Some(DecisionKind::Witness)) => {
                    let Some(indices) = embedding(&key.seq, &big.seq) else {
                        continue;
                    };
                    let lhat = big.layout()?;
                    let fhat =
                        TableColoring::from_digit_string(big.d, lhat.total(), big.k, coloring)?;
                    let (small, g) = transport_subsequence(&fhat.into(), &lhat, &indices)?;
                    let table = g.to_table()?;
                    let cert = Certificate::witness(&small, &table);
                    if !cert.verify()?.accepted() {
                        return Err(EnshError::Internal(format!(
                            "transported witness for {key} fails"
                        )));
                    }
                    let note = format!(
                        "transport_subsequence from {} at blocks {indices:?}",
                        format_seq(&big.seq)
                    );
                    hits.push(Hit {
                        derived: true,
                        entry: CatalogEntry::new(Envelope::new(cert), note),
                    });
                }
                (refutation, Some(DecisionKind::NoWitness)) => {
                    if embedding(&entry.key.seq, &key.seq).is_none() {
                        continue;
                    }
                    let note = format!("contains {} as a subsequence", format_seq(&entry.key.seq));
                    let mut derived = CatalogEntry::new(Envelope::new(refutation.clone()), note);
                    derived.key = key.clone();
                    derived.trust = entry.trust.clone();
                    hits.push(Hit {
                        derived: true,
                        entry: derived,
                    });
                }
                _ => {}
            }
        }
        Ok(hits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leftmost_embedding() {
        assert_eq!(embedding(&[2, 2], &[2, 1, 2, 2]), Some(vec![0, 2]));
        assert_eq!(embedding(&[3], &[2, 2]), None);
        assert_eq!(embedding(&[], &[1]), Some(vec![]));
    }
}
