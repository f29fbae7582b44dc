//! Deciding whether a layout admits a witness coloring: closed-form witnesses,
//! exhaustive search over bit-packed tables, and a CNF encoding for external
//! SAT solvers.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::checker::{find_sh_certificate, WordRanker};
use crate::coloring::{Coloring, TableColoring};
use crate::error::{EnshError, Result};
use crate::solver::{solve_dimacs, SatOutcome, SolverConfig};
use crate::word::{count_section_words, enumerate_section_words, space_size, SectionLayout};

/// Brute force enumerates at most this many colorings.
pub const BRUTE_LIMIT: u64 = 1 << 16;

/// CNF generation refuses instances with more clauses than this.
pub const CLAUSE_LIMIT: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionReport {
    pub colorings_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsatReport {
    pub cnf_sha256: String,
    pub solver: String,
    pub variables: usize,
    pub clauses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Evidence {
    Exhaustion(ExhaustionReport),
    Unsat(UnsatReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnshDecision {
    Witness(TableColoring),
    NoWitness(Evidence),
}

impl EnshDecision {
    pub fn is_witness(&self) -> bool {
        matches!(self, EnshDecision::Witness(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Brute,
    Sat,
    Auto,
}

fn binary(layout: &SectionLayout) -> bool {
    layout.d() == 2 && layout.k() == 2
}

/// The closed-form witnesses: parity of the first three digits for `(2,2)`,
/// `I(a0+a1>0)+a2+a3+a4 mod 2` for `(2,2,2)` and `a(0)` for a single block.
pub fn known_witness(layout: &SectionLayout) -> Option<Coloring> {
    if !binary(layout) {
        return None;
    }
    let n = layout.total();
    let table = match layout.seq() {
        [2, 2] => Coloring::table(2, n, 2, |p| (p.get(0) + p.get(1) + p.get(2)) % 2),
        [2, 2, 2] => Coloring::table(2, n, 2, |p| {
            (((p.get(0) + p.get(1)) > 0) as u8 + p.get(2) + p.get(3) + p.get(4)) % 2
        }),
        [_] => Coloring::table(2, n, 2, |p| p.get(0)),
        _ => return None,
    };
    table.ok()
}

/// Rank sets of all section words, as bitmasks over `d^N <= 64` points.
fn word_masks(layout: &SectionLayout) -> Result<Vec<u64>> {
    let mut masks = Vec::new();
    for s in 0..layout.num_sections() {
        for v in enumerate_section_words(layout, s) {
            let m = WordRanker::new(&v, layout.d())?
                .image_ranks()
                .into_iter()
                .fold(0u64, |m, r| m | (1u64 << r));
            masks.push(m);
        }
    }
    masks.sort_unstable();
    masks.dedup();
    Ok(masks)
}

/// Exhaustive search. Tables are enumerated with the color of rank 0 as the most
/// significant digit, so the witness returned is the lexicographically least.
pub fn decide_ensh_brute(layout: &SectionLayout) -> Result<EnshDecision> {
    let size = space_size(layout.d(), layout.total())?;
    let k = layout.k() as u64;
    let total = k
        .checked_pow(size as u32)
        .filter(|&t| size <= 64 && t <= BRUTE_LIMIT)
        .ok_or_else(|| EnshError::TooLarge {
            engine: "brute",
            detail: format!(
                "{}^({}^{}) colorings; use the sat engine",
                k,
                layout.d(),
                layout.total()
            ),
        })?;
    let table_of = |i: u64| -> Vec<u8> {
        let mut values = vec![0u8; size as usize];
        let mut x = i;
        for r in (0..size as usize).rev() {
            values[r] = (x % k) as u8;
            x /= k;
        }
        values
    };
    let found = if k == 2 {
        let masks = word_masks(layout)?;
        (0..total).into_par_iter().find_first(|&i| {
            // rank r carries bit (size-1-r) of i
            let c = (0..size).fold(0u64, |c, r| c | (((i >> (size - 1 - r)) & 1) << r));
            masks.iter().all(|&w| {
                let ones = c & w;
                ones != 0 && ones != w
            })
        })
    } else {
        (0..total).into_par_iter().find_first(|&i| {
            TableColoring::new(layout.d(), layout.total(), layout.k(), table_of(i))
                .and_then(|t| find_sh_certificate(&t.into(), layout))
                .map(|c| c.is_none())
                .unwrap_or(false)
        })
    };
    match found {
        Some(i) => {
            let t = TableColoring::new(layout.d(), layout.total(), layout.k(), table_of(i))?;
            if find_sh_certificate(&t.clone().into(), layout)?.is_some() {
                return Err(EnshError::Internal(
                    "brute witness failed re-verification".into(),
                ));
            }
            Ok(EnshDecision::Witness(t))
        }
        None => Ok(EnshDecision::NoWitness(Evidence::Exhaustion(
            ExhaustionReport {
                colorings_checked: total,
            },
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
    pub notes: Vec<String>,
}

impl CnfInstance {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            let _ = writeln!(out, "c {note}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }

    /// SHA-256 over the clause body (header and clauses, comments excluded).
    pub fn sha256(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            let line: Vec<String> = clause.iter().map(|l| l.to_string()).collect();
            h.update(line.join(" "));
            h.update(" 0\n");
        }
        hex::encode(h.finalize())
    }
}

/// Variable of "point of rank `r` gets color `j`".
fn cnf_var(rank: u64, color: u8, k: u8) -> i64 {
    if k == 2 {
        rank as i64 + 1
    } else {
        (rank * k as u64 + color as u64) as i64 + 1
    }
}

/// Satisfiable iff the layout admits a witness coloring. For `k = 2` variable
/// `rank+1` true means color 1; for larger `k` there is one variable per
/// (point, color) with exactly-one constraints.
pub fn encode_cnf(layout: &SectionLayout) -> Result<CnfInstance> {
    let d = layout.d();
    let k = layout.k();
    let size = space_size(d, layout.total())?;
    let mut words: u128 = 0;
    for s in 0..layout.num_sections() {
        words += count_section_words(layout, s)?;
    }
    let per_word = if k == 2 { 2 } else { k as u128 };
    if words * per_word > CLAUSE_LIMIT {
        return Err(EnshError::TooLarge {
            engine: "cnf",
            detail: format!("{} clauses", words * per_word),
        });
    }
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    if k != 2 {
        for r in 0..size {
            clauses.push((0..k).map(|j| cnf_var(r, j, k)).collect());
            for a in 0..k {
                for b in a + 1..k {
                    clauses.push(vec![-cnf_var(r, a, k), -cnf_var(r, b, k)]);
                }
            }
        }
    }
    let sections: Vec<Result<Vec<Vec<i64>>>> = (0..layout.num_sections())
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for v in enumerate_section_words(layout, s) {
                let ranks = WordRanker::new(&v, d)?.image_ranks();
                if k == 2 {
                    out.push(ranks.iter().map(|&r| cnf_var(r, 1, 2)).collect());
                    out.push(ranks.iter().map(|&r| -cnf_var(r, 1, 2)).collect());
                } else {
                    for j in 0..k {
                        out.push(ranks.iter().map(|&r| -cnf_var(r, j, k)).collect());
                    }
                }
            }
            Ok(out)
        })
        .collect();
    for part in sections {
        clauses.extend(part?);
    }
    let num_vars = if k == 2 {
        size as usize
    } else {
        size as usize * k as usize
    };
    let notes = vec![
        format!("ensh instance {layout}"),
        format!("{words} section words"),
    ];
    Ok(CnfInstance {
        num_vars,
        clauses,
        notes,
    })
}

/// Reads a model back into a table coloring and re-checks it.
pub fn decode_model(layout: &SectionLayout, model: &[i64]) -> Result<TableColoring> {
    let d = layout.d();
    let k = layout.k();
    let size = space_size(d, layout.total())?;
    let truth = |var: i64| -> Result<bool> {
        let l = *model
            .get(var as usize - 1)
            .ok_or_else(|| EnshError::Solver(format!("model misses variable {var}")))?;
        if l.abs() != var {
            return Err(EnshError::Solver(format!(
                "model entry {l} at variable {var}"
            )));
        }
        Ok(l > 0)
    };
    let mut values = Vec::with_capacity(size as usize);
    for r in 0..size {
        let c = if k == 2 {
            truth(cnf_var(r, 1, 2))? as u8
        } else {
            let set: Vec<u8> = (0..k)
                .filter(|&j| truth(cnf_var(r, j, k)).unwrap_or(false))
                .collect();
            match set.as_slice() {
                [j] => *j,
                _ => return Err(EnshError::Solver(format!("point {r} has colors {set:?}"))),
            }
        };
        values.push(c);
    }
    let t = TableColoring::new(d, layout.total(), k, values)?;
    if let Some(cert) = find_sh_certificate(&t.clone().into(), layout)? {
        return Err(EnshError::Solver(format!(
            "decoded model is homogeneous: {cert}"
        )));
    }
    Ok(t)
}

pub fn decide_ensh_sat(layout: &SectionLayout, solver: &SolverConfig) -> Result<EnshDecision> {
    let cnf = encode_cnf(layout)?;
    let run = solve_dimacs(&cnf.to_dimacs(), cnf.num_vars, solver)?;
    match run.outcome {
        SatOutcome::Sat(model) => Ok(EnshDecision::Witness(decode_model(layout, &model)?)),
        SatOutcome::Unsat => Ok(EnshDecision::NoWitness(Evidence::Unsat(UnsatReport {
            cnf_sha256: cnf.sha256(),
            solver: run.solver_id,
            variables: cnf.num_vars,
            clauses: cnf.clauses.len(),
        }))),
    }
}

/// `Auto` runs brute force when the instance fits and SAT otherwise.
pub fn decide_ensh(
    layout: &SectionLayout,
    engine: Engine,
    solver: Option<&SolverConfig>,
) -> Result<EnshDecision> {
    let need_solver = || {
        solver
            .ok_or_else(|| EnshError::Solver("sat engine selected but no solver configured".into()))
    };
    match engine {
        Engine::Brute => decide_ensh_brute(layout),
        Engine::Sat => decide_ensh_sat(layout, need_solver()?),
        Engine::Auto => match decide_ensh_brute(layout) {
            Err(EnshError::TooLarge { .. }) => decide_ensh_sat(layout, need_solver()?),
            other => other,
        },
    }
}
